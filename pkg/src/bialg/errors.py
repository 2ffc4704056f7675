"""Exception hierarchy shared by all modules."""


class BialgError(Exception):
    """Base class for every error raised by this package."""


class ScalarParseError(BialgError, ValueError):
    pass


class DimensionMismatch(BialgError, ValueError):
    pass


class AlgebraMismatch(BialgError, ValueError):
    pass


class AntisymmetryViolation(BialgError, ValueError):
    def __init__(self, i, j, k, value=None):
        self.i, self.j, self.k = i, j, k
        super().__init__(f"c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]")


class JacobiViolation(BialgError, ValueError):
    def __init__(self, i, j, l, residual):
        self.i, self.j, self.l = i, j, l
        self.residual = residual
        super().__init__(f"Jacobi identity fails on basis triple ({i}, {j}, {l}): residual {residual}")


class GradingViolation(BialgError, ValueError):
    pass


class NotARepresentation(BialgError, ValueError):
    def __init__(self, x, y, residual):
        self.x, self.y = x, y
        self.residual = residual
        super().__init__(f"rep([X{x}, X{y}]) != [rep(X{x}), rep(X{y})]")


class UnsupportedDegree(BialgError, ValueError):
    pass


class DegreeOverflow(BialgError, ValueError):
    pass


class DegreeUnderflow(BialgError, ValueError):
    pass


class NotGraded(BialgError, ValueError):
    pass


class UnsupportedModule(BialgError, ValueError):
    pass


class NotTriangular(BialgError, ValueError):
    pass


class BadSignature(BialgError, ValueError):
    pass


class WrongDimension(BialgError, ValueError):
    pass


class NotTranslation(BialgError, ValueError):
    pass


class NotMixedBlock(BialgError, ValueError):
    pass


class InvalidMove(BialgError, ValueError):
    pass


class WrongC(BialgError, ValueError):
    pass


class UnknownEntry(BialgError, KeyError):
    pass


class MissingParameter(BialgError, KeyError):
    pass


class ParameterizedInput(BialgError, ValueError):
    """Raised where an exact rational input is required but a polynomial was given."""


class CatalogParseError(BialgError, ValueError):
    """A catalog document could not be read; the message names the file and location."""


class UnknownVariant(BialgError, ValueError):
    pass
