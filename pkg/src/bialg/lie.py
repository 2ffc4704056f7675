"""Finite-dimensional Lie algebras given by rational structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from .errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    GradingViolation,
    JacobiViolation,
    NotARepresentation,
    ParameterizedInput,
    UnsupportedDegree,
)
from .exterior import MultiVector, basis_index, basis_tuples, canonical
from .linalg import solve
from .scalar import Poly, Scalar, format_scalar, parse_scalar, simplify

Matrix = list  # list of rows of scalars


@dataclass(frozen=True)
class Grading:
    """Split g = V + h into translation indices ``V`` and homogeneous indices ``h``."""

    V: tuple
    h: tuple

    @cached_property
    def V_set(self) -> frozenset:
        return frozenset(self.V)

    @cached_property
    def h_set(self) -> frozenset:
        return frozenset(self.h)


class LieAlgebra:
    """Basis labels plus a sparse bracket table ``[e_i, e_j] = sum_k c_ijk e_k``.

    Build through :func:`build_lie_algebra` (validating) or the constructors
    below; the constructor itself does not check the axioms.
    """

    def __init__(self, labels: Sequence[str], table: Mapping, grading: Grading | None = None):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        full: dict = {}
        for (i, j), coeffs in table.items():
            if i == j:
                continue
            clean = {k: Fraction(v) for k, v in coeffs.items() if v != 0}
            if clean:
                full[(i, j)] = clean
                full[(j, i)] = {k: -v for k, v in clean.items()}
        self._table = full
        self.grading = grading
        self._index = {lbl: i for i, lbl in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def bracket_basis(self, i: int, j: int) -> dict:
        """``[e_i, e_j]`` as a sparse ``{k: coefficient}`` map (do not mutate)."""
        return self._table.get((i, j), {})

    def structure_constants(self) -> list:
        n = self.dim
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), coeffs in self._table.items():
            for k, v in coeffs.items():
                c[i][j][k] = v
        return c

    def element(self, label_or_index) -> MultiVector:
        i = label_or_index if isinstance(label_or_index, int) else self.index(label_or_index)
        return MultiVector.basis(self, i)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.labels == other.labels and self._table == other._table
                and self.grading == other.grading)

    def __hash__(self):
        return hash((self.labels, len(self._table)))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"


# ---------------------------------------------------------------------------
# construction and validation

def _jacobi_residual(g: LieAlgebra, i: int, j: int, l: int) -> dict:
    res: dict = {}

    def add_bracket_of(vec: dict, m: int, sign: int):
        for a, ca in vec.items():
            for k, ck in g.bracket_basis(a, m).items():
                res[k] = res.get(k, 0) + sign * ca * ck

    add_bracket_of(g.bracket_basis(i, j), l, 1)
    add_bracket_of(g.bracket_basis(j, l), i, 1)
    add_bracket_of(g.bracket_basis(l, i), j, 1)
    return {k: v for k, v in res.items() if v != 0}


def _check_grading(g: LieAlgebra, grading: Grading):
    V, h = set(grading.V), set(grading.h)
    if V & h or V | h != set(range(g.dim)):
        raise GradingViolation("grading must partition the basis indices")
    for (i, j), coeffs in g._table.items():
        ks = set(coeffs)
        if i in V and j in V and ks:
            raise GradingViolation(f"[{g.labels[i]}, {g.labels[j]}] must vanish (V abelian)")
        if i in h and j in h and not ks <= h:
            raise GradingViolation(f"[{g.labels[i]}, {g.labels[j]}] leaves h")
        if (i in h) != (j in h) and not ks <= V:
            raise GradingViolation(f"[{g.labels[i]}, {g.labels[j]}] leaves V")


def validate(g: LieAlgebra) -> LieAlgebra:
    for i, j, l in combinations(range(g.dim), 3):
        res = _jacobi_residual(g, i, j, l)
        if res:
            raise JacobiViolation(i, j, l, res)
    if g.grading is not None:
        _check_grading(g, g.grading)
    return g


def build_lie_algebra(labels: Sequence[str], structure_constants, grading=None) -> LieAlgebra:
    """Validated algebra from a full tensor ``c[i][j][k]`` of rational scalars.

    ``grading`` is ``None``, a :class:`Grading`, or a mapping with keys "V", "h".
    """
    n = len(labels)
    if len(structure_constants) != n or any(
        len(row) != n or any(len(col) != n for col in row) for row in structure_constants
    ):
        raise DimensionMismatch(f"structure constants must have shape {n}x{n}x{n}")
    table = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                cij = simplify(structure_constants[i][j][k])
                cji = simplify(structure_constants[j][i][k])
                if isinstance(cij, Poly):
                    raise ParameterizedInput("structure constants must be parameter-free")
                if cij != -cji:
                    raise AntisymmetryViolation(i, j, k)
            if i < j:
                table[(i, j)] = {k: structure_constants[i][j][k] for k in range(n)}
    if grading is not None and not isinstance(grading, Grading):
        grading = Grading(tuple(grading["V"]), tuple(grading["h"]))
    return validate(LieAlgebra(labels, table, grading))


def abelian(n: int, labels=None, graded: bool = True) -> LieAlgebra:
    labels = labels or [f"e{i}" for i in range(n)]
    grading = Grading(tuple(range(n)), ()) if graded else None
    return LieAlgebra(labels, {}, grading)


def matrix_lie_algebra(mats: Sequence[Matrix], labels: Sequence[str]) -> LieAlgebra:
    """Lie algebra spanned by linearly independent square matrices, bracket = commutator."""
    flat = [[x for row in m for x in row] for m in mats]
    size = len(flat[0])
    n = len(mats)
    # columns of the linear system are the matrices
    eqs = [{a: flat[a][p] for a in range(n) if flat[a][p] != 0} for p in range(size)]
    table = {}
    for a in range(n):
        for b in range(a + 1, n):
            com = matmul(mats[a], mats[b])
            other = matmul(mats[b], mats[a])
            target = [x - y for r1, r2 in zip(com, other) for x, y in zip(r1, r2)]
            coords = solve(eqs, target, n)
            if coords is None:
                raise NotARepresentation(a, b, "commutator leaves the span")
            table[(a, b)] = {k: v for k, v in enumerate(coords) if v != 0}
    return validate(LieAlgebra(labels, table))


def semidirect_product(rep: Sequence[Matrix], h: LieAlgebra, dimV: int,
                       V_labels: Sequence[str] | None = None) -> LieAlgebra:
    """V x| h with [X, v] = rep(X) v and [V, V] = 0; basis order V then h."""
    if len(rep) != h.dim:
        raise DimensionMismatch("need one matrix per basis element of h")
    for m in rep:
        if len(m) != dimV or any(len(row) != dimV for row in m):
            raise DimensionMismatch("representation matrices must be dimV x dimV")
    # homomorphism check
    for a in range(h.dim):
        for b in range(a + 1, h.dim):
            lhs = _zeros(dimV)
            for k, c in h.bracket_basis(a, b).items():
                lhs = _madd(lhs, rep[k], c)
            rhs = _madd(matmul(rep[a], rep[b]), matmul(rep[b], rep[a]), -1)
            resid = _madd(lhs, rhs, -1)
            if any(x != 0 for row in resid for x in row):
                raise NotARepresentation(a, b, resid)
    V_labels = list(V_labels or [f"v{i}" for i in range(dimV)])
    labels = V_labels + list(h.labels)
    table: dict = {}
    for a in range(h.dim):
        for b in range(a + 1, h.dim):
            bb = h.bracket_basis(a, b)
            if bb:
                table[(dimV + a, dimV + b)] = {dimV + k: v for k, v in bb.items()}
        for i in range(dimV):
            col = {j: rep[a][j][i] for j in range(dimV) if rep[a][j][i] != 0}
            if col:
                table[(dimV + a, i)] = col
    grading = Grading(tuple(range(dimV)), tuple(range(dimV, dimV + h.dim)))
    return validate(LieAlgebra(labels, table, grading))


# ---------------------------------------------------------------------------
# brackets and actions

def _coords(X: MultiVector, degree: int = 1) -> dict:
    if X.degree != degree:
        raise DimensionMismatch(f"expected a degree-{degree} element, got degree {X.degree}")
    return {t[0]: c for t, c in X.items()}


def bracket(g: LieAlgebra, X: MultiVector, Y: MultiVector) -> MultiVector:
    if X.algebra is not g and X.algebra != g or Y.algebra is not g and Y.algebra != g:
        raise DimensionMismatch("elements not in this algebra")
    xs, ys = _coords(X), _coords(Y)
    out: dict = {}
    for i, a in xs.items():
        for j, b in ys.items():
            for k, c in g.bracket_basis(i, j).items():
                out[(k,)] = simplify(out.get((k,), 0) + a * b * c)
    return MultiVector(g, 1, out)


def act(X: MultiVector, u: MultiVector) -> MultiVector:
    """Adjoint action of ``X`` on a multivector, as a derivation of the wedge product."""
    g = X.algebra
    u._check(X)
    xs = _coords(X)
    out: dict = {}
    for t, c in u.items():
        for pos, i in enumerate(t):
            for a, xa in xs.items():
                for k, ck in g.bracket_basis(a, i).items():
                    sign, key = canonical(t[:pos] + (k,) + t[pos + 1:])
                    if sign == 0:
                        continue
                    s = simplify(out.get(key, 0) + sign * xa * ck * c)
                    if s != 0:
                        out[key] = s
                    else:
                        out.pop(key, None)
    return MultiVector._raw(g, u.degree, out)


def action_matrix(g: LieAlgebra, X: MultiVector, k: int) -> Matrix:
    """Matrix of ad(X) on Lambda^k g in the canonical basis (columns = images)."""
    if k not in (1, 2, 3):
        raise UnsupportedDegree(f"degree {k} not in 1..3")
    tuples = basis_tuples(g.dim, k)
    index = basis_index(g.dim, k)
    n = len(tuples)
    M = [[Fraction(0)] * n for _ in range(n)]
    for col, t in enumerate(tuples):
        img = act(X, MultiVector._raw(g, k, {t: Fraction(1)}))
        for key, c in img.items():
            M[index[key]][col] = c
    return M


def adjoint_matrix(g: LieAlgebra, X: MultiVector) -> Matrix:
    return action_matrix(g, X, 1)


# ---------------------------------------------------------------------------
# small dense matrix helpers (exact)

def _zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return [[simplify(sum((a * b for a, b in zip(row, col) if a != 0 and b != 0), Fraction(0)))
             for col in cols] for row in A]


def matvec(A: Matrix, v) -> list:
    return [simplify(sum((a * b for a, b in zip(row, v) if a != 0 and b != 0), Fraction(0)))
            for row in A]


def _madd(A: Matrix, B: Matrix, s=1) -> Matrix:
    return [[simplify(a + s * b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return _madd(matmul(A, B), matmul(B, A), -1)


def is_zero_matrix(A: Matrix) -> bool:
    return all(x == 0 for row in A for x in row)


# ---------------------------------------------------------------------------
# metric

def _inertia(M: Matrix) -> tuple[int, int]:
    """(positive, negative) counts of a symmetric rational matrix by congruence."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    pos = neg = 0
    rest = list(range(n))
    while rest:
        piv = next((i for i in rest if A[i][i] != 0), None)
        if piv is None:
            # no diagonal pivot: combine two coordinates to create one
            pair = next(((i, j) for i in rest for j in rest if i < j and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            continue
        d = A[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest.remove(piv)
        for i in rest:
            f = A[i][piv] / d
            if f:
                for k in range(n):
                    A[i][k] -= f * A[piv][k]
                for k in range(n):
                    A[k][i] -= f * A[k][piv]
    return pos, neg


@dataclass(frozen=True)
class Metric:
    """Nondegenerate symmetric bilinear form g_jk of signature (p, q)."""

    p: int
    q: int
    matrix: tuple
    inverse: tuple = field(default=())

    @classmethod
    def diagonal(cls, p: int, q: int) -> "Metric":
        n = p + q
        g = tuple(tuple(Fraction(1 if i == j and i < p else -1 if i == j else 0)
                        for j in range(n)) for i in range(n))
        return cls.from_matrix(g, (p, q))

    @classmethod
    def from_matrix(cls, matrix, signature: tuple[int, int]) -> "Metric":
        M = [[Fraction(x) for x in row] for row in matrix]
        n = len(M)
        if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
            raise ValueError("metric must be symmetric")
        aug = [{**{j: M[i][j] for j in range(n) if M[i][j]}, n + i: Fraction(1)} for i in range(n)]
        from .linalg import rref
        red = rref(aug)
        if len(red) != n or any(min(r) != i for i, r in enumerate(red)):
            raise ValueError("metric must be invertible")
        inv = tuple(tuple(red[i].get(n + j, Fraction(0)) for j in range(n)) for i in range(n))
        if _inertia(M) != tuple(signature):
            raise ValueError(f"metric does not have signature {signature}")
        return cls(signature[0], signature[1], tuple(tuple(r) for r in M), inv)

    @property
    def n(self) -> int:
        return self.p + self.q

    def __call__(self, x, y) -> Scalar:
        return simplify(sum((x[i] * self.matrix[i][j] * y[j] for i in range(self.n)
                             for j in range(self.n) if self.matrix[i][j] != 0), Fraction(0)))

    def lower(self, x) -> list:
        """Components of the covector g(x) = g_jk x^k."""
        return matvec([list(r) for r in self.matrix], x)

    def raise_(self, xi) -> list:
        return matvec([list(r) for r in self.inverse], xi)


# ---------------------------------------------------------------------------
# JSON-compatible text form

def algebra_to_doc(g: LieAlgebra) -> dict:
    brackets = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            coeffs = g.bracket_basis(i, j)
            if coeffs:
                brackets.append({"i": i, "j": j,
                                 "coeffs": {str(k): format_scalar(v) for k, v in sorted(coeffs.items())}})
    doc = {"dim": g.dim, "labels": list(g.labels), "brackets": brackets}
    if g.grading is not None:
        doc["grading"] = {"V": list(g.grading.V), "h": list(g.grading.h)}
    return doc


def algebra_from_doc(doc: Mapping) -> LieAlgebra:
    n = int(doc["dim"])
    labels = list(doc.get("labels") or [f"e{i}" for i in range(n)])
    if len(labels) != n:
        raise DimensionMismatch("labels do not match dim")
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for entry in doc.get("brackets", []):
        i, j = int(entry["i"]), int(entry["j"])
        for k, v in entry["coeffs"].items():
            val = parse_scalar(v, [])
            c[i][j][int(k)] = val
            c[j][i][int(k)] = -val
    grading = doc.get("grading")
    return build_lie_algebra(labels, c, grading)
