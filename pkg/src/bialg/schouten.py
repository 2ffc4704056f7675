"""Schouten bracket, coboundaries, the dual bracket and the GCYBE verdict."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import AlgebraMismatch, DegreeOverflow, DimensionMismatch
from .exterior import MultiVector, canonical, contract, pairing, wedge
from .lie import LieAlgebra, act, bracket
from .linalg import Frame
from .scalar import Scalar, simplify


def schouten_bracket(u: MultiVector, v: MultiVector) -> MultiVector:
    """Schouten bracket of multivectors of degrees p, q (p + q - 1 <= 3).

    On decomposables
    [x1^..^xp, y1^..^yq] = sum_{i,j} (-1)^(i+j) [xi,yj] ^ x1..^xi..xp ^ y1..^yj..yq,
    so [x^y, u^v] = [x,u]^y^v - [x,v]^y^u - [y,u]^x^v + [y,v]^x^u and
    [X, u] is the adjoint action X.u.
    """
    if u.algebra is not v.algebra and u.algebra != v.algebra:
        raise AlgebraMismatch("Schouten bracket of elements of different algebras")
    p, q = u.degree, v.degree
    if p == 0 or q == 0:
        raise DimensionMismatch("Schouten bracket needs degrees >= 1")
    if p + q - 1 > 3:
        raise DegreeOverflow(f"bracket degree {p + q - 1} exceeds 3")
    g = u.algebra
    out: dict = {}
    for s, a in u.items():
        for t, b in v.items():
            ab = a * b
            for i, xi in enumerate(s):
                rest_s = s[:i] + s[i + 1:]
                for j, yj in enumerate(t):
                    br = g.bracket_basis(xi, yj)
                    if not br:
                        continue
                    rest_t = t[:j] + t[j + 1:]
                    sgn = -1 if (i + j) % 2 else 1
                    for k, ck in br.items():
                        sign, key = canonical((k,) + rest_s + rest_t)
                        if sign == 0:
                            continue
                        val = simplify(out.get(key, 0) + sign * sgn * ck * ab)
                        if val != 0:
                            out[key] = val
                        else:
                            out.pop(key, None)
    return MultiVector._raw(g, p + q - 1, out)


# ---------------------------------------------------------------------------
# cocycles

@dataclass(frozen=True)
class Cocycle:
    """Linear map from g (or a subalgebra's basis) into Lambda^k g, held by columns.

    ``columns[i]`` is the image of basis element ``domain[i]``; ``domain``
    defaults to all of g.
    """

    algebra: LieAlgebra
    columns: tuple
    domain: tuple = ()

    def __post_init__(self):
        if not self.domain:
            object.__setattr__(self, "domain", tuple(range(self.algebra.dim)))
        if len(self.columns) != len(self.domain):
            raise DimensionMismatch("one column per domain basis element")

    def __call__(self, X: MultiVector) -> MultiVector:
        pos = {d: n for n, d in enumerate(self.domain)}
        out = MultiVector.zero(self.algebra, self.columns[0].degree)
        for (i,), c in X.items():
            if i not in pos:
                raise DimensionMismatch(f"basis element {i} outside the cocycle's domain")
            out = out + self.columns[pos[i]] * c
        return out

    def matrix(self) -> list:
        cols = [c.to_vector() for c in self.columns]
        return [list(row) for row in zip(*cols)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.columns)


def coboundary(r: MultiVector) -> Cocycle:
    g = r.algebra
    return Cocycle(g, tuple(act(MultiVector.basis(g, i), r) for i in range(g.dim)))


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    failures: tuple = field(default=())  # (i, j, residual multivector)

    def __bool__(self):
        return self.ok


def is_cocycle(f: Cocycle) -> CocycleReport:
    """Check f([X,Y]) = X f(Y) - Y f(X) on all basis pairs of the domain."""
    g = f.algebra
    failures = []
    dom = f.domain
    for a in range(len(dom)):
        for b in range(a + 1, len(dom)):
            X, Y = MultiVector.basis(g, dom[a]), MultiVector.basis(g, dom[b])
            res = f(bracket(g, X, Y)) - act(X, f.columns[b]) + act(Y, f.columns[a])
            if not res.is_zero():
                failures.append((dom[a], dom[b], res))
    return CocycleReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# dual bracket

def coadjoint(X: MultiVector, beta: MultiVector) -> MultiVector:
    """Coadjoint action on covectors: <X.beta, Y> = -<beta, [X, Y]>."""
    g = X.algebra
    out: dict = {}
    for (a,), xa in X.items():
        for j in range(g.dim):
            for k, ck in g.bracket_basis(a, j).items():
                bk = beta[(k,)]
                if bk != 0:
                    out[(j,)] = simplify(out.get((j,), 0) - xa * ck * bk)
    return MultiVector(g, 1, out)


def r_map(r: MultiVector, alpha: MultiVector) -> MultiVector:
    """r(alpha) = alpha _| r."""
    return contract(alpha, r)


def dual_bracket(r: MultiVector, alpha: MultiVector, beta: MultiVector) -> MultiVector:
    """[alpha, beta]_r = r(alpha).beta - r(beta).alpha."""
    return coadjoint(r_map(r, alpha), beta) - coadjoint(r_map(r, beta), alpha)


# ---------------------------------------------------------------------------
# generalized classical Yang-Baxter equation

@dataclass(frozen=True)
class GCYBEVerdict:
    in_span: bool
    bracket: MultiVector
    coordinates: tuple = ()
    residual: MultiVector | None = None

    @property
    def t(self) -> Scalar | None:
        """Coordinate along a one-element invariant basis (the multiple of Omega)."""
        if self.in_span and len(self.coordinates) == 1:
            return self.coordinates[0]
        return None

    def __bool__(self):
        return self.in_span


def span_coordinates(w: MultiVector, basis: Sequence[MultiVector]):
    """Express ``w`` in the span of linearly independent rational ``basis``.

    Returns ``(coords, residual)`` with coords relative to ``basis`` itself;
    ``w`` may carry polynomial coefficients.
    """
    if not basis:
        return [], w
    n = len(basis[0].to_vector())
    coords, resid = Frame([b.to_sparse() for b in basis], n).coordinates(w.to_sparse())
    vec = [Fraction(0)] * n
    for c, x in resid.items():
        vec[c] = x
    return coords, MultiVector.from_vector(w.algebra, w.degree, vec)


def gcybe_check(r: MultiVector, invariant_basis: Sequence[MultiVector]) -> GCYBEVerdict:
    """Decide whether [r, r] lies in the span of ``invariant_basis``."""
    w = schouten_bracket(r, r)
    coords, resid = span_coordinates(w, invariant_basis)
    if resid.is_zero():
        return GCYBEVerdict(True, w, tuple(coords), None)
    return GCYBEVerdict(False, w, (), resid)


def formula_check(r: MultiVector, alpha: MultiVector, beta: MultiVector,
                  gamma: MultiVector) -> Scalar:
    """LHS - RHS of  1/2 <[r,r], a^b^c> = <[r(a), r(b)] - r([a,b]_r), c>."""
    g = r.algebra
    lhs = pairing(wedge(wedge(alpha, beta), gamma), schouten_bracket(r, r)) * Fraction(1, 2)
    ra, rb = r_map(r, alpha), r_map(r, beta)
    rhs_vec = bracket(g, ra, rb) - r_map(r, dual_bracket(r, alpha, beta))
    return simplify(lhs - pairing(gamma, rhs_vec))
