"""Explicit automorphisms of V x| h used to normalize r-matrices.

Every move is realised by an exact matrix on g (columns = images of basis
elements); bivectors and trivectors transform by its wedge powers.  The one
exception is :class:`Translate`, whose action on bivectors is the three-term
expansion r + (-v)r + (v (x) v)r, cross-checked against the matrix route in
the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .errors import InvalidMove, ParameterizedInput, WrongC
from .exterior import MultiVector, split2, wedge
from .lie import LieAlgebra, act, action_matrix, bracket, identity, matmul, _madd, is_zero_matrix
from .linalg import Subspace, nullspace, rank, solve
from .scalar import Poly, Scalar, simplify
from .schouten import r_map, schouten_bracket


def _column(M, j: int, g: LieAlgebra) -> MultiVector:
    return MultiVector(g, 1, {(i,): M[i][j] for i in range(g.dim) if M[i][j] != 0})


def _apply_matrix(M, g: LieAlgebra, u: MultiVector) -> MultiVector:
    cols = {}
    out = MultiVector.zero(g, u.degree)
    for t, c in u.items():
        img = None
        for i in t:
            if i not in cols:
                cols[i] = _column(M, i, g)
            img = cols[i] if img is None else wedge(img, cols[i])
        out = out + (img * c if img is not None else MultiVector.scalar(g, c))
    return out


def _vector_part(g: LieAlgebra, v: MultiVector):
    if v.degree != 1 or g.grading is None or any(i not in g.grading.V_set for (i,) in v.coeffs):
        raise InvalidMove("translation needs a vector in V")


def _exp_nilpotent(A, t) -> list:
    n = len(A)
    out = identity(n)
    term = identity(n)
    k = 0
    while True:
        k += 1
        term = matmul(term, A)
        if is_zero_matrix(term):
            return out
        if k > n:
            raise InvalidMove("matrix is not nilpotent")
        factor = simplify(t ** k / _factorial(k)) if isinstance(t, Poly) else Fraction(t) ** k / _factorial(k)
        out = _madd(out, term, factor)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


class Move:
    """Base class: subclasses provide ``algebra``, ``matrix()`` and ``inverse()``."""

    algebra: LieAlgebra

    def matrix(self) -> list:
        raise NotImplementedError

    def inverse(self) -> "Move":
        raise NotImplementedError

    def apply(self, u: MultiVector) -> MultiVector:
        return _apply_matrix(self.matrix(), self.algebra, u)


@dataclass(frozen=True)
class Translate(Move):
    """Ad_{-v} = id - ad_v for v in V."""

    v: MultiVector

    def __post_init__(self):
        _vector_part(self.v.algebra, self.v)

    @property
    def algebra(self):
        return self.v.algebra

    def matrix(self):
        g = self.algebra
        return _madd(identity(g.dim), action_matrix(g, self.v, 1), -1)

    def inverse(self):
        return Translate(-self.v)

    def apply(self, u: MultiVector) -> MultiVector:
        if u.degree != 2:
            return super().apply(u)
        return u + act(-self.v, u) + vv_term(self.v, u)


def vv_term(v: MultiVector, r: MultiVector) -> MultiVector:
    """(v (x) v) r: each x ^ y goes to [v,x] ^ [v,y]."""
    g = r.algebra
    out = MultiVector.zero(g, 2)
    for (i, j), c in r.items():
        x = bracket(g, v, MultiVector.basis(g, i))
        y = bracket(g, v, MultiVector.basis(g, j))
        if not x.is_zero() and not y.is_zero():
            out = out + wedge(x, y) * c
    return out


@dataclass(frozen=True)
class NilpotentFlow(Move):
    """exp(t ad X) for ad X nilpotent; ``t`` may be a polynomial."""

    X: MultiVector
    t: Scalar

    def __post_init__(self):
        A = action_matrix(self.X.algebra, self.X, 1)
        P = identity(len(A))
        for _ in range(len(A)):
            P = matmul(P, A)
        if not is_zero_matrix(P):
            raise InvalidMove("ad X is not nilpotent")

    @property
    def algebra(self):
        return self.X.algebra

    def matrix(self):
        return _exp_nilpotent(action_matrix(self.algebra, self.X, 1), self.t)

    def inverse(self):
        return NilpotentFlow(self.X, -self.t)


@dataclass(frozen=True)
class Dilation(Move):
    """(v, X) -> (lam v, X)."""

    g: LieAlgebra
    lam: Scalar

    def __post_init__(self):
        if self.g.grading is None:
            raise InvalidMove("dilation needs a graded algebra")
        if self.lam == 0:
            raise InvalidMove("dilation factor must be nonzero")

    @property
    def algebra(self):
        return self.g

    def matrix(self):
        M = identity(self.g.dim)
        for i in self.g.grading.V:
            M[i][i] = simplify(self.lam)
        return M

    def inverse(self):
        if isinstance(self.lam, Poly):
            raise ParameterizedInput("cannot invert a symbolic dilation")
        return Dilation(self.g, Fraction(1) / Fraction(self.lam))


def integer_eigendecomposition(A) -> list[tuple[int, list]]:
    """[(eigenvalue, basis of eigenspace)] for a matrix diagonalizable over Q with
    integer eigenvalues; raises InvalidMove otherwise."""
    n = len(A)
    bound = max((sum(abs(Fraction(x)) for x in row) for row in A), default=0)
    out = []
    total = 0
    for k in range(-int(bound) - 1, int(bound) + 2):
        shifted = _madd(A, identity(n), -k)
        space = nullspace([{j: x for j, x in enumerate(row) if x != 0} for row in shifted], n)
        if space.dim:
            out.append((k, space.basis()))
            total += space.dim
    if total != n:
        raise InvalidMove("not diagonalizable over Q with integer eigenvalues")
    return out


def _inverse_matrix(P) -> list:
    n = len(P)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve([{k: v for k, v in enumerate(row) if v != 0} for row in P], e, n)
        if x is None:
            raise InvalidMove("singular matrix")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class DiagonalFlow(Move):
    """exp(t ad X) for ad X with integer eigenvalues, with mu standing for e^t."""

    X: MultiVector
    mu: Fraction

    def __post_init__(self):
        if isinstance(self.mu, Poly) or Fraction(self.mu) <= 0:
            raise InvalidMove("multiplier must be a positive rational")
        integer_eigendecomposition(action_matrix(self.X.algebra, self.X, 1))

    @property
    def algebra(self):
        return self.X.algebra

    def matrix(self):
        A = action_matrix(self.algebra, self.X, 1)
        eig = integer_eigendecomposition(A)
        P_cols, diag = [], []
        for k, vecs in eig:
            for v in vecs:
                P_cols.append(v)
                diag.append(Fraction(self.mu) ** k)
        n = len(A)
        P = [[P_cols[j][i] for j in range(n)] for i in range(n)]
        D = [[diag[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        return matmul(matmul(P, D), _inverse_matrix(P))

    def inverse(self):
        return DiagonalFlow(self.X, 1 / Fraction(self.mu))


@dataclass(frozen=True)
class Rotation(Move):
    """exp(theta ad X) for ad X with (ad X)^3 = -ad X, given cos and sin of theta."""

    X: MultiVector
    cos: Fraction
    sin: Fraction

    def __post_init__(self):
        if simplify(self.cos * self.cos + self.sin * self.sin) != 1:
            raise InvalidMove("cos^2 + sin^2 must be 1")
        A = action_matrix(self.X.algebra, self.X, 1)
        if not is_zero_matrix(_madd(matmul(matmul(A, A), A), A, 1)):
            raise InvalidMove("ad X must satisfy A^3 = -A")

    @classmethod
    def pythagorean(cls, X: MultiVector, s) -> "Rotation":
        s = Fraction(s)
        return cls(X, (1 - s * s) / (1 + s * s), 2 * s / (1 + s * s))

    @property
    def algebra(self):
        return self.X.algebra

    def matrix(self):
        A = action_matrix(self.algebra, self.X, 1)
        A2 = matmul(A, A)
        return _madd(_madd(identity(len(A)), A, self.sin), A2, 1 - self.cos)

    def inverse(self):
        return Rotation(self.X, self.cos, -self.sin)


@dataclass(frozen=True, eq=False)
class Reflection(Move):
    """e_index -> -e_index on V, extended to h by conjugation."""

    A: object  # InhomogeneousAlgebra
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.A.n:
            raise InvalidMove("reflection index must name a basis vector of V")

    @property
    def algebra(self):
        return self.A.algebra

    def matrix(self):
        A = self.A
        n = A.n
        R = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            R[i][i] = Fraction(-1 if i == self.index else 1)
        M = identity(A.algebra.dim)
        M[self.index][self.index] = Fraction(-1)
        for k, i in enumerate(A.h):
            img = A.h_element(matmul(matmul(R, [list(r) for r in A.h_matrices[k]]), R))
            for j in A.h:
                M[j][i] = img[(j,)]
        return M

    def inverse(self):
        return self


def apply(move: Move, r: MultiVector) -> MultiVector:
    return move.apply(r)


def apply3(move: Move, w: MultiVector) -> MultiVector:
    """Degree-3 action (third wedge power of the degree-1 matrix)."""
    return _apply_matrix(move.matrix(), move.algebra, w)


def inverse(move: Move) -> Move:
    return move.inverse()


def automorphism_defect(move: Move) -> list:
    """Basis pairs (i, j) where M[e_i, e_j] != [M e_i, M e_j]."""
    g = move.algebra
    M = move.matrix()
    cols = [_column(M, i, g) for i in range(g.dim)]
    out = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = _apply_matrix(M, g, bracket(g, MultiVector.basis(g, i), MultiVector.basis(g, j)))
            if lhs != bracket(g, cols[i], cols[j]):
                out.append((i, j))
    return out


def gcybe_equivariance_check(move: Move, r: MultiVector) -> MultiVector:
    """[m r, m r] - m_3 [r, r]; zero for a genuine automorphism."""
    mr = move.apply(r)
    return schouten_bracket(mr, mr) - apply3(move, schouten_bracket(r, r))


def compose(moves: Sequence[Move], r: MultiVector) -> MultiVector:
    for m in moves:
        r = m.apply(r)
    return r


# ---------------------------------------------------------------------------
# normalization for c = JX+ ^ X+

@dataclass
class Normalization:
    r: MultiVector
    moves: list = field(default_factory=list)
    stage: str = "b1"
    obstruction: str | None = None


def _rational_sqrt(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def _lc(A, x: MultiVector) -> dict:
    from .poincare import lightcone_coords
    return lightcone_coords(A, x)


def _b_data(A, r: MultiVector) -> dict:
    """x = b(X+*), y = b(JX+*), z = b(JH*) in light-cone coordinates."""
    b = split2(r).b
    def at(label):
        return _lc(A, r_map(b, MultiVector.basis(A.algebra, A.algebra.index(label))))
    return {"x": at("X+"), "y": at("JX+"), "z": at("JH")}


def _from_lightcone(A, plus=0, minus=0, one=0, two=0) -> MultiVector:
    return A.vector([simplify(plus + minus), one, two, simplify(plus - minus)])


def _rotation_to_axis(A, r, coordinate, moves_note: str):
    """Find a rational JH rotation making ``coordinate(r)`` vanish.

    ``coordinate`` returns a pair (p, q) transforming as a plane vector
    under the rotation; the target is q = 0.  Returns (move or None, note).
    """
    p, q = coordinate(r)
    if q == 0:
        return None, None
    norm = _rational_sqrt(p * p + q * q)
    if norm is None:
        return None, f"{moves_note}: |({p}, {q})| is irrational"
    JH = A["JH"]
    candidates = []
    for sgn in (1, -1):
        C, S = sgn * p / norm, sgn * q / norm
        for S2 in (S, -S):
            # target angle 2*theta with cos = C, sin = S2, or angle theta itself
            candidates.append((C, S2))
            half = _rational_sqrt((1 + C) / 2)
            if half is not None:
                if half != 0:
                    candidates.append((half, S2 / (2 * half)))
                else:
                    candidates.append((Fraction(0), Fraction(1)))
                    candidates.append((Fraction(0), Fraction(-1)))
    for c, s in candidates:
        m = Rotation(JH, c, s)
        if coordinate(m.apply(r))[1] == 0:
            return m, None
    return None, f"{moves_note}: the required rotation angle has no rational cos/sin"


def normalize_row2(A, r: MultiVector) -> Normalization:
    """Apply the c = JX+ ^ X+ reduction: translate, JH-rotate, then X+/JX+ flows."""
    if not r.is_rational():
        raise ParameterizedInput("normalize_row2 needs rational coefficients")
    g = A.algebra
    comps = split2(r)
    base = wedge(A["JX+"], A["X+"])
    key, unit = next(iter(base.items()))
    kappa = comps.c[key] / unit
    if kappa == 0 or comps.c != base * kappa:
        raise WrongC("c must be a nonzero multiple of JX+ ^ X+")
    out = Normalization(r)

    def push(m: Move):
        out.moves.append(m)
        out.r = m.apply(out.r)

    # scale c to JX+ ^ X+: the reflection e2 -> -e2 flips JX+, the H-flow
    # multiplies JX+ ^ X+ by mu^2
    if kappa < 0:
        push(Reflection(A, 2))
        kappa = -kappa
    if kappa != 1:
        root = _rational_sqrt(kappa)
        if root is None:
            out.obstruction = f"c = {kappa} JX+^X+ needs an irrational H-flow"
            return out
        push(DiagonalFlow(A["H"], 1 / root))

    # translation: x+ = y+ = 0 and x2 + y1 = 0
    d = _b_data(A, out.r)
    v2, v1 = -d["x"]["+"], -d["y"]["+"]
    vminus = -(d["x"]["2"] + d["y"]["1"]) / 4
    v = _from_lightcone(A, minus=vminus, one=v1, two=v2)
    if not v.is_zero():
        push(Translate(v))

    # JH rotation: x2 - y1 -> 0 (x1 + y2 rotates along with it)
    def w(rr):
        dd = _b_data(A, rr)
        return simplify(dd["x"]["1"] + dd["y"]["2"]), simplify(dd["x"]["2"] - dd["y"]["1"])

    m, why = _rotation_to_axis(A, out.r, w, "JH rotation")
    if why:
        out.obstruction = why
        return out
    if m is not None:
        push(m)
    d = _b_data(A, out.r)
    if d["x"]["2"] != 0 or d["y"]["1"] != 0:
        out.obstruction = "b is not of the expected form after translation and rotation"
        return out
    out.stage = "b2"

    from .poincare import omega_invariant
    from .schouten import gcybe_check
    verdict = gcybe_check(out.r, [omega_invariant(A)])
    if not verdict.in_span:
        return out
    s = simplify(d["x"]["1"] + d["y"]["2"])
    zplus = d["z"]["+"]
    if s != 0:
        out.stage = "row4"
        return out
    if zplus == 0:
        # a = e+ ^ (a1 e1 + a2 e2) rotated onto e+ ^ e1
        def av(rr):
            a = split2(rr).a
            ep = A["e+"]
            return (pair_coeff(A, a, ep, A["e1"]), pair_coeff(A, a, ep, A["e2"]))
        m, why = _rotation_to_axis(A, out.r, av, "JH rotation of a")
        if why:
            out.obstruction = why
            return out
        if m is not None:
            push(m)
        out.stage = "row3"
        return out

    # z+ != 0: translate within <e1, e2> to remove a, then X+ / JX+ flows
    def a_after(v1_, v2_):
        return split2(Translate(A.vector([0, v1_, v2_, 0])).apply(out.r)).a
    a0 = a_after(0, 0)
    d1 = a_after(1, 0) - a0
    d2 = a_after(0, 1) - a0
    cols = [d1.to_sparse(), d2.to_sparse()]
    keys = sorted(set(a0.to_sparse()) | set(cols[0]) | set(cols[1]))
    eqs = [{0: cols[0].get(k, 0), 1: cols[1].get(k, 0)} for k in keys]
    sol = solve(eqs, [-a0.to_sparse().get(k, 0) for k in keys], 2)
    if sol is None:
        out.obstruction = "no translation in <e1, e2> removes a"
        return out
    if any(sol):
        push(Translate(A.vector([0, sol[0], sol[1], 0])))
    for label, other in (("X+", "JX+"), ("JX+", "X+")):
        target = wedge(A["e+"], A[other])
        m = _flow_to_kill(A, out.r, A[label], target)
        if m is None:
            out.obstruction = f"the {label} flow cannot remove the {other} ^ e+ term"
            return out
        if m.t != 0:
            push(m)
    out.stage = "row2"
    return out


def pair_coeff(A, u: MultiVector, x: MultiVector, y: MultiVector) -> Scalar:
    """Coefficient of x ^ y in u, for x, y among the light-cone basis vectors."""
    from .poincare import lightcone_terms
    names = {}
    for labels, c in lightcone_terms(A, u):
        names[labels] = c
    lx = _lc_label(A, x)
    ly = _lc_label(A, y)
    order = ("e+", "e-", "e1", "e2")
    if order.index(lx) < order.index(ly):
        return names.get((lx, ly), Fraction(0))
    return -names.get((ly, lx), Fraction(0))


def _lc_label(A, x: MultiVector) -> str:
    for lbl in ("e+", "e-", "e1", "e2"):
        if x == A[lbl]:
            return lbl
    raise ValueError("not a light-cone basis vector")


def _flow_to_kill(A, r: MultiVector, X: MultiVector, target: MultiVector):
    """NilpotentFlow(X, t) with t chosen so the coefficient of ``target`` vanishes."""
    t = Poly.var("t")
    img = NilpotentFlow(X, t).apply(r)
    key, unit = next(iter(target.items()))
    coeff = simplify(img[key] / unit)
    if not isinstance(coeff, Poly):
        return NilpotentFlow(X, Fraction(0)) if coeff == 0 else None
    if coeff.degree() != 1:
        return None
    c1 = coeff.terms.get((("t", 1),), Fraction(0))
    c0 = coeff.terms.get((), Fraction(0))
    return NilpotentFlow(X, -c0 / c1)


# ---------------------------------------------------------------------------
# essential parameters under dilations and H-flows

@dataclass(frozen=True)
class ScalingReduction:
    params: tuple
    reduction: int
    essential: int
    witness: tuple  # (move list, rescaled bindings) per independent direction


def _weights(A, labels: tuple, use_H: bool) -> tuple:
    nv = sum(1 for l in labels if l in ("e+", "e-", "e1", "e2"))
    hw = 0
    if use_H:
        table = {"e+": 1, "e-": -1, "X+": 1, "JX+": 1, "X-": -1, "JX-": -1}
        hw = sum(table.get(l, 0) for l in labels)
    return nv, hw


def scaling_reduction(A, r: MultiVector, params: Sequence[str], use_H: bool) -> ScalingReduction | None:
    """Count parameters removable by dilations (and H-flows when ``use_H``).

    Every light-cone coefficient of ``r`` must be a single monomial; the
    moves act on monomials by characters, so the removable parameters are
    the rank of the induced map on parameter logarithms, restricted to the
    moves fixing the parameter-free terms.  Each direction is then checked
    by applying the actual moves.  Returns None for non-monomial entries.
    """
    from .poincare import lightcone_terms
    params = tuple(params)
    gens = 2 if use_H else 1
    const_rows, mono_rows = [], []
    for labels, c in lightcone_terms(A, r):
        w = _weights(A, labels, use_H)[:gens]
        if isinstance(c, Poly):
            terms = c.terms
            if len(terms) != 1:
                return None
            (mono, _), = terms.items()
            expo = dict(mono)
            mono_rows.append(([expo.get(p, 0) for p in params], w))
        else:
            const_rows.append(w)
    # group directions fixing parameter-free terms
    G0 = nullspace([{k: x for k, x in enumerate(w) if x} for w in const_rows], gens)
    directions = []
    for gvec in G0.basis():
        # solve sum_i k_i delta_i = <w, g> for all monomial rows
        eqs = [{i: k for i, k in enumerate(expo) if k} for expo, _ in mono_rows]
        rhs = [sum(Fraction(x) * y for x, y in zip(w, gvec)) for _, w in mono_rows]
        delta = solve(eqs, rhs, len(params))
        if delta is None:
            return None
        directions.append((gvec, delta))
    red = rank([{i: x for i, x in enumerate(d) if x} for _, d in directions])
    witness = []
    for gvec, delta in directions:
        scale = lcm_den(list(gvec) + list(delta))
        gint = [int(x * scale) for x in gvec]
        moves = [Dilation(A.algebra, Fraction(2) ** gint[0])]
        if use_H and gint[1] != 0:
            moves.append(DiagonalFlow(A["H"], Fraction(2) ** gint[1]))
        new_bindings = {p: Poly.var(p) * Fraction(2) ** int(d * scale) for p, d in zip(params, delta)}
        if compose(moves, r) != r.subs(new_bindings):
            return None
        witness.append((moves, new_bindings))
    return ScalingReduction(params, red, len(params) - red, tuple(witness))


def lcm_den(xs) -> int:
    from math import lcm
    out = 1
    for x in xs:
        out = lcm(out, Fraction(x).denominator)
    return out


# ---------------------------------------------------------------------------
# b = b_x + x ^ X with an added a (instances of the no-a proposition)

@dataclass(frozen=True)
class NoAInstance:
    hypotheses: bool
    ab_identity: bool  # [a, b] = x ^ (X - 2) a for all a in Lambda^2 V
    vb_identity: bool  # (-v) b = x ^ (X - 1) v for all v in V
    a_solutions: Subspace
    translations: Subspace

    @property
    def contained(self) -> bool:
        return self.a_solutions.issubset(self.translations)


def noa_instance(A, x: MultiVector, X: MultiVector) -> NoAInstance:
    from .cohomology import module_basis, ModuleSpec
    from .poincare import b_x
    g = A.algebra
    b = b_x(A, x) + wedge(x, X)
    n = A.n
    XV = action_matrix(g, X, 1)
    XV = [[XV[i][j] for j in range(n)] for i in range(n)]
    no1 = rank([{j: x_ for j, x_ in enumerate(row) if x_} for row in _madd(XV, identity(n), -1)]) == n
    L2V = module_basis(g, ModuleSpec(2, 2))
    X2 = [act(X, MultiVector._raw(g, 2, {t: Fraction(1)})) for t in L2V]
    M2 = [[X2[j][L2V[i]] - (2 if i == j else 0) for j in range(len(L2V))] for i in range(len(L2V))]
    no2 = rank([{j: y for j, y in enumerate(row) if y} for row in M2]) == len(L2V)
    ab_ok = True
    for j, t in enumerate(L2V):
        a = MultiVector._raw(g, 2, {t: Fraction(1)})
        if schouten_bracket(a, b) != wedge(x, X2[j] - a * 2):
            ab_ok = False
    vb_ok = True
    vs = []
    for i in range(n):
        v = MultiVector.basis(g, i)
        img = act(-v, b)
        vs.append(img.to_sparse())
        if img != wedge(x, act(X, v) - v):
            vb_ok = False
    eqs: dict = {}
    for col, t in enumerate(L2V):
        w = schouten_bracket(MultiVector._raw(g, 2, {t: Fraction(1)}), b)
        for key, val in w.items():
            eqs.setdefault(key, {})[col] = val
    sol = nullspace(eqs.values(), len(L2V))
    from .exterior import basis_index, basis_tuples
    idx = basis_index(g.dim, 2)
    full = len(basis_tuples(g.dim, 2))
    a_space = Subspace.span([{idx[L2V[c]]: val for c, val in r.items()} for r in sol.rows], full)
    return NoAInstance(no1 and no2, ab_ok, vb_ok, a_space, Subspace.span(vs, full))
