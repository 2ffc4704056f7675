"""Inhomogeneous o(p,q): the semidirect product V x| o(p,q) and its named elements.

Storage basis: e0..e_{n-1} for V (metric diag(+1 x p, -1 x q)) followed by a
basis of h.  For generic (p,q) the h basis is Om_jk (j<k), the map
Om_jk(e_m) = e_j g_km - e_k g_jm.  For (1,3) it is the sl(2,C) basis
H, JH, X+, JX+, X-, JX-.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Mapping, Sequence

from .errors import BadSignature, NotTranslation, WrongDimension
from .exterior import MultiVector, canonical, contract, wedge
from .lie import LieAlgebra, Metric, act, matrix_lie_algebra, matvec, semidirect_product
from .linalg import Frame
from .scalar import Scalar, simplify
from .schouten import Cocycle

LORENTZ_LABELS = ("H", "JH", "X+", "JX+", "X-", "JX-")


def omega_matrix(metric: Metric, x: Sequence, y: Sequence) -> list:
    """Matrix of Om_{x,y} = x (x) g(y) - y (x) g(x) acting on V."""
    gx, gy = metric.lower(x), metric.lower(y)
    n = metric.n
    return [[simplify(x[a] * gy[m] - y[a] * gx[m]) for m in range(n)] for a in range(n)]


def _unit(n: int, j: int) -> list:
    return [Fraction(int(i == j)) for i in range(n)]


def _levi_civita(idx: Sequence[int]) -> int:
    sign, _ = canonical(idx)
    return sign


@dataclass(eq=False)
class InhomogeneousAlgebra:
    p: int
    q: int
    algebra: LieAlgebra
    metric: Metric
    h_matrices: tuple
    names: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def V(self) -> tuple:
        return tuple(range(self.n))

    @property
    def h(self) -> tuple:
        return tuple(range(self.n, self.algebra.dim))

    @property
    def is_poincare(self) -> bool:
        return (self.p, self.q) == (1, 3)

    # element construction ------------------------------------------------

    def vector(self, coords: Sequence) -> MultiVector:
        if len(coords) != self.n:
            raise WrongDimension(f"need {self.n} coordinates")
        return MultiVector(self.algebra, 1, {(i,): c for i, c in enumerate(coords) if c != 0})

    def vector_coords(self, x: MultiVector) -> list:
        if x.degree != 1:
            raise NotTranslation("expected a vector")
        out = [Fraction(0)] * self.n
        for (i,), c in x.items():
            if i >= self.n:
                raise NotTranslation(f"{self.algebra.labels[i]} is not in V")
            out[i] = c
        return out

    @property
    def _frame(self) -> Frame:
        fr = self.__dict__.get("_frame_cache")
        if fr is None:
            flat = [[x for row in m for x in row] for m in self.h_matrices]
            fr = Frame(flat, self.n * self.n)
            self.__dict__["_frame_cache"] = fr
        return fr

    def h_element(self, matrix) -> MultiVector:
        """The element of h acting on V by ``matrix`` (entries may be polynomials)."""
        coords, resid = self._frame.coordinates([x for row in matrix for x in row])
        if resid:
            raise ValueError("matrix is not in o(p,q)")
        return MultiVector(self.algebra, 1, {(self.n + k,): c for k, c in enumerate(coords) if c != 0})

    def h_matrix(self, X: MultiVector) -> list:
        """Matrix of X in h acting on V."""
        n = self.n
        M = [[Fraction(0)] * n for _ in range(n)]
        for (i,), c in X.items():
            if i < n:
                raise ValueError(f"{self.algebra.labels[i]} is not in h")
            for a in range(n):
                for b in range(n):
                    v = self.h_matrices[i - n][a][b]
                    if v:
                        M[a][b] = simplify(M[a][b] + c * v)
        return M

    def omega(self, x, y) -> MultiVector:
        """Om_{x,y} in h for vectors given as coordinate lists or V elements."""
        if isinstance(x, MultiVector):
            x = self.vector_coords(x)
        if isinstance(y, MultiVector):
            y = self.vector_coords(y)
        return self.h_element(omega_matrix(self.metric, x, y))

    def Om(self, j: int, k: int) -> MultiVector:
        return self.omega(_unit(self.n, j), _unit(self.n, k))

    def covector(self, coords: Mapping[int, Scalar]) -> MultiVector:
        return MultiVector(self.algebra, 1, {(i,): c for i, c in coords.items() if c != 0})

    def lower(self, x: MultiVector) -> MultiVector:
        """g(x) as a covector on V (zero on h)."""
        gx = self.metric.lower(self.vector_coords(x))
        return self.covector(dict(enumerate(gx)))

    def g(self, x: MultiVector, y: MultiVector) -> Scalar:
        return self.metric(self.vector_coords(x), self.vector_coords(y))

    def __getitem__(self, label: str) -> MultiVector:
        return named_element(self, label)

    def __repr__(self):
        return f"InhomogeneousAlgebra(p={self.p}, q={self.q})"


@lru_cache(maxsize=None)
def make_inhomogeneous(p: int, q: int) -> InhomogeneousAlgebra:
    if p < 0 or q < 0 or p + q < 2:
        raise BadSignature(f"signature ({p},{q}) needs p, q >= 0 and p + q >= 2")
    n = p + q
    metric = Metric.diagonal(p, q)
    om = {(j, k): omega_matrix(metric, _unit(n, j), _unit(n, k))
          for j in range(n) for k in range(n) if j != k}
    if (p, q) == (1, 3):
        def add(*pairs):
            out = [[Fraction(0)] * n for _ in range(n)]
            for jk in pairs:
                out = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(out, om[jk])]
            return out
        mats = [add((3, 0)), add((2, 1)), add((1, 0), (1, 3)), add((0, 2), (3, 2)),
                add((1, 0), (3, 1)), add((2, 0), (3, 2))]
        h_labels = list(LORENTZ_LABELS)
    else:
        pairs = list(combinations(range(n), 2))
        mats = [om[jk] for jk in pairs]
        h_labels = [f"Om{j}{k}" for j, k in pairs]
    h = matrix_lie_algebra(mats, h_labels)
    g = semidirect_product(mats, h, n, [f"e{i}" for i in range(n)])
    return InhomogeneousAlgebra(p, q, g, metric, tuple(tuple(map(tuple, m)) for m in mats))


def poincare() -> InhomogeneousAlgebra:
    return make_inhomogeneous(1, 3)


# ---------------------------------------------------------------------------
# the invariant Omega and b_x

def omega_invariant(A: InhomogeneousAlgebra) -> MultiVector:
    """Omega = g^{jl} g^{km} e_j ^ e_k ^ Om_{l,m}."""
    n = A.n
    ginv = A.metric.inverse
    out = MultiVector.zero(A.algebra, 3)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            ejk = wedge(A.vector(_unit(n, j)), A.vector(_unit(n, k)))
            for l in range(n):
                if ginv[j][l] == 0:
                    continue
                for m in range(n):
                    c = ginv[j][l] * ginv[k][m]
                    if c != 0 and l != m:
                        out = out + wedge(ejk, A.Om(l, m)) * c
    return out


def _F(A: InhomogeneousAlgebra, x: MultiVector, star: bool) -> MultiVector:
    n = A.n
    ginv = A.metric.inverse
    out = MultiVector.zero(A.algebra, 2)
    xc = A.vector_coords(x)
    for j in range(n):
        for k in range(n):
            if ginv[j][k] == 0:
                continue
            X = A.omega(xc, _unit(n, k))
            if star:
                X = hodge_star(A, X)
            out = out + wedge(A.vector(_unit(n, j)), X) * ginv[j][k]
    return out


def F0(A: InhomogeneousAlgebra, x: MultiVector) -> MultiVector:
    """F0(x) = g^{jk} e_j (x) Om_{x,e_k}, stored in V ^ h."""
    return _F(A, x, star=False)


def b_x(A: InhomogeneousAlgebra, x: MultiVector) -> MultiVector:
    """b_x = F0(x), cross-checked against 1/2 g(x) _| Omega."""
    b = F0(A, x)
    other = contract(A.lower(x), omega_invariant(A)) * Fraction(1, 2)
    if b != other:
        raise AssertionError("the two expressions for b_x disagree")
    return b


def stabilizer(A: InhomogeneousAlgebra, x: MultiVector) -> list[MultiVector]:
    """Basis of h_x = {X in h : X x = 0}."""
    from .linalg import nullspace
    xc = A.vector_coords(x)
    eqs = []
    for a in range(A.n):
        eqs.append({k: simplify(sum((A.h_matrices[k][a][m] * xc[m] for m in range(A.n)), Fraction(0)))
                    for k in range(len(A.h))})
    space = nullspace(eqs, len(A.h))
    return [MultiVector(A.algebra, 1, {(A.n + k,): c for k, c in enumerate(v) if c != 0})
            for v in space.basis()]


# ---------------------------------------------------------------------------
# Hodge star (p + q = 4) and the p + q = 3 elements

def contract_volume(covectors: Sequence[Sequence], n: int) -> dict:
    """(xi_1 ^ ... ^ xi_d) _| (e_0 ^ ... ^ e_{n-1}) on V, as ``{sorted tuple: coeff}``.

    Applied in the order xi_1 first, matching :func:`bialg.exterior.contract`.
    """
    terms = {tuple(range(n)): Fraction(1)}
    for xi in covectors:
        nxt: dict = {}
        for t, c in terms.items():
            for pos, i in enumerate(t):
                a = xi[i]
                if a == 0:
                    continue
                key = t[:pos] + t[pos + 1:]
                val = c * a if pos % 2 == 0 else -(c * a)
                nxt[key] = simplify(nxt.get(key, 0) + val)
        terms = {t: c for t, c in nxt.items() if c != 0}
    return terms


def _require(A: InhomogeneousAlgebra, n: int, what: str):
    if A.n != n:
        raise WrongDimension(f"{what} needs p + q = {n}, got {A.n}")


def _omega_of_bivector(A: InhomogeneousAlgebra, terms: Mapping) -> MultiVector:
    out = MultiVector.zero(A.algebra, 1)
    for (u, w), c in terms.items():
        out = out + A.Om(u, w) * c
    return out


@lru_cache(maxsize=None)
def _star_columns(A: InhomogeneousAlgebra) -> tuple:
    n = A.n
    pairs = list(combinations(range(n), 2))
    basis_om = [[x for row in omega_matrix(A.metric, _unit(n, j), _unit(n, k)) for x in row]
                for j, k in pairs]
    frame = Frame(basis_om, n * n)
    images = []
    for j, k in pairs:
        gj = A.metric.lower(_unit(n, j))
        gk = A.metric.lower(_unit(n, k))
        images.append(_omega_of_bivector(A, contract_volume([gj, gk], n)))
    # columns: star of each storage h basis element
    cols = []
    for X in A.h_matrices:
        coords, resid = frame.coordinates([x for row in X for x in row])
        assert not resid
        col = MultiVector.zero(A.algebra, 1)
        for c, img in zip(coords, images):
            col = col + img * c
        cols.append(col)
    return tuple(cols)


def hodge_star(A: InhomogeneousAlgebra, X: MultiVector) -> MultiVector:
    """*Om_{x,z} = Om((g(x) ^ g(z)) _| Vol), Vol = e0^e1^e2^e3, extended linearly."""
    _require(A, 4, "the Hodge star")
    cols = _star_columns(A)
    out = MultiVector.zero(A.algebra, 1)
    for (i,), c in X.items():
        if i < A.n:
            raise ValueError("the Hodge star acts on h")
        out = out + cols[i - A.n] * c
    return out


def F1(A: InhomogeneousAlgebra, x: MultiVector) -> MultiVector:
    """F1 = (id (x) *) F0."""
    _require(A, 4, "F1")
    return _F(A, x, star=True)


def volume_map(A: InhomogeneousAlgebra, x: MultiVector) -> MultiVector:
    """T(x) = g(x) _| Vol in Lambda^2 V (p + q = 3, Vol = e0^e1^e2)."""
    _require(A, 3, "T")
    terms = contract_volume([A.metric.lower(A.vector_coords(x))], 3)
    return MultiVector(A.algebra, 2, terms)


@dataclass(frozen=True)
class Special3:
    s: MultiVector
    T: Cocycle
    third: Cocycle


def special3(A: InhomogeneousAlgebra) -> Special3:
    """The p + q = 3 elements: s = eps^{jkl} e_j ^ Om_kl (k < l), T, and
    the map x -> (Om (x) Om)(T (x) T) T(x) into Lambda^2 h."""
    _require(A, 3, "special3")
    n = 3
    s = MultiVector.zero(A.algebra, 2)
    for j, k, l in permutations(range(n)):
        if k < l:
            s = s + wedge(A.vector(_unit(n, j)), A.Om(k, l)) * _levi_civita((j, k, l))
    T_cols = tuple(volume_map(A, A.vector(_unit(n, i))) for i in range(n))
    om_T = [_omega_of_bivector(A, volume_map(A, A.vector(_unit(n, i))).coeffs) for i in range(n)]
    third_cols = []
    for col in T_cols:
        out = MultiVector.zero(A.algebra, 2)
        for (u, w), c in col.items():
            out = out + wedge(om_T[u], om_T[w]) * c
        third_cols.append(out)
    return Special3(s, Cocycle(A.algebra, T_cols, A.V), Cocycle(A.algebra, tuple(third_cols), A.V))


def symmetry_defect(A: InhomogeneousAlgebra, F: Cocycle) -> list:
    """Pairs (i, j) of V basis indices with e_i F(e_j) != e_j F(e_i), with the residual."""
    out = []
    for i in A.V:
        for j in A.V:
            if i < j:
                r = act(A.vector(_unit(A.n, i)), F.columns[j]) - act(A.vector(_unit(A.n, j)), F.columns[i])
                if not r.is_zero():
                    out.append((i, j, r))
    return out


def intertwiner_defect(A: InhomogeneousAlgebra, F: Cocycle) -> list:
    """Pairs (X, i) with F(X e_i) != X F(e_i) for X in the h basis, i in the domain."""
    out = []
    g = A.algebra
    for X in A.h:
        Xe = MultiVector.basis(g, X)
        for pos, i in enumerate(F.domain):
            lhs = F(act(Xe, MultiVector.basis(g, i)))
            r = lhs - act(Xe, F.columns[pos])
            if not r.is_zero():
                out.append((X, i, r))
    return out


# ---------------------------------------------------------------------------
# names for the Poincare algebra

def _lorentz_names(A: InhomogeneousAlgebra) -> dict:
    g = A.algebra
    n = A.n
    e = [A.vector(_unit(n, i)) for i in range(n)]
    names = {f"e{i}": e[i] for i in range(n)}
    names["e+"] = e[0] + e[3]
    names["e-"] = e[0] - e[3]
    for lbl in LORENTZ_LABELS:
        names[lbl] = g.element(lbl)
    for i in (1, 2, 3):
        names[f"L{i}"] = A.Om(i, 0)
    names["M1"], names["M2"], names["M3"] = A.Om(2, 3), A.Om(3, 1), A.Om(1, 2)
    return names


def named_element(A: InhomogeneousAlgebra, label: str) -> MultiVector:
    """Look up e0.., Om_jk or (for (1,3)) e+, e-, H, JH, X+-, JX+-, L_i, M_i, Omega, b_<vector>."""
    cache = A.names
    if label in cache:
        return cache[label]
    if not cache:
        cache.update({f"e{i}": A.vector(_unit(A.n, i)) for i in range(A.n)})
        if A.is_poincare:
            cache.update(_lorentz_names(A))
        else:
            for lbl in A.algebra.labels[A.n:]:
                cache[lbl] = A.algebra.element(lbl)
        if label in cache:
            return cache[label]
    if label == "Omega":
        cache[label] = omega_invariant(A)
    elif label.startswith("b_"):
        cache[label] = b_x(A, named_element(A, label[2:]))
    else:
        raise KeyError(f"unknown element {label!r}")
    return cache[label]


# light-cone dual covectors e^+- = (e^0 +- e^3)/2
def lightcone_dual(A: InhomogeneousAlgebra, sign: int) -> MultiVector:
    half = Fraction(1, 2)
    return A.covector({0: half, 3: half * sign})


def lightcone_coords(A: InhomogeneousAlgebra, x: MultiVector) -> dict:
    """Coordinates of x in V along e+, e-, e1, e2 (x = x+ e+ + x- e- + x1 e1 + x2 e2)."""
    c = A.vector_coords(x)
    half = Fraction(1, 2)
    return {"+": simplify((c[0] + c[3]) * half), "-": simplify((c[0] - c[3]) * half),
            "1": c[1], "2": c[2]}


_LC_ORDER = ("e+", "e-", "e1", "e2") + LORENTZ_LABELS


def lightcone_terms(A: InhomogeneousAlgebra, u: MultiVector) -> list:
    """Rewrite ``u`` in the basis e+, e-, e1, e2, H, ..., JX- of the Poincare algebra.

    Returns ``[(labels tuple, coeff)]`` with labels in the order above.
    """
    if not A.is_poincare:
        raise WrongDimension("light-cone view needs (p,q) = (1,3)")
    half = Fraction(1, 2)
    # e0 = (e+ + e-)/2, e3 = (e+ - e-)/2
    expand = {0: {0: half, 1: half}, 3: {0: half, 1: -half}, 1: {2: Fraction(1)}, 2: {3: Fraction(1)}}
    for k in range(4, 10):
        expand[k] = {k: Fraction(1)}
    out: dict = {}
    for t, c in u.items():
        partial = {(): c}
        for i in t:
            nxt: dict = {}
            for seq, cc in partial.items():
                for j, f in expand[i].items():
                    nxt[seq + (j,)] = cc * f
            partial = nxt
        for seq, cc in partial.items():
            sign, key = canonical(seq)
            if sign:
                out[key] = simplify(out.get(key, 0) + sign * cc)
    return [(tuple(_LC_ORDER[i] for i in k), c) for k, c in sorted(out.items()) if c != 0]


def format_lightcone(A: InhomogeneousAlgebra, u: MultiVector) -> str:
    from .scalar import Poly, format_scalar
    terms = lightcone_terms(A, u)
    if not terms:
        return "0"
    parts = []
    for labels, c in terms:
        body = "^".join(labels) if labels else "1"
        coeff = format_scalar(c)
        if isinstance(c, Poly) and len(c.terms) > 1:
            parts.append(f"({coeff})*{body}")
        elif coeff == "1":
            parts.append(body)
        elif coeff == "-1":
            parts.append(f"-{body}")
        else:
            parts.append(f"{coeff}*{body}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------------------
# the c = 0, t != 0 families

def be0_plus(A: InhomogeneousAlgebra, lam: Scalar) -> MultiVector:
    """b = b_e0 + lam e0 ^ M3."""
    return A["b_e0"] + wedge(A["e0"], A["M3"]) * lam


KAPPA_Y = {"M1": ("M1",), "M1+L3": ("M1", "L3"), "H": ("H",)}


def be1_plus(A: InhomogeneousAlgebra, lam: Scalar, Y: str) -> MultiVector:
    """b = b_e1 + lam e1 ^ Y with Y one of M1, M1+L3, H."""
    Yv = MultiVector.zero(A.algebra, 1)
    for part in KAPPA_Y[Y]:
        Yv = Yv + A[part]
    return A["b_e1"] + wedge(A["e1"], Yv) * lam


def be1_plus_a(A: InhomogeneousAlgebra, k: int, sign: int, alpha: Scalar) -> MultiVector:
    """b = b_e1 + sign k e1 ^ H + alpha e_k ^ e_sign, k in {1, 2}."""
    if k not in (1, 2) or sign not in (1, -1):
        raise ValueError("k must be 1 or 2 and sign +-1")
    e_sign = A["e+"] if sign > 0 else A["e-"]
    return (A["b_e1"] + wedge(A["e1"], A["H"]) * (sign * k)
            + wedge(A[f"e{k}"], e_sign) * alpha)
