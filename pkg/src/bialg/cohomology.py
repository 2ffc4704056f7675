"""Invariants, cocycles, coboundaries and intertwiners by exact linear algebra.

Modules are blocks of the exterior algebra: all of Lambda^k g, or the part of
Lambda^k g with a fixed number of V factors (Lambda^2 V, V ^ h, Lambda^2 h, ...),
or the trivial module R.  Subspaces are returned in the canonical coordinates
of Lambda^k g (or of the unknown vector of a linear map, see each function).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NotTriangular, ParameterizedInput, UnsupportedModule
from .exterior import MultiVector, basis_index, basis_tuples, split_by_v_count, v_count
from .lie import LieAlgebra, act
from .linalg import Subspace, nullspace
from .schouten import coadjoint, r_map, schouten_bracket


@dataclass(frozen=True)
class ModuleSpec:
    """Lambda^degree g (``v_count`` None) or its block with ``v_count`` V factors."""

    degree: int
    v_count: int | None = None

    def __str__(self):
        if self.degree == 0:
            return "R"
        if self.v_count is None:
            return f"L{self.degree}g" if self.degree > 1 else "g"
        nv, nh = self.v_count, self.degree - self.v_count
        part = lambda k, s: "" if k == 0 else (s if k == 1 else f"L{k}{s}")
        return part(nv, "V") + part(nh, "h")


_PART = re.compile(r"(L([1-3]))?([Vh])")


def parse_module(text: str | ModuleSpec) -> ModuleSpec:
    """Parse ``R``, ``g``, ``L2g``, ``L3g``, ``V``, ``h``, ``L2V``, ``Vh``, ``L2Vh``, ``VL2h`` ..."""
    if isinstance(text, ModuleSpec):
        return text
    s = text.strip().replace("^", "").replace("*", "").replace("x", "")
    if s == "R":
        return ModuleSpec(0)
    m = re.fullmatch(r"(L([1-3]))?g", s)
    if m:
        return ModuleSpec(int(m.group(2) or 1))
    pos, nv, nh, seen = 0, 0, 0, ""
    while pos < len(s):
        m = _PART.match(s, pos)
        if not m:
            raise UnsupportedModule(f"cannot parse module spec {text!r}")
        k = int(m.group(2) or 1)
        if m.group(3) in seen:
            raise UnsupportedModule(f"repeated factor in {text!r}")
        seen += m.group(3)
        if m.group(3) == "V":
            nv += k
        else:
            nh += k
        pos = m.end()
    if not seen or nv + nh > 3:
        raise UnsupportedModule(f"unsupported module spec {text!r}")
    return ModuleSpec(nv + nh, nv)


def _acting(g: LieAlgebra, acting: str) -> tuple:
    if acting == "g":
        return tuple(range(g.dim))
    if g.grading is None:
        raise UnsupportedModule("acting subalgebra V or h needs a graded algebra")
    if acting == "h":
        return tuple(g.grading.h)
    if acting == "V":
        return tuple(g.grading.V)
    raise UnsupportedModule(f"acting must be g, h or V, got {acting!r}")


def module_basis(g: LieAlgebra, E: ModuleSpec) -> list:
    tuples = basis_tuples(g.dim, E.degree)
    if E.v_count is None:
        return list(tuples)
    if g.grading is None:
        raise UnsupportedModule("graded blocks need a graded algebra")
    return [t for t in tuples if v_count(g, t) == E.v_count]


def _action(g: LieAlgebra, E: ModuleSpec, basis: list, x: int) -> list:
    """Columns of e_x acting on the module: list of {output position: coeff}."""
    if E.degree == 0:
        return [{}]
    pos = {t: i for i, t in enumerate(basis)}
    ex = MultiVector.basis(g, x)
    cols = []
    for t in basis:
        img = act(ex, MultiVector._raw(g, E.degree, {t: Fraction(1)}))
        col = {}
        for key, c in img.items():
            if key not in pos:
                raise UnsupportedModule(f"module {E} is not preserved by {g.labels[x]}")
            col[pos[key]] = c
        cols.append(col)
    return cols


@lru_cache(maxsize=None)
def _module_data(g: LieAlgebra, E: ModuleSpec, acting: str):
    basis = module_basis(g, E)
    xs = _acting(g, acting)
    return basis, xs, {x: _action(g, E, basis, x) for x in xs}


def _embed(g: LieAlgebra, E: ModuleSpec, basis: list, space: Subspace) -> Subspace:
    if E.v_count is None:
        return space
    idx = basis_index(g.dim, E.degree)
    full = len(basis_tuples(g.dim, E.degree))
    return Subspace.span([{idx[basis[c]]: v for c, v in r.items()} for r in space.rows], full)


def invariants(g: LieAlgebra, E, acting: str = "g") -> Subspace:
    """E_acting = {u in E : X u = 0 for X in the acting subalgebra}, in Lambda^k g coordinates."""
    E = parse_module(E)
    basis, xs, actions = _module_data(g, E, acting)
    eqs: dict = {}
    for x in xs:
        for col, img in enumerate(actions[x]):
            for o, c in img.items():
                eqs.setdefault((x, o), {})[col] = c
    space = nullspace(eqs.values(), len(basis))
    return _embed(g, E, basis, space)


def elements(g: LieAlgebra, degree: int, space: Subspace) -> list[MultiVector]:
    """The echelon basis of ``space`` (in Lambda^degree g coordinates) as multivectors."""
    return [MultiVector.from_vector(g, degree, v) for v in space.basis()]


# ---------------------------------------------------------------------------
# cocycles f: (acting subalgebra) -> E.  Unknown layout: f(e_x) occupies the
# block of columns [pos(x) * dim E, (pos(x) + 1) * dim E).

def cocycle_space(g: LieAlgebra, E, acting: str = "g") -> Subspace:
    E = parse_module(E)
    basis, xs, actions = _module_data(g, E, acting)
    d = len(basis)
    where = {x: n for n, x in enumerate(xs)}
    eqs = []
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            x, y = xs[a], xs[b]
            rows: dict = {}
            # f([e_x, e_y])
            for k, ck in g.bracket_basis(x, y).items():
                if k not in where:
                    raise UnsupportedModule(f"acting set {acting!r} is not a subalgebra")
                for e in range(d):
                    row = rows.setdefault(e, {})
                    col = where[k] * d + e
                    row[col] = row.get(col, 0) + ck
            # - e_x f(e_y) + e_y f(e_x)
            for src, sign, other in ((x, -1, y), (y, 1, x)):
                for e, img in enumerate(actions[src]):
                    col = where[other] * d + e
                    for o, c in img.items():
                        row = rows.setdefault(o, {})
                        row[col] = row.get(col, 0) + sign * c
            eqs.extend(rows.values())
    return nullspace(eqs, len(xs) * d)


def coboundary_space(g: LieAlgebra, E, acting: str = "g") -> Subspace:
    """Span of x -> x u for u in E, in the cocycle unknown layout."""
    E = parse_module(E)
    basis, xs, actions = _module_data(g, E, acting)
    d = len(basis)
    vecs = []
    for u in range(d):
        v = {}
        for n, x in enumerate(xs):
            for o, c in actions[x][u].items():
                v[n * d + o] = c
        vecs.append(v)
    return Subspace.span(vecs, len(xs) * d)


@dataclass(frozen=True)
class CohomologyReport:
    module: str
    acting: str
    dim_Z: int
    dim_B: int

    @property
    def dim_H(self) -> int:
        return self.dim_Z - self.dim_B


def cohomology(g: LieAlgebra, E, acting: str = "g") -> CohomologyReport:
    E = parse_module(E)
    Z = cocycle_space(g, E, acting)
    B = coboundary_space(g, E, acting)
    if not B.issubset(Z):
        raise AssertionError("a coboundary failed the cocycle equations")
    return CohomologyReport(str(E), acting, Z.dim, B.dim)


def cohomology_dim(g: LieAlgebra, E, acting: str = "g") -> int:
    return cohomology(g, E, acting).dim_H


# ---------------------------------------------------------------------------
# intertwiners T: E1 -> E2, unknown T[o][i] at column o * dim E1 + i

def intertwiner_space(g: LieAlgebra, E1, E2, acting: str = "h") -> Subspace:
    E1, E2 = parse_module(E1), parse_module(E2)
    b1, xs, act1 = _module_data(g, E1, acting)
    b2, _, act2 = _module_data(g, E2, acting)
    d1, d2 = len(b1), len(b2)
    eqs = []
    for x in xs:
        # (T A1 - A2 T)[o][i] = sum_j T[o][j] A1[j][i] - sum_m A2[o][m] T[m][i]
        rows: dict = {}
        for i, img in enumerate(act1[x]):
            for j, c in img.items():
                for o in range(d2):
                    row = rows.setdefault((o, i), {})
                    col = o * d1 + j
                    row[col] = row.get(col, 0) + c
        for m, img in enumerate(act2[x]):
            for o, c in img.items():
                for i in range(d1):
                    row = rows.setdefault((o, i), {})
                    col = m * d1 + i
                    row[col] = row.get(col, 0) - c
        eqs.extend(rows.values())
    return nullspace(eqs, d1 * d2)


def intertwiner_matrices(g: LieAlgebra, E1, E2, space: Subspace) -> list:
    d1 = len(module_basis(g, parse_module(E1)))
    return [[v[o * d1:(o + 1) * d1] for o in range(len(v) // d1)] for v in space.basis()]


# ---------------------------------------------------------------------------
# the cocycle condition on b in V ^ h for a triangular c in Lambda^2 h

def _check_c(c: MultiVector):
    g = c.algebra
    if not c.is_rational():
        raise ParameterizedInput("instantiate the parameters of c first")
    blocks = split_by_v_count(c)
    if c.degree != 2 or not all(blk.is_zero() for blk in blocks[1:]):
        raise NotTriangular("c must lie in Lambda^2 h")
    if not schouten_bracket(c, c).is_zero():
        raise NotTriangular("[c, c] != 0")
    return g


def _mixed_basis(g: LieAlgebra) -> list:
    return [t for t in basis_tuples(g.dim, 2) if v_count(g, t) == 1]


def solve_b_cocycle(c: MultiVector) -> Subspace:
    """Solutions b in V ^ h of b([a,b]_c) = c(a) b(b) - c(b) b(a) over dual pairs of h*.

    Returned in the coordinates of Lambda^2 g.
    """
    g = _check_c(c)
    h = g.grading.h
    dual = {i: MultiVector.basis(g, i) for i in h}
    cmap = {i: r_map(c, dual[i]) for i in h}
    pairs = [(i, j) for n, i in enumerate(h) for j in h[n + 1:]]
    brackets = {(i, j): coadjoint(cmap[i], dual[j]) - coadjoint(cmap[j], dual[i]) for i, j in pairs}
    mixed = _mixed_basis(g)
    # residual of each unknown basis element, per (pair, V component)
    eqs: dict = {}
    for col, t in enumerate(mixed):
        b = MultiVector._raw(g, 2, {t: Fraction(1)})
        for i, j in pairs:
            res = (r_map(b, brackets[(i, j)]) - act(cmap[i], r_map(b, dual[j]))
                   + act(cmap[j], r_map(b, dual[i])))
            for (o,), val in res.items():
                eqs.setdefault((i, j, o), {})[col] = val
    space = nullspace(eqs.values(), len(mixed))
    return _embed(g, ModuleSpec(2, 1), mixed, space)


def b_cocycle_space_via_schouten(c: MultiVector) -> Subspace:
    """The same solution set computed as {b in V ^ h : [b, c] = 0}."""
    g = _check_c(c)
    mixed = _mixed_basis(g)
    eqs: dict = {}
    for col, t in enumerate(mixed):
        w = schouten_bracket(MultiVector._raw(g, 2, {t: Fraction(1)}), c)
        for key, val in w.items():
            eqs.setdefault(key, {})[col] = val
    space = nullspace(eqs.values(), len(mixed))
    return _embed(g, ModuleSpec(2, 1), mixed, space)


def translation_family(c: MultiVector) -> Subspace:
    """Span of {v c : v in V}, the coboundary-type solutions."""
    g = c.algebra
    return Subspace.span([act(MultiVector.basis(g, v), c).to_sparse() for v in g.grading.V],
                         len(basis_tuples(g.dim, 2)))
