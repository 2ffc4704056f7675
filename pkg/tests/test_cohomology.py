from fractions import Fraction
from itertools import combinations

import pytest
import sympy as sp

import oracles as O
from bialg.cohomology import (b_cocycle_space_via_schouten, cohomology, elements, intertwiner_space,
                              invariants, parse_module, solve_b_cocycle, translation_family)
from bialg.errors import NotTriangular, ParameterizedInput, UnsupportedModule
from bialg.exterior import MultiVector, wedge
from bialg.poincare import make_inhomogeneous, poincare
from bialg.scalar import Poly

A = poincare()
G = A.algebra


@pytest.mark.parametrize("text", ["R", "g", "L2g", "L3g", "V", "h", "L2V", "Vh", "L2h", "L2Vh",
                                  "VL2h", "L3V", "L3h"])
def test_module_spec_round_trip(text):
    assert str(parse_module(text)) == text


@pytest.mark.parametrize("text", ["L4g", "Foo", "VV", "L2VL2h"])
def test_module_spec_rejected(text):
    with pytest.raises(UnsupportedModule):
        parse_module(text)


def test_non_submodule_rejected():
    with pytest.raises(UnsupportedModule):
        invariants(G, "h", acting="g")


def test_invariants_at_1_3():
    assert invariants(G, "L2g").dim == 0
    inv = invariants(G, "L3g")
    assert inv.dim == 1
    (u,) = elements(G, 3, inv)
    om = A["Omega"]
    k = next(iter(u.coeffs))
    assert u * om[k] == om * u[k]
    assert invariants(G, "L2g", acting="h").dim == 0


def test_first_cohomology_at_1_3():
    rep = cohomology(G, "L2g")
    assert (rep.dim_Z, rep.dim_B, rep.dim_H) == (45, 45, 0)
    rep_h = cohomology(G, "L2g", acting="h")
    assert (rep_h.dim_Z, rep_h.dim_B) == (45, 45)


@pytest.mark.parametrize("pq,dim", [((1, 2), 15), ((3, 0), 15), ((4, 0), 45), ((2, 2), 45)])
def test_first_cohomology_vanishes(pq, dim):
    rep = cohomology(make_inhomogeneous(*pq).algebra, "L2g")
    assert rep.dim_Z == rep.dim_B == dim


def _oracle_cocycle_dim(pq):
    """dim Z(g, L2g) by sympy rank on the brute-force cocycle system."""
    labels, sc = O.structure_constants(*pq)
    d = len(labels)
    biv = list(combinations(range(d), 2))
    pos = {t: n for n, t in enumerate(biv)}
    nb = len(biv)
    rows = []
    for x, y in combinations(range(d), 2):
        # f([x,y]) - x.f(y) + y.f(x) = 0, unknown f(e_i)[t] at column i*nb + pos[t]
        blocks = {}
        for k, c in sc.get((x, y), {}).items():
            for t in biv:
                blocks.setdefault(t, {})
                col = k * nb + pos[t]
                blocks[t][col] = blocks[t].get(col, 0) + c
        for src, sgn, other in ((y, -1, x), (x, 1, y)):
            for t in biv:
                img = O._ad_vector(sc, other, {t: 1})
                for key, c in img.items():
                    col = src * nb + pos[t]
                    blocks.setdefault(key, {})
                    blocks[key][col] = blocks[key].get(col, 0) + sgn * c
        for eq in blocks.values():
            row = [0] * (d * nb)
            for col, c in eq.items():
                row[col] = c
            rows.append(row)
    M = sp.Matrix(rows)
    return d * nb - M.rank()


def test_cocycle_dimension_matches_oracle():
    g = make_inhomogeneous(1, 2).algebra
    assert cohomology(g, "L2g").dim_Z == _oracle_cocycle_dim((1, 2))


@pytest.mark.parametrize("pq,dim", [((1, 3), 2), ((2, 2), 2), ((4, 0), 2), ((1, 2), 1), ((3, 0), 1)])
def test_mor_h_h(pq, dim):
    assert intertwiner_space(make_inhomogeneous(*pq).algebra, "h", "h").dim == dim


def test_other_intertwiners_vanish():
    assert intertwiner_space(G, "V", "h").dim == 0
    assert intertwiner_space(G, "V", "L2h").dim == 0


def test_mor_h_h_oracle():
    # the commutant of ad h on h, solved with sympy
    labels, sc = O.structure_constants(1, 3)
    hs = list(range(4, 10))
    ad = {x: sp.Matrix(6, 6, lambda a, b: sc.get((x, hs[b]), {}).get(hs[a], 0)) for x in hs}
    T = sp.Matrix(6, 6, sp.symbols("t0:36"))
    eqs = [e for x in hs for e in (T * ad[x] - ad[x] * T)]
    sol = sp.linsolve(eqs, list(T))
    (vals,) = sol
    free = set().union(*(sp.sympify(v).free_symbols for v in vals))
    assert len(free) == 2


def c_of(label):
    cs = {
        "JX+^X+": wedge(A["JX+"], A["X+"]),
        "JH^H": wedge(A["JH"], A["H"]),
    }
    return cs[label]


def row5_c(gamma):
    return wedge(A["H"], A["X+"]) - wedge(A["JH"], A["JX+"]) + wedge(A["JX+"], A["X+"]) * gamma


def test_b_cocycles_for_nilpotent_c():
    c = c_of("JX+^X+")
    sol = solve_b_cocycle(c)
    assert sol.dim == 9
    assert sol.rows == b_cocycle_space_via_schouten(c).rows


def test_b_cocycles_for_cartan_c():
    c = c_of("JH^H")
    sol = solve_b_cocycle(c)
    assert sol.dim == 4
    assert sol <= translation_family(c)
    assert sol.rows == b_cocycle_space_via_schouten(c).rows


@pytest.mark.parametrize("gamma", [0, 1, -1])
def test_b_cocycles_for_row5_c(gamma):
    c = row5_c(gamma)
    sol = solve_b_cocycle(c)
    assert sol.dim == 4
    assert sol <= translation_family(c)


def test_b_cocycle_input_checks():
    with pytest.raises(NotTriangular):
        solve_b_cocycle(wedge(A["e0"], A["H"]))
    with pytest.raises(NotTriangular):
        solve_b_cocycle(wedge(A["H"], A["X+"]) + wedge(A["JH"], A["X-"]))
    with pytest.raises(ParameterizedInput):
        solve_b_cocycle(wedge(A["JX+"], A["X+"]) * Poly.var("k"))
