import json
import os
import random
import shutil
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy as sp

import oracles as O
from bialg.catalog import (ENV_VAR, build_entry, check_equations, load_catalog, parameter_reduction,
                           parse_entry, sample_bindings, triangular_decomposition, verify_all,
                           verify_entry)
from bialg.errors import (CatalogParseError, MissingParameter, NotMixedBlock, ParameterizedInput,
                          UnknownEntry, UnknownVariant)
from bialg.exterior import MultiVector, split2, split3, wedge
from bialg.poincare import format_lightcone, poincare
from bialg.scalar import Poly, format_scalar
from bialg.schouten import schouten_bracket

A = poincare()
G = A.algebra
ROOT = Path(__file__).resolve().parents[1]
CAT = load_catalog()
ZERO = MultiVector.zero(G, 2)
IDS = [f"row{n}" for n in range(1, 22)] + [
    "be0+", "be1+:M1", "be1+:M1+L3", "be1+:H",
    "be1+a:k=1:+", "be1+a:k=1:-", "be1+a:k=2:+", "be1+a:k=2:-"]
SYMBOLIC = verify_all("symbolic", catalog=CAT)
KNOWN_FAILURES = {"row12"}


def W(x, y):
    return wedge(A[x], A[y])


def test_catalog_ids_and_order():
    assert list(CAT) == IDS
    assert [e.order for e in CAT.values()] == list(range(1, 30))
    assert all(e.provenance for e in CAT.values())


def test_build_row1():
    g, al, alt = Poly.var("gamma"), Poly.var("alpha"), Poly.var("alpha_t")
    e = build_entry("row1", catalog=CAT)
    assert e.c == W("JH", "H") * g and e.b == ZERO
    assert e.a == W("e+", "e-") * al + W("e1", "e2") * alt


def test_build_kappa_entry():
    lam = Poly.var("lam")
    e = build_entry("be0+", catalog=CAT)
    assert e.b == A["b_e0"] + W("e0", "M3") * lam
    assert e.a == ZERO and e.c == ZERO and e.expected_t == -1


def test_build_row19_and_bindings():
    e = build_entry("row19", {}, catalog=CAT)
    assert e.a == W("e1", "e+") and e.b == ZERO and e.c == ZERO
    r4 = build_entry("row4", {"beta": 2, "alpha1": "1/3", "alpha2": None}, catalog=CAT)
    assert r4.a == W("e+", "e1") * Fraction(1, 3) + W("e+", "e2") * Poly.var("alpha2") \
        - W("e1", "e2") * 4
    assert r4.bindings == (("alpha1", Fraction(1, 3)), ("beta", 2))


def test_build_errors():
    with pytest.raises(UnknownEntry):
        build_entry("row22", catalog=CAT)
    with pytest.raises(MissingParameter):
        build_entry("row4", {"beta": 1}, catalog=CAT)
    with pytest.raises(MissingParameter):
        build_entry("row9", catalog=CAT)
    with pytest.raises(UnknownVariant):
        build_entry("row9", {"sigma": 2, "beta": 1, "alpha": 1}, catalog=CAT)


def symbolic(eid):
    """Build with continuous parameters symbolic and discrete ones at 1."""
    e = CAT[eid]
    return build_entry(eid, dict({p: None for p in e.params}, **{d: 1 for d in e.discrete}),
                       catalog=CAT)


def test_blocks_are_graded():
    for eid in CAT:
        e = symbolic(eid)
        parts = split2(e.r)
        assert (parts.a, parts.b, parts.c) == (e.a, e.b, e.c)


@pytest.mark.parametrize("rep", SYMBOLIC.reports, ids=lambda r: r.id)
def test_symbolic_verification(rep):
    if rep.id in KNOWN_FAILURES:
        assert not rep.passed
    else:
        assert rep.passed and rep.t_matches


def test_row12_residual():
    rep = verify_entry("row12", catalog=CAT)
    assert rep.failing == ["ab"]
    assert format_lightcone(A, rep.residuals["ab"]) == "2*alpha2*e+^e1^e2"
    # the entry minus its alpha2 e-^e2 term is a solution
    ok = verify_entry("row12", {"alpha": None, "alpha1": None, "alpha2": 0, "alpha_t": None},
                      catalog=CAT)
    assert ok.passed


def test_row6_t():
    rep = verify_entry("row6", catalog=CAT)
    assert rep.passed and format_scalar(rep.t_solved) == "beta1^2"


@pytest.mark.parametrize("eid,t", [("be0+", -1), ("be1+:M1", 1), ("be1+:M1+L3", 1), ("be1+:H", 1),
                                   ("be1+a:k=1:+", 1), ("be1+a:k=2:-", 1), ("row2", 0),
                                   ("row3", 0), ("row7", 0), ("row8", 0)])
def test_solved_t(eid, t):
    assert verify_entry(eid, catalog=CAT).t_solved == t


@pytest.mark.parametrize("eid", ["row2", "row3", "row7", "row8"])
def test_light_like_rows_are_pure_vvh(eid):
    e = symbolic(eid)
    bb = split3(schouten_bracket(e.b, e.b))
    # -g(e+, e+) = 0, so no multiple of Omega survives
    assert bb.nonzero_blocks() == []


def test_c_rows_are_triangular():
    for eid in CAT:
        e = symbolic(eid)
        if not e.c.is_zero():
            assert schouten_bracket(e.c, e.c).is_zero()


def test_variants_enumerated():
    rep = verify_entry("row9", catalog=CAT)
    assert rep.passed and len(rep.variants) == 3
    one = verify_entry("row9", {"sigma": -1, "beta": 2, "alpha": 1}, catalog=CAT)
    assert one.passed and one.variants == ()


def test_sampled_agrees_with_symbolic():
    sampled = verify_all("sampled", samples=5, seed=3, catalog=CAT)
    assert [r.passed for r in sampled.reports] == [r.passed for r in SYMBOLIC.reports]
    assert sampled.failures == SYMBOLIC.failures == ["row12"]
    again = verify_all("sampled", samples=5, seed=3, catalog=CAT)
    assert [r.bindings for r in again.reports] == [r.bindings for r in sampled.reports]


def test_sample_bindings_are_nonzero_rationals():
    rng = random.Random(1)
    for _ in range(50):
        for v in sample_bindings(CAT["row12"], rng).values():
            assert v != 0 and -9 <= v <= 9


def test_empty_catalog(tmp_path):
    assert load_catalog(tmp_path) == {}
    s = verify_all(catalog={})
    assert s.reports == () and s.passed and s.pass_count == 0
    with pytest.raises(ValueError):
        verify_all("fuzzy", catalog=CAT)


# ---------------------------------------------------------------------------
# independent route: every residual recomputed with the axiomatic sympy bracket

SC = O.structure_constants(1, 3)[1]


NAMES = {p: sp.Symbol(p) for e in CAT.values() for p in e.params}


def sym(x):
    return sp.sympify(format_scalar(x).replace("^", "**"), locals=NAMES)


def to_sympy(u):
    return {k: sym(c) for k, c in u.items()}


def oracle_bracket(u, v):
    return O.schouten(SC, to_sympy(u), 2, to_sympy(v), 2)


def same(oracle, u):
    pkg = to_sympy(u)
    keys = set(oracle) | set(pkg)
    return all(sp.expand(oracle.get(k, 0) - pkg.get(k, 0)) == 0 for k in keys)


@pytest.mark.parametrize("eid", IDS)
def test_residuals_match_oracle(eid):
    e = symbolic(eid)
    res, _ = check_equations(e.a, e.b, e.c, e.expected_t)
    om = to_sympy(A["Omega"])
    bb = O.add(O.add(O.scale(oracle_bracket(e.a, e.c), 2), oracle_bracket(e.b, e.b)),
               O.scale(om, sym(e.expected_t)), -1)
    assert same(oracle_bracket(e.c, e.c), res["cc"])
    assert same(oracle_bracket(e.b, e.c), res["bc"])
    assert same(bb, res["bb"])
    assert same(oracle_bracket(e.a, e.b), res["ab"])


# ---------------------------------------------------------------------------
# negative controls

def test_row4_sign_flip():
    e = build_entry("row4", catalog=CAT)
    beta = Poly.var("beta")
    a = e.a + W("e1", "e2") * beta * beta * 2
    res, t = check_equations(a, e.b, e.c, 0)
    assert [k for k in res if not res[k].is_zero()] == ["bb"]
    assert split3(res["bb"]).nonzero_blocks() == ["vvh"]
    assert format_lightcone(A, res["bb"]) == "-4*beta^2*e+^e1^X+ + 4*beta^2*e+^e2^JX+"
    assert t is None


@pytest.mark.parametrize("k", [1, 2, 3])
def test_b_e0_missing_term(k):
    b = A["b_e0"]
    assert b == W("e1", "L1") + W("e2", "L2") + W("e3", "L3")
    res, t = check_equations(ZERO, b - W(f"e{k}", f"L{k}"), ZERO, -1)
    assert [n for n in res if not res[n].is_zero()] == ["bb"]
    assert split3(res["bb"]).nonzero_blocks() == ["vvh"] and t is None


def test_c_perturbed_by_cartan_term():
    eps = Poly.var("eps")
    c = W("JX+", "X+") + W("H", "JH") * eps
    res, _ = check_equations(ZERO, ZERO, c, 0)
    assert split3(res["cc"]).nonzero_blocks() == ["hhh"]
    assert format_lightcone(A, res["cc"]) == "4*eps*JH^X+^JX+"


# ---------------------------------------------------------------------------
# triangular decomposition

DIM_V0 = {**{n: 3 for n in (7, 8)}, **{n: 2 for n in (9, 10)},
          **{n: 1 for n in range(11, 19)}, **{n: 0 for n in (19, 20, 21)}}


def rational_b(eid):
    e = CAT[eid]
    bind = {p: Fraction(3, 2) for p in e.params}
    bind.update({d: 1 for d in e.discrete})
    return build_entry(eid, bind, catalog=CAT).b


@pytest.mark.parametrize("row", sorted(DIM_V0))
def test_stratification(row):
    td = triangular_decomposition(rational_b(f"row{row}"), A)
    assert td.V0.dim == DIM_V0[row] and td.is_subalgebra


def test_light_cone_tangent_plane():
    td = triangular_decomposition(W("e1", "JX+") + W("e+", "X+"), A)
    assert td.V0.dim == 2
    assert td.V0.contains(A["e1"].to_sparse()) and td.V0.contains(A["e+"].to_sparse())


def test_h0_of_b_e_plus():
    mu = Fraction(5, 3)
    td = triangular_decomposition(A["b_e+"] + W("e+", "JH") * mu, A)
    assert td.V0.dim == 3 and td.h0.dim == 3
    span = lambda x: td.h0.contains({k - A.n: c for (k,), c in x.items()})
    for x in (A["X+"], A["JX+"], A["H"] + A["JH"] * mu):
        assert span(x)
    assert not span(A["H"])


def test_triangular_edge_cases():
    td = triangular_decomposition(ZERO, A)
    assert td.V0.dim == 0 and td.h0.dim == 0 and td.is_subalgebra
    with pytest.raises(NotMixedBlock):
        triangular_decomposition(W("e0", "e1"), A)
    with pytest.raises(NotMixedBlock):
        triangular_decomposition(A["e0"], A)
    with pytest.raises(ParameterizedInput):
        triangular_decomposition(W("e+", "H") * Poly.var("s"), A)


# ---------------------------------------------------------------------------
# parameter counts

@pytest.mark.parametrize("eid", [e for e in IDS if CAT[e].reduction])
def test_documented_counts_realized(eid):
    rep = parameter_reduction(eid, CAT)
    assert rep.realized is True


def test_reduction_not_applicable():
    assert parameter_reduction("row5", CAT).realized is None
    assert parameter_reduction("be0+", CAT).removable is None


# ---------------------------------------------------------------------------
# files

def copy_catalog(tmp_path):
    dst = tmp_path / "cat"
    shutil.copytree(ROOT / "src" / "bialg" / "data" / "catalog", dst)
    return dst


def test_env_var_override(tmp_path, monkeypatch):
    dst = copy_catalog(tmp_path)
    (dst / "row20.json").unlink()
    monkeypatch.setenv(ENV_VAR, str(dst))
    assert "row20" not in load_catalog() and len(load_catalog()) == 28


def test_parse_errors(tmp_path):
    dst = copy_catalog(tmp_path)
    (dst / "row4.json").write_text('{"id": "row4",\n  "params": [}')
    with pytest.raises(CatalogParseError, match=r"row4\.json:2:14"):
        load_catalog(dst)
    doc = json.loads((ROOT / "src/bialg/data/catalog/row4.json").read_text())
    doc["a"]["terms"][0][1] = "alpha9"
    with pytest.raises(CatalogParseError, match="a.terms"):
        parse_entry(doc, "row4.json")
    with pytest.raises(CatalogParseError, match="missing"):
        parse_entry({"id": "x"})
    dup = dict(json.loads((ROOT / "src/bialg/data/catalog/row5.json").read_text()), id="row4")
    (dst / "row4.json").write_text((ROOT / "src/bialg/data/catalog/row4.json").read_text())
    (dst / "extra.json").write_text(json.dumps(dup))
    with pytest.raises(CatalogParseError, match="duplicate"):
        load_catalog(dst)
    with pytest.raises(CatalogParseError):
        load_catalog(tmp_path / "nowhere")


def test_shipped_files_match_generator():
    out = subprocess.run([sys.executable, str(ROOT / "tools" / "build_catalog.py"), "--check"],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
