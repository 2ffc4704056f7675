from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from bialg.linalg import Frame, Subspace, annihilator, nullspace, rank, rref, solve
from bialg.scalar import Poly

entries = st.integers(-4, 4)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=1, max_size=max_rows))


def dense(rows, ncols):
    return [[r.get(j, Fraction(0)) for j in range(ncols)] for r in rows]


@given(matrices())
def test_rref_matches_sympy(m):
    ncols = len(m[0])
    ours = rref([{j: x for j, x in enumerate(row) if x} for row in m])
    ref, _ = sp.Matrix(m).rref()
    ref_rows = [list(ref.row(i)) for i in range(ref.rows) if any(ref.row(i))]
    assert dense(ours, ncols) == [[Fraction(int(x.p), int(x.q)) for x in row] for row in ref_rows]


@given(matrices())
def test_rank_nullity(m):
    ncols = len(m[0])
    rows = [{j: x for j, x in enumerate(row) if x} for row in m]
    ns = nullspace(rows, ncols)
    assert rank(rows) + ns.dim == ncols
    assert rank(rows) == sp.Matrix(m).rank()
    for v in ns.basis():
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)


@given(matrices(4, 5), matrices(4, 5))
def test_subspace_lattice(m1, m2):
    n = 5
    pad = lambda m: [row + [0] * (n - len(row)) for row in m]
    U, W = Subspace.span(pad(m1), n), Subspace.span(pad(m2), n)
    S, I = U + W, U & W
    assert U <= S and W <= S and I <= U and I <= W
    assert S.dim + I.dim == U.dim + W.dim


@given(matrices(4, 5))
def test_annihilator_is_orthogonal_complement(m):
    n = 5
    U = Subspace.span([row + [0] * (n - len(row)) for row in m], n)
    ann = annihilator(U)
    assert len(ann) == n - U.dim
    for eq in ann:
        for v in U.basis():
            assert sum(eq.get(j, 0) * v[j] for j in range(n)) == 0


def test_solve_consistent_and_inconsistent():
    eqs = [{0: 1, 1: 1}, {1: 2}]
    assert solve(eqs, [3, 4], 2) == [1, 2]
    assert solve([{0: 1}, {0: 2}], [1, 3], 1) is None


def test_frame_coordinates_relative_to_given_vectors():
    fr = Frame([[1, 1, 0], [0, 1, 1]], 3)
    coords, resid = fr.coordinates([2, 5, 3])
    assert coords == [2, 3] and not resid
    a = Poly.var("a")
    coords, resid = fr.coordinates([a, a, 0])
    assert coords == [a, 0] and not resid
    coords, resid = fr.coordinates([0, 0, 1] )
    assert resid


def test_subspace_canonical_form():
    U = Subspace.span([[2, 4, 0], [1, 2, 1]], 3)
    W = Subspace.span([[0, 0, 5], [1, 2, 0]], 3)
    assert U.rows == W.rows
    assert U.pivots == (0, 2)
    with pytest.raises(Exception):
        U.issubset(Subspace.zero(4))
