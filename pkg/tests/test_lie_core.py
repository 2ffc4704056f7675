from fractions import Fraction
from itertools import combinations

import pytest

import oracles as O
from bialg.errors import AntisymmetryViolation, DimensionMismatch, JacobiViolation, NotARepresentation
from bialg.exterior import MultiVector
from bialg.lie import (Metric, act, adjoint_matrix, algebra_from_doc, algebra_to_doc, bracket,
                       build_lie_algebra, matrix_lie_algebra, semidirect_product)
from bialg.poincare import make_inhomogeneous
from conftest import signatures


def sl2():
    # [h,e] = 2e, [h,f] = -2f, [e,f] = h
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][1], c[1][0][1] = 2, -2
    c[0][2][2], c[2][0][2] = -2, 2
    c[1][2][0], c[2][1][0] = 1, -1
    return build_lie_algebra(["h", "e", "f"], c)


def test_sl2_brackets():
    g = sl2()
    h, e, f = (g.element(x) for x in "hef")
    assert bracket(g, e, f) == h
    assert bracket(g, h, e) == e * 2
    assert adjoint_matrix(g, h)[1][1] == 2


def test_antisymmetry_violation():
    c = [[[0] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][0] = 1
    with pytest.raises(AntisymmetryViolation):
        build_lie_algebra(["x", "y"], c)


def test_jacobi_violation():
    # [x,y] = z, [y,z] = x, [z,x] = z fails Jacobi
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 2)]:
        c[i][j][k], c[j][i][k] = 1, -1
    with pytest.raises(JacobiViolation):
        build_lie_algebra(["x", "y", "z"], c)


def test_shape_error():
    with pytest.raises(DimensionMismatch):
        build_lie_algebra(["x", "y"], [[[0, 0]]])


def test_semidirect_product_rejects_non_representation():
    g = sl2()
    bad = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 1], [0, 0]]]
    with pytest.raises(NotARepresentation):
        semidirect_product(bad, g, 2)


def test_semidirect_product_defining_rep():
    g = sl2()
    rep = [[[1, 0], [0, -1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]]
    s = semidirect_product(rep, g, 2, ["v0", "v1"])
    assert s.dim == 5 and s.grading.V == (0, 1)
    e, v1 = s.element("e"), s.element("v1")
    assert bracket(s, e, v1) == s.element("v0")


def test_matrix_lie_algebra_so3():
    E = lambda i, j: [[Fraction(int((a, b) == (i, j)) - int((a, b) == (j, i))) for b in range(3)]
                      for a in range(3)]
    g = matrix_lie_algebra([E(1, 2), E(2, 0), E(0, 1)], ["Lx", "Ly", "Lz"])
    # E12 E20 - E20 E12 = -E01 for E_ij = e_ij - e_ji
    assert bracket(g, g.element("Lx"), g.element("Ly")) == g.element("Lz") * -1


@pytest.mark.parametrize("pq", signatures())
def test_inhomogeneous_structure_constants_match_affine_matrices(pq):
    A = make_inhomogeneous(*pq)
    g = A.algebra
    labels, sc = O.structure_constants(*pq)
    assert labels == list(g.labels)
    for i in range(g.dim):
        for j in range(g.dim):
            want = {k: Fraction(int(c.p), int(c.q)) for k, c in sc.get((i, j), {}).items()}
            assert g.bracket_basis(i, j) == want


@pytest.mark.parametrize("pq", signatures())
def test_action_is_a_representation_on_bivectors(pq):
    g = make_inhomogeneous(*pq).algebra
    u = MultiVector(g, 2, {(0, g.dim - 1): 1, (1, 2): Fraction(1, 2)})
    for i, j in combinations(range(g.dim), 2):
        X, Y = MultiVector.basis(g, i), MultiVector.basis(g, j)
        lhs = act(bracket(g, X, Y), u)
        rhs = act(X, act(Y, u)) - act(Y, act(X, u))
        assert lhs == rhs


def test_metric_signature_and_inverse():
    m = Metric.diagonal(1, 3)
    assert m([1, 0, 0, 0], [1, 0, 0, 0]) == 1
    assert m([0, 1, 0, 0], [0, 1, 0, 0]) == -1
    assert m.raise_(m.lower([1, 2, 3, 4])) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        Metric.from_matrix([[1, 0], [0, 1]], (1, 1))


def test_algebra_doc_round_trip():
    g = make_inhomogeneous(1, 3).algebra
    g2 = algebra_from_doc(algebra_to_doc(g))
    assert g2.labels == g.labels and g2.grading == g.grading
    assert all(g2.bracket_basis(i, j) == g.bracket_basis(i, j)
               for i in range(g.dim) for j in range(g.dim))
