import random
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from helpers import failing
from lieruth import fixtures as F
from lieruth.algebroid import Connection
from lieruth.errors import StructureError, UnsupportedBaseError
from lieruth.symcore import Poly
from lieruth.weil import (brst_compare, build_weil, im_cocycle, im_form_check, im_form_check_weil,
                          weil_cohomology, weil_d, weil_square_reports)

CHARTS = dict(F.curvature_fixtures(), **{"so3⋉R3": F.rotation_action(), "aff1⋉R": F.affine_line_action(),
                                         "T R^2": F.tangent(("x", "y")), "T R^3": F.tangent(("x", "y", "z"))})


@pytest.mark.parametrize("name", sorted(CHARTS))
def test_square_zero_under_random_connections(name):
    A = CHARTS[name]
    for conn in [Connection.flat(A)] + F.random_connections(A, 3, seed=31):
        assert failing(weil_square_reports(build_weil(A, conn), samples=10)) == []


def _standard_weil_lines(g):
    """dθ^k = −½ c^k_{ij} θ^iθ^j + μ^k and dμ^k = −c^k_{ij} θ^i μ^j, written out independently."""
    W = build_weil(g)
    alg = W.algebra
    c = [[[g.structure[k][i][j].constant_value() for j in range(g.r)] for i in range(g.r)] for k in range(g.r)]
    lines = []
    for k in range(g.r):
        d = W.mu(k)
        for i in range(g.r):
            for j in range(g.r):
                if c[k][i][j]:
                    d = d - W.theta(i) * W.theta(j) * (c[k][i][j] / 2)
        lines.append(f"d_total(θ{k + 1}) = {d}")
    for k in range(g.r):
        d = alg.zero()
        for i in range(g.r):
            for j in range(g.r):
                if c[k][i][j]:
                    d = d - W.theta(i) * W.mu(j) * c[k][i][j]
        lines.append(f"d_total(μ{k + 1}) = {d}")
    return W, lines


@pytest.mark.parametrize("name", sorted(F.lie_algebra_fixtures()))
def test_point_base_tables_match_the_standard_weil_algebra(name):
    W, expected = _standard_weil_lines(F.lie_algebra_fixtures()[name])
    assert W.table("total") == expected


def test_sl2_table_text():
    W = build_weil(F.sl2())
    assert W.table("hor")[:3] == ["d_hor(θ1) = (-1)*θ2*θ3", "d_hor(θ2) = (-2)*θ1*θ2", "d_hor(θ3) = (2)*θ1*θ3"]
    assert W.table("ver")[0] == "d_ver(θ1) = μ1"


def test_horizontal_differential_on_functions_is_d_A():
    A = F.rotation_action()
    W = build_weil(A, F.random_connections(A, 1, seed=2)[0])
    forms = A.form_algebra()
    dA = A.d_A(forms)
    f = A.coordinate(0) * A.coordinate(1) + A.coordinate(2)
    hor = weil_d(W, W.algebra.scalar(f), "hor")
    expected = dA(forms.scalar(f))
    assert {m: c for m, c in hor.terms.items()} == {(W.theta_gens[m[0]],): c for m, c in expected.terms.items()}


def test_unknown_differential_name():
    with pytest.raises(StructureError):
        build_weil(F.sl2()).table("diagonal")


@pytest.mark.parametrize("fixture", [F.line_action, F.rotation_action, F.affine_line_action])
def test_brst_equality(fixture):
    assert brst_compare(fixture()).equal


def test_brst_mutation_is_detected():
    res = brst_compare(F.line_action(), iota_sign=-1)
    assert not res.equal
    assert res.generator == "∂^x"


def test_brst_refuses_non_constant_structure():
    with pytest.raises(StructureError):
        brst_compare(F.lie_bundle_x())


def test_weil_cohomology_is_that_of_a_point():
    assert weil_cohomology(build_weil(F.abelian(1)), 6) == [1, 0, 0, 0, 0, 0]
    assert weil_cohomology(build_weil(F.aff1()), 5) == [1, 0, 0, 0, 0]
    assert weil_cohomology(build_weil(F.heisenberg()), 4) == [1, 0, 0, 0]


def test_weil_cohomology_refused_off_a_point():
    with pytest.raises(UnsupportedBaseError):
        weil_cohomology(build_weil(F.line_action()))


def _sympy_closed(omega, names):
    xs = sympy.symbols(names)
    conv = lambda p: sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(names, xs)))
    w = [[conv(p) for p in row] for row in omega]
    for a, b, c in combinations(range(len(names)), 3):
        if sympy.expand(sympy.diff(w[b][c], xs[a]) - sympy.diff(w[a][c], xs[b]) + sympy.diff(w[a][b], xs[c])):
            return False
    return True


def test_closed_form_on_the_plane_is_im():
    A = F.tangent(("x", "y"))
    verdict = im_form_check(A, [["0", "1"], ["-1", "0"]])
    assert verdict.is_im
    assert im_form_check_weil(build_weil(A), [["0", "1"], ["-1", "0"]])


def test_non_closed_form_is_rejected_with_witness():
    A = F.tangent(("x", "y", "z"))
    sigma = [["0", "z", "0"], ["-z", "0", "0"], ["0", "0", "0"]]
    verdict = im_form_check(A, sigma)
    assert not verdict.is_im
    assert verdict.failing.witness == "(∂_x, ∂_y): (-1)*dz"
    assert not im_form_check_weil(build_weil(A), sigma)


def test_non_skew_sigma_fails_the_first_equation():
    A = F.tangent(("x", "y"))
    verdict = im_form_check(A, [["1", "0"], ["0", "0"]])
    assert not verdict.reports[0].ok


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_im_verdict_matches_closedness_and_weil_oracle(seed):
    rng = random.Random(seed)
    A = F.tangent(("x", "y", "z"))
    omega = [[A.zero()] * 3 for _ in range(3)]
    for a, b in combinations(range(3), 2):
        p = F.random_poly(rng, A.coordinates, 1)
        omega[a][b], omega[b][a] = p, -p
    # σ(∂_a) = ι_{∂_a} ω = Σ_b ω_ab dx^b
    verdict = im_form_check(A, omega)
    assert verdict.is_im == _sympy_closed(omega, A.coordinates)
    conn = F.random_connections(A, 1, seed=seed)[0]
    assert im_form_check_weil(build_weil(A, conn), omega) == verdict.is_im


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_im_verdict_matches_weil_oracle_on_action_algebroids(seed):
    rng = random.Random(seed)
    A = F.affine_line_action()
    sigma = [[F.random_poly(rng, A.coordinates, 2)] for _ in range(A.r)]
    W = build_weil(A, F.random_connections(A, 1, seed=seed)[0])
    assert im_form_check_weil(W, sigma) == im_form_check(A, sigma).is_im


def test_im_cocycle_bidegree():
    A = F.tangent(("x", "y"))
    W = build_weil(A)
    c = im_cocycle(W, [["0", "x"], ["-x", "0"]])
    assert W.element_bidegrees(c) == {(1, 2)}


def test_zero_sigma_is_im():
    A = F.rotation_action()
    zero = [[Poly.zero(A.coordinates)] * A.m for _ in range(A.r)]
    assert im_form_check(A, zero).is_im
