import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import adjoint_matrices, ce_betti, structure_constants
from lieruth import fixtures as F
from lieruth.algebroid import schouten
from lieruth.errors import DegreeBoundError, StructureError
from lieruth.ruth import DeformationCochain, K1Differential, deformation_betti, deformation_differential, \
    k_differential_check, psi_intertwines
from lieruth.ruth.deformation import as_deformation_cochain, random_cochain

ACTIONS = {"R⋉R": F.line_action, "aff1⋉R": F.affine_line_action, "so3⋉R3": F.rotation_action,
           "bundle": F.lie_bundle_x, "T R^2": lambda: F.tangent(("x", "y"))}


@pytest.mark.parametrize("name", sorted(F.lie_algebra_fixtures()))
def test_point_base_deformation_cohomology_is_adjoint_cohomology(name):
    g = F.lie_algebra_fixtures()[name]
    c = structure_constants(g)
    assert deformation_betti(g) == ce_betti(c, adjoint_matrices(c))


@settings(max_examples=10)
@given(st.sampled_from(sorted(ACTIONS)), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_differential_squares_to_zero(name, degree, seed):
    A = ACTIONS[name]()
    if degree + 2 > 3:
        degree = 1
    c = random_cochain(A, degree, random.Random(seed))
    assert deformation_differential(deformation_differential(c)).is_zero()


@settings(max_examples=10)
@given(st.sampled_from(["R⋉R", "aff1⋉R", "so3⋉R3", "bundle"]), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_psi_intertwines_differentials(name, degree, seed):
    A = ACTIONS[name]()
    rng = random.Random(seed)
    conn = F.random_connections(A, 1, seed=seed)[0]
    c = random_cochain(A, degree, rng)
    rep = psi_intertwines(A, conn, c)
    assert rep.ok, rep.witness


def test_cochain_evaluation_follows_the_symbol():
    A = F.affine_line_action()
    x = A.coordinate(0)
    c = DeformationCochain(A, 1, {(0,): (x, A.zero()), (1,): (A.zero(), A.one())}, {(): (x * x,)})
    # c(f e1) = f c(e1) + σ(f) e1
    f = x * x + 1
    assert c((f, A.zero())) == (f * x + 2 * x * x * x, A.zero())


def test_inner_derivation_is_a_coboundary():
    A = F.rotation_action()
    x, y, z = (A.coordinate(a) for a in range(3))
    alpha0 = (y, x * z, A.one())
    inner = as_deformation_cochain(K1Differential.inner(A, alpha0))
    minus = DeformationCochain(A, 0, {(): tuple(-f for f in alpha0)})
    assert deformation_differential(minus) == inner
    assert deformation_differential(inner).is_zero()


def test_degree_bound(monkeypatch):
    A = F.rotation_action()
    monkeypatch.setenv("RUTH_MAX_TUPLE_DEGREE", "1")
    c = random_cochain(A, 1, random.Random(0))
    with pytest.raises(DegreeBoundError):
        deformation_differential(c)


def test_invalid_cochain_keys():
    A = F.aff1()
    with pytest.raises(StructureError):
        DeformationCochain(A, 2, {(1, 0): (A.one(), A.one())})


NONABELIAN = {"aff1": F.aff1, "sl2": F.sl2, "h3": F.heisenberg, "aff1⋉R": F.affine_line_action,
              "so3⋉R3": F.rotation_action, "bundle": F.lie_bundle_x}


@pytest.mark.parametrize("name", sorted(NONABELIAN))
def test_inner_one_differential_accepted_identity_rejected(name):
    A = NONABELIAN[name]()
    rng = random.Random(1)
    alpha0 = tuple(F.random_poly(rng, A.coordinates, 1) or A.one() for _ in range(A.r))
    verdict = k_differential_check(A, K1Differential.inner(A, alpha0))
    assert verdict.classification == "k-differential"
    verdict = k_differential_check(A, K1Differential.identity(A))
    assert verdict.classification == "almost-only"
    assert verdict.reports[-1].witness


def test_identity_witness_on_aff1():
    verdict = k_differential_check(F.aff1(), K1Differential.identity(F.aff1()))
    assert verdict.reports[-1].witness == "(e1, e2): (-1)*e2"


def test_not_almost_candidate():
    A = F.affine_line_action()
    alg = A.multivector_algebra()
    # δ(α) = α_1² e1 is not additive over functions
    delta = K1Differential(A, 1, lambda f: alg.zero(), lambda al: alg.gen(0).scale(al[0] * al[0]))
    assert k_differential_check(A, delta).classification == "not-almost"


def test_schouten_with_a_bivector_is_a_two_differential():
    A = F.rotation_action()
    alg = A.multivector_algebra()
    x = A.coordinate(0)
    pi = alg.monomial((0, 1), x) + alg.monomial((1, 2), 1)

    def on_section(alpha):
        el = alg.zero()
        for j, f in enumerate(alpha):
            if f:
                el = el + alg.gen(j).scale(f)
        return schouten(A, pi, el)

    delta = K1Differential(A, 2, lambda f: schouten(A, pi, alg.scalar(f)), on_section)
    assert k_differential_check(A, delta).classification == "k-differential"


def test_table_candidates_agree_with_the_deformation_complex():
    A = F.aff1()
    alg = A.multivector_algebra()
    good = K1Differential.from_tables(A, 1, [], [alg.zero(), alg.gen(1)])
    bad = K1Differential.from_tables(A, 1, [], [alg.gen(0), alg.gen(1)])
    for delta, expected in ((good, True), (bad, False)):
        closed = deformation_differential(as_deformation_cochain(delta)).is_zero()
        assert closed == expected == k_differential_check(A, delta).is_k_differential
