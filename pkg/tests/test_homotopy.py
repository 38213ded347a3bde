import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import ce_betti, curved_complex as _complex, curved_seed as _seed, \
    curved_structure as _curved_structure, failing, structure_constants
from lieruth import fixtures as F
from lieruth.algebroid import AConnection, Connection
from lieruth.errors import ExtensionError, NotExactError, NotRegularError, UnsupportedBaseError
from lieruth.ruth import (Ruth, adjoint, double, exact_homotopy, exact_rep, intertwiner, long_exact_sequence,
                          serre_rep, split_by_form_degree, transfer, trivial)
from lieruth.ruth.homotopy import homotopy_reports

def test_exact_homotopy_identities():
    cx = _complex()
    assert failing(homotopy_reports(cx, exact_homotopy(cx))) == []


def test_exact_rep_reproduces_the_double():
    A = F.tangent(("x", "y"))
    D = double(A, AConnection(A, [[["y"]], [["x*y"]]]))
    low = {g: sum(split_by_form_degree(img, A.r).get(p, D.algebra.zero()) for p in (0, 1)) + D.algebra.zero()
           for g, img in D.images.items()}
    E = exact_rep(D.with_images(low))
    assert all(E.image(g) == D.image(g) for g in D.gens)


@settings(max_examples=5)
@given(st.integers(0, 10 ** 6))
def test_exact_rep_on_curved_fixture_and_intertwiner(seed):
    rng = random.Random(seed)
    E1 = exact_rep(_curved_structure(rng))
    assert failing(E1.check_structure()) == []
    E2 = exact_rep(_complex(), seed=_seed(rng))
    assert failing(E2.check_structure()) == []
    T = intertwiner(E1, E2)
    assert failing(T.check()) == []
    assert T.is_isomorphism()


def test_twisted_structure_has_omega3():
    E = exact_rep(_curved_structure(random.Random(3)))
    assert not E.component(3).is_zero()


def test_non_exact_complex_is_refused():
    g = F.aff1()
    cx = Ruth.from_table(g, [("u", 0), ("v", 1), ("w", 1)], {"u": [((), "v", 1)]})
    with pytest.raises(NotExactError):
        exact_homotopy(cx)


def test_non_unit_laplacian_is_refused():
    A = F.line_action()
    cx = Ruth.from_table(A, [("u", 0), ("v", 1)], {"u": [((), "v", "x")]})
    with pytest.raises(NotRegularError):
        exact_homotopy(cx)


@pytest.mark.parametrize("name", sorted(F.lie_algebra_fixtures()))
def test_transfer_of_adjoint_preserves_cohomology(name):
    g = F.lie_algebra_fixtures()[name]
    ad = adjoint(g, Connection(g))
    res = transfer(ad)
    assert failing(res.reports) == []
    assert res.ruth.cohomology() == ad.cohomology()


def test_serre_rep_of_heisenberg():
    h3 = F.heisenberg()
    S = serre_rep(h3, [2])
    assert failing(S.ruth.check_structure()) == []
    betti = [b for _, b in S.ruth.cohomology()]
    assert betti == ce_betti(structure_constants(h3)) == [1, 2, 2, 1]
    assert not S.ruth.component(2).is_zero()
    res = transfer(S.ruth)
    assert failing(res.reports) == []
    assert [b for _, b in res.ruth.cohomology()] == betti


def test_serre_rep_with_a_non_trivial_splitting():
    h3 = F.heisenberg()
    S = serre_rep(h3, [2], splitting=[[1], [-2]])
    assert failing(S.ruth.check_structure()) == []
    assert [b for _, b in S.ruth.cohomology()] == [1, 2, 2, 1]


def test_serre_rep_of_aff1():
    a = F.aff1()
    S = serre_rep(a, [1])
    assert [b for _, b in S.ruth.cohomology()] == [b for _, b in trivial(a).cohomology()]


def test_serre_rep_rejects_non_ideals_and_chart_bases():
    with pytest.raises(ExtensionError):
        serre_rep(F.aff1(), [0])
    with pytest.raises(UnsupportedBaseError):
        serre_rep(F.line_action(), [0])


def test_long_exact_sequence_for_serre_rep():
    les = long_exact_sequence(serre_rep(F.heisenberg(), [2]).ruth)
    assert len(les.nodes) >= 6
    assert failing(les.reports) == []
    # the connecting map is wedge with a nonzero ω2
    assert any(les.map_ranks[idx] for idx in range(2, len(les.map_ranks), 3))


def test_long_exact_sequence_with_nonzero_differential():
    g = F.abelian(2)
    bundle = [("u1", 0), ("u2", 0), ("v1", 1), ("v2", 1)]
    rep = Ruth.from_table(g, bundle, {"u1": [((), "v1", 1)], "v2": [((0, 1), "u2", 1)]})
    assert failing(rep.check_structure()) == []
    les = long_exact_sequence(rep)
    assert failing(les.reports) == []
