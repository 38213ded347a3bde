import random
from itertools import combinations

import pytest
import sympy
from hypothesis import given, strategies as st

from helpers import failing
from lieruth import fixtures as F
from lieruth.algebroid import (ChartAlgebroid, Connection, basic_curvature, basic_curvature_tensoriality,
                               curvature_identities, evaluate_form, schouten)
from lieruth.errors import StructureError

ALL = dict(F.curvature_fixtures(), **{"so3⋉R3": F.rotation_action(), "aff1⋉R": F.affine_line_action(),
                                      "T R^2": F.tangent(("x", "y")), "split": F.split_bundle()})


@pytest.mark.parametrize("name", sorted(ALL))
def test_fixtures_are_lie_algebroids(name):
    assert ALL[name].verify_axioms() is None


def test_perturbed_bracket_fails_jacobi_with_witness():
    kind, triple, residue = F.perturbed_split_bundle().verify_axioms()
    assert (kind, triple) == ("jacobi", (1, 2, 3))
    assert [str(x) for x in residue] == ["2*x", "0", "0"]


def test_anchor_not_a_homomorphism_is_reported():
    A = ChartAlgebroid.from_brackets(("x", "y"), 2, anchor=[["1", "0"], ["0", "1"]],
                                     brackets={(0, 1): ["1", "0"]})
    kind, pair, _ = A.verify_axioms()
    assert (kind, pair) == ("anchor", (1, 2))


def test_structure_must_be_antisymmetric():
    z, o = "0", "1"
    with pytest.raises(StructureError):
        ChartAlgebroid((), [[], []], [[[z, o], [o, z]], [[z, z], [z, z]]])


@pytest.mark.parametrize("name", sorted(ALL))
def test_curvature_identities_on_random_connections(name):
    A = ALL[name]
    for conn in F.random_connections(A, 4, seed=11):
        assert failing(curvature_identities(A, conn)) == []
        assert basic_curvature_tensoriality(A, conn) is None


@given(st.integers(0, 10 ** 6))
def test_curvature_identities_hold_for_quadratic_connections(seed):
    A = F.affine_line_action()
    conn = F.random_connections(A, 1, seed=seed, degree=2)[0]
    assert failing(curvature_identities(A, conn)) == []


def test_flat_connection_on_action_algebroid_has_zero_basic_curvature():
    A = F.rotation_action()
    R = basic_curvature(A, Connection.flat(A))
    assert all(not x for a in R for b in a for c in b for x in c)


def _sympy_basic_curvature(A, conn):
    """Rbas(e_i,e_j)(∂_b) from the five-term formula, recomputed in sympy."""
    xs = sympy.symbols(A.coordinates)
    conv = lambda p: sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(A.coordinates, xs)))
    rho = sympy.Matrix([[conv(p) for p in row] for row in A.anchor])  # r × m
    c = [[[conv(A.structure[k][i][j]) for j in range(A.r)] for i in range(A.r)] for k in range(A.r)]
    G = [[[conv(conn.gamma[a][i][j]) for j in range(A.r)] for i in range(A.r)] for a in range(A.m)]

    def field(v, f):
        return sum(v[a] * sympy.diff(f, xs[a]) for a in range(A.m))

    def rho_of(al):
        return [sum(al[i] * rho[i, a] for i in range(A.r)) for a in range(A.m)]

    def br(al, be):
        ra, rb = rho_of(al), rho_of(be)
        return [sympy.expand(sum(al[i] * be[j] * c[k][i][j] for i in range(A.r) for j in range(A.r))
                             + field(ra, be[k]) - field(rb, al[k])) for k in range(A.r)]

    def nab(X, al):
        return [sympy.expand(field(X, al[i]) + sum(X[a] * G[a][i][j] * al[j]
                                                   for a in range(A.m) for j in range(A.r))) for i in range(A.r)]

    def bas_tm(al, X):
        ra = rho_of(al)
        return [sympy.expand(u + field(ra, X[b]) - field(X, ra[b]))
                for b, u in enumerate(rho_of(nab(X, al)))]

    e = [[1 if k == i else 0 for k in range(A.r)] for i in range(A.r)]
    d = [[1 if k == b else 0 for k in range(A.m)] for b in range(A.m)]
    out = {}
    for i, j in combinations(range(A.r), 2):
        for b in range(A.m):
            X = d[b]
            terms = [nab(X, br(e[i], e[j])), br(nab(X, e[i]), e[j]), br(e[i], nab(X, e[j])),
                     nab(bas_tm(e[j], X), e[i]), nab(bas_tm(e[i], X), e[j])]
            out[(i, j, b)] = [sympy.expand(t0 - t1 - t2 - t3 + t4) for t0, t1, t2, t3, t4 in zip(*terms)]
    return xs, out


@pytest.mark.parametrize("fixture", [F.affine_line_action, F.rotation_action, F.lie_bundle_x])
def test_basic_curvature_matches_sympy(fixture):
    A = fixture()
    conn = F.random_connections(A, 1, seed=5, degree=1)[0]
    R = basic_curvature(A, conn)
    xs, expected = _sympy_basic_curvature(A, conn)
    for (i, j, b), vec in expected.items():
        got = [sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(A.coordinates, xs))) for p in R[i][j][b]]
        assert [sympy.expand(g - v) for g, v in zip(got, vec)] == [0] * A.r


@pytest.mark.parametrize("name", sorted(ALL))
def test_koszul_differential_squares_to_zero(name):
    A = ALL[name]
    alg = A.form_algebra()
    d = A.d_A(alg)
    for k in range(A.r):
        assert d(d(alg.gen(k))) == 0
    for a in range(A.m):
        f = alg.scalar(A.coordinate(a) * A.coordinate(a))
        assert d(d(f)) == 0


def test_koszul_differential_matches_cartan_formula():
    # dθ(e_i, e_j) = ρ_i θ(e_j) − ρ_j θ(e_i) − θ([e_i, e_j]) for θ = f θ^k
    A = F.affine_line_action()
    alg = A.form_algebra()
    d = A.d_A(alg)
    x = A.coordinate(0)
    for k in range(A.r):
        f = x * x + 3
        form = alg.monomial((k,), f)
        for i, j in combinations(range(A.r), 2):
            th = lambda alpha: alpha[k] * f
            ei, ej = A.basis_section(i), A.basis_section(j)
            expected = A.rho_i(i, th(ej)) - A.rho_i(j, th(ei)) - th(A.bracket(ei, ej))
            assert evaluate_form(d(form), A.r, [i, j]).coefficient(()) == expected


def _multivector(A, rng):
    alg = A.multivector_algebra()
    out = alg.zero()
    for mono in ([], [0], [1], [0, 1], [1, 2], [0, 2]):
        if rng.random() < 0.5 and all(i < A.r for i in mono):
            out = out + alg.monomial(mono, F.random_poly(rng, A.coordinates, 1))
    return out


def _homogeneous_parts(P):
    parts = {}
    for m, c in P.terms.items():
        parts.setdefault(len(m), {})[m] = c
    return [(k, type(P)(P.algebra, t)) for k, t in parts.items()]


@given(st.integers(0, 10 ** 6))
def test_schouten_graded_jacobi_and_antisymmetry(seed):
    rng = random.Random(seed)
    A = F.rotation_action()
    P, Q, R = (_multivector(A, rng) for _ in range(3))
    for p, Pp in _homogeneous_parts(P):
        for q, Qq in _homogeneous_parts(Q):
            sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
            assert schouten(A, Pp, Qq) == -(schouten(A, Qq, Pp) * sign)
            for r_, Rr in _homogeneous_parts(R):
                lhs = schouten(A, Pp, schouten(A, Qq, Rr))
                s2 = -1 if ((p - 1) * (q - 1)) % 2 else 1
                rhs = schouten(A, schouten(A, Pp, Qq), Rr) + schouten(A, Qq, schouten(A, Pp, Rr)) * s2
                assert lhs == rhs


def test_schouten_on_low_degrees():
    A = F.affine_line_action()
    alg = A.multivector_algebra()
    x = A.coordinate(0)
    e1, e2 = alg.gen(0), alg.gen(1)
    assert schouten(A, e1, alg.scalar(x)) == alg.scalar(-x)
    assert schouten(A, e1, e2) == e2
    # [x e1, e2] = x[e1, e2] − ρ(e2)(x) e1
    assert schouten(A, e1.scale(x), e2) == e2.scale(x) - e1
