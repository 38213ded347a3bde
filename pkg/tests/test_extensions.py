import random
from itertools import product

import pytest
import sympy

from helpers import failing
from lieruth import fixtures as F
from lieruth.algebroid import AConnection, Connection
from lieruth.ruth import Ruth, adjoint, double, extension_from_length1, serre_rep


def _to_sympy(p, xs, names):
    return sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(names, xs)))


def _atiyah_brackets(A, conn):
    """Brackets of first-order operators ∇_{∂_i} + S on R^n-valued functions.

    [∇_X + S, ∇_Y + T] = ∇_[X,Y] + R(X,Y) + ∇_X T − ∇_Y S + [S, T] on coordinate fields.
    Returns the End(E) part of each bracket in the frame (E_ab, ∂_i) as sympy matrices.
    """
    xs = sympy.symbols(A.coordinates)
    n = conn.n
    G = [sympy.Matrix(n, n, lambda k, j: _to_sympy(conn.matrices[i][k][j], xs, A.coordinates)) for i in range(A.r)]

    def unit(a, b):
        return sympy.Matrix(n, n, lambda k, j: 1 if (k, j) == (a, b) else 0)

    def op(kind, idx):
        return ("field", idx, sympy.zeros(n, n)) if kind == "e" else ("hom", None, unit(*idx))

    def bracket(x, y):
        (kx, ix, S), (ky, iy, T) = x, y
        out = S * T - T * S
        if kx == "field":
            out += T.diff(xs[ix]) + G[ix] * T - T * G[ix]
        if ky == "field":
            out -= S.diff(xs[iy]) + G[iy] * S - S * G[iy]
        if kx == "field" and ky == "field":
            out += G[iy].diff(xs[ix]) - G[ix].diff(xs[iy]) + G[ix] * G[iy] - G[iy] * G[ix]
        return out.applyfunc(sympy.expand)

    frame = [op("h", ab) for ab in product(range(n), range(n))] + [op("e", i) for i in range(A.r)]
    return xs, frame, bracket


@pytest.mark.parametrize("rank", [1, 2])
def test_extension_of_the_double_is_the_atiyah_algebroid(rank):
    rng = random.Random(rank)
    A = F.tangent(("x", "y"))
    conn = AConnection(A, [[[F.random_poly(rng, A.coordinates, 2) for _ in range(rank)] for _ in range(rank)]
                           for _ in range(A.r)])
    res = extension_from_length1(double(A, conn))
    assert res.ok, failing(res.reports)
    xs, frame, bracket = _atiyah_brackets(A, conn)
    T = res.algebroid
    n_hom = rank * rank
    for u in range(T.r):
        for v in range(T.r):
            expected = bracket(frame[u], frame[v])
            got = [_to_sympy(T.structure[k][u][v], xs, A.coordinates) for k in range(n_hom)]
            assert [sympy.expand(g - e) for g, e in zip(got, list(expected))] == [0] * n_hom
            tail = [_to_sympy(T.structure[n_hom + k][u][v], xs, A.coordinates) for k in range(A.r)]
            assert tail == [0] * A.r


@pytest.mark.parametrize("fixture", [F.rotation_action, F.affine_line_action])
def test_opposite_sign_breaks_jacobi(fixture):
    A = fixture()
    conn = F.random_connections(A, 1, seed=17)[0]
    res = extension_from_length1(adjoint(A, conn), sign=1)
    assert not res.reports[0].ok


@pytest.mark.parametrize("fixture", [F.aff1, F.sl2, F.heisenberg, F.lie_bundle_x, F.rotation_action,
                                     F.affine_line_action, F.line_action])
def test_extension_of_adjoint_representations(fixture):
    A = fixture()
    for conn in F.random_connections(A, 2, seed=17):
        res = extension_from_length1(adjoint(A, conn))
        assert res.ok, failing(res.reports)


def test_zero_representation_gives_an_abelian_extension():
    g = F.sl2()
    rep = Ruth(g, [("u", 0), ("v", 1)])
    res = extension_from_length1(rep)
    assert res.ok
    T = res.algebroid
    # the Hom part is an abelian ideal on which g acts trivially
    assert all(not T.structure[k][0][j] for k in range(T.r) for j in range(T.r))
    assert [[str(T.structure[k][1 + i][1 + j]) for k in range(1, T.r)] for i in range(3) for j in range(3)] == \
           [[str(g.structure[k][i][j]) for k in range(3)] for i in range(3) for j in range(3)]


def test_extension_by_point_base_adjoint_contains_g():
    g = F.sl2()
    res = extension_from_length1(adjoint(g, Connection(g)))
    assert res.ok
    T = res.algebroid
    assert len(res.hom_names) == 0 and T.r == g.r
    assert T.structure == g.structure


def test_extension_from_serre_rep():
    res = extension_from_length1(serre_rep(F.heisenberg(), [2]).ruth)
    assert res.ok, failing(res.reports)
