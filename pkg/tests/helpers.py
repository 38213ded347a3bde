from hypothesis import strategies as st

from lieruth import fixtures as F
from lieruth.algebroid import AConnection
from lieruth.ruth import Ruth, transported_connection, twist_connection
from lieruth.symcore import Poly

VARS = ("x", "y")

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def failing(reports):
    return [(r.name, r.witness) for r in reports if not r.ok]


@st.composite
def polys(draw, variables=VARS, max_degree=2, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_degree)) for _ in variables)
        terms[exps] = draw(fractions)
    return Poly(variables, terms)


def structure_constants(A):
    """c[k][i][j] as Fractions for a point-base algebroid."""
    return [[[A.structure[k][i][j].constant_value() for j in range(A.r)] for i in range(A.r)] for k in range(A.r)]


def adjoint_matrices(c):
    """ad(e_i) as matrices: ad(e_i) e_j = Σ_k c^k_{ij} e_k."""
    r = len(c)
    return [[[c[k][i][j] for j in range(r)] for k in range(r)] for i in range(r)]


def coadjoint_matrices(c):
    ad = adjoint_matrices(c)
    r = len(c)
    return [[[-ad[i][j][k] for j in range(r)] for k in range(r)] for i in range(r)]


def ce_betti(c, rep=None):
    """Betti numbers of the Chevalley–Eilenberg complex C(g; V), computed with sympy.

    ``c[k][i][j]`` are the structure constants and ``rep[i]`` the matrix of e_i on V
    (trivial one-dimensional V when omitted).
    """
    import sympy
    from itertools import combinations

    r = len(c)
    if rep is None:
        rep = [[[0]] for _ in range(r)]
    n = len(rep[0]) if r else 1

    def sort_sign(seq):
        seq = list(seq)
        if len(set(seq)) != len(seq):
            return 0, None
        sign = 1
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i] > seq[j]:
                    sign = -sign
        return sign, tuple(sorted(seq))

    basis = {k: [(I, a) for I in combinations(range(r), k) for a in range(n)] for k in range(r + 1)}
    ranks = {}
    for k in range(r):
        rows = {key: i for i, key in enumerate(basis[k + 1])}
        M = sympy.zeros(len(basis[k + 1]), len(basis[k]))
        for col, (I, a) in enumerate(basis[k]):
            for K in combinations(range(r), k + 1):
                for i in range(k + 1):
                    rest = K[:i] + K[i + 1:]
                    if rest == I:
                        for b in range(n):
                            M[rows[(K, b)], col] += (-1) ** i * rep[K[i]][b][a]
                for i in range(k + 1):
                    for j in range(i + 1, k + 1):
                        rest = K[:i] + K[i + 1:j] + K[j + 1:]
                        for l in range(r):
                            coeff = c[l][K[i]][K[j]]
                            if not coeff:
                                continue
                            sign, key = sort_sign((l,) + rest)
                            if sign and key == I:
                                M[rows[(K, a)], col] += (-1) ** (i + j) * sign * coeff
        ranks[k] = M.rank()
    dims = [len(basis[k]) for k in range(r + 1)]
    return [dims[k] - ranks.get(k, 0) - ranks.get(k - 1, 0) for k in range(r + 1)]


CX_BUNDLE = [("s0", 0), ("s1", 1), ("s2", 1), ("s3", 2)]
CX_TABLE = {"s0": [((), "s1", 1), ((), "s2", 1)], "s1": [((), "s3", 1)], "s2": [((), "s3", -1)]}


B = F.lie_bundle_x()


def curved_complex():
    """The exact rank-(1,2,1) complex over the bundle of Lie algebras c³₁₂ = x."""
    return Ruth.from_table(B, CX_BUNDLE, CX_TABLE)


def curved_seed(rng):
    return AConnection(B, [[[F.random_poly(rng, B.coordinates, 1) for _ in range(4)] for _ in range(4)]
                           for _ in range(3)])


def curved_structure(rng):
    """A transported connection twisted so that d∇(h) ≠ 0 and ω3 appears."""
    base = transported_connection(curved_complex(), curved_seed(rng))
    alg = base.algebra
    ix = alg.index
    S = {ix["s1"]: alg.monomial((0, ix["s0"]), F.random_poly(rng, B.coordinates, 1)) + alg.monomial((2, ix["s0"]), 1),
         ix["s3"]: alg.monomial((1, ix["s2"]), F.random_poly(rng, B.coordinates, 1))
         + alg.monomial((0, ix["s1"]), B.coordinate(0))}
    return twist_connection(base, S)
