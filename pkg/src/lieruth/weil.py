"""The connection-dependent Weil algebra W(A, ∇) in local coordinates.

W(A, ∇) is generated over C∞(M) by ∂^a (bidegree (0,1)), θ^i (bidegree
(1,0)) and μ^i (bidegree (1,1)).  ∂'s and θ's are odd and μ's are even, so
the algebra is graded commutative in the total degree u + 2v + w.  The two
differentials are fixed by their values on generators and on coordinate
functions, with Γ^i_{aj}, the curvature r^i_{abj} of ∇ and the basic
curvature R^l_{jka} computed by :mod:`lieruth.algebroid`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import List, Optional, Tuple

from .algebroid import _poly, ChartAlgebroid, Connection, IdentityReport, basic_curvature
from .errors import StructureError, UnsupportedBaseError
from .fixtures import random_poly
from .graded import Derivation, Element, GradedAlgebra, cohomology_ranks, complex_from_operator
from .symcore import Poly

HALF = Fraction(1, 2)


class WeilAlgebra:
    """Generators in the order ∂^1..∂^m, θ^1..θ^r, μ^1..μ^r."""

    def __init__(self, algebroid: ChartAlgebroid, connection: Connection | None = None):
        A = algebroid
        self.algebroid = A
        self.connection = connection if connection is not None else Connection.flat(A)
        m, r = A.m, A.r
        names = ([f"∂^{x}" for x in A.coordinates] + [f"θ{i + 1}" for i in range(r)]
                 + [f"μ{i + 1}" for i in range(r)])
        parities = [(1,)] * (m + r) + [(0,)] * r
        degrees = [1] * (m + r) + [2] * r
        self.algebra = GradedAlgebra(A.coordinates, names, parities, degrees)
        self.dx_gens = list(range(m))
        self.theta_gens = list(range(m, m + r))
        self.mu_gens = list(range(m + r, m + 2 * r))
        self.bidegrees = [(0, 1)] * m + [(1, 0)] * r + [(1, 1)] * r
        self.hor, self.ver = self._tables()
        self.total = self.hor + self.ver

    # generators

    def dx(self, a: int) -> Element:
        return self.algebra.gen(self.dx_gens[a])

    def theta(self, i: int) -> Element:
        return self.algebra.gen(self.theta_gens[i])

    def mu(self, i: int) -> Element:
        return self.algebra.gen(self.mu_gens[i])

    def generators(self) -> List[int]:
        return self.dx_gens + self.theta_gens + self.mu_gens

    def bidegree(self, mono) -> Tuple[int, int]:
        p = sum(self.bidegrees[g][0] for g in mono)
        q = sum(self.bidegrees[g][1] for g in mono)
        return p, q

    def element_bidegrees(self, x: Element):
        return {self.bidegree(m) for m in x.terms}

    # the six generator formulas

    def _tables(self):
        A = self.algebroid
        alg = self.algebra
        m, r = A.m, A.r
        G = self.connection.gamma            # G[a][i][j] = Γ^i_{aj}
        rho = A.anchor                        # rho[i][a] = ρ^a_i
        c = A.structure                       # c[i][j][k] = c^i_{jk}
        curv = self._connection_curvature()   # curv[a][b][j][i] = r^i_{abj}
        R = basic_curvature(A, self.connection)   # R[j][k][a][l] = R^l_{jka}
        th, dx, mu = self.theta, self.dx, self.mu

        def term(coeff, *factors):
            out = alg.scalar(coeff)
            for f in factors:
                out = out * f
            return out

        ver = {}
        hor = {}
        for a in range(m):
            ver[self.dx_gens[a]] = alg.zero()
            img = alg.zero()
            for i in range(r):
                if rho[i][a]:
                    img = img - term(rho[i][a], mu(i))
                for b in range(m):
                    coeff = rho[i][a].partial(b)
                    for j in range(r):
                        if G[b][j][i] and rho[j][a]:
                            coeff = coeff - G[b][j][i] * rho[j][a]
                    if coeff:
                        img = img + term(coeff, th(i), dx(b))
            hor[self.dx_gens[a]] = img
        for i in range(r):
            img = mu(i)
            for a in range(m):
                for j in range(r):
                    if G[a][i][j]:
                        img = img - term(G[a][i][j], dx(a), th(j))
            ver[self.theta_gens[i]] = img

            img = alg.zero()
            for a in range(m):
                for j in range(r):
                    if G[a][i][j]:
                        img = img - term(G[a][i][j], dx(a), mu(j))
            for a in range(m):
                for b in range(m):
                    for j in range(r):
                        if curv[a][b][j][i]:
                            img = img + term(curv[a][b][j][i] * HALF, dx(a), dx(b), th(j))
            ver[self.mu_gens[i]] = img

            img = alg.zero()
            for j in range(r):
                for k in range(r):
                    if c[i][j][k]:
                        img = img - term(c[i][j][k] * HALF, th(j), th(k))
            hor[self.theta_gens[i]] = img

            img = alg.zero()
            for j in range(r):
                for k in range(r):
                    coeff = c[i][j][k]
                    for a in range(m):
                        if rho[k][a] and G[a][i][j]:
                            coeff = coeff + rho[k][a] * G[a][i][j]
                    if coeff:
                        img = img - term(coeff, th(j), mu(k))
            for j in range(r):
                for k in range(r):
                    for a in range(m):
                        if R[j][k][a][i]:
                            img = img + term(R[j][k][a][i] * HALF, th(j), th(k), dx(a))
            hor[self.mu_gens[i]] = img

        # on functions: d_ver f = ∂_a(f) ∂^a and d_hor f = ∂_a(f) ρ^a_i θ^i
        ver_coords = [dx(a) for a in range(m)]
        hor_coords = []
        for a in range(m):
            img = alg.zero()
            for i in range(r):
                if rho[i][a]:
                    img = img + term(rho[i][a], th(i))
            hor_coords.append(img)
        return (Derivation(alg, (1,), hor, hor_coords), Derivation(alg, (1,), ver, ver_coords))

    def _connection_curvature(self):
        A = self.algebroid
        m, r = A.m, A.r
        out = [[[[A.zero()] * r for _ in range(r)] for _ in range(m)] for _ in range(m)]
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                for j in range(r):
                    val = self.connection.curvature(A.basis_field(a), A.basis_field(b), A.basis_section(j))
                    out[a][b][j] = list(val)
        return out

    def table(self, which: str = "total") -> List[str]:
        """Canonically ordered lines ``d(g) = …`` for every generator and coordinate."""
        d = self._which(which)
        alg = self.algebra
        lines = []
        for g in self.generators():
            lines.append(f"d_{which}({alg.names[g]}) = {d.image(g)}")
        for a, x in enumerate(self.algebroid.coordinates):
            img = d.coord_images[a]
            lines.append(f"d_{which}({x}) = {img if img is not None else 0}")
        return lines

    def _which(self, which: str) -> Derivation:
        if which == "hor":
            return self.hor
        if which == "ver":
            return self.ver
        if which == "total":
            return self.total
        raise StructureError(f"unknown differential {which!r}; use hor, ver or total")


def build_weil(A: ChartAlgebroid, nabla: Connection | None = None) -> WeilAlgebra:
    return WeilAlgebra(A, nabla)


def weil_d(W: WeilAlgebra, e: Element, which: str = "total") -> Element:
    return W._which(which)(e)


def weil_square_reports(W: WeilAlgebra, samples: int = 50, seed: int = 0) -> List[IdentityReport]:
    """d_hor² = 0, d_ver² = 0, d_hor d_ver + d_ver d_hor = 0, d² = 0 and bidegree bookkeeping."""
    A = W.algebroid
    alg = W.algebra
    probes = [(alg.names[g], alg.gen(g)) for g in W.generators()]
    probes += [(x, alg.scalar(A.coordinate(a))) for a, x in enumerate(A.coordinates)]
    rng = random.Random(seed)
    if A.m:
        for n in range(samples):
            f = random_poly(rng, A.coordinates, 2)
            probes.append((f"f{n + 1} = {f}", alg.scalar(f)))
    hor, ver, tot = W.hor, W.ver, W.total
    checks = [
        ("d_hor² = 0", lambda x: hor(hor(x))),
        ("d_ver² = 0", lambda x: ver(ver(x))),
        ("d_hor d_ver + d_ver d_hor = 0", lambda x: hor(ver(x)) + ver(hor(x))),
        ("d² = 0", lambda x: tot(tot(x))),
    ]
    reports = []
    for name, fn in checks:
        witness = None
        for label, x in probes:
            res = fn(x)
            if res:
                witness = f"{label}: {res}"
                break
        reports.append(IdentityReport(name, witness is None, witness))
    witness = None
    for g in W.generators():
        p, q = W.bidegrees[g]
        for d, shift in ((hor, (1, 0)), (ver, (0, 1))):
            want = (p + shift[0], q + shift[1])
            got = W.element_bidegrees(d.image(g))
            if got - {want}:
                witness = f"{alg.names[g]}: {sorted(got)} instead of {want}"
    for a in range(A.m):
        if W.element_bidegrees(hor.coord_images[a] or alg.zero()) - {(1, 0)} or \
                W.element_bidegrees(ver.coord_images[a] or alg.zero()) - {(0, 1)}:
            witness = f"{A.coordinates[a]}: wrong bidegree"
    reports.append(IdentityReport("bidegrees", witness is None, witness))
    return reports


# Kalkman's BRST differential

@dataclass
class BrstResult:
    status: str
    generator: Optional[str] = None
    weil: Optional[Element] = None
    brst: Optional[Element] = None

    @property
    def equal(self):
        return self.status == "equal"


def kalkman_differential(W: WeilAlgebra, iota_sign: int = 1) -> Derivation:
    """δ = d_W ⊗ 1 + 1 ⊗ d_DR + Σ θ^i ⊗ L_i − Σ μ^i ⊗ ι_i on W(g) ⊗ Ω(M), with dx^a ↦ ∂^a.

    L_i and ι_i are taken along the fundamental fields ρ(e_i); ``iota_sign``
    flips the ι-term for mutation tests.
    """
    A = W.algebroid
    alg = W.algebra
    m, r = A.m, A.r
    c = A.structure
    images = {}
    for i in range(r):
        img = W.mu(i)
        for j, k in combinations(range(r), 2):
            if c[i][j][k]:
                img = img - W.theta(j) * W.theta(k) * alg.scalar(c[i][j][k])
        images[W.theta_gens[i]] = img
        img = alg.zero()
        for j in range(r):
            for k in range(r):
                if c[i][j][k]:
                    img = img - W.theta(j) * W.mu(k) * alg.scalar(c[i][j][k])
        images[W.mu_gens[i]] = img
    for a in range(m):
        img = alg.zero()
        for i in range(r):
            fa = A.anchor[i][a]
            for b in range(m):
                dfa = fa.partial(b)      # L_i dx^a = d(ρ^a_i)
                if dfa:
                    img = img + W.theta(i) * W.dx(b) * alg.scalar(dfa)
            if fa:                       # ι_i dx^a = ρ^a_i
                img = img - W.mu(i) * alg.scalar(fa * iota_sign)
        images[W.dx_gens[a]] = img
    coords = []
    for a in range(m):
        img = W.dx(a)
        for i in range(r):
            if A.anchor[i][a]:
                img = img + W.theta(i) * alg.scalar(A.anchor[i][a])
        coords.append(img)
    return Derivation(alg, (1,), images, coords)


def brst_compare(A: ChartAlgebroid, iota_sign: int = 1) -> BrstResult:
    """Compare W(A, ∇flat) with Kalkman's differential generator by generator."""
    if not A.has_constant_structure():
        raise StructureError("not an action algebroid: the structure functions depend on the coordinates")
    W = build_weil(A, Connection.flat(A))
    kal = kalkman_differential(W, iota_sign)
    alg = W.algebra
    order = W.dx_gens + W.theta_gens + W.mu_gens
    for g in order:
        lhs, rhs = W.total.image(g), kal.image(g)
        if lhs != rhs:
            return BrstResult("differs", alg.names[g], lhs, rhs)
    for a, x in enumerate(A.coordinates):
        lhs = W.total.coord_images[a] or alg.zero()
        rhs = kal.coord_images[a] or alg.zero()
        if lhs != rhs:
            return BrstResult("differs", x, lhs, rhs)
    return BrstResult("equal")


# cohomology at a point base

def weil_basis(W: WeilAlgebra, degree: int) -> List[tuple]:
    r = W.algebroid.r
    out = []
    for v in range(degree // 2 + 1):
        w = degree - 2 * v
        if w > r:
            continue
        for I in combinations(W.theta_gens, w):
            for J in combinations_with_replacement(W.mu_gens, v):
                out.append(tuple(sorted(I + J)))
    return out


def weil_cohomology(W: WeilAlgebra, N: int = 6) -> List[int]:
    """Betti numbers of W(g) in total degrees 0..N−1.

    Monomials in each total degree are finite in number, so the ranks are
    exact; μ-degree is bounded by N through the degree window.
    """
    if not W.algebroid.is_point_base():
        raise UnsupportedBaseError("Weil cohomology is computed only at a point base "
                                   "(over a chart every degree is infinite-dimensional)")
    if N < 1:
        raise StructureError("the degree cutoff must be positive")
    basis = {k: weil_basis(W, k) for k in range(N + 1)}
    cx = complex_from_operator(W.algebra, basis, W.total)
    return [b for k, b in cohomology_ranks(cx) if k < N]


# IM forms

@dataclass
class ImVerdict:
    is_im: bool
    reports: List[IdentityReport]

    @property
    def failing(self):
        return next((r for r in self.reports if not r.ok), None)


def _sigma(A: ChartAlgebroid, sigma) -> List[List[Poly]]:
    if len(sigma) != A.r or any(len(col) != A.m for col in sigma):
        raise StructureError(f"σ needs {A.r} columns of {A.m} entries")
    return [[_poly(x, A.coordinates) for x in col] for col in sigma]


def _section_label(A: ChartAlgebroid, i: int) -> str:
    row = A.anchor[i]
    ones = [a for a, x in enumerate(row) if x == 1]
    if len(ones) == 1 and all(not x for a, x in enumerate(row) if a != ones[0]):
        return f"∂_{A.coordinates[ones[0]]}"
    return f"e{i + 1}"


def im_form_check(A: ChartAlgebroid, sigma) -> ImVerdict:
    """Both IM equations on all basis pairs; σ[i][a] is the dx^a-coefficient of σ(e_i).

    ⟨σα, ρβ⟩ + ⟨σβ, ρα⟩ = 0 and
    σ[α,β] − L_{ρα}σβ + L_{ρβ}σα − d⟨σα, ρβ⟩ = 0.
    The second expression is C∞-linear in both slots once the first holds,
    so basis pairs decide both.
    """
    s = _sigma(A, sigma)
    m, r = A.m, A.r
    e = [A.basis_section(i) for i in range(r)]

    def apply(section):
        out = [A.zero()] * m
        for j, f in enumerate(section):
            if f:
                out = [o + f * x for o, x in zip(out, s[j])]
        return out

    def pair(form, field):
        out = A.zero()
        for a in range(m):
            if form[a] and field[a]:
                out = out + form[a] * field[a]
        return out

    def lie(field, form):
        out = []
        for b in range(m):
            v = A.apply_field(field, form[b])
            for c in range(m):
                if form[c]:
                    v = v + form[c] * field[c].partial(b)
            out.append(v)
        return out

    witness = None
    for i in range(r):
        for j in range(i, r):
            val = pair(s[i], A.rho(e[j])) + pair(s[j], A.rho(e[i]))
            if val:
                witness = f"({_section_label(A, i)}, {_section_label(A, j)}): {val}"
                break
        if witness:
            break
    first = IdentityReport("⟨σα,ρβ⟩ + ⟨σβ,ρα⟩ = 0", witness is None, witness)

    witness = None
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            ra, rb = A.rho(e[i]), A.rho(e[j])
            val = apply(A.bracket(e[i], e[j]))
            la, lb = lie(ra, s[j]), lie(rb, s[i])
            h = pair(s[i], rb)
            res = [v - x + y - h.partial(b) for b, (v, x, y) in enumerate(zip(val, la, lb))]
            if any(res):
                shown = " + ".join(f"({f})*d{A.coordinates[b]}" for b, f in enumerate(res) if f)
                witness = f"({_section_label(A, i)}, {_section_label(A, j)}): {shown}"
                break
        if witness:
            break
    second = IdentityReport("σ[α,β] − L_ρα σβ + L_ρβ σα − d⟨σα,ρβ⟩ = 0", witness is None, witness)
    return ImVerdict(first.ok and second.ok, [first, second])


def im_cocycle(W: WeilAlgebra, sigma) -> Element:
    """c = d_ver(Σ σ_{ia} θ^i ∂^a) ∈ W^{1,2}; σ is IM exactly when d_hor c = 0."""
    A = W.algebroid
    s = _sigma(A, sigma)
    alg = W.algebra
    c1 = alg.zero()
    for i in range(A.r):
        for a in range(A.m):
            if s[i][a]:
                c1 = c1 + W.theta(i) * W.dx(a) * alg.scalar(s[i][a])
    return W.ver(c1)


def im_form_check_weil(W: WeilAlgebra, sigma) -> bool:
    return not W.hor(im_cocycle(W, sigma))
