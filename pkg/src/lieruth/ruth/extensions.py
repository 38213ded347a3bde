"""The algebroid extension Hom(F, E) → Ã → A attached to a length-one representation up to homotopy.

Ã = Hom(F, E) ⊕ A has anchor (S, α) ↦ ρ(α) and bracket
[(S, α), (T, β)] = ([S, T]∂ + ∇_α T − ∇_β S + K(α, β), [α, β])
with [S, T]∂ = S∂T − T∂S.  In the conventions of :class:`Ruth` (ω2 stored as
the θ^iθ^j coefficients of D on F), the Jacobi identity holds for K = −ω2,
the same sign relation as between ω2 and R∇ in the double.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List

from ..algebroid import ChartAlgebroid, IdentityReport
from ..errors import StructureError
from ..symcore import Poly
from .core import Ruth

Matrix = List[List[Poly]]


class _HomData:
    """∂, ∇ and ω2 of a length-one Ruth as matrices in the frames of E (degree 0) and F (degree 1)."""

    def __init__(self, ruth: Ruth, sign: int):
        A = ruth.algebroid
        self.A = A
        lo, hi = ruth.degree_window()
        if hi - lo > 1:
            raise StructureError("the extension needs a representation of length at most one")
        alg = ruth.algebra
        self.e_gens = [g for g in ruth.gens if alg.degrees[g] == lo]
        self.f_gens = [g for g in ruth.gens if alg.degrees[g] == lo + 1]
        self.e_names = [alg.names[g] for g in self.e_gens]
        self.f_names = [alg.names[g] for g in self.f_gens]
        ne, nf, r = len(self.e_gens), len(self.f_gens), A.r
        zero = A.zero()
        e_pos = {g: a for a, g in enumerate(self.e_gens)}
        f_pos = {g: b for b, g in enumerate(self.f_gens)}
        self.P = [[zero] * ne for _ in range(nf)]           # P[b][a]: f_b-coefficient of ∂ e_a
        self.NE = [[[zero] * ne for _ in range(ne)] for _ in range(r)]
        self.NF = [[[zero] * nf for _ in range(nf)] for _ in range(r)]
        self.K = {}
        for i, j in combinations(range(r), 2):
            self.K[(i, j)] = [[zero] * nf for _ in range(ne)]
        for a, g in enumerate(self.e_gens):
            for mono, c in ruth.image(g).terms.items():
                forms = [x for x in mono if x < r]
                tgt = mono[-1]
                if not forms:
                    self.P[f_pos[tgt]][a] = c
                elif len(forms) == 1:
                    self.NE[forms[0]][e_pos[tgt]][a] = c
        for b, g in enumerate(self.f_gens):
            for mono, c in ruth.image(g).terms.items():
                forms = tuple(x for x in mono if x < r)
                tgt = mono[-1]
                if len(forms) == 1:
                    self.NF[forms[0]][f_pos[tgt]][b] = c
                elif len(forms) == 2:
                    self.K[forms][e_pos[tgt]][b] = sign * c
        self.ne, self.nf = ne, nf

    def zero_hom(self) -> Matrix:
        return [[self.A.zero()] * self.nf for _ in range(self.ne)]

    def frame(self, a: int, b: int) -> Matrix:
        out = self.zero_hom()
        out[a][b] = self.A.one()
        return out

    def k(self, i: int, j: int) -> Matrix:
        if i == j:
            return self.zero_hom()
        if i < j:
            return self.K[(i, j)]
        return _scale(self.K[(j, i)], -1)

    def _mul(self, a: Matrix, b: Matrix, cols: int) -> Matrix:
        return _mul(a, b, cols, self.A.zero())

    def bracket(self, S: Matrix, T: Matrix) -> Matrix:
        ne, nf = self.ne, self.nf
        return _sub(self._mul(self._mul(S, self.P, ne), T, nf), self._mul(self._mul(T, self.P, ne), S, nf))

    def nabla(self, i: int, T: Matrix) -> Matrix:
        A = self.A
        out = [[A.rho_i(i, x) for x in row] for row in T]
        return _sub(_add(out, self._mul(self.NE[i], T, self.nf)), self._mul(T, self.NF[i], self.nf))

    def nabla_section(self, alpha, T: Matrix) -> Matrix:
        out = self.zero_hom()
        for i, f in enumerate(alpha):
            if f:
                out = _add(out, _scale(self.nabla(i, T), f))
        return out

    def k_section(self, alpha, beta) -> Matrix:
        out = self.zero_hom()
        for i, f in enumerate(alpha):
            for j, g in enumerate(beta):
                if f and g and i != j:
                    out = _add(out, _scale(self.k(i, j), f * g))
        return out


def _mul(a: Matrix, b: Matrix, cols: int, zero: Poly) -> Matrix:
    out = []
    for row in a:
        new = []
        for j in range(cols):
            s = zero
            for k, x in enumerate(row):
                if x and b[k][j]:
                    s = s + x * b[k][j]
            new.append(s)
        out.append(new)
    return out


def _add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _scale(a: Matrix, f) -> Matrix:
    return [[x * f for x in row] for row in a]


def _nonzero(T: Matrix) -> bool:
    return any(x for row in T for x in row)


@dataclass
class ExtensionResult:
    algebroid: ChartAlgebroid
    reports: List[IdentityReport]
    hom_names: List[str]

    @property
    def ok(self):
        return all(r.ok for r in self.reports)


def extension_from_length1(ruth: Ruth, sign: int = -1, name: str | None = None) -> ExtensionResult:
    """Build Ã with K = ``sign``·ω2 and report its axioms and the three compatibility equations.

    The frame of Ã lists the maps S_ab: f_b ↦ e_a (row-major in a, b) first,
    then the frame of A.
    """
    A = ruth.algebroid
    data = _HomData(ruth, sign)
    ne, nf, r = data.ne, data.nf, A.r
    pairs = [(a, b) for a in range(ne) for b in range(nf)]
    n_hom = len(pairs)
    rank = n_hom + r
    zero = A.zero()

    def as_vector(T: Matrix, tail=None):
        vec = [T[a][b] for a, b in pairs]
        vec += list(tail) if tail is not None else [zero] * r
        return vec

    anchor = [[zero] * A.m for _ in range(n_hom)] + [list(row) for row in A.anchor]
    structure = [[[zero] * rank for _ in range(rank)] for _ in range(rank)]

    def put(i, j, vec):
        for k, v in enumerate(vec):
            structure[k][i][j] = v
            structure[k][j][i] = -v

    for x, (a, b) in enumerate(pairs):
        for y in range(x + 1, n_hom):
            c, d = pairs[y]
            put(x, y, as_vector(data.bracket(data.frame(a, b), data.frame(c, d))))
    for i in range(r):
        for y, (c, d) in enumerate(pairs):
            put(n_hom + i, y, as_vector(data.nabla(i, data.frame(c, d))))
        for j in range(i + 1, r):
            tail = [A.structure[k][i][j] for k in range(r)]
            put(n_hom + i, n_hom + j, as_vector(data.k(i, j), tail))
    total = ChartAlgebroid(A.coordinates, anchor, structure,
                           name=name or f"ext({ruth.name or 'ruth'})")

    reports = []
    failure = total.verify_axioms()
    reports.append(IdentityReport("Ã is a Lie algebroid", failure is None,
                                  None if failure is None else str(failure)))
    reports.append(_derivation_report(data, pairs))
    reports.append(_curvature_report(data, pairs))
    reports.append(_closedness_report(data))
    hom_names = [f"{data.f_names[b]}→{data.e_names[a]}" for a, b in pairs]
    return ExtensionResult(total, reports, hom_names)


def _derivation_report(data: _HomData, pairs) -> IdentityReport:
    name = "∇ is a derivation of [,]∂"
    for i in range(data.A.r):
        for x, (a, b) in enumerate(pairs):
            for c, d in pairs[x:]:
                S, T = data.frame(a, b), data.frame(c, d)
                res = _sub(data.nabla(i, data.bracket(S, T)),
                           _add(data.bracket(data.nabla(i, S), T), data.bracket(S, data.nabla(i, T))))
                if _nonzero(res):
                    return IdentityReport(name, False, f"e{i + 1}, S{a + 1}{b + 1}, S{c + 1}{d + 1}: {res}")
    return IdentityReport(name, True)


def _curvature_report(data: _HomData, pairs) -> IdentityReport:
    name = "∇[β,γ]T − [∇β,∇γ]T = [T, K(β,γ)]"
    A = data.A
    for i, j in combinations(range(A.r), 2):
        br = A.bracket(A.basis_section(i), A.basis_section(j))
        for a, b in pairs:
            T = data.frame(a, b)
            lhs = _add(_sub(data.nabla_section(br, T), data.nabla(i, data.nabla(j, T))),
                       data.nabla(j, data.nabla(i, T)))
            res = _sub(lhs, data.bracket(T, data.k(i, j)))
            if _nonzero(res):
                return IdentityReport(name, False, f"e{i + 1}, e{j + 1}, S{a + 1}{b + 1}: {res}")
    return IdentityReport(name, True)


def _closedness_report(data: _HomData) -> IdentityReport:
    name = "d∇K = 0"
    A = data.A
    e = [A.basis_section(i) for i in range(A.r)]
    for i, j, k in combinations(range(A.r), 3):
        cyc = [(i, j, k), (j, k, i), (k, i, j)]
        lhs = data.zero_hom()
        rhs = data.zero_hom()
        for x, y, z in cyc:
            lhs = _add(lhs, data.k_section(A.bracket(e[x], e[y]), e[z]))
            rhs = _add(rhs, data.nabla(x, data.k(y, z)))
        res = _sub(lhs, rhs)
        if _nonzero(res):
            return IdentityReport(name, False, f"e{i + 1}, e{j + 1}, e{k + 1}: {res}")
    return IdentityReport(name, True)
