"""The deformation complex of an algebroid, its bridge to Ω(A; Ad), and k-differentials.

A deformation k-cochain is stored by its values c(e_I) on increasing basis
k-tuples and its symbol σ(e_J) on increasing (k-1)-tuples.  Values on
arbitrary sections follow from antisymmetry and the multiderivation rule
c(…, f α) = f c(…, α) + L_{σ(…)}(f) α, applied slot by slot.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Dict, List, Sequence, Tuple

from ..algebroid import (ChartAlgebroid, Connection, IdentityReport, Section, VectorField, add_sections,
                         schouten)
from ..errors import DegreeBoundError, StructureError
from ..fixtures import random_poly
from ..graded import Element, PointComplex, cohomology_ranks, shuffle_sign
from ..symcore import Poly
from .constructions import adjoint
from .core import Ruth

DEFAULT_MAX_TUPLE_DEGREE = 3


def max_tuple_degree() -> int:
    value = os.environ.get("RUTH_MAX_TUPLE_DEGREE")
    if not value:
        return DEFAULT_MAX_TUPLE_DEGREE
    try:
        return int(value)
    except ValueError:
        raise DegreeBoundError(f"RUTH_MAX_TUPLE_DEGREE must be an integer, got {value!r}")


def _check_degree(k: int):
    bound = max_tuple_degree()
    if k > bound:
        raise DegreeBoundError(f"deformation cochains of degree {k} exceed the tuple bound {bound} "
                               f"(raise RUTH_MAX_TUPLE_DEGREE to allow it)")


def _sorted_key(js: Sequence[int]):
    """(sign, increasing tuple) for antisymmetric evaluation, sign 0 on repeats."""
    if len(set(js)) != len(js):
        return 0, None
    return shuffle_sign(js), tuple(sorted(js))


class DeformationCochain:
    def __init__(self, algebroid: ChartAlgebroid, degree: int,
                 values: Dict[Tuple[int, ...], Section] | None = None,
                 symbol: Dict[Tuple[int, ...], VectorField] | None = None):
        A = algebroid
        self.algebroid = A
        self.degree = degree
        self.values: Dict[Tuple[int, ...], Section] = {}
        self.symbol: Dict[Tuple[int, ...], VectorField] = {}
        for I, v in (values or {}).items():
            I = tuple(I)
            if len(I) != degree or list(I) != sorted(set(I)):
                raise StructureError(f"value key {I} is not an increasing {degree}-tuple")
            if len(v) != A.r:
                raise StructureError(f"value at {I} must have {A.r} components")
            if any(v):
                self.values[I] = tuple(v)
        for J, X in (symbol or {}).items():
            J = tuple(J)
            if degree == 0 or len(J) != degree - 1 or list(J) != sorted(set(J)):
                raise StructureError(f"symbol key {J} is not an increasing {degree - 1}-tuple")
            if len(X) != A.m:
                raise StructureError(f"symbol at {J} must have {A.m} components")
            if any(X):
                self.symbol[J] = tuple(X)

    def __repr__(self):
        return f"DeformationCochain(degree={self.degree}, values={len(self.values)}, symbol={len(self.symbol)})"

    def is_zero(self) -> bool:
        return not self.values and not self.symbol

    def __eq__(self, other):
        return (isinstance(other, DeformationCochain) and self.degree == other.degree
                and self.values == other.values and self.symbol == other.symbol)

    def basis_value(self, js: Sequence[int]) -> Section:
        sign, key = _sorted_key(js)
        if not sign or key not in self.values:
            return self.algebroid.zero_section()
        return tuple(x * sign for x in self.values[key])

    def basis_symbol(self, js: Sequence[int]) -> VectorField:
        sign, key = _sorted_key(js)
        if not sign or key not in self.symbol:
            return self.algebroid.zero_field()
        return tuple(x * sign for x in self.symbol[key])

    def symbol_at(self, sections: Sequence[Section]) -> VectorField:
        A = self.algebroid
        out = [A.zero()] * A.m
        for js in product(range(A.r), repeat=len(sections)):
            coeff = A.one()
            for s, j in zip(sections, js):
                coeff = coeff * s[j]
                if not coeff:
                    break
            if not coeff:
                continue
            X = self.basis_symbol(js)
            out = [o + coeff * x for o, x in zip(out, X)]
        return tuple(out)

    def __call__(self, *sections: Section) -> Section:
        A = self.algebroid
        k = self.degree
        if len(sections) != k:
            raise StructureError(f"a degree-{k} cochain takes {k} sections")
        out = list(A.zero_section())
        for js in product(range(A.r), repeat=k):
            fs = [s[j] for s, j in zip(sections, js)]
            if not all(fs):
                continue
            total = A.one()
            for f in fs:
                total = total * f
            val = self.basis_value(js)
            out = [o + total * v for o, v in zip(out, val)]
            for i in range(k):
                rest = js[:i] + js[i + 1:]
                X = self.basis_symbol(rest)
                if not any(X):
                    continue
                coeff = A.apply_field(X, fs[i])
                for l, f in enumerate(fs):
                    if l != i:
                        coeff = coeff * f
                if (k - 1 - i) % 2:
                    coeff = -coeff
                out[js[i]] = out[js[i]] + coeff
        return tuple(out)


def _koszul(c: DeformationCochain, sections: Sequence[Section]) -> Section:
    A = c.algebroid
    n = len(sections)
    out = A.zero_section()
    for i, j in combinations(range(n), 2):
        rest = [s for t, s in enumerate(sections) if t not in (i, j)]
        val = c(A.bracket(sections[i], sections[j]), *rest)
        if (i + j) % 2:
            val = tuple(-x for x in val)
        out = add_sections(out, val)
    for i in range(n):
        rest = [s for t, s in enumerate(sections) if t != i]
        val = A.bracket(sections[i], c(*rest))
        if i % 2:
            val = tuple(-x for x in val)
        out = add_sections(out, val)
    return out


def deformation_differential(c: DeformationCochain) -> DeformationCochain:
    """δc by the Koszul formula; the symbol of δc is read off from δc(…, x_a e_1) − x_a δc(…, e_1)."""
    A = c.algebroid
    k = c.degree + 1
    _check_degree(k)
    e = [A.basis_section(i) for i in range(A.r)]
    values = {}
    for I in combinations(range(A.r), k):
        values[I] = _koszul(c, [e[i] for i in I])
    symbol = {}
    if A.m and A.r:
        for J in combinations(range(A.r), k - 1):
            base = _koszul(c, [e[j] for j in J] + [e[0]])
            X = []
            for a in range(A.m):
                x = A.coordinate(a)
                shifted = _koszul(c, [e[j] for j in J] + [tuple(x * f for f in e[0])])
                diff = [s - x * b for s, b in zip(shifted, base)]
                if any(diff[1:]):
                    raise StructureError(f"δc is not a multiderivation at {J}: {diff}")
                X.append(diff[0])
            symbol[J] = tuple(X)
    return DeformationCochain(A, k, values, symbol)


def random_cochain(A: ChartAlgebroid, degree: int, rng: random.Random, poly_degree: int = 1,
                   with_symbol: bool = True) -> DeformationCochain:
    v = A.coordinates
    values = {I: tuple(random_poly(rng, v, poly_degree) for _ in range(A.r))
              for I in combinations(range(A.r), degree)}
    symbol = {}
    if with_symbol and degree > 0:
        symbol = {J: tuple(random_poly(rng, v, poly_degree) for _ in range(A.m))
                  for J in combinations(range(A.r), degree - 1)}
    return DeformationCochain(A, degree, values, symbol)


# the bridge to the adjoint representation

def psi_bridge(A: ChartAlgebroid, nabla: Connection, c: DeformationCochain, ruth: Ruth | None = None) -> Element:
    """Ψ(c) = (c_∇, −σ_c) ∈ Ω^k(A; A) ⊕ Ω^{k−1}(A; TM) as an element of the adjoint's algebra, with
    c_∇(α_1..α_k) = c(α_1..α_k) + (−1)^{k−1} Σ_i (−1)^i ∇_{σ(α_1..α̂_i..α_k)} α_i.
    """
    ad = ruth if ruth is not None else adjoint(A, nabla)
    alg = ad.algebra
    a_gens = ad.gens[:A.r]
    t_gens = ad.gens[A.r:]
    k = c.degree
    e = [A.basis_section(i) for i in range(A.r)]
    out = alg.zero()
    for I in combinations(range(A.r), k):
        val = list(c.basis_value(I))
        for i in range(k):
            rest = I[:i] + I[i + 1:]
            X = c.basis_symbol(rest)
            if not any(X):
                continue
            cov = nabla.nabla(X, e[I[i]])
            sign = -1 if (k - 1 + i + 1) % 2 else 1
            val = [v + sign * w for v, w in zip(val, cov)]
        for l, f in enumerate(val):
            if f:
                out = out + alg.monomial(I + (a_gens[l],), f)
    if k >= 1:
        for J in combinations(range(A.r), k - 1):
            X = c.basis_symbol(J)
            for b, f in enumerate(X):
                if f:
                    out = out - alg.monomial(J + (t_gens[b],), f)
    return out


def psi_intertwines(A: ChartAlgebroid, nabla: Connection, c: DeformationCochain,
                    ruth: Ruth | None = None) -> IdentityReport:
    """Check Ψ(δc) = D_Ad(Ψ(c)) exactly."""
    ad = ruth if ruth is not None else adjoint(A, nabla)
    lhs = psi_bridge(A, nabla, deformation_differential(c), ad)
    rhs = ad.D(psi_bridge(A, nabla, c, ad))
    res = lhs - rhs
    name = f"Ψ∘δ = D_Ad∘Ψ in degree {c.degree}"
    return IdentityReport(name, not res, None if not res else str(res))


def deformation_complex(A: ChartAlgebroid) -> PointComplex:
    """C_def(g) at a point base: C^k(g; g) with the Chevalley–Eilenberg differential."""
    if not A.is_point_base():
        raise StructureError("the deformation complex is finite-dimensional only at a point base")
    r = A.r
    _check_degree(r)
    bases = {k: [(I, l) for I in combinations(range(r), k) for l in range(r)] for k in range(r + 1)}
    maps = []
    for k in range(r):
        src, tgt = bases[k], bases[k + 1]
        pos = {key: n for n, key in enumerate(tgt)}
        mat = [[0] * len(src) for _ in tgt]
        for col, (I, l) in enumerate(src):
            vec = tuple(A.one() if t == l else A.zero() for t in range(r))
            dc = deformation_differential(DeformationCochain(A, k, {I: vec}))
            for J, val in dc.values.items():
                for t, f in enumerate(val):
                    if f:
                        mat[pos[(J, t)]][col] = f.constant_value()
        maps.append(mat)
    return PointComplex(0, [len(bases[k]) for k in range(r + 1)], maps)


def deformation_betti(A: ChartAlgebroid) -> List[int]:
    return [b for _, b in cohomology_ranks(deformation_complex(A))]


# k-differentials

@dataclass
class KDifferentialVerdict:
    classification: str
    reports: List[IdentityReport]

    @property
    def is_k_differential(self):
        return self.classification == "k-differential"


class K1Differential:
    """A candidate almost k-differential: δ on functions (values in Γ(Λ^{k−1}A)) and on sections
    (values in Γ(Λ^k A)), elements of ``A.multivector_algebra()``.

    Built from coordinate and frame tables, δ is extended by the rules
    δ(fg) = δ(f)g + fδ(g) and δ(fα) = δ(f)∧α + fδ(α), so it is almost by
    construction.  Built from callables, both rules are checked.
    """

    def __init__(self, algebroid: ChartAlgebroid, k: int,
                 on_function: Callable[[Poly], Element], on_section: Callable[[Section], Element]):
        self.algebroid = algebroid
        self.k = k
        self.algebra = algebroid.multivector_algebra()
        self.on_function = on_function
        self.on_section = on_section

    @classmethod
    def from_tables(cls, A: ChartAlgebroid, k: int, functions: Sequence[Element], sections: Sequence[Element]):
        alg = A.multivector_algebra()
        functions = list(functions) or [alg.zero()] * A.m
        sections = list(sections) or [alg.zero()] * A.r
        if len(functions) != A.m or len(sections) != A.r:
            raise StructureError("need one image per coordinate and one per frame section")

        def on_function(f: Poly) -> Element:
            out = alg.zero()
            for a in range(A.m):
                d = f.partial(a)
                if d:
                    out = out + functions[a].scale(d)
            return out

        def on_section(alpha: Section) -> Element:
            out = alg.zero()
            for j, f in enumerate(alpha):
                if f:
                    out = out + sections[j].scale(f) + on_function(f) * alg.gen(j)
            return out

        return cls(A, k, on_function, on_section)

    @classmethod
    def inner(cls, A: ChartAlgebroid, alpha0: Section):
        """δ = [α0, ·] on Γ(ΛA), a 1-differential."""
        alg = A.multivector_algebra()
        a0 = _section_element(alg, alpha0)
        return cls(A, 1, lambda f: schouten(A, a0, alg.scalar(f)),
                   lambda alpha: schouten(A, a0, _section_element(alg, alpha)))

    @classmethod
    def identity(cls, A: ChartAlgebroid):
        alg = A.multivector_algebra()
        return cls(A, 1, lambda f: alg.zero(), lambda alpha: _section_element(alg, alpha))


def _section_element(alg, alpha: Section) -> Element:
    out = alg.zero()
    for j, f in enumerate(alpha):
        if f:
            out = out + alg.gen(j).scale(f)
    return out


def _degree_report(name, delta: K1Differential) -> IdentityReport | None:
    A = delta.algebroid
    for a in range(A.m):
        img = delta.on_function(A.coordinate(a))
        bad = [m for m in img.terms if len(m) != delta.k - 1]
        if bad:
            return IdentityReport(name, False, f"δ(x{a + 1}) = {img} is not in Λ^{delta.k - 1}")
    for j in range(A.r):
        img = delta.on_section(A.basis_section(j))
        bad = [m for m in img.terms if len(m) != delta.k]
        if bad:
            return IdentityReport(name, False, f"δ(e{j + 1}) = {img} is not in Λ^{delta.k}")
    return None


def k_differential_check(A: ChartAlgebroid, delta: K1Differential, k: int | None = None) -> KDifferentialVerdict:
    """Classify ``delta`` as "k-differential", "almost-only" or "not-almost".

    The almost rules are tested on coordinate functions, their pairwise
    products and the frame; the bracket rule δ[α,β] = [δα,β] + [α,δβ] is
    tested on pairs (e_i, e_j) and (e_i, x_a e_j), which also pins its
    compatibility with functions.
    """
    k = delta.k if k is None else k
    if k != delta.k:
        raise StructureError(f"candidate is of degree {delta.k}, not {k}")
    if k > A.r:
        raise StructureError(f"k = {k} exceeds the rank {A.r}")
    alg = delta.algebra
    reports = []
    name = "degrees"
    bad = _degree_report(name, delta)
    reports.append(bad or IdentityReport(name, True))

    coords = [A.coordinate(a) for a in range(A.m)]
    funcs = [A.one()] + coords
    name = "δ(fg) = δ(f)g + fδ(g)"
    witness = None
    for f, g in _pairs_with_repeats(funcs):
        res = delta.on_function(f * g) - (delta.on_function(f).scale(g) + delta.on_function(g).scale(f))
        if res:
            witness = f"f={f}, g={g}: {res}"
            break
    reports.append(IdentityReport(name, witness is None, witness))

    name = "δ(fα) = δ(f)∧α + fδ(α)"
    witness = None
    for f in funcs:
        for j in range(A.r):
            alpha = A.basis_section(j)
            res = delta.on_section(tuple(f * x for x in alpha)) - (
                delta.on_function(f) * alg.gen(j) + delta.on_section(alpha).scale(f))
            if res:
                witness = f"f={f}, α=e{j + 1}: {res}"
                break
        if witness:
            break
    reports.append(IdentityReport(name, witness is None, witness))
    almost = all(r.ok for r in reports)

    name = "δ[α,β] = [δα,β] + [α,δβ]"
    witness = None
    pairs = []
    for i in range(A.r):
        for j in range(A.r):
            if i < j:
                pairs.append((f"(e{i + 1}, e{j + 1})", A.basis_section(i), A.basis_section(j)))
            for a, x in enumerate(coords):
                pairs.append((f"(e{i + 1}, x{a + 1}·e{j + 1})", A.basis_section(i),
                              tuple(x * y for y in A.basis_section(j))))
    for label, al, be in pairs:
        lhs = delta.on_section(A.bracket(al, be))
        a_el, b_el = _section_element(alg, al), _section_element(alg, be)
        rhs = schouten(A, delta.on_section(al), b_el) + schouten(A, a_el, delta.on_section(be))
        res = lhs - rhs
        if res:
            witness = f"{label}: {res}"
            break
    reports.append(IdentityReport(name, witness is None, witness))
    if not almost:
        cls = "not-almost"
    elif witness is not None:
        cls = "almost-only"
    else:
        cls = "k-differential"
    return KDifferentialVerdict(cls, reports)


def _pairs_with_repeats(items):
    for i in range(len(items)):
        for j in range(i, len(items)):
            yield items[i], items[j]


def as_deformation_cochain(delta: K1Differential) -> DeformationCochain:
    """A 1-differential is a degree-1 deformation cochain whose symbol is the vector field δ|C∞."""
    A = delta.algebroid
    if delta.k != 1:
        raise StructureError("only 1-differentials are deformation cochains")
    values = {}
    for j in range(A.r):
        img = delta.on_section(A.basis_section(j))
        values[(j,)] = tuple(img.coefficient((t,)) for t in range(A.r))
    X = tuple(delta.on_function(A.coordinate(a)).coefficient(()) for a in range(A.m))
    return DeformationCochain(A, 1, values, {(): X} if A.m else {})
