"""Representations up to homotopy and their morphisms.

A representation up to homotopy of A on a graded bundle E with frame
s_1..s_n is stored as one degree-one derivation D of Ω(A) ⊗ S(E), fixed by
its values D(s_j) = Σ_I Σ_k a^I_{kj} θ^I s_k together with d_A on forms and
functions.  The part of D(s_j) with |I| = p is the component ω_p (∂ for p=0,
the connection for p=1).  D² is Ω(A)-linear, so its values on the frame
decide every structure equation at once; splitting D²(s_j) by form degree
gives the component equations one by one.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

from ..algebroid import ChartAlgebroid, IdentityReport, _poly
from ..errors import StructureError, UnsupportedBaseError
from ..graded import (Derivation, Element, GradedAlgebra, ModuleMap, PointComplex,
                      cohomology_ranks, complex_from_operator, poly_det)
from ..symcore import Poly


def equation_name(k: int) -> str:
    if k == 0:
        return "∂²=0"
    if k == 1:
        return "[∇,∂]=0"
    if k == 2:
        return "∂(ω2)+R∇=0"
    tail = "+".join(f"ω{j}∘ω{k - j}" for j in range(2, k - 1))
    return f"∂(ω{k})+d∇(ω{k - 1})" + (f"+{tail}" if tail else "") + "=0"


def split_by_form_degree(x: Element, r: int) -> Dict[int, Element]:
    parts: Dict[int, dict] = {}
    for m, c in x.terms.items():
        p = sum(1 for g in m if g < r)
        parts.setdefault(p, {})[m] = c
    return {p: Element(x.algebra, t) for p, t in parts.items()}


def _first_witness(residues: Mapping[str, Element], r: int, k: int):
    for name, res in residues.items():
        part = split_by_form_degree(res, r).get(k)
        if part:
            return f"{name}: {part}"
    return None


class Ruth:
    """Representation up to homotopy of ``algebroid`` on the frame ``bundle``.

    ``bundle`` lists (name, degree); ``images`` maps each bundle generator to
    D(s_j), an element of ``self.algebra`` linear in bundle generators.
    """

    def __init__(self, algebroid: ChartAlgebroid, bundle: Sequence[Tuple[str, int]],
                 images: Mapping | None = None, name: str = "", algebra: GradedAlgebra | None = None):
        A = algebroid
        self.algebroid = A
        self.r = A.r
        self.bundle = [(str(n), int(d)) for n, d in bundle]
        self.name = name
        self.algebra = algebra if algebra is not None else A.form_algebra(self.bundle)
        alg = self.algebra
        self.gens = list(range(A.r, A.r + len(self.bundle)))
        base = A.d_A(alg)
        table = dict(base.images)
        self.images: Dict[int, Element] = {}
        for key, img in (images or {}).items():
            g = alg.index[key] if isinstance(key, str) else key
            if g not in self.gens:
                raise StructureError(f"{alg.names[g]} is not a bundle generator")
            if img.algebra is not alg:
                raise StructureError("structure operator image lives in another algebra")
            want = alg.degrees[g] + 1
            for m in img.terms:
                bundle_part = [x for x in m if x >= A.r]
                if len(bundle_part) != 1:
                    raise StructureError(f"D({alg.names[g]}) must be linear in the bundle generators")
                if alg.degree_of(m) != want:
                    raise StructureError(
                        f"D({alg.names[g]}) has a term {alg.mono_str(m)} of total degree "
                        f"{alg.degree_of(m)}, expected {want}")
            if img:
                self.images[g] = img
                table[g] = img
        self.D = Derivation(alg, base.parity, table, base.coord_images)

    def __repr__(self):
        return f"Ruth({self.name or 'unnamed'}, {self.bundle})"

    @classmethod
    def from_table(cls, algebroid: ChartAlgebroid, bundle, table: Mapping[str, Sequence], name: str = ""):
        """Build from ``table[source] = [(form indices (0-based), target, coefficient), ...]``."""
        ruth = cls(algebroid, bundle, name=name)
        alg = ruth.algebra
        images = {}
        for src, entries in table.items():
            img = alg.zero()
            for forms, target, coeff in entries:
                img = img + alg.monomial(tuple(forms) + (alg.index[target],), _poly(coeff, algebroid.coordinates))
            images[src] = img
        return cls(algebroid, bundle, images, name=name, algebra=alg)

    # basic data

    @property
    def names(self) -> List[str]:
        return [n for n, _ in self.bundle]

    def degree(self, key) -> int:
        g = self.algebra.index[key] if isinstance(key, str) else key
        return self.algebra.degrees[g]

    def degree_window(self) -> Tuple[int, int]:
        degs = [d for _, d in self.bundle]
        return (min(degs), max(degs)) if degs else (0, 0)

    def length(self) -> int:
        lo, hi = self.degree_window()
        return hi - lo

    def image(self, key) -> Element:
        g = self.algebra.index[key] if isinstance(key, str) else key
        return self.images.get(g) or self.algebra.zero()

    def component(self, p: int) -> ModuleMap:
        """ω_p as an Ω(A)-linear map (∂ for p=0; for p=1 the frame part of ∇)."""
        r = self.r
        imgs = {g: split_by_form_degree(img, r).get(p, self.algebra.zero()) for g, img in self.images.items()}
        return ModuleMap(self.algebra, self.algebra, self.D.parity, imgs, r)

    def components(self) -> Dict[int, ModuleMap]:
        return {p: self.component(p) for p in range(self.r + 1) if not self.component(p).is_zero()}

    def with_images(self, images: Mapping, name: str | None = None) -> "Ruth":
        return Ruth(self.algebroid, self.bundle, images, name=self.name if name is None else name,
                    algebra=self.algebra)

    def embed(self, x: Element, algebra: GradedAlgebra, offset: int) -> Element:
        """Copy ``x`` into ``algebra`` where bundle generator g becomes g + offset."""
        r = self.r
        out = algebra.zero()
        for m, c in x.terms.items():
            out = out + algebra.monomial(tuple(g if g < r else g + offset for g in m), c)
        return out

    # structure equations

    def squares(self) -> Dict[str, Element]:
        alg = self.algebra
        return {alg.names[g]: self.D(self.D(alg.gen(g))) for g in self.gens}

    def check_structure(self, max_i: int | None = None) -> List[IdentityReport]:
        """Component equations k = 0..max_i (default: up to the rank of A)."""
        top = self.r if max_i is None else min(max_i, self.r)
        residues = self.squares()
        reports = []
        for k in range(top + 1):
            w = _first_witness(residues, self.r, k)
            reports.append(IdentityReport(equation_name(k), w is None, w))
        if max_i is not None and max_i < self.r:
            # D² on the frame has no component beyond the ones listed above
            w = None
            for k in range(max_i + 1, self.r + 1):
                w = w or _first_witness(residues, self.r, k)
            reports.append(IdentityReport(f"equations beyond {max_i}", w is None, w))
        return reports

    def is_ok(self) -> bool:
        return all(rep.ok for rep in self.check_structure())

    def conjugate(self) -> "Ruth":
        """Same bundle with -∂ + ∇ - ω2 + ω3 - ..."""
        r = self.r
        images = {}
        for g, img in self.images.items():
            out = self.algebra.zero()
            for p, part in split_by_form_degree(img, r).items():
                out = out + (part if p % 2 else -part)
            images[g] = out
        return self.with_images(images, name=f"conj({self.name})")

    # point base

    def basis(self) -> Dict[int, List[tuple]]:
        """Monomials θ^I s_j spanning Ω(A;E), grouped by total degree."""
        out: Dict[int, List[tuple]] = {}
        for g in self.gens:
            d = self.algebra.degrees[g]
            for p in range(self.r + 1):
                for I in combinations(range(self.r), p):
                    out.setdefault(d + p, []).append(I + (g,))
        return out

    def total_complex(self) -> PointComplex:
        if not self.algebroid.is_point_base():
            raise UnsupportedBaseError(
                "cohomology is only computed over a point; over a chart it is a module, not a vector of ranks")
        basis = self.basis()
        if not basis:
            return PointComplex(0, [], [])
        return complex_from_operator(self.algebra, basis, self.D)

    def cohomology(self) -> List[Tuple[int, int]]:
        if not self.gens:
            return []
        return cohomology_ranks(self.total_complex())


class RuthMorphism:
    """Degree-zero Ω(A)-linear map Φ = Φ_0 + Φ_1 + ... between two representations."""

    def __init__(self, source: Ruth, target: Ruth, images: Mapping, name: str = ""):
        if source.algebroid is not target.algebroid:
            raise StructureError("morphism between representations of different algebroids")
        self.source = source
        self.target = target
        self.name = name
        r = source.r
        width = source.algebra.width
        if target.algebra.width != width:
            raise StructureError("source and target algebras use different weight channels")
        self.map = ModuleMap(source.algebra, target.algebra, (0,) * width, images, r)
        for g, img in self.map.images.items():
            for m in img.terms:
                if target.algebra.degree_of(m) != source.algebra.degrees[g]:
                    raise StructureError(f"Φ({source.algebra.names[g]}) is not of total degree zero")

    @classmethod
    def identity(cls, ruth: Ruth) -> "RuthMorphism":
        alg = ruth.algebra
        return cls(ruth, ruth, {g: alg.gen(g) for g in ruth.gens}, name="Id")

    def __call__(self, x: Element) -> Element:
        return self.map(x)

    def component(self, n: int) -> ModuleMap:
        return self.map.filter(lambda m: sum(1 for g in m if g < self.source.r) == n)

    def residues(self) -> Dict[str, Element]:
        """D_F∘Φ - Φ∘D_E on the frame of E."""
        src, tgt = self.source, self.target
        out = {}
        for g in src.gens:
            s = src.algebra.gen(g)
            out[src.algebra.names[g]] = tgt.D(self.map(s)) - self.map(src.D(s))
        return out

    def check(self) -> List[IdentityReport]:
        residues = self.residues()
        reports = []
        for n in range(self.source.r + 1):
            w = _first_witness(residues, self.source.r, n)
            reports.append(IdentityReport(f"morphism equation {n}", w is None, w))
        return reports

    def is_ok(self) -> bool:
        return all(rep.ok for rep in self.check())

    def compose(self, other: "RuthMorphism") -> "RuthMorphism":
        """``self ∘ other``."""
        if other.target is not self.source:
            raise StructureError("morphisms are not composable")
        comp = self.map.compose(other.map)
        return RuthMorphism(other.source, self.target, comp.images, name=f"{self.name}∘{other.name}")

    def zeroth_matrices(self) -> Dict[int, list]:
        """Φ_0 as a polynomial matrix per degree (rows: target frame, columns: source frame)."""
        src, tgt = self.source, self.target
        phi0 = self.component(0)
        out = {}
        degrees = sorted({d for _, d in src.bundle} | {d for _, d in tgt.bundle})
        zero = Poly.zero(src.algebroid.coordinates)
        for d in degrees:
            cols = [g for g in src.gens if src.algebra.degrees[g] == d]
            rows = [g for g in tgt.gens if tgt.algebra.degrees[g] == d]
            mat = [[zero] * len(cols) for _ in rows]
            for j, g in enumerate(cols):
                img = phi0.image(g)
                for i, h in enumerate(rows):
                    mat[i][j] = img.coefficient((h,))
            out[d] = mat
        return out

    def is_isomorphism(self) -> bool:
        """Φ_0 invertible over the polynomial ring in every degree."""
        for mat in self.zeroth_matrices().values():
            if len(mat) != (len(mat[0]) if mat else 0):
                return False
            if mat:
                det = poly_det(mat, self.source.algebroid.coordinates)
                if not det.is_constant() or det.is_zero():
                    return False
        return True

    def point_maps(self) -> Dict[int, list]:
        """Matrices of Φ on the total complexes (point base)."""
        from ..graded import _const_matrix
        src, tgt = self.source, self.target
        sb, tb = src.basis(), tgt.basis()
        out = {}
        for k in sorted(set(sb) | set(tb)):
            cols = sb.get(k, [])
            rows = tb.get(k, [])
            index = {m: i for i, m in enumerate(rows)}
            mat = [[0] * len(cols) for _ in rows]
            for j, mono in enumerate(cols):
                img = self.map(src.algebra.monomial(mono))
                for m, c in img.terms.items():
                    mat[index[m]][j] = c
            out[k] = _const_matrix(mat) if mat else []
        return out
