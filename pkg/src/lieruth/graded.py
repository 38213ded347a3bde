"""Free graded-commutative algebras, derivations and module maps.

Everything downstream (forms with values in a graded bundle, Weil algebras,
Chevalley-Eilenberg complexes) is an instance of one construction: the free
graded-commutative algebra over the polynomial ring on finitely many
generators.  Each generator carries a parity vector; two generators ``g`` and
``h`` commute up to ``(-1)**<p(g), p(h)>``.  A generator that anticommutes with
itself squares to zero.

With a single parity component this is the usual Koszul sign rule.  Extra
components act as weight channels: giving every bundle generator an extra odd
weight turns products of bundle generators into exterior powers.

Monomials are sorted tuples of generator indices.  All signs come from
:func:`koszul_sign` and :meth:`GradedAlgebra.mono_mul`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import NotExactError, NotRegularError, StructureError, UnsupportedBaseError
from .linalg import identity, inverse, is_zero, matmul, mat_add, nullspace, rank, transpose, zeros
from .symcore import Poly

Mono = Tuple[int, ...]


def koszul_sign(p: Sequence[int], q: Sequence[int]) -> int:
    """Sign picked up when an element of parity ``p`` moves past one of parity ``q``."""
    return -1 if sum(a * b for a, b in zip(p, q)) % 2 else 1


def shuffle_sign(order: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``order`` (all entries distinct)."""
    sign = 1
    seq = list(order)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class GradedAlgebra:
    """Free graded-commutative algebra over ``Poly(variables)``."""

    def __init__(self, variables: Sequence[str], names: Sequence[str],
                 parities: Sequence[Sequence[int]], degrees: Sequence | None = None):
        self.variables = tuple(variables)
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise StructureError("generator names must be unique")
        if len(parities) != len(self.names):
            raise StructureError("one parity vector per generator is required")
        width = len(parities[0]) if parities else 1
        self.parities = tuple(tuple(int(x) % 2 for x in p) for p in parities)
        if any(len(p) != width for p in self.parities):
            raise StructureError("parity vectors must have equal length")
        self.width = width
        self.degrees = tuple(degrees) if degrees is not None else tuple(p[0] for p in self.parities)
        self.index = {name: i for i, name in enumerate(self.names)}
        n = len(self.names)
        self._odd = [[sum(a * b for a, b in zip(self.parities[i], self.parities[j])) % 2 == 1
                      for j in range(n)] for i in range(n)]
        self._one_poly = Poly.one(self.variables)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"GradedAlgebra({list(self.names)}, over {list(self.variables)})"

    # elements

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {(): self._one_poly})

    def scalar(self, value) -> "Element":
        if not isinstance(value, Poly):
            value = Poly.constant(self.variables, value)
        elif value.variables != self.variables:
            raise StructureError("scalar lives over a different chart")
        return Element(self, {(): value} if value else {})

    def gen(self, key) -> "Element":
        i = self.index[key] if isinstance(key, str) else key
        return Element(self, {(i,): self._one_poly})

    def monomial(self, mono: Iterable[int], coeff=None) -> "Element":
        """Element ``coeff * g_{i1} * g_{i2} * ...`` for generator indices in the given order."""
        out = self.scalar(1 if coeff is None else coeff)
        for i in mono:
            out = out * self.gen(i)
        return out

    def parity_of(self, mono: Mono) -> Tuple[int, ...]:
        p = [0] * self.width
        for g in mono:
            for k, x in enumerate(self.parities[g]):
                p[k] ^= x
        return tuple(p)

    def degree_of(self, mono: Mono):
        return sum(self.degrees[g] for g in mono)

    def mono_mul(self, a: Mono, b: Mono):
        """Return ``(sign, product)`` with ``sign == 0`` when the product vanishes."""
        if not a:
            return 1, b
        if not b:
            return 1, a
        odd = self._odd
        sign = 1
        for y in b:
            oy = odd[y]
            for x in reversed(a):
                if x > y:
                    if oy[x]:
                        sign = -sign
                elif x == y:
                    if oy[y]:
                        return 0, None
                    break
                else:
                    break
        return sign, tuple(sorted(a + b))

    def mono_str(self, mono: Mono) -> str:
        return "*".join(self.names[g] for g in mono)


class Element:
    """Element of a :class:`GradedAlgebra`: map from monomials to nonzero Poly."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms: Dict[Mono, Poly]):
        self.algebra = algebra
        self.terms = terms

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise StructureError("elements belong to different algebras")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, f) -> "Element":
        if isinstance(f, Poly):
            if not f:
                return Element(self.algebra, {})
            out = {}
            for m, c in self.terms.items():
                p = c * f
                if p:
                    out[m] = p
            return Element(self.algebra, out)
        if not f:
            return Element(self.algebra, {})
        return Element(self.algebra, {m: c * f for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        alg = self.algebra
        out: Dict[Mono, Poly] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, m = alg.mono_mul(ma, mb)
                if not sign:
                    continue
                p = ca * cb
                if sign < 0:
                    p = -p
                s = out.get(m)
                out[m] = p if s is None else s + p
        return Element(alg, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not other:
            return not self.terms
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    __hash__ = None

    def filter(self, predicate: Callable[[Mono], bool]) -> "Element":
        return Element(self.algebra, {m: c for m, c in self.terms.items() if predicate(m)})

    def coefficient(self, mono: Mono) -> Poly:
        return self.terms.get(tuple(mono), Poly.zero(self.algebra.variables))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def parities(self):
        return {self.algebra.parity_of(m) for m in self.terms}

    def parity(self):
        ps = self.parities()
        if len(ps) > 1:
            raise StructureError("element is not homogeneous")
        return next(iter(ps)) if ps else (0,) * self.algebra.width

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            name = self.algebra.mono_str(m)
            if not name:
                pieces.append(f"({c})")
            elif c == 1:
                pieces.append(name)
            else:
                pieces.append(f"({c})*{name}")
        return " + ".join(pieces)

    __repr__ = __str__


class Derivation:
    """Graded derivation determined by its values on generators and coordinates.

    ``coord_images[a]`` is the element ``D(x_a)``; on a polynomial ``f`` the
    derivation acts as ``sum_a (d f/d x_a) * D(x_a)``.
    """

    def __init__(self, algebra: GradedAlgebra, parity: Sequence[int],
                 images: Mapping[int, Element], coord_images: Sequence[Element | None] | None = None):
        self.algebra = algebra
        self.parity = tuple(int(x) % 2 for x in parity)
        if len(self.parity) != algebra.width:
            raise StructureError("derivation parity has the wrong length")
        self.images = {}
        for key, img in images.items():
            i = algebra.index[key] if isinstance(key, str) else key
            if img.algebra is not algebra:
                raise StructureError("derivation image lives in another algebra")
            if img:
                self.images[i] = img
        m = len(algebra.variables)
        coord_images = list(coord_images) if coord_images is not None else [None] * m
        if len(coord_images) != m:
            raise StructureError("one coordinate image per chart coordinate is required")
        self.coord_images = [c if c else None for c in coord_images]
        self._sign = [koszul_sign(self.parity, p) for p in algebra.parities]
        self._cache: Dict[Mono, Element] = {}

    def image(self, i) -> Element:
        i = self.algebra.index[i] if isinstance(i, str) else i
        return self.images.get(i) or self.algebra.zero()

    def on_function(self, f: Poly) -> Element:
        out = self.algebra.zero()
        for a, img in enumerate(self.coord_images):
            if img is not None:
                df = f.partial(a)
                if df:
                    out = out + img.scale(df)
        return out

    def on_monomial(self, mono: Mono) -> Element:
        cached = self._cache.get(mono)
        if cached is not None:
            return cached
        alg = self.algebra
        out = alg.zero()
        sign = 1
        for pos, g in enumerate(mono):
            img = self.images.get(g)
            if img is not None:
                term = alg.monomial(mono[:pos]) * img * alg.monomial(mono[pos + 1:])
                out = out + (term if sign > 0 else -term)
            sign *= self._sign[g]
        self._cache[mono] = out
        return out

    def __call__(self, x: Element) -> Element:
        if x.algebra is not self.algebra:
            raise StructureError("derivation applied to an element of another algebra")
        alg = self.algebra
        out = alg.zero()
        has_coords = any(c is not None for c in self.coord_images)
        for m, c in x.terms.items():
            dm = self.on_monomial(m)
            if dm:
                out = out + dm.scale(c)
            if has_coords and not c.is_constant():
                out = out + self.on_function(c) * alg.monomial(m)
        return out

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.algebra is not self.algebra or other.parity != self.parity:
            raise StructureError("can only add derivations of equal parity on the same algebra")
        keys = set(self.images) | set(other.images)
        images = {k: self.image(k) + other.image(k) for k in keys}
        coords = []
        for a, b in zip(self.coord_images, other.coord_images):
            if a is None:
                coords.append(b)
            elif b is None:
                coords.append(a)
            else:
                coords.append(a + b)
        return Derivation(self.algebra, self.parity, images, coords)

    def left_multiply(self, x: Element) -> "Derivation":
        """The derivation ``y -> x * D(y)`` (``x`` homogeneous)."""
        parity = tuple((a + b) % 2 for a, b in zip(x.parity(), self.parity))
        images = {k: x * v for k, v in self.images.items()}
        coords = [None if c is None else x * c for c in self.coord_images]
        return Derivation(self.algebra, parity, images, coords)

    def scaled(self, s) -> "Derivation":
        images = {k: v * s for k, v in self.images.items()}
        coords = [None if c is None else c * s for c in self.coord_images]
        return Derivation(self.algebra, self.parity, images, coords)

    def check_leibniz(self, x: Element, y: Element) -> Element:
        """Residue D(xy) - D(x)y - (-1)^<D,x> x D(y); zero for homogeneous x."""
        sign = koszul_sign(self.parity, x.parity())
        return self(x * y) - self(x) * y - (x * self(y)) * sign


class ModuleMap:
    """Map of modules over the subalgebra spanned by the first ``scalar_count`` generators.

    The source and target algebras share their first ``scalar_count``
    generators (form generators).  Each remaining source generator is sent to
    an element of the target; on ``w * s`` with ``w`` a product of form
    generators the map acts as ``(-1)^<parity, w> w * image(s)``.
    """

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra, parity: Sequence[int],
                 images: Mapping[int, Element], scalar_count: int):
        self.source = source
        self.target = target
        self.parity = tuple(int(x) % 2 for x in parity)
        self.scalar_count = scalar_count
        self.images = {}
        for key, img in images.items():
            i = source.index[key] if isinstance(key, str) else key
            if i < scalar_count:
                raise StructureError("module maps are fixed on form generators")
            if img.algebra is not target:
                raise StructureError("image lives outside the target algebra")
            if img:
                self.images[i] = img
        if source.parities[:scalar_count] != target.parities[:scalar_count]:
            raise StructureError("source and target disagree on form generators")

    def image(self, i) -> Element:
        i = self.source.index[i] if isinstance(i, str) else i
        return self.images.get(i) or self.target.zero()

    def __call__(self, x: Element) -> Element:
        if x.algebra is not self.source:
            raise StructureError("module map applied to an element of another algebra")
        r = self.scalar_count
        out = self.target.zero()
        for m, c in x.terms.items():
            split = 0
            while split < len(m) and m[split] < r:
                split += 1
            rest = m[split:]
            if len(rest) != 1:
                raise StructureError("module maps act on elements linear in bundle generators")
            img = self.images.get(rest[0])
            if img is None:
                continue
            prefix = m[:split]
            sign = koszul_sign(self.parity, self.source.parity_of(prefix))
            term = self.target.monomial(prefix, c) * img
            out = out + (term if sign > 0 else -term)
        return out

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        if other.target is not self.source:
            raise StructureError("maps are not composable")
        parity = tuple((a + b) % 2 for a, b in zip(self.parity, other.parity))
        gens = range(other.scalar_count, len(other.source))
        return ModuleMap(other.source, self.target, parity,
                         {g: self(other.image(g)) for g in gens}, self.scalar_count)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if (other.source, other.target, other.parity) != (self.source, self.target, self.parity):
            raise StructureError("can only add maps with equal source, target and parity")
        keys = set(self.images) | set(other.images)
        return ModuleMap(self.source, self.target, self.parity,
                         {k: self.image(k) + other.image(k) for k in keys}, self.scalar_count)

    def __neg__(self):
        return ModuleMap(self.source, self.target, self.parity,
                         {k: -v for k, v in self.images.items()}, self.scalar_count)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, s) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.parity,
                         {k: v * s for k, v in self.images.items()}, self.scalar_count)

    def is_zero(self):
        return not self.images

    def first_nonzero(self):
        for g in sorted(self.images):
            return self.source.names[g], self.images[g]
        return None

    def filter(self, predicate: Callable[[Mono], bool]) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.parity,
                         {k: v.filter(predicate) for k, v in self.images.items()}, self.scalar_count)


def identity_map(algebra: GradedAlgebra, scalar_count: int) -> ModuleMap:
    return ModuleMap(algebra, algebra, (0,) * algebra.width,
                     {g: algebra.gen(g) for g in range(scalar_count, len(algebra))}, scalar_count)


def graded_commutator(t: ModuleMap, s: ModuleMap) -> ModuleMap:
    """[T, S] = T∘S - (-1)^{|T||S|} S∘T."""
    sign = koszul_sign(t.parity, s.parity)
    return t.compose(s) - s.compose(t).scaled(sign)


def operator_commutator(d_target: Derivation | None, t: ModuleMap, d_source: Derivation | None) -> ModuleMap:
    """d∘T - (-1)^{|T|} T∘d, the differential induced on module maps."""
    sign = koszul_sign(t.parity, d_source.parity if d_source is not None else t.parity)
    gens = range(t.scalar_count, len(t.source))
    images = {}
    for g in gens:
        a = d_target(t.image(g)) if d_target is not None else t.target.zero()
        b = t(d_source(t.source.gen(g))) if d_source is not None else t.target.zero()
        images[g] = a - b.scale(sign)
    return ModuleMap(t.source, t.target,
                     tuple((x + y) % 2 for x, y in zip(t.parity, (d_source or d_target).parity)),
                     images, t.scalar_count)


PAIRINGS = ("scalar", "exterior", "composition", "evaluation", "twisted_evaluation", "commutator")


def wedge(omega, eta, pairing: str = "scalar"):
    """Wedge product ω ∧_h η for the supported pairings.

    ``scalar``/``exterior``: both are algebra elements; the product in the
    algebra (bundle weights turn it into the exterior product).
    ``composition``: both are module maps; operator composition.
    ``evaluation``: ω is a module map, η an element; ω applied to η.
    ``twisted_evaluation``: ω an element, η a module map; (-1)^{|ω||η|} η(ω).
    ``commutator``: both module maps; the graded commutator.
    """
    if pairing in ("scalar", "exterior"):
        if not isinstance(omega, Element) or not isinstance(eta, Element):
            raise StructureError(f"{pairing} pairing needs two algebra elements")
        return omega * eta
    if pairing == "composition":
        if not isinstance(omega, ModuleMap) or not isinstance(eta, ModuleMap):
            raise StructureError("composition pairing needs two module maps")
        return omega.compose(eta)
    if pairing == "evaluation":
        if not isinstance(omega, ModuleMap) or not isinstance(eta, Element):
            raise StructureError("evaluation pairing needs a module map and an element")
        return omega(eta)
    if pairing == "twisted_evaluation":
        if not isinstance(omega, Element) or not isinstance(eta, ModuleMap):
            raise StructureError("twisted evaluation needs an element and a module map")
        return eta(omega).scale(koszul_sign(omega.parity(), eta.parity))
    if pairing == "commutator":
        if not isinstance(omega, ModuleMap) or not isinstance(eta, ModuleMap):
            raise StructureError("commutator pairing needs two module maps")
        return graded_commutator(omega, eta)
    raise StructureError(f"unknown pairing {pairing!r}")


def apply_derivation(table: Mapping, x: Element, parity: Sequence[int] | None = None,
                     coord_images: Sequence[Element | None] | None = None) -> Element:
    """Extend a generator table by the graded Leibniz rule and apply it to ``x``.

    The table must shift degree consistently; otherwise ``StructureError``.
    """
    alg = x.algebra
    shifts = set()
    for key, img in table.items():
        i = alg.index[key] if isinstance(key, str) else key
        for m in img.terms:
            shifts.add(alg.degree_of(m) - alg.degrees[i])
    if len(shifts) > 1:
        raise StructureError(f"inconsistent degree shifts {sorted(shifts)} in derivation table")
    if parity is None:
        shift = next(iter(shifts)) if shifts else 0
        parity = (shift % 2,) + (0,) * (alg.width - 1)
    return Derivation(alg, parity, table, coord_images)(x)


def complex_check(d: Derivation | ModuleMap, generators: Iterable[int] | None = None):
    """First generator on which d∘d does not vanish, as ``(name, residue)``; None when ok."""
    alg = d.source if isinstance(d, ModuleMap) else d.algebra
    start = d.scalar_count if isinstance(d, ModuleMap) else 0
    gens = range(start, len(alg)) if generators is None else generators
    for g in gens:
        x = alg.gen(g)
        dd = d(d(x))
        if dd:
            return alg.names[g], dd
    return None


# complexes over a point

class PointComplex:
    """Finite complex of rational vector spaces.

    ``dims[k]`` is the dimension in degree ``lo + k`` and ``maps[k]`` is the
    matrix of the differential from degree ``lo + k`` to ``lo + k + 1``
    (``dims[k+1]`` rows, ``dims[k]`` columns).
    """

    def __init__(self, lo: int, dims: Sequence[int], maps: Sequence, labels=None):
        self.lo = lo
        self.dims = list(dims)
        self.maps = [m for m in maps]
        self.labels = labels
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise StructureError("need one map between consecutive degrees")
        for k, m in enumerate(self.maps):
            if len(m) != self.dims[k + 1] or any(len(row) != self.dims[k] for row in m):
                raise StructureError(f"map out of degree {lo + k} has the wrong shape")

    @property
    def degrees(self):
        return list(range(self.lo, self.lo + len(self.dims)))

    def map_out(self, k: int):
        """Matrix of the differential leaving absolute degree ``k``."""
        i = k - self.lo
        if 0 <= i < len(self.maps):
            return self.maps[i]
        return None

    def square_residue(self):
        """First degree where d∘d fails, or None."""
        for k in range(len(self.maps) - 1):
            if not is_zero(matmul(self.maps[k + 1], self.maps[k], self.dims[k])):
                return self.lo + k
        return None


def _const_matrix(rows):
    out = []
    for row in rows:
        new = []
        for x in row:
            if isinstance(x, Poly):
                if not x.is_constant():
                    raise UnsupportedBaseError(f"non-constant coefficient {x}")
                x = x.constant_value()
            new.append(Fraction(x))
        out.append(new)
    return out


def _rank_of(matrix, rows, cols):
    if rows == 0 or cols == 0:
        return 0
    return rank(matrix)


def cohomology_ranks(cx: PointComplex) -> List[Tuple[int, int]]:
    """Betti numbers ``dim ker d_k - rank d_{k-1}`` in every degree."""
    maps = [_const_matrix(m) for m in cx.maps]
    ranks = [_rank_of(m, cx.dims[k + 1], cx.dims[k]) for k, m in enumerate(maps)]
    out = []
    for k, dim in enumerate(cx.dims):
        r_out = ranks[k] if k < len(ranks) else 0
        r_in = ranks[k - 1] if k >= 1 else 0
        out.append((cx.lo + k, dim - r_out - r_in))
    return out


def complex_from_operator(algebra: GradedAlgebra, basis: Mapping[int, Sequence[Mono]],
                          op: Callable[[Element], Element]) -> PointComplex:
    """Matrix form of a degree-one operator on spans of monomials.

    ``basis[k]`` lists the monomials spanning degree ``k``; ``op`` must map
    the span in degree k into the span in degree k+1 with constant coefficients.
    """
    degrees = sorted(basis)
    lo, hi = degrees[0], degrees[-1]
    full = {k: list(basis.get(k, ())) for k in range(lo, hi + 1)}
    index = {k: {m: i for i, m in enumerate(full[k])} for k in full}
    maps = []
    for k in range(lo, hi):
        rows, cols = len(full[k + 1]), len(full[k])
        mat = zeros(rows, cols)
        for j, mono in enumerate(full[k]):
            img = op(algebra.monomial(mono))
            for m, c in img.terms.items():
                i = index[k + 1].get(m)
                if i is None:
                    raise StructureError(
                        f"image of {algebra.mono_str(mono)} leaves the declared span ({algebra.mono_str(m)})")
                if not c.is_constant():
                    raise UnsupportedBaseError(f"non-constant coefficient {c} in the differential")
                mat[i][j] = c.constant_value()
        maps.append(mat)
    return PointComplex(lo, [len(full[k]) for k in range(lo, hi + 1)], maps, labels=full)


# contraction data

class ContractionData:
    """Contraction (p, i, h) of a complex onto its cohomology.

    Maps are matrices per absolute degree k: ``p[k]`` is (b_k × n_k),
    ``i[k]`` is (n_k × b_k) and ``h[k]`` goes from degree k to k-1.
    """

    def __init__(self, cx: PointComplex, p, i, h, betti):
        self.complex = cx
        self.p = p
        self.i = i
        self.h = h
        self.betti = betti
        failures = self.verify()
        if failures:
            raise NotRegularError(f"contraction identities fail: {failures}", witness=failures)

    def dim(self, k):
        j = k - self.complex.lo
        return self.complex.dims[j] if 0 <= j < len(self.complex.dims) else 0

    def d(self, k):
        m = self.complex.map_out(k)
        return _const_matrix(m) if m is not None else zeros(self.dim(k + 1), self.dim(k))

    def h_at(self, k):
        return self.h.get(k) or zeros(self.dim(k - 1), self.dim(k))

    def p_at(self, k):
        return self.p.get(k) or []

    def i_at(self, k):
        return self.i.get(k) or [[] for _ in range(self.dim(k))]

    def verify(self) -> List[str]:
        failures = []
        for k in self.complex.degrees:
            n, b = self.dim(k), self.betti.get(k, 0)
            if not is_zero(matmul(self.p_at(k + 1), self.d(k), n)):
                failures.append(f"p∂ at degree {k}")
            if not is_zero(matmul(self.d(k), self.i_at(k), b)):
                failures.append(f"∂i at degree {k}")
            lhs = matmul(self.i_at(k), self.p_at(k), n)
            rhs = mat_add(identity(n), matmul(self.h_at(k + 1), self.d(k), n))
            rhs = mat_add(rhs, matmul(self.d(k - 1), self.h_at(k), n))
            if not is_zero(mat_add(lhs, rhs, -1)):
                failures.append(f"ip = Id + h∂ + ∂h at degree {k}")
            if not is_zero(matmul(self.h_at(k - 1), self.h_at(k), n)):
                failures.append(f"h² at degree {k}")
            if not is_zero(matmul(self.p_at(k), self.h_at(k + 1), self.dim(k + 1))):
                failures.append(f"ph at degree {k + 1}")
        return failures


def build_contraction(cx: PointComplex) -> ContractionData:
    """Hodge-type contraction for the standard inner product on the given bases.

    h = -∂*G with G the Green operator of the Laplacian ∂∂* + ∂*∂; the
    projection onto harmonic representatives is orthogonal.
    """
    lo = cx.lo
    dims = {k: cx.dims[k - lo] for k in cx.degrees}

    def dim(k):
        return dims.get(k, 0)

    def d(k):
        m = cx.map_out(k)
        return _const_matrix(m) if m is not None else zeros(dim(k + 1), dim(k))

    p, i, h, betti, green = {}, {}, {}, {}, {}
    for k in cx.degrees:
        n = dim(k)
        lap = mat_add(matmul(transpose(d(k), n), d(k), n),
                      matmul(d(k - 1), transpose(d(k - 1), dim(k - 1)), n))
        harmonic = nullspace(lap, n) if n else []
        b = len(harmonic)
        betti[k] = b
        basis = transpose(harmonic, n) if b else [[] for _ in range(n)]
        i[k] = basis
        if b:
            p[k] = matmul(inverse(matmul(harmonic, basis, b)), harmonic, n)
        else:
            p[k] = []
        proj = matmul(basis, p[k], n)
        green[k] = mat_add(inverse(mat_add(lap, proj)), proj, -1) if n else []
    for k in cx.degrees:
        ht = matmul(transpose(d(k - 1), dim(k - 1)), green[k], dim(k)) if dim(k) else zeros(dim(k - 1), 0)
        h[k] = [[-x for x in row] for row in ht]
    return ContractionData(cx, p, i, h, betti)


# polynomial-coefficient helpers used by the exact-complex builder

def poly_det(mat: Sequence[Sequence[Poly]], variables) -> Poly:
    n = len(mat)
    if n == 0:
        return Poly.one(variables)
    if n == 1:
        return mat[0][0] if isinstance(mat[0][0], Poly) else Poly.constant(variables, mat[0][0])
    total = Poly.zero(variables)
    for j in range(n):
        if not mat[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * poly_det(minor, variables)
        total = total + term if j % 2 == 0 else total - term
    return total


def poly_inverse(mat: Sequence[Sequence[Poly]], variables):
    """Inverse of a square polynomial matrix whose determinant is a nonzero constant."""
    n = len(mat)
    det = poly_det(mat, variables)
    if det.is_zero():
        raise NotExactError("Laplacian is singular: the complex is not exact", witness=str(det))
    if not det.is_constant():
        raise NotRegularError(
            f"Laplacian determinant {det} is not a unit in the polynomial ring", witness=str(det))
    inv_det = Fraction(1) / det.constant_value()
    out = [[Poly.zero(variables)] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            minor = [row[:c] + row[c + 1:] for k, row in enumerate(mat) if k != r]
            cof = poly_det(minor, variables) * inv_det
            out[c][r] = cof if (r + c) % 2 == 0 else -cof
    return out
