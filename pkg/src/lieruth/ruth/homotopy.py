"""Homotopy-theoretic constructions: exact complexes, transfer to cohomology,
Serre representations and the long exact sequence of a length-one representation."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from ..algebroid import AConnection, ChartAlgebroid, IdentityReport
from ..errors import ExtensionError, NotExactError, StructureError, UnsupportedBaseError
from ..graded import (ContractionData, Derivation, Element, GradedAlgebra, ModuleMap, PointComplex,
                      build_contraction, operator_commutator, poly_inverse)
from ..linalg import inverse, nullspace, rank, rref, transpose
from ..symcore import Poly
from .core import Ruth, RuthMorphism, split_by_form_degree


# the underlying complex

def degree_frames(ruth: Ruth) -> Dict[int, List[int]]:
    lo, hi = ruth.degree_window()
    return {k: [g for g in ruth.gens if ruth.algebra.degrees[g] == k] for k in range(lo, hi + 1)}


def fiber_matrices(ruth: Ruth) -> Dict[int, list]:
    """∂ leaving degree k as a Poly matrix (rows: frame of degree k+1)."""
    frames = degree_frames(ruth)
    d0 = ruth.component(0)
    out = {}
    for k in frames:
        if k + 1 not in frames:
            continue
        mat = []
        for h in frames[k + 1]:
            mat.append([d0.image(g).coefficient((h,)) for g in frames[k]])
        out[k] = mat
    return out


def fiber_complex(ruth: Ruth) -> PointComplex:
    """(E, ∂) as a complex of rational vector spaces; ∂ must have constant entries."""
    frames = degree_frames(ruth)
    degs = sorted(frames)
    mats = fiber_matrices(ruth)
    maps = []
    for k in degs[:-1]:
        mat = []
        for row in mats[k]:
            new = []
            for c in row:
                if not c.is_constant():
                    raise UnsupportedBaseError(f"∂ has the non-constant entry {c}")
                new.append(c.constant_value())
            mat.append(new)
        maps.append(mat)
    return PointComplex(degs[0] if degs else 0, [len(frames[k]) for k in degs], maps)


def _matrix_images(target: GradedAlgebra, cols: Sequence[int], rows: Sequence[int], mat) -> Dict[int, Element]:
    images = {}
    for j, g in enumerate(cols):
        img = target.zero()
        for i, h in enumerate(rows):
            c = mat[i][j] if mat else 0
            if c:
                img = img + target.monomial((h,), c)
        images[g] = img
    return images


def _ptranspose(mat, cols):
    if not mat:
        return [[] for _ in range(cols)]
    return [list(c) for c in zip(*mat)]


def _pmatmul(a, b, variables, cols):
    zero = Poly.zero(variables)
    if not b:
        return [[zero] * cols for _ in a]
    out = []
    for row in a:
        new = []
        for c in range(cols):
            s = zero
            for k, x in enumerate(row):
                if x and b[k][c]:
                    s = s + x * b[k][c]
            new.append(s)
        out.append(new)
    return out


def exact_homotopy(ruth: Ruth) -> ModuleMap:
    """h = -∂*Δ⁻¹ with h∂ + ∂h = -Id, for an exact complex (E, ∂).

    ∂* is the transpose in the given frame.  Over a chart Δ⁻¹ must be a
    polynomial matrix: a vanishing determinant means the complex is not
    exact, a non-constant one that the inverse leaves the polynomial ring.
    """
    variables = ruth.algebroid.coordinates
    frames = degree_frames(ruth)
    mats = fiber_matrices(ruth)
    zero = Poly.zero(variables)
    images = {}

    def d(k):
        if k in mats:
            return mats[k]
        return [[zero] * len(frames.get(k, [])) for _ in frames.get(k + 1, [])]

    for k, frame in frames.items():
        n = len(frame)
        if not n:
            continue
        prev = frames.get(k - 1, [])
        dk, dprev = d(k), d(k - 1)
        lap = _pmatmul(_ptranspose(dk, n), dk, variables, n) if frames.get(k + 1) else [[zero] * n for _ in range(n)]
        if prev:
            extra = _pmatmul(dprev, _ptranspose(dprev, len(prev)), variables, n)
            lap = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(lap, extra)]
        try:
            inv = poly_inverse(lap, variables)
        except NotExactError as exc:
            raise NotExactError(f"(E, ∂) is not exact in degree {k}", witness=exc.witness) from exc
        if not prev:
            continue
        hk = _pmatmul(_ptranspose(dprev, len(prev)), inv, variables, n)
        hk = [[-x for x in row] for row in hk]
        images.update(_matrix_images(ruth.algebra, frame, prev, hk))
    return ModuleMap(ruth.algebra, ruth.algebra, ruth.D.parity, images, ruth.r)


def homotopy_reports(ruth: Ruth, h: ModuleMap) -> List[IdentityReport]:
    d0 = ruth.component(0)
    alg = ruth.algebra
    reports = []
    total = h.compose(d0) + d0.compose(h)
    w = None
    for g in ruth.gens:
        res = total.image(g) + alg.gen(g)
        if res:
            w = f"{alg.names[g]}: {res}"
            break
    reports.append(IdentityReport("h∂+∂h=-Id", w is None, w))
    sq = h.compose(h)
    first = sq.first_nonzero()
    reports.append(IdentityReport("h²=0", first is None, None if first is None else f"{first[0]}: {first[1]}"))
    return reports


def _connection_ruth(ruth: Ruth) -> Ruth:
    """Same bundle, structure operator reduced to d_∇ (the form-degree-one part)."""
    r = ruth.r
    images = {g: split_by_form_degree(img, r).get(1, ruth.algebra.zero()) for g, img in ruth.images.items()}
    return Ruth(ruth.algebroid, ruth.bundle, images, name="d∇", algebra=ruth.algebra)


def curvature_map(ruth: Ruth) -> ModuleMap:
    """R∇ = d∇² as an Ω(A)-linear map of form degree 2."""
    dn = _connection_ruth(ruth)
    alg = ruth.algebra
    images = {g: dn.D(dn.D(alg.gen(g))) for g in ruth.gens}
    return ModuleMap(alg, alg, (0,) * alg.width, images, ruth.r)


def transported_connection(complex_: Ruth, seed: AConnection) -> Ruth:
    """An A-connection compatible with a constant ∂, built from ``seed``.

    E^k = im ∂ ⊕ im ∂*; the seed is projected to im ∂* along im ∂ and then
    carried to im ∂ by ∂ itself, so [∇, ∂] = 0 by construction.
    """
    A = complex_.algebroid
    V = A.coordinates
    cx = fiber_complex(complex_)
    frames = degree_frames(complex_)
    if seed.n != len(complex_.gens):
        raise StructureError("the seed connection must live on the whole bundle")
    pos = {g: k for k, g in enumerate(complex_.gens)}
    zero = A.zero()
    size = len(complex_.gens)
    mats = [[[zero] * size for _ in range(size)] for _ in range(A.r)]
    star_basis: Dict[int, list] = {}
    star_block: Dict[int, list] = {}
    for k in sorted(frames):
        frame = frames[k]
        n = len(frame)
        out = cx.map_out(k)
        star = []
        if out:
            _, piv = rref(transpose(out, n))
            star = [list(out[p]) for p in piv]
        prev = cx.map_out(k - 1)
        lower = []
        for y in star_basis.get(k - 1, []):
            lower.append([sum((prev[i][j] * y[j] for j in range(len(y))), 0) for i in range(n)])
        basis = lower + star
        if len(basis) != n or (n and rank(basis) != n):
            raise NotExactError(f"(E, ∂) is not exact in degree {k}", witness=str(k))
        star_basis[k] = star
        star_block[k] = []
        if not n:
            continue
        nlow = len(lower)
        M = transpose(basis, n)
        Minv = inverse(M)
        Mp = [[Poly.constant(V, x) for x in row] for row in M]
        Minvp = [[Poly.constant(V, x) for x in row] for row in Minv]
        for i in range(A.r):
            blk = [[zero] * n for _ in range(n)]
            for a in range(nlow):
                for b in range(nlow):
                    blk[a][b] = star_block[k - 1][i][a][b]
            for b in range(nlow, n):
                y = basis[b]
                img = [zero] * n
                for j in range(n):
                    if y[j]:
                        for t in range(n):
                            c = seed.matrices[i][pos[frame[t]]][pos[frame[j]]]
                            if c:
                                img[t] = img[t] + c * y[j]
                for a in range(nlow, n):
                    blk[a][b] = sum((img[t] * Minv[a][t] for t in range(n)), zero)
            star_block[k].append([row[nlow:] for row in blk[nlow:]])
            full = _pmatmul(_pmatmul(Mp, blk, V, n), Minvp, V, n)
            for a in range(n):
                for b in range(n):
                    mats[i][pos[frame[a]]][pos[frame[b]]] = full[a][b]
    alg = complex_.algebra
    d0 = complex_.component(0)
    images = {}
    for j, g in enumerate(complex_.gens):
        img = d0.image(g)
        for i in range(A.r):
            for k, h in enumerate(complex_.gens):
                c = mats[i][k][j]
                if c:
                    img = img + alg.monomial((i, h), c)
        images[g] = img
    return Ruth(A, complex_.bundle, images, name="transported", algebra=alg)


def twist_connection(complex_: Ruth, s_images) -> Ruth:
    """Add [∂, S] to the connection part, S of form degree 1 and internal degree -1.

    [∂, S] anticommutes with ∂, so compatibility [∇, ∂] = 0 is preserved; the
    transported connection commutes with h, and a twist makes d∇(h) nonzero.
    """
    alg = complex_.algebra
    S = ModuleMap(alg, alg, (0,) * alg.width, s_images, complex_.r)
    for g, img in S.images.items():
        for m in img.terms:
            if sum(1 for x in m if x < complex_.r) != 1 or alg.degree_of(m) != alg.degrees[g]:
                raise StructureError("S must be a 1-form with values in End^-1")
    d0 = complex_.component(0)
    theta = d0.compose(S) - S.compose(d0)
    images = {g: complex_.image(g) + theta.image(g) for g in complex_.gens}
    return Ruth(complex_.algebroid, complex_.bundle, images, name="twisted", algebra=alg)


def exact_rep(complex_: Ruth, h: ModuleMap | None = None, seed: AConnection | None = None,
              name: str | None = None) -> Ruth:
    """Complete ∂ + d∇ on an exact complex by ω_n = h∘d∇(h)^{n-2}∘R∇.

    ``complex_`` carries ∂ and (optionally) a compatible connection; with
    ``seed`` given, the connection is rebuilt by :func:`transported_connection`.
    """
    base = transported_connection(complex_, seed) if seed is not None else complex_
    r = base.r
    alg = base.algebra
    parts = {g: split_by_form_degree(img, r) for g, img in base.images.items()}
    if any(p >= 2 for ps in parts.values() for p in ps):
        raise StructureError("the input complex must only carry ∂ and a connection")
    eq = base.check_structure(max_i=1)
    bad = [rep for rep in eq[:2] if not rep.ok]
    if bad:
        raise StructureError(f"the connection is not compatible with the complex: {bad[0].name} fails "
                             f"({bad[0].witness})")
    h = h if h is not None else exact_homotopy(base)
    dn = _connection_ruth(base)
    R = curvature_map(base)
    dh = operator_commutator(dn.D, h, dn.D)
    images = {g: alg.zero() + base.image(g) for g in base.gens}
    chain = R
    for n in range(2, r + 1):
        omega = h.compose(chain)
        for g in base.gens:
            images[g] = images[g] + omega.image(g)
        chain = dh.compose(chain)
    return Ruth(base.algebroid, base.bundle, images, name=name or "exact", algebra=alg)


def intertwiner(source: Ruth, target: Ruth, h: ModuleMap | None = None) -> RuthMorphism:
    """Id + T with T of positive form degree and (Id+T)∘D = D'∘(Id+T).

    Both structures share the exact complex (E, ∂); T_n = -h∘Y_n where Y_n is
    the lowest remaining defect.
    """
    if [d for _, d in source.bundle] != [d for _, d in target.bundle]:
        raise StructureError("structures on different bundles")
    h = h if h is not None else exact_homotopy(target)
    alg = target.algebra
    r = source.r
    images = {g: alg.gen(t) for g, t in zip(source.gens, target.gens)}
    for n in range(r + 1):
        phi = RuthMorphism(source, target, images)
        defect = phi.residues()
        for g in source.gens:
            y = split_by_form_degree(-defect[source.algebra.names[g]], r).get(n)
            if y:
                # defect = D'Φ - ΦD, so Y = ΦD - D'Φ
                images[g] = images[g] - h(y)
    return RuthMorphism(source, target, images, name="Id+T")


# transfer

@dataclass
class TransferResult:
    ruth: Ruth
    phi: RuthMorphism
    contraction: ContractionData
    reports: List[IdentityReport] = field(default_factory=list)

    @property
    def ok(self):
        return all(rep.ok for rep in self.reports)


def transfer(ruth: Ruth, cd: ContractionData | None = None, name: str | None = None) -> TransferResult:
    """Structure on H(E, ∂) by homological perturbation.

    δ = D - ∂, D_H = p Σ(δh)^k δ i and Φ = p Σ(δh)^k.
    """
    A = ruth.algebroid
    r = A.r
    cx = fiber_complex(ruth)
    cd = cd if cd is not None else build_contraction(cx)
    frames = degree_frames(ruth)
    hbundle = []
    hframes: Dict[int, List[int]] = {}
    for k in sorted(frames):
        hframes[k] = []
        for b in range(cd.betti.get(k, 0)):
            hframes[k].append(r + len(hbundle))
            hbundle.append((f"H{k}.{b + 1}", k))
    hr = Ruth(A, hbundle, name=name or f"H({ruth.name})")
    halg, ealg = hr.algebra, ruth.algebra
    p_img, i_img, h_img = {}, {}, {}
    for k, frame in frames.items():
        p_img.update(_matrix_images(halg, frame, hframes[k], cd.p_at(k)))
        i_img.update(_matrix_images(ealg, hframes[k], frame, cd.i_at(k)))
        if k - 1 in frames:
            h_img.update(_matrix_images(ealg, frame, frames[k - 1], cd.h_at(k)))
    zero_parity = (0,) * ealg.width
    p_map = ModuleMap(ealg, halg, zero_parity, p_img, r)
    i_map = ModuleMap(halg, ealg, zero_parity, i_img, r)
    h_map = ModuleMap(ealg, ealg, ruth.D.parity, h_img, r)
    d0 = ruth.component(0)

    def delta(x):
        return ruth.D(x) - d0(x)

    def series(x):
        out, term = x, x
        for _ in range(r + 2):
            term = delta(h_map(term))
            if not term:
                break
            out = out + term
        return out

    def phi_of(x):
        return p_map(series(x))

    def dh_of(x):
        return p_map(series(delta(i_map(x))))

    hr = hr.with_images({g: dh_of(halg.gen(g)) for g in hr.gens})
    phi = RuthMorphism(ruth, hr, {g: phi_of(ealg.gen(g)) for g in ruth.gens}, name="Φ")
    reports = list(hr.check_structure())
    reports = [IdentityReport(f"D_H: {rep.name}", rep.ok, rep.witness) for rep in reports]
    reports += [IdentityReport(f"Φ: {rep.name}", rep.ok, rep.witness) for rep in phi.check()]
    w_der, w_lin = None, None
    forms = [()] + [(i,) for i in range(r)] + list(combinations(range(r), 2))
    for K in forms:
        for g in hr.gens:
            x = halg.monomial(K + (g,))
            if w_der is None and dh_of(x) != hr.D(x):
                w_der = f"θ^{K} {halg.names[g]}"
        for g in ruth.gens:
            x = ealg.monomial(K + (g,))
            if w_lin is None and phi_of(x) != phi(x):
                w_lin = f"θ^{K} {ealg.names[g]}"
    reports.append(IdentityReport("D_H is a derivation", w_der is None, w_der))
    reports.append(IdentityReport("Φ is Ω(A)-linear", w_lin is None, w_lin))
    return TransferResult(hr, phi, cd, reports)


# Serre representations

@dataclass
class SerreData:
    ruth: Ruth
    quotient: ChartAlgebroid
    ideal: List[int]
    curvature: Dict[Tuple[int, int], list]


def _lambda_names(ideal_size: int):
    names = []
    for k in range(ideal_size + 1):
        for combo in combinations(range(ideal_size), k):
            names.append((combo, "∧".join(f"λ{a + 1}" for a in combo) or "1"))
    return names


def serre_rep(total: ChartAlgebroid, ideal: Sequence[int], splitting=None, name: str | None = None) -> SerreData:
    """Representation of g = g̃/l on C(l) from an extension l → g̃ → g at point base.

    ``ideal`` lists the (0-based) basis vectors of g̃ spanning l; the remaining
    ones, in order, give the splitting σ(u_i) = e_{c_i} + Σ_a splitting[i][a] e_{l_a}.
    D = d_l + ∇^σ + i(R^σ) with ∇^σ_u = ad*_{σ(u)} on C(l).
    """
    if not total.is_point_base():
        raise UnsupportedBaseError("Serre representations are built for extensions of Lie algebras")
    failure = total.verify_axioms()
    if failure is not None:
        raise ExtensionError(f"g̃ is not a Lie algebra: {failure[0]} fails on {failure[1]}")
    n = total.r
    ideal = list(ideal)
    comp = [i for i in range(n) if i not in ideal]
    q, r = len(ideal), len(comp)
    c = [[[total.structure[k][i][j].constant_value() for j in range(n)] for i in range(n)] for k in range(n)]
    for a in ideal:
        for i in range(n):
            for k in comp:
                if c[k][a][i]:
                    raise ExtensionError(f"span{[x + 1 for x in ideal]} is not an ideal: "
                                         f"[e{a + 1},e{i + 1}] leaves it")
    sigma = []
    for i, ci in enumerate(comp):
        vec = [0] * n
        vec[ci] = 1
        if splitting is not None:
            for a, la in enumerate(ideal):
                vec[la] = vec[la] + splitting[i][a]
        sigma.append(vec)

    def bracket(x, y):
        out = [0] * n
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j]:
                        for k in range(n):
                            if c[k][i][j]:
                                out[k] += x[i] * y[j] * c[k][i][j]
        return out

    # quotient algebra g with basis u_i = image of e_{comp[i]}
    brackets = {}
    for i, j in combinations(range(r), 2):
        br = bracket(sigma[i], sigma[j])
        vals = [br[comp[k]] for k in range(r)]
        if any(vals):
            brackets[(i, j)] = vals
    g = ChartAlgebroid.from_brackets((), r, brackets=brackets, name=f"{total.name}/l")
    # curvature R(u_i,u_j) = [σu_i, σu_j] - σ[u_i,u_j], an element of l
    curv = {}
    for i, j in combinations(range(r), 2):
        br = bracket(sigma[i], sigma[j])
        for k in range(r):
            coef = br[comp[k]]
            if coef:
                br = [x - coef * y for x, y in zip(br, sigma[k])]
        if any(br[k] for k in comp):
            raise ExtensionError("σ-curvature does not lie in the ideal")
        curv[(i, j)] = [br[a] for a in ideal]
    # C(l) as a free graded algebra on λ^1..λ^q
    L = GradedAlgebra((), [f"λ{a + 1}" for a in range(q)], [(1,)] * q)
    d_l = Derivation(L, (1,), {
        a: sum((L.monomial((b, cc), -c[ideal[a]][ideal[b]][ideal[cc]])
                for b, cc in combinations(range(q), 2)), L.zero())
        for a in range(q)})

    def coadjoint(vec):
        # (ad*_X λ)(y) = -λ([X, y])
        images = {}
        for a in range(q):
            img = L.zero()
            for b in range(q):
                e_b = [0] * n
                e_b[ideal[b]] = 1
                coef = bracket(vec, e_b)[ideal[a]]
                if coef:
                    img = img - L.monomial((b,), coef)
            images[a] = img
        return Derivation(L, (0,), images)

    def contraction(y):
        return Derivation(L, (1,), {a: L.scalar(y[a]) for a in range(q) if y[a]})

    lam = _lambda_names(q)
    bundle = [(nm, len(combo)) for combo, nm in lam]
    ruth = Ruth(g, bundle, name=name or f"Serre({total.name})")
    alg = ruth.algebra
    lookup = {combo: r + k for k, (combo, _) in enumerate(lam)}

    def to_bundle(x: Element, forms: Tuple[int, ...]):
        out = alg.zero()
        for m, coef in x.terms.items():
            out = out + alg.monomial(forms + (lookup[m],), coef)
        return out

    nablas = [coadjoint(sigma[i]) for i in range(r)]
    contr = {key: contraction(y) for key, y in curv.items()}
    images = {}
    for combo, _ in lam:
        x = L.monomial(combo)
        img = to_bundle(d_l(x), ())
        for i in range(r):
            img = img + to_bundle(nablas[i](x), (i,))
        for (i, j), iota in contr.items():
            img = img - to_bundle(iota(x), (i, j))
        images[lookup[combo]] = img
    return SerreData(ruth.with_images(images), g, ideal, curv)


# long exact sequence of a length-one representation

@dataclass
class ExactSequenceReport:
    nodes: List[Tuple[str, int]]
    map_ranks: List[int]
    reports: List[IdentityReport]

    @property
    def ok(self):
        return all(rep.ok for rep in self.reports)


def _point_map(source: Ruth, target: Ruth, fn) -> Dict[int, list]:
    """Matrix of a map Ω(A;E) → Ω(A;F) on the monomial bases, per source degree."""
    sb, tb = source.basis(), target.basis()
    out = {}
    for k, cols in sb.items():
        img_deg = None
        mats_rows = {}
        for j, mono in enumerate(cols):
            img = fn(source.algebra.monomial(mono))
            for m, c in img.terms.items():
                d = target.algebra.degree_of(m)
                if img_deg is None:
                    img_deg = d
                elif d != img_deg:
                    raise StructureError("map is not homogeneous")
                rows = tb[d]
                mats_rows.setdefault(d, [[0] * len(cols) for _ in rows])
                mats_rows[d][rows.index(m)][j] = c.constant_value()
        out[k] = mats_rows
    return out


def _cochains(ruth: Ruth):
    """Per total degree: (dimension, d out as matrix list)."""
    if not ruth.gens:
        return {}, {}
    cx = ruth.total_complex()
    dims = {k: cx.dims[k - cx.lo] for k in cx.degrees}
    maps = {k: cx.map_out(k) for k in cx.degrees if cx.map_out(k) is not None}
    return dims, maps


def _induced_rank(fmat, src_dims, src_maps, tgt_dims, tgt_maps, k, k_out) -> int:
    """Rank of the map induced in cohomology from degree k to degree k_out."""
    n = src_dims.get(k, 0)
    if not n or not tgt_dims.get(k_out, 0):
        return 0
    dk = src_maps.get(k)
    cycles = nullspace(dk, n) if dk else [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    if not cycles:
        return 0
    m = tgt_dims[k_out]
    images = [[sum((fmat[i][j] * z[j] for j in range(n)), 0) for i in range(m)] for z in cycles]
    prev = tgt_maps.get(k_out - 1)
    bounds = [list(col) for col in zip(*prev)] if prev else []
    rb = rank(bounds) if bounds else 0
    return (rank(images + bounds) if images + bounds else 0) - rb


def long_exact_sequence(ruth: Ruth) -> ExactSequenceReport:
    """H^n(A;H⁰) → H^n(A;E) → H^{n-1}(A;H¹) → H^{n+1}(A;H⁰) → ... at point base.

    The connecting map is the wedge product with the transferred ω2.
    """
    lo, hi = ruth.degree_window()
    if hi - lo != 1:
        raise StructureError("the long exact sequence needs a representation of length one")
    res = transfer(ruth)
    H = res.ruth
    r = ruth.r
    h0 = [(nm, d) for nm, d in H.bundle if d == lo]
    h1 = [(nm, d) for nm, d in H.bundle if d == hi]
    A = ruth.algebroid
    X = Ruth(A, h0, name="H0")
    Y = Ruth(A, h1, name="H1")

    def restrict(target: Ruth, keep_forms):
        images = {}
        for g in target.gens:
            src = H.algebra.index[target.algebra.names[g]]
            img = target.algebra.zero()
            for m, c in H.image(src).terms.items():
                nm = H.algebra.names[m[-1]]
                if nm in target.algebra.index and keep_forms(m):
                    img = img + target.algebra.monomial(m[:-1] + (target.algebra.index[nm],), c)
            images[g] = img
        return target.with_images(images)

    X = restrict(X, lambda m: True)
    Y = restrict(Y, lambda m: sum(1 for g in m if g < r) == 1)

    def include(x):  # Ω(H⁰) → Ω(E) through i
        out = ruth.algebra.zero()
        for m, c in x.terms.items():
            nm = X.algebra.names[m[-1]]
            hx = H.algebra.monomial(m[:-1] + (H.algebra.index[nm],), c)
            out = out + _i_apply(res, H, ruth, hx)
        return out

    def project(x):  # Ω(E) → Ω(H¹): keep the E¹ part and apply p
        out = Y.algebra.zero()
        for m, c in x.terms.items():
            if ruth.algebra.degrees[m[-1]] != hi:
                continue
            img = _p_apply(res, H, ruth, ruth.algebra.monomial(m, c))
            for mm, cc in img.terms.items():
                nm = H.algebra.names[mm[-1]]
                if nm in Y.algebra.index:
                    out = out + Y.algebra.monomial(mm[:-1] + (Y.algebra.index[nm],), cc)
        return out

    def connect(x):  # ω2 of the transferred structure, H¹ → H⁰
        out = X.algebra.zero()
        for m, c in x.terms.items():
            nm = Y.algebra.names[m[-1]]
            hx = H.algebra.monomial(m[:-1] + (H.algebra.index[nm],), c)
            img = H.D(hx)
            for mm, cc in img.terms.items():
                nm2 = H.algebra.names[mm[-1]]
                if nm2 in X.algebra.index and sum(1 for g in mm if g < r) == len(m) - 1 + 2:
                    out = out + X.algebra.monomial(mm[:-1] + (X.algebra.index[nm2],), cc)
        return out

    xd, xm = _cochains(X)
    ed, em = _cochains(ruth)
    yd, ym = _cochains(Y)
    fi = _point_map(X, ruth, include) if X.gens else {}
    fp = _point_map(ruth, Y, project) if Y.gens else {}
    fc = _point_map(Y, X, connect) if (X.gens and Y.gens) else {}

    def betti(dims, maps, k):
        n = dims.get(k, 0)
        rk_out = rank(maps[k]) if maps.get(k) and n else 0
        rk_in = rank(maps[k - 1]) if maps.get(k - 1) and dims.get(k - 1) else 0
        return n - rk_out - rk_in

    degrees = range(lo, lo + r + 2)
    nodes, ranks = [], []
    for k in degrees:
        for label, dims, maps, nxt in (
                (f"H^{k - lo}(A;H⁰)", xd, xm, ("i", fi, ed, em, k)),
                (f"H^{k}(A;E)", ed, em, ("p", fp, yd, ym, k)),
                (f"H^{k - hi}(A;H¹)", yd, ym, ("ω2", fc, xd, xm, k + 1))):
            nodes.append((label, betti(dims, maps, k)))
            _, fmaps, tdims, tmaps, kout = nxt
            fmat = fmaps.get(k, {}).get(kout)
            if fmat is None:
                ranks.append(0)
            else:
                ranks.append(_induced_rank(fmat, dims, maps, tdims, tmaps, k, kout))
    reports = []
    for idx, (label, dim) in enumerate(nodes):
        incoming = ranks[idx - 1] if idx else 0
        outgoing = ranks[idx]
        ok = dim - outgoing == incoming
        reports.append(IdentityReport(f"exact at {label}", ok,
                                      None if ok else f"dim {dim}, rank in {incoming}, rank out {outgoing}"))
    return ExactSequenceReport(nodes, ranks, reports)


def _i_apply(res: TransferResult, H: Ruth, ruth: Ruth, x: Element) -> Element:
    cd = res.contraction
    frames = degree_frames(ruth)
    hframes = degree_frames(H)
    out = ruth.algebra.zero()
    for m, c in x.terms.items():
        g = m[-1]
        k = H.algebra.degrees[g]
        b = hframes[k].index(g)
        col = cd.i_at(k)
        for row, s in enumerate(frames[k]):
            v = col[row][b]
            if v:
                out = out + ruth.algebra.monomial(m[:-1] + (s,), c * v)
    return out


def _p_apply(res: TransferResult, H: Ruth, ruth: Ruth, x: Element) -> Element:
    cd = res.contraction
    frames = degree_frames(ruth)
    hframes = degree_frames(H)
    out = H.algebra.zero()
    for m, c in x.terms.items():
        g = m[-1]
        k = ruth.algebra.degrees[g]
        j = frames[k].index(g)
        pm = cd.p_at(k)
        for b, hg in enumerate(hframes.get(k, [])):
            v = pm[b][j]
            if v:
                out = out + H.algebra.monomial(m[:-1] + (hg,), c * v)
    return out
