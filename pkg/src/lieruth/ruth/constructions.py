"""Standard representations up to homotopy and operations on them."""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations
from typing import Dict, Sequence, Tuple

from ..algebroid import (_poly, AConnection, ChartAlgebroid, Connection, IdentityReport, basic_connection,
                         basic_curvature)
from ..errors import StructureError
from ..graded import Element, GradedAlgebra
from ..symcore import Poly
from .core import Ruth, RuthMorphism


def _curvature_table(conn: AConnection):
    """R[i][j][l][k]: s_k-component of R(e_i, e_j) s_l for i < j."""
    A = conn.algebroid
    e = [A.basis_section(i) for i in range(A.r)]
    out = {}
    for i, j in combinations(range(A.r), 2):
        for l in range(conn.n):
            out[(i, j, l)] = conn.curvature(e[i], e[j], conn.basis(l))
    return out


def _connection_part(alg: GradedAlgebra, conn: AConnection, gens: Sequence[int], j: int) -> Element:
    img = alg.zero()
    for i in range(conn.algebroid.r):
        for k, gk in enumerate(gens):
            c = conn.matrices[i][k][j]
            if c:
                img = img + alg.monomial((i, gk), c)
    return img


def trivial(A: ChartAlgebroid, name: str = "1") -> Ruth:
    return Ruth(A, [(name, 0)], {}, name="trivial")


def representation(A: ChartAlgebroid, conn: AConnection, degree: int = 0) -> Ruth:
    """An A-connection on a bundle concentrated in one degree (flat for a genuine representation)."""
    ruth = Ruth(A, [(n, degree) for n in conn.names], name="representation")
    alg = ruth.algebra
    images = {g: _connection_part(alg, conn, ruth.gens, j) for j, g in enumerate(ruth.gens)}
    return ruth.with_images(images)


def forms_rep(A: ChartAlgebroid, omega: Dict[Tuple[int, ...], object], n: int) -> Ruth:
    """Trivial line bundles u (degree 0) and v (degree n-1) with D v = ω u.

    ``omega`` maps increasing 0-based index tuples of length n to coefficients.
    D² = 0 exactly when ω is d_A-closed; otherwise the residue d_A(ω) u shows up
    in the equation of form degree n+1, the one containing d∇(ω_n).
    """
    if n < 1:
        raise StructureError("the form degree must be at least 1")
    ruth = Ruth(A, [("u", 0), ("v", n - 1)], name=f"forms(n={n})")
    alg = ruth.algebra
    img = alg.zero()
    u = alg.index["u"]
    for I, c in omega.items():
        I = tuple(I)
        if len(I) != n or list(I) != sorted(set(I)):
            raise StructureError(f"form indices {I} must be {n} increasing indices")
        img = img + alg.monomial(I + (u,), _poly(c, A.coordinates))
    return ruth.with_images({"v": img})


def adjoint(A: ChartAlgebroid, nabla: Connection) -> Ruth:
    """A in degree 0 and TM in degree 1 with ∂ = ρ, ∇ = ∇bas and ω2 = Rbas."""
    on_a, on_tm = basic_connection(A, nabla)
    R = basic_curvature(A, nabla)
    bundle = [(n, 0) for n in on_a.names] + [(n, 1) for n in on_tm.names]
    ruth = Ruth(A, bundle, name=f"Ad({A.name})")
    alg = ruth.algebra
    a_gens = ruth.gens[:A.r]
    t_gens = ruth.gens[A.r:]
    images = {}
    for j, g in enumerate(a_gens):
        img = _connection_part(alg, on_a, a_gens, j)
        for b, tb in enumerate(t_gens):
            if A.anchor[j][b]:
                img = img + alg.monomial((tb,), A.anchor[j][b])
        images[g] = img
    for b, g in enumerate(t_gens):
        img = _connection_part(alg, on_tm, t_gens, b)
        for i, j in combinations(range(A.r), 2):
            for k, ak in enumerate(a_gens):
                c = R[i][j][b][k]
                if c:
                    img = img + alg.monomial((i, j, ak), c)
        images[g] = img
    return ruth.with_images(images)


def coadjoint(A: ChartAlgebroid, nabla: Connection) -> Ruth:
    return dualize(adjoint(A, nabla), name=f"Ad*({A.name})")


def change_of_connection(A: ChartAlgebroid, nabla: Connection, nabla2: Connection,
                         source: Ruth | None = None, target: Ruth | None = None) -> RuthMorphism:
    """Φ: Ad_∇ → Ad_∇' with Φ_0 = Id and Φ_1(α)X = ∇'_X α - ∇_X α.

    Read the other way round, ∇_X α - ∇'_X α is the isomorphism Ad_∇' → Ad_∇.
    """
    src = source if source is not None else adjoint(A, nabla)
    tgt = target if target is not None else adjoint(A, nabla2)
    alg = tgt.algebra
    a_gens = tgt.gens[:A.r]
    images = {}
    for g_src, g_tgt in zip(src.gens, tgt.gens):
        images[g_src] = alg.gen(g_tgt)
    for b in range(A.m):
        g = tgt.gens[A.r + b]
        img = alg.gen(g)
        for i in range(A.r):
            for k, ak in enumerate(a_gens):
                c = nabla2.gamma[b][k][i] - nabla.gamma[b][k][i]
                if c:
                    img = img + alg.monomial((i, ak), c)
        images[src.gens[A.r + b]] = img
    return RuthMorphism(src, tgt, images, name="change of connection")


def double(A: ChartAlgebroid, conn: AConnection) -> Ruth:
    """E → E (identity) in degrees 0, 1; ∇ on both copies and ω2 = -R∇ from degree 1 to 0.

    The sign of ω2 is the one forced by ∂(ω2) + R∇ = 0 with ∂ = Id.
    """
    lower = [f"{n}.0" for n in conn.names]
    upper = [f"{n}.1" for n in conn.names]
    ruth = Ruth(A, [(n, 0) for n in lower] + [(n, 1) for n in upper], name="double")
    alg = ruth.algebra
    n = conn.n
    u = ruth.gens[:n]
    v = ruth.gens[n:]
    curv = _curvature_table(conn)
    images = {}
    for j in range(n):
        images[u[j]] = alg.gen(v[j]) + _connection_part(alg, conn, u, j)
        img = _connection_part(alg, conn, v, j)
        for (i, k, l), val in curv.items():
            if l != j:
                continue
            for t, c in enumerate(val):
                if c:
                    img = img - alg.monomial((i, k, u[t]), c)
        images[v[j]] = img
    return ruth.with_images(images)


def double_change_of_connection(A: ChartAlgebroid, conn: AConnection, conn2: AConnection) -> RuthMorphism:
    """Φ_0 = Id, Φ_1(α) = ∇'_α - ∇_α from the upper to the lower copy (direction as in
    :func:`change_of_connection`)."""
    src, tgt = double(A, conn), double(A, conn2)
    alg = tgt.algebra
    n = conn.n
    images = {g: alg.gen(h) for g, h in zip(src.gens, tgt.gens)}
    for j in range(n):
        img = alg.gen(tgt.gens[n + j])
        for i in range(A.r):
            for k in range(n):
                c = conn2.matrices[i][k][j] - conn.matrices[i][k][j]
                if c:
                    img = img + alg.monomial((i, tgt.gens[k]), c)
        images[src.gens[n + j]] = img
    return RuthMorphism(src, tgt, images, name="change of connection")


# duals

def _dual_name(name: str) -> str:
    return name + "*"


def dualize(ruth: Ruth, name: str | None = None) -> Ruth:
    """Dual bundle (degrees negated) with the structure operator fixed by the pairing identity.

    With D(s_l) = Σ a^I_{jl} θ^I s_j the dual frame satisfies
    D*(η^j) = Σ b^I_{lj} θ^I η^l, b^I_{lj} = -(-1)^{deg(s_j)(1+|I|)} a^I_{jl}.
    """
    A = ruth.algebroid
    r = A.r
    bundle = [(_dual_name(n), -d) for n, d in ruth.bundle]
    dual = Ruth(A, bundle, name=name or f"{ruth.name}*")
    alg = dual.algebra
    pos = {g: k for k, g in enumerate(ruth.gens)}
    images: Dict[int, Element] = {g: alg.zero() for g in dual.gens}
    for l, gl in enumerate(ruth.gens):
        for m, c in ruth.image(gl).terms.items():
            I = tuple(x for x in m if x < r)
            j = pos[m[-1]]
            dj = ruth.algebra.degrees[ruth.gens[j]]
            sign = -1 if (dj * (1 + len(I))) % 2 == 0 else 1
            # coefficient of θ^I η^l in D*(η^j)
            images[dual.gens[j]] = images[dual.gens[j]] + alg.monomial(I + (dual.gens[l],), c * sign)
    return dual.with_images(images)


def pairing_check(ruth: Ruth, dual: Ruth | None = None, multipliers: bool = True) -> IdentityReport:
    """d_A⟨η, s⟩ = ⟨D*η, s⟩ + (-1)^{|η|}⟨η, Ds⟩ on products of frame elements.

    Both bundles live in one algebra (η in weight channel 1, s in channel 2);
    the contraction η^j s_k ↦ δ_jk is Ω(A)-linear, so the identity says that
    contraction intertwines D* ⊕ D with d_A.  Checked on θ^K f η^j · s_k for
    |K| ≤ 1 and f ∈ {1, x_a}.
    """
    A = ruth.algebroid
    r = A.r
    dual = dual if dual is not None else dualize(ruth)
    n = len(ruth.gens)
    bundle = [(f"{n}#1", d) for n, d in dual.bundle] + [(f"{n}#2", d) for n, d in ruth.bundle]
    alg = A.form_algebra(bundle, channels=[1] * n + [2] * n, width=3)
    from ..graded import Derivation
    base = A.d_A(alg)
    table = dict(base.images)
    for k, g in enumerate(dual.gens):
        table[r + k] = dual.embed(dual.image(g), alg, 0)
    for k, g in enumerate(ruth.gens):
        table[r + n + k] = ruth.embed(ruth.image(g), alg, n)
    D = Derivation(alg, base.parity, table, base.coord_images)
    omega = A.form_algebra(())
    d_omega = A.d_A(omega)

    def contract(x: Element) -> Element:
        out = omega.zero()
        for m, c in x.terms.items():
            eta = [g for g in m if r <= g < r + n]
            ss = [g for g in m if g >= r + n]
            if len(eta) != 1 or len(ss) != 1:
                raise StructureError("pairing needs one dual and one primal generator")
            if eta[0] - r == ss[0] - r - n:
                out = out + omega.monomial(tuple(g for g in m if g < r), c)
        return out

    scalars = [Poly.one(A.coordinates)] + ([A.coordinate(a) for a in range(A.m)] if multipliers else [])
    for j in range(n):
        for k in range(n):
            for K in [()] + [(i,) for i in range(r)]:
                for f in scalars:
                    eta = alg.monomial(K + (r + j,), f)
                    s = alg.gen(r + n + k)
                    lhs = d_omega(contract(eta * s))
                    rhs = contract(D(eta * s))
                    if lhs != rhs:
                        return IdentityReport(
                            "duality pairing", False,
                            f"η={eta}, s={alg.names[r + n + k]}: {lhs - rhs}")
    return IdentityReport("duality pairing", True, None)


def sign_twist(source: Ruth, target: Ruth) -> RuthMorphism:
    """Frame-to-frame map s ↦ (-1)^{deg s} s' between equally shaped bundles."""
    alg = target.algebra
    images = {}
    for g, h in zip(source.gens, target.gens):
        d = source.algebra.degrees[g]
        images[g] = alg.gen(h) if d % 2 == 0 else -alg.gen(h)
    return RuthMorphism(source, target, images, name="(-1)^n")


# tensor constructions

def _translate(x: Element, target: GradedAlgebra, r: int, lookup) -> Element:
    out = target.zero()
    for m, c in x.terms.items():
        forms = tuple(g for g in m if g < r)
        key = tuple(g for g in m if g >= r)
        out = out + target.monomial(forms + (lookup[key],), c)
    return out


def tensor(E: Ruth, F: Ruth, name: str | None = None) -> Ruth:
    """E ⊗ F with D(u⊗v) = D(u)⊗v + (-1)^{|u|} u⊗D(v)."""
    if E.algebroid is not F.algebroid:
        raise StructureError("tensor product of representations of different algebroids")
    A = E.algebroid
    r = A.r
    ne, nf = len(E.gens), len(F.gens)
    tagged = [(f"{n}#1", d) for n, d in E.bundle] + [(f"{n}#2", d) for n, d in F.bundle]
    big = A.form_algebra(tagged, channels=[1] * ne + [2] * nf, width=3)
    from ..graded import Derivation
    base = A.d_A(big)
    table = dict(base.images)
    for k, g in enumerate(E.gens):
        table[r + k] = E.embed(E.image(g), big, 0)
    for k, g in enumerate(F.gens):
        table[r + ne + k] = F.embed(F.image(g), big, ne)
    D = Derivation(big, base.parity, table, base.coord_images)
    bundle, lookup = [], {}
    for a, (na, da) in enumerate(E.bundle):
        for b, (nb, db) in enumerate(F.bundle):
            lookup[(r + a, r + ne + b)] = r + len(bundle)
            bundle.append((f"{na}⊗{nb}", da + db))
    out = Ruth(A, bundle, name=name or f"{E.name}⊗{F.name}")
    images = {}
    for (ga, gb), g in lookup.items():
        prod = big.gen(ga) * big.gen(gb)
        images[g] = _translate(D(prod), out.algebra, r, lookup)
    return out.with_images(images)


def _weight_algebra(E: Ruth) -> GradedAlgebra:
    return E.algebroid.form_algebra(E.bundle, channels=[1] * len(E.gens), width=2)


def exterior_power(E: Ruth, k: int, name: str | None = None) -> Ruth:
    """Λ^k E: products of k frame elements in the graded-exterior sense.

    A frame element of even degree anticommutes with itself (exterior), one of
    odd degree commutes with itself (symmetric), following the Koszul rule.
    """
    A = E.algebroid
    r = A.r
    alg = _weight_algebra(E)
    from ..graded import Derivation
    base = A.d_A(alg)
    table = dict(base.images)
    for g in E.gens:
        table[g] = E.embed(E.image(g), alg, 0)
    D = Derivation(alg, base.parity, table, base.coord_images)
    bundle, lookup = [], {}
    for combo in combinations_with_replacement(E.gens, k):
        prod = alg.monomial(combo)
        if not prod:
            continue
        lookup[combo] = r + len(bundle)
        bundle.append(("∧".join(alg.names[g] for g in combo), sum(alg.degrees[g] for g in combo)))
    out = Ruth(A, bundle, name=name or f"Λ{k}({E.name})")
    images = {}
    for combo, g in lookup.items():
        images[g] = _translate(D(alg.monomial(combo)), out.algebra, r, lookup)
    return out.with_images(images)


def antisymmetrizer(E: Ruth, k: int, wedge_rep: Ruth | None = None, tensor_rep: Ruth | None = None) -> RuthMorphism:
    """Λ^k E → E^{⊗k}, w_J ↦ Σ_σ ε(σ) s_{J_σ(1)} ⊗ ... ⊗ s_{J_σ(k)} (only k = 2 is built here)."""
    if k != 2:
        raise StructureError("the antisymmetrizer is provided for k = 2")
    lam = wedge_rep if wedge_rep is not None else exterior_power(E, 2)
    ten = tensor_rep if tensor_rep is not None else tensor(E, E)
    alg = _weight_algebra(E)
    names = {n: i for i, n in enumerate(ten.algebra.names)}
    images = {}
    for g in lam.gens:
        combo = tuple(alg.index[n] for n in lam.algebra.names[g].split("∧"))
        img = ten.algebra.zero()
        for order in permutations(combo):
            sign, mono = alg.mono_mul((order[0],), (order[1],))
            if not sign:
                continue
            # mono is the sorted product; order[0]*order[1] = sign * mono = sign * combo-product
            label = f"{alg.names[order[0]]}⊗{alg.names[order[1]]}"
            img = img + ten.algebra.gen(names[label]).scale(sign)
        images[g] = img
    return RuthMorphism(lam, ten, images, name="antisymmetrizer")
