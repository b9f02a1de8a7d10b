# Copyright (C) 2020,2023 Famedly
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program. If not, see <http://www.gnu.org/licenses/>.
"""Extension constructions for isotone maps across free products.

Every construction builds its witness objects and re-checks what it promises
before returning; a failing postcondition raises ``VerificationFailed``.
"""
import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from lattice_extensions.config import DEFAULT_FB_MAX_GENERATORS, DEFAULT_FD_MAX_GENERATORS
from lattice_extensions.core import (
    PASSED,
    CheckResult,
    FiniteLattice,
    Label,
    MapMode,
    MonotoneMap,
    bottom_of,
    chain,
    dual,
    extend_isotone_complete,
    is_convex,
    join_all,
    map_check,
    meet_all,
    ordinal_sum_lattices,
    product,
    same,
    sublattice_closure,
    subspaces_f2,
    variety_check,
    with_new_bottom,
)
from lattice_extensions.errors import (
    BoundsElement,
    CapExceeded,
    EmptyIndexSet,
    EmptyList,
    HypothesisViolated,
    NotDistributiveCodomain,
    NotIsotoneInput,
    NotJoinHom,
    NotLowerBound,
    VerificationFailed,
)
from lattice_extensions.free import (
    FBElement,
    FDElement,
    FiniteJoinSemilattice,
    FreeLatticeTerms,
    Gen,
    cube_generators,
    fb_lattice,
    fb_one,
    fb_prime_implicants,
    fb_zero,
    fd_dual,
    fd_eval,
    fd_from_term,
    fd_lattice,
    fl_leq,
    free_product_jsl,
    parse_term,
)
from lattice_extensions.partial import boolean_minus_bounds, ordinal_sum

logger = logging.getLogger(__name__)

TWO = chain(2, name="2")


@dataclass
class FactorizationResult:
    """Maps ``L_i -> intermediate -> M`` whose composites are the given ``φ_i``."""

    intermediate: FiniteLattice
    injections: list[MonotoneMap]
    projection: MonotoneMap
    maps: list[MonotoneMap]
    embeddings: bool = True
    projection_modes: tuple[str, ...] = (MapMode.ISOTONE,)
    verified: list[str] = field(default_factory=list)

    def verify(self) -> list[str]:
        """Re-run every invariant, raising ``VerificationFailed`` on the first miss."""
        passed = []
        inj_modes = [MapMode.LATTICE_HOM]
        if self.embeddings:
            inj_modes.append(MapMode.EMBEDDING)
        for i, (inj, phi) in enumerate(zip(self.injections, self.maps, strict=True)):
            for mode in inj_modes:
                result = map_check(inj, mode)
                if not result:
                    raise VerificationFailed(f"injection_{i}:{mode}", result.witness)
                passed.append(f"injection_{i}:{mode}")
            composite = inj.then(self.projection).agrees_with(phi)
            if not composite:
                raise VerificationFailed(f"composite_{i}", composite.witness)
            passed.append(f"composite_{i}")
        for mode in self.projection_modes:
            result = map_check(self.projection, mode)
            if not result:
                raise VerificationFailed(f"projection:{mode}", result.witness)
            passed.append(f"projection:{mode}")
        self.verified = passed
        logger.debug("verified %s", ", ".join(passed))
        return passed


def _require_isotone(maps: Sequence[MonotoneMap]) -> None:
    for i, phi in enumerate(maps):
        result = map_check(phi, MapMode.ISOTONE)
        if not result:
            msg = f"map {phi.name or i} is not isotone"
            raise NotIsotoneInput(msg, witness=result.witness)


def _same_codomain(M: Any, N: Any) -> bool:
    if M is N:
        return True
    if isinstance(M, FiniteLattice) and isinstance(N, FiniteLattice):
        return M.same_lattice(N)
    return False


def _require_common_codomain(
    Ls: Sequence[FiniteLattice], phis: Sequence[MonotoneMap]
) -> Any:
    """The shared codomain of ``phis``, each defined on the matching ``Ls[i]``."""
    if len(Ls) != len(phis):
        raise HypothesisViolated("one_map_per_lattice", (len(Ls), len(phis)))
    for i, (L, phi) in enumerate(zip(Ls, phis)):
        if phi.domain is not L and not phi.domain.same_order(L):
            raise HypothesisViolated("map_domain", phi.name or i)
    M = phis[0].codomain
    for i, phi in enumerate(phis[1:], start=1):
        if not _same_codomain(M, phi.codomain):
            raise HypothesisViolated("common_codomain", (phis[0].name or 0, phi.name or i))
    return M


def lemma_extension(
    phi: MonotoneMap, e: Label
) -> tuple[FiniteLattice, MonotoneMap, MonotoneMap]:
    """Extend ``φ: L -> M`` to ``L × 2 × 2`` so that ``e`` lies in the range.

    ``(x,0,1) ↦ φ(x)``, ``(x,1,0) ↦ e``, ``(x,0,0) ↦ φ(x)∧e``, ``(x,1,1) ↦ φ(x)∨e``.
    """
    _require_isotone([phi])
    L, M = phi.domain, phi.codomain
    bar = product([L, TWO, TWO], name=f"{L.name}×2×2")
    emb = MonotoneMap(L, bar, lambda x: (x, 0, 1), name="emb")

    def value(t: tuple) -> Label:
        x, s, u = t
        if (s, u) == (0, 1):
            return phi(x)
        if (s, u) == (1, 0):
            return e
        if (s, u) == (0, 0):
            return M.meet(phi(x), e)
        return M.join(phi(x), e)

    phi_bar = MonotoneMap(bar, M, value, name="φ̄").verified_as(MapMode.ISOTONE)
    composite = emb.then(phi_bar).agrees_with(phi)
    if not composite:
        raise VerificationFailed("composite", composite.witness)
    if not same(M, phi_bar((L.elements[0], 1, 0)), e):
        raise VerificationFailed("e_in_range", e)
    if variety_check(L).distributive and not variety_check(bar).distributive:
        raise VerificationFailed("distributive", bar.name)
    return bar, emb.verified_as(MapMode.LATTICE_HOM, MapMode.EMBEDDING), phi_bar


def sea_level_psi(M: Any, e: Label, fs: Sequence[Label]) -> Label:
    """Meet of ``fs`` if all lie below ``e``, else the join of those that do not."""
    if not fs:
        msg = "sea level map over an empty index set"
        raise EmptyIndexSet(msg)
    above = [f for f in fs if not M.le(f, e)]
    if not above:
        return meet_all(M, fs)
    return join_all(M, above)


def main_factorization(
    Ls: Sequence[FiniteLattice], phis: Sequence[MonotoneMap], e: Label
) -> FactorizationResult:
    if not Ls:
        msg = "main factorization over an empty index set"
        raise EmptyIndexSet(msg)
    _require_isotone(phis)
    M = _require_common_codomain(Ls, phis)
    if isinstance(M, FiniteLattice) and e not in M:
        raise HypothesisViolated("e_in_codomain", e)
    parts = [lemma_extension(phi, e) for phi in phis]
    bars = [bar for bar, _, _ in parts]
    intermediate = product(bars, name="∏L̄")
    bases = [(L.elements[0], 1, 0) for L in Ls]

    def injection(i: int) -> MonotoneMap:
        emb = parts[i][1]
        return MonotoneMap(
            Ls[i],
            intermediate,
            lambda x: tuple(emb(x) if j == i else bases[j] for j in range(len(Ls))),
            name=f"inj{i}",
        )

    projection = MonotoneMap(
        intermediate,
        M,
        lambda t: sea_level_psi(
            M, e, [phi_bar(c) for (_, _, phi_bar), c in zip(parts, t, strict=True)]
        ),
        name="ψ",
    )
    result = FactorizationResult(
        intermediate, [injection(i) for i in range(len(Ls))], projection, list(phis)
    )
    result.verify()
    if all(variety_check(L).distributive for L in Ls):
        if not variety_check(intermediate).distributive:
            raise VerificationFailed("distributive", intermediate.name)
        result.verified.append("intermediate:distributive")
    return result


def two_lattice_symmetric(
    L0: FiniteLattice,
    L1: FiniteLattice,
    phi0: MonotoneMap,
    phi1: MonotoneMap,
    e0: Label,
    e1: Label,
) -> FactorizationResult:
    """The construction on ``L0 × L1 × 2 × 2``, symmetric in the two lattices
    and in meet and join."""
    _require_isotone([phi0, phi1])
    M = _require_common_codomain([L0, L1], [phi0, phi1])
    intermediate = product([L0, L1, TWO, TWO], name=f"{L0.name}×{L1.name}×2×2")
    inj0 = MonotoneMap(L0, intermediate, lambda x: (x, e1, 1, 0), name="inj0")
    inj1 = MonotoneMap(L1, intermediate, lambda y: (e0, y, 0, 1), name="inj1")

    def value(t: tuple) -> Label:
        x, y, s, u = t
        if (s, u) == (1, 0):
            return phi0(x)
        if (s, u) == (0, 1):
            return phi1(y)
        if (s, u) == (0, 0):
            return M.meet(phi0(x), phi1(y))
        return M.join(phi0(x), phi1(y))

    projection = MonotoneMap(intermediate, M, value, name="φ'")
    result = FactorizationResult(intermediate, [inj0, inj1], projection, [phi0, phi1])
    result.verify()
    return result


def check_swap_symmetry(
    L0: FiniteLattice,
    L1: FiniteLattice,
    phi0: MonotoneMap,
    phi1: MonotoneMap,
    e0: Label,
    e1: Label,
) -> CheckResult:
    """Swapping the two inputs equals permuting coordinates ``(x,y,s,t) ↦ (y,x,t,s)``."""
    straight = two_lattice_symmetric(L0, L1, phi0, phi1, e0, e1).projection
    swapped = two_lattice_symmetric(L1, L0, phi1, phi0, e1, e0).projection
    for x, y, s, t in straight.domain.elements:
        if straight((x, y, s, t)) != swapped((y, x, t, s)):
            return CheckResult(False, (x, y, s, t))
    return PASSED


def _dual_map(phi: MonotoneMap, domain: FiniteLattice, codomain: FiniteLattice):
    return MonotoneMap(domain, codomain, phi, name=f"{phi.name}ᵒᵖ")


def check_dual_symmetry(
    L0: FiniteLattice,
    L1: FiniteLattice,
    phi0: MonotoneMap,
    phi1: MonotoneMap,
    e0: Label,
    e1: Label,
) -> CheckResult:
    """Constructing from dualized inputs equals dualizing the construction,
    once the two 2-chain coordinates are swapped and reversed."""
    M = phi0.codomain
    D0, D1, DM = dual(L0), dual(L1), dual(M)
    straight = two_lattice_symmetric(L0, L1, phi0, phi1, e0, e1).projection
    dualized = two_lattice_symmetric(
        D0, D1, _dual_map(phi0, D0, DM), _dual_map(phi1, D1, DM), e0, e1
    ).projection
    for x, y, s, t in straight.domain.elements:
        if dualized((x, y, s, t)) != straight((x, y, 1 - t, 1 - s)):
            return CheckResult(False, (x, y, s, t))
    return PASSED


def iterated_factorization(
    Ls: Sequence[FiniteLattice],
    phis: Sequence[MonotoneMap],
    e_choices: Sequence[tuple[Label, Label]] | None = None,
) -> FactorizationResult:
    """Fold the two-lattice construction left to right over the list order.

    Step ``j`` pairs the intermediate built so far with ``Ls[j]`` using
    ``e_choices[j - 1]``; the default picks the first element of each side.
    """
    if not Ls:
        msg = "iterated factorization over an empty index set"
        raise EmptyIndexSet(msg)
    _require_isotone(phis)
    _require_common_codomain(Ls, phis)
    current = Ls[0]
    projection = phis[0]
    injections = [MonotoneMap(Ls[0], Ls[0], lambda x: x, name="inj0")]
    for j in range(1, len(Ls)):
        e0, e1 = (
            e_choices[j - 1]
            if e_choices is not None
            else (current.elements[0], Ls[j].elements[0])
        )
        step = two_lattice_symmetric(current, Ls[j], projection, phis[j], e0, e1)
        lift = step.injections[0]
        injections = [inj.then(lift, name=inj.name) for inj in injections]
        injections.append(step.injections[1])
        current, projection = step.intermediate, step.projection
    result = FactorizationResult(current, injections, projection, list(phis))
    result.verify()
    return result


def fd_generators(n: int) -> tuple[str, ...]:
    return tuple(f"g{i}" for i in range(n))


def prod_times_free(
    Ls: Sequence[FiniteLattice],
    phis: Sequence[MonotoneMap],
    M: FiniteLattice,
    base_choices: Sequence[Label] | None = None,
    cap: int = DEFAULT_FD_MAX_GENERATORS,
) -> FactorizationResult:
    """``∏ L_i × FD(I)``, projecting ``(x, w)`` to ``w`` evaluated at ``(φ_i(x_i))``."""
    if not Ls:
        msg = "product times free over an empty index set"
        raise EmptyIndexSet(msg)
    if len(Ls) > cap:
        msg = f"FD on {len(Ls)} generators exceeds the cap of {cap}"
        raise CapExceeded(msg, witness=len(Ls))
    report = variety_check(M)
    if not report.distributive:
        msg = f"{M.name} is not distributive"
        witness = report.pentagon_witness or report.diamond_witness
        raise NotDistributiveCodomain(msg, witness=witness)
    _require_isotone(phis)
    gens = fd_generators(len(Ls))
    FD = fd_lattice(gens)
    base = product(Ls, name="∏L")
    intermediate = product([base, FD], name=f"∏L×{FD.name}")
    bases = list(base_choices) if base_choices is not None else [L.elements[0] for L in Ls]
    generator = {g: fd_from_term(Gen(g), gens) for g in gens}

    def injection(i: int) -> MonotoneMap:
        return MonotoneMap(
            Ls[i],
            intermediate,
            lambda x: (
                tuple(x if j == i else bases[j] for j in range(len(Ls))),
                generator[gens[i]],
            ),
            name=f"inj{i}",
        )

    def value(t: tuple) -> Label:
        xs, w = t
        return fd_eval(w, M, {g: phi(x) for g, phi, x in zip(gens, phis, xs, strict=True)})

    projection = MonotoneMap(intermediate, M, value, name="φ'")
    result = FactorizationResult(
        intermediate, [injection(i) for i in range(len(Ls))], projection, list(phis)
    )
    result.verify()
    return result


@dataclass
class NeqReport:
    joinands: tuple[Label, Label]
    joinand_images: tuple[Label, Label]
    join: Label
    join_image: Label
    join_hom: CheckResult
    factorization: FactorizationResult

    @property
    def reproduced(self) -> bool:
        return (
            self.joinand_images == (0, 0)
            and self.join_image == 1
            and not self.join_hom
        )


def check_neq_example() -> NeqReport:
    """Two 2-chains mapped identically into a 2-chain: the projection of the
    product-times-free construction is isotone but not join preserving."""
    L = chain(2)
    ident = [MonotoneMap(L, L, lambda x: x, name=f"id{i}") for i in range(2)]
    result = prod_times_free([L, L], ident, L)
    gens = fd_generators(2)
    w = fd_from_term(parse_term("g0 ∧ g1", gens), gens)
    left, right = ((0, 1), w), ((1, 0), w)
    join = result.intermediate.join(left, right)
    images = (result.projection(left), result.projection(right))
    return NeqReport(
        (left, right),
        images,
        join,
        result.projection(join),
        map_check(result.projection, MapMode.JOIN_HOM),
        result,
    )


def median_element() -> FDElement:
    """``(a∧b)∨(b∧c)∨(c∧a)``, checked equal to ``(a∨b)∧(b∨c)∧(c∨a)``, fixed by
    every generator permutation and by the dual anti-automorphism."""
    gens = ("a", "b", "c")
    joins_of_meets = fd_from_term(parse_term("(a ∧ b) ∨ (b ∧ c) ∨ (c ∧ a)", gens), gens)
    meets_of_joins = fd_from_term(parse_term("(a ∨ b) ∧ (b ∨ c) ∧ (c ∨ a)", gens), gens)
    if joins_of_meets != meets_of_joins:
        raise VerificationFailed("median_forms", (joins_of_meets, meets_of_joins))
    for perm in itertools.permutations(gens):
        rename = dict(zip(gens, perm, strict=True))
        permuted = FDElement(
            gens,
            frozenset(frozenset(rename[g] for g in s) for s in joins_of_meets.antichain),
        )
        if permuted != joins_of_meets:
            raise VerificationFailed("median_symmetric", perm)
    if fd_dual(joins_of_meets) != joins_of_meets:
        raise VerificationFailed("median_self_dual", joins_of_meets)
    return joins_of_meets


@dataclass
class CorollaryResult:
    generators: tuple[str, ...]
    composite: MonotoneMap
    factorization: FactorizationResult
    pairs_checked: int
    fixes_generators: bool

    def generator_check(self) -> CheckResult:
        """The composite sends each generator of the distributive lattice to
        the same generator of the free lattice."""
        for g in self.generators:
            image = self.composite(fd_from_term(Gen(g), self.generators))
            if image != Gen(g):
                return CheckResult(False, (g, image))
        return PASSED


def corollary_fd_to_free(
    gens: Sequence[str] = ("a", "b", "c"), e: Label | None = None
) -> CorollaryResult:
    """An isotone map from the free distributive lattice to the free lattice
    that fixes the generators.

    Each generator is its own one-element lattice mapped to the matching free
    lattice generator; the distributive intermediate receives the lattice
    homomorphism extending the injections, and the projection back to terms
    is compared through the Whitman order.
    """
    gens = tuple(gens)
    terms = FreeLatticeTerms(gens)
    points = [chain(1, name=g) for g in gens]
    phis = [
        MonotoneMap(P, terms, lambda _, g=g: Gen(g), name=f"φ{g}")
        for P, g in zip(points, gens, strict=True)
    ]
    sea = e if e is not None else Gen(gens[0])
    factorization = main_factorization(points, phis, sea)
    FD = fd_lattice(gens)
    images = {g: inj(0) for g, inj in zip(gens, factorization.injections, strict=True)}
    h = MonotoneMap(
        FD,
        factorization.intermediate,
        lambda w: fd_eval(w, factorization.intermediate, images),
        name="h",
    ).verified_as(MapMode.LATTICE_HOM)
    composite = h.then(factorization.projection, name="ψh")
    checked = 0
    for x, y in itertools.product(FD.elements, repeat=2):
        checked += 1
        if FD.le(x, y) and not fl_leq(composite(x), composite(y)):
            raise VerificationFailed("isotone", (x, y))
    fixed = all(
        composite(fd_from_term(Gen(g), gens)) == Gen(g) for g in gens
    )
    if not fixed:
        raise VerificationFailed("fixes_generators", gens)
    return CorollaryResult(gens, composite, factorization, checked, fixed)


def lemma_cvx_retr_check(
    L: FiniteLattice, K: Sequence[Label], rho: MonotoneMap
) -> CheckResult:
    """Below some element of a convex retract means below one's own retraction."""
    members = set(K)
    for x, y in itertools.combinations_with_replacement(members, 2):
        if L.meet(x, y) not in members or L.join(x, y) not in members:
            raise HypothesisViolated("sublattice", (x, y))
    convex = is_convex(L, members)
    if not convex:
        raise HypothesisViolated("convexity", convex.witness)
    hom = map_check(rho, MapMode.LATTICE_HOM)
    if not hom:
        raise HypothesisViolated("retraction", hom.witness)
    for x in L.elements:
        if rho(x) not in members or rho(rho(x)) != rho(x):
            raise HypothesisViolated("retraction", x)
    for k in members:
        if rho(k) != k:
            raise HypothesisViolated("retraction", k)
    for x in L.elements:
        for r in members:
            if L.le(x, r) and not L.le(x, rho(x)):
                return CheckResult(False, (x, r))
    return PASSED


def retract_factorization(
    Ls: Sequence[FiniteLattice],
    K: FiniteLattice,
    embeds: Sequence[MonotoneMap],
    rhos: Sequence[MonotoneMap],
    phis: Sequence[MonotoneMap],
) -> FactorizationResult:
    """Lattices sharing a convex retract ``K``, glued inside ``K × ∏ L_i``.

    Coordinate 0 holds the ``K`` part; the intermediate keeps the tuples ``f``
    with ``ρ_i(f(i)) = f(0)`` for every ``i``.
    """
    if not Ls:
        msg = "retract factorization over an empty index set"
        raise EmptyIndexSet(msg)
    _require_isotone(phis)
    M = phis[0].codomain
    for i, (L, emb, rho) in enumerate(zip(Ls, embeds, rhos, strict=True)):
        result = map_check(emb, MapMode.EMBEDDING)
        if not result:
            raise HypothesisViolated("embedding", (i, result.witness))
        convex = is_convex(L, emb.image())
        if not convex:
            raise HypothesisViolated("convexity", (i, convex.witness))
        result = map_check(rho, MapMode.LATTICE_HOM)
        if not result:
            raise HypothesisViolated("retraction", (i, result.witness))
        for k in K.elements:
            if rho(emb(k)) != k:
                raise HypothesisViolated("retraction", (i, k))
    for k in K.elements:
        values = {phi(emb(k)) for phi, emb in zip(phis, embeds, strict=True)}
        if len(values) > 1:
            raise HypothesisViolated("agreement", (k, sorted(map(str, values))))

    full = product([K, *Ls], name="K×∏L")
    members = [
        f
        for f in full.elements
        if all(rho(f[i + 1]) == f[0] for i, rho in enumerate(rhos))
    ]
    intermediate = full.sublattice(members, name="L'")

    def injection(i: int) -> MonotoneMap:
        rho = rhos[i]
        return MonotoneMap(
            Ls[i],
            intermediate,
            lambda x: (rho(x),)
            + tuple(x if j == i else embeds[j](rho(x)) for j in range(len(Ls))),
            name=f"inj{i}",
        )

    def value(f: tuple) -> Label:
        base = f[0]
        parts = f[1:]
        high = [
            phis[i](x) for i, x in enumerate(parts) if not Ls[i].le(x, embeds[i](base))
        ]
        if not high:
            return meet_all(M, [phi(x) for phi, x in zip(phis, parts, strict=True)])
        return join_all(M, high)

    projection = MonotoneMap(intermediate, M, value, name="ψ")
    result = FactorizationResult(
        intermediate, [injection(i) for i in range(len(Ls))], projection, list(phis)
    )
    result.verify()
    for f in intermediate.elements:
        for i in range(len(Ls)):
            if all(
                f[j + 1] == embeds[j](f[0]) for j in range(len(Ls)) if j != i
            ) and not same(M, projection(f), phis[i](f[i + 1])):
                raise VerificationFailed("all_but_one", (i, f))
    result.verified.append("all_but_one")
    return result


def retract_containment_check(
    result: FactorizationResult, embeds: Sequence[MonotoneMap]
) -> CheckResult:
    """For ``f <= g`` in the intermediate, the coordinates of ``f`` above their
    base are among those of ``g``."""
    L = result.intermediate
    Ls = [emb.codomain for emb in embeds]

    def high(f: tuple) -> set[int]:
        return {i for i, x in enumerate(f[1:]) if not Ls[i].le(x, embeds[i](f[0]))}

    for f in L.elements:
        for g in L.elements:
            if L.le(f, g) and not high(f) <= high(g):
                return CheckResult(False, (f, g))
    return PASSED


@dataclass
class ConvexityReport:
    size: int
    a: Label
    b: tuple[Label, Label]
    middle: Label
    convex_in_parts: list[bool]
    retract_in_parts: list[bool]
    convex_in_union: CheckResult

    @property
    def reproduced(self) -> bool:
        return (
            self.size == 16
            and all(self.convex_in_parts)
            and all(self.retract_in_parts)
            and not self.convex_in_union
        )


def convexity_counterexample() -> ConvexityReport:
    """In the subspaces of GF(2)^3, ``K = {0, a}`` is a convex retract of each
    ``⟨a, b_i⟩`` but not convex in ``⟨a, b_0, b_1⟩``."""
    V = subspaces_f2(3)
    by_vectors = {frozenset(s): s for s in V.elements}
    a = by_vectors[frozenset({0, 2, 4, 6})]
    b = (by_vectors[frozenset({0, 1})], by_vectors[frozenset({0, 5})])
    zero = V.bottom
    K = {zero, a}
    convex, retract = [], []
    for bi in b:
        Li = sublattice_closure(V, {a, bi})
        convex.append(bool(is_convex(Li, K)))
        rho = MonotoneMap(Li, Li, lambda x: a if V.le(a, x) else zero, name="ρ")
        try:
            retract.append(bool(lemma_cvx_retr_check(Li, K, rho)))
        except HypothesisViolated:
            retract.append(False)
    union = sublattice_closure(V, {a, *b})
    middle = V.meet(V.join(b[0], b[1]), a)
    if not (V.lt(zero, middle) and V.lt(middle, a) and middle in union):
        raise VerificationFailed("strictly_between", middle)
    return ConvexityReport(
        len(V), a, b, middle, convex, retract, is_convex(union, K)
    )


def semilat_fp_extension(
    Ss: Sequence[FiniteJoinSemilattice], phis: Sequence[MonotoneMap]
) -> MonotoneMap:
    """Send each formal join ``x_{i1} ∨ ... ∨ x_{in}`` to ``φ_{i1}(x_{i1}) ∨ ...``."""
    _require_isotone(phis)
    M = phis[0].codomain
    fp, embeddings = free_product_jsl(Ss)

    def value(t: tuple) -> Label:
        return join_all(M, [phi(x) for phi, x in zip(phis, t, strict=True) if x is not None])

    extension = MonotoneMap(fp, M, value, name="φ*").verified_as(MapMode.ISOTONE)
    for i, (emb, phi) in enumerate(zip(embeddings, phis, strict=True)):
        restricted = emb.then(extension).agrees_with(phi)
        if not restricted:
            raise VerificationFailed(f"restriction_{i}", restricted.witness)
    return extension


def bounded_below_extension(
    Ls: Sequence[FiniteLattice], phis: Sequence[MonotoneMap], e: Label
) -> FactorizationResult:
    """Join homomorphisms with a common lower bound ``e`` factor through
    ``∏ ({⊥i} + L_i)`` with a join-preserving projection."""
    if not Ls:
        msg = "bounded below extension over an empty index set"
        raise EmptyIndexSet(msg)
    M = phis[0].codomain
    for i, phi in enumerate(phis):
        result = map_check(phi, MapMode.JOIN_HOM)
        if not result:
            msg = f"map {phi.name or i} does not preserve joins"
            raise NotJoinHom(msg, witness=result.witness)
        for x in phi.domain.elements:
            if not M.le(e, phi(x)):
                msg = f"{e!r} is not below the image of {x!r}"
                raise NotLowerBound(msg, witness=(i, x))
    bottoms = [bottom_of(i) for i in range(len(Ls))]
    bars = [with_new_bottom(L, bot) for L, bot in zip(Ls, bottoms, strict=True)]
    intermediate = product(bars, name="∏({⊥}+L)")

    def extended(i: int, x: Label) -> Label:
        return e if x == bottoms[i] else phis[i](x)

    def injection(i: int) -> MonotoneMap:
        return MonotoneMap(
            Ls[i],
            intermediate,
            lambda x: tuple(x if j == i else bottoms[j] for j in range(len(Ls))),
            name=f"inj{i}",
        )

    projection = MonotoneMap(
        intermediate,
        M,
        lambda t: join_all(M, [extended(i, x) for i, x in enumerate(t)]),
        name="ψ",
    )
    result = FactorizationResult(
        intermediate,
        [injection(i) for i in range(len(Ls))],
        projection,
        list(phis),
        projection_modes=(MapMode.ISOTONE, MapMode.JOIN_HOM),
    )
    result.verify()
    return result


def _distinct(X: Sequence[Label]) -> list[Label]:
    return list(dict.fromkeys(X))


def _check_bounds_input(X: Sequence[Label], cap: int) -> list[Label]:
    X = _distinct(X)
    if not X:
        msg = "need a nonempty subset"
        raise EmptyList(msg)
    if len(X) > cap:
        msg = f"{len(X)} elements exceed the free Boolean cap of {cap}"
        raise CapExceeded(msg, witness=len(X))
    return X


def boolean_isotone_phi(M: FiniteLattice, X: Sequence[Label], a: FBElement) -> Label:
    """Join over the prime implicants of ``a`` of the meets of the ``X``-elements
    each implicant mentions; generator ``k`` of ``a`` stands for ``X[k]``."""
    if len(X) != len(a.generators):
        raise HypothesisViolated("one_element_per_generator", (tuple(X), a.generators))
    if a == fb_zero(a.generators) or a == fb_one(a.generators):
        msg = "φ is only defined strictly between 0 and 1"
        raise BoundsElement(msg, witness=str(a))
    value_of = dict(zip(a.generators, X, strict=True))
    meets = [
        meet_all(M, [value_of[g] for g in cube_generators(a.generators, cube)])
        for cube in fb_prime_implicants(a)
    ]
    return join_all(M, meets)


def boolean_generators(n: int, prefix: str = "g") -> tuple[str, ...]:
    return tuple(f"{prefix}{k}" for k in range(n))


def boolean_phi_map(
    M: FiniteLattice,
    X: Sequence[Label],
    prefix: str = "g",
    cap: int = DEFAULT_FB_MAX_GENERATORS,
) -> MonotoneMap:
    """``φ`` on all of ``FB(X) - {0, 1}`` as a map into ``M``."""
    X = _check_bounds_input(X, cap)
    gens = boolean_generators(len(X), prefix)
    P = boolean_minus_bounds(fb_lattice(gens))
    return MonotoneMap(
        P, M, {a: boolean_isotone_phi(M, X, a) for a in P.elements}, name="φ"
    )


def bound_equivalence_check(
    X: Sequence[Label], M: FiniteLattice, cap: int = DEFAULT_FB_MAX_GENERATORS
) -> CheckResult:
    """The image of ``φ`` has exactly the upper and lower bounds of ``X``."""
    X = _check_bounds_input(X, cap)
    phi = boolean_phi_map(M, X, cap=cap)
    image = phi.verified_as(MapMode.ISOTONE).image()
    for kind, bounds in (("upper", M.upper_bounds), ("lower", M.lower_bounds)):
        if set(bounds(image)) != set(bounds(X)):
            return CheckResult(False, (kind, bounds(image), bounds(X)))
    return PASSED


def theorem_complete_probe(M: FiniteLattice, X: Sequence[Label]) -> Label:
    """Extend ``φ_1 + φ_2`` from ``(B_1 - {0,1}) + (B_2 - {0,1})`` to ``B_1 + B_2``,
    where ``B_2`` is free on the upper bounds of ``X``; the restored top of
    ``B_1`` must land on the supremum of ``X``."""
    X = _check_bounds_input(X, 3)
    uppers = M.upper_bounds(X)
    if len(uppers) > 3:
        msg = f"{len(uppers)} upper bounds exceed the cap of 3"
        raise CapExceeded(msg, witness=len(uppers))
    B1 = fb_lattice(boolean_generators(len(X), "x"))
    B2 = fb_lattice(boolean_generators(len(uppers), "u"))
    phi1 = boolean_phi_map(M, X, "x")
    phi2 = boolean_phi_map(M, uppers, "u")
    P = ordinal_sum(phi1.domain, phi2.domain)
    phi = MonotoneMap(P, M, phi1.as_dict() | phi2.as_dict(), name="φ1+φ2")
    Q = ordinal_sum_lattices(B1, B2)
    extension = extend_isotone_complete(phi, Q)
    image = extension(B1.top)
    sup = M.join_all(X)
    if image != sup:
        raise VerificationFailed("sup_eq", (image, sup))
    return image

