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
"""Seeded verification suites, one per part of the theory.

Each suite returns named cases; running a case either returns a
``CaseResult`` or raises. ``VerificationFailed`` counts as a failed case,
any other ``LatticeError`` as an error.
"""
import itertools
import logging
import math
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from cachetools import LRUCache, cached

from lattice_extensions.config import CheckerConfig
from lattice_extensions.constructions import (
    TWO,
    bound_equivalence_check,
    bounded_below_extension,
    check_dual_symmetry,
    check_neq_example,
    check_swap_symmetry,
    convexity_counterexample,
    corollary_fd_to_free,
    iterated_factorization,
    lemma_cvx_retr_check,
    main_factorization,
    median_element,
    prod_times_free,
    retract_containment_check,
    retract_factorization,
    sea_level_psi,
    semilat_fp_extension,
    theorem_complete_probe,
    two_lattice_symmetric,
)
from lattice_extensions.core import (
    PASSED,
    CheckResult,
    FiniteLattice,
    Label,
    MapMode,
    MonotoneMap,
    chain,
    iter_isotone_maps,
    lattice_from_covers,
    m3,
    map_check,
    n5,
    product,
    subspaces_f2,
    two_by_two,
    variety_check,
)
from lattice_extensions.downsets import (
    DownsetProduct,
    downset_product,
    nondist_instance,
    theorem_semilat_factorization,
)
from lattice_extensions.errors import ConstancyViolated, HypothesisViolated
from lattice_extensions.free import (
    FiniteJoinSemilattice,
    Gen,
    Join,
    Meet,
    Reducibility,
    Term,
    canonical,
    canonical_form,
    enumerate_terms,
    eval_term,
    fl_eq,
    fl_leq,
    free_product_jsl,
    parse_term,
    proper_combinations,
)
from lattice_extensions.partial import (
    boolean_minus_bounds,
    complement_join_constant,
    enumerate_partial_homs,
)
from lattice_extensions.store import small_lattices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaseResult:
    holds: bool
    witness: Any = None
    checked: int = 0


Case = tuple[str, Callable[[], CaseResult]]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class MapPool:
    """Isotone maps between catalog lattices, enumerated once per pair."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self._pools: dict[tuple[int, int], list[MonotoneMap]] = {}
        self._keep: list[Any] = []

    def all(self, P: FiniteLattice, M: FiniteLattice) -> list[MonotoneMap]:
        key = (id(P), id(M))
        if key not in self._pools:
            self._keep += [P, M]
            self._pools[key] = list(iter_isotone_maps(P, M))
        return self._pools[key]

    def join_homs(self, P: FiniteLattice, M: FiniteLattice) -> list[MonotoneMap]:
        return [m for m in self.all(P, M) if map_check(m, MapMode.JOIN_HOM)]

    def pick(self, maps: Sequence[MonotoneMap], name: str) -> MonotoneMap:
        chosen = maps[int(self.rng.integers(len(maps)))]
        return MonotoneMap(chosen.domain, chosen.codomain, chosen.as_dict(), name=name)

    def sample(self, P: FiniteLattice, M: FiniteLattice, name: str) -> MonotoneMap:
        return self.pick(self.all(P, M), name)

    def choice(self, items: Sequence[Any]) -> Any:
        return items[int(self.rng.integers(len(items)))]


@cached(LRUCache(maxsize=1))
def codomains() -> tuple[FiniteLattice, ...]:
    return (n5(), m3(), two_by_two(), chain(4))


# Isotone extensions through products


def main_factorization_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    lattices = small_lattices(min(4, config.catalog_max_size))
    targets = codomains()
    instances = [
        Ls for r in (2, 3) for Ls in itertools.combinations_with_replacement(lattices, r)
    ]
    per = math.ceil(config.sample_maps / (len(instances) * len(targets)))
    checked = 0
    for Ls in instances:
        for M in targets:
            for _ in range(per):
                phis = [pool.sample(L, M, f"φ{i}") for i, L in enumerate(Ls)]
                for e in M.elements:
                    main_factorization(Ls, phis, e)
                    checked += 1
    logger.info("main factorization: %d instances, %d runs", len(instances), checked)
    return CaseResult(True, checked=checked)


def sea_level_sweep(config: CheckerConfig) -> CaseResult:
    checked = 0
    for M in small_lattices(config.catalog_max_size):
        for n in (1, 2, 3):
            tuples = list(itertools.product(M.elements, repeat=n))
            for e in M.elements:
                value = {f: sea_level_psi(M, e, f) for f in tuples}
                for f, g in itertools.product(tuples, repeat=2):
                    if all(M.le(a, b) for a, b in zip(f, g, strict=True)):
                        checked += 1
                        if not M.le(value[f], value[g]):
                            return CaseResult(False, (M.name, e, f, g), checked)
                for i, x in itertools.product(range(n), M.elements):
                    f = tuple(x if j == i else e for j in range(n))
                    if value[f] != x:
                        return CaseResult(False, ("all_but_one", M.name, e, f), checked)
    return CaseResult(True, checked=checked)


def corollary_case() -> CaseResult:
    result = corollary_fd_to_free()
    return CaseResult(
        result.pairs_checked == 324 and result.fixes_generators,
        result.pairs_checked,
        result.pairs_checked,
    )


def section_2(config: CheckerConfig, pool: MapPool) -> list[Case]:
    return [
        ("main_factorization", lambda: main_factorization_sweep(config, pool)),
        ("sea_level_isotone", lambda: sea_level_sweep(config)),
        ("corollary_fd_to_free", corollary_case),
    ]


# Symmetric constructions and free lattices

GENERATORS = ("a", "b", "c")


def neq_case() -> CaseResult:
    report = check_neq_example()
    return CaseResult(report.reproduced, report.join_hom.witness, 1)


def median_case() -> CaseResult:
    return CaseResult(True, str(median_element()), 1)


SHAPES = {
    Gen: Reducibility.GENERATOR,
    Join: Reducibility.JOIN_REDUCIBLE,
    Meet: Reducibility.MEET_REDUCIBLE,
}


def canonical_shape(t: Term, c: Term, tag: Reducibility) -> CheckResult:
    """``c`` is a fixed point of canonicalization equal to ``t``, tagged by its
    outer operation, and a canonical join or meet lists an antichain."""
    if canonical(c) != c or not fl_eq(t, c):
        return CheckResult(False, ("unstable", str(t), str(c)))
    if SHAPES.get(type(c)) is not tag:
        return CheckResult(False, ("tag", str(c), str(tag)))
    if isinstance(c, Gen):
        return PASSED
    if len(c.args) < 2 or any(fl_leq(u, v) for u, v in itertools.permutations(c.args, 2)):
        return CheckResult(False, ("not_an_antichain", str(c)))
    return PASSED


def reducibility_case(depth: int = 3, pool_depth: int = 2) -> CaseResult:
    """Tag every term up to ``depth`` and cross-check each distinct canonical
    form against all proper meets and joins of terms up to ``pool_depth``."""
    terms = enumerate_terms(GENERATORS, depth)
    forms: dict[Term, Reducibility] = {}
    for t in terms:
        c, tag = canonical_form(t)
        shape = canonical_shape(t, c, tag)
        if not shape:
            return CaseResult(False, shape.witness, len(forms))
        forms.setdefault(c, tag)
    meets, joins = proper_combinations(enumerate_terms(GENERATORS, pool_depth))
    for c, tag in forms.items():
        if tag is not Reducibility.MEET_REDUCIBLE and c in meets:
            u, v = meets[c]
            return CaseResult(False, ("meet", str(c), str(u), str(v)), len(terms))
        if tag is not Reducibility.JOIN_REDUCIBLE and c in joins:
            u, v = joins[c]
            return CaseResult(False, ("join", str(c), str(u), str(v)), len(terms))
    logger.info(
        "reducibility: %d terms, %d canonical forms, %d proper meets, %d proper joins",
        len(terms),
        len(forms),
        len(meets),
        len(joins),
    )
    return CaseResult(True, checked=len(terms))


def whitman_soundness(config: CheckerConfig, pool: MapPool) -> CaseResult:
    lattices = [*small_lattices(config.catalog_max_size), m3(), n5(), subspaces_f2(3)]
    terms = enumerate_terms(GENERATORS, 2)
    implications = 0
    for _ in range(10_000):
        s, t = pool.choice(terms), pool.choice(terms)
        L = pool.choice(lattices)
        assignment = {g: pool.choice(L.elements) for g in GENERATORS}
        if fl_leq(s, t):
            implications += 1
            if not L.le(eval_term(s, L, assignment), eval_term(t, L, assignment)):
                return CaseResult(False, (str(s), str(t), L.name), implications)
    return CaseResult(True, checked=implications)


def distributive_law_case() -> CaseResult:
    s = parse_term("a ∧ (b ∨ c)")
    t = parse_term("(a ∧ b) ∨ (a ∧ c)")
    M = m3()
    atoms = {"a": "a", "b": "b", "c": "c"}
    countermodel = not M.le(eval_term(s, M, atoms), eval_term(t, M, atoms))
    return CaseResult(not fl_leq(s, t) and countermodel, None, 1)


def symmetry_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    lattices = small_lattices(3)
    targets = codomains()
    checked = 0
    for _ in range(max(1, config.sample_maps // 20)):
        L0, L1, M = pool.choice(lattices), pool.choice(lattices), pool.choice(targets)
        phi0, phi1 = pool.sample(L0, M, "φ0"), pool.sample(L1, M, "φ1")
        e0, e1 = pool.choice(L0.elements), pool.choice(L1.elements)
        two_lattice_symmetric(L0, L1, phi0, phi1, e0, e1)
        for check in (check_swap_symmetry, check_dual_symmetry):
            result = check(L0, L1, phi0, phi1, e0, e1)
            if not result:
                return CaseResult(False, (check.__name__, result.witness), checked)
        checked += 1
    return CaseResult(True, checked=checked)


def iterated_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    lattices = small_lattices(3)
    targets = codomains()
    checked = 0
    for _ in range(max(1, config.sample_maps // 25)):
        Ls = [pool.choice(lattices) for _ in range(3)]
        M = pool.choice(targets)
        iterated_factorization(Ls, [pool.sample(L, M, f"φ{i}") for i, L in enumerate(Ls)])
        checked += 1
    return CaseResult(True, checked=checked)


def prod_times_free_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    lattices = small_lattices(3)
    targets = [two_by_two(), chain(4)]
    checked = 0
    for _ in range(max(1, config.sample_maps // 25)):
        Ls = [pool.choice(lattices) for _ in range(2)]
        M = pool.choice(targets)
        prod_times_free(Ls, [pool.sample(L, M, f"φ{i}") for i, L in enumerate(Ls)], M)
        checked += 1
    return CaseResult(True, checked=checked)


def section_3(config: CheckerConfig, pool: MapPool) -> list[Case]:
    return [
        ("neq_example", neq_case),
        ("median_element", median_case),
        ("reducibility_depth_3", reducibility_case),
        ("whitman_soundness", lambda: whitman_soundness(config, pool)),
        ("distributive_law_fails_freely", distributive_law_case),
        ("two_lattice_symmetry", lambda: symmetry_sweep(config, pool)),
        ("iterated_factorization", lambda: iterated_sweep(config, pool)),
        ("prod_times_free", lambda: prod_times_free_sweep(config, pool)),
    ]


# Bounds through free Boolean lattices


def _subsets(L: FiniteLattice, largest: int = 3) -> Iterator[tuple[Label, ...]]:
    for k in range(1, largest + 1):
        yield from itertools.combinations(L.elements, k)


def bounds_sweep(config: CheckerConfig) -> CaseResult:
    checked = 0
    for M in small_lattices(config.catalog_max_size):
        for X in _subsets(M):
            result = bound_equivalence_check(X, M, config.fb_max_generators)
            if not result:
                return CaseResult(False, (M.name, X, result.witness), checked)
            checked += 1
    return CaseResult(True, checked=checked)


def complement_sweep(config: CheckerConfig) -> CaseResult:
    B = product([TWO, TWO, TWO], name="2³")
    P = boolean_minus_bounds(B)
    checked = 0
    for L in small_lattices(config.catalog_max_size):
        for m in enumerate_partial_homs(P, L):
            try:
                complement_join_constant(B, L, m)
            except ConstancyViolated as e:
                return CaseResult(False, (L.name, e.witness), checked)
            checked += 1
    return CaseResult(True, checked=checked)


def complete_supremum_sweep(config: CheckerConfig) -> CaseResult:
    checked = 0
    for M in small_lattices(config.catalog_max_size):
        for X in _subsets(M):
            if len(M.upper_bounds(X)) > 3:
                continue
            image = theorem_complete_probe(M, X)
            if image != M.join_all(X):
                return CaseResult(False, (M.name, X, image), checked)
            checked += 1
    return CaseResult(True, checked=checked)


def section_4(config: CheckerConfig, pool: MapPool) -> list[Case]:
    return [
        ("bound_equivalence", lambda: bounds_sweep(config)),
        ("complement_join_constant", lambda: complement_sweep(config)),
        ("theorem_complete_probe", lambda: complete_supremum_sweep(config)),
    ]


# Convex retracts


def retract_instance(pool: MapPool, factors: int = 2) -> tuple:
    """``L_i = K × A_i`` with ``K`` sitting at the bottom or the top of ``A_i``.

    ``φ_i(x, y)`` is ``g(x) ∨ h_i(y)`` with ``h_i(⊥) = ⊥`` (bottom placement) or
    ``g(x) ∧ h_i(y)`` with ``h_i(⊤) = ⊤`` (top placement), so every ``φ_i``
    restricts to ``g`` on ``K``.
    """
    lattices = small_lattices(3)
    K = pool.choice(lattices)
    M = pool.choice(codomains())
    g = pool.sample(K, M, "g")
    Ls, embeds, rhos, phis = [], [], [], []
    for i in range(factors):
        A = pool.choice(lattices)
        L = product([K, A], name=f"K×{A.name}")
        at_bottom = bool(pool.rng.integers(2))
        a = A.bottom if at_bottom else A.top
        fixed = M.bottom if at_bottom else M.top
        h = pool.pick([m for m in pool.all(A, M) if m(a) == fixed], f"h{i}")
        combine = M.join if at_bottom else M.meet
        Ls.append(L)
        embeds.append(MonotoneMap(K, L, lambda k, a=a: (k, a), name=f"emb{i}"))
        rhos.append(MonotoneMap(L, K, lambda t: t[0], name=f"ρ{i}"))
        phis.append(
            MonotoneMap(
                L, M, lambda t, h=h, combine=combine: combine(g(t[0]), h(t[1])), f"φ{i}"
            )
        )
    return Ls, K, embeds, rhos, phis


def retract_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    checked = 0
    for _ in range(max(100, config.sample_maps // 5)):
        Ls, K, embeds, rhos, phis = retract_instance(pool)
        result = retract_factorization(Ls, K, embeds, rhos, phis)
        containment = retract_containment_check(result, embeds)
        if not containment:
            return CaseResult(False, ("containment", containment.witness), checked)
        for L, emb, rho in zip(Ls, embeds, rhos, strict=True):
            back = rho.then(emb)
            local = lemma_cvx_retr_check(L, emb.image(), back)
            if not local:
                return CaseResult(False, ("below_retraction", local.witness), checked)
        checked += 1
    return CaseResult(True, checked=checked)


def ideal_retract_sweep(config: CheckerConfig) -> CaseResult:
    """Principal ideals of distributive lattices with ``x ↦ x ∧ m``."""
    checked = 0
    for L in small_lattices(config.catalog_max_size):
        if not variety_check(L).distributive:
            continue
        for m in L.elements:
            ideal = [x for x in L.elements if L.le(x, m)]
            rho = MonotoneMap(L, L, lambda x, m=m: L.meet(x, m), name="ρ")
            try:
                result = lemma_cvx_retr_check(L, ideal, rho)
            except HypothesisViolated as e:
                return CaseResult(False, (L.name, m, e.which), checked)
            if not result:
                return CaseResult(False, (L.name, m, result.witness), checked)
            checked += 1
    return CaseResult(True, checked=checked)


def convexity_case() -> CaseResult:
    report = convexity_counterexample()
    dims = Counter(len(s) for s in subspaces_f2(3).elements)
    oracle = [dims[1], dims[2], dims[4], dims[8]] == [1, 7, 7, 1]
    return CaseResult(report.reproduced and oracle, report.middle, report.size)


def section_5(config: CheckerConfig, pool: MapPool) -> list[Case]:
    return [
        ("retract_factorization", lambda: retract_sweep(config, pool)),
        ("principal_ideal_retracts", lambda: ideal_retract_sweep(config)),
        ("convexity_counterexample", convexity_case),
    ]


# Join semilattices


def semilat_fp_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    checked = 0
    for L0, L1 in itertools.combinations_with_replacement(small_lattices(3), 2):
        Ss = [FiniteJoinSemilattice.from_lattice(L) for L in (L0, L1)]
        for M in (two_by_two(), chain(3)):
            pairs = list(itertools.product(pool.all(L0, M), pool.all(L1, M)))
            if len(pairs) > config.sample_maps:
                picks = pool.rng.choice(len(pairs), config.sample_maps, replace=False)
                pairs = [pairs[int(k)] for k in sorted(picks)]
            for phi0, phi1 in pairs:
                semilat_fp_extension(Ss, [phi0, phi1])
                checked += 1
    return CaseResult(True, checked=checked)


def bounded_below_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    checked = 0
    lattices = small_lattices(3)
    for L0, L1 in itertools.combinations_with_replacement(lattices, 2):
        for M in (two_by_two(), chain(3), n5()):
            homs0, homs1 = pool.join_homs(L0, M), pool.join_homs(L1, M)
            for _ in range(max(1, config.sample_maps // 50)):
                phis = [pool.pick(homs0, "φ0"), pool.pick(homs1, "φ1")]
                images = [phi(x) for phi in phis for x in phi.domain.elements]
                for e in dict.fromkeys([M.bottom, M.meet_all(images)]):
                    bounded_below_extension([L0, L1], phis, e)
                    checked += 1
    return CaseResult(True, checked=checked)


def jsl_count_case() -> CaseResult:
    S = FiniteJoinSemilattice.from_lattice(chain(2))
    fp, _ = free_product_jsl([S, S])
    return CaseResult(len(fp) == 8 and fp.check_laws(), len(fp), 1)


def section_6(config: CheckerConfig, pool: MapPool) -> list[Case]:
    return [
        ("semilat_fp_extension", lambda: semilat_fp_sweep(config, pool)),
        ("bounded_below_extension", lambda: bounded_below_sweep(config, pool)),
        ("free_product_jsl_size", jsl_count_case),
    ]


# Downset products


def nondist_case() -> CaseResult:
    report = nondist_instance()
    return CaseResult(report.reproduced, tuple(str(F) for F in report.pentagon), 1)


def downset_checks(D: DownsetProduct, phis: Sequence[MonotoneMap]) -> CheckResult:
    for F in D.lattice.elements:
        result = D.family_check(F)
        if not result:
            return result
    for check in (D.join_by_maximal_check, lambda: D.cup_join_check(phis)):
        result = check()
        if not result:
            return result
    return PASSED


def nondist_structure_case() -> CaseResult:
    point = lattice_from_covers(["e"], [], name="{e}")
    square = two_by_two()
    D = downset_product((point, square))
    phis = [
        MonotoneMap(point, square, {"e": (1, 0)}, name="φ0"),
        MonotoneMap(square, square, lambda x: x, name="φ1"),
    ]
    result = downset_checks(D, phis)
    return CaseResult(result.holds, result.witness, len(D.lattice))


def semilat_random_sweep(config: CheckerConfig, pool: MapPool) -> CaseResult:
    lattices = small_lattices(4)
    targets = small_lattices(config.catalog_max_size)
    checked = attempts = 0
    while checked < max(1, config.sample_maps // 25) and attempts < 1000:
        attempts += 1
        Ls = [pool.choice(lattices) for _ in range(int(pool.rng.integers(1, 3)))]
        if math.prod(len(L) + 1 for L in Ls) - 1 > config.downset_max_poset:
            continue
        M = pool.choice(targets)
        phis = [pool.pick(pool.join_homs(L, M), f"φ{i}") for i, L in enumerate(Ls)]
        theorem_semilat_factorization(Ls, phis, config.downset_max_poset)
        D = downset_product(tuple(Ls), config.downset_max_poset)
        result = downset_checks(D, phis)
        if not result:
            return CaseResult(False, result.witness, checked)
        checked += 1
    return CaseResult(True, checked=checked)


def section_7(config: CheckerConfig, pool: MapPool) -> list[Case]:
    return [
        ("nondist_instance", nondist_case),
        ("nondist_downset_structure", nondist_structure_case),
        ("semilat_factorization", lambda: semilat_random_sweep(config, pool)),
    ]


SUITES: dict[int, Callable[[CheckerConfig, MapPool], list[Case]]] = {
    2: section_2,
    3: section_3,
    4: section_4,
    5: section_5,
    6: section_6,
    7: section_7,
}
