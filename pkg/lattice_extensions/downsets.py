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
"""Join homomorphisms factored through a lattice of downsets.

Each ``L_i`` gets a new top ``⊤i``; ``P`` is the product of the ``L_i + {⊤i}``
without its top element. ``θ_i(x)`` is the tuple that is ``x`` at ``i`` and
``⊤j`` everywhere else. ``L′`` collects the nonempty downsets of ``P`` that
contain ``θ_i(x ∨ y)`` whenever they contain ``θ_i(x)`` and ``θ_i(y)``.

Downsets are bitmasks over ``P.elements``; bit ``k`` is element ``k``.
"""
import functools
import itertools
import logging
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field

from cachetools import LRUCache, cached, keys

from lattice_extensions.config import DEFAULT_DOWNSET_MAX_POSET, DEFAULT_SIZE_CAP
from lattice_extensions.constructions import FactorizationResult
from lattice_extensions.core import (
    PASSED,
    CheckResult,
    FiniteLattice,
    Label,
    MapMode,
    MonotoneMap,
    Poset,
    TableLattice,
    VarietyReport,
    bottom_of,
    find_pentagons,
    is_pentagon,
    iter_downset_masks,
    join_all,
    lattice_from_covers,
    map_check,
    meet_all,
    product,
    table_lattice,
    top_of,
    two_by_two,
    variety_check,
    with_new_bottom,
)
from lattice_extensions.errors import (
    CapExceeded,
    EmptyList,
    NotJoinHom,
    VerificationFailed,
)

logger = logging.getLogger(__name__)


def render_element(p: tuple) -> str:
    return "(" + ", ".join(str(c) for c in p) + ")"


@dataclass(frozen=True)
class DownsetFamily:
    """A member of ``L′``, compared by its bitmask only."""

    mask: int
    maximal: tuple[tuple, ...] = field(compare=False, hash=False, default=())

    def __str__(self) -> str:
        return "↓{" + ", ".join(render_element(p) for p in self.maximal) + "}"


class DownsetProduct:
    def __init__(
        self,
        factors: Sequence[FiniteLattice],
        max_poset: int = DEFAULT_DOWNSET_MAX_POSET,
        cap: int = DEFAULT_SIZE_CAP,
    ):
        if not factors:
            msg = "downset product over an empty family"
            raise EmptyList(msg)
        self.factors = tuple(factors)
        self.tops = tuple(top_of(i) for i in range(len(self.factors)))
        self.cap = cap
        size = functools.reduce(lambda n, L: n * (len(L) + 1), self.factors, 1) - 1
        if size > max_poset:
            msg = f"P would have {size} elements (cap {max_poset})"
            raise CapExceeded(msg, witness=size)
        everything = itertools.product(
            *((*L.elements, top) for L, top in zip(self.factors, self.tops, strict=True))
        )
        labels = [p for p in everything if p != self.tops]
        self.poset = Poset.from_relation(labels, self._le, name="P")
        self._down = [
            sum(1 << int(j) for j, below in enumerate(self.poset.leq[:, k]) if below)
            for k in range(len(labels))
        ]
        self._thetas = [
            [(x, self.poset.index[self.theta(i, x)]) for x in L.elements]
            for i, L in enumerate(self.factors)
        ]
        logger.debug("P has %d elements over %d factors", size, len(self.factors))

    def _le(self, p: tuple, q: tuple) -> bool:
        for L, top, a, b in zip(self.factors, self.tops, p, q, strict=True):
            if b == top:
                continue
            if a == top or not L.le(a, b):
                return False
        return True

    def theta(self, i: int, x: Label) -> tuple:
        return tuple(x if j == i else top for j, top in enumerate(self.tops))

    def members(self, mask: int) -> frozenset[tuple]:
        labels = self.poset.elements
        return frozenset(labels[k] for k in range(len(labels)) if mask >> k & 1)

    def mask_of(self, elements) -> int:
        return functools.reduce(
            lambda m, p: m | 1 << self.poset.index[p], elements, 0
        )

    def down_close(self, mask: int) -> int:
        closed = mask
        for k in range(len(self._down)):
            if mask >> k & 1:
                closed |= self._down[k]
        return closed

    def principal(self, p: tuple) -> int:
        return self._down[self.poset.index[p]]

    def maximal(self, mask: int) -> tuple[tuple, ...]:
        labels = self.poset.elements
        inside = [k for k in range(len(labels)) if mask >> k & 1]
        return tuple(
            labels[k]
            for k in inside
            if not any(j != k and self._down[j] >> k & 1 for j in inside)
        )

    def family(self, mask: int) -> DownsetFamily:
        return DownsetFamily(mask, self.maximal(mask))

    def theta_members(self, i: int, mask: int) -> list[Label]:
        return [x for x, k in self._thetas[i] if mask >> k & 1]

    def is_closed(self, mask: int) -> bool:
        for i, L in enumerate(self.factors):
            xs = self.theta_members(i, mask)
            for x, y in itertools.combinations(xs, 2):
                if not mask >> self.poset.index[self.theta(i, L.join(x, y))] & 1:
                    return False
        return True

    def closure(self, mask: int) -> DownsetFamily:
        """Least closed downset containing ``mask``, by pairwise fixpoint iteration."""
        if not mask:
            msg = "closure of the empty set"
            raise EmptyList(msg)
        mask = self.down_close(mask)
        while True:
            grown = mask
            for i, L in enumerate(self.factors):
                for x, y in itertools.combinations(self.theta_members(i, mask), 2):
                    joined = self.theta(i, L.join(x, y))
                    assert joined in self.poset, "closure left P"
                    grown |= self.principal(joined)
            if grown == mask:
                return self.family(mask)
            mask = grown

    def join_by_maximal(self, F: DownsetFamily, G: DownsetFamily) -> DownsetFamily:
        """``F ∨ G`` by joining only maximal ``θ_i``-elements of ``F`` with those of ``G``."""
        mask = F.mask | G.mask
        for p, q in itertools.product(F.maximal, G.maximal):
            i = self._theta_index(p)
            if i is not None and i == self._theta_index(q):
                mask |= self.principal(self.theta(i, self.factors[i].join(p[i], q[i])))
        return self.family(mask)

    def _theta_index(self, p: tuple) -> int | None:
        inside = [
            i
            for i, (c, top) in enumerate(zip(p, self.tops, strict=True))
            if c != top
        ]
        return inside[0] if len(inside) == 1 else None

    def family_check(self, F: DownsetFamily) -> CheckResult:
        """Nonempty, downward closed, join-closed on each ``θ_i``, one maximal ``θ_i`` at most."""
        if not F.mask:
            return CheckResult(False, "empty")
        if self.down_close(F.mask) != F.mask:
            return CheckResult(False, ("not_downset", str(F)))
        if not self.is_closed(F.mask):
            return CheckResult(False, ("not_closed", str(F)))
        counts = defaultdict(int)
        for p in self.maximal(F.mask):
            i = self._theta_index(p)
            if i is not None:
                counts[i] += 1
        for i, n in counts.items():
            if n > 1:
                return CheckResult(False, ("two_maximal_thetas", i, str(F)))
        return PASSED

    @functools.cached_property
    def lattice(self) -> TableLattice:
        """``L′`` ordered by inclusion."""
        families = {
            mask: self.family(mask)
            for mask in iter_downset_masks(self.poset, self.cap)
            if mask and self.is_closed(mask)
        }

        def meet(F: DownsetFamily, G: DownsetFamily) -> DownsetFamily:
            mask = F.mask & G.mask
            assert mask, "two members of L′ with empty intersection"
            return families[mask]

        def join(F: DownsetFamily, G: DownsetFamily) -> DownsetFamily:
            return families[self.closure(F.mask | G.mask).mask]

        L = table_lattice(
            list(families.values()),
            lambda F, G: F.mask & ~G.mask == 0,
            meet,
            join,
            name="L′",
        )
        logger.info("L′ has %d elements", len(L))
        return L

    def xi(self, i: int, x: Label) -> DownsetFamily:
        return self.family(self.principal(self.theta(i, x)))

    def xi_map(self, i: int) -> MonotoneMap:
        return MonotoneMap(
            self.factors[i], self.lattice, lambda x: self.xi(i, x), name=f"ξ{i}"
        )

    def pi(self, i: int, F: DownsetFamily) -> Label:
        """Largest ``x`` with ``θ_i(x) ∈ F``, or the new bottom ``⊥i``."""
        xs = self.theta_members(i, F.mask)
        if not xs:
            return bottom_of(i)
        return join_all(self.factors[i], xs)

    @functools.cached_property
    def pi_codomain(self) -> FiniteLattice:
        return product(
            [with_new_bottom(L, bottom_of(i)) for i, L in enumerate(self.factors)],
            name="∏({⊥}+L)",
        )

    def pi_map(self) -> MonotoneMap:
        return MonotoneMap(
            self.lattice,
            self.pi_codomain,
            lambda F: tuple(self.pi(i, F) for i in range(len(self.factors))),
            name="π",
        )

    def psi_raw(self, mask: int, phis: Sequence[MonotoneMap]) -> Label:
        """``ψ`` on any nonempty downset: join over maximal elements of the meets
        of the ``φ_i``-images of their non-top coordinates."""
        if not mask:
            msg = "ψ of the empty downset"
            raise EmptyList(msg)
        M = phis[0].codomain
        terms = [
            meet_all(M, [phis[i](c) for i, c in enumerate(p) if c != self.tops[i]])
            for p in self.maximal(mask)
        ]
        return join_all(M, terms)

    def psi_map(self, phis: Sequence[MonotoneMap]) -> MonotoneMap:
        return MonotoneMap(
            self.lattice,
            phis[0].codomain,
            lambda F: self.psi_raw(F.mask, phis),
            name="ψ",
        )

    def cup_join_check(self, phis: Sequence[MonotoneMap]) -> CheckResult:
        """``ψ(F ∪ G) = ψ(F) ∨ ψ(G)`` over all pairs of nonempty downsets of ``P``."""
        M = phis[0].codomain
        masks = [m for m in iter_downset_masks(self.poset, self.cap) if m]
        values = {m: self.psi_raw(m, phis) for m in masks}
        for F, G in itertools.combinations_with_replacement(masks, 2):
            if values[F | G] != M.join(values[F], values[G]):
                return CheckResult(False, (str(self.family(F)), str(self.family(G))))
        return PASSED

    def join_by_maximal_check(self) -> CheckResult:
        L = self.lattice
        for F, G in itertools.combinations_with_replacement(L.elements, 2):
            if self.join_by_maximal(F, G) != L.join(F, G):
                return CheckResult(False, (str(F), str(G)))
        return PASSED


def _product_key(
    Ls: Sequence[FiniteLattice], max_poset: int = DEFAULT_DOWNSET_MAX_POSET
) -> tuple:
    return keys.hashkey(tuple(Ls), max_poset)


@cached(LRUCache(maxsize=32), key=_product_key)
def downset_product(
    Ls: Sequence[FiniteLattice], max_poset: int = DEFAULT_DOWNSET_MAX_POSET
) -> DownsetProduct:
    return DownsetProduct(Ls, max_poset=max_poset)


def build_P(
    Ls: Sequence[FiniteLattice], max_poset: int = DEFAULT_DOWNSET_MAX_POSET
) -> Poset:
    return downset_product(Ls, max_poset).poset


def lprime_lattice(
    Ls: Sequence[FiniteLattice], max_poset: int = DEFAULT_DOWNSET_MAX_POSET
) -> TableLattice:
    return downset_product(Ls, max_poset).lattice


@dataclass(frozen=True)
class DovReport:
    """Whether ``L′`` maps onto ``∏({⊥i} + L_i)`` with distributive fibers."""

    size: int
    xi_homs: CheckResult
    pi_hom: CheckResult
    fiber_count: int
    fibers_distributive: CheckResult
    fiber_joins_are_unions: CheckResult

    @property
    def holds(self) -> bool:
        return all(
            (
                self.xi_homs,
                self.pi_hom,
                self.fibers_distributive,
                self.fiber_joins_are_unions,
            )
        )

    @property
    def failure(self) -> tuple | None:
        for name in ("xi_homs", "pi_hom", "fibers_distributive", "fiber_joins_are_unions"):
            result = getattr(self, name)
            if not result:
                return name, result.witness
        return None


def dov_membership_check(
    Ls: Sequence[FiniteLattice] | DownsetProduct,
    max_poset: int = DEFAULT_DOWNSET_MAX_POSET,
) -> DovReport:
    D = Ls if isinstance(Ls, DownsetProduct) else downset_product(Ls, max_poset)
    L = D.lattice
    xi_homs = PASSED
    for i in range(len(D.factors)):
        result = map_check(D.xi_map(i), MapMode.EMBEDDING)
        if not result:
            xi_homs = CheckResult(False, (i, result.witness))
            break
    pi = D.pi_map()
    pi_hom = map_check(pi, MapMode.LATTICE_HOM)
    fibers: dict[tuple, list[DownsetFamily]] = defaultdict(list)
    for F in L.elements:
        fibers[pi(F)].append(F)
    distributive = unions = PASSED
    for key, fiber in fibers.items():
        if pi_hom and distributive:
            report = variety_check(L.sublattice(fiber))
            if not report.distributive:
                witness = report.pentagon_witness or report.diamond_witness
                distributive = CheckResult(False, (key, tuple(map(str, witness))))
        if unions:
            for F, G in itertools.combinations(fiber, 2):
                if L.join(F, G).mask != F.mask | G.mask:
                    unions = CheckResult(False, (key, str(F), str(G)))
                    break
    logger.debug("L′ splits into %d fibers", len(fibers))
    return DovReport(len(L), xi_homs, pi_hom, len(fibers), distributive, unions)


def psi_downset(
    D: DownsetProduct, F: DownsetFamily, phis: Sequence[MonotoneMap]
) -> Label:
    for i, phi in enumerate(phis):
        result = map_check(phi, MapMode.JOIN_HOM)
        if not result:
            msg = f"map {phi.name or i} does not preserve joins"
            raise NotJoinHom(msg, witness=result.witness)
    return D.psi_raw(F.mask, phis)


def theorem_semilat_factorization(
    Ls: Sequence[FiniteLattice],
    phis: Sequence[MonotoneMap],
    max_poset: int = DEFAULT_DOWNSET_MAX_POSET,
) -> FactorizationResult:
    """Join homomorphisms ``φ_i: L_i -> M`` as ``ψ ∘ ξ_i`` with ``ψ: L′ -> M`` join-preserving."""
    for i, phi in enumerate(phis):
        result = map_check(phi, MapMode.JOIN_HOM)
        if not result:
            msg = f"map {phi.name or i} does not preserve joins"
            raise NotJoinHom(msg, witness=result.witness)
    D = downset_product(Ls, max_poset)
    result = FactorizationResult(
        D.lattice,
        [D.xi_map(i) for i in range(len(D.factors))],
        D.psi_map(phis),
        list(phis),
        projection_modes=(MapMode.ISOTONE, MapMode.JOIN_HOM),
    )
    result.verify()
    dov = dov_membership_check(D)
    if not dov.holds:
        raise VerificationFailed("dov_membership", dov.failure)
    result.verified.append("intermediate:dov_membership")
    return result


@dataclass(frozen=True)
class NondistReport:
    lhs: DownsetFamily
    rhs: DownsetFamily
    lhs_principal: bool
    rhs_nonprincipal: bool
    pentagon: tuple[DownsetFamily, ...]
    is_pentagon: bool
    pentagon_found: bool
    variety: VarietyReport
    dov: DovReport
    factorization: FactorizationResult

    @property
    def reproduced(self) -> bool:
        return (
            self.lhs != self.rhs
            and self.lhs_principal
            and self.rhs_nonprincipal
            and self.is_pentagon
            and self.pentagon_found
            and not self.variety.modular
            and self.dov.holds
        )


def nondist_instance() -> NondistReport:
    """``L_0 = {e}`` and ``L_1 = 2×2`` give a non-modular ``L′``.

    ``ē ∧ (ā ∨ b̄)`` is the principal downset of ``(e, a∨b)``, while
    ``(ē ∧ ā) ∨ (ē ∧ b̄)`` is ``↓(e, a) ∪ ↓(e, b)``.
    """
    point = lattice_from_covers(["e"], [], name="{e}")
    square = two_by_two()
    a, b = (1, 0), (0, 1)
    D = downset_product((point, square))
    L = D.lattice
    meet, join = L.meet, L.join
    e_, a_, b_ = D.xi(0, "e"), D.xi(1, a), D.xi(1, b)
    lhs = meet(e_, join(a_, b_))
    rhs = join(meet(e_, a_), meet(e_, b_))
    five = (
        join(join(meet(e_, a_), meet(e_, b_)), meet(a_, b_)),
        join(a_, meet(e_, b_)),
        join(a_, meet(e_, join(a_, b_))),
        join(meet(e_, a_), b_),
        join(a_, b_),
    )
    phis = [
        MonotoneMap(point, square, {"e": a}, name="φ0"),
        MonotoneMap(square, square, lambda x: x, name="φ1"),
    ]
    report = NondistReport(
        lhs=lhs,
        rhs=rhs,
        lhs_principal=lhs.mask == D.principal(("e", square.join(a, b))),
        rhs_nonprincipal=set(rhs.maximal) == {("e", a), ("e", b)},
        pentagon=five,
        is_pentagon=is_pentagon(L, five),
        pentagon_found=five in find_pentagons(L),
        variety=variety_check(L),
        dov=dov_membership_check(D),
        factorization=theorem_semilat_factorization((point, square), phis),
    )
    logger.info("nondistributive downset instance reproduced: %s", report.reproduced)
    return report
