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
"""Partial lattices: posets where only some meets and joins are defined."""
import itertools
import logging
from collections.abc import Callable, Iterator, Mapping, Sequence

from lattice_extensions.core import (
    PASSED,
    CheckResult,
    FiniteLattice,
    FiniteOrder,
    Label,
    MapMode,
    MonotoneMap,
    Poset,
    TableLattice,
    map_check,
    table_lattice,
    variety_check,
)
from lattice_extensions.errors import (
    ConstancyViolated,
    EmptyList,
    HypothesisViolated,
    LabelClash,
    NotALattice,
    NotAnEmbedding,
    NotBoolean,
    TooSmall,
)

logger = logging.getLogger(__name__)

Assignment = Mapping[Label, Label] | Callable[[Label], Label]


def _as_callable(m: Assignment) -> Callable[[Label], Label]:
    if isinstance(m, Mapping):
        return m.__getitem__
    return m


def _symmetric(table: Mapping[tuple[Label, Label], Label]) -> dict:
    full = {}
    for (x, y), z in table.items():
        full[(x, y)] = z
        full[(y, x)] = z
    return full


class PartialLattice(FiniteOrder):
    """A poset with partial meet and join tables.

    Tables are stored symmetrically and always contain the diagonal.
    """

    def __init__(
        self,
        poset: Poset,
        pmeet: Mapping[tuple[Label, Label], Label],
        pjoin: Mapping[tuple[Label, Label], Label],
        name: str = "",
    ):
        self.poset = poset
        self.name = name or poset.name
        self._meet = _symmetric(pmeet)
        self._join = _symmetric(pjoin)
        for x in poset.elements:
            self._meet[(x, x)] = x
            self._join[(x, x)] = x

    @property
    def elements(self) -> tuple[Label, ...]:
        return self.poset.elements

    @property
    def index(self) -> dict[Label, int]:
        return self.poset.index

    def le(self, x: Label, y: Label) -> bool:
        return self.poset.le(x, y)

    def covers(self) -> Iterator[tuple[Label, Label]]:
        return self.poset.covers()

    def pmeet(self, x: Label, y: Label) -> Label | None:
        return self._meet.get((x, y))

    def pjoin(self, x: Label, y: Label) -> Label | None:
        return self._join.get((x, y))

    def _defined(self, table: dict) -> Iterator[tuple[Label, Label, Label]]:
        index = self.poset.index
        for (x, y), z in table.items():
            if index[x] < index[y]:
                yield x, y, z

    def defined_meets(self) -> Iterator[tuple[Label, Label, Label]]:
        """Defined meets ``(x, y, x∧y)`` of distinct elements, each pair once."""
        return self._defined(self._meet)

    def defined_joins(self) -> Iterator[tuple[Label, Label, Label]]:
        return self._defined(self._join)

    def is_total(self) -> bool:
        n = len(self.elements)
        return len(self._meet) == n * n and len(self._join) == n * n

    def check_consistency(self) -> CheckResult:
        """Every defined meet is the glb and every defined join the lub of its pair."""
        for x, y, z in self.defined_meets():
            lower = self.poset.lower_bounds((x, y))
            if z not in lower or not all(self.le(d, z) for d in lower):
                return CheckResult(False, ("meet", x, y))
        for x, y, z in self.defined_joins():
            upper = self.poset.upper_bounds((x, y))
            if z not in upper or not all(self.le(z, u) for u in upper):
                return CheckResult(False, ("join", x, y))
        return PASSED

    def to_lattice(self, name: str = "") -> TableLattice:
        """The free lattice over a total partial lattice is the lattice itself."""
        if not self.is_total():
            for x, y in itertools.combinations(self.elements, 2):
                if self.pmeet(x, y) is None or self.pjoin(x, y) is None:
                    msg = "partial operations are not total"
                    raise NotALattice(msg, witness=(x, y))
        return table_lattice(
            self.elements, self.le, self.pmeet, self.pjoin, name or self.name
        )

    def __repr__(self) -> str:
        return f"PartialLattice({self.name or len(self)})"


def _lattice_tables(
    L: FiniteLattice, label: Callable[[Label], Label]
) -> tuple[dict, dict]:
    meets, joins = {}, {}
    for x, y in itertools.combinations_with_replacement(L.elements, 2):
        meets[(label(x), label(y))] = label(L.meet(x, y))
        joins[(label(x), label(y))] = label(L.join(x, y))
    return meets, joins


def disjoint_union(Ls: Sequence[FiniteLattice], name: str = "") -> PartialLattice:
    """Elements are ``(i, x)``; nothing is defined across components."""
    if not Ls:
        msg = "disjoint union of no lattices"
        raise EmptyList(msg)
    labels, covers, meets, joins = [], [], {}, {}
    for i, L in enumerate(Ls):
        labels.extend((i, x) for x in L.elements)
        covers.extend(((i, x), (i, y)) for x, y in L.covers())
        m, j = _lattice_tables(L, lambda x, i=i: (i, x))
        meets.update(m)
        joins.update(j)
    poset = Poset.from_covers(labels, covers, name=name)
    return PartialLattice(poset, meets, joins, name or "⊔".join(L.name for L in Ls))


def amalgamated_union(
    Ls: Sequence[FiniteLattice],
    K_embeds: Sequence[MonotoneMap],
    name: str = "",
) -> PartialLattice:
    """Union of the ``Ls`` glued along the images of a common lattice ``K``.

    Image points are labelled ``("K", k)``, the remaining points ``(i, x)``.
    The order is the transitive closure of the component orders.
    """
    if not Ls:
        msg = "amalgamated union of no lattices"
        raise EmptyList(msg)
    if len(K_embeds) != len(Ls):
        msg = "need one embedding of K per lattice"
        raise NotAnEmbedding(msg, witness=len(K_embeds))
    K = K_embeds[0].domain
    for i, emb in enumerate(K_embeds):
        if emb.domain is not K and not emb.domain.same_order(K):
            msg = f"embedding {i} has a different domain"
            raise NotAnEmbedding(msg, witness=i)
        if not all(y in Ls[i] for y in emb.image()):
            msg = f"embedding {i} does not land in lattice {i}"
            raise NotAnEmbedding(msg, witness=i)
        result = map_check(emb, MapMode.EMBEDDING)
        if not result:
            msg = f"embedding {i} is not a lattice embedding"
            raise NotAnEmbedding(msg, witness=result.witness)

    relabels = []
    for i, (L, emb) in enumerate(zip(Ls, K_embeds, strict=True)):
        glued = {emb(k): ("K", k) for k in K.elements}
        relabels.append({x: glued.get(x, (i, x)) for x in L.elements})

    labels = [("K", k) for k in K.elements]
    pairs, meets, joins = [], {}, {}
    for L, relabel in zip(Ls, relabels, strict=True):
        labels.extend(v for v in relabel.values() if v[0] != "K")
        pairs.extend(
            (relabel[x], relabel[y])
            for x in L.elements
            for y in L.elements
            if L.le(x, y)
        )
        m, j = _lattice_tables(L, relabel.__getitem__)
        meets.update(m)
        joins.update(j)
    poset = Poset.from_covers(labels, pairs, name=name)
    logger.debug("amalgamated %d lattices into %d elements", len(Ls), len(labels))
    return PartialLattice(poset, meets, joins, name or "amalgam")


def ordinal_sum(P: PartialLattice, Q: PartialLattice, name: str = "") -> PartialLattice:
    """``P + Q``: all of ``P`` below all of ``Q``, with ``p∧q = p`` and ``p∨q = q``."""
    clash = set(P.elements) & set(Q.elements)
    if clash:
        msg = "ordinal sum needs disjoint label sets"
        raise LabelClash(msg, witness=sorted(map(str, clash)))
    pairs = list(P.covers()) + list(Q.covers())
    pairs.extend(itertools.product(P.elements, Q.elements))
    poset = Poset.from_covers(P.elements + Q.elements, pairs, name=name)
    meets = dict(P._meet) | dict(Q._meet)
    joins = dict(P._join) | dict(Q._join)
    for p, q in itertools.product(P.elements, Q.elements):
        meets[(p, q)] = p
        joins[(p, q)] = q
    return PartialLattice(poset, meets, joins, name or f"{P.name}+{Q.name}")


def complement_in(B: FiniteLattice, a: Label) -> Label | None:
    for c in B.elements:
        if B.meet(a, c) == B.bottom and B.join(a, c) == B.top:
            return c
    return None


def boolean_minus_bounds(B: FiniteLattice, name: str = "") -> PartialLattice:
    """``B - {0, 1}`` with the operations of ``B`` wherever they stay inside."""
    if len(B) <= 2:
        msg = f"Boolean lattice of size {len(B)} has nothing between its bounds"
        raise TooSmall(msg, witness=len(B))
    if not variety_check(B).distributive:
        msg = f"{B.name} is not distributive"
        raise NotBoolean(msg)
    for a in B.elements:
        if complement_in(B, a) is None:
            msg = f"{a!r} has no complement"
            raise NotBoolean(msg, witness=a)
    bounds = {B.bottom, B.top}
    inner = [x for x in B.elements if x not in bounds]
    meets, joins = {}, {}
    for x, y in itertools.combinations_with_replacement(inner, 2):
        if (m := B.meet(x, y)) not in bounds:
            meets[(x, y)] = m
        if (j := B.join(x, y)) not in bounds:
            joins[(x, y)] = j
    poset = B.poset.restrict(inner, name=name)
    return PartialLattice(poset, meets, joins, name or f"{B.name}-{{0,1}}")


def is_partial_hom(P: PartialLattice, L: FiniteLattice, m: Assignment) -> CheckResult:
    """Isotone and preserving every defined meet and join of ``P``."""
    f = _as_callable(m)
    for x, y in P.covers():
        if not L.le(f(x), f(y)):
            return CheckResult(False, (x, y))
    for x, y, z in P.defined_meets():
        if L.meet(f(x), f(y)) != f(z):
            return CheckResult(False, (x, y))
    for x, y, z in P.defined_joins():
        if L.join(f(x), f(y)) != f(z):
            return CheckResult(False, (x, y))
    return PASSED


def enumerate_partial_homs(
    P: PartialLattice, L: FiniteLattice
) -> Iterator[dict[Label, Label]]:
    """All partial lattice homomorphisms ``P -> L``.

    Backtracks over a linear extension of ``P``; each cover and each defined
    operation is checked as soon as its last participant is assigned.
    """
    order = P.poset.linear_extension()
    position = {x: k for k, x in enumerate(order)}
    ready: list[list[tuple[str, Label, Label, Label]]] = [[] for _ in order]
    for x, y in P.covers():
        ready[position[y]].append(("le", x, y, y))
    for x, y, z in P.defined_meets():
        ready[max(position[x], position[y], position[z])].append(("meet", x, y, z))
    for x, y, z in P.defined_joins():
        ready[max(position[x], position[y], position[z])].append(("join", x, y, z))
    values: dict[Label, Label] = {}

    def holds(kind: str, x: Label, y: Label, z: Label) -> bool:
        if kind == "le":
            return L.le(values[x], values[y])
        if kind == "meet":
            return L.meet(values[x], values[y]) == values[z]
        return L.join(values[x], values[y]) == values[z]

    def extend(k: int) -> Iterator[dict[Label, Label]]:
        if k == len(order):
            yield dict(values)
            return
        x = order[k]
        for v in L.elements:
            values[x] = v
            if all(holds(*c) for c in ready[k]):
                yield from extend(k + 1)
        del values[x]

    if not order:
        yield {}
        return
    yield from extend(0)


def complement_join_constant(
    B: FiniteLattice, L: FiniteLattice, m: Assignment
) -> Label:
    """The common value of ``m(a) ∨ m(a')`` over ``B - {0, 1}``.

    Also every pair joining to the top of ``B`` must land on that value.
    """
    P = boolean_minus_bounds(B)
    f = _as_callable(m)
    result = is_partial_hom(P, L, f)
    if not result:
        raise HypothesisViolated("partial_hom", result.witness)
    common = None
    for a in P.elements:
        ac = complement_in(B, a)
        value = L.join(f(a), f(ac))
        if common is None:
            common = value
        elif value != common:
            msg = "complementary joins differ"
            raise ConstancyViolated(msg, witness=(a, ac, value, common))
    for a, b in itertools.combinations(P.elements, 2):
        if B.join(a, b) == B.top and L.join(f(a), f(b)) != common:
            msg = "a pair joining to the top of B misses the common value"
            raise ConstancyViolated(msg, witness=(a, b, L.join(f(a), f(b)), common))
    return common

