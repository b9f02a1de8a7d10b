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
"""Finite posets and lattices, maps between them and the checks run on both.

Explicit lattices keep their order as a read-only boolean matrix and their
operations as integer index tables. Direct products stay lazy: operations are
computed componentwise and covers are generated from the factors, so products
far larger than anything we would tabulate can still be walked cover by cover.
"""
import functools
import itertools
import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Protocol

import numpy as np
from cachetools import LRUCache, cached, keys

from lattice_extensions.config import DEFAULT_SIZE_CAP
from lattice_extensions.errors import (
    DimensionOutOfRange,
    EmptyFactorList,
    EmptySeed,
    LabelClash,
    NotALattice,
    NotASubposet,
    NotIsotoneInput,
    SizeCapExceeded,
    VerificationFailed,
)

logger = logging.getLogger(__name__)

Label = Hashable


@dataclass(frozen=True)
class Adjoined:
    """A new bound adjoined to a lattice, rendered as ``⊤i`` or ``⊥i``."""

    kind: str
    index: int | str = ""

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def top_of(index: int | str = "") -> Adjoined:
    return Adjoined("⊤", index)


def bottom_of(index: int | str = "") -> Adjoined:
    return Adjoined("⊥", index)


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


PASSED = CheckResult(True)


def ensure_size(order: "FiniteOrder", cap: int, what: str = "operation") -> None:
    if len(order) > cap:
        msg = f"{what} refuses {len(order)} elements (cap {cap})"
        raise SizeCapExceeded(msg, witness=len(order))


class LatticeOps(Protocol):
    """Anything that can serve as the codomain of a map: an order with meets and joins."""

    def le(self, x: Label, y: Label) -> bool: ...

    def meet(self, x: Label, y: Label) -> Label: ...

    def join(self, x: Label, y: Label) -> Label: ...


def same(ops: LatticeOps, x: Label, y: Label) -> bool:
    return x == y or (ops.le(x, y) and ops.le(y, x))


def meet_all(ops: LatticeOps, xs: Iterable[Label]) -> Label:
    return functools.reduce(ops.meet, xs)


def join_all(ops: LatticeOps, xs: Iterable[Label]) -> Label:
    return functools.reduce(ops.join, xs)


class FiniteOrder(ABC):
    name: str = ""

    @property
    @abstractmethod
    def elements(self) -> tuple[Label, ...]: ...

    @abstractmethod
    def le(self, x: Label, y: Label) -> bool: ...

    @abstractmethod
    def covers(self) -> Iterator[tuple[Label, Label]]:
        """Yield every pair ``(x, y)`` where ``y`` covers ``x``."""

    @functools.cached_property
    def index(self) -> dict[Label, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        try:
            return x in self.index
        except TypeError:
            return False

    def lt(self, x: Label, y: Label) -> bool:
        return x != y and self.le(x, y)

    def comparable(self, x: Label, y: Label) -> bool:
        return self.le(x, y) or self.le(y, x)

    def upper_bounds(self, xs: Iterable[Label]) -> list[Label]:
        xs = list(xs)
        return [u for u in self.elements if all(self.le(x, u) for x in xs)]

    def lower_bounds(self, xs: Iterable[Label]) -> list[Label]:
        xs = list(xs)
        return [d for d in self.elements if all(self.le(d, x) for x in xs)]

    def same_order(self, other: "FiniteOrder") -> bool:
        if set(self.elements) != set(other.elements):
            return False
        return all(
            self.le(x, y) == other.le(x, y)
            for x in self.elements
            for y in self.elements
        )


class Poset(FiniteOrder):
    """An immutable finite order on opaque, unique labels.

    ``leq[i, j]`` is true iff ``elements[i] <= elements[j]``.
    """

    def __init__(
        self,
        labels: Iterable[Label],
        leq: np.ndarray,
        name: str = "",
        validate: bool = True,
    ):
        labels = tuple(labels)
        n = len(labels)
        leq = np.array(leq, dtype=bool)
        if leq.shape != (n, n):
            msg = f"order matrix has shape {leq.shape}, expected {(n, n)}"
            raise ValueError(msg)
        if len(set(labels)) != n:
            msg = "element labels are not unique"
            raise LabelClash(msg)
        leq.setflags(write=False)
        self._labels = labels
        self.leq = leq
        self.name = name
        if validate:
            self._validate()

    def _validate(self) -> None:
        leq = self.leq
        if not leq.diagonal().all():
            msg = "order is not reflexive"
            raise ValueError(msg)
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = np.argwhere(both)[0]
            msg = "order is not antisymmetric"
            raise NotALattice(msg, witness=(self._labels[i], self._labels[j]))
        m = leq.astype(np.int32)
        if ((m @ m > 0) & ~leq).any():
            msg = "order is not transitive"
            raise ValueError(msg)

    @classmethod
    def from_covers(
        cls,
        labels: Iterable[Label],
        covers: Iterable[tuple[Label, Label]],
        name: str = "",
    ) -> "Poset":
        """Reflexive-transitive closure of the given cover pairs."""
        labels = tuple(labels)
        index = {x: i for i, x in enumerate(labels)}
        n = len(labels)
        leq = np.eye(n, dtype=bool)
        for x, y in covers:
            leq[index[x], index[y]] = True
        for k in range(n):
            leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
        return cls(labels, leq, name=name)

    @classmethod
    def from_relation(
        cls,
        labels: Iterable[Label],
        le: Callable[[Label, Label], bool],
        name: str = "",
        validate: bool = False,
    ) -> "Poset":
        labels = tuple(labels)
        leq = np.array([[le(x, y) for y in labels] for x in labels], dtype=bool)
        return cls(labels, leq.reshape(len(labels), len(labels)), name, validate)

    @property
    def elements(self) -> tuple[Label, ...]:
        return self._labels

    def le(self, x: Label, y: Label) -> bool:
        return bool(self.leq[self.index[x], self.index[y]])

    @functools.cached_property
    def _cover_matrix(self) -> np.ndarray:
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        m = lt.astype(np.int32)
        return lt & ~(m @ m > 0)

    def covers(self) -> Iterator[tuple[Label, Label]]:
        for i, j in np.argwhere(self._cover_matrix):
            yield self._labels[i], self._labels[j]

    def lower_covers(self, x: Label) -> list[Label]:
        column = self._cover_matrix[:, self.index[x]]
        return [self._labels[i] for i in np.flatnonzero(column)]

    def linear_extension(self) -> list[Label]:
        """Elements sorted by the size of their principal downset."""
        sizes = self.leq.sum(axis=0)
        return [self._labels[i] for i in np.argsort(sizes, kind="stable")]

    def down(self, x: Label) -> frozenset[Label]:
        column = self.leq[:, self.index[x]]
        return frozenset(self._labels[i] for i in np.flatnonzero(column))

    def up(self, x: Label) -> frozenset[Label]:
        row = self.leq[self.index[x], :]
        return frozenset(self._labels[i] for i in np.flatnonzero(row))

    def restrict(self, subset: Iterable[Label], name: str = "") -> "Poset":
        subset = set(subset)
        keep = [i for i, x in enumerate(self._labels) if x in subset]
        labels = [self._labels[i] for i in keep]
        return Poset(labels, self.leq[np.ix_(keep, keep)], name, validate=False)

    def is_downset(self, subset: Iterable[Label]) -> bool:
        subset = set(subset)
        return all(self.down(x) <= subset for x in subset)

    def __repr__(self) -> str:
        return f"Poset({self.name or len(self)})"


class FiniteLattice(FiniteOrder):
    @abstractmethod
    def meet(self, x: Label, y: Label) -> Label: ...

    @abstractmethod
    def join(self, x: Label, y: Label) -> Label: ...

    @property
    @abstractmethod
    def poset(self) -> Poset: ...

    @functools.cached_property
    def bottom(self) -> Label:
        return functools.reduce(self.meet, self.elements)

    @functools.cached_property
    def top(self) -> Label:
        return functools.reduce(self.join, self.elements)

    def meet_all(self, xs: Iterable[Label]) -> Label:
        return functools.reduce(self.meet, xs, self.top)

    def join_all(self, xs: Iterable[Label]) -> Label:
        return functools.reduce(self.join, xs, self.bottom)

    def sublattice(self, subset: Iterable[Label], name: str = "") -> "TableLattice":
        """Induced sublattice on a subset closed under meet and join."""
        chosen = set(subset)
        labels = [x for x in self.elements if x in chosen]
        return table_lattice(labels, self.le, self.meet, self.join, name=name)

    def same_lattice(self, other: "FiniteLattice") -> bool:
        if not self.same_order(other):
            return False
        return all(
            self.meet(x, y) == other.meet(x, y) and self.join(x, y) == other.join(x, y)
            for x in self.elements
            for y in self.elements
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name or len(self)})"


class TableLattice(FiniteLattice):
    def __init__(
        self,
        poset: Poset,
        meet_table: np.ndarray,
        join_table: np.ndarray,
        name: str = "",
    ):
        self._poset = poset
        self.meet_table = np.array(meet_table, dtype=np.int32)
        self.join_table = np.array(join_table, dtype=np.int32)
        self.meet_table.setflags(write=False)
        self.join_table.setflags(write=False)
        self.name = name or poset.name

    @property
    def poset(self) -> Poset:
        return self._poset

    @property
    def elements(self) -> tuple[Label, ...]:
        return self._poset.elements

    @property
    def index(self) -> dict[Label, int]:
        return self._poset.index

    def le(self, x: Label, y: Label) -> bool:
        return self._poset.le(x, y)

    def meet(self, x: Label, y: Label) -> Label:
        index = self._poset.index
        return self.elements[self.meet_table[index[x], index[y]]]

    def join(self, x: Label, y: Label) -> Label:
        index = self._poset.index
        return self.elements[self.join_table[index[x], index[y]]]

    def covers(self) -> Iterator[tuple[Label, Label]]:
        return self._poset.covers()


def table_lattice(
    labels: Sequence[Label],
    le: Callable[[Label, Label], bool],
    meet: Callable[[Label, Label], Label],
    join: Callable[[Label, Label], Label],
    name: str = "",
) -> TableLattice:
    """Tabulate a lattice whose operations are given as functions on labels."""
    labels = tuple(labels)
    poset = Poset.from_relation(labels, le, name=name)
    index = poset.index
    n = len(labels)
    meet_table = np.empty((n, n), dtype=np.int32)
    join_table = np.empty((n, n), dtype=np.int32)
    for i, x in enumerate(labels):
        for j in range(i, n):
            y = labels[j]
            try:
                m = index[meet(x, y)]
                k = index[join(x, y)]
            except KeyError:
                msg = "subset is not closed under meet and join"
                raise NotALattice(msg, witness=(x, y)) from None
            meet_table[i, j] = meet_table[j, i] = m
            join_table[i, j] = join_table[j, i] = k
    return TableLattice(poset, meet_table, join_table, name)


class ProductLattice(FiniteLattice):
    """Direct product with componentwise order and operations.

    Elements are tuples of factor labels, enumerated lexicographically.
    """

    def __init__(self, factors: Sequence[FiniteLattice], name: str = ""):
        self.factors = tuple(factors)
        self.name = name or "×".join(f.name or str(len(f)) for f in self.factors)
        self._elements = tuple(itertools.product(*(f.elements for f in self.factors)))

    @property
    def elements(self) -> tuple[Label, ...]:
        return self._elements

    def __contains__(self, x: object) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(c in f for f, c in zip(self.factors, x, strict=True))
        )

    def le(self, x: Label, y: Label) -> bool:
        return all(f.le(a, b) for f, a, b in zip(self.factors, x, y, strict=True))

    def meet(self, x: Label, y: Label) -> Label:
        return tuple(f.meet(a, b) for f, a, b in zip(self.factors, x, y, strict=True))

    def join(self, x: Label, y: Label) -> Label:
        return tuple(f.join(a, b) for f, a, b in zip(self.factors, x, y, strict=True))

    @functools.cached_property
    def bottom(self) -> Label:
        return tuple(f.bottom for f in self.factors)

    @functools.cached_property
    def top(self) -> Label:
        return tuple(f.top for f in self.factors)

    @functools.cached_property
    def _upper_covers(self) -> list[dict[Label, list[Label]]]:
        tables = []
        for f in self.factors:
            table: dict[Label, list[Label]] = {x: [] for x in f.elements}
            for x, y in f.covers():
                table[x].append(y)
            tables.append(table)
        return tables

    def covers(self) -> Iterator[tuple[Label, Label]]:
        for x in self._elements:
            for k, table in enumerate(self._upper_covers):
                for b in table[x[k]]:
                    yield x, x[:k] + (b,) + x[k + 1 :]

    @functools.cached_property
    def poset(self) -> Poset:
        ensure_size(self, DEFAULT_SIZE_CAP, "materializing a product order")
        return Poset.from_relation(self._elements, self.le, name=self.name)


def chain(n: int, name: str = "") -> TableLattice:
    labels = list(range(n))
    return table_lattice(labels, int.__le__, min, max, name=name or f"{n}-chain")


def lattice_from_covers(
    labels: Iterable[Label], covers: Iterable[tuple[Label, Label]], name: str = ""
) -> TableLattice:
    return lattice_from_leq(Poset.from_covers(labels, covers, name=name), name=name)


def m3() -> TableLattice:
    return lattice_from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        name="M3",
    )


def n5() -> TableLattice:
    return lattice_from_covers(
        ["0", "a", "c", "b", "1"],
        [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        name="N5",
    )


def two_by_two() -> ProductLattice:
    return ProductLattice([chain(2), chain(2)], name="2x2")


def _greatest(leq: np.ndarray, idx: np.ndarray) -> int | None:
    if idx.size == 0:
        return None
    found = np.flatnonzero(leq[np.ix_(idx, idx)].all(axis=0))
    return int(idx[found[0]]) if found.size else None


def _least(leq: np.ndarray, idx: np.ndarray) -> int | None:
    if idx.size == 0:
        return None
    found = np.flatnonzero(leq[np.ix_(idx, idx)].all(axis=1))
    return int(idx[found[0]]) if found.size else None


def lattice_from_leq(poset: Poset, name: str = "") -> TableLattice:
    """Derive meet and join tables, failing on the first pair without glb or lub."""
    leq = poset.leq
    n = len(poset)
    labels = poset.elements
    meet_table = np.empty((n, n), dtype=np.int32)
    join_table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(i, n):
            g = _greatest(leq, np.flatnonzero(leq[:, i] & leq[:, j]))
            lub = _least(leq, np.flatnonzero(leq[i, :] & leq[j, :]))
            if g is None or lub is None:
                msg = f"{labels[i]!r} and {labels[j]!r} lack a meet or join"
                raise NotALattice(msg, witness=(labels[i], labels[j]))
            meet_table[i, j] = meet_table[j, i] = g
            join_table[i, j] = join_table[j, i] = lub
    return TableLattice(poset, meet_table, join_table, name or poset.name)


def product(factors: Sequence[FiniteLattice], name: str = "") -> ProductLattice:
    if not factors:
        msg = "product needs at least one factor"
        raise EmptyFactorList(msg)
    return ProductLattice(factors, name=name)


def sublattice_closure(L: FiniteLattice, seed: Iterable[Label]) -> TableLattice:
    closed = set(seed)
    if not closed:
        msg = "sublattice closure of an empty seed"
        raise EmptySeed(msg)
    frontier = set(closed)
    while frontier:
        fresh = set()
        for x in frontier:
            for y in closed:
                for z in (L.meet(x, y), L.join(x, y)):
                    if z not in closed:
                        fresh.add(z)
        closed |= fresh
        frontier = fresh
    return L.sublattice(closed)


class MapMode(StrEnum):
    ISOTONE = "isotone"
    MEET_HOM = "meet_hom"
    JOIN_HOM = "join_hom"
    LATTICE_HOM = "lattice_hom"
    EMBEDDING = "embedding"


class MonotoneMap:
    """A total function between orders.

    The map itself claims nothing; ``verified`` only ever holds modes that
    ``map_check`` has confirmed, see ``verified_as``.
    """

    def __init__(
        self,
        domain: FiniteOrder,
        codomain: Any,
        assignment: Mapping[Label, Label] | Callable[[Label], Label],
        name: str = "",
    ):
        self.domain = domain
        self.codomain = codomain
        self.name = name
        if isinstance(assignment, Mapping):
            self._values = dict(assignment)
            self._fn = None
        else:
            self._values = {}
            self._fn = assignment
        self._verified: frozenset[MapMode] = frozenset()

    def __call__(self, x: Label) -> Label:
        try:
            return self._values[x]
        except KeyError:
            if self._fn is None:
                msg = f"{x!r} is outside the domain of {self.name or 'map'}"
                raise KeyError(msg) from None
        value = self._fn(x)
        self._values[x] = value
        return value

    @property
    def verified(self) -> frozenset[MapMode]:
        return self._verified

    def as_dict(self) -> dict[Label, Label]:
        return {x: self(x) for x in self.domain.elements}

    def image(self) -> list[Label]:
        seen = []
        for x in self.domain.elements:
            y = self(x)
            if y not in seen:
                seen.append(y)
        return seen

    def then(self, other: "MonotoneMap", name: str = "") -> "MonotoneMap":
        return MonotoneMap(self.domain, other.codomain, lambda x: other(self(x)), name)

    def agrees_with(
        self, other: "MonotoneMap", on: Iterable[Label] | None = None
    ) -> CheckResult:
        for x in self.domain.elements if on is None else on:
            if not same(self.codomain, self(x), other(x)):
                return CheckResult(False, (x, self(x), other(x)))
        return PASSED

    def verified_as(
        self, *modes: str, error: type[Exception] = VerificationFailed
    ) -> "MonotoneMap":
        """Return a copy flagged with ``modes``, raising ``error`` if a check fails."""
        for mode in modes:
            result = map_check(self, mode)
            if not result:
                if error is VerificationFailed:
                    raise VerificationFailed(f"{self.name}:{mode}", result.witness)
                msg = f"{self.name or 'map'} is not {mode}"
                raise error(msg, result.witness)
        flagged = MonotoneMap(self.domain, self.codomain, self._fn or self._values)
        flagged.name = self.name
        flagged._values = self._values
        flagged._verified = self._verified | {MapMode(m) for m in modes}
        return flagged

    def __repr__(self) -> str:
        return f"MonotoneMap({self.name or '?'})"


def map_check(m: MonotoneMap, mode: str) -> CheckResult:
    """Check a property over the whole domain, returning a witness pair on failure.

    Isotonicity is checked over cover pairs, which suffices in a finite order.
    Operation pairs are scanned in reverse element order, so a witness pair
    lists the later element first.
    """
    mode = MapMode(mode)
    dom, cod = m.domain, m.codomain
    if mode is MapMode.ISOTONE:
        for x, y in dom.covers():
            if not cod.le(m(x), m(y)):
                logger.debug("%s breaks isotonicity at %r <= %r", m, x, y)
                return CheckResult(False, (x, y))
        return PASSED
    check_meet = mode in (MapMode.MEET_HOM, MapMode.LATTICE_HOM, MapMode.EMBEDDING)
    check_join = mode in (MapMode.JOIN_HOM, MapMode.LATTICE_HOM, MapMode.EMBEDDING)
    for x, y in itertools.combinations_with_replacement(dom.elements[::-1], 2):
        if check_meet and not same(cod, m(dom.meet(x, y)), cod.meet(m(x), m(y))):
            return CheckResult(False, (x, y))
        if check_join and not same(cod, m(dom.join(x, y)), cod.join(m(x), m(y))):
            return CheckResult(False, (x, y))
    if mode is MapMode.EMBEDDING:
        for x, y in itertools.combinations(dom.elements, 2):
            if same(cod, m(x), m(y)):
                return CheckResult(False, (x, y))
    return PASSED


@dataclass(frozen=True)
class VarietyReport:
    distributive: bool
    modular: bool
    pentagon_witness: tuple[Label, ...] | None = None
    diamond_witness: tuple[Label, ...] | None = None


def is_pentagon(L: FiniteLattice, five: Sequence[Label]) -> bool:
    """``five`` is ``(o, p, q, r, i)`` with ``o < p < q < i`` and ``r`` on the short side."""
    o, p, q, r, i = five
    if len(set(five)) != 5:
        return False
    return (
        L.lt(o, p)
        and L.lt(p, q)
        and L.lt(q, i)
        and L.meet(p, r) == o
        and L.meet(q, r) == o
        and L.join(p, r) == i
        and L.join(q, r) == i
    )


def is_diamond(L: FiniteLattice, five: Sequence[Label]) -> bool:
    o, a, b, c, i = five
    if len(set(five)) != 5:
        return False
    return all(
        L.meet(x, y) == o and L.join(x, y) == i
        for x, y in ((a, b), (b, c), (a, c))
    )


def find_pentagons(L: FiniteLattice) -> list[tuple[Label, ...]]:
    found = []
    elements = L.elements
    for p in elements:
        for q in elements:
            if not L.lt(p, q):
                continue
            for r in elements:
                lo = L.meet(p, r)
                hi = L.join(p, r)
                if lo == L.meet(q, r) and hi == L.join(q, r):
                    found.append((lo, p, q, r, hi))
    return found


def _variety_tables(L: FiniteLattice) -> TableLattice:
    if isinstance(L, TableLattice):
        return L
    return table_lattice(L.elements, L.le, L.meet, L.join, name=L.name)


def variety_check(L: FiniteLattice, cap: int = DEFAULT_SIZE_CAP) -> VarietyReport:
    """Exhaustive modularity and distributivity tests with N5/M3 witnesses.

    A product is distributive (modular) iff each factor is, so products are
    answered factorwise with the witness lifted along the bottom of the other
    coordinates.
    """
    if isinstance(L, ProductLattice):
        return _product_variety(L, cap)
    ensure_size(L, cap, "variety_check")
    T = _variety_tables(L)
    M, J, leq = T.meet_table, T.join_table, T.poset.leq
    labels = T.elements
    n = len(labels)
    columns = np.arange(n)

    for x in range(n):
        lhs = J[x, M]
        rhs = M[J[x, :][:, None], columns[None, :]]
        bad = np.argwhere((lhs != rhs) & leq[x, :][None, :])
        if bad.size:
            y, z = (int(v) for v in bad[0])
            a = J[x, M[y, z]]
            c = M[J[x, y], z]
            five = (labels[M[y, a]], labels[a], labels[c], labels[y], labels[J[x, y]])
            if is_pentagon(T, five):
                return VarietyReport(False, False, pentagon_witness=five)
    pentagons = find_pentagons(T)
    if pentagons:
        return VarietyReport(False, False, pentagon_witness=pentagons[0])

    for x in range(n):
        lhs = M[x, J]
        rhs = J[M[x, :][:, None], M[x, :][None, :]]
        for y, z in np.argwhere(lhs != rhs):
            diamond = _diamond_from(T, labels[x], labels[int(y)], labels[int(z)])
            if diamond:
                return VarietyReport(False, True, diamond_witness=diamond)
    for x, y, z in itertools.combinations(labels, 3):
        diamond = _diamond_from(T, x, y, z)
        if diamond:
            return VarietyReport(False, True, diamond_witness=diamond)
    return VarietyReport(True, True)


def _diamond_from(L: FiniteLattice, x: Label, y: Label, z: Label) -> tuple | None:
    d = L.join(L.join(L.meet(x, y), L.meet(y, z)), L.meet(z, x))
    u = L.meet(L.meet(L.join(x, y), L.join(y, z)), L.join(z, x))
    if d == u:
        return None
    five = (
        d,
        L.join(L.meet(x, u), d),
        L.join(L.meet(y, u), d),
        L.join(L.meet(z, u), d),
        u,
    )
    return five if is_diamond(L, five) else None


def _lift(P: ProductLattice, k: int, five: Sequence[Label]) -> tuple:
    base = list(P.bottom)
    lifted = []
    for v in five:
        base[k] = v
        lifted.append(tuple(base))
    return tuple(lifted)


def _product_variety(P: ProductLattice, cap: int) -> VarietyReport:
    reports = [variety_check(f, cap) for f in P.factors]
    for k, report in enumerate(reports):
        if report.pentagon_witness:
            return VarietyReport(
                False, False, pentagon_witness=_lift(P, k, report.pentagon_witness)
            )
    for k, report in enumerate(reports):
        if report.diamond_witness:
            return VarietyReport(
                False, True, diamond_witness=_lift(P, k, report.diamond_witness)
            )
    return VarietyReport(True, True)


def dual(L: FiniteLattice) -> FiniteLattice:
    if isinstance(L, ProductLattice):
        return ProductLattice([dual(f) for f in L.factors], name=f"dual({L.name})")
    T = _variety_tables(L)
    poset = Poset(T.elements, T.poset.leq.T, name=f"dual({L.name})", validate=False)
    return TableLattice(poset, T.join_table, T.meet_table, poset.name)


def iter_downset_masks(p: Poset, cap: int = DEFAULT_SIZE_CAP) -> list[int]:
    """All downsets of ``p`` as bitmasks over ``p.elements`` (bit i is element i)."""
    order = [p.index[x] for x in p.linear_extension()]
    below = []
    for i in range(len(p)):
        mask = 0
        for j in np.flatnonzero(p.leq[:, i]):
            if j != i:
                mask |= 1 << int(j)
        below.append(mask)
    found: list[int] = []

    def extend(k: int, mask: int) -> None:
        if k == len(order):
            found.append(mask)
            if len(found) > cap:
                msg = f"more than {cap} downsets"
                raise SizeCapExceeded(msg, witness=cap)
            return
        i = order[k]
        extend(k + 1, mask)
        if below[i] & mask == below[i]:
            extend(k + 1, mask | (1 << i))

    extend(0, 0)
    return sorted(found, key=lambda m: (m.bit_count(), m))


def downsets(p: Poset, cap: int = DEFAULT_SIZE_CAP) -> TableLattice:
    labels = p.elements
    masks = iter_downset_masks(p, cap)
    sets = {
        m: frozenset(labels[i] for i in range(len(labels)) if m >> i & 1) for m in masks
    }
    by_set = {s: m for m, s in sets.items()}
    return table_lattice(
        [sets[m] for m in masks],
        lambda a, b: a <= b,
        lambda a, b: sets[by_set[a] & by_set[b]],
        lambda a, b: sets[by_set[a] | by_set[b]],
        name=f"downsets({p.name})",
    )


def extend_isotone_complete(
    phi: MonotoneMap, q: FiniteOrder, name: str = ""
) -> MonotoneMap:
    """Extend an isotone map on a subposet ``P`` of ``q`` into a finite lattice.

    ``q`` goes to the join of the images of the ``P``-elements below it, the
    empty join being the bottom of the codomain.
    """
    P, M = phi.domain, phi.codomain
    for x in P.elements:
        if x not in q:
            msg = f"{x!r} is not an element of the extension"
            raise NotASubposet(msg, witness=x)
    for x, y in itertools.product(P.elements, repeat=2):
        if P.le(x, y) != q.le(x, y):
            msg = "the order of P is not the one induced from Q"
            raise NotASubposet(msg, witness=(x, y))
    isotone = map_check(phi, MapMode.ISOTONE)
    if not isotone:
        msg = "only isotone maps can be extended"
        raise NotIsotoneInput(msg, isotone.witness)
    values = {
        x: M.join_all(phi(p) for p in P.elements if q.le(p, x)) for x in q.elements
    }
    extension = MonotoneMap(q, M, values, name=name or f"{phi.name}^")
    restricted = extension.agrees_with(phi, P.elements)
    if not restricted:
        raise VerificationFailed("restriction", restricted.witness)
    return extension.verified_as(MapMode.ISOTONE)


def _span(vectors: Iterable[int]) -> frozenset[int]:
    space = {0}
    for v in vectors:
        if v not in space:
            space |= {w ^ v for w in space}
    return frozenset(space)


def subspaces_f2(n: int) -> TableLattice:
    """All subspaces of GF(2)^n as sets of bit-vector integers, ordered by inclusion."""
    if n not in (1, 2, 3):
        msg = f"dimension {n} is outside 1..3"
        raise DimensionOutOfRange(msg, witness=n)
    found = {frozenset({0})}
    frontier = set(found)
    while frontier:
        fresh = set()
        for space in frontier:
            for v in range(1, 2**n):
                if v not in space:
                    bigger = _span(space | {v})
                    if bigger not in found:
                        fresh.add(bigger)
        found |= fresh
        frontier = fresh
    labels = sorted(found, key=lambda s: (len(s), sorted(s)))
    return table_lattice(
        labels,
        lambda a, b: a <= b,
        lambda a, b: a & b,
        lambda a, b: _span(a | b),
        name=f"subspaces_f2({n})",
    )


def with_new_bottom(L: FiniteLattice, label: Label) -> TableLattice:
    """``{label} + L``: the lattice ``L`` with a new least element."""
    if label in L:
        msg = f"{label!r} is already an element"
        raise LabelClash(msg, witness=label)

    def le(x: Label, y: Label) -> bool:
        return x == label or (y != label and L.le(x, y))

    def meet(x: Label, y: Label) -> Label:
        return label if label in (x, y) else L.meet(x, y)

    def join(x: Label, y: Label) -> Label:
        if x == label:
            return y
        return x if y == label else L.join(x, y)

    return table_lattice((label, *L.elements), le, meet, join, f"{{{label}}}+{L.name}")


def with_new_top(L: FiniteLattice, label: Label) -> TableLattice:
    """``L + {label}``: the lattice ``L`` with a new greatest element."""
    if label in L:
        msg = f"{label!r} is already an element"
        raise LabelClash(msg, witness=label)

    def le(x: Label, y: Label) -> bool:
        return y == label or (x != label and L.le(x, y))

    def meet(x: Label, y: Label) -> Label:
        if x == label:
            return y
        return x if y == label else L.meet(x, y)

    def join(x: Label, y: Label) -> Label:
        return label if label in (x, y) else L.join(x, y)

    return table_lattice((*L.elements, label), le, meet, join, f"{L.name}+{{{label}}}")


def ordinal_sum_lattices(
    L1: FiniteLattice, L2: FiniteLattice, name: str = ""
) -> TableLattice:
    clash = set(L1.elements) & set(L2.elements)
    if clash:
        msg = "ordinal sum needs disjoint label sets"
        raise LabelClash(msg, witness=sorted(map(str, clash)))

    def le(x: Label, y: Label) -> bool:
        if x in L1:
            return L1.le(x, y) if y in L1 else True
        return y in L2 and L2.le(x, y)

    def meet(x: Label, y: Label) -> Label:
        if x in L1 and y in L1:
            return L1.meet(x, y)
        if x in L2 and y in L2:
            return L2.meet(x, y)
        return x if x in L1 else y

    def join(x: Label, y: Label) -> Label:
        if x in L1 and y in L1:
            return L1.join(x, y)
        if x in L2 and y in L2:
            return L2.join(x, y)
        return x if x in L2 else y

    return table_lattice(
        L1.elements + L2.elements, le, meet, join, name or f"{L1.name}+{L2.name}"
    )


def is_convex(L: FiniteLattice, K: Iterable[Label]) -> CheckResult:
    members = set(K)
    for a in members:
        for b in members:
            if not L.le(a, b):
                continue
            for x in L.elements:
                if x not in members and L.le(a, x) and L.le(x, b):
                    return CheckResult(False, (a, x, b))
    return PASSED


def _iter_isotone(P: FiniteOrder, M: FiniteOrder) -> Iterator[tuple[Label, ...]]:
    poset = P if isinstance(P, Poset) else P.poset
    order = poset.linear_extension()
    lower = {x: poset.lower_covers(x) for x in order}
    position = {x: k for k, x in enumerate(order)}
    values: list[Label] = [None] * len(order)

    def extend(k: int) -> Iterator[tuple[Label, ...]]:
        if k == len(order):
            yield tuple(values)
            return
        x = order[k]
        for v in M.elements:
            if all(M.le(values[position[y]], v) for y in lower[x]):
                values[k] = v
                yield from extend(k + 1)

    for assignment in extend(0):
        yield tuple(assignment[position[x]] for x in P.elements)


@cached(LRUCache(maxsize=256), key=keys.hashkey)
def _isotone_assignments(P: FiniteOrder, M: FiniteOrder) -> tuple[tuple, ...]:
    return tuple(_iter_isotone(P, M))


def iter_isotone_maps(P: FiniteOrder, M: FiniteOrder) -> Iterator[MonotoneMap]:
    """Every isotone map from ``P`` to ``M``, enumerated with cover pruning."""
    for values in _isotone_assignments(P, M):
        yield MonotoneMap(P, M, dict(zip(P.elements, values, strict=True)))


def isomorphism(A: FiniteOrder, B: FiniteOrder) -> dict[Label, Label] | None:
    """Backtracking search for an order isomorphism ``A -> B``."""
    if len(A) != len(B):
        return None

    def signature(order: FiniteOrder, x: Label) -> tuple[int, int]:
        return (
            sum(order.le(y, x) for y in order.elements),
            sum(order.le(x, y) for y in order.elements),
        )

    sig_a = {x: signature(A, x) for x in A.elements}
    sig_b = {y: signature(B, y) for y in B.elements}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return None
    order = sorted(A.elements, key=lambda x: sig_a[x])
    mapping: dict[Label, Label] = {}
    used: set[Label] = set()

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for y in B.elements:
            if y in used or sig_b[y] != sig_a[x]:
                continue
            if all(
                A.le(x, u) == B.le(y, mapping[u]) and A.le(u, x) == B.le(mapping[u], y)
                for u in mapping
            ):
                mapping[x] = y
                used.add(y)
                if extend(k + 1):
                    return True
                del mapping[x]
                used.discard(y)
        return False

    return dict(mapping) if extend(0) else None
