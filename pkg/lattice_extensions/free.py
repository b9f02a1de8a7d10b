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
"""Free lattices, free distributive lattices and free Boolean lattices.

Lattice terms are small frozen trees. The free lattice order is decided with
Whitman's recursion, memoized on term pairs; canonical forms follow from it.
Free distributive lattices are antichains of generator sets read as joins of
meets, free Boolean lattices are sets of minterms.
"""
import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from threading import RLock
from typing import Any, Union

import pyparsing as pp
from cachetools import LRUCache, cached, keys

from lattice_extensions.config import (
    DEFAULT_FB_MAX_GENERATORS,
    DEFAULT_FD_MAX_GENERATORS,
    DEFAULT_SIZE_CAP,
)
from lattice_extensions.core import (
    FiniteLattice,
    FiniteOrder,
    Label,
    MonotoneMap,
    Poset,
    TableLattice,
    table_lattice,
)
from lattice_extensions.errors import (
    CapExceeded,
    EmptyList,
    LatticeError,
    SizeCapExceeded,
    TermSyntaxError,
    UnknownGenerator,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Meet:
    args: tuple["Term", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            msg = "a meet needs at least two arguments"
            raise ValueError(msg)


@dataclass(frozen=True)
class Join:
    args: tuple["Term", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            msg = "a join needs at least two arguments"
            raise ValueError(msg)


@dataclass(frozen=True)
class Comp:
    """Complement, only meaningful in Boolean contexts."""

    arg: "Term"


Term = Union[Gen, Meet, Join, Comp]


def meet_of(*terms: Term) -> Term:
    return terms[0] if len(terms) == 1 else Meet(tuple(terms))


def join_of(*terms: Term) -> Term:
    return terms[0] if len(terms) == 1 else Join(tuple(terms))


def generator_names(n: int) -> tuple[str, ...]:
    """``a, b, c, ...`` for small ``n``, ``g0, g1, ...`` beyond the alphabet."""
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return tuple(f"g{i}" for i in range(n))


def term_generators(t: Term) -> frozenset[str]:
    match t:
        case Gen(name):
            return frozenset({name})
        case Comp(arg):
            return term_generators(arg)
        case Meet(args) | Join(args):
            return frozenset().union(*(term_generators(a) for a in args))


def dual_term(t: Term) -> Term:
    match t:
        case Gen():
            return t
        case Comp(arg):
            return Comp(dual_term(arg))
        case Meet(args):
            return Join(tuple(dual_term(a) for a in args))
        case Join(args):
            return Meet(tuple(dual_term(a) for a in args))


def _has_complement(t: Term) -> bool:
    match t:
        case Gen():
            return False
        case Comp():
            return True
        case Meet(args) | Join(args):
            return any(_has_complement(a) for a in args)


def _binary(node: type) -> Any:
    def action(tokens: pp.ParseResults) -> Term:
        operands = tokens[0][0::2]
        return node(tuple(operands))

    return action


def _complement(tokens: pp.ParseResults) -> Term:
    group = tokens[0]
    term = group[-1]
    for _ in range(len(group) - 1):
        term = Comp(term)
    return term


def _build_grammar() -> pp.ParserElement:
    identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_")
    identifier.set_parse_action(lambda tokens: Gen(tokens[0]))
    return pp.infix_notation(
        identifier,
        [
            (pp.one_of("~ ¬"), 1, pp.OpAssoc.RIGHT, _complement),
            (pp.one_of("∧ &"), 2, pp.OpAssoc.LEFT, _binary(Meet)),
            (pp.one_of("∨ |"), 2, pp.OpAssoc.LEFT, _binary(Join)),
        ],
    )


TERM_GRAMMAR = _build_grammar()


def parse_term(
    src: str, gens: Iterable[str] | None = None, boolean: bool = False
) -> Term:
    """Parse ``src``; ``∧`` binds tighter than ``∨``, ``~`` tighter than both.

    ``&``, ``|`` and ``~`` are accepted as ASCII aliases.
    """
    try:
        term = TERM_GRAMMAR.parse_string(src, parse_all=True)[0]
    except pp.ParseException as e:
        msg = f"cannot parse term {src!r}: {e.msg}"
        raise TermSyntaxError(msg, position=e.loc) from None
    if not boolean and _has_complement(term):
        position = min(p for p in (src.find("~"), src.find("¬")) if p >= 0)
        msg = "complement is only allowed in Boolean terms"
        raise TermSyntaxError(msg, position=position)
    if gens is not None:
        unknown = term_generators(term) - set(gens)
        if unknown:
            msg = f"unknown generators {sorted(unknown)}"
            raise UnknownGenerator(msg, witness=sorted(unknown))
    return term


def render(t: Term) -> str:
    """Render with ``∧``/``∨``; compound operands are parenthesized so the
    output parses back to the same tree."""
    match t:
        case Gen(name):
            return name
        case Comp(Gen() as arg):
            return f"~{render(arg)}"
        case Comp(arg):
            return f"~({render(arg)})"
        case Meet(args):
            return " ∧ ".join(_operand(a) for a in args)
        case Join(args):
            return " ∨ ".join(_operand(a) for a in args)


def _operand(t: Term) -> str:
    return f"({render(t)})" if isinstance(t, Meet | Join) else render(t)


def _no_complement(t: Term) -> None:
    msg = "complement has no meaning in a free lattice"
    raise LatticeError(msg, witness=render(t))


@cached(LRUCache(maxsize=1 << 16), key=keys.hashkey, lock=RLock())
def fl_leq(s: Term, t: Term) -> bool:
    """Decide ``s <= t`` in the free lattice."""
    if isinstance(s, Comp):
        _no_complement(s)
    if isinstance(t, Comp):
        _no_complement(t)
    if isinstance(s, Join):
        return all(fl_leq(a, t) for a in s.args)
    if isinstance(t, Meet):
        return all(fl_leq(s, b) for b in t.args)
    if isinstance(s, Gen) and isinstance(t, Gen):
        return s == t
    if isinstance(s, Gen):
        return any(fl_leq(s, b) for b in t.args)
    if isinstance(t, Gen):
        return any(fl_leq(a, t) for a in s.args)
    # meet on the left, join on the right: Whitman's condition
    return any(fl_leq(a, t) for a in s.args) or any(fl_leq(s, b) for b in t.args)


def fl_eq(s: Term, t: Term) -> bool:
    return fl_leq(s, t) and fl_leq(t, s)


class Reducibility(StrEnum):
    GENERATOR = "generator"
    JOIN_REDUCIBLE = "join_reducible"
    MEET_REDUCIBLE = "meet_reducible"


def term_key(t: Term) -> tuple:
    """Total order on terms: generators by name, then meets, then joins."""
    match t:
        case Gen(name):
            return (0, name)
        case Meet(args):
            return (1, tuple(term_key(a) for a in args))
        case Join(args):
            return (2, tuple(term_key(a) for a in args))
        case Comp(arg):
            return (3, term_key(arg))


def _flatten(node: type, args: Iterable[Term]) -> list[Term]:
    flat = []
    for a in args:
        if isinstance(a, node):
            flat.extend(a.args)
        else:
            flat.append(a)
    return flat


def _canonical_nary(node: type, dual: type, args: list[Term]) -> Term:
    parts = _flatten(node, args)
    changed = True
    while changed:
        changed = False
        whole = parts[0] if len(parts) == 1 else node(tuple(parts))
        for k, part in enumerate(parts):
            if not isinstance(part, dual):
                continue
            # a joinand m = ∧ m_j may be replaced by any m_j below the whole join
            for inner in part.args:
                below = fl_leq(inner, whole) if node is Join else fl_leq(whole, inner)
                if below:
                    parts = parts[:k] + _flatten(node, [inner]) + parts[k + 1 :]
                    changed = True
                    break
            if changed:
                break
    unique = list(dict.fromkeys(parts))
    if node is Join:
        kept = [p for p in unique if not any(q != p and fl_leq(p, q) for q in unique)]
    else:
        kept = [p for p in unique if not any(q != p and fl_leq(q, p) for q in unique)]
    kept.sort(key=term_key)
    return kept[0] if len(kept) == 1 else node(tuple(kept))


@cached(LRUCache(maxsize=1 << 14), key=keys.hashkey, lock=RLock())
def canonical(t: Term) -> Term:
    match t:
        case Gen():
            return t
        case Comp():
            _no_complement(t)
        case Join(args):
            return _canonical_nary(Join, Meet, [canonical(a) for a in args])
        case Meet(args):
            return _canonical_nary(Meet, Join, [canonical(a) for a in args])


def reducibility(t: Term) -> Reducibility:
    if isinstance(t, Join):
        return Reducibility.JOIN_REDUCIBLE
    if isinstance(t, Meet):
        return Reducibility.MEET_REDUCIBLE
    return Reducibility.GENERATOR


def canonical_form(t: Term) -> tuple[Term, Reducibility]:
    """Whitman canonical form: two terms are equal in the free lattice iff
    their canonical forms are identical."""
    c = canonical(t)
    return c, reducibility(c)


def proper_decomposition(t: Term, pool: Iterable[Term]) -> tuple | None:
    """Look for a proper decomposition of ``t`` of the kind its tag rules out.

    A canonical join must not be a meet of two elements strictly above it, a
    canonical meet not a join of two strictly below, and a generator neither.
    Returns ``(kind, u, v)`` for the first offending pair in ``pool``.
    """
    c, tag = canonical_form(t)
    pool = list(pool)
    kinds = {
        Reducibility.JOIN_REDUCIBLE: ("meet",),
        Reducibility.MEET_REDUCIBLE: ("join",),
        Reducibility.GENERATOR: ("meet", "join"),
    }[tag]
    for u, v in itertools.combinations(pool, 2):
        for kind in kinds:
            combined = Meet((u, v)) if kind == "meet" else Join((u, v))
            if fl_eq(combined, c) and not fl_eq(u, c) and not fl_eq(v, c):
                return kind, u, v
    return None


def proper_combinations(
    pool: Iterable[Term],
) -> tuple[dict[Term, tuple[Term, Term]], dict[Term, tuple[Term, Term]]]:
    """Canonical meets and joins of two distinct elements of ``pool`` that
    differ from both operands, each keyed to the first pair producing it.

    Canonical forms are unique, so looking an element up here decides whether
    it is a proper meet or join over the pool.
    """
    forms = list(dict.fromkeys(canonical(t) for t in pool))
    meets: dict[Term, tuple[Term, Term]] = {}
    joins: dict[Term, tuple[Term, Term]] = {}
    for u, v in itertools.combinations(forms, 2):
        for found, node in ((meets, Meet), (joins, Join)):
            c = canonical(node((u, v)))
            if c != u and c != v:
                found.setdefault(c, (u, v))
    return meets, joins


def enumerate_terms(gens: Sequence[str], depth: int) -> list[Term]:
    """All terms built from ``gens`` with binary meets and joins up to ``depth``."""
    terms: list[Term] = [Gen(g) for g in gens]
    for _ in range(depth):
        fresh = []
        for u, v in itertools.combinations(terms, 2):
            fresh.append(Meet((u, v)))
            fresh.append(Join((u, v)))
        terms = terms + fresh
    return terms


def eval_term(t: Term, L: Any, assignment: Mapping[str, Label]) -> Label:
    """Evaluate ``t`` in ``L``; complements need an ``L`` with a ``complement`` method."""
    match t:
        case Gen(name):
            try:
                return assignment[name]
            except KeyError:
                msg = f"no value assigned to {name}"
                raise UnknownGenerator(msg, witness=name) from None
        case Comp(arg):
            return L.complement(eval_term(arg, L, assignment))
        case Meet(args):
            return _fold(L.meet, [eval_term(a, L, assignment) for a in args])
        case Join(args):
            return _fold(L.join, [eval_term(a, L, assignment) for a in args])


def _fold(op: Any, values: list[Label]) -> Label:
    result = values[0]
    for v in values[1:]:
        result = op(result, v)
    return result


class FreeLatticeTerms:
    """The free lattice on ``generators`` as a codomain.

    Nothing is materialized: comparisons go through ``fl_leq`` and meets and
    joins come back in canonical form.
    """

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)
        self.name = f"Free({','.join(self.generators)})"

    def __contains__(self, t: object) -> bool:
        return isinstance(t, Gen | Meet | Join) and term_generators(t) <= set(
            self.generators
        )

    def le(self, s: Term, t: Term) -> bool:
        return fl_leq(s, t)

    def meet(self, s: Term, t: Term) -> Term:
        return canonical(Meet((s, t)))

    def join(self, s: Term, t: Term) -> Term:
        return canonical(Join((s, t)))

    def generator(self, name: str) -> Gen:
        if name not in self.generators:
            msg = f"{name} is not a generator of {self.name}"
            raise UnknownGenerator(msg, witness=name)
        return Gen(name)


# Free distributive lattices


def _resolve_generators(generators: Sequence[str] | int) -> tuple[str, ...]:
    if isinstance(generators, int):
        return generator_names(generators)
    return tuple(generators)


def _minimal_sets(sets: Iterable[frozenset[str]]) -> frozenset[frozenset[str]]:
    sets = set(sets)
    return frozenset(s for s in sets if not any(t < s for t in sets))


@dataclass(frozen=True)
class FDElement:
    """A join of meets: each member of ``antichain`` is the meet of its generators."""

    generators: tuple[str, ...]
    antichain: frozenset[frozenset[str]]

    def __post_init__(self):
        if not self.antichain or frozenset() in self.antichain:
            msg = "an element of a free distributive lattice needs nonempty meets"
            raise ValueError(msg)
        if _minimal_sets(self.antichain) != self.antichain:
            msg = "meets in a normal form must be pairwise incomparable"
            raise ValueError(msg)

    def __str__(self) -> str:
        return render(fd_to_term(self))


def fd_from_term(t: Term, generators: Sequence[str] | None = None) -> FDElement:
    """Distribute meets over joins and keep the minimal generator sets."""
    gens = tuple(generators) if generators is not None else tuple(
        sorted(term_generators(t))
    )

    def sets(u: Term) -> frozenset[frozenset[str]]:
        match u:
            case Gen(name):
                if name not in gens:
                    msg = f"{name} is not among {gens}"
                    raise UnknownGenerator(msg, witness=name)
                return frozenset({frozenset({name})})
            case Join(args):
                return _minimal_sets(itertools.chain.from_iterable(map(sets, args)))
            case Meet(args):
                acc = sets(args[0])
                for a in args[1:]:
                    other = sets(a)
                    acc = _minimal_sets(s | o for s in acc for o in other)
                return acc
            case Comp():
                _no_complement(u)

    return FDElement(gens, sets(t))


def fd_leq(a: FDElement, b: FDElement) -> bool:
    return all(any(t <= s for t in b.antichain) for s in a.antichain)


def fd_join(a: FDElement, b: FDElement) -> FDElement:
    return FDElement(a.generators, _minimal_sets(a.antichain | b.antichain))


def fd_meet(a: FDElement, b: FDElement) -> FDElement:
    return FDElement(
        a.generators, _minimal_sets(s | t for s in a.antichain for t in b.antichain)
    )


def fd_generator(generators: Sequence[str], name: str) -> FDElement:
    return FDElement(tuple(generators), frozenset({frozenset({name})}))


def fd_to_term(x: FDElement) -> Term:
    meets = [
        meet_of(*(Gen(g) for g in sorted(s)))
        for s in sorted(x.antichain, key=lambda s: (len(s), sorted(s)))
    ]
    return join_of(*meets)


def fd_dual(x: FDElement) -> FDElement:
    """The anti-automorphism of the free distributive lattice fixing the generators."""
    return fd_from_term(dual_term(fd_to_term(x)), x.generators)


def fd_eval(x: FDElement, L: Any, assignment: Mapping[str, Label]) -> Label:
    meets = []
    for s in sorted(x.antichain, key=sorted):
        values = [assignment[g] for g in sorted(s)]
        meets.append(_fold(L.meet, values))
    return _fold(L.join, meets)


def _check_generators(gens: tuple[str, ...], cap: int, what: str) -> None:
    if len(gens) > cap:
        msg = f"{what} on {len(gens)} generators exceeds the cap of {cap}"
        raise CapExceeded(msg, witness=len(gens))
    if not gens:
        msg = f"{what} needs at least one generator"
        raise EmptyList(msg)


def fd_enumerate(
    generators: Sequence[str] | int, cap: int = DEFAULT_FD_MAX_GENERATORS
) -> list[FDElement]:
    """Every element as an antichain of nonempty generator sets."""
    gens = _resolve_generators(generators)
    _check_generators(gens, cap, "fd_enumerate")
    subsets = [
        frozenset(c)
        for r in range(1, len(gens) + 1)
        for c in itertools.combinations(gens, r)
    ]
    found = []

    def extend(start: int, chosen: list[frozenset[str]]) -> None:
        if chosen:
            found.append(FDElement(gens, frozenset(chosen)))
        for k in range(start, len(subsets)):
            s = subsets[k]
            if all(not (s <= t or t <= s) for t in chosen):
                chosen.append(s)
                extend(k + 1, chosen)
                chosen.pop()

    extend(0, [])
    return sorted(found, key=lambda x: term_key(fd_to_term(x)))


@cached(LRUCache(maxsize=8))
def fd_lattice(generators: tuple[str, ...]) -> TableLattice:
    return table_lattice(
        fd_enumerate(generators),
        fd_leq,
        fd_meet,
        fd_join,
        name=f"FD({','.join(generators)})",
    )


# Free Boolean lattices

Cube = tuple[int, ...]


@dataclass(frozen=True)
class FBElement:
    """A set of minterms; each minterm gives every generator the value 0 or 1."""

    generators: tuple[str, ...]
    minterms: frozenset[tuple[int, ...]]

    def __str__(self) -> str:
        cubes = fb_prime_implicants(self)
        if not cubes:
            return "0"
        if cubes == [(2,) * len(self.generators)]:
            return "1"
        return " ∨ ".join(_render_cube(self.generators, c) for c in cubes)


def _render_cube(gens: tuple[str, ...], cube: Cube) -> str:
    return " ∧ ".join(
        g if v == 1 else f"~{g}" for g, v in zip(gens, cube, strict=True) if v != 2
    )


def _all_minterms(n: int) -> list[tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=n))


def fb_from_term(
    t: Term,
    generators: Sequence[str] | None = None,
    cap: int = DEFAULT_FB_MAX_GENERATORS,
) -> FBElement:
    gens = tuple(generators) if generators is not None else tuple(
        sorted(term_generators(t))
    )
    _check_generators(gens, cap, "fb_from_term")
    everything = frozenset(_all_minterms(len(gens)))
    position = {g: k for k, g in enumerate(gens)}

    def value(u: Term) -> frozenset[tuple[int, ...]]:
        match u:
            case Gen(name):
                if name not in position:
                    msg = f"{name} is not among {gens}"
                    raise UnknownGenerator(msg, witness=name)
                k = position[name]
                return frozenset(m for m in everything if m[k] == 1)
            case Comp(arg):
                return everything - value(arg)
            case Meet(args):
                return frozenset.intersection(*map(value, args))
            case Join(args):
                return frozenset.union(*map(value, args))

    return FBElement(gens, value(t))


def fb_zero(generators: Sequence[str]) -> FBElement:
    return FBElement(tuple(generators), frozenset())


def fb_one(generators: Sequence[str]) -> FBElement:
    gens = tuple(generators)
    return FBElement(gens, frozenset(_all_minterms(len(gens))))


def fb_generator(generators: Sequence[str], name: str) -> FBElement:
    return fb_from_term(Gen(name), generators)


def fb_leq(a: FBElement, b: FBElement) -> bool:
    return a.minterms <= b.minterms


def fb_meet(a: FBElement, b: FBElement) -> FBElement:
    return FBElement(a.generators, a.minterms & b.minterms)


def fb_join(a: FBElement, b: FBElement) -> FBElement:
    return FBElement(a.generators, a.minterms | b.minterms)


def fb_complement(a: FBElement) -> FBElement:
    return FBElement(a.generators, fb_one(a.generators).minterms - a.minterms)


def fb_enumerate(
    generators: Sequence[str] | int, cap: int = DEFAULT_FB_MAX_GENERATORS
) -> list[FBElement]:
    gens = _resolve_generators(generators)
    _check_generators(gens, cap, "fb_enumerate")
    minterms = _all_minterms(len(gens))
    return [
        FBElement(gens, frozenset(c))
        for r in range(len(minterms) + 1)
        for c in itertools.combinations(minterms, r)
    ]


class BooleanLattice(TableLattice):
    """A tabulated free Boolean lattice that also knows complements."""

    def complement(self, x: FBElement) -> FBElement:
        return fb_complement(x)


@cached(LRUCache(maxsize=8))
def fb_lattice(generators: tuple[str, ...]) -> BooleanLattice:
    size = 2 ** (2 ** len(generators))
    if size > DEFAULT_SIZE_CAP:
        msg = f"FB on {len(generators)} generators has {size} elements"
        raise SizeCapExceeded(msg, witness=size)
    T = table_lattice(
        fb_enumerate(generators),
        fb_leq,
        fb_meet,
        fb_join,
        name=f"FB({','.join(generators)})",
    )
    return BooleanLattice(T.poset, T.meet_table, T.join_table, T.name)


def _mergeable(a: Cube, b: Cube) -> bool:
    diff = 0
    for x, y in zip(a, b, strict=True):
        if x != y:
            if x == 2 or y == 2:
                return False
            diff += 1
    return diff == 1


def _merge(a: Cube, b: Cube) -> Cube:
    return tuple(2 if x != y else x for x, y in zip(a, b, strict=True))


def fb_prime_implicants(a: FBElement) -> list[Cube]:
    """Prime implicants of ``a`` as cubes over {0, 1, 2}, 2 meaning absent.

    Minterm cubes are merged one dropped literal at a time until nothing
    merges; cubes never absorbed into a larger one are prime.
    """
    cubes = set(a.minterms)
    primes: set[Cube] = set()
    while cubes:
        merged: set[Cube] = set()
        used: set[Cube] = set()
        for x, y in itertools.combinations(sorted(cubes), 2):
            if _mergeable(x, y):
                merged.add(_merge(x, y))
                used.update((x, y))
        primes |= cubes - used
        cubes = merged
    return sorted(primes)


def cube_generators(generators: Sequence[str], cube: Cube) -> list[str]:
    """Generators a cube mentions, whichever their sign."""
    return [g for g, v in zip(generators, cube, strict=True) if v != 2]


# Free products of join-semilattices


class FiniteJoinSemilattice(FiniteOrder):
    """A finite order with all binary joins, given by its join operation."""

    def __init__(self, labels: Iterable[Label], join: Any, name: str = ""):
        self._join = join
        self.name = name
        self.poset = Poset.from_relation(
            labels, lambda x, y: join(x, y) == y, name=name
        )

    @classmethod
    def from_lattice(cls, L: FiniteLattice) -> "FiniteJoinSemilattice":
        return cls(L.elements, L.join, name=L.name)

    @property
    def elements(self) -> tuple[Label, ...]:
        return self.poset.elements

    @property
    def index(self) -> dict[Label, int]:
        return self.poset.index

    def le(self, x: Label, y: Label) -> bool:
        return self.poset.le(x, y)

    def join(self, x: Label, y: Label) -> Label:
        return self._join(x, y)

    def join_all(self, xs: Iterable[Label]) -> Label:
        return _fold(self.join, list(xs))

    def covers(self) -> Iterator[tuple[Label, Label]]:
        return self.poset.covers()

    def check_laws(self) -> bool:
        elements = self.elements
        for x, y in itertools.product(elements, repeat=2):
            if self.join(x, y) != self.join(y, x) or self.join(x, x) != x:
                return False
            for z in elements:
                if self.join(self.join(x, y), z) != self.join(x, self.join(y, z)):
                    return False
        return True


def free_product_jsl(
    Ss: Sequence[FiniteJoinSemilattice], name: str = ""
) -> tuple[FiniteJoinSemilattice, list[MonotoneMap]]:
    """Formal joins of elements from distinct factors.

    An element is a tuple with one entry per factor, ``None`` outside its
    (nonempty) support. Joins union the supports and join where they overlap.
    """
    if not Ss:
        msg = "free product of no semilattices"
        raise EmptyList(msg)
    choices = [(None, *S.elements) for S in Ss]
    labels = [t for t in itertools.product(*choices) if any(v is not None for v in t)]
    labels.sort(key=lambda t: (sum(v is not None for v in t), [v is None for v in t]))

    def join(x: tuple, y: tuple) -> tuple:
        return tuple(
            b if a is None else a if b is None else S.join(a, b)
            for S, a, b in zip(Ss, x, y, strict=True)
        )

    product = FiniteJoinSemilattice(
        labels, join, name=name or "*".join(S.name for S in Ss)
    )
    embeddings = []
    for i, S in enumerate(Ss):
        embeddings.append(
            MonotoneMap(
                S,
                product,
                lambda x, i=i: tuple(x if k == i else None for k in range(len(Ss))),
                name=f"ι{i}",
            )
        )
    return product, embeddings
