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
"""Line-based text formats for lattices, partial lattices, maps and scenarios.

A document is a sequence of blocks, each opened by a header line::

    lattice L0
    elements 0 a b 1
    cover 0 < a
    cover 0 < b
    cover a < 1
    cover b < 1

    partial Q
    elements x y
    join x y = y

    map phi : L0 -> chain:2
    0 -> 0
    a -> 1

    scenario main-2chains
    construction main_factorization
    input lattices L0 chain:2
    input maps phi psi
    input element a
    expect isotone composite_eq !distributive

Everything after ``#`` is a comment. Lattice references may name a block of
the same document or a built-in: ``chain:<n>``, ``M3``, ``N5``, ``2x2``,
``subspaces:<n>``, ``FD:<n>`` and ``FB:<n>``.
"""
import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pyparsing as pp
from cachetools import LRUCache, cached

from lattice_extensions.core import (
    Adjoined,
    FiniteLattice,
    FiniteOrder,
    Label,
    MonotoneMap,
    Poset,
    chain,
    lattice_from_covers,
    m3,
    n5,
    subspaces_f2,
    two_by_two,
)
from lattice_extensions.errors import LatticeError, ParseError
from lattice_extensions.free import fb_lattice, fd_lattice, generator_names
from lattice_extensions.partial import PartialLattice
from lattice_extensions.types import Scenario

logger = logging.getLogger(__name__)

LABEL = pp.Regex(r"[^\s#]+")

_HEADER = pp.one_of("lattice partial scenario", as_keyword=True)("kind") + LABEL("name")
_MAP_HEADER = (
    pp.Keyword("map")("kind")
    + LABEL("name")
    + pp.Suppress(":")
    + LABEL("domain")
    + pp.Suppress("->")
    + LABEL("codomain")
)
_ELEMENTS = pp.Keyword("elements")("kind") + pp.Group(pp.OneOrMore(LABEL))("labels")
_COVER = pp.Keyword("cover")("kind") + LABEL("lo") + pp.Suppress("<") + LABEL("hi")
_OPERATION = (
    pp.one_of("meet join", as_keyword=True)("kind")
    + LABEL("x")
    + LABEL("y")
    + pp.Suppress("=")
    + LABEL("z")
)
_CONSTRUCTION = pp.Keyword("construction")("kind") + LABEL("name")
_INPUT = (
    pp.Keyword("input")("kind") + LABEL("role") + pp.Group(pp.OneOrMore(LABEL))("refs")
)
_EXPECT = pp.Keyword("expect")("kind") + pp.Group(pp.OneOrMore(LABEL))("props")
_ASSIGN = LABEL("src") + pp.Suppress("->") + LABEL("dst")

LINE = (
    _MAP_HEADER
    | _HEADER
    | _ELEMENTS
    | _COVER
    | _OPERATION
    | _CONSTRUCTION
    | _INPUT
    | _EXPECT
    | _ASSIGN
)
LINE.ignore(pp.python_style_comment)

_ALLOWED = {
    "lattice": {"elements", "cover"},
    "partial": {"elements", "cover", "meet", "join"},
    "map": {"assign"},
    "scenario": {"construction", "input", "expect"},
}


def render_label(x: Any) -> str:
    """A whitespace-free token naming ``x``."""
    match x:
        case Adjoined():
            return str(x)
        case tuple():
            return "(" + ",".join(render_label(c) for c in x) + ")"
        case frozenset():
            return "{" + ",".join(sorted(render_label(c) for c in x)) + "}"
        case _:
            return "".join(str(x).split())


def label_lookup(order: FiniteOrder) -> dict[str, Label]:
    return {render_label(x): x for x in order.elements}


def resolve_label(order: FiniteOrder, token: str, line: int | None = None) -> Label:
    try:
        return label_lookup(order)[token]
    except KeyError:
        name = getattr(order, "name", "") or "lattice"
        msg = f"{token!r} is not an element of {name}"
        raise ParseError(msg, line) from None


@cached(LRUCache(maxsize=64))
def builtin_lattice(ref: str) -> FiniteLattice | None:
    kind, _, arg = ref.partition(":")
    try:
        match kind, arg:
            case "M3", "":
                return m3()
            case "N5", "":
                return n5()
            case "2x2", "":
                return two_by_two()
            case "chain", n if n.isdigit() and int(n) >= 1:
                return chain(int(n), name=ref)
            case "subspaces", n:
                return subspaces_f2(int(n))
            case "FD", n:
                return fd_lattice(generator_names(int(n)))
            case "FB", n:
                return fb_lattice(generator_names(int(n)))
    except ValueError:
        return None
    return None


@dataclass
class _Block:
    kind: str
    name: str
    line: int
    elements: list[str] = field(default_factory=list)
    covers: list[tuple[str, str, int]] = field(default_factory=list)
    meets: list[tuple[str, str, str, int]] = field(default_factory=list)
    joins: list[tuple[str, str, str, int]] = field(default_factory=list)
    assigns: list[tuple[str, str, int]] = field(default_factory=list)
    domain: str = ""
    codomain: str = ""
    construction: str = ""
    inputs: dict[str, list[str]] = field(default_factory=dict)
    expect: list[str] = field(default_factory=list)


@dataclass
class Document:
    source: str = "<string>"
    lattices: dict[str, FiniteLattice] = field(default_factory=dict)
    partials: dict[str, PartialLattice] = field(default_factory=dict)
    maps: dict[str, MonotoneMap] = field(default_factory=dict)
    scenarios: list[Scenario] = field(default_factory=list)

    def lattice(self, ref: str, line: int | None = None) -> FiniteLattice:
        if ref in self.lattices:
            return self.lattices[ref]
        found = builtin_lattice(ref)
        if found is None:
            msg = f"unknown lattice {ref!r}"
            raise ParseError(msg, line)
        return found

    def order(self, ref: str, line: int | None = None) -> FiniteOrder:
        if ref in self.partials:
            return self.partials[ref]
        return self.lattice(ref, line)

    def map(self, ref: str, line: int | None = None) -> MonotoneMap:
        try:
            return self.maps[ref]
        except KeyError:
            msg = f"unknown map {ref!r}"
            raise ParseError(msg, line) from None


def _tokenize(text: str) -> list[_Block]:
    blocks: list[_Block] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.split("#", 1)[0].strip():
            continue
        try:
            parsed = LINE.parse_string(raw, parse_all=True)
        except pp.ParseException as e:
            msg = f"cannot parse {raw.strip()!r}: {e.msg}"
            raise ParseError(msg, number) from None
        kind = parsed.get("kind", "assign")
        if kind in _ALLOWED:
            block = _Block(kind, parsed["name"], number)
            if kind == "map":
                block.domain = parsed["domain"]
                block.codomain = parsed["codomain"]
            blocks.append(block)
            continue
        if not blocks or kind not in _ALLOWED[blocks[-1].kind]:
            msg = f"{kind!r} line outside a block that accepts it"
            raise ParseError(msg, number)
        block = blocks[-1]
        match kind:
            case "elements":
                if block.elements:
                    msg = f"second elements line in {block.name}"
                    raise ParseError(msg, number)
                block.elements = list(parsed["labels"])
            case "cover":
                block.covers.append((parsed["lo"], parsed["hi"], number))
            case "meet":
                block.meets.append((parsed["x"], parsed["y"], parsed["z"], number))
            case "join":
                block.joins.append((parsed["x"], parsed["y"], parsed["z"], number))
            case "assign":
                block.assigns.append((parsed["src"], parsed["dst"], number))
            case "construction":
                block.construction = parsed["name"]
            case "input":
                block.inputs.setdefault(parsed["role"], []).extend(parsed["refs"])
            case "expect":
                block.expect.extend(parsed["props"])
    return blocks


def _known(block: _Block, labels: Iterable[str], line: int) -> None:
    for token in labels:
        if token not in block.elements:
            msg = f"{token!r} is not an element of {block.name}"
            raise ParseError(msg, line)


def _poset(block: _Block) -> Poset:
    if not block.elements:
        msg = f"{block.kind} {block.name} has no elements line"
        raise ParseError(msg, block.line)
    if len(set(block.elements)) != len(block.elements):
        msg = f"repeated element in {block.name}"
        raise ParseError(msg, block.line)
    for lo, hi, line in block.covers:
        _known(block, (lo, hi), line)
    try:
        return Poset.from_covers(
            block.elements, [(lo, hi) for lo, hi, _ in block.covers], name=block.name
        )
    except (ValueError, LatticeError) as e:
        msg = f"{block.name}: {e}"
        raise ParseError(msg, block.line) from e


def _lattice(block: _Block) -> FiniteLattice:
    poset = _poset(block)
    try:
        return lattice_from_covers(
            poset.elements, [(lo, hi) for lo, hi, _ in block.covers], name=block.name
        )
    except LatticeError as e:
        msg = f"{block.name} is not a lattice: {e}"
        raise ParseError(msg, block.line) from e


def _partial(block: _Block) -> PartialLattice:
    poset = _poset(block)
    tables = {}
    for which, entries in (("meet", block.meets), ("join", block.joins)):
        table = {}
        for x, y, z, line in entries:
            _known(block, (x, y, z), line)
            table[(x, y)] = z
        tables[which] = table
    partial = PartialLattice(poset, tables["meet"], tables["join"], name=block.name)
    consistent = partial.check_consistency()
    if not consistent:
        msg = f"{block.name} has operations inconsistent with its order: {consistent.witness}"
        raise ParseError(msg, block.line)
    return partial


def _map(block: _Block, doc: Document) -> MonotoneMap:
    domain = doc.order(block.domain, block.line)
    codomain = doc.order(block.codomain, block.line)
    assignment = {}
    for src, dst, line in block.assigns:
        x = resolve_label(domain, src, line)
        if x in assignment:
            msg = f"{src!r} assigned twice in {block.name}"
            raise ParseError(msg, line)
        assignment[x] = resolve_label(codomain, dst, line)
    missing = [render_label(x) for x in domain.elements if x not in assignment]
    if missing:
        msg = f"map {block.name} leaves {', '.join(missing)} unassigned"
        raise ParseError(msg, block.line)
    return MonotoneMap(domain, codomain, assignment, name=block.name)


def parse_document(text: str, source: str = "<string>") -> Document:
    doc = Document(source)
    blocks = _tokenize(text)
    seen: set[str] = set()
    for block in blocks:
        if block.name in seen:
            msg = f"{block.name!r} is defined twice"
            raise ParseError(msg, block.line)
        seen.add(block.name)
    for block in blocks:
        if block.kind == "lattice":
            doc.lattices[block.name] = _lattice(block)
        elif block.kind == "partial":
            doc.partials[block.name] = _partial(block)
    for block in blocks:
        if block.kind == "map":
            doc.maps[block.name] = _map(block, doc)
        elif block.kind == "scenario":
            if not block.construction:
                msg = f"scenario {block.name} names no construction"
                raise ParseError(msg, block.line)
            doc.scenarios.append(
                Scenario(
                    name=block.name,
                    construction=block.construction,
                    inputs=block.inputs,
                    expect=block.expect,
                    line=block.line,
                )
            )
    logger.debug(
        "%s: %d lattices, %d partial lattices, %d maps, %d scenarios",
        source,
        len(doc.lattices),
        len(doc.partials),
        len(doc.maps),
        len(doc.scenarios),
    )
    return doc


def load_document(path: str | Path) -> Document:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read {path}: {e.strerror}"
        raise ParseError(msg) from e
    return parse_document(text, source=str(path))


def _token(name: str) -> str:
    return render_label(name) or "_"


def render_lattice(L: FiniteOrder, name: str | None = None) -> str:
    lines = [
        f"lattice {_token(name or L.name)}",
        "elements " + " ".join(render_label(x) for x in L.elements),
    ]
    lines += [f"cover {render_label(x)} < {render_label(y)}" for x, y in L.covers()]
    return "\n".join(lines) + "\n"


def render_partial(P: PartialLattice, name: str | None = None) -> str:
    lines = [
        f"partial {_token(name or P.name)}",
        "elements " + " ".join(render_label(x) for x in P.elements),
    ]
    lines += [f"cover {render_label(x)} < {render_label(y)}" for x, y in P.covers()]
    for which, defined in (("meet", P.defined_meets()), ("join", P.defined_joins())):
        lines += [
            f"{which} {render_label(x)} {render_label(y)} = {render_label(z)}"
            for x, y, z in defined
            if x != y
        ]
    return "\n".join(lines) + "\n"


def render_map(
    m: MonotoneMap, domain: str = "", codomain: str = "", name: str = ""
) -> str:
    domain = domain or getattr(m.domain, "name", "")
    codomain = codomain or getattr(m.codomain, "name", "")
    lines = [f"map {_token(name or m.name)} : {_token(domain)} -> {_token(codomain)}"]
    lines += [f"{render_label(x)} -> {render_label(m(x))}" for x in m.domain.elements]
    return "\n".join(lines) + "\n"


def render_factorization(result: Any, name: str) -> str:
    """Every lattice and map of a factorization as one document, with the
    verified properties as a comment manifest."""
    prefix = _token(name)
    inter, target = f"{prefix}-intermediate", f"{prefix}-codomain"
    parts = [f"# {name}\n"]
    parts += [f"# verified {prop}\n" for prop in result.verified]
    parts.append(render_lattice(result.intermediate, inter))
    for i, inj in enumerate(result.injections):
        source = f"{prefix}-L{i}"
        parts.append(render_lattice(inj.domain, source))
        parts.append(render_map(inj, source, inter, name=f"{prefix}-inj{i}"))
    parts.append(render_lattice(result.projection.codomain, target))
    parts.append(
        render_map(result.projection, inter, target, name=f"{prefix}-projection")
    )
    return "\n".join(parts)
