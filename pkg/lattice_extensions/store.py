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
"""The catalog of small lattices, generated once and kept as text files."""
import itertools
import logging
from pathlib import Path

import numpy as np
from cachetools import LRUCache, cached

from lattice_extensions.config import DEFAULT_CATALOG_MAX_SIZE
from lattice_extensions.core import (
    Poset,
    TableLattice,
    isomorphism,
    lattice_from_leq,
    m3,
    n5,
    two_by_two,
)
from lattice_extensions.errors import CapExceeded, NotALattice
from lattice_extensions.formats import load_document, render_lattice

logger = logging.getLogger(__name__)


def _bounded_orders(n: int) -> list[np.ndarray]:
    """Order matrices on ``0..n-1`` with least element 0 and greatest element n-1."""
    middle = list(range(1, n - 1))
    pairs = [(i, j) for i in middle for j in middle if i != j]
    found = []
    for chosen in itertools.product((False, True), repeat=len(pairs)):
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        for (i, j), on in zip(pairs, chosen, strict=True):
            leq[i, j] = on
        closed = leq.copy()
        for k in range(n):
            closed |= closed[:, k : k + 1] & closed[k : k + 1, :]
        strict = closed & closed.T
        np.fill_diagonal(strict, False)
        if (closed == leq).all() and not strict.any():
            found.append(leq)
    return found


def _name(L: TableLattice, n: int, seen: int) -> str:
    if all(L.comparable(x, y) for x in L.elements for y in L.elements):
        return f"C{n}"
    for name, known in (("M3", m3()), ("N5", n5()), ("2x2", two_by_two())):
        if len(known) == n and isomorphism(L, known) is not None:
            return name
    return f"L{n}_{seen}"


@cached(LRUCache(maxsize=8))
def small_lattices(max_size: int = DEFAULT_CATALOG_MAX_SIZE) -> tuple[TableLattice, ...]:
    """Every lattice with at most ``max_size`` elements, once per isomorphism class.

    Labels are the strings ``"0"`` (bottom) up to ``"n-1"`` (top).
    """
    if max_size > DEFAULT_CATALOG_MAX_SIZE:
        msg = f"catalog is limited to {DEFAULT_CATALOG_MAX_SIZE} elements"
        raise CapExceeded(msg, witness=max_size)
    catalog: list[TableLattice] = []
    for n in range(1, max_size + 1):
        labels = [str(i) for i in range(n)]
        classes: list[TableLattice] = []
        for leq in _bounded_orders(n) if n > 1 else [np.ones((1, 1), dtype=bool)]:
            try:
                L = lattice_from_leq(Poset(labels, leq, validate=False))
            except NotALattice:
                continue
            if any(isomorphism(L, other) is not None for other in classes):
                continue
            L.name = _name(L, n, sum(1 for c in classes if c.name.startswith("L")))
            classes.append(L)
        logger.debug("%d lattices with %d elements", len(classes), n)
        catalog += classes
    return tuple(catalog)


class CatalogStore:
    """Catalog files ``<name>.lat`` under one directory."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def ensure_catalog_exists(
        self, max_size: int = DEFAULT_CATALOG_MAX_SIZE
    ) -> list[Path]:
        """Write missing or stale files; rerunning leaves the directory unchanged."""
        self.directory.mkdir(parents=True, exist_ok=True)
        written = []
        for L in small_lattices(max_size):
            path = self.directory / f"{L.name}.lat"
            text = render_lattice(L)
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                path.write_text(text, encoding="utf-8")
                logger.info("wrote %s", path)
            written.append(path)
        return written

    def load(self) -> list[TableLattice]:
        lattices = []
        for path in sorted(self.directory.glob("*.lat")):
            lattices += load_document(path).lattices.values()
        return sorted(lattices, key=len)
