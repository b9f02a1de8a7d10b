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
from lattice_extensions.constructions import TWO
from lattice_extensions.core import MonotoneMap, chain, m3, n5, product, two_by_two
from lattice_extensions.errors import (
    EmptyList,
    LabelClash,
    NotALattice,
    NotAnEmbedding,
    NotBoolean,
    TooSmall,
)
from lattice_extensions.partial import (
    amalgamated_union,
    boolean_minus_bounds,
    complement_in,
    complement_join_constant,
    disjoint_union,
    enumerate_partial_homs,
    is_partial_hom,
    ordinal_sum,
)
from tests import unittest


class UnionTest(unittest.TestCase):
    def test_disjoint_union(self) -> None:
        """See if components keep their operations and nothing crosses over"""
        P = disjoint_union([chain(2), chain(2)])
        assert len(P) == 4
        assert P.pjoin((0, 0), (0, 1)) == (0, 1)
        assert P.pmeet((0, 0), (1, 1)) is None
        assert not P.le((0, 0), (1, 1))
        assert P.check_consistency()
        assert not P.is_total()
        self.assertRaises(NotALattice, P.to_lattice)
        self.assertRaises(EmptyList, disjoint_union, [])

    def test_single_component_is_a_lattice(self) -> None:
        """See if a total partial lattice turns back into a lattice"""
        P = disjoint_union([n5()])
        assert P.is_total()
        L = P.to_lattice()
        assert len(L) == 5
        assert L.join((0, "a"), (0, "b")) == (0, "1")

    def test_amalgamated_union(self) -> None:
        """See if two lattices glued along a 2-chain share its image"""
        K = chain(2)
        C, S = chain(3), two_by_two()
        embeds = [
            MonotoneMap(K, C, {0: 0, 1: 1}, name="e0"),
            MonotoneMap(K, S, {0: (0, 0), 1: (1, 1)}, name="e1"),
        ]
        A = amalgamated_union([C, S], embeds)
        assert len(A) == 5
        assert A.le(("K", 1), (0, 2))
        assert A.pjoin((1, (1, 0)), (1, (0, 1))) == ("K", 1)
        assert A.pmeet((0, 2), (1, (1, 0))) is None
        assert A.check_consistency()

    def test_amalgam_needs_embeddings(self) -> None:
        """See if a collapsing map is refused as a gluing"""
        K = chain(2)
        C = chain(3)
        collapse = MonotoneMap(K, C, {0: 1, 1: 1}, name="c")
        self.assertRaises(NotAnEmbedding, amalgamated_union, [C, C], [collapse, collapse])
        self.assertRaises(EmptyList, amalgamated_union, [], [])

    def test_ordinal_sum(self) -> None:
        """See if the lower summand meets and joins everything above it trivially"""
        P = disjoint_union([chain(1)])
        Q = boolean_minus_bounds(two_by_two())
        S = ordinal_sum(P, Q)
        assert len(S) == 3
        assert S.pmeet((0, 0), (1, 0)) == (0, 0)
        assert S.pjoin((0, 0), (0, 1)) == (0, 1)
        assert S.pjoin((1, 0), (0, 1)) is None, "Q has no join of its atoms"
        self.assertRaises(LabelClash, ordinal_sum, Q, Q)


class BooleanTest(unittest.TestCase):
    def test_complements(self) -> None:
        """See if complements are found where they exist"""
        assert complement_in(two_by_two(), (1, 0)) == (0, 1)
        assert complement_in(n5(), "a") == "b"
        assert complement_in(chain(3), 1) is None

    def test_minus_bounds(self) -> None:
        """See if only operations staying strictly inside are kept"""
        B = product([TWO, TWO, TWO])
        P = boolean_minus_bounds(B)
        assert len(P) == 6
        assert P.pjoin((1, 0, 0), (0, 1, 0)) == (1, 1, 0)
        assert P.pjoin((1, 0, 0), (0, 1, 1)) is None
        assert P.pmeet((1, 1, 0), (0, 1, 1)) == (0, 1, 0)
        assert P.pmeet((1, 0, 0), (0, 1, 0)) is None

    def test_minus_bounds_rejects(self) -> None:
        """See if small and non Boolean lattices are refused"""
        self.assertRaises(TooSmall, boolean_minus_bounds, chain(2))
        self.assertRaises(NotBoolean, boolean_minus_bounds, n5())
        self.assertRaises(NotBoolean, boolean_minus_bounds, chain(3))

    def test_partial_homs(self) -> None:
        """See if maps of an antichain are all partial homomorphisms"""
        P = boolean_minus_bounds(two_by_two())
        homs = list(enumerate_partial_homs(P, chain(2)))
        assert len(homs) == 4
        for m in homs:
            assert is_partial_hom(P, chain(2), m)

    def test_partial_hom_check(self) -> None:
        """See if a defined join that is not preserved is reported"""
        B = product([TWO, TWO, TWO])
        P = boolean_minus_bounds(B)
        m = {x: "a" if x == (1, 1, 0) else "0" for x in P.elements}
        result = is_partial_hom(P, m3(), m)
        assert not result

    def test_complement_join_constant(self) -> None:
        """See if complementary pairs all join to the same value"""
        B = product([TWO, TWO, TWO])
        S = two_by_two()
        assert complement_join_constant(B, S, lambda x: x[:2]) == (1, 1)
        assert complement_join_constant(B, m3(), lambda _: "a") == "a"
        P = boolean_minus_bounds(B)
        for L in (m3(), n5(), chain(3)):
            for m in enumerate_partial_homs(P, L):
                value = complement_join_constant(B, L, m)
                assert all(L.join(m[x], m[y]) == value for x, y in _complementary(B, P))


def _complementary(B, P):
    for x in P.elements:
        y = complement_in(B, x)
        yield x, y
