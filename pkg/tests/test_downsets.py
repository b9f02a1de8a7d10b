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
from lattice_extensions.core import (
    MapMode,
    MonotoneMap,
    bottom_of,
    chain,
    lattice_from_covers,
    map_check,
    top_of,
    two_by_two,
    variety_check,
)
from lattice_extensions.downsets import (
    DownsetProduct,
    build_P,
    downset_product,
    dov_membership_check,
    lprime_lattice,
    nondist_instance,
    psi_downset,
    theorem_semilat_factorization,
)
from lattice_extensions.errors import CapExceeded, EmptyList, NotJoinHom
from tests import unittest


def _point():
    return lattice_from_covers(["e"], [], name="{e}")


class DownsetProductTest(unittest.TestCase):
    def test_poset_sizes(self) -> None:
        """See if P is the product with tops adjoined, minus its top"""
        assert len(build_P([chain(2)])) == 2
        assert len(build_P([chain(2), chain(2)])) == 8
        assert len(build_P([_point(), two_by_two()])) == 9
        self.assertRaises(CapExceeded, DownsetProduct, [chain(4), chain(4)])
        self.assertRaises(EmptyList, DownsetProduct, [])

    def test_theta(self) -> None:
        """See if θ puts tops everywhere but one coordinate"""
        D = downset_product((chain(2), chain(3)))
        assert D.theta(0, 1) == (1, top_of(1))
        assert D.theta(1, 2) == (top_of(0), 2)
        assert D.theta(1, 2) in D.poset

    def test_single_factor(self) -> None:
        """See if one factor gives the factor back"""
        L = lprime_lattice((chain(3),))
        assert len(L) == 3
        assert variety_check(L).distributive

    def test_members_are_closed_families(self) -> None:
        """See if every member of L′ is a nonempty closed downset"""
        D = downset_product((_point(), two_by_two()))
        for F in D.lattice.elements:
            assert D.family_check(F), str(F)
        assert not D.family_check(D.family(0))

    def test_closure_adds_joins(self) -> None:
        """See if closing θ(a) and θ(b) brings in θ(a ∨ b)"""
        D = downset_product((_point(), two_by_two()))
        mask = D.principal(D.theta(1, (1, 0))) | D.principal(D.theta(1, (0, 1)))
        assert not D.is_closed(mask)
        closed = D.closure(mask)
        assert D.theta(1, (1, 1)) in D.members(closed.mask)
        assert D.theta(1, (1, 1)) in closed.maximal
        self.assertRaises(EmptyList, D.closure, 0)

    def test_joins_by_maximal_elements(self) -> None:
        """See if joining maximal θ-elements gives the closure join"""
        D = downset_product((chain(2), chain(2)))
        self.assert_holds(D.join_by_maximal_check(), "join by maximal")

    def test_pi_and_xi(self) -> None:
        """See if π undoes ξ and sends the other coordinates to the new bottoms"""
        D = downset_product((chain(2), chain(2)))
        pi = D.pi_map()
        assert pi(D.xi(0, 1)) == (1, bottom_of(1))
        assert pi(D.xi(1, 0)) == (bottom_of(0), 0)
        assert map_check(D.xi_map(0), MapMode.EMBEDDING)


class SemilatticeFactorizationTest(unittest.TestCase):
    def test_membership(self) -> None:
        """See if L′ maps onto the product with distributive fibers"""
        report = dov_membership_check([chain(2), chain(2)])
        assert report.holds, report.failure
        assert report.failure is None
        assert report.fiber_count == 9

    def test_factorization(self) -> None:
        """See if join homomorphisms factor through L′ with a join-preserving ψ"""
        L, C = chain(2), chain(3)
        phis = [
            MonotoneMap(L, C, {0: 0, 1: 2}, name="φ0"),
            MonotoneMap(L, C, {0: 1, 1: 1}, name="φ1"),
        ]
        result = theorem_semilat_factorization([L, L], phis)
        assert "projection:join_hom" in result.verified
        assert "intermediate:dov_membership" in result.verified
        D = downset_product((L, L))
        self.assert_holds(D.cup_join_check(phis), "cup join")
        assert psi_downset(D, D.xi(0, 1), phis) == 2

    def test_rejects_non_join_homs(self) -> None:
        """See if a meet-shaped map is refused"""
        S = two_by_two()
        phi = MonotoneMap(S, chain(2), lambda t: t[0] & t[1], name="∧")
        self.assertRaises(NotJoinHom, theorem_semilat_factorization, [S], [phi])
        D = downset_product((S,))
        self.assertRaises(NotJoinHom, psi_downset, D, D.xi(0, (0, 0)), [phi])

    def test_nondistributive_instance(self) -> None:
        """See if a point and the square give a lattice with a pentagon"""
        report = nondist_instance()
        assert report.lhs != report.rhs
        assert report.lhs_principal
        assert report.rhs_nonprincipal
        assert report.is_pentagon
        assert not report.variety.distributive
        assert not report.variety.modular
        assert report.dov.holds
        assert report.reproduced
