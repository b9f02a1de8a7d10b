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
from lattice_extensions.constructions import (
    TWO,
    boolean_isotone_phi,
    boolean_phi_map,
    bound_equivalence_check,
    bounded_below_extension,
    check_dual_symmetry,
    check_neq_example,
    check_swap_symmetry,
    convexity_counterexample,
    corollary_fd_to_free,
    iterated_factorization,
    lemma_cvx_retr_check,
    lemma_extension,
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
    MapMode,
    MonotoneMap,
    bottom_of,
    chain,
    m3,
    map_check,
    n5,
    two_by_two,
)
from lattice_extensions.errors import (
    BoundsElement,
    CapExceeded,
    EmptyIndexSet,
    HypothesisViolated,
    NotDistributiveCodomain,
    NotIsotoneInput,
    NotJoinHom,
    NotLowerBound,
)
from lattice_extensions.free import FiniteJoinSemilattice, Gen, fb_from_term, fb_zero
from tests import unittest
from tests.test_utils import identity


def _into_n5() -> list[MonotoneMap]:
    L = chain(2)
    return [
        MonotoneMap(L, n5(), {0: "0", 1: "a"}, name="φ0"),
        MonotoneMap(L, n5(), {0: "b", 1: "1"}, name="φ1"),
    ]


def _retract_instance():
    """The 2-chain sitting at the bottom of the square and of the 3-chain."""
    K, S, C = chain(2), two_by_two(), chain(3)
    emb0 = MonotoneMap(K, S, {0: (0, 0), 1: (1, 0)}, name="emb0")
    rho0 = MonotoneMap(S, K, lambda t: t[0], name="rho0")
    emb1 = MonotoneMap(K, C, {0: 0, 1: 1}, name="emb1")
    rho1 = MonotoneMap(C, K, {0: 0, 1: 1, 2: 1}, name="rho1")
    phi0 = MonotoneMap(S, C, lambda t: t[0] + t[1], name="phi0")
    phi1 = identity(C, name="phi1")
    return [S, C], K, [emb0, emb1], [rho0, rho1], [phi0, phi1]


class LemmaTest(unittest.TestCase):
    def test_extension_reaches_e(self) -> None:
        """See if the extended map hits e and restricts to the original"""
        phi = _into_n5()[0]
        bar, emb, phi_bar = lemma_extension(phi, "b")
        assert len(bar) == 8
        assert phi_bar((0, 1, 0)) == "b"
        assert phi_bar((1, 0, 0)) == "0"
        assert phi_bar((1, 1, 1)) == "1"
        assert MapMode.EMBEDDING in emb.verified
        assert map_check(phi_bar, MapMode.ISOTONE)

    def test_rejects_non_isotone(self) -> None:
        """See if a reversing map is refused"""
        L = chain(2)
        phi = MonotoneMap(L, n5(), {0: "1", 1: "0"})
        self.assertRaises(NotIsotoneInput, lemma_extension, phi, "a")

    def test_sea_level(self) -> None:
        """See if the sea level map picks the meet below e and the join above"""
        C = chain(4)
        assert sea_level_psi(C, 1, [0, 1]) == 0
        assert sea_level_psi(C, 1, [0, 3, 2]) == 3
        self.assertRaises(EmptyIndexSet, sea_level_psi, C, 1, [])


class FactorizationTest(unittest.TestCase):
    def test_main_factorization(self) -> None:
        """See if two maps into N5 factor through a distributive product"""
        phis = _into_n5()
        result = main_factorization([chain(2), chain(2)], phis, "c")
        assert len(result.intermediate) == 64
        assert "composite_0" in result.verified
        assert "composite_1" in result.verified
        assert "intermediate:distributive" in result.verified
        assert result.injections[1](1)[1] == (1, 0, 1)
        self.assertRaises(EmptyIndexSet, main_factorization, [], [], "c")

    def test_maps_must_share_a_codomain(self) -> None:
        """See if maps into different lattices are refused before they are combined"""
        L, C = chain(2), chain(3)
        phi0, _ = _into_n5()
        other = identity(C, name="id3")
        with self.assertRaises(HypothesisViolated) as cm:
            main_factorization([L, C], [phi0, other], "b")
        assert cm.exception.which == "common_codomain"
        self.assertRaises(
            HypothesisViolated, two_lattice_symmetric, L, C, phi0, other, 0, 0
        )
        self.assertRaises(HypothesisViolated, iterated_factorization, [L, C], [phi0, other])

    def test_factorization_inputs_must_match(self) -> None:
        """See if a missing map, a foreign domain and a foreign e are refused"""
        L = chain(2)
        phi0, phi1 = _into_n5()
        self.assertRaises(HypothesisViolated, main_factorization, [L, L], [phi0], "c")
        self.assertRaises(
            HypothesisViolated, main_factorization, [L, chain(3)], [phi0, phi1], "c"
        )
        with self.assertRaises(HypothesisViolated) as cm:
            main_factorization([L, L], [phi0, phi1], "z")
        assert cm.exception.which == "e_in_codomain"

    def test_two_lattice_symmetric(self) -> None:
        """See if the symmetric construction commutes and has both symmetries"""
        L = chain(2)
        phi0, phi1 = _into_n5()
        result = two_lattice_symmetric(L, L, phi0, phi1, 0, 1)
        assert len(result.intermediate) == 16
        assert result.projection((1, 0, 1, 0)) == "a"
        assert result.projection((1, 0, 1, 1)) == "1"
        assert check_swap_symmetry(L, L, phi0, phi1, 0, 1)
        assert check_dual_symmetry(L, L, phi0, phi1, 0, 1)

    def test_iterated(self) -> None:
        """See if folding three maps keeps every composite"""
        L = chain(2)
        phis = [*_into_n5(), MonotoneMap(L, n5(), {0: "c", 1: "c"}, name="φ2")]
        result = iterated_factorization([L, L, L], phis)
        assert len(result.injections) == 3
        assert "composite_2" in result.verified
        self.assertRaises(EmptyIndexSet, iterated_factorization, [], [])

    def test_prod_times_free(self) -> None:
        """See if the FD construction needs a distributive codomain"""
        L = chain(2)
        ident = [identity(L, name=f"id{i}") for i in range(2)]
        result = prod_times_free([L, L], ident, L)
        assert len(result.intermediate) == 16
        self.assertRaises(
            NotDistributiveCodomain, prod_times_free, [L], _into_n5()[:1], n5()
        )
        self.assertRaises(CapExceeded, prod_times_free, [L] * 3, ident * 2, L, cap=2)

    def test_neq_example(self) -> None:
        """See if the FD projection fails to preserve joins on the known pair"""
        report = check_neq_example()
        assert report.reproduced
        assert report.joinand_images == (0, 0)
        assert report.join_image == 1

    def test_median(self) -> None:
        """See if the median has three two-element meets"""
        median = median_element()
        assert len(median.antichain) == 3
        assert all(len(s) == 2 for s in median.antichain)

    def test_corollary(self) -> None:
        """See if FD(3) maps isotonically into the free lattice fixing generators"""
        result = corollary_fd_to_free()
        assert result.fixes_generators
        assert result.pairs_checked == 18 * 18
        assert result.composite.codomain.generator("b") == Gen("b")
        self.assert_holds(result.generator_check(), "generators fixed")
        self.assert_holds(map_check(result.composite, MapMode.ISOTONE), "isotone")


class RetractTest(unittest.TestCase):
    def test_retract_factorization(self) -> None:
        """See if the square and the 3-chain glue along their bottom 2-chain"""
        Ls, K, embeds, rhos, phis = _retract_instance()
        result = retract_factorization(Ls, K, embeds, rhos, phis)
        assert "all_but_one" in result.verified
        assert len(result.intermediate) == 6
        self.assert_holds(retract_containment_check(result, embeds), "containment")

    def test_disagreeing_maps(self) -> None:
        """See if maps that differ on the shared retract are refused"""
        Ls, K, embeds, rhos, phis = _retract_instance()
        phis[1] = MonotoneMap(Ls[1], Ls[1], {0: 0, 1: 2, 2: 2}, name="phi1")
        with self.assertRaises(HypothesisViolated) as cm:
            retract_factorization(Ls, K, embeds, rhos, phis)
        assert cm.exception.which == "agreement"

    def test_convex_retract_lemma(self) -> None:
        """See if a convex retract of the square satisfies the lemma"""
        S = two_by_two()
        K = [(0, 0), (1, 0)]
        rho = MonotoneMap(S, S, lambda t: (t[0], 0), name="ρ")
        self.assert_holds(lemma_cvx_retr_check(S, K, rho), "convex retract")
        not_convex = [(0, 0), (1, 1)]
        self.assertRaises(
            HypothesisViolated,
            lemma_cvx_retr_check,
            S,
            not_convex,
            MonotoneMap(S, S, lambda t: (t[0] & t[1],) * 2),
        )

    def test_convexity_counterexample(self) -> None:
        """See if a convex retract of two parts stops being convex in their union"""
        report = convexity_counterexample()
        assert report.size == 16
        assert report.convex_in_parts == [True, True]
        assert report.retract_in_parts == [True, True]
        assert not report.convex_in_union
        assert report.reproduced


class SemilatticeTest(unittest.TestCase):
    def test_free_product_extension(self) -> None:
        """See if formal joins map to joins of images"""
        S = FiniteJoinSemilattice.from_lattice(chain(2))
        C = chain(3)
        phis = [
            MonotoneMap(S, C, {0: 0, 1: 1}, name="φ0"),
            MonotoneMap(S, C, {0: 1, 1: 2}, name="φ1"),
        ]
        ext = semilat_fp_extension([S, S], phis)
        assert ext((1, None)) == 1
        assert ext((None, 0)) == 1
        assert ext((1, 1)) == 2

    def test_bounded_below(self) -> None:
        """See if join homomorphisms above e factor with a join-preserving projection"""
        L, C = chain(2), chain(3)
        phis = [
            MonotoneMap(L, C, {0: 1, 1: 2}, name="φ0"),
            MonotoneMap(L, C, {0: 1, 1: 1}, name="φ1"),
        ]
        result = bounded_below_extension([L, L], phis, 0)
        assert "projection:join_hom" in result.verified
        assert result.projection((bottom_of(0), bottom_of(1))) == 0
        self.assertRaises(NotLowerBound, bounded_below_extension, [L, L], phis, 2)

    def test_bounded_below_needs_join_homs(self) -> None:
        """See if a meet-shaped map out of the square is refused"""
        S = two_by_two()
        phi = MonotoneMap(S, TWO, lambda t: t[0] & t[1], name="∧")
        self.assertRaises(NotJoinHom, bounded_below_extension, [S], [phi], 0)


class BooleanBoundsTest(unittest.TestCase):
    def test_phi_values(self) -> None:
        """See if generators go to their elements and bounds are refused"""
        phi = boolean_phi_map(n5(), ["a", "b"])
        assert len(phi.domain) == 14
        values = set(phi.as_dict().values())
        assert {"a", "b"} <= values
        assert map_check(phi, MapMode.ISOTONE)
        zero = fb_zero(("g0", "g1"))
        self.assertRaises(BoundsElement, boolean_isotone_phi, n5(), ["a", "b"], zero)

    def test_phi_takes_one_element_per_generator(self) -> None:
        """See if repeated elements are allowed and a missing one is refused"""
        g0 = fb_from_term(Gen("g0"), ("g0", "g1"))
        assert boolean_isotone_phi(n5(), ["a", "a"], g0) == "a"
        with self.assertRaises(HypothesisViolated) as cm:
            boolean_isotone_phi(n5(), ["a"], g0)
        assert cm.exception.which == "one_element_per_generator"

    def test_bound_equivalence(self) -> None:
        """See if the image of φ has the same bounds as X"""
        assert bound_equivalence_check(["a", "b"], n5())
        assert bound_equivalence_check(["a", "c"], n5())
        assert bound_equivalence_check(["a", "b", "c"], m3())
        self.assertRaises(CapExceeded, bound_equivalence_check, [0, 1, 2, 3], chain(4))
        self.assertRaises(CapExceeded, bound_equivalence_check, ["a", "b", "c"], m3(), 2)

    def test_complete_lands_on_supremum(self) -> None:
        """See if the restored top lands on the supremum"""
        assert theorem_complete_probe(m3(), ["a", "b"]) == "1"
        assert theorem_complete_probe(n5(), ["a", "c"]) == "c"
        assert theorem_complete_probe(chain(4), [1, 2]) == 2
