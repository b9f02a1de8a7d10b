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
from lattice_extensions.config import CheckerConfig
from lattice_extensions.core import MapMode, chain, map_check, n5
from lattice_extensions.suites import (
    SUITES,
    MapPool,
    convexity_case,
    corollary_case,
    distributive_law_case,
    ideal_retract_sweep,
    jsl_count_case,
    make_rng,
    neq_case,
    nondist_structure_case,
    reducibility_case,
    retract_instance,
    sea_level_sweep,
)
from tests import unittest


class MapPoolTest(unittest.TestCase):
    def test_same_seed_same_picks(self) -> None:
        """See if two pools with one seed pick the same maps"""
        P, M = chain(3), n5()
        first, second = MapPool(make_rng(11)), MapPool(make_rng(11))
        for k in range(5):
            a = first.sample(P, M, f"φ{k}")
            b = second.sample(P, M, f"φ{k}")
            assert a.as_dict() == b.as_dict()
            assert a.name == f"φ{k}"

    def test_pools_are_enumerated_once(self) -> None:
        """See if the maps between two lattices are kept per pair"""
        pool = MapPool(make_rng(0))
        P, M = chain(2), chain(3)
        maps = pool.all(P, M)
        assert pool.all(P, M) is maps
        assert len(maps) == 6
        assert all(map_check(m, MapMode.ISOTONE) for m in maps)
        assert len(pool.join_homs(P, M)) == 6

    def test_retract_instance(self) -> None:
        """See if random retract instances agree on the shared lattice"""
        pool = MapPool(make_rng(4))
        for _ in range(5):
            Ls, K, embeds, rhos, phis = retract_instance(pool)
            for k in K.elements:
                assert len({phi(emb(k)) for phi, emb in zip(phis, embeds)}) == 1
                assert all(rho(emb(k)) == k for rho, emb in zip(rhos, embeds))


@unittest.INFO
class CaseTest(unittest.TestCase):
    def test_sections(self) -> None:
        """See if every section from 2 to 7 has a suite"""
        assert sorted(SUITES) == [2, 3, 4, 5, 6, 7]
        config, pool = CheckerConfig(), MapPool(make_rng(0))
        for section, suite in SUITES.items():
            names = [name for name, _ in suite(config, pool)]
            assert len(names) == len(set(names)) >= 3, section

    def test_fixed_instances(self) -> None:
        """See if the single-instance cases hold"""
        for case in (
            corollary_case,
            neq_case,
            distributive_law_case,
            jsl_count_case,
            convexity_case,
            nondist_structure_case,
        ):
            result = case()
            assert result.holds, (case.__name__, result.witness)
        assert corollary_case().checked == 324
        assert jsl_count_case().witness == 8

    def test_small_sweeps(self) -> None:
        """See if the exhaustive sweeps pass on lattices of at most three elements"""
        config = CheckerConfig(catalog_max_size=3)
        for result in (sea_level_sweep(config), ideal_retract_sweep(config)):
            assert result.holds, result.witness
            assert result.checked > 0

    def test_reducibility_to_depth_three(self) -> None:
        """See if every term up to depth three has a well-shaped canonical form"""
        result = reducibility_case()
        assert result.holds, result.witness
        assert result.checked == 6561
