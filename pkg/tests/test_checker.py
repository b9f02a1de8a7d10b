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
import json
from pathlib import Path

from lattice_extensions import checker as checker_module
from lattice_extensions import handlers
from lattice_extensions.config import CheckerConfig
from lattice_extensions.errors import CapExceeded, ConfigError
from lattice_extensions.formats import load_document
from tests import get_checker, unittest
from tests.test_utils import MIXED_CODOMAINS, SCENARIOS


class ConfigTest(unittest.TestCase):
    def test_defaults(self) -> None:
        """See if an empty config gives the defaults"""
        assert get_checker().config == CheckerConfig()

    def test_dashed_keys(self) -> None:
        """See if dashed option names map onto fields"""
        config = get_checker({"sample-maps": 10, "seed": 7}).config
        assert config.sample_maps == 10
        assert config.seed == 7

    def test_bad_options(self) -> None:
        """See if unknown, non-integer and out of range options are refused"""
        for bad in (
            {"colour": 1},
            {"seed": "7"},
            {"seed": True},
            {"seed": -1},
            {"catalog_max_size": 6},
            {"downset-max-poset": 0},
        ):
            self.assertRaises(ConfigError, get_checker, bad)


class ScenarioTest(unittest.TestCase):
    def write(self, text: str) -> Path:
        path = Path(self.mktemp())
        path.write_text(text, encoding="utf-8")
        return path

    def test_nondist(self) -> None:
        """See if the shipped nondistributive scenarios pass"""
        report = get_checker().run_scenarios([SCENARIOS / "nondist.scn"])
        assert [e.status for e in report.entries] == ["pass", "pass"]
        assert all(o.ok for e in report.entries for o in e.outcomes)
        assert "dov_membership" in report.entries[0].verified
        assert report.exit_code == 0

    def test_neq(self) -> None:
        """See if expecting a join homomorphism from the FD construction fails"""
        report = get_checker().run_scenarios([SCENARIOS / "neq.scn"])
        first, second = report.entries
        assert first.status == "pass"
        assert second.status == "fail"
        (join_hom,) = [o for o in second.outcomes if o.name == "join_hom"]
        assert join_hom.expected and not join_hom.observed
        assert join_hom.witness is not None
        assert report.exit_code == 1

    def test_main_and_retract(self) -> None:
        """See if the remaining shipped scenarios pass"""
        report = get_checker().run_scenarios(
            [SCENARIOS / "main.scn", SCENARIOS / "retract.scn"]
        )
        failing = [(e.name, e.error) for e in report.entries if e.status != "pass"]
        assert not failing, failing
        assert len(report.entries) == 8

    def test_malformed(self) -> None:
        """See if a file that does not parse is a single error entry"""
        path = self.write("lattice V\nelements 0 1\ncover 0 1\n")
        report = get_checker().run_scenarios([path])
        (entry,) = report.entries
        assert entry.name == str(path)
        assert entry.status == "error"
        assert "line 3" in entry.error
        assert report.exit_code == 2

    def test_no_scenarios(self) -> None:
        """See if a document without scenarios is an error"""
        path = self.write("lattice V\nelements 0\n")
        (entry,) = get_checker().run_scenario(path)
        assert entry.status == "error"

    def test_bad_scenarios(self) -> None:
        """See if unknown constructions and undecidable properties are errors"""
        path = self.write(
            "scenario unknown-property\n"
            "construction inspect\n"
            "input lattice N5\n"
            "expect pretty\n"
            "\n"
            "scenario undecided\n"
            "construction inspect\n"
            "input lattice N5\n"
            "expect isotone\n"
            "\n"
            "scenario no-such-construction\n"
            "construction frobnicate\n"
            "expect isotone\n"
            "\n"
            "scenario fine\n"
            "construction inspect\n"
            "input lattice M3\n"
            "expect !distributive !contains_n5\n"
        )
        entries = get_checker().run_scenario(path)
        assert [e.status for e in entries] == ["error", "error", "error", "pass"]
        assert "does not decide isotone" in entries[1].error

    def test_dump(self) -> None:
        """See if factorizations are written out as documents"""
        dump = Path(self.mktemp())
        get_checker().run_scenarios([SCENARIOS / "retract.scn"], dump)
        doc = load_document(dump / "retract-square-chain.lat")
        assert "retract-square-chain-projection" in doc.maps
        assert len(doc.lattices["retract-square-chain-intermediate"]) == 6

    def test_mixed_codomains(self) -> None:
        """See if maps into different lattices give an error entry"""
        report = get_checker().run_scenarios([self.write(MIXED_CODOMAINS)])
        (entry,) = report.entries
        assert entry.status == "error"
        assert "common_codomain" in entry.error
        assert report.exit_code == 2

    def test_unexpected_exception(self) -> None:
        """See if any exception inside a construction becomes an error entry"""

        def broken(_handler, scenario):
            msg = "table lookup"
            raise RuntimeError(msg)

        self.patch(handlers.InspectHandler, "run", broken)
        path = self.write(
            "scenario s\nconstruction inspect\ninput lattice N5\nexpect distributive\n"
        )
        report = get_checker().run_scenarios([path])
        (entry,) = report.entries
        assert entry.status == "error"
        assert entry.error == "RuntimeError: table lookup"
        assert report.exit_code == 2

    def test_properties_are_computed(self) -> None:
        """See if an expectation against a computed property fails with the observation"""
        path = self.write(
            "scenario neq-not-isotone\n"
            "construction check_neq_example\n"
            "expect !isotone composite_eq\n"
            "\n"
            "scenario corollary\n"
            "construction corollary_fd_to_free\n"
            "expect isotone composite_eq\n"
            "\n"
            "map f : chain:2 -> N5\n0 -> 0\n1 -> a\n"
            "\n"
            "map g : chain:2 -> N5\n0 -> b\n1 -> 1\n"
            "\n"
            "scenario free-product\n"
            "construction semilat_fp_extension\n"
            "input maps f g\n"
            "expect isotone composite_eq\n"
        )
        neq, corollary, free_product = get_checker().run_scenario(path)
        assert neq.status == "fail"
        (isotone,) = [o for o in neq.outcomes if o.name == "isotone"]
        assert isotone.observed and not isotone.expected
        assert "neq" in neq.verified
        assert corollary.status == "pass", corollary.outcomes
        assert free_product.status == "pass", free_product.outcomes

    def test_bounds_cap_from_config(self) -> None:
        """See if the free Boolean generator cap comes from the configuration"""
        path = self.write(
            "scenario bounds\n"
            "construction bound_equivalence_check\n"
            "input lattice M3\n"
            "input elements a b c\n"
            "expect bounds_eq\n"
        )
        (entry,) = get_checker({"fb_max_generators": 2}).run_scenario(path)
        assert entry.status == "error"
        (entry,) = get_checker().run_scenario(path)
        assert entry.status == "pass", entry.outcomes

    def test_write_report(self) -> None:
        """See if the report is written as JSON"""
        checker = get_checker()
        report = checker.run_scenarios([SCENARIOS / "nondist.scn"])
        path = Path(self.mktemp())
        checker.write_report(report, path)
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["tool"] == "lattice-extensions"
        assert data["version"] == checker.__version__
        assert len(data["entries"]) == 2


class SectionTest(unittest.TestCase):
    def test_bad_sections(self) -> None:
        """See if unknown sections and oversized catalogs are refused"""
        checker = get_checker()
        self.assertRaises(ConfigError, checker.verify_section, 1)
        self.assertRaises(CapExceeded, checker.verify_section, 2, max_size=6)

    def test_bounds_section(self) -> None:
        """See if the bounds suite passes on small lattices and repeats exactly"""
        checker = get_checker({"sample-maps": 20})
        report = checker.verify_section(4, seed=3, max_size=3)
        assert [e.name for e in report.entries] == [
            "bound_equivalence",
            "complement_join_constant",
            "theorem_complete_probe",
        ]
        assert all(e.status == "pass" for e in report.entries), report.entries
        assert report.seed == 3
        assert {e.seed for e in report.entries} == {3}
        again = checker.verify_section(4, seed=3, max_size=3)
        assert [e.verified for e in again.entries] == [
            e.verified for e in report.entries
        ]

    def test_downset_section(self) -> None:
        """See if the downset suite passes with a small sample"""
        report = get_checker({"sample-maps": 25}).verify_section(7, seed=1, max_size=3)
        assert report.exit_code == 0, report.entries

    def test_unexpected_exception_in_a_case(self) -> None:
        """See if a case raising outside the library is an error entry"""

        def boom():
            msg = "case broke"
            raise RuntimeError(msg)

        self.patch(checker_module, "SUITES", {2: lambda config, pool: [("boom", boom)]})
        report = get_checker().verify_section(2, seed=0, max_size=2)
        (entry,) = report.entries
        assert entry.status == "error"
        assert entry.error == "RuntimeError: case broke"
        assert report.exit_code == 2
