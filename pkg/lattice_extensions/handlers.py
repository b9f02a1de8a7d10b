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
"""Scenario handlers: one class per construction a scenario may name.

A handler resolves the scenario's inputs against the loaded document, runs
its construction and reports every property it can decide. The checker then
compares those against the scenario's ``expect`` line.
"""
import logging
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, ClassVar

from lattice_extensions.config import CheckerConfig
from lattice_extensions.constructions import (
    FactorizationResult,
    bound_equivalence_check,
    bounded_below_extension,
    check_dual_symmetry,
    check_neq_example,
    check_swap_symmetry,
    corollary_fd_to_free,
    iterated_factorization,
    lemma_extension,
    main_factorization,
    prod_times_free,
    retract_factorization,
    semilat_fp_extension,
    theorem_complete_probe,
    two_lattice_symmetric,
)
from lattice_extensions.core import (
    PASSED,
    CheckResult,
    FiniteLattice,
    Label,
    MapMode,
    map_check,
    variety_check,
)
from lattice_extensions.downsets import nondist_instance, theorem_semilat_factorization
from lattice_extensions.errors import ParseError, UnknownConstruction, VerificationFailed
from lattice_extensions.formats import Document, render_label, resolve_label
from lattice_extensions.free import FiniteJoinSemilattice, free_product_jsl
from lattice_extensions.types import Scenario

logger = logging.getLogger(__name__)


def render_witness(witness: Any) -> str | None:
    if witness is None:
        return None
    if isinstance(witness, list):
        witness = tuple(witness)
    return render_label(witness)


@dataclass
class Outcome:
    properties: dict[str, CheckResult | Callable[[], CheckResult]]
    verified: list[str] = field(default_factory=list)
    result: FactorizationResult | None = None

    def decide(self, prop: str) -> CheckResult | None:
        """The property's result, computed on first request; ``None`` if unknown."""
        found = self.properties.get(prop)
        if callable(found):
            found = self.properties[prop] = found()
        return found


def distributive(L: FiniteLattice) -> CheckResult:
    report = variety_check(L)
    return CheckResult(
        report.distributive, report.pentagon_witness or report.diamond_witness
    )


def contains_n5(L: FiniteLattice) -> CheckResult:
    report = variety_check(L)
    return CheckResult(report.pentagon_witness is not None, report.pentagon_witness)


def _all(results: list[CheckResult]) -> CheckResult:
    for i, result in enumerate(results):
        if not result:
            return CheckResult(False, (i, result.witness))
    return PASSED


def factorization_properties(result: FactorizationResult) -> Outcome:
    def composite() -> CheckResult:
        return _all(
            [
                inj.then(result.projection).agrees_with(phi)
                for inj, phi in zip(result.injections, result.maps, strict=True)
            ]
        )

    return Outcome(
        {
            "isotone": lambda: map_check(result.projection, MapMode.ISOTONE),
            "join_hom": lambda: map_check(result.projection, MapMode.JOIN_HOM),
            "lattice_hom": lambda: _all(
                [map_check(inj, MapMode.LATTICE_HOM) for inj in result.injections]
            ),
            "composite_eq": composite,
            "distributive": lambda: distributive(result.intermediate),
            "contains_n5": lambda: contains_n5(result.intermediate),
        },
        list(result.verified),
        result,
    )


class ConstructionHandler(ABC):
    name: ClassVar[str]

    def __init__(self, config: CheckerConfig, doc: Document):
        self.config = config
        self.doc = doc

    @abstractmethod
    def run(self, scenario: Scenario) -> Outcome: ...

    def refs(self, scenario: Scenario, role: str, count: int | None = None) -> list[str]:
        refs = scenario.inputs.get(role, [])
        if count is not None and len(refs) != count:
            msg = f"{scenario.name}: {self.name} needs {count} '{role}' input(s), got {len(refs)}"
            raise ParseError(msg, scenario.line)
        if count is None and not refs:
            msg = f"{scenario.name}: {self.name} needs '{role}' inputs"
            raise ParseError(msg, scenario.line)
        return refs

    def maps(self, scenario: Scenario, role: str = "maps", count: int | None = None):
        return [self.doc.map(r, scenario.line) for r in self.refs(scenario, role, count)]

    def lattice(self, scenario: Scenario, role: str = "lattice") -> FiniteLattice:
        (ref,) = self.refs(scenario, role, 1)
        return self.doc.lattice(ref, scenario.line)

    def elements(
        self, scenario: Scenario, L: Any, role: str = "element", count: int | None = None
    ) -> list[Label]:
        return [
            resolve_label(L, token, scenario.line)
            for token in self.refs(scenario, role, count)
        ]


class MainFactorizationHandler(ConstructionHandler):
    name = "main_factorization"

    def run(self, scenario: Scenario) -> Outcome:
        phis = self.maps(scenario)
        (e,) = self.elements(scenario, phis[0].codomain, count=1)
        result = main_factorization([phi.domain for phi in phis], phis, e)
        return factorization_properties(result)


class LemmaExtensionHandler(ConstructionHandler):
    name = "lemma_extension"

    def run(self, scenario: Scenario) -> Outcome:
        (phi,) = self.maps(scenario, count=1)
        (e,) = self.elements(scenario, phi.codomain, count=1)
        bar, emb, phi_bar = lemma_extension(phi, e)
        result = FactorizationResult(bar, [emb], phi_bar, [phi])
        return factorization_properties(result)


class TwoLatticeHandler(ConstructionHandler):
    name = "two_lattice_symmetric"

    def run(self, scenario: Scenario) -> Outcome:
        phi0, phi1 = self.maps(scenario, count=2)
        e0, e1 = self.refs(scenario, "element", 2)
        args = (
            phi0.domain,
            phi1.domain,
            phi0,
            phi1,
            resolve_label(phi0.domain, e0, scenario.line),
            resolve_label(phi1.domain, e1, scenario.line),
        )
        outcome = factorization_properties(two_lattice_symmetric(*args))
        for which, check in (("swap", check_swap_symmetry), ("dual", check_dual_symmetry)):
            result = check(*args)
            if not result:
                raise VerificationFailed(f"{which}_symmetry", result.witness)
            outcome.verified.append(f"{which}_symmetry")
        return outcome


class IteratedFactorizationHandler(ConstructionHandler):
    name = "iterated_factorization"

    def run(self, scenario: Scenario) -> Outcome:
        phis = self.maps(scenario)
        result = iterated_factorization([phi.domain for phi in phis], phis)
        return factorization_properties(result)


class ProdTimesFreeHandler(ConstructionHandler):
    name = "prod_times_free"

    def run(self, scenario: Scenario) -> Outcome:
        phis = self.maps(scenario)
        result = prod_times_free(
            [phi.domain for phi in phis],
            phis,
            phis[0].codomain,
            cap=self.config.fd_max_generators,
        )
        return factorization_properties(result)


class RetractFactorizationHandler(ConstructionHandler):
    name = "retract_factorization"

    def run(self, scenario: Scenario) -> Outcome:
        K = self.lattice(scenario, "retract")
        phis = self.maps(scenario)
        embeds = self.maps(scenario, "embeds", len(phis))
        rhos = self.maps(scenario, "retractions", len(phis))
        result = retract_factorization(
            [phi.domain for phi in phis], K, embeds, rhos, phis
        )
        return factorization_properties(result)


class SemilatticeFreeProductHandler(ConstructionHandler):
    name = "semilat_fp_extension"

    def run(self, scenario: Scenario) -> Outcome:
        phis = self.maps(scenario)
        Ss = [FiniteJoinSemilattice.from_lattice(phi.domain) for phi in phis]
        extension = semilat_fp_extension(Ss, phis)
        _, embeddings = free_product_jsl(Ss)
        return Outcome(
            {
                "isotone": lambda: map_check(extension, MapMode.ISOTONE),
                "composite_eq": lambda: _all(
                    [
                        emb.then(extension).agrees_with(phi)
                        for emb, phi in zip(embeddings, phis, strict=True)
                    ]
                ),
            },
            ["extension:isotone", "restrictions"],
        )


class BoundedBelowHandler(ConstructionHandler):
    name = "bounded_below_extension"

    def run(self, scenario: Scenario) -> Outcome:
        phis = self.maps(scenario)
        (e,) = self.elements(scenario, phis[0].codomain, count=1)
        result = bounded_below_extension([phi.domain for phi in phis], phis, e)
        return factorization_properties(result)


class SemilatticeFactorizationHandler(ConstructionHandler):
    name = "theorem_semilat_factorization"

    def run(self, scenario: Scenario) -> Outcome:
        phis = self.maps(scenario)
        result = theorem_semilat_factorization(
            [phi.domain for phi in phis], phis, self.config.downset_max_poset
        )
        return factorization_properties(result)


class NondistHandler(ConstructionHandler):
    name = "nondist_instance"

    def run(self, scenario: Scenario) -> Outcome:
        report = nondist_instance()
        if not report.reproduced:
            raise VerificationFailed("nondist_instance", (str(report.lhs), str(report.rhs)))
        pentagon = tuple(str(F) for F in report.pentagon)
        outcome = factorization_properties(report.factorization)
        outcome.properties["distributive"] = CheckResult(
            report.variety.distributive, (str(report.lhs), str(report.rhs))
        )
        outcome.properties["contains_n5"] = CheckResult(report.pentagon_found, pentagon)
        outcome.verified[:0] = ["nondist", "pentagon", "dov_membership"]
        return outcome


class NeqHandler(ConstructionHandler):
    name = "check_neq_example"

    def run(self, scenario: Scenario) -> Outcome:
        report = check_neq_example()
        outcome = factorization_properties(report.factorization)
        outcome.properties["join_hom"] = report.join_hom
        if report.reproduced:
            outcome.verified.append("neq")
        return outcome


class BoundEquivalenceHandler(ConstructionHandler):
    name = "bound_equivalence_check"

    def run(self, scenario: Scenario) -> Outcome:
        M = self.lattice(scenario)
        X = self.elements(scenario, M, "elements")
        cap = self.config.fb_max_generators
        return Outcome({"bounds_eq": bound_equivalence_check(X, M, cap)})


class CompleteSupremumHandler(ConstructionHandler):
    name = "theorem_complete_probe"

    def run(self, scenario: Scenario) -> Outcome:
        M = self.lattice(scenario)
        X = self.elements(scenario, M, "elements")
        try:
            image = theorem_complete_probe(M, X)
        except VerificationFailed as e:
            return Outcome({"sup_eq": CheckResult(False, e.witness)})
        return Outcome({"sup_eq": CheckResult(True, image)})


class CorollaryHandler(ConstructionHandler):
    name = "corollary_fd_to_free"

    def run(self, scenario: Scenario) -> Outcome:
        gens = scenario.inputs.get("generators") or ["a", "b", "c"]
        result = corollary_fd_to_free(gens)
        return Outcome(
            {
                "isotone": lambda: map_check(result.composite, MapMode.ISOTONE),
                "composite_eq": result.generator_check,
            },
            [*result.factorization.verified, f"pairs:{result.pairs_checked}"],
        )


class InspectHandler(ConstructionHandler):
    """No construction: decide properties of a lattice or of maps as given."""

    name = "inspect"

    def run(self, scenario: Scenario) -> Outcome:
        properties: dict[str, Any] = {}
        if "lattice" in scenario.inputs:
            L = self.lattice(scenario)
            properties["distributive"] = lambda: distributive(L)
            properties["contains_n5"] = lambda: contains_n5(L)
        if "maps" in scenario.inputs:
            maps = self.maps(scenario)
            for mode in (MapMode.ISOTONE, MapMode.JOIN_HOM, MapMode.LATTICE_HOM):
                properties[str(mode)] = lambda mode=mode: _all(
                    [map_check(m, mode) for m in maps]
                )
        return Outcome(properties)


HANDLERS: dict[str, type[ConstructionHandler]] = {
    cls.name: cls
    for cls in (
        MainFactorizationHandler,
        LemmaExtensionHandler,
        TwoLatticeHandler,
        IteratedFactorizationHandler,
        ProdTimesFreeHandler,
        RetractFactorizationHandler,
        SemilatticeFreeProductHandler,
        BoundedBelowHandler,
        SemilatticeFactorizationHandler,
        NondistHandler,
        NeqHandler,
        BoundEquivalenceHandler,
        CompleteSupremumHandler,
        CorollaryHandler,
        InspectHandler,
    )
}


def handler_for(
    scenario: Scenario, config: CheckerConfig, doc: Document
) -> ConstructionHandler:
    try:
        cls = HANDLERS[scenario.construction]
    except KeyError:
        msg = f"unknown construction {scenario.construction!r}"
        raise UnknownConstruction(msg, witness=scenario.construction) from None
    logger.debug("scenario %s uses %s", scenario.name, cls.__name__)
    return cls(config, doc)
