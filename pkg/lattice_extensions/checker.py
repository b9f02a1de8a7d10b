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
import dataclasses
import logging
import time
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from lattice_extensions.config import CheckerConfig
from lattice_extensions.errors import (
    CapExceeded,
    ConfigError,
    LatticeError,
    ParseError,
    VerificationFailed,
)
from lattice_extensions.formats import load_document, render_factorization
from lattice_extensions.handlers import handler_for, render_witness
from lattice_extensions.store import CatalogStore
from lattice_extensions.suites import SUITES, CaseResult, MapPool, make_rng
from lattice_extensions.types import (
    PROPERTIES,
    PropertyOutcome,
    Report,
    ReportEntry,
    Scenario,
)

logger = logging.getLogger(__name__)

_LIMITS = {
    "max_lattice_size": (1, None),
    "catalog_max_size": (1, 5),
    "fd_max_generators": (0, 6),
    "fb_max_generators": (0, 6),
    "downset_max_poset": (1, 24),
    "seed": (0, (1 << 64) - 1),
    "sample_maps": (1, None),
}


class ExtensionChecker:
    __version__ = "0.1.0"

    def __init__(self, config: CheckerConfig | None = None):
        self.config = config or CheckerConfig()
        logger.debug("checker configured with %s", self.config)

    @staticmethod
    def parse_config(config: dict[str, Any]) -> CheckerConfig:
        _config = CheckerConfig()
        for key, value in config.items():
            field = key.replace("-", "_")
            if field not in _LIMITS:
                msg = f"Unknown config option {key!r}"
                raise ConfigError(msg)
            if isinstance(value, bool) or not isinstance(value, int):
                msg = f"Config option {key!r} must be an integer"
                raise ConfigError(msg)
            low, high = _LIMITS[field]
            if value < low or (high is not None and value > high):
                msg = f"Config option {key!r} out of range: {value}"
                raise ConfigError(msg)
            setattr(_config, field, value)
        return _config

    def report(self, entries: list[ReportEntry], seed: int | None = None) -> Report:
        return Report(version=self.__version__, seed=seed, entries=entries)

    @staticmethod
    def write_report(report: Report, path: str | Path) -> None:
        Path(path).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")

    def _run_one(
        self, scenario: Scenario, doc: Any, dump_dir: Path | None
    ) -> ReportEntry:
        start = time.perf_counter()
        outcomes: list[PropertyOutcome] = []
        try:
            unknown = [p for p, _ in scenario.expectations() if p not in PROPERTIES]
            if unknown:
                msg = f"{scenario.name}: unknown properties {unknown}"
                raise ParseError(msg, scenario.line)
            outcome = handler_for(scenario, self.config, doc).run(scenario)
            for prop, wanted in scenario.expectations():
                result = outcome.decide(prop)
                if result is None:
                    msg = f"{scenario.construction} does not decide {prop}"
                    raise ParseError(msg, scenario.line)
                outcomes.append(
                    PropertyOutcome(
                        name=prop,
                        expected=wanted,
                        observed=bool(result.holds),
                        witness=render_witness(result.witness),
                    )
                )
            if dump_dir is not None and outcome.result is not None:
                dump_dir.mkdir(parents=True, exist_ok=True)
                path = dump_dir / f"{scenario.name}.lat"
                path.write_text(
                    render_factorization(outcome.result, scenario.name), encoding="utf-8"
                )
        except VerificationFailed as e:
            logger.warning("scenario %s failed its own check: %s", scenario.name, e)
            return ReportEntry(
                name=scenario.name,
                status="fail",
                outcomes=outcomes,
                error=str(e),
                seconds=time.perf_counter() - start,
            )
        except LatticeError as e:
            logger.warning("scenario %s: %s", scenario.name, e)
            return ReportEntry(
                name=scenario.name,
                status="error",
                outcomes=outcomes,
                error=str(e),
                seconds=time.perf_counter() - start,
            )
        except Exception as e:
            logger.exception("scenario %s raised", scenario.name)
            return ReportEntry(
                name=scenario.name,
                status="error",
                outcomes=outcomes,
                error=f"{type(e).__name__}: {e}",
                seconds=time.perf_counter() - start,
            )
        failed = [o.name for o in outcomes if not o.ok]
        if failed:
            logger.warning("scenario %s: unexpected %s", scenario.name, failed)
        else:
            logger.info("scenario %s passed", scenario.name)
        return ReportEntry(
            name=scenario.name,
            status="fail" if failed else "pass",
            outcomes=outcomes,
            verified=outcome.verified,
            seconds=time.perf_counter() - start,
        )

    def run_scenario(
        self, path: str | Path, dump_dir: str | Path | None = None
    ) -> list[ReportEntry]:
        """Entries for every scenario in ``path``; a file that does not load
        yields a single error entry named after the file."""
        try:
            doc = load_document(path)
        except LatticeError as e:
            logger.warning("%s: %s", path, e)
            return [ReportEntry(name=str(path), status="error", error=str(e))]
        if not doc.scenarios:
            msg = "no scenario blocks"
            return [ReportEntry(name=str(path), status="error", error=msg)]
        dump = Path(dump_dir) if dump_dir is not None else None
        return [self._run_one(scenario, doc, dump) for scenario in doc.scenarios]

    def run_scenarios(
        self, paths: Iterable[str | Path], dump_dir: str | Path | None = None
    ) -> Report:
        entries = []
        for path in paths:
            entries += self.run_scenario(path, dump_dir)
        return self.report(entries)

    def verify_section(
        self, section: int, seed: int | None = None, max_size: int | None = None
    ) -> Report:
        """Run one section's suite; reports differ between runs only in timings."""
        if section not in SUITES:
            msg = f"No suite for section {section}, expected one of {sorted(SUITES)}"
            raise ConfigError(msg)
        config = dataclasses.replace(
            self.config,
            seed=self.config.seed if seed is None else seed,
            catalog_max_size=max_size or self.config.catalog_max_size,
        )
        if config.catalog_max_size > 5:
            msg = f"catalog bound {config.catalog_max_size} exceeds 5"
            raise CapExceeded(msg, witness=config.catalog_max_size)
        pool = MapPool(make_rng(config.seed))
        entries = []
        for name, case in SUITES[section](config, pool):
            start = time.perf_counter()
            try:
                result = case()
            except VerificationFailed as e:
                result = CaseResult(False, (e.prop, render_witness(e.witness)))
            except Exception as e:
                if isinstance(e, LatticeError):
                    logger.warning("section %d case %s: %s", section, name, e)
                    error = str(e)
                else:
                    logger.exception("section %d case %s raised", section, name)
                    error = f"{type(e).__name__}: {e}"
                entries.append(
                    ReportEntry(
                        name=name,
                        status="error",
                        error=error,
                        seed=config.seed,
                        seconds=time.perf_counter() - start,
                    )
                )
                continue
            if not result.holds:
                logger.warning("section %d case %s failed: %r", section, name, result.witness)
            else:
                logger.info("section %d case %s: %d checks", section, name, result.checked)
            entries.append(
                ReportEntry(
                    name=name,
                    status="pass" if result.holds else "fail",
                    outcomes=[
                        PropertyOutcome(
                            name=name,
                            expected=True,
                            observed=bool(result.holds),
                            witness=render_witness(result.witness),
                        )
                    ],
                    verified=[f"checked:{result.checked}"],
                    seed=config.seed,
                    seconds=time.perf_counter() - start,
                )
            )
        return self.report(entries, config.seed)

    def catalog_generate(self, max_size: int, out_dir: str | Path) -> list[Path]:
        return CatalogStore(out_dir).ensure_catalog_exists(max_size)
