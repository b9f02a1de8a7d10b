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
"""``lattice-extensions`` command line.

    lattice-extensions verify --section 7 --seed 1 --report out.json
    lattice-extensions run scenarios/nondist.scn scenarios/neq.scn
    lattice-extensions catalog --max-size 5 --out catalog/
    lattice-extensions term leq --gens a,b,c "a ∧ (b ∨ c)" "(a ∧ b) ∨ c"

Exit codes: 0 when everything passes, 1 on a failed property, 2 on bad input.
"""
import logging
import os
import sys
from collections.abc import Sequence

from twisted.python import usage

from lattice_extensions.checker import ExtensionChecker
from lattice_extensions.errors import LatticeError
from lattice_extensions.free import fl_leq, parse_term
from lattice_extensions.types import Report

logger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "LATTICE_EXTENSIONS_LOG_LEVEL"


class VerifyOptions(usage.Options):
    optParameters = [
        ["section", "s", None, "Section whose suite to run (2-7).", int],
        ["seed", None, None, "Seed for the randomized sweeps.", int],
        ["max-size", None, None, "Largest catalog lattice to sweep over.", int],
        ["report", None, None, "Write the JSON report to this file."],
    ]

    def postOptions(self):
        if self["section"] is None:
            msg = "--section is required"
            raise usage.UsageError(msg)


class RunOptions(usage.Options):
    optParameters = [
        ["report", None, None, "Write the JSON report to this file."],
        ["dump", None, None, "Write each factorization's lattices and maps here."],
    ]

    def parseArgs(self, *scenarios):
        if not scenarios:
            msg = "at least one scenario file is required"
            raise usage.UsageError(msg)
        self["scenarios"] = scenarios


class CatalogOptions(usage.Options):
    optParameters = [
        ["max-size", None, 5, "Largest lattice in the catalog (at most 5).", int],
        ["out", "o", None, "Catalog directory."],
    ]

    def postOptions(self):
        if self["out"] is None:
            msg = "--out is required"
            raise usage.UsageError(msg)


class TermLeqOptions(usage.Options):
    optParameters = [
        ["gens", "g", "a,b,c", "Comma separated generator names."],
    ]

    def parseArgs(self, s, t):
        self["s"] = s
        self["t"] = t


class TermOptions(usage.Options):
    subCommands = [
        ["leq", None, TermLeqOptions, "Decide s <= t in the free lattice."],
    ]

    def postOptions(self):
        if self.subCommand is None:
            msg = "term needs a subcommand"
            raise usage.UsageError(msg)


class Options(usage.Options):
    optParameters = [
        ["log-level", None, None, f"Log level, defaults to ${LOG_LEVEL_ENV} or WARNING."],
        ["config", "c", None, "Comma separated key=value checker options."],
    ]
    subCommands = [
        ["verify", None, VerifyOptions, "Run a section's verification suite."],
        ["run", None, RunOptions, "Run scenario files."],
        ["catalog", None, CatalogOptions, "Write the small-lattice catalog."],
        ["term", None, TermOptions, "Free lattice term queries."],
    ]

    def postOptions(self):
        if self.subCommand is None:
            msg = "a subcommand is required"
            raise usage.UsageError(msg)

    def checker_config(self) -> dict[str, int]:
        config = {}
        for item in filter(None, (self["config"] or "").split(",")):
            key, sep, value = item.partition("=")
            if not sep or not value.strip().lstrip("-").isdigit():
                msg = f"bad config option {item!r}, expected key=integer"
                raise usage.UsageError(msg)
            config[key.strip()] = int(value)
        return config


def setup_logging(level: str | None) -> None:
    level = (level or os.environ.get(LOG_LEVEL_ENV) or "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def emit(report: Report, path: str | None) -> int:
    if path:
        ExtensionChecker.write_report(report, path)
    else:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return report.exit_code


def dispatch(options: Options) -> int:
    checker = ExtensionChecker(ExtensionChecker.parse_config(options.checker_config()))
    sub = options.subOptions
    match options.subCommand:
        case "verify":
            report = checker.verify_section(sub["section"], sub["seed"], sub["max-size"])
            return emit(report, sub["report"])
        case "run":
            report = checker.run_scenarios(sub["scenarios"], sub["dump"])
            return emit(report, sub["report"])
        case "catalog":
            for path in checker.catalog_generate(sub["max-size"], sub["out"]):
                sys.stdout.write(f"{path}\n")
            return 0
        case "term":
            leq = sub.subOptions
            gens = [g.strip() for g in leq["gens"].split(",") if g.strip()]
            s, t = parse_term(leq["s"], gens), parse_term(leq["t"], gens)
            sys.stdout.write(f"{str(fl_leq(s, t)).lower()}\n")
            return 0
    msg = f"unknown subcommand {options.subCommand!r}"
    raise usage.UsageError(msg)


def main(argv: Sequence[str] | None = None) -> int:
    options = Options()
    try:
        options.parseOptions(sys.argv[1:] if argv is None else list(argv))
    except usage.UsageError as e:
        sys.stderr.write(f"{options}\nerror: {e}\n")
        return 2
    setup_logging(options["log-level"])
    try:
        return dispatch(options)
    except usage.UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except LatticeError as e:
        logger.error("%s", e)
        sys.stderr.write(f"error: {e}\n")
        return 2
    except Exception as e:
        logger.exception("unexpected failure")
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
