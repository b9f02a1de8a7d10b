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
from typing import Literal

from pydantic import BaseModel, ConfigDict

PROPERTIES = (
    "isotone",
    "join_hom",
    "lattice_hom",
    "composite_eq",
    "distributive",
    "contains_n5",
    "bounds_eq",
    "sup_eq",
)

Status = Literal["pass", "fail", "error"]


class Scenario(BaseModel):
    model_config = ConfigDict(
        strict=True, frozen=True, extra="ignore", allow_inf_nan=False
    )

    name: str
    construction: str
    inputs: dict[str, list[str]] = {}
    expect: list[str] = []
    line: int | None = None

    def expectations(self) -> list[tuple[str, bool]]:
        """``!prop`` asks for ``prop`` to fail."""
        return [(p.removeprefix("!"), not p.startswith("!")) for p in self.expect]


class PropertyOutcome(BaseModel):
    model_config = ConfigDict(
        strict=True, frozen=True, extra="ignore", allow_inf_nan=False
    )

    name: str
    expected: bool
    observed: bool
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


class ReportEntry(BaseModel):
    model_config = ConfigDict(
        strict=True, frozen=True, extra="ignore", allow_inf_nan=False
    )

    name: str
    status: Status
    outcomes: list[PropertyOutcome] = []
    verified: list[str] = []
    error: str | None = None
    seed: int | None = None
    seconds: float = 0.0


class Report(BaseModel):
    model_config = ConfigDict(
        strict=True, frozen=True, extra="ignore", allow_inf_nan=False
    )

    tool: str = "lattice-extensions"
    version: str
    seed: int | None = None
    entries: list[ReportEntry] = []

    @property
    def exit_code(self) -> int:
        statuses = {entry.status for entry in self.entries}
        if "error" in statuses:
            return 2
        return 1 if "fail" in statuses else 0
