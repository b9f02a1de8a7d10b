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
from typing import Any


class LatticeError(Exception):
    """Base class of every error raised by this package.

    Errors that point at a concrete counterexample keep it in ``witness``.
    """

    def __init__(self, msg: str, witness: Any = None):
        super().__init__(msg)
        self.witness = witness


class ConfigError(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class EmptyFactorList(LatticeError):
    pass


class EmptySeed(LatticeError):
    pass


class EmptyList(LatticeError):
    pass


class EmptyIndexSet(LatticeError):
    pass


class CapExceeded(LatticeError):
    pass


class SizeCapExceeded(CapExceeded):
    pass


class DimensionOutOfRange(LatticeError):
    pass


class NotIsotoneInput(LatticeError):
    pass


class NotASubposet(LatticeError):
    pass


class NotAnEmbedding(LatticeError):
    pass


class LabelClash(LatticeError):
    pass


class NotBoolean(LatticeError):
    pass


class TooSmall(LatticeError):
    pass


class ConstancyViolated(LatticeError):
    pass


class TermSyntaxError(LatticeError):
    def __init__(self, msg: str, position: int):
        super().__init__(msg, witness=position)
        self.position = position


class UnknownGenerator(LatticeError):
    pass


class NotDistributiveCodomain(LatticeError):
    pass


class HypothesisViolated(LatticeError):
    def __init__(self, which: str, witness: Any = None):
        super().__init__(f"hypothesis violated: {which}", witness=witness)
        self.which = which


class NotJoinHom(LatticeError):
    pass


class NotLowerBound(LatticeError):
    pass


class BoundsElement(LatticeError):
    pass


class VerificationFailed(LatticeError):
    def __init__(self, prop: str, witness: Any = None):
        super().__init__(f"postcondition {prop} failed", witness=witness)
        self.prop = prop


class ParseError(LatticeError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


class UnknownConstruction(LatticeError):
    pass
