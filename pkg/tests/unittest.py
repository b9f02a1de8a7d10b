# Copyright 2014-2016 OpenMarket Ltd
# Copyright 2018 New Vector
# Copyright 2019 Matrix.org Federation C.I.C
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import functools
import logging
from collections.abc import Callable
from typing import TypeVar

from twisted.trial import unittest

from lattice_extensions.core import CheckResult, FiniteLattice, isomorphism
from tests.test_utils.logging_setup import setup_logging

setup_logging()

TV = TypeVar("TV")
R = TypeVar("R")


def around(target: object) -> Callable[[Callable[..., R]], None]:
    """A CLOS-style 'around' modifier, which wraps the original method of the
    given instance with another piece of code."""

    def _around(code: Callable[..., R]) -> None:
        name = code.__name__
        orig = getattr(target, name)

        @functools.wraps(orig)
        def new(*args, **kwargs) -> R:
            return code(orig, *args, **kwargs)

        setattr(target, name, new)

    return _around


class TestCase(unittest.TestCase):
    """A subclass of twisted.trial's TestCase which looks for 'loglevel'
    attributes on both itself and its individual test methods, to override the
    root logger's logging level while that test (case|method) runs."""

    def __init__(self, methodName: str):
        super().__init__(methodName)

        method = getattr(self, methodName)

        level = getattr(method, "loglevel", getattr(self, "loglevel", None))

        @around(self)
        def setUp(orig: Callable[[], R]) -> R:
            old_level = logging.getLogger().level
            if level is not None and old_level != level:

                @around(self)
                def tearDown(orig: Callable[[], R]) -> R:
                    ret = orig()
                    logging.getLogger().setLevel(old_level)
                    return ret

                logging.getLogger().setLevel(level)

            return orig()

    def assert_holds(self, result: CheckResult, what: str = "check") -> None:
        """Asserts a check passed, naming its witness otherwise."""
        assert result, f"{what} failed at {result.witness!r}"

    def assert_isomorphic(self, A: FiniteLattice, B: FiniteLattice) -> dict:
        """Asserts two lattices are isomorphic and returns the isomorphism.

        Args:
            A: The lattice under test.
            B: The expected shape.
        """
        found = isomorphism(A, B)
        assert found is not None, f"{A!r} is not isomorphic to {B!r}"
        return found


def INFO(target: TV) -> TV:
    """A decorator to set the .loglevel attribute to logging.INFO.
    Can apply to either a TestCase or an individual test method."""
    target.loglevel = logging.INFO  # type: ignore[attr-defined]
    return target
