# Copyright 2019-2021 The Matrix.org Foundation C.I.C.
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

"""
Utilities for running the unit tests
"""
from pathlib import Path

from lattice_extensions.core import FiniteLattice, MonotoneMap

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"

# two maps into different lattices fed to one factorization
MIXED_CODOMAINS = """\
map phi : chain:2 -> N5
0 -> 0
1 -> a

map psi : chain:3 -> chain:3
0 -> 0
1 -> 1
2 -> 2

scenario mixed
construction main_factorization
input maps phi psi
input element b
expect isotone
"""


def identity(L: FiniteLattice, name: str = "id") -> MonotoneMap:
    return MonotoneMap(L, L, lambda x: x, name=name)


def constant(L: FiniteLattice, M: FiniteLattice, value, name: str = "c") -> MonotoneMap:
    return MonotoneMap(L, M, lambda _: value, name=name)
