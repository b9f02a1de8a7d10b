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
from dataclasses import dataclass

DEFAULT_SIZE_CAP = 4096
DEFAULT_CATALOG_MAX_SIZE = 5
DEFAULT_FD_MAX_GENERATORS = 4
DEFAULT_FB_MAX_GENERATORS = 4
DEFAULT_DOWNSET_MAX_POSET = 20


@dataclass
class CheckerConfig:
    max_lattice_size: int = DEFAULT_SIZE_CAP
    catalog_max_size: int = DEFAULT_CATALOG_MAX_SIZE
    fd_max_generators: int = DEFAULT_FD_MAX_GENERATORS
    fb_max_generators: int = DEFAULT_FB_MAX_GENERATORS
    downset_max_poset: int = DEFAULT_DOWNSET_MAX_POSET
    seed: int = 0
    sample_maps: int = 500
