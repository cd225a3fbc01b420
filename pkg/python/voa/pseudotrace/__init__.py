# This file is part of voa_pseudotrace.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

from .exact import *
from .virasoro import *
from .shapovalov import *
from .induced import *
from .heisenberg import *
from .qseries import *
from .parallel import *
from .schema import *
from .schemaRegistry import *
from .records import *
from .io import *
from .sample import *
from .verify import *
