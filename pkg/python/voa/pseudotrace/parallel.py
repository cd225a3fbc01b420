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

"""Routines for spreading independent per-degree work over processes.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ["WORKERS_ENV", "get_worker_count", "parallel_map"]

_LOG = logging.getLogger(__name__)

WORKERS_ENV = "VOA_PSEUDOTRACE_WORKERS"
"""Environment variable holding the worker process count."""


def get_worker_count():
    """Number of worker processes requested through `WORKERS_ENV`.

    Returns
    -------
    workers : `int`
        At least 1; 1 when the variable is unset.

    Raises
    ------
    ValueError
        Raised if the variable is not a positive integer.
    """
    raw = os.environ.get(WORKERS_ENV, "1").strip() or "1"
    try:
        workers = int(raw)
    except ValueError as e:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, not {raw!r}") from e
    if workers < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, not {raw!r}")
    return workers


def parallel_map(func, items, workers=None):
    """Apply ``func`` to every item, keeping input order.

    ``func`` and the items must be picklable when more than one worker is
    used. Each worker has its own normal-ordering caches.
    """
    items = list(items)
    workers = get_worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    _LOG.debug("Mapping %d items over %d processes", len(items), workers)
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
