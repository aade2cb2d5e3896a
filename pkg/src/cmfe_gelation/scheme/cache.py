"""
On-disk cache of scheme tables.

Refinement sweeps and repeated runs rebuild identical tables; they are
keyed by the grid fingerprint and the model parameters.
"""

import hashlib
import json
from logging import getLogger
from typing import Tuple

from diskcache import Cache

from cmfe_gelation.fs import ensure_output_directory
from cmfe_gelation.grid import Grid
from cmfe_gelation.kernels import KernelModel
from cmfe_gelation.scheme.tables import (
    CoagTable,
    FragTable,
    precompute_coag_table,
    precompute_frag_table,
)

LOG = getLogger(__name__)


def table_cache_key(grid: Grid, model: KernelModel) -> str:
    """Cache key of the tables of ``grid`` and ``model``."""
    digest = hashlib.sha256()
    digest.update(grid.fingerprint().encode())
    digest.update(json.dumps(model.to_dict(), sort_keys=True).encode())
    return f"cmfe-tables-{digest.hexdigest()}"


def cached_tables(grid: Grid, model: KernelModel, cache_directory: str) -> Tuple[CoagTable, FragTable]:
    """
    Scheme tables from the cache in ``cache_directory``, built and stored on a miss.

    :param grid: Mass grid.
    :param model: Rate-law parameters.
    :param cache_directory: diskcache directory, created if missing.
    :return: Coagulation and breakup tables.
    """
    ensure_output_directory(cache_directory, 0o700)
    cache_key = table_cache_key(grid, model)
    with Cache(directory=cache_directory) as cache_reference:
        tables = cache_reference.get(cache_key)
        if tables is None:
            LOG.debug("Table cache miss %s", cache_key)
            tables = precompute_coag_table(grid, model), precompute_frag_table(grid, model)
            cache_reference.set(cache_key, tables)
        else:
            LOG.debug("Table cache hit %s", cache_key)

    return tables
