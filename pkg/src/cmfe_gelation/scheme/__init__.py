"""Sectional discretization: pair and breakup tables and the right-hand side."""

from cmfe_gelation.scheme.cache import cached_tables, table_cache_key
from cmfe_gelation.scheme.exceptions import (
    CMFESchemeException,
    CMFETableMismatchError,
)
from cmfe_gelation.scheme.rhs import (
    BLOCK_ROWS,
    RhsBundle,
    SectionalScheme,
    coag_rhs,
    frag_rhs,
    rhs,
)
from cmfe_gelation.scheme.tables import (
    CoagTable,
    FragTable,
    precompute_coag_table,
    precompute_frag_table,
)

__all__ = [
    "BLOCK_ROWS",
    "CMFESchemeException",
    "CMFETableMismatchError",
    "CoagTable",
    "FragTable",
    "RhsBundle",
    "SectionalScheme",
    "cached_tables",
    "coag_rhs",
    "frag_rhs",
    "precompute_coag_table",
    "precompute_frag_table",
    "rhs",
    "table_cache_key",
]
