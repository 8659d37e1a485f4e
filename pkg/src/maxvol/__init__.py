"""Maximum-volume column subset selection and its Label Cover hardness
construction.

Hot loops live in :mod:`maxvol.kernels` with numba and pure-numpy paths; set
``MAXVOL_DISABLE_JIT=1`` or call :func:`set_backend` to choose.
"""

from ._backend import get_backend, set_backend, use_backend
from .core import (
    ColumnSelection,
    VolumeResult,
    format_matrix,
    parse_matrix,
    projection_distance,
    read_matrix,
    singular_values,
    volume,
    write_matrix,
)
from .kernels import ConvergenceError
from .solvers import (
    EnumerationCapError,
    RankDeficientError,
    SolveReport,
    VolumeDistribution,
    exact_select,
    greedy_select,
    is_local_mu_maximum,
    local_search,
    sample_subset,
    sample_subsets,
    volume_sampling_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "ColumnSelection",
    "ConvergenceError",
    "EnumerationCapError",
    "RankDeficientError",
    "SolveReport",
    "VolumeDistribution",
    "VolumeResult",
    "exact_select",
    "format_matrix",
    "get_backend",
    "greedy_select",
    "is_local_mu_maximum",
    "local_search",
    "parse_matrix",
    "projection_distance",
    "read_matrix",
    "sample_subset",
    "sample_subsets",
    "set_backend",
    "singular_values",
    "use_backend",
    "volume",
    "volume_sampling_distribution",
    "write_matrix",
]
