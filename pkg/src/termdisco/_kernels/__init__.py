"""Kernel backend selection.

Imports the compiled Cython kernels when present, otherwise the pure-Python
reference implementations.  Set ``TERMDISCO_NO_EXT=1`` to force the fallback
(useful for benchmarking and for verifying backend equivalence).
"""

import os

from termdisco._kernels import reference

if os.environ.get("TERMDISCO_NO_EXT"):
    _impl = reference
    BACKEND = "python"
else:
    try:
        from termdisco._kernels import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = reference
        BACKEND = "python"

lev_weighted = _impl.lev_weighted
align_matrix = _impl.align_matrix
viterbi_chain = _impl.viterbi_chain
dtw_path = _impl.dtw_path
