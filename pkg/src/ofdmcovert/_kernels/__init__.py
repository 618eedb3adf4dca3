"""Kernel selection: compiled Cython Viterbi if available, numpy otherwise.

Set OFDMCOVERT_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging).
"""

from __future__ import annotations

import os

if os.environ.get("OFDMCOVERT_PURE_PYTHON") == "1":
    from .viterbi_py import viterbi_decode

    BACKEND = "python"
else:
    try:
        from .viterbi_cy import viterbi_decode  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from .viterbi_py import viterbi_decode  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["viterbi_decode", "BACKEND"]
