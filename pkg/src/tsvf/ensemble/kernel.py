"""Select the trial-loop implementation at import time.

The compiled extension is used when it was built; set ``TSVF_PURE_PYTHON=1``
to force the numpy fallback. Both produce identical counts.
"""
import os

from . import _fallback

python_tally = _fallback.tally

try:
    if os.environ.get("TSVF_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from ._kernel import tally as compiled_tally
except ImportError:
    compiled_tally = None

if compiled_tally is not None:
    tally = compiled_tally
    BACKEND = "cython"
else:
    tally = python_tally
    BACKEND = "python"
