"""Pure-Python (numpy) twin of ``_kernel.tally``; bit-identical results."""
import numpy as np

from .rng import GOLDEN, M1, M2, TRIAL_MULT

_GOLDEN = np.uint64(GOLDEN)
_TRIAL_MULT = np.uint64(TRIAL_MULT)
_M1 = np.uint64(M1)
_M2 = np.uint64(M2)
_S11, _S27, _S30, _S31 = (np.uint64(s) for s in (11, 27, 30, 31))
_TO_UNIT = 2.0 ** -53
_CHUNK = 1 << 16


def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def tally(key, start, stop, cum, accept):
    cum = np.ascontiguousarray(cum, dtype=np.float64)
    accept = np.ascontiguousarray(accept, dtype=np.float64)
    nb = len(cum)
    branch = np.zeros(nb, dtype=np.int64)
    selected = np.zeros(nb, dtype=np.int64)
    key = np.uint64(key)
    for lo in range(start, stop, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.uint64)
        state = _mix64(key ^ (idx * _TRIAL_MULT)) + _GOLDEN
        u = (_mix64(state) >> _S11).astype(np.float64) * _TO_UNIT
        state = state + _GOLDEN
        v = (_mix64(state) >> _S11).astype(np.float64) * _TO_UNIT
        # first n with u < cum[n]; the last branch absorbs round-off
        n = np.minimum(np.searchsorted(cum, u, side="right"), nb - 1)
        ok = v < accept[n]
        branch += np.bincount(n, minlength=nb)
        selected += np.bincount(n[ok], minlength=nb)
    return branch, selected
