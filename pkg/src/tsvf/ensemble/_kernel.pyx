# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial loop: sample a branch, then accept or reject it."""
import numpy as np

from libc.stdint cimport uint64_t, int64_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t TRIAL_MULT = 0xD1B54A32D192ED03ULL
cdef uint64_t M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t M2 = 0x94D049BB133111EBULL
cdef double TO_UNIT = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef void _tally(uint64_t key, int64_t start, int64_t stop,
                 const double[::1] cum, const double[::1] accept,
                 int64_t[::1] branch, int64_t[::1] selected) noexcept nogil:
    cdef int64_t i
    cdef Py_ssize_t n, nb = cum.shape[0]
    cdef uint64_t state
    cdef double u, v
    for i in range(start, stop):
        state = mix64(key ^ (<uint64_t>i * TRIAL_MULT))
        state = state + GOLDEN
        u = <double>(mix64(state) >> 11) * TO_UNIT
        state = state + GOLDEN
        v = <double>(mix64(state) >> 11) * TO_UNIT
        n = 0
        while n < nb - 1 and not (u < cum[n]):
            n += 1
        branch[n] += 1
        if v < accept[n]:
            selected[n] += 1


def tally(key, Py_ssize_t start, Py_ssize_t stop, cum, accept):
    """Return ``(branch_counts, selected_counts)`` for trials ``[start, stop)``."""
    cdef const double[::1] c = np.ascontiguousarray(cum, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(accept, dtype=np.float64)
    branch_arr = np.zeros(c.shape[0], dtype=np.int64)
    selected_arr = np.zeros(c.shape[0], dtype=np.int64)
    cdef int64_t[::1] b = branch_arr
    cdef int64_t[::1] s = selected_arr
    cdef uint64_t k = <uint64_t>key
    with nogil:
        _tally(k, start, stop, c, a, b, s)
    return branch_arr, selected_arr
