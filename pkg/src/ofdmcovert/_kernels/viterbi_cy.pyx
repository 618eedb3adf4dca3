# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Viterbi kernel for the rate-1/2 K=7 (133, 171) code.

Hot path of the whole simulator: one add-compare-select sweep over 64 states
per coded-bit pair, with per-step decisions bit-packed into one uint64.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef int N_STATES = 64
cdef int G_A = 0o133
cdef int G_B = 0o171

cdef int[64] PRED0
cdef int[64] PRED1
cdef int[64] CODE0
cdef int[64] CODE1


cdef int _parity(int x):
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


cdef void _build_tables():
    cdef int ns, bit, p0, p1, reg, a, b
    for ns in range(N_STATES):
        bit = ns >> 5
        p0 = (ns << 1) & (N_STATES - 1)
        p1 = p0 | 1
        reg = (bit << 6) | p0
        a = _parity(reg & G_A)
        b = _parity(reg & G_B)
        PRED0[ns] = p0
        CODE0[ns] = 2 * a + b
        reg = (bit << 6) | p1
        a = _parity(reg & G_A)
        b = _parity(reg & G_B)
        PRED1[ns] = p1
        CODE1[ns] = 2 * a + b


_build_tables()


def viterbi_decode(double[::1] soft_a, double[::1] soft_b):
    """Decode; same contract as the pure-python fallback."""
    cdef Py_ssize_t n = soft_a.shape[0]
    if soft_b.shape[0] != n:
        raise ValueError("soft input halves differ in length")

    cdef cnp.ndarray[cnp.uint64_t, ndim=1] decisions = np.empty(n, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] bits = np.empty(n, dtype=np.uint8)
    cdef cnp.uint64_t[::1] dec = decisions
    cdef cnp.uint8_t[::1] out = bits

    cdef double[64] pm
    cdef double[64] pm_new
    cdef double[4] bm
    cdef double sa, sb, m0, m1
    cdef cnp.uint64_t word
    cdef Py_ssize_t i
    cdef int ns, state

    for ns in range(N_STATES):
        pm[ns] = -1e18
    pm[0] = 0.0

    for i in range(n):
        sa = soft_a[i]
        sb = soft_b[i]
        bm[0] = -sa - sb
        bm[1] = -sa + sb
        bm[2] = sa - sb
        bm[3] = sa + sb
        word = 0
        for ns in range(N_STATES):
            m0 = pm[PRED0[ns]] + bm[CODE0[ns]]
            m1 = pm[PRED1[ns]] + bm[CODE1[ns]]
            if m1 > m0:
                pm_new[ns] = m1
                word |= (<cnp.uint64_t>1) << ns
            else:
                pm_new[ns] = m0
        dec[i] = word
        for ns in range(N_STATES):
            pm[ns] = pm_new[ns]

    state = 0
    for i in range(n - 1, -1, -1):
        out[i] = state >> 5
        if (dec[i] >> state) & 1:
            state = PRED1[state]
        else:
            state = PRED0[state]
    return bits
