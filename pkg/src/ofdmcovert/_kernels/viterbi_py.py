"""Pure-numpy Viterbi kernel (fallback when the compiled extension is absent).

Same contract as the Cython version: soft inputs are per-coded-bit values
whose sign encodes the bit (positive = 1), magnitude the confidence, and 0 an
erasure from depuncturing.
"""

from __future__ import annotations

import numpy as np

K = 7
N_STATES = 1 << (K - 1)
G_A = 0o133
G_B = 0o171


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def _build_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Predecessor states and emitted code (2a+b) for every new state."""
    pred0 = np.empty(N_STATES, dtype=np.int64)
    pred1 = np.empty(N_STATES, dtype=np.int64)
    code0 = np.empty(N_STATES, dtype=np.int64)
    code1 = np.empty(N_STATES, dtype=np.int64)
    for ns in range(N_STATES):
        bit = ns >> 5
        p0 = (ns << 1) & (N_STATES - 1)
        p1 = p0 | 1
        for which, p in enumerate((p0, p1)):
            reg = (bit << 6) | p
            a = _parity(reg & G_A)
            b = _parity(reg & G_B)
            if which == 0:
                pred0[ns] = p0
                code0[ns] = 2 * a + b
            else:
                pred1[ns] = p1
                code1[ns] = 2 * a + b
    return pred0, pred1, code0, code1


_PRED0, _PRED1, _CODE0, _CODE1 = _build_tables()


def viterbi_decode(soft_a: np.ndarray, soft_b: np.ndarray) -> np.ndarray:
    """Decode a rate-1/2 K=7 (133, 171) stream, assuming zero start/end state.

    Returns the full decoded bit vector (tail bits included).
    """
    n = len(soft_a)
    if len(soft_b) != n:
        raise ValueError("soft input halves differ in length")
    pm = np.full(N_STATES, -1e18)
    pm[0] = 0.0
    decisions = np.empty((n, N_STATES), dtype=np.uint8)
    for i in range(n):
        sa = soft_a[i]
        sb = soft_b[i]
        bm = np.array([-sa - sb, -sa + sb, sa - sb, sa + sb])
        m0 = pm[_PRED0] + bm[_CODE0]
        m1 = pm[_PRED1] + bm[_CODE1]
        take1 = m1 > m0
        pm = np.where(take1, m1, m0)
        decisions[i] = take1
    bits = np.empty(n, dtype=np.uint8)
    state = 0
    for i in range(n - 1, -1, -1):
        bits[i] = state >> 5
        state = _PRED1[state] if decisions[i, state] else _PRED0[state]
    return bits
