"""Pure-Python (numpy) kernels. Same signatures as the compiled ``_ckernels``."""
from __future__ import annotations

import numpy as np


def matmul_shift(ar, ai, br, bi, shift):
    """Exact Gaussian-integer product ``(A @ B) / 2**shift``.

    Raises ArithmeticError if the division is not exact.
    """
    cr = ar @ br - ai @ bi
    ci = ar @ bi + ai @ br
    mask = (1 << shift) - 1
    if (cr & mask).any() or (ci & mask).any():
        raise ArithmeticError("fixed-point product is not exact at this scale")
    return cr >> shift, ci >> shift


def run_program(states, widths, bind_off, binds, table_off, tables):
    """Apply a compiled gate program in place to a (batch, lines) uint8 array."""
    n_gates = widths.shape[0]
    for g in range(n_gates):
        w = int(widths[g])
        lines = binds[bind_off[g]:bind_off[g] + w]
        idx = np.zeros(states.shape[0], dtype=np.int64)
        for line in lines:
            idx = (idx << 1) | states[:, line]
        out = tables[table_off[g] + idx]
        for k, line in enumerate(lines):
            states[:, line] = (out >> (w - 1 - k)) & 1


def run_program_single(state, widths, bind_off, binds, table_off, tables):
    """Apply a compiled gate program in place to one state (list of ints)."""
    for g in range(len(widths)):
        w = int(widths[g])
        base = int(bind_off[g])
        idx = 0
        for k in range(w):
            idx = (idx << 1) | state[binds[base + k]]
        out = int(tables[table_off[g] + idx])
        for k in range(w):
            state[binds[base + k]] = (out >> (w - 1 - k)) & 1
