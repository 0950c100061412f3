# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same signatures as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int32_t, uint8_t

cnp.import_array()


def matmul_shift(const int64_t[:, ::1] ar, const int64_t[:, ::1] ai,
                 const int64_t[:, ::1] br, const int64_t[:, ::1] bi, int shift):
    cdef Py_ssize_t n = ar.shape[0], m = br.shape[1], inner = ar.shape[1]
    cdef Py_ssize_t i, j, k
    cdef int64_t sr, si, mask = (<int64_t>1 << shift) - 1
    cdef int64_t xr, xi, yr, yi
    cr_arr = np.empty((n, m), dtype=np.int64)
    ci_arr = np.empty((n, m), dtype=np.int64)
    cdef int64_t[:, ::1] cr = cr_arr
    cdef int64_t[:, ::1] ci = ci_arr
    for i in range(n):
        for j in range(m):
            sr = 0
            si = 0
            for k in range(inner):
                xr = ar[i, k]
                xi = ai[i, k]
                if xr == 0 and xi == 0:
                    continue
                yr = br[k, j]
                yi = bi[k, j]
                sr += xr * yr - xi * yi
                si += xr * yi + xi * yr
            if (sr & mask) or (si & mask):
                raise ArithmeticError("fixed-point product is not exact at this scale")
            cr[i, j] = sr >> shift
            ci[i, j] = si >> shift
    return cr_arr, ci_arr


def run_program(uint8_t[:, ::1] states, const int32_t[::1] widths,
                const int32_t[::1] bind_off, const int32_t[::1] binds,
                const int64_t[::1] table_off, const int32_t[::1] tables):
    cdef Py_ssize_t n_states = states.shape[0], n_gates = widths.shape[0]
    cdef Py_ssize_t s, g, k
    cdef int32_t w, base, out
    cdef int64_t idx
    for s in range(n_states):
        for g in range(n_gates):
            w = widths[g]
            base = bind_off[g]
            idx = 0
            for k in range(w):
                idx = (idx << 1) | states[s, binds[base + k]]
            out = tables[table_off[g] + idx]
            for k in range(w):
                states[s, binds[base + k]] = (out >> (w - 1 - k)) & 1


def run_program_single(state, const int32_t[::1] widths,
                       const int32_t[::1] bind_off, const int32_t[::1] binds,
                       const int64_t[::1] table_off, const int32_t[::1] tables):
    buf = np.asarray(state, dtype=np.uint8).reshape(1, -1).copy()
    run_program(buf, widths, bind_off, binds, table_off, tables)
    state[:] = buf[0].tolist()
