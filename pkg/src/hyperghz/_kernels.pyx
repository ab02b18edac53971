# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the dense pipeline.

Dense states are flat complex128 arrays of length d**(2n) viewed as 2n
base-d axes, spatial register first.  These three loops dominate dense
runtime near the amplitude cap; hyperghz.kernels swaps in the numpy
versions from _kernels_py when this module is not built.
"""

import numpy as np


def apply_qudit_matrix(const double complex[::1] amps,
                       const double complex[:, ::1] mat,
                       Py_ssize_t axis, Py_ssize_t d, Py_ssize_t naxes):
    """Apply a d x d matrix to one qudit axis; returns a new array."""
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t stride = 1
    cdef Py_ssize_t i, base, off, j, z
    cdef double complex acc
    for i in range(naxes - 1 - axis):
        stride *= d
    cdef Py_ssize_t block = stride * d
    out_np = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] out = out_np
    scratch_np = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] scratch = scratch_np
    for base in range(0, size, block):
        for off in range(base, base + stride):
            for z in range(d):
                scratch[z] = amps[off + z * stride]
            for j in range(d):
                acc = 0
                for z in range(d):
                    acc = acc + mat[j, z] * scratch[z]
                out[off + j * stride] = acc
    return out_np


def add_spatial_into_oam(const double complex[::1] amps,
                         Py_ssize_t d, Py_ssize_t n, Py_ssize_t photon):
    """Basis permutation: OAM level of `photon` gains its spatial level mod d."""
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t post = 1
    cdef Py_ssize_t mid = 1
    cdef Py_ssize_t i
    for i in range(n - 1 - photon):
        post *= d
    for i in range(n - 1):
        mid *= d
    # flat layout: [pre] [spatial digit] [mid] [oam digit] [post]
    cdef Py_ssize_t o_block = d * post
    cdef Py_ssize_t s_block = mid * o_block
    cdef Py_ssize_t pre = size // (d * s_block)
    out_np = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] out = out_np
    cdef Py_ssize_t p, s, m, o, shifted, src, dst, t, row
    for p in range(pre):
        for s in range(d):
            row = (p * d + s) * s_block
            for m in range(mid):
                for o in range(d):
                    shifted = o + s
                    if shifted >= d:
                        shifted -= d
                    src = row + m * o_block + o * post
                    dst = row + m * o_block + shifted * post
                    for t in range(post):
                        out[dst + t] = amps[src + t]
    return out_np


def register_probs(const double complex[::1] amps,
                   Py_ssize_t d, Py_ssize_t n, bint spatial):
    """Marginal probabilities of one register; float64 array of length d**n."""
    cdef Py_ssize_t reg = 1
    cdef Py_ssize_t i, row, col
    cdef double complex a
    cdef double acc
    for i in range(n):
        reg *= d
    out_np = np.zeros(reg, dtype=np.float64)
    cdef double[::1] out = out_np
    if spatial:
        for row in range(reg):
            acc = 0.0
            for col in range(reg):
                a = amps[row * reg + col]
                acc += a.real * a.real + a.imag * a.imag
            out[row] = acc
    else:
        for row in range(reg):
            for col in range(reg):
                a = amps[row * reg + col]
                out[col] += a.real * a.real + a.imag * a.imag
    return out_np
