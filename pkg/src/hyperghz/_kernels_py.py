"""Numpy fallback for the dense-pipeline kernels.

Signature-compatible with the compiled module _kernels; selected by
hyperghz.kernels when the extension is unavailable or disabled.
"""

from __future__ import annotations

import numpy as np


def apply_qudit_matrix(
    amps: np.ndarray, mat: np.ndarray, axis: int, d: int, naxes: int
) -> np.ndarray:
    """Apply a d x d matrix to one qudit axis; returns a new array."""
    pre = d**axis
    post = d ** (naxes - 1 - axis)
    view = amps.reshape(pre, d, post)
    out = np.einsum("jz,azb->ajb", mat, view)
    return np.ascontiguousarray(out.reshape(-1))


def add_spatial_into_oam(amps: np.ndarray, d: int, n: int, photon: int) -> np.ndarray:
    """Basis permutation: OAM level of `photon` gains its spatial level mod d."""
    pre = d**photon
    mid = d ** (n - 1)
    post = d ** (n - 1 - photon)
    view = amps.reshape(pre, d, mid, d, post)
    out = np.empty_like(view)
    for level in range(d):
        # new o = old o + level (mod d) on the slice with spatial digit = level
        out[:, level] = np.roll(view[:, level], level, axis=2)
    return out.reshape(-1)


def register_probs(amps: np.ndarray, d: int, n: int, spatial: bool) -> np.ndarray:
    """Marginal probabilities of one register; float64 array of length d**n."""
    reg = d**n
    sq = np.abs(amps.reshape(reg, reg)) ** 2
    return sq.sum(axis=1) if spatial else sq.sum(axis=0)
