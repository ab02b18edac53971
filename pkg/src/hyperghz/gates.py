"""Unitaries of the sorting pipeline.

Two operations act on the hyperentangled register pair: a per-photon path
control that adds the spatial level onto the OAM level mod d, and the
d-level quantum Fourier transform applied photon-wise to the spatial
register.  Phase convention is +2*pi*i/d throughout: a sign flip would
relabel the phase index k as d-k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .state import StateVector, ZERO_EPS


@dataclass(frozen=True)
class QftMatrix:
    """d x d Fourier matrix with entry[j, z] = exp(2*pi*i*z*j/d) / sqrt(d)."""

    d: int
    entries: np.ndarray


def qft_matrix(d: int) -> QftMatrix:
    if d < 2:
        raise ValueError(f"QFT dimension must be at least 2, got {d}")
    idx = np.arange(d)
    entries = np.exp(2j * np.pi / d * np.outer(idx, idx)) / math.sqrt(d)
    entries.flags.writeable = False
    return QftMatrix(d, entries)


def _apply_matrix_sparse(
    amps: dict[tuple[int, ...], complex], mat: np.ndarray, axis: int, d: int
) -> dict[tuple[int, ...], complex]:
    # plain-complex copy keeps numpy scalars out of the dict arithmetic
    columns = [[complex(mat[row, col]) for row in range(d)] for col in range(d)]
    out: dict[tuple[int, ...], complex] = {}
    for levels, amp in amps.items():
        column = columns[levels[axis]]
        prefix, suffix = levels[:axis], levels[axis + 1 :]
        for row in range(d):
            weight = column[row]
            if weight == 0:
                continue
            key = prefix + (row,) + suffix
            out[key] = out.get(key, 0j) + weight * amp
    return {t: a for t, a in out.items() if abs(a) > ZERO_EPS}


def apply_qft_spatial_all(s: StateVector, inverse: bool = False) -> StateVector:
    """QFT (or its inverse) on every photon's spatial qudit; OAM untouched."""
    d, n = s.shape.d, s.shape.n
    mat = qft_matrix(d).entries
    if inverse:
        mat = mat.conj().T
    if s.representation == "sparse":
        amps = s._dict
        for axis in range(n):
            amps = _apply_matrix_sparse(amps, mat, axis, d)
        return StateVector(s.shape, amplitudes=amps)
    arr = s.dense_array()
    mat = np.ascontiguousarray(mat)
    for axis in range(n):
        arr = kernels.apply_qudit_matrix(arr, mat, axis, d, s.shape.num_axes)
    return StateVector(s.shape, array=arr)


def path_control(s: StateVector, photon: int) -> StateVector:
    """Two-DOF gate on one photon: |j1>_S |j2>_O -> |j1>_S |j1+j2 mod d>_O.

    A permutation of the computational basis; amplitudes are carried
    unchanged.
    """
    d, n = s.shape.d, s.shape.n
    if not 0 <= photon < n:
        raise ValueError(f"photon index {photon} out of range for n={n}")
    if s.representation == "sparse":
        amps: dict[tuple[int, ...], complex] = {}
        oam_pos = n + photon
        for levels, amp in s._dict.items():
            shifted = (levels[photon] + levels[oam_pos]) % d
            amps[levels[:oam_pos] + (shifted,) + levels[oam_pos + 1 :]] = amp
        return StateVector(s.shape, amplitudes=amps)
    arr = kernels.add_spatial_into_oam(s.dense_array(), d, n, photon)
    return StateVector(s.shape, array=arr)


def apply_path_control_all(s: StateVector) -> StateVector:
    """Path control on every photon; the per-photon gates commute."""
    for photon in range(s.shape.n):
        s = path_control(s, photon)
    return s
