"""Constructors and enumeration of the qudit GHZ family.

A label (x, k) with x in Z_d^(n-1) and k in Z_d names one of the d**n
orthogonal GHZ states

    (1/sqrt(d)) * sum_j exp(2*pi*i*j*k/d) |j, j+x_1, ..., j+x_{n-1}>

where x carries the parity offsets between photons and k the relative
phase.  The OAM auxiliary state is the all-zero-offset, zero-phase member
of the same family on the other register.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .state import (
    CapExceededError,
    RegisterState,
    StateVector,
    SystemShape,
)

DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class GhzLabel:
    """Parity offsets ``x`` (length n-1) plus phase index ``k``."""

    x: tuple[int, ...]
    k: int

    def __post_init__(self):
        # accept any iterable for x; equality with decoded labels needs a tuple
        object.__setattr__(self, "x", tuple(self.x))

    def validate(self, shape: SystemShape) -> None:
        if len(self.x) != shape.n - 1:
            raise ValueError(
                f"label needs {shape.n - 1} parity entries, got {len(self.x)}"
            )
        if any(not 0 <= xi < shape.d for xi in self.x) or not 0 <= self.k < shape.d:
            raise ValueError(f"label {self} out of range for d={shape.d}")


def _ghz_amplitudes(shape: SystemShape, label: GhzLabel) -> dict[tuple[int, ...], complex]:
    d = shape.d
    inv_sqrt_d = 1.0 / math.sqrt(d)
    phases = np.exp(2j * np.pi * label.k * np.arange(d) / d)
    offsets = (0,) + label.x
    amps = {}
    for j in range(d):
        levels = tuple((j + off) % d for off in offsets)
        amps[levels] = complex(phases[j]) * inv_sqrt_d
    return amps


def ghz_register(shape: SystemShape, label: GhzLabel) -> RegisterState:
    """The labelled GHZ state as a bare n-qudit register state."""
    label.validate(shape)
    return RegisterState(shape.d, shape.n, _ghz_amplitudes(shape, label))


def ghz_spatial(shape: SystemShape, label: GhzLabel) -> StateVector:
    """GHZ state on the spatial register, OAM register parked at all zeros."""
    label.validate(shape)
    zeros = (0,) * shape.n
    amps = {levels + zeros: amp for levels, amp in _ghz_amplitudes(shape, label).items()}
    return StateVector(shape, amplitudes=amps)


def oam_register(shape: SystemShape) -> RegisterState:
    """Auxiliary OAM state (1/sqrt(d)) * sum_j |j,j,...,j> as a register state."""
    d = shape.d
    inv_sqrt_d = 1.0 / math.sqrt(d)
    return RegisterState(
        d, shape.n, {(j,) * shape.n: inv_sqrt_d + 0j for j in range(d)}
    )


def oam_auxiliary(shape: SystemShape) -> StateVector:
    """Auxiliary OAM GHZ state, spatial register parked at all zeros."""
    zeros = (0,) * shape.n
    amps = {zeros + levels: amp for levels, amp in oam_register(shape).amplitudes.items()}
    return StateVector(shape, amplitudes=amps)


def hyper_initial(shape: SystemShape, label: GhzLabel) -> StateVector:
    """Hyperentangled input: spatial GHZ(label) tensor the OAM auxiliary.

    Exactly d**2 nonzero amplitudes.
    """
    label.validate(shape)
    oam = oam_register(shape).amplitudes
    amps = {}
    for st, sa in _ghz_amplitudes(shape, label).items():
        for ot, oa in oam.items():
            amps[st + ot] = sa * oa
    return StateVector(shape, amplitudes=amps)


def all_labels(shape: SystemShape, cap: int | None = None) -> list[GhzLabel]:
    """Every label for the shape, x-major lexicographic, then k."""
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    count = shape.d**shape.n
    if count > cap:
        raise CapExceededError(f"{count} labels exceed the enumeration cap {cap}")
    return [
        GhzLabel(x, k)
        for x in itertools.product(range(shape.d), repeat=shape.n - 1)
        for k in range(shape.d)
    ]
