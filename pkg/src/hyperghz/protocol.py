"""The measurement pipeline and the two outcome decoders.

Pipeline per input label: prepare the hyperentangled state, run path
control on every photon, read the OAM register (parity offsets), apply
the spatial QFT, read the spatial register (phase index).  Both readouts
invert in closed form:

    parity   x_m = o_{m+1} - o_1  (mod d)   from an OAM outcome
    phase    k   = -(y_1 + ... + y_n)  (mod d)   from a spatial outcome

Exhaustive mode enumerates the joint outcome support as the product of
the two register marginals, which is valid because the post-path-control
state factors across registers; sampled mode draws sequentially with
collapse in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .catalog import DEFAULT_ENUM_CAP, GhzLabel, hyper_initial
from .gates import apply_path_control_all, apply_qft_spatial_all
from .state import CapExceededError, StateVector, SystemShape, factor_across_registers

SUPPORT_EPS = 1e-9

REGISTERS = ("spatial", "oam")


@dataclass(frozen=True, order=True)
class Outcome:
    """Measured levels of one register, one entry per photon."""

    register: str
    levels: tuple[int, ...]

    def __post_init__(self):
        if self.register not in REGISTERS:
            raise ValueError(f"unknown register {self.register!r}")
        object.__setattr__(self, "levels", tuple(self.levels))


@dataclass(frozen=True)
class MeasurementRecord:
    oam_outcome: Outcome
    spatial_outcome: Outcome
    decoded: GhzLabel
    probability: float | None = None


class OutcomeDistribution:
    """Finite outcome-to-probability map for one register readout.

    Collapsed post-measurement states are computed on demand from the
    source state; entries below SUPPORT_EPS are treated as impossible and
    dropped.
    """

    __slots__ = ("shape", "register", "entries", "_source")

    def __init__(self, shape, register, entries, source):
        self.shape = shape
        self.register = register
        self.entries: dict[Outcome, float] = entries
        self._source: StateVector = source

    def outcomes(self) -> list[Outcome]:
        return list(self.entries)

    def probability(self, outcome: Outcome) -> float:
        return self.entries.get(outcome, 0.0)

    def total(self) -> float:
        return sum(self.entries.values())

    def collapsed(self, outcome: Outcome) -> StateVector:
        """Renormalized projection of the source onto the outcome."""
        prob = self.entries.get(outcome)
        if prob is None:
            raise ValueError(f"outcome {outcome} has no support")
        scale = 1.0 / math.sqrt(prob)
        s = self._source
        n = s.shape.n
        lo, hi = (0, n) if self.register == "spatial" else (n, 2 * n)
        if s.representation == "sparse":
            amps = {
                t: a * scale for t, a in s._dict.items() if t[lo:hi] == outcome.levels
            }
            return StateVector(s.shape, amplitudes=amps)
        reg = s.shape.register_size
        view = s.dense_array().reshape(reg, reg)
        pos = 0
        for lv in outcome.levels:
            pos = pos * s.shape.d + lv
        arr = np.zeros_like(view)
        if self.register == "spatial":
            arr[pos, :] = view[pos, :] * scale
        else:
            arr[:, pos] = view[:, pos] * scale
        return StateVector(s.shape, array=arr.reshape(-1))

    def __len__(self) -> int:
        return len(self.entries)


def measure_register(s: StateVector, register: str) -> OutcomeDistribution:
    """Projective readout of one register in the computational basis."""
    if register not in REGISTERS:
        raise ValueError(f"unknown register {register!r}")
    n, d = s.shape.n, s.shape.d
    probs: dict[tuple[int, ...], float] = {}
    if s.representation == "sparse":
        lo, hi = (0, n) if register == "spatial" else (n, 2 * n)
        for levels, amp in s._dict.items():
            key = levels[lo:hi]
            probs[key] = probs.get(key, 0.0) + abs(amp) ** 2
    else:
        flat = kernels.register_probs(s.dense_array(), d, n, register == "spatial")
        for idx in np.flatnonzero(flat > SUPPORT_EPS):
            digits = []
            rem = int(idx)
            for _ in range(n):
                rem, dig = divmod(rem, d)
                digits.append(dig)
            probs[tuple(reversed(digits))] = float(flat[idx])
    entries = {
        Outcome(register, levels): p
        for levels, p in sorted(probs.items())
        if p > SUPPORT_EPS
    }
    return OutcomeDistribution(s.shape, register, entries, s)


def sample_register(
    s: StateVector, register: str, shots: int, seed: int | None
) -> list[Outcome]:
    """Independent seeded draws from the register's outcome distribution."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    dist = measure_register(s, register)
    outcomes = dist.outcomes()
    weights = np.array([dist.entries[o] for o in outcomes])
    weights /= weights.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(outcomes), size=shots, p=weights)
    return [outcomes[i] for i in draws]


def decode_parity(oam_outcome: Outcome, d: int) -> tuple[int, ...]:
    """Parity offsets from an OAM outcome: x_m = levels[m] - levels[0] mod d."""
    if oam_outcome.register != "oam":
        raise ValueError("parity decoding takes an OAM-register outcome")
    first = oam_outcome.levels[0]
    return tuple((lv - first) % d for lv in oam_outcome.levels[1:])


def decode_phase(spatial_outcome: Outcome, d: int) -> int:
    """Phase index from a post-QFT spatial outcome: k = -sum(levels) mod d."""
    if spatial_outcome.register != "spatial":
        raise ValueError("phase decoding takes a spatial-register outcome")
    return (-sum(spatial_outcome.levels)) % d


def _prepared(shape: SystemShape, label: GhzLabel) -> StateVector:
    return apply_path_control_all(hyper_initial(shape, label))


def _draw(dist: OutcomeDistribution, rng: np.random.Generator) -> Outcome:
    outcomes = dist.outcomes()
    weights = np.array([dist.entries[o] for o in outcomes])
    return outcomes[rng.choice(len(outcomes), p=weights / weights.sum())]


def run_protocol(
    shape: SystemShape,
    label: GhzLabel,
    mode: str = "exhaustive",
    seed: int | None = None,
):
    """Full pipeline for one label.

    ``exhaustive`` returns every nonzero-probability (OAM, spatial) outcome
    pair as MeasurementRecords with joint probabilities; ``sampled``
    returns a single record drawn sequentially (OAM readout, collapse,
    QFT, spatial readout).
    """
    label.validate(shape)
    controlled = _prepared(shape, label)
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        oam_dist = measure_register(controlled, "oam")
        oam = _draw(oam_dist, rng)
        transformed = apply_qft_spatial_all(oam_dist.collapsed(oam))
        spatial = _draw(measure_register(transformed, "spatial"), rng)
        decoded = GhzLabel(decode_parity(oam, shape.d), decode_phase(spatial, shape.d))
        return MeasurementRecord(oam, spatial, decoded)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if shape.d**shape.n > DEFAULT_ENUM_CAP:
        raise CapExceededError(
            f"exhaustive mode would enumerate {shape.d ** shape.n} outcome pairs"
        )
    if factor_across_registers(controlled) is None:
        raise RuntimeError("post-path-control state unexpectedly entangled")
    # Registers are independent, so the joint support is the product of
    # the two marginals.
    oam_dist = measure_register(controlled, "oam")
    spatial_dist = measure_register(apply_qft_spatial_all(controlled), "spatial")
    records = []
    for oam, p_oam in oam_dist.entries.items():
        x = decode_parity(oam, shape.d)
        for spatial, p_spatial in spatial_dist.entries.items():
            decoded = GhzLabel(x, decode_phase(spatial, shape.d))
            records.append(MeasurementRecord(oam, spatial, decoded, p_oam * p_spatial))
    return records


def sample_records(
    shape: SystemShape, label: GhzLabel, shots: int, seed: int | None
) -> list[MeasurementRecord]:
    """Sequentially sampled shots with per-branch caching.

    Statistically identical to repeating run_protocol in sampled mode:
    OAM outcomes are drawn first, then each shot draws a spatial outcome
    from the conditional distribution of its OAM branch.
    """
    label.validate(shape)
    if shots < 1:
        raise ValueError("shots must be at least 1")
    controlled = _prepared(shape, label)
    oam_dist = measure_register(controlled, "oam")
    rng = np.random.default_rng(seed)
    oam_outcomes = oam_dist.outcomes()
    weights = np.array([oam_dist.entries[o] for o in oam_outcomes])
    weights /= weights.sum()
    oam_draws = rng.choice(len(oam_outcomes), size=shots, p=weights)

    branch_queues: dict[int, list[Outcome]] = {}
    for branch in sorted(set(int(b) for b in oam_draws)):
        outcome = oam_outcomes[branch]
        transformed = apply_qft_spatial_all(oam_dist.collapsed(outcome))
        dist = measure_register(transformed, "spatial")
        opts = dist.outcomes()
        w = np.array([dist.entries[o] for o in opts])
        w /= w.sum()
        count = int(np.sum(oam_draws == branch))
        picks = rng.choice(len(opts), size=count, p=w)
        branch_queues[branch] = [opts[i] for i in picks]

    records = []
    positions = {b: 0 for b in branch_queues}
    for branch in oam_draws:
        branch = int(branch)
        oam = oam_outcomes[branch]
        spatial = branch_queues[branch][positions[branch]]
        positions[branch] += 1
        decoded = GhzLabel(decode_parity(oam, shape.d), decode_phase(spatial, shape.d))
        records.append(MeasurementRecord(oam, spatial, decoded))
    return records
