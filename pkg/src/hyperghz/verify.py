"""Exhaustive verification harness and brute-force oracle.

verify_shape runs every invariant the package claims for one (d, n):
orthonormality of the GHZ family, factorization and invariance of the
spatial state under path control, the phase-sum support constraint,
complete label discrimination, outcome uniformity, agreement between the
sparse and dense pipelines, and agreement with a deliberately naive dense
oracle that shares no state-manipulation code with either.

The default grid samples both axes of (d, n) while staying desk-scale.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .catalog import GhzLabel, all_labels, ghz_register, ghz_spatial, hyper_initial
from .gates import apply_path_control_all, apply_qft_spatial_all
from .protocol import SUPPORT_EPS, measure_register, run_protocol
from .state import (
    CapExceededError,
    StateVector,
    SystemShape,
    convert_representation,
    factor_across_registers,
    factorization_defect,
    inner_product,
)

DEFAULT_GRID: tuple[tuple[int, int], ...] = (
    (2, 2),
    (2, 3),
    (2, 5),
    (3, 2),
    (3, 3),
    (3, 4),
    (4, 3),
    (5, 3),
)

GRAM_TOL = 1e-12
FIDELITY_TOL = 1e-12
UNIFORMITY_TOL = 1e-9
PROB_MATCH_TOL = 1e-10


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_deviation: float
    runtime_s: float
    skipped: bool = False
    detail: str = ""


@dataclass
class VerificationReport:
    shape: SystemShape
    checks: list[CheckResult] = field(default_factory=list)
    table_artifacts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def parity_detection_table(
    shape: SystemShape | None = None,
) -> dict[tuple[int, ...], set[tuple[int, ...]]]:
    """Map each parity class x to its possible OAM detections.

    The rows are checked to be identical for every phase index k before
    being returned.
    """
    shape = shape or SystemShape(3, 3)
    table: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for label in all_labels(shape):
        controlled = apply_path_control_all(hyper_initial(shape, label))
        outcomes = {o.levels for o in measure_register(controlled, "oam").entries}
        seen = table.setdefault(label.x, outcomes)
        if seen != outcomes:
            raise RuntimeError(f"OAM detections depend on k for parity class {label.x}")
    return table


def phase_detection_table(
    shape: SystemShape | None = None,
) -> dict[int, set[tuple[int, ...]]]:
    """Map each phase index k to its possible post-QFT spatial detections.

    The rows are checked to be identical for every parity class before
    being returned.
    """
    shape = shape or SystemShape(3, 3)
    table: dict[int, set[tuple[int, ...]]] = {}
    for label in all_labels(shape):
        transformed = apply_qft_spatial_all(
            apply_path_control_all(hyper_initial(shape, label))
        )
        outcomes = {o.levels for o in measure_register(transformed, "spatial").entries}
        seen = table.setdefault(label.k, outcomes)
        if seen != outcomes:
            raise RuntimeError(f"spatial detections depend on parity for k={label.k}")
    return table


def brute_force_oracle(
    shape: SystemShape, label: GhzLabel, cap: int | None = None
) -> tuple[dict[tuple[int, ...], float], dict[tuple[int, ...], float]]:
    """Naive dense simulation of the pipeline for one label.

    Returns (OAM outcome probabilities, spatial outcome probabilities).
    Everything here is intentionally independent of the optimized path:
    explicit d**(2n) amplitude array, an index-permutation pass for path
    control, and one full Fourier matrix on the whole spatial register.
    """
    label.validate(shape)
    shape.check_dense_cap(cap)
    d, n = shape.d, shape.n
    reg = d**n
    size = reg * reg

    amps = np.zeros(size, dtype=np.complex128)
    offsets = (0,) + label.x
    for j in range(d):
        row = 0
        for off in offsets:
            row = row * d + (j + off) % d
        phase = np.exp(2j * np.pi * j * label.k / d)
        for l in range(d):
            col = 0
            for _ in range(n):
                col = col * d + l
            amps[row * reg + col] = phase / d

    idx = np.arange(size)
    new_idx = idx.copy()
    for photon in range(n):
        s_dig = (idx // d ** (2 * n - 1 - photon)) % d
        o_dig = (idx // d ** (n - 1 - photon)) % d
        new_idx = new_idx + ((s_dig + o_dig) % d - o_dig) * d ** (n - 1 - photon)
    shifted = np.zeros_like(amps)
    shifted[new_idx] = amps

    grid = shifted.reshape(reg, reg)
    oam_probs = (np.abs(grid) ** 2).sum(axis=0)

    root = np.exp(2j * np.pi / d)
    fourier = np.array(
        [[root ** (r * c) for c in range(d)] for r in range(d)]
    ) / math.sqrt(d)
    full = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n):
        full = np.kron(full, fourier)
    spatial_probs = (np.abs(full @ grid) ** 2).sum(axis=1)

    def digits(value: int) -> tuple[int, ...]:
        out = []
        for _ in range(n):
            value, dig = divmod(value, d)
            out.append(dig)
        return tuple(reversed(out))

    oam = {digits(i): float(p) for i, p in enumerate(oam_probs) if p > SUPPORT_EPS}
    spatial = {
        digits(i): float(p) for i, p in enumerate(spatial_probs) if p > SUPPORT_EPS
    }
    return oam, spatial


def pipeline_distributions(
    shape: SystemShape, label: GhzLabel, representation: str = "sparse"
) -> tuple[dict[tuple[int, ...], float], dict[tuple[int, ...], float]]:
    """Optimized-path outcome probabilities for both registers."""
    state = hyper_initial(shape, label)
    if representation == "dense":
        state = convert_representation(state, "dense")
    controlled = apply_path_control_all(state)
    oam = {o.levels: p for o, p in measure_register(controlled, "oam").entries.items()}
    transformed = apply_qft_spatial_all(controlled)
    spatial = {
        o.levels: p for o, p in measure_register(transformed, "spatial").entries.items()
    }
    return oam, spatial


def _joint_sequential(controlled: StateVector) -> dict:
    """Joint (oam, spatial) probabilities measuring OAM before the QFT."""
    joint = {}
    oam_dist = measure_register(controlled, "oam")
    for oam, p_oam in oam_dist.entries.items():
        transformed = apply_qft_spatial_all(oam_dist.collapsed(oam))
        for spatial, p_spa in measure_register(transformed, "spatial").entries.items():
            joint[(oam.levels, spatial.levels)] = p_oam * p_spa
    return joint


def _joint_direct(controlled: StateVector) -> dict:
    """Joint (oam, spatial) probabilities measuring both after the QFT."""
    transformed = apply_qft_spatial_all(controlled)
    n = controlled.shape.n
    joint: dict = {}
    for levels, amp in transformed.items():
        key = (levels[n:], levels[:n])
        joint[key] = joint.get(key, 0.0) + abs(amp) ** 2
    return {k: p for k, p in joint.items() if p > SUPPORT_EPS}


def _dict_agreement(a: dict, b: dict) -> tuple[bool, float]:
    """Exact key-set match plus worst probability difference."""
    if set(a) != set(b):
        return False, math.inf
    worst = max((abs(a[k] - b[k]) for k in a), default=0.0)
    return True, float(worst)


def _completeness_for_label(shape: SystemShape, label: GhzLabel) -> int:
    records = run_protocol(shape, label)
    return sum(1 for r in records if r.decoded != label)


def verify_shape(
    shape: SystemShape, dense_cap: int | None = None, jobs: int = 1
) -> VerificationReport:
    """Run every check for one shape and aggregate a report."""
    labels = all_labels(shape)
    report = VerificationReport(shape=shape)

    def run_check(name, fn):
        start = time.perf_counter()
        passed, worst, detail, skipped = fn()
        report.checks.append(
            CheckResult(name, passed, worst, time.perf_counter() - start, skipped, detail)
        )

    def gram_identity():
        states = [ghz_spatial(shape, label) for label in labels]
        worst = 0.0
        for i, a in enumerate(states):
            for j, b in enumerate(states):
                expected = 1.0 if i == j else 0.0
                worst = max(worst, abs(inner_product(a, b) - expected))
        return worst <= GRAM_TOL, worst, f"{len(labels)}x{len(labels)} Gram matrix", False

    def initial_factorization():
        worst = 0.0
        for label in labels:
            state = hyper_initial(shape, label)
            worst = max(worst, factorization_defect(state))
            if factor_across_registers(state) is None:
                return False, worst, f"label {label} did not factor", False
        return worst <= 1e-9, worst, "", False

    def spatial_invariance():
        worst = 0.0
        for label in labels:
            controlled = apply_path_control_all(hyper_initial(shape, label))
            factors = factor_across_registers(controlled)
            if factors is None:
                return False, math.inf, f"label {label} did not factor", False
            deviation = 1.0 - factors[0].fidelity(ghz_register(shape, label))
            worst = max(worst, deviation)
        return worst <= FIDELITY_TOL, worst, "", False

    def phase_sum_constraint():
        violations = 0
        for label in labels:
            _, spatial = pipeline_distributions(shape, label)
            for levels in spatial:
                if (sum(levels) + label.k) % shape.d != 0:
                    violations += 1
        return violations == 0, float(violations), f"{violations} violations", False

    def completeness():
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                confusions = sum(
                    pool.map(lambda lb: _completeness_for_label(shape, lb), labels)
                )
        else:
            confusions = sum(_completeness_for_label(shape, lb) for lb in labels)
        if confusions == 0:
            detail = f"{len(labels)}/{len(labels)} labels decoded correctly"
        else:
            detail = f"{confusions} confused outcome pairs"
        return confusions == 0, float(confusions), detail, False

    def outcome_uniformity():
        worst = 0.0
        expected_oam = 1.0 / shape.d
        expected_spatial = float(shape.d) ** (1 - shape.n)
        for label in labels:
            oam, spatial = pipeline_distributions(shape, label)
            if len(oam) != shape.d or len(spatial) != shape.d ** (shape.n - 1):
                return False, math.inf, f"wrong outcome count for {label}", False
            worst = max(worst, max(abs(p - expected_oam) for p in oam.values()))
            worst = max(worst, max(abs(p - expected_spatial) for p in spatial.values()))
        return worst <= UNIFORMITY_TOL, worst, "", False

    def stage_order_independence():
        worst = 0.0
        for label in labels:
            controlled = apply_path_control_all(hyper_initial(shape, label))
            ok, deviation = _dict_agreement(
                _joint_sequential(controlled), _joint_direct(controlled)
            )
            if not ok:
                return False, math.inf, f"joint supports differ for {label}", False
            worst = max(worst, deviation)
        return worst <= PROB_MATCH_TOL, worst, "", False

    def dense_feasible() -> bool:
        try:
            shape.check_dense_cap(dense_cap)
            return True
        except CapExceededError:
            return False

    def sparse_dense_equivalence():
        if not dense_feasible():
            return True, 0.0, "skipped: dense cap exceeded", True
        worst = 0.0
        for label in labels:
            s_oam, s_spa = pipeline_distributions(shape, label, "sparse")
            d_oam, d_spa = pipeline_distributions(shape, label, "dense")
            for a, b in ((s_oam, d_oam), (s_spa, d_spa)):
                ok, deviation = _dict_agreement(a, b)
                if not ok:
                    return False, math.inf, f"outcome sets differ for {label}", False
                worst = max(worst, deviation)
        return worst <= PROB_MATCH_TOL, worst, "", False

    def oracle_equivalence():
        if not dense_feasible():
            return True, 0.0, "skipped: dense cap exceeded", True
        worst = 0.0
        for label in labels:
            p_oam, p_spa = pipeline_distributions(shape, label)
            o_oam, o_spa = brute_force_oracle(shape, label, dense_cap)
            for a, b in ((p_oam, o_oam), (p_spa, o_spa)):
                ok, deviation = _dict_agreement(a, b)
                if not ok:
                    return False, math.inf, f"outcome sets differ for {label}", False
                worst = max(worst, deviation)
        return worst <= PROB_MATCH_TOL, worst, "", False

    run_check("gram_identity", gram_identity)
    run_check("initial_factorization", initial_factorization)
    run_check("spatial_invariance", spatial_invariance)
    run_check("phase_sum_constraint", phase_sum_constraint)
    run_check("completeness", completeness)
    run_check("outcome_uniformity", outcome_uniformity)
    run_check("stage_order_independence", stage_order_independence)
    run_check("sparse_dense_equivalence", sparse_dense_equivalence)
    run_check("oracle_equivalence", oracle_equivalence)

    report.table_artifacts = {
        "parity_table": parity_detection_table(shape),
        "phase_table": phase_detection_table(shape),
    }
    return report


def verify_grid(
    grid: tuple[tuple[int, int], ...] = DEFAULT_GRID,
    dense_cap: int | None = None,
    jobs: int = 1,
) -> list[VerificationReport]:
    return [verify_shape(SystemShape(d, n), dense_cap, jobs) for d, n in grid]
