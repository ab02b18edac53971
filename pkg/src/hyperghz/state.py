"""Multi-qudit states over a spatial and an OAM register.

Each of the n photons carries one d-level qudit per degree of freedom, so
the full system lives on 2n qudits.  Basis tuples are ordered spatial
register first, photon-major within each register:

    (s_1, ..., s_n, o_1, ..., o_n),    s_i, o_i in Z_d

and the same ordering is shared by every module in the package.  States
come in a sparse form (dict keyed by basis tuple, entries below
``ZERO_EPS`` dropped) and a dense form (flat complex array of length
d**(2n), refused above ``DEFAULT_DENSE_CAP``).  Values are immutable once
built; every operation returns a new state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

ZERO_EPS = 1e-12
FACTOR_TOL = 1e-9
DEFAULT_DENSE_CAP = 2**26


class DegenerateStateError(ValueError):
    """A construction collapsed to the zero vector."""


class CapExceededError(RuntimeError):
    """A dense allocation or an enumeration would exceed its configured cap."""


@dataclass(frozen=True)
class SystemShape:
    """Qudit dimension ``d`` and photon count ``n``; state space Z_d^(2n)."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"qudit dimension must be at least 2, got {self.d}")
        if self.n < 2:
            raise ValueError(f"photon count must be at least 2, got {self.n}")

    @property
    def num_axes(self) -> int:
        return 2 * self.n

    @property
    def register_size(self) -> int:
        return self.d**self.n

    @property
    def dense_size(self) -> int:
        return self.d ** (2 * self.n)

    @property
    def sparse_cutoff(self) -> int:
        """Constructors stay sparse up to this many nonzero amplitudes."""
        return self.d * self.n**2

    def check_dense_cap(self, cap: int | None = None) -> None:
        cap = DEFAULT_DENSE_CAP if cap is None else cap
        if self.dense_size > cap:
            raise CapExceededError(
                f"dense state for d={self.d}, n={self.n} needs "
                f"{self.dense_size} amplitudes, cap is {cap}"
            )

    def validate_levels(self, levels: tuple[int, ...], length: int | None = None) -> None:
        expected = self.num_axes if length is None else length
        if len(levels) != expected:
            raise ValueError(f"expected {expected} levels, got {len(levels)}")
        for lv in levels:
            if not 0 <= lv < self.d:
                raise ValueError(f"level {lv} out of range for d={self.d}")

    def index_of(self, levels: tuple[int, ...]) -> int:
        idx = 0
        for lv in levels:
            idx = idx * self.d + lv
        return idx

    def levels_of(self, index: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.num_axes):
            index, rem = divmod(index, self.d)
            digits.append(rem)
        return tuple(reversed(digits))


class StateVector:
    """Normalized complex amplitudes over the 2n-qudit basis."""

    __slots__ = ("shape", "_dict", "_array")

    def __init__(self, shape: SystemShape, *, amplitudes=None, array=None):
        self.shape = shape
        self._dict: dict[tuple[int, ...], complex] | None = amplitudes
        self._array: np.ndarray | None = array
        if (amplitudes is None) == (array is None):
            raise ValueError("exactly one of amplitudes/array must be given")
        if array is not None:
            array.flags.writeable = False

    @property
    def representation(self) -> str:
        return "sparse" if self._dict is not None else "dense"

    @property
    def nnz(self) -> int:
        if self._dict is not None:
            return len(self._dict)
        return int(np.count_nonzero(np.abs(self._array) > ZERO_EPS))

    def items(self) -> Iterator[tuple[tuple[int, ...], complex]]:
        """Nonzero (basis tuple, amplitude) pairs."""
        if self._dict is not None:
            yield from self._dict.items()
        else:
            for idx in np.flatnonzero(np.abs(self._array) > ZERO_EPS):
                yield self.shape.levels_of(int(idx)), complex(self._array[idx])

    def amplitude(self, levels: tuple[int, ...]) -> complex:
        levels = tuple(levels)
        self.shape.validate_levels(levels)
        if self._dict is not None:
            return self._dict.get(levels, 0j)
        return complex(self._array[self.shape.index_of(levels)])

    def dense_array(self) -> np.ndarray:
        """Read-only dense view; materializes sparse states (cap unchecked)."""
        if self._array is not None:
            return self._array
        arr = np.zeros(self.shape.dense_size, dtype=np.complex128)
        for levels, amp in self._dict.items():
            arr[self.shape.index_of(levels)] = amp
        arr.flags.writeable = False
        return arr

    def norm(self) -> float:
        if self._dict is not None:
            return math.sqrt(sum(abs(a) ** 2 for a in self._dict.values()))
        return float(np.linalg.norm(self._array))

    def __repr__(self) -> str:
        return (
            f"StateVector(d={self.shape.d}, n={self.shape.n}, "
            f"{self.representation}, nnz={self.nnz})"
        )


class RegisterState:
    """State of a single n-qudit register (one degree of freedom)."""

    __slots__ = ("d", "n", "amplitudes")

    def __init__(self, d: int, n: int, amplitudes: dict[tuple[int, ...], complex]):
        self.d = d
        self.n = n
        self.amplitudes = amplitudes

    @classmethod
    def from_terms(
        cls, d: int, n: int, terms: Iterable[tuple[tuple[int, ...], complex]]
    ) -> "RegisterState":
        acc: dict[tuple[int, ...], complex] = {}
        for levels, amp in terms:
            levels = tuple(levels)
            if len(levels) != n or any(not 0 <= lv < d for lv in levels):
                raise ValueError(f"bad register tuple {levels} for d={d}, n={n}")
            acc[levels] = acc.get(levels, 0j) + complex(amp)
        norm = math.sqrt(sum(abs(a) ** 2 for a in acc.values()))
        if norm < ZERO_EPS:
            raise DegenerateStateError("register terms cancel to the zero vector")
        return cls(d, n, {t: a / norm for t, a in acc.items() if abs(a / norm) > ZERO_EPS})

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def inner(self, other: "RegisterState") -> complex:
        """Conjugate-linear in self, linear in other."""
        if (self.d, self.n) != (other.d, other.n):
            raise ValueError("register shape mismatch")
        if len(self.amplitudes) > len(other.amplitudes):
            return complex(np.conj(other.inner(self)))
        return sum(
            a.conjugate() * other.amplitudes.get(t, 0j) for t, a in self.amplitudes.items()
        )

    def fidelity(self, other: "RegisterState") -> float:
        return abs(self.inner(other)) ** 2

    def __repr__(self) -> str:
        return f"RegisterState(d={self.d}, n={self.n}, nnz={len(self.amplitudes)})"


def _auto_representation(shape: SystemShape, nnz: int) -> str:
    return "sparse" if nnz <= shape.sparse_cutoff else "dense"


def _from_dict(
    shape: SystemShape,
    amps: dict[tuple[int, ...], complex],
    representation: str | None,
    cap: int | None = None,
) -> StateVector:
    rep = representation or _auto_representation(shape, len(amps))
    if rep == "sparse":
        return StateVector(shape, amplitudes=amps)
    if rep != "dense":
        raise ValueError(f"unknown representation {rep!r}")
    shape.check_dense_cap(cap)
    arr = np.zeros(shape.dense_size, dtype=np.complex128)
    for levels, amp in amps.items():
        arr[shape.index_of(levels)] = amp
    return StateVector(shape, array=arr)


def basis_state(
    shape: SystemShape,
    spatial: tuple[int, ...],
    oam: tuple[int, ...],
    representation: str | None = None,
) -> StateVector:
    """Computational basis state |spatial; oam> with amplitude one."""
    spatial, oam = tuple(spatial), tuple(oam)
    shape.validate_levels(spatial, shape.n)
    shape.validate_levels(oam, shape.n)
    return _from_dict(shape, {spatial + oam: 1.0 + 0j}, representation)


def superpose(
    shape: SystemShape,
    terms: Iterable[tuple[tuple[int, ...], complex]],
    representation: str | None = None,
    cap: int | None = None,
) -> StateVector:
    """Normalized superposition of (basis tuple, amplitude) terms.

    Duplicate tuples accumulate; raises DegenerateStateError if everything
    cancels.
    """
    acc: dict[tuple[int, ...], complex] = {}
    for levels, amp in terms:
        levels = tuple(levels)
        shape.validate_levels(levels)
        acc[levels] = acc.get(levels, 0j) + complex(amp)
    if not acc:
        raise ValueError("superpose needs at least one term")
    norm = math.sqrt(sum(abs(a) ** 2 for a in acc.values()))
    if norm < ZERO_EPS:
        raise DegenerateStateError("amplitudes cancel to the zero vector")
    amps = {t: a / norm for t, a in acc.items() if abs(a) / norm > ZERO_EPS}
    return _from_dict(shape, amps, representation, cap)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a._dict is not None and b._dict is not None:
        small, big, conj_small = (
            (a._dict, b._dict, True) if len(a._dict) <= len(b._dict) else (b._dict, a._dict, False)
        )
        total = 0j
        for t, amp in small.items():
            other = big.get(t)
            if other is None:
                continue
            total += amp.conjugate() * other if conj_small else other.conjugate() * amp
        return total
    if a._array is not None and b._array is not None:
        return complex(np.vdot(a._array, b._array))
    sparse, dense = (a, b) if a._dict is not None else (b, a)
    total = 0j
    for t, amp in sparse.items():
        other = complex(dense._array[dense.shape.index_of(t)])
        total += amp.conjugate() * other if sparse is a else other.conjugate() * amp
    return total


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2; the global-phase-insensitive comparison used everywhere."""
    return abs(inner_product(a, b)) ** 2


def convert_representation(
    s: StateVector, target: str, cap: int | None = None
) -> StateVector:
    """Same amplitudes in the other representation.

    Dense targets respect the size cap; sparse targets drop magnitudes
    below ZERO_EPS.
    """
    if target not in ("sparse", "dense"):
        raise ValueError(f"unknown representation {target!r}")
    if target == s.representation:
        return s
    if target == "dense":
        s.shape.check_dense_cap(cap)
        arr = np.zeros(s.shape.dense_size, dtype=np.complex128)
        for levels, amp in s._dict.items():
            arr[s.shape.index_of(levels)] = amp
        return StateVector(s.shape, array=arr)
    amps: dict[tuple[int, ...], complex] = {}
    for idx in np.flatnonzero(np.abs(s._array) > ZERO_EPS):
        amps[s.shape.levels_of(int(idx))] = complex(s._array[idx])
    return StateVector(s.shape, amplitudes=amps)


def from_register_factors(spatial: RegisterState, oam: RegisterState) -> StateVector:
    """Tensor product of a spatial-register and an OAM-register state."""
    if (spatial.d, spatial.n) != (oam.d, oam.n):
        raise ValueError("factor shapes differ")
    shape = SystemShape(spatial.d, spatial.n)
    amps: dict[tuple[int, ...], complex] = {}
    for st, sa in spatial.amplitudes.items():
        for ot, oa in oam.amplitudes.items():
            amps[st + ot] = sa * oa
    return _from_dict(shape, amps, None)


def _coefficient_matrix(s: StateVector) -> tuple[np.ndarray, list, list]:
    """Support-restricted matrix M[spatial, oam] plus its row/col tuples."""
    n = s.shape.n
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for levels, amp in s.items():
        entries[(levels[:n], levels[n:])] = amp
    rows = sorted({st for st, _ in entries})
    cols = sorted({ot for _, ot in entries})
    row_pos = {t: i for i, t in enumerate(rows)}
    col_pos = {t: i for i, t in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.complex128)
    for (st, ot), amp in entries.items():
        mat[row_pos[st], col_pos[ot]] = amp
    return mat, rows, cols


def factorization_defect(s: StateVector) -> float:
    """1 - (leading Schmidt coefficient)^2 across the register bipartition."""
    mat, _, _ = _coefficient_matrix(s)
    sv = np.linalg.svd(mat, compute_uv=False)
    return float(max(0.0, 1.0 - sv[0] ** 2))


def factor_across_registers(
    s: StateVector,
) -> tuple[RegisterState, RegisterState] | None:
    """Split ``s`` into (spatial factor, oam factor) when it is a product.

    Rank-1 test across the register bipartition with tolerance FACTOR_TOL;
    returns None for entangled states.  The OAM factor gets a canonical
    phase (first nonzero amplitude real positive); the spatial factor
    carries the global phase.
    """
    mat, rows, cols = _coefficient_matrix(s)
    u_mat, sv, vh = np.linalg.svd(mat)
    if 1.0 - sv[0] ** 2 > FACTOR_TOL:
        return None
    u = u_mat[:, 0]
    v = vh[0]
    first = int(np.flatnonzero(np.abs(v) > ZERO_EPS)[0])
    phase = v[first] / abs(v[first])
    oam_vec = v * phase.conjugate()
    spa_vec = u * phase
    d, n = s.shape.d, s.shape.n
    spa = {rows[i]: complex(a) for i, a in enumerate(spa_vec) if abs(a) > ZERO_EPS}
    oam = {cols[i]: complex(a) for i, a in enumerate(oam_vec) if abs(a) > ZERO_EPS}
    return RegisterState(d, n, spa), RegisterState(d, n, oam)
