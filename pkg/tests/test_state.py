import math

import numpy as np
import pytest

from hyperghz.state import (
    CapExceededError,
    DegenerateStateError,
    RegisterState,
    SystemShape,
    basis_state,
    convert_representation,
    factor_across_registers,
    fidelity,
    from_register_factors,
    inner_product,
    superpose,
)

S33 = SystemShape(3, 3)
OMEGA3 = np.exp(2j * np.pi / 3)


def spatial_ghz_terms(offsets, k, d=3, n=3):
    """Hand-built GHZ terms on the spatial register, OAM parked at zero."""
    terms = []
    for j in range(d):
        spatial = tuple((j + off) % d for off in (0,) + tuple(offsets))
        terms.append((spatial + (0,) * n, np.exp(2j * np.pi * j * k / d)))
    return terms


@pytest.mark.parametrize("d,n", [(1, 3), (0, 2), (3, 1), (2, 0)])
def test_shape_rejects_degenerate_sizes(d, n):
    with pytest.raises(ValueError):
        SystemShape(d, n)


def test_basis_state_single_amplitude():
    s = basis_state(S33, (0, 0, 0), (0, 0, 0))
    assert s.amplitude((0, 0, 0, 0, 0, 0)) == 1
    assert s.nnz == 1


def test_basis_state_index_placement():
    s = basis_state(SystemShape(2, 2), (1, 0), (0, 1))
    assert s.amplitude((1, 0, 0, 1)) == 1
    assert s.nnz == 1


def test_basis_state_rejects_out_of_range_level():
    with pytest.raises(ValueError):
        basis_state(S33, (0, 0, 3), (0, 0, 0))
    with pytest.raises(ValueError):
        basis_state(S33, (0, 0), (0, 0, 0))


def test_superpose_equal_weights():
    s = superpose(S33, spatial_ghz_terms((0, 0), k=0))
    for j in range(3):
        amp = s.amplitude((j, j, j, 0, 0, 0))
        assert amp == pytest.approx(1 / math.sqrt(3), abs=1e-15)
    assert s.nnz == 3


def test_superpose_normalizes_single_term():
    s = superpose(S33, [((0, 1, 2, 0, 0, 0), 5.0)])
    assert s.amplitude((0, 1, 2, 0, 0, 0)) == pytest.approx(1.0, abs=1e-15)


def test_superpose_cancellation_is_degenerate():
    terms = [((0, 0, 0, 0, 0, 0), 1.0), ((0, 0, 0, 0, 0, 0), -1.0)]
    with pytest.raises(DegenerateStateError):
        superpose(S33, terms)


def test_superpose_rejects_empty():
    with pytest.raises(ValueError):
        superpose(S33, [])


def test_inner_product_self_is_one():
    s = superpose(S33, spatial_ghz_terms((1, 2), k=2))
    ip = inner_product(s, s)
    assert ip.imag == pytest.approx(0.0, abs=1e-12)
    assert ip.real == pytest.approx(1.0, abs=1e-12)


def test_inner_product_orthogonal_phase_labels():
    a = superpose(S33, spatial_ghz_terms((0, 0), k=0))
    b = superpose(S33, spatial_ghz_terms((0, 0), k=1))
    assert abs(inner_product(a, b)) == pytest.approx(0.0, abs=1e-12)


def test_inner_product_disjoint_supports():
    # supports {(0,0,1),(1,1,2),(2,2,0)} and {(0,1,0),(1,2,1),(2,0,2)} are disjoint
    a = superpose(S33, spatial_ghz_terms((0, 1), k=0))
    b = superpose(S33, spatial_ghz_terms((1, 0), k=0))
    assert inner_product(a, b) == 0


def test_inner_product_conjugate_linearity():
    a = superpose(S33, [((0, 0, 0, 0, 0, 0), 1.0), ((1, 1, 1, 0, 0, 0), 1j)])
    b = superpose(S33, [((0, 0, 0, 0, 0, 0), 1.0), ((1, 1, 1, 0, 0, 0), 1.0)])
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)))


def test_inner_product_shape_mismatch():
    a = basis_state(S33, (0, 0, 0), (0, 0, 0))
    b = basis_state(SystemShape(3, 2), (0, 0), (0, 0))
    with pytest.raises(ValueError):
        inner_product(a, b)


def test_inner_product_mixed_representations():
    a = superpose(S33, spatial_ghz_terms((1, 2), k=1))
    b = convert_representation(a, "dense")
    assert inner_product(a, b) == pytest.approx(1.0, abs=1e-12)


def test_factor_product_state():
    spatial = RegisterState.from_terms(3, 3, [((j, j, j), 1.0) for j in range(3)])
    oam = RegisterState.from_terms(3, 3, [((0, 1, 2), 1.0), ((1, 1, 1), 1j)])
    s = from_register_factors(spatial, oam)
    factors = factor_across_registers(s)
    assert factors is not None
    got_spatial, got_oam = factors
    assert got_spatial.fidelity(spatial) == pytest.approx(1.0, abs=1e-12)
    assert got_oam.fidelity(oam) == pytest.approx(1.0, abs=1e-12)


def test_factor_rebuild_matches_original():
    spatial = RegisterState.from_terms(3, 3, [((0, 1, 2), 1.0), ((2, 0, 1), -1j)])
    oam = RegisterState.from_terms(3, 3, [((j, j, j), np.exp(0.7j * j)) for j in range(3)])
    s = from_register_factors(spatial, oam)
    got_spatial, got_oam = factor_across_registers(s)
    rebuilt = from_register_factors(got_spatial, got_oam)
    assert fidelity(rebuilt, s) >= 1 - 1e-9


def test_factor_oam_phase_is_canonical():
    # global phase must land on the spatial factor
    spatial = RegisterState.from_terms(2, 2, [((0, 0), 1.0), ((1, 1), 1.0)])
    oam = RegisterState.from_terms(2, 2, [((0, 1), 1j), ((1, 0), -1j)])
    _, got_oam = factor_across_registers(from_register_factors(spatial, oam))
    first = got_oam.amplitudes[min(got_oam.amplitudes)]
    assert first.imag == pytest.approx(0.0, abs=1e-12)
    assert first.real > 0


def test_factor_entangled_state_returns_none():
    terms = [((j, j, j, j, j, j), 1.0) for j in range(3)]
    s = superpose(S33, terms)
    assert factor_across_registers(s) is None


def test_convert_round_trip_preserves_amplitudes():
    s = superpose(S33, spatial_ghz_terms((2, 1), k=2))
    dense = convert_representation(s, "dense")
    back = convert_representation(dense, "sparse")
    assert dense.representation == "dense"
    assert back.representation == "sparse"
    for levels, amp in s.items():
        assert back.amplitude(levels) == pytest.approx(amp, abs=1e-15)
    assert back.nnz == s.nnz


def test_dense_cap_refused():
    shape = SystemShape(4, 8)  # 4**16 amplitudes > 2**26
    with pytest.raises(CapExceededError):
        basis_state(shape, (0,) * 8, (0,) * 8, representation="dense")


def test_dense_cap_override():
    shape = SystemShape(2, 2)
    with pytest.raises(CapExceededError):
        superpose(shape, [((0, 0, 0, 0), 1.0)], representation="dense", cap=8)


def test_auto_representation_switches_to_dense():
    shape = SystemShape(2, 2)  # sparse cutoff d*n*n = 8
    few = superpose(shape, [((0, 0, 0, 0), 1.0)])
    assert few.representation == "sparse"
    many = superpose(
        shape, [(shape.levels_of(i), 1.0) for i in range(shape.dense_size)]
    )
    assert many.representation == "dense"


def test_uniform_dense_to_sparse_keeps_every_entry():
    shape = SystemShape(2, 2)
    uniform = superpose(
        shape, [(shape.levels_of(i), 1.0) for i in range(shape.dense_size)]
    )
    back = convert_representation(uniform, "sparse")
    assert back.nnz == shape.dense_size
    for levels, amp in back.items():
        assert amp == pytest.approx(0.25, abs=1e-15)


def test_norm_preserved_for_random_superpositions():
    rng = np.random.default_rng(11)
    shape = SystemShape(3, 2)
    for _ in range(25):
        count = rng.integers(1, 12)
        terms = []
        for _ in range(count):
            levels = tuple(rng.integers(0, 3, size=4))
            terms.append((levels, complex(rng.normal(), rng.normal())))
        try:
            s = superpose(shape, terms)
        except DegenerateStateError:
            continue
        assert s.norm() == pytest.approx(1.0, abs=1e-12)
        assert inner_product(s, s).real == pytest.approx(1.0, abs=1e-12)
