import math

import numpy as np
import pytest

from hyperghz.catalog import (
    GhzLabel,
    all_labels,
    ghz_spatial,
    hyper_initial,
    oam_auxiliary,
)
from hyperghz.state import (
    CapExceededError,
    SystemShape,
    factor_across_registers,
    inner_product,
)

S33 = SystemShape(3, 3)
OMEGA3 = np.exp(2j * np.pi / 3)


def test_ghz_spatial_zero_label():
    s = ghz_spatial(S33, GhzLabel((0, 0), 0))
    for j in range(3):
        assert s.amplitude((j, j, j, 0, 0, 0)) == pytest.approx(
            1 / math.sqrt(3), abs=1e-15
        )
    assert s.nnz == 3


def test_ghz_spatial_offsets_and_phase():
    # label x=(1,2), k=1 term by term: |012> + w|120> + w^2|201>, w = exp(2*pi*i/3)
    s = ghz_spatial(S33, GhzLabel((1, 2), 1))
    root3 = math.sqrt(3)
    assert s.amplitude((0, 1, 2, 0, 0, 0)) == pytest.approx(1 / root3, abs=1e-15)
    assert s.amplitude((1, 2, 0, 0, 0, 0)) == pytest.approx(OMEGA3 / root3, abs=1e-15)
    assert s.amplitude((2, 0, 1, 0, 0, 0)) == pytest.approx(OMEGA3**2 / root3, abs=1e-15)


def test_ghz_spatial_qubit_singlet_like():
    s = ghz_spatial(SystemShape(2, 2), GhzLabel((1,), 1))
    root2 = math.sqrt(2)
    assert s.amplitude((0, 1, 0, 0)) == pytest.approx(1 / root2, abs=1e-15)
    assert s.amplitude((1, 0, 0, 0)) == pytest.approx(-1 / root2, abs=1e-15)


def test_ghz_spatial_support_structure():
    for d, n in [(2, 3), (3, 3), (5, 3), (4, 4)]:
        shape = SystemShape(d, n)
        x = tuple((2 * i + 1) % d for i in range(n - 1))
        s = ghz_spatial(shape, GhzLabel(x, d - 1))
        items = dict(s.items())
        assert len(items) == d
        expected_support = {
            tuple((j + off) % d for off in (0,) + x) + (0,) * n for j in range(d)
        }
        assert set(items) == expected_support
        for amp in items.values():
            assert abs(amp) == pytest.approx(1 / math.sqrt(d), abs=1e-15)


def test_ghz_spatial_support_ignores_phase_index():
    shape = SystemShape(4, 3)
    supports = []
    for k in range(4):
        s = ghz_spatial(shape, GhzLabel((1, 3), k))
        supports.append({t for t, _ in s.items()})
    assert all(sup == supports[0] for sup in supports)


def test_ghz_spatial_rejects_bad_labels():
    with pytest.raises(ValueError):
        ghz_spatial(S33, GhzLabel((0,), 0))  # wrong length
    with pytest.raises(ValueError):
        ghz_spatial(S33, GhzLabel((0, 3), 0))  # offset out of range
    with pytest.raises(ValueError):
        ghz_spatial(S33, GhzLabel((0, 0), 3))  # phase out of range


def test_oam_auxiliary_d3():
    s = oam_auxiliary(S33)
    for j in range(3):
        assert s.amplitude((0, 0, 0, j, j, j)) == pytest.approx(
            1 / math.sqrt(3), abs=1e-15
        )
    assert s.nnz == 3


@pytest.mark.parametrize("d,n", [(2, 3), (4, 2)])
def test_oam_auxiliary_general(d, n):
    s = oam_auxiliary(SystemShape(d, n))
    assert s.nnz == d
    for j in range(d):
        assert s.amplitude((0,) * n + (j,) * n) == pytest.approx(
            1 / math.sqrt(d), abs=1e-15
        )


def test_hyper_initial_amplitude_grid():
    s = hyper_initial(S33, GhzLabel((0, 0), 0))
    assert s.nnz == 9
    for j in range(3):
        for l in range(3):
            assert s.amplitude((j, j, j, l, l, l)) == pytest.approx(1 / 3, abs=1e-15)


def test_hyper_initial_factors_into_its_parts():
    from hyperghz.catalog import ghz_register, oam_register

    for label in all_labels(S33):
        factors = factor_across_registers(hyper_initial(S33, label))
        assert factors is not None
        spatial, oam = factors
        assert spatial.fidelity(ghz_register(S33, label)) == pytest.approx(
            1.0, abs=1e-12
        )
        assert oam.fidelity(oam_register(S33)) == pytest.approx(1.0, abs=1e-12)


def test_hyper_initial_qubit_pair():
    s = hyper_initial(SystemShape(2, 2), GhzLabel((0,), 0))
    for j in range(2):
        for l in range(2):
            assert s.amplitude((j, j, l, l)) == pytest.approx(0.5, abs=1e-15)


def test_label_coerces_iterable_offsets():
    assert GhzLabel([0, 1], 2) == GhzLabel((0, 1), 2)
    assert hash(GhzLabel([0, 1], 2)) == hash(GhzLabel((0, 1), 2))


def test_all_labels_counts_and_order():
    labels = all_labels(S33)
    assert len(labels) == 27
    assert len(set(labels)) == 27
    assert labels[0] == GhzLabel((0, 0), 0)
    assert labels[1] == GhzLabel((0, 0), 1)
    assert labels[3] == GhzLabel((0, 1), 0)
    assert labels[-1] == GhzLabel((2, 2), 2)
    as_tuples = [(lb.x, lb.k) for lb in labels]
    assert as_tuples == sorted(as_tuples)


@pytest.mark.parametrize("d,n,count", [(2, 2, 4), (5, 3, 125)])
def test_all_labels_sizes(d, n, count):
    assert len(all_labels(SystemShape(d, n))) == count


def test_all_labels_enumeration_cap():
    with pytest.raises(CapExceededError):
        all_labels(SystemShape(2, 21))  # 2**21 > 10**6
    assert len(all_labels(SystemShape(2, 21), cap=2**21)) == 2**21


def test_gram_matrix_is_identity_d3():
    labels = all_labels(S33)
    states = [ghz_spatial(S33, lb) for lb in labels]
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            expected = 1.0 if i == j else 0.0
            assert abs(inner_product(a, b) - expected) < 1e-12
