"""Gate constructors and symplectic checks."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from otasim.sympcore import (
    beam_splitter_gate,
    bs_array,
    bs_pair_order,
    complex_squeeze_split,
    complex_squeezer_gate,
    is_symplectic,
    phase_shift_gate,
    squeezer_gate,
    symplectic_form,
)

angles = st.floats(-10.0, 10.0, allow_nan=False)


def test_symplectic_form_blocks():
    om = symplectic_form(3)
    assert_allclose(om[:3, 3:], np.eye(3))
    assert_allclose(om[3:, :3], -np.eye(3))
    assert_allclose(om @ om, -np.eye(6))


def test_symplectic_form_rejects_nonpositive():
    with pytest.raises(ValueError):
        symplectic_form(0)


@settings(max_examples=40, deadline=None)
@given(st.lists(angles, min_size=1, max_size=6))
def test_phase_shift_is_orthosymplectic(phis):
    S = phase_shift_gate(np.array(phis))
    assert is_symplectic(S).ok
    assert_allclose(S @ S.T, np.eye(2 * len(phis)), atol=1e-12)


def test_phase_shift_composition():
    """Rotations in each mode plane add up: S(a) S(b) = S(a+b)."""
    a = np.array([0.3, -1.1])
    b = np.array([0.8, 0.25])
    assert_allclose(
        phase_shift_gate(a) @ phase_shift_gate(b),
        phase_shift_gate(a + b),
        atol=1e-14,
    )


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3.0, 3.0, allow_nan=False), min_size=1, max_size=6))
def test_squeezer_is_symplectic(zs):
    S = squeezer_gate(np.array(zs))
    assert is_symplectic(S).ok


def test_squeezer_scales_quadratures():
    S = squeezer_gate(np.array([0.7]))
    assert_allclose(np.diag(S), [np.exp(-0.7), np.exp(0.7)])


def test_squeezer_rejects_nonfinite():
    with pytest.raises(ValueError):
        squeezer_gate(np.array([np.inf]))


def test_beam_splitter_acts_on_pair_only():
    S = beam_splitter_gate(0.4, 1, 3, 4)
    # mode 2 and mode 4 untouched in both sectors
    for idx in (1, 3, 5, 7):
        e = np.zeros(8)
        e[idx] = 1.0
        assert_allclose(S @ e, e)
    assert is_symplectic(S).ok


def test_beam_splitter_index_validation():
    with pytest.raises(ValueError):
        beam_splitter_gate(0.1, 2, 2, 4)
    with pytest.raises(ValueError):
        beam_splitter_gate(0.1, 0, 1, 4)
    with pytest.raises(ValueError):
        beam_splitter_gate(0.1, 1, 5, 4)


def test_bs_pair_order_triangular():
    assert bs_pair_order(4) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert len(bs_pair_order(7)) == 21


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.data())
def test_bs_array_matches_gate_product(N, data):
    """The fast column-update array equals the explicit gate product."""
    pairs = bs_pair_order(N)
    thetas = np.array(
        [data.draw(st.floats(-4.0, 4.0, allow_nan=False)) for _ in pairs]
    )
    expected = np.eye(2 * N)
    for theta, (j, k) in zip(thetas, pairs):
        expected = expected @ beam_splitter_gate(theta, j, k, N)
    assert_allclose(bs_array(thetas, N), expected, atol=1e-12)


def test_bs_array_length_check():
    with pytest.raises(ValueError):
        bs_array(np.zeros(5), 4)


def test_complex_squeezer_reduces_to_squeezer_at_zero_phase():
    assert_allclose(
        complex_squeezer_gate(0.6, 1, 1), squeezer_gate(np.array([0.6])), atol=1e-14
    )


@settings(max_examples=60, deadline=None)
@given(st.floats(-2.5, 2.5, allow_nan=False), st.floats(-np.pi, np.pi, allow_nan=False))
def test_complex_squeeze_split_round_trip(xi, phi):
    zeta = xi * np.exp(1j * phi)
    xi2, phi2 = complex_squeeze_split(zeta)
    assert 0.0 <= phi2 < np.pi
    assert abs(xi2 * np.exp(1j * phi2) - zeta) < 1e-12 or abs(
        -xi2 * np.exp(1j * (phi2 + np.pi)) - zeta
    ) < 1e-12


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-2.0, 2.0, allow_nan=False),
    st.floats(-np.pi, np.pi, allow_nan=False),
    st.integers(1, 4),
)
def test_complex_squeezer_symplectic_and_symmetric(xi, phi, mode):
    S = complex_squeezer_gate(xi * np.exp(1j * phi), 4, mode)
    assert is_symplectic(S).ok
    assert_allclose(S, S.T, atol=1e-12)


def test_is_symplectic_flags_defect():
    bad = np.eye(4)
    bad[0, 0] = 1.5
    check = is_symplectic(bad)
    assert not check.ok
    assert check.residual > 0.4


def test_is_symplectic_shape_validation():
    with pytest.raises(ValueError):
        is_symplectic(np.eye(3))
    with pytest.raises(ValueError):
        is_symplectic(np.zeros((2, 4)))
