"""Gaussian states, restrictions, and Renyi-2 measures."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_circulant_hamiltonian
from otasim.compiler import compile, evolution_matrix
from otasim.engine import (
    GaussianState,
    coherent_state,
    evolve,
    renyi2_entropy,
    renyi2_mutual_information,
    restrict,
    symplectic_spectrum,
    vacuum_state,
)
from otasim.models import relativistic_hamiltonian
from otasim.sympcore import squeezer_gate


def thermal_state(N, n):
    """Product state with n photons per mode: covariance (n + 1/2) 1."""
    return GaussianState(N, np.zeros(2 * N), (n + 0.5) * np.eye(2 * N))


def test_vacuum_basics():
    v = vacuum_state(3)
    assert renyi2_entropy(v) == 0.0
    assert_allclose(symplectic_spectrum(v.cov), [0.5, 0.5, 0.5])


def test_vacuum_rejects_bad_mode_count():
    with pytest.raises(ValueError):
        vacuum_state(0)


def test_coherent_state_mean_layout():
    s = coherent_state(np.array([1.0 + 2.0j, -0.5j]))
    assert_allclose(s.mean, np.sqrt(2) * np.array([1.0, -0.0, 2.0, -0.5]))
    assert renyi2_entropy(s) == 0.0


def test_state_shape_validation():
    with pytest.raises(ValueError):
        GaussianState(2, np.zeros(3), np.eye(4))
    asym = np.eye(4)
    asym[0, 1] = 0.5
    with pytest.raises(ValueError, match="symmetric"):
        GaussianState(2, np.zeros(4), asym)


def test_evolve_transforms_moments():
    S = squeezer_gate(np.array([0.6, -0.2]))
    s = evolve(coherent_state(np.array([1.0, 1.0j])), S)
    assert_allclose(s.mean, S @ (np.sqrt(2) * np.array([1.0, 0.0, 0.0, 1.0])))
    assert_allclose(s.cov, 0.5 * S @ S.T, atol=1e-14)


def test_evolve_rejects_nonsymplectic():
    with pytest.raises(ValueError, match="symplectic"):
        evolve(vacuum_state(2), 2.0 * np.eye(4))


def test_restrict_keeps_sector_pairing():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 8))
    cov = A @ A.T + np.eye(8)
    s = GaussianState(4, rng.normal(size=8), cov)
    sub = restrict(s, [2, 4])
    idx = [1, 3, 5, 7]
    assert_allclose(sub.cov, cov[np.ix_(idx, idx)])
    assert_allclose(sub.mean, s.mean[idx])


def test_restrict_validation():
    s = vacuum_state(4)
    with pytest.raises(ValueError):
        restrict(s, [])
    with pytest.raises(ValueError):
        restrict(s, [3, 2])
    with pytest.raises(ValueError):
        restrict(s, [0, 1])
    with pytest.raises(ValueError):
        restrict(s, [4, 5])


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 10.0, allow_nan=False))
def test_thermal_entropy_closed_form(n):
    """Per mode, S2 of covariance (n + 1/2) 1 is ln(1 + 2n)."""
    s = thermal_state(1, n)
    assert renyi2_entropy(s) == pytest.approx(np.log1p(2 * n), abs=1e-12)


def test_entropy_additive_over_product_states():
    s = thermal_state(3, 0.7)
    assert renyi2_entropy(s) == pytest.approx(3 * np.log1p(1.4), rel=1e-12)


def test_entropy_clamps_roundoff_but_rejects_corruption():
    eps = 1e-12
    s = GaussianState(1, np.zeros(2), (0.5 - eps) * np.eye(2))
    assert renyi2_entropy(s) == 0.0
    bad = GaussianState(1, np.zeros(2), 0.4 * np.eye(2))
    with pytest.raises(ValueError):
        renyi2_entropy(bad)
    # An odd count of negative directions flips the determinant sign.
    with pytest.raises(ValueError, match="positive definite"):
        renyi2_entropy(GaussianState(1, np.zeros(2), np.diag([-1.0, 1.0])))


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 6.0), st.randoms(use_true_random=False))
def test_global_entropy_invariant_under_evolution(N, t, pyrng):
    """det(2 sigma) is symplectic-invariant, so global S2 never drifts."""
    rng = np.random.default_rng(pyrng.randrange(2**32))
    S = evolution_matrix(compile(random_circulant_hamiltonian(N, rng)), t)
    before = thermal_state(N, 0.4)
    after = evolve(before, S)
    assert renyi2_entropy(after) == pytest.approx(renyi2_entropy(before), abs=1e-9)


def test_purity_survives_strong_squeezing():
    """Squeezed spectra must not overflow the determinant evaluation."""
    z = np.array([12.0, -11.0, 10.5])
    s = evolve(vacuum_state(3), squeezer_gate(z))
    assert renyi2_entropy(s) == pytest.approx(0.0, abs=1e-8)


def test_mutual_information_of_product_state_is_zero():
    s = thermal_state(4, 1.3)
    assert renyi2_mutual_information(s, [1, 2], [3, 4]) == 0.0


def test_mutual_information_positive_after_quench():
    circ = compile(relativistic_hamiltonian(8, 1.0, 1.0))
    s = evolve(vacuum_state(8), evolution_matrix(circ, 6.0))
    i2 = renyi2_mutual_information(s, [1, 2], [5, 6])
    assert i2 > 1e-4


def test_mutual_information_symmetric_in_regions():
    circ = compile(relativistic_hamiltonian(8, 1.0, 1.0))
    s = evolve(vacuum_state(8), evolution_matrix(circ, 4.0))
    a, b = [1, 2], [4, 5, 6]
    assert renyi2_mutual_information(s, a, b) == pytest.approx(
        renyi2_mutual_information(s, b, a), rel=1e-12
    )


def test_mutual_information_rejects_overlap():
    with pytest.raises(ValueError, match="disjoint"):
        renyi2_mutual_information(vacuum_state(4), [1, 2], [2, 3])


def test_symplectic_spectrum_thermal_and_squeezed():
    assert_allclose(symplectic_spectrum(thermal_state(2, 1.5).cov), [2.0, 2.0])
    sq = evolve(vacuum_state(1), squeezer_gate(np.array([0.9])))
    assert_allclose(symplectic_spectrum(sq.cov), [0.5], atol=1e-12)


def test_symplectic_spectrum_rejects_asymmetric():
    bad = np.eye(4)
    bad[0, 1] = 1e-3
    with pytest.raises(ValueError):
        symplectic_spectrum(bad)
