"""Shared helpers for the test suite.

Random Hamiltonians are built on the analytic side (from a chosen DFT
spectrum) so that positive definiteness and circulant structure hold by
construction and every failure points at the code under test.
"""

import numpy as np

from otasim.models import HamiltonianMatrix


def random_circulant(N, rng, lo=0.05, hi=3.0):
    """Random symmetric positive definite circulant via its DFT spectrum."""
    lam = rng.uniform(lo, hi, size=N)
    for j in range(1, N // 2 + 1):
        lam[N - j] = lam[j]
    F = np.fft.fft(np.eye(N)) / np.sqrt(N)
    h = (F.conj().T @ np.diag(lam) @ F).real
    return 0.5 * (h + h.T)


def random_circulant_hamiltonian(N, rng, epsilon=1.0):
    """Eligible Hamiltonian with independently random circulant blocks."""
    return HamiltonianMatrix(
        N,
        epsilon,
        random_circulant(N, rng),
        random_circulant(N, rng),
        "random-circulant",
    )


def bump_profile(t, x):
    """Smooth positive conformal factor used for curved-background tests."""
    return 1.0 + 0.5 * np.exp(-((x - 3.0) ** 2) / 2.0) * np.cos(0.3 * t)
