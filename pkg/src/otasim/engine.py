"""Gaussian states, symplectic evolution, and Renyi-2 information measures.

A Gaussian state is a mean vector r (length 2N) and covariance sigma
(2N x 2N) in the (phi_1..phi_N, pi_1..pi_N) ordering, with the vacuum at
sigma = (1/2) 1. The Renyi-2 entropy has the closed form S2 = ln det(2
sigma) / 2, evaluated through a symmetric factorization so squeezed spectra
cannot overflow, and mutual information is the usual S2(A) + S2(B) -
S2(AB) of restricted states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .sympcore import is_symplectic, symplectic_form

#: Values of S2 in (-TOL_ENTROPY, 0) are treated as roundoff and clamped to
#: zero; anything more negative signals a corrupted covariance.
TOL_ENTROPY = 1e-9


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of an N-mode Gaussian state."""

    N: int
    mean: NDArray[np.float64]
    cov: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.mean.shape != (2 * self.N,) or self.cov.shape != (2 * self.N, 2 * self.N):
            raise ValueError("mean/covariance shape mismatch")
        scale = max(1.0, float(np.abs(self.cov).max()))
        if np.abs(self.cov - self.cov.T).max() > 1e-12 * scale:
            raise ValueError("covariance must be symmetric")


def vacuum_state(N: int) -> GaussianState:
    """The N-mode vacuum: zero mean, covariance (1/2) 1_{2N}."""
    if N < 1:
        raise ValueError(f"mode count must be positive, got {N}")
    return GaussianState(N, np.zeros(2 * N), 0.5 * np.eye(2 * N))


def coherent_state(alpha: NDArray[np.complex128]) -> GaussianState:
    """Coherent state with amplitudes alpha: displaced vacuum.

    Mean (phi_j, pi_j) = sqrt(2) (Re alpha_j, Im alpha_j).
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    N = alpha.shape[0]
    mean = np.sqrt(2.0) * np.concatenate([alpha.real, alpha.imag])
    return GaussianState(N, mean, 0.5 * np.eye(2 * N))


def evolve(state: GaussianState, S: NDArray[np.float64]) -> GaussianState:
    """Apply a symplectic matrix: mean -> S r, covariance -> S sigma S^T."""
    S = np.asarray(S, dtype=float)
    if S.shape != (2 * state.N, 2 * state.N):
        raise ValueError("dimension mismatch between state and matrix")
    check = is_symplectic(S)
    if not check.ok:
        raise ValueError(f"matrix is not symplectic (residual {check.residual:.3e})")
    cov = S @ state.cov @ S.T
    return GaussianState(state.N, S @ state.mean, 0.5 * (cov + cov.T))


def restrict(state: GaussianState, region: Sequence[int]) -> GaussianState:
    """Reduced state on a subset of modes (1-based, strictly increasing).

    Selects the region's rows/columns in both the phi and pi sectors,
    preserving the (phi.., pi..) ordering.
    """
    region = list(region)
    if not region:
        raise ValueError("region must be nonempty")
    if any(not 1 <= j <= state.N for j in region) or any(
        a >= b for a, b in zip(region, region[1:])
    ):
        raise ValueError("region indices must be strictly increasing within 1..N")
    idx = np.array([j - 1 for j in region] + [state.N + j - 1 for j in region])
    return GaussianState(len(region), state.mean[idx], state.cov[np.ix_(idx, idx)])


def renyi2_entropy(state: GaussianState) -> float:
    """Renyi-2 entropy S2 = ln det(2 sigma) / 2.

    Computed as a log-determinant via symmetric factorization. Small
    negative results from roundoff are clamped to zero; values below
    -TOL_ENTROPY raise, since a determinant genuinely under 1 means the
    covariance violates the uncertainty relation.
    """
    sign, logdet = np.linalg.slogdet(2.0 * state.cov)
    if sign <= 0:
        raise ValueError("covariance is not positive definite")
    s2 = 0.5 * float(logdet)
    if s2 < 0.0:
        if s2 < -TOL_ENTROPY:
            raise ValueError(f"entropy {s2:.3e} below roundoff tolerance")
        s2 = 0.0
    return s2


def renyi2_mutual_information(
    state: GaussianState, region_a: Sequence[int], region_b: Sequence[int]
) -> float:
    """I2 = S2(A) + S2(B) - S2(A u B) for disjoint mode regions."""
    set_a, set_b = set(region_a), set(region_b)
    if set_a & set_b:
        raise ValueError("regions must be disjoint")
    joint = sorted(set_a | set_b)
    i2 = (
        renyi2_entropy(restrict(state, sorted(set_a)))
        + renyi2_entropy(restrict(state, sorted(set_b)))
        - renyi2_entropy(restrict(state, joint))
    )
    if i2 < 0.0:
        if i2 < -1e-10:
            raise ValueError(f"mutual information {i2:.3e} below roundoff tolerance")
        i2 = 0.0
    return i2


def symplectic_spectrum(cov: NDArray[np.float64]) -> NDArray[np.float64]:
    """Symplectic eigenvalues of a covariance: moduli of eig(Omega sigma).

    Returns the N positive values sorted ascending; the vacuum gives all
    1/2 and purity means every value equals 1/2.
    """
    cov = np.asarray(cov, dtype=float)
    scale = max(1.0, float(np.abs(cov).max()))
    if np.abs(cov - cov.T).max() > 1e-10 * scale:
        raise ValueError("covariance must be symmetric")
    N = cov.shape[0] // 2
    eigs = np.abs(np.linalg.eigvals(symplectic_form(N) @ cov))
    # Moduli come in equal +- pairs; keep one of each.
    return np.sort(eigs)[::2]
