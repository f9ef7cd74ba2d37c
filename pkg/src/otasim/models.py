"""Hamiltonian matrices for discretized free scalar theories.

Each builder returns a :class:`HamiltonianMatrix` holding the two N x N
blocks of H = H^phi (+) H^pi on a periodic 1D lattice of spacing epsilon.
The five families are the relativistic scalar, the fractional-Laplacian
(long-range) scalar, the non-relativistic Schroedinger field, a scalar on
curved spacetime with a conformal profile, and the ultra-local pre-quench
Hamiltonian whose ground state is the optical vacuum.

Circulant blocks are diagonalized analytically by the real DFT basis; the
eigenvalue of the row-j eigenvector is the cosine transform of the first
column at frequency j-1, so degenerate partners sit at rows j and N+2-j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

#: Relative tolerance for the commuting-blocks eligibility check.
TOL_COMMUTE = 1e-10

#: Relative tolerance for positive semi-definiteness of the blocks.
TOL_PSD = 1e-10


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Block-diagonal Hamiltonian H = h_phi (+) h_pi on N modes.

    Attributes:
        N: mode count.
        epsilon: lattice spacing.
        h_phi: real symmetric N x N field block.
        h_pi: real symmetric N x N momentum block.
        theory: short tag naming the builder family.
        params: parameter record (mass, exponent, potential, ...).
    """

    N: int
    epsilon: float
    h_phi: NDArray[np.float64]
    h_pi: NDArray[np.float64]
    theory: str
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        """Check symmetry, positive semi-definiteness, and block commutation.

        Raises:
            ValueError: if either block is asymmetric, has an eigenvalue
                below -TOL_PSD * ||h||, or the blocks fail to commute within
                TOL_COMMUTE * ||h_phi|| * ||h_pi||.
        """
        for name, h in (("h_phi", self.h_phi), ("h_pi", self.h_pi)):
            scale = max(1.0, float(np.abs(h).max()))
            if np.abs(h - h.T).max() > 1e-12 * scale:
                raise ValueError(f"{name} is not symmetric")
            lo = float(np.linalg.eigvalsh(h).min())
            if lo < -TOL_PSD * scale:
                raise ValueError(f"{name} is not positive semi-definite ({lo=})")
        comm = self.h_phi @ self.h_pi - self.h_pi @ self.h_phi
        bound = TOL_COMMUTE * max(1.0, np.abs(self.h_phi).max()) * max(
            1.0, np.abs(self.h_pi).max()
        )
        if np.abs(comm).max() > bound:
            raise ValueError("h_phi and h_pi do not commute; not OTA-eligible")

    def full(self) -> NDArray[np.float64]:
        """Return the 2N x 2N matrix h_phi (+) h_pi."""
        out = np.zeros((2 * self.N, 2 * self.N))
        out[: self.N, : self.N] = self.h_phi
        out[self.N :, self.N :] = self.h_pi
        return out


@dataclass(frozen=True)
class CirculantEigensystem:
    """Analytic eigensystem of a circulant block: DFT-ordered values and basis."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]


def circulant_eigenvalues(first_column: NDArray[np.float64]) -> NDArray[np.float64]:
    """Eigenvalues of the symmetric circulant with the given first column.

    lambda_j = sum_k h_k cos(2 pi (j-1)(k-1) / N) for j = 1..N, which pairs
    with the real DFT eigenvector rows of :func:`real_dft_eigenvectors`.

    :param first_column: length-N first column h of the circulant.
    """
    h = np.atleast_1d(np.asarray(first_column, dtype=float))
    N = h.shape[0]
    if N == 0:
        raise ValueError("empty first column")
    j = np.arange(N)[:, None]
    k = np.arange(N)[None, :]
    return np.cos(2 * np.pi * j * k / N) @ h


def real_dft_eigenvectors(N: int) -> NDArray[np.float64]:
    """Orthonormal real DFT basis as rows of an N x N matrix.

    Row 1 is the constant vector 1/sqrt(N). For each degenerate frequency
    pair, the cosine profile sits at row j and the sine profile at row
    N+2-j, both with prefactor sqrt(2/N). Even N adds the alternating row
    (1,-1,...)/sqrt(N) at j = N/2 + 1. Row j diagonalizes any symmetric
    circulant with eigenvalue lambda_j from :func:`circulant_eigenvalues`.
    """
    if N < 1:
        raise ValueError(f"mode count must be positive, got {N}")
    sites = np.arange(N)
    P = np.zeros((N, N))
    P[0] = 1.0 / np.sqrt(N)
    j = 2
    while j < N + 2 - j:
        freq = 2 * np.pi * (j - 1) * sites / N
        P[j - 1] = np.sqrt(2.0 / N) * np.cos(freq)
        P[N + 1 - j] = np.sqrt(2.0 / N) * np.sin(freq)
        j += 1
    if N % 2 == 0:
        P[N // 2] = (-1.0) ** sites / np.sqrt(N)
    return P


def _periodic_tridiagonal(N: int, mu: NDArray[np.float64], nu: float) -> NDArray[np.float64]:
    """Symmetric periodic tridiagonal with diagonal mu and coupling nu.

    Built as nu * (C + C^T) + diag(mu) with C the cyclic shift, so the N=2
    wrap-around correctly doubles the off-diagonal coupling.
    """
    shift = np.roll(np.eye(N), 1, axis=1)
    return nu * (shift + shift.T) + np.diag(mu)


def relativistic_hamiltonian(N: int, m: float, epsilon: float) -> HamiltonianMatrix:
    """Discretized relativistic scalar: circulant h_phi, h_pi = (1/eps) 1.

    The field block has diagonal mu = eps*m^2 - 2*nu and nearest-neighbor
    coupling nu = -1/eps; its circulant eigenvalues are eps*omega_j^2 with
    the lattice dispersion omega_j^2 = m^2 + (4/eps^2) sin^2(pi (j-1)/N).

    Args:
        N: mode count (>= 2).
        m: mass (>= 0); m = 0 produces a genuine zero mode.
        epsilon: lattice spacing (> 0).
    """
    if N < 2:
        raise ValueError("need at least two modes")
    if epsilon <= 0:
        raise ValueError("lattice spacing must be positive")
    if m < 0:
        raise ValueError("mass must be nonnegative")
    nu = -1.0 / epsilon
    mu = np.full(N, epsilon * m**2 - 2 * nu)
    h_phi = _periodic_tridiagonal(N, mu, nu)
    h_pi = np.eye(N) / epsilon
    return HamiltonianMatrix(
        N, epsilon, h_phi, h_pi, "relativistic", {"m": m}
    )


def fractional_couplings(N: int, alpha: float) -> NDArray[np.float64]:
    """Lattice couplings f_{jj'}(alpha) of the fractional Laplacian.

    Computed from the periodic-lattice DFT sum

        f_{jj'} = (2^alpha / N) * sum_k cos(2 pi (j-j') k / N) |sin(pi k/N)|^alpha,

    whose circulant eigenvalues are 2^alpha |sin(pi (j-1)/N)|^alpha. At
    alpha = 2 this reduces to 2*delta - delta_{neighbor} (with the N=2
    wrap-around doubling included automatically).
    """
    if alpha <= 0:
        raise ValueError("coupling exponent alpha must be positive")
    k = np.arange(N)
    spectrum = 2.0**alpha * np.abs(np.sin(np.pi * k / N)) ** alpha
    sep = np.arange(N)
    profile = np.cos(2 * np.pi * np.outer(sep, k) / N) @ spectrum / N
    j = np.arange(N)
    return profile[np.abs(j[:, None] - j[None, :])]


def fractional_hamiltonian(
    N: int, m: float, epsilon: float, alpha: float
) -> HamiltonianMatrix:
    """Fractional-Laplacian scalar with tunable coupling range alpha.

    h_phi = eps * m^alpha * 1 + f(alpha) / eps with the App-C-style lattice
    couplings, giving circulant eigenvalues eps * omega_j^2(alpha) for
    omega_j^2 = m^alpha + (2^alpha/eps^2) |sin(pi (j-1)/N)|^alpha. At
    alpha = 2 and m in {0, 1} this equals the relativistic builder.

    The massless case uses 0^alpha = 0 for continuity.
    """
    if N < 2:
        raise ValueError("need at least two modes")
    if epsilon <= 0:
        raise ValueError("lattice spacing must be positive")
    if m < 0:
        raise ValueError("mass must be nonnegative")
    mass_term = 0.0 if m == 0 else float(m) ** alpha
    f = fractional_couplings(N, alpha)
    h_phi = epsilon * mass_term * np.eye(N) + f / epsilon
    h_pi = np.eye(N) / epsilon
    return HamiltonianMatrix(
        N, epsilon, h_phi, h_pi, "fractional", {"m": m, "alpha": alpha}
    )


def nonrelativistic_hamiltonian(
    N: int, m: float, epsilon: float, V: NDArray[np.float64]
) -> HamiltonianMatrix:
    """Non-relativistic (Schroedinger) field in an external potential.

    Both blocks are the same periodic tridiagonal with site diagonal
    mu_j = V_j - 2*nu and hopping nu = -1/(2 m eps^2); equal blocks mean
    gamma_j = 1, so the compiled circuit needs no squeezing.
    """
    if m <= 0:
        raise ValueError("mass must be positive for the non-relativistic theory")
    if epsilon <= 0:
        raise ValueError("lattice spacing must be positive")
    V = np.atleast_1d(np.asarray(V, dtype=float))
    if V.shape != (N,):
        raise ValueError(f"potential must have length {N}, got {V.shape}")
    nu = -1.0 / (2 * m * epsilon**2)
    h = _periodic_tridiagonal(N, V - 2 * nu, nu)
    return HamiltonianMatrix(
        N, epsilon, h, h.copy(), "nonrelativistic", {"m": m, "V": V.copy()}
    )


def curved_spacetime_hamiltonian(
    N: int, m: float, epsilon: float, conformal_factor, t: float = 0.0
) -> HamiltonianMatrix:
    """Scalar on a conformally curved background at one time snapshot.

    The profile enters as an effective mass m_eff(t, x) = m * f(t, x)
    sampled at the sites x_j = eps * j (j = 1..N), so h_phi is periodic
    tridiagonal with mu_j = eps * m_eff^2 - 2*nu, nu = -1/eps, and
    h_pi = (1/eps) 1. A flat profile f = 1 reproduces the relativistic
    builder; spatially constant profiles keep h_phi circulant.

    :param conformal_factor: callable f(t, x) -> positive finite float.
    :param t: time at which the profile is sampled.
    """
    if N < 2:
        raise ValueError("need at least two modes")
    if epsilon <= 0:
        raise ValueError("lattice spacing must be positive")
    x = epsilon * np.arange(1, N + 1)
    f = np.asarray([conformal_factor(t, xj) for xj in x], dtype=float)
    if not np.all(np.isfinite(f)) or np.any(f <= 0):
        raise ValueError("conformal profile must be positive and finite at all sites")
    nu = -1.0 / epsilon
    mu = epsilon * (m * f) ** 2 - 2 * nu
    h_phi = _periodic_tridiagonal(N, mu, nu)
    h_pi = np.eye(N) / epsilon
    return HamiltonianMatrix(
        N, epsilon, h_phi, h_pi, "curved", {"m": m, "t": t}
    )


def prequench_hamiltonian(N: int, epsilon: float) -> HamiltonianMatrix:
    """Ultra-local pre-quench Hamiltonian h_phi = h_pi = (1/eps) 1.

    Its ground state is the optical vacuum with covariance (1/2) 1_{2N},
    the initial state of every quench protocol here.
    """
    if epsilon <= 0:
        raise ValueError("lattice spacing must be positive")
    h = np.eye(N) / epsilon
    return HamiltonianMatrix(N, epsilon, h, h.copy(), "prequench", {})
