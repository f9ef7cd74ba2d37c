"""Symplectic linear algebra for optical Gaussian circuits.

Quadratures are ordered (phi_1..phi_N, pi_1..pi_N), so every 2N x 2N matrix
in this module is built from four N x N blocks acting on the field and
momentum sectors. All gate constructors return dense float64 arrays that
satisfy S @ Omega @ S.T = Omega to working precision.

Mode indices in the public API are 1-based, matching the usual labeling of
beam splitter angles theta_{jk} with 1 <= j < k <= N.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

#: Default symplecticity tolerance, relative to the squared max-norm of the
#: matrix under test (the defect M Omega M^T - Omega is quadratic in M).
TOL_SYMP = 1e-10


class SymplecticCheck(NamedTuple):
    """Result of a symplecticity test: pass/fail flag and max-norm residual."""

    ok: bool
    residual: float


def symplectic_form(N: int) -> NDArray[np.float64]:
    """Return the symplectic form Omega = [[0, 1_N], [-1_N, 0]].

    Args:
        N: number of modes.

    Returns:
        The 2N x 2N matrix with +1_N in the upper-right block and -1_N in
        the lower-left block (exact integer entries as floats).

    Raises:
        ValueError: if ``N < 1``.
    """
    if N < 1:
        raise ValueError(f"mode count must be positive, got {N}")
    eye = np.eye(N)
    zero = np.zeros((N, N))
    return np.block([[zero, eye], [-eye, zero]])


def phase_shift_gate(phases: NDArray[np.float64]) -> NDArray[np.float64]:
    """Return the N-mode phase shift S_PS(phi).

    Each mode j is rotated in its own (phi_j, pi_j) plane by the 2x2 block
    [[cos, sin], [-sin, cos]].

    Args:
        phases: vector of N rotation angles.

    Returns:
        The 2N x 2N symplectic (and orthogonal) matrix.
    """
    phases = np.atleast_1d(np.asarray(phases, dtype=float))
    if not np.all(np.isfinite(phases)):
        raise ValueError("phase shift angles must be finite")
    c = np.diag(np.cos(phases))
    s = np.diag(np.sin(phases))
    return np.block([[c, s], [-s, c]])


def squeezer_gate(z: NDArray[np.float64]) -> NDArray[np.float64]:
    """Return the N-mode squeezer S_Sq(z) = diag(e^{-z}, e^{z}).

    Args:
        z: vector of N squeezing amplitudes.

    Returns:
        The 2N x 2N diagonal symplectic matrix scaling phi_j by e^{-z_j}
        and pi_j by e^{+z_j}.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(z)):
        raise ValueError("squeezing amplitudes must be finite")
    return np.diag(np.concatenate([np.exp(-z), np.exp(z)]))


def beam_splitter_gate(theta: float, j: int, k: int, N: int) -> NDArray[np.float64]:
    """Return the two-mode beam splitter S_BS(theta_{jk}) on N modes.

    The gate rotates by theta in the (phi_j, phi_k) plane and identically in
    the (pi_j, pi_k) plane, leaving all other modes untouched.

    Args:
        theta: mixing angle.
        j: first mode index, 1-based.
        k: second mode index, 1-based, distinct from ``j``.
        N: total number of modes.

    Returns:
        The 2N x 2N orthosymplectic matrix.

    Raises:
        ValueError: if the mode indices coincide or fall outside 1..N.
    """
    if not (1 <= j <= N and 1 <= k <= N) or j == k:
        raise ValueError(f"invalid mode pair ({j}, {k}) for N={N}")
    block = np.eye(N)
    c, s = np.cos(theta), np.sin(theta)
    a, b = j - 1, k - 1
    block[a, a] = c
    block[b, b] = c
    block[a, b] = s
    block[b, a] = -s
    out = np.zeros((2 * N, 2 * N))
    out[:N, :N] = block
    out[N:, N:] = block
    return out


def complex_squeezer_gate(zeta: complex, N: int, mode: int) -> NDArray[np.float64]:
    """Return the single-mode complex squeezer S_CSq(zeta) embedded in N modes.

    With zeta = xi * e^{i Phi}, the 2x2 block on the target mode is

        cosh(xi) * 1_2 - sinh(xi) * [[cos Phi, sin Phi], [sin Phi, -cos Phi]],

    which is symmetric, symplectic, and reduces to the plain squeezer
    diag(e^{-xi}, e^{xi}) at Phi = 0. The phase is normalized to [0, pi) by
    flipping the sign of xi when needed.

    :param zeta: complex squeezing parameter.
    :param N: total number of modes.
    :param mode: target mode index, 1-based.
    """
    if not (1 <= mode <= N):
        raise ValueError(f"mode {mode} outside 1..{N}")
    xi, phi = complex_squeeze_split(zeta)
    ch, sh = np.cosh(xi), np.sinh(xi)
    block = np.array(
        [
            [ch - sh * np.cos(phi), -sh * np.sin(phi)],
            [-sh * np.sin(phi), ch + sh * np.cos(phi)],
        ]
    )
    out = np.eye(2 * N)
    a = mode - 1
    out[a, a] = block[0, 0]
    out[a, N + a] = block[0, 1]
    out[N + a, a] = block[1, 0]
    out[N + a, N + a] = block[1, 1]
    return out


def complex_squeeze_split(zeta: complex) -> tuple[float, float]:
    """Split zeta into (xi, Phi) with xi real and Phi in [0, pi).

    The representation zeta = xi e^{i Phi} is two-to-one over a full phase
    circle; restricting Phi to half the circle makes it unique by allowing
    negative xi.
    """
    zeta = complex(zeta)
    xi = abs(zeta)
    if xi == 0.0:
        return 0.0, 0.0
    phi = float(np.angle(zeta))
    if phi < 0.0:
        phi += np.pi
        xi = -xi
    if phi >= np.pi:  # angle(z) == pi lands here; fold to Phi = 0
        phi -= np.pi
        xi = -xi
    return xi, phi


def bs_pair_order(N: int) -> list[tuple[int, int]]:
    """Return the triangular ordering of beam splitter pairs for N modes.

    The sequence is (1,2), (1,3), ..., (1,N), (2,3), ..., (N-1,N) with
    1-based indices; its length is N(N-1)/2.
    """
    return [(j, k) for j in range(1, N) for k in range(j + 1, N + 1)]


def bs_array(thetas: NDArray[np.float64], N: int) -> NDArray[np.float64]:
    """Return the N-mode beam splitter array S_BS(theta).

    Args:
        thetas: angle sequence of length N(N-1)/2 in triangular order
            (theta_12, theta_13, ..., theta_1N, theta_23, ..., theta_{N-1,N}).
        N: number of modes.

    Returns:
        The ordered product S_BS(theta_12) @ S_BS(theta_13) @ ... applied
        left to right, a 2N x 2N orthosymplectic matrix.

    Raises:
        ValueError: if the sequence length is not N(N-1)/2.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    pairs = bs_pair_order(N)
    if thetas.shape != (len(pairs),):
        raise ValueError(
            f"expected {len(pairs)} angles for N={N}, got {thetas.shape}"
        )
    # Accumulate on the N x N orthogonal block; the 2N x 2N gate is the
    # same block twice, so one multiplication chain suffices.
    block = np.eye(N)
    for theta, (j, k) in zip(thetas, pairs):
        c, s = np.cos(theta), np.sin(theta)
        col_j = block[:, j - 1].copy()
        col_k = block[:, k - 1].copy()
        block[:, j - 1] = c * col_j - s * col_k
        block[:, k - 1] = s * col_j + c * col_k
    out = np.zeros((2 * N, 2 * N))
    out[:N, :N] = block
    out[N:, N:] = block
    return out


def is_symplectic(M: NDArray[np.float64], tol: float = TOL_SYMP) -> SymplecticCheck:
    """Test whether M preserves the symplectic form.

    Args:
        M: square real matrix of even dimension 2N.
        tol: relative tolerance; the max-norm residual of M Omega M^T - Omega
            is compared against ``tol * max(1, ||M||_max)^2``.

    Returns:
        SymplecticCheck(ok, residual) with the raw max-norm residual.

    Raises:
        ValueError: for non-square or odd-dimensional input.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2 != 0:
        raise ValueError(f"expected an even-dimensional square matrix, got {M.shape}")
    omega = symplectic_form(M.shape[0] // 2)
    residual = float(np.abs(M @ omega @ M.T - omega).max())
    scale = max(1.0, float(np.abs(M).max())) ** 2
    return SymplecticCheck(residual <= tol * scale, residual)
