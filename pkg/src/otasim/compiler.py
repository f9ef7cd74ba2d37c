"""Compile block-diagonal Hamiltonians into optical circuit parameters.

The central decomposition writes the symplectic evolution exp(Omega H t) of
an eligible Hamiltonian (commuting blocks H = h_phi (+) h_pi) as

    S(t) = S_BS(theta) . S_Sq(z)^-1 . S_PS(t d) . S_Sq(z) . S_BS(theta)^-1,

so all time dependence lives in one phase-shifter layer with linear phases
t*d. The compiler extracts (d, z, theta) from the simultaneous eigenbasis P
of the two blocks: d_j^2 = lambda_j^phi * lambda_j^pi, gamma_j^2 =
lambda_j^phi / lambda_j^pi, z_j = -ln(gamma_j)/2, and theta from a Givens QR
of P so that S_BS(theta)^-1 = P (+) P.

Also here: the reduction of the evolved-vacuum circuit to a single
time-independent beam splitter array preceded by complex squeezers, and a
snapshot (Trotter) product for slowly time-dependent Hamiltonians.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .models import HamiltonianMatrix, circulant_eigenvalues, real_dft_eigenvectors
from .sympcore import bs_array, bs_pair_order, phase_shift_gate

#: Relative threshold below which a symplectic eigenvalue counts as a zero
#: mode: d_j < TOL_ZERO * max_k d_k freezes the mode (phase 0, gamma 1).
TOL_ZERO = 1e-12


class IneligibleHamiltonianError(ValueError):
    """Raised when a Hamiltonian cannot be compiled (blocks fail eligibility)."""


@dataclass(frozen=True)
class OTACircuit:
    """Compiled circuit parameters for one Hamiltonian.

    Attributes:
        N: mode count.
        d: N symplectic eigenvalues (phases are phi_j(t) = t * d_j).
        z: N squeezing amplitudes, z_j = -ln(gamma_j)/2.
        theta: N(N-1)/2 beam splitter angles in triangular order.
        P: orthonormal eigenvector rows; bs_array(theta)^-1 = P (+) P.
        gamma: N eigenvalue ratios gamma_j > 0.
        metadata: gate counts, Givens sign flag, source theory tag.
    """

    N: int
    d: NDArray[np.float64]
    z: NDArray[np.float64]
    theta: NDArray[np.float64]
    P: NDArray[np.float64]
    gamma: NDArray[np.float64]
    metadata: dict = field(default_factory=dict)

    @property
    def gate_count(self) -> int:
        """Total gate uses N(N+2): N phase shifts, 2N squeezes, N(N-1) BS."""
        return int(self.metadata["n_ps"] + self.metadata["n_sq"] + self.metadata["n_bs"])

    def bs_matrix(self) -> NDArray[np.float64]:
        """The beam splitter array S_BS(theta) as an explicit gate product."""
        return bs_array(self.theta, self.N)


@dataclass(frozen=True)
class CoherentReduction:
    """Evolved-vacuum circuit reduced to complex squeezers plus a fixed array.

    The pipeline S_BS(theta) . S_CSq(zeta(t)) acting on adjusted coherent
    inputs alpha' reproduces the full S(t) moments: the orthogonal remainder
    of each mode's polar split cancels on the vacuum covariance and is
    folded into alpha' for the means.
    """

    theta: NDArray[np.float64]
    xi: NDArray[np.float64]
    Phi: NDArray[np.float64]
    residual_rotation: NDArray[np.float64]
    alpha_prime: NDArray[np.complex128]


def _is_circulant(h: NDArray[np.float64]) -> bool:
    """True if every row of h is the cyclic right-shift of the row above."""
    N = h.shape[0]
    scale = max(1.0, float(np.abs(h).max()))
    first = h[0]
    for r in range(1, N):
        if np.abs(h[r] - np.roll(first, r)).max() > 1e-12 * scale:
            return False
    return True


def _simultaneous_eigenbasis(
    H: HamiltonianMatrix,
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Return (P, lambda_phi, lambda_pi) with rows of P diagonalizing both blocks.

    Circulant blocks take the analytic DFT path (momentum ordering: the
    eigenvalue at row j is the cosine transform at frequency j-1, so
    degenerate partners sit at rows j and N+2-j with cos before sin).
    Otherwise h_phi is diagonalized densely with eigenvalues ascending,
    degenerate clusters are rotated to also diagonalize h_pi, and each
    eigenvector's sign is fixed by making its largest-magnitude component
    positive.
    """
    if _is_circulant(H.h_phi) and _is_circulant(H.h_pi):
        P = real_dft_eigenvectors(H.N)
        lam_phi = circulant_eigenvalues(H.h_phi[:, 0])
        lam_pi = circulant_eigenvalues(H.h_pi[:, 0])
        return P, lam_phi, lam_pi

    lam_phi, vecs = np.linalg.eigh(H.h_phi)
    P = vecs.T.copy()
    scale = max(1.0, float(np.abs(lam_phi).max()))
    # Rotate inside degenerate lambda_phi clusters so that P also
    # diagonalizes h_pi (the blocks commute, so this is always possible).
    M = P @ H.h_pi @ P.T
    start = 0
    for stop in range(1, H.N + 1):
        if stop < H.N and lam_phi[stop] - lam_phi[stop - 1] < 1e-8 * scale:
            continue
        if stop - start > 1:
            sub = M[start:stop, start:stop]
            if np.abs(sub - np.diag(np.diag(sub))).max() > 1e-13 * max(
                1.0, np.abs(sub).max()
            ):
                _, rot = np.linalg.eigh(0.5 * (sub + sub.T))
                P[start:stop] = rot.T @ P[start:stop]
        start = stop
    signs = np.sign(P[np.arange(H.N), np.argmax(np.abs(P), axis=1)])
    P *= signs[:, None]
    lam_pi = np.einsum("ij,jk,ik->i", P, H.h_pi, P)
    return P, lam_phi, lam_pi


def givens_qr(P: NDArray[np.float64]) -> tuple[NDArray[np.float64], int]:
    """Decompose an orthonormal matrix into triangular-order Givens angles.

    Sweeps k = 1..N-1 eliminate the entries right of the diagonal in row k
    by right-multiplication: theta = atan2(-p_kj, p_kk) zeroes p_kj while
    keeping p_kk = r > 0, so that

        P . O_12(theta_12) . O_13(theta_13) ... O_{N-1,N} = diag(1, .., +-1).

    Args:
        P: orthonormal real N x N matrix (checked to 1e-8).

    Returns:
        (theta, sign): the N(N-1)/2 angles in triangular order and the sign
        of the final diagonal entry.

    Raises:
        ValueError: if P is not orthonormal.
    """
    P = np.asarray(P, dtype=float)
    N = P.shape[0]
    if np.abs(P @ P.T - np.eye(N)).max() > 1e-8:
        raise ValueError("givens_qr needs an orthonormal matrix")
    W = P.copy()
    thetas = np.zeros(N * (N - 1) // 2)
    idx = 0
    for k in range(N - 1):
        for j in range(k + 1, N):
            theta = np.arctan2(-W[k, j], W[k, k])
            if theta != 0.0:
                c, s = np.cos(theta), np.sin(theta)
                col_k = W[:, k].copy()
                col_j = W[:, j].copy()
                W[:, k] = c * col_k - s * col_j
                W[:, j] = s * col_k + c * col_j
            thetas[idx] = theta
            idx += 1
    diag = np.diag(W)
    if np.abs(W - np.diag(diag)).max() > 1e-9 or np.abs(np.abs(diag) - 1).max() > 1e-9:
        raise ValueError("Givens sweep did not reach a signed identity")
    sign = int(np.sign(diag[-1]))
    return thetas, sign


def compile(H: HamiltonianMatrix) -> OTACircuit:  # noqa: A001 - domain verb
    """Compile an eligible Hamiltonian into circuit parameters.

    Args:
        H: Hamiltonian with commuting positive semi-definite blocks.

    Returns:
        OTACircuit with d, z, theta, the eigenbasis P, and gate metadata.

    Raises:
        IneligibleHamiltonianError: when the blocks do not commute, an
            eigenvalue product is negative beyond tolerance, or a mode would
            need infinite squeezing (lambda_pi = 0 with lambda_phi > 0).
    """
    try:
        H.validate()
    except ValueError as exc:
        raise IneligibleHamiltonianError(str(exc)) from exc

    P, lam_phi, lam_pi = _simultaneous_eigenbasis(H)
    scale = max(1.0, float(lam_phi.max()), float(lam_pi.max()))
    tol_eig = 1e-12 * scale
    lam_phi = np.where(np.abs(lam_phi) < tol_eig, 0.0, lam_phi)
    lam_pi = np.where(np.abs(lam_pi) < tol_eig, 0.0, lam_pi)
    product = lam_phi * lam_pi
    if np.any(product < -(tol_eig**2)):
        raise IneligibleHamiltonianError("negative eigenvalue product")
    d = np.sqrt(np.clip(product, 0.0, None))

    zero = d < TOL_ZERO * max(float(d.max()), 1e-300)
    if np.any(~zero & (lam_pi <= 0.0)):
        raise IneligibleHamiltonianError(
            "lambda_pi vanishes while lambda_phi does not: infinite squeezing"
        )
    gamma = np.ones_like(d)
    np.divide(lam_phi, lam_pi, out=gamma, where=~zero)
    gamma = np.sqrt(np.where(zero, 1.0, gamma))
    d = np.where(zero, 0.0, d)
    z = -0.5 * np.log(gamma)

    theta, sign = givens_qr(P)
    if sign < 0:
        # Gauge refix from the decomposition proof: absorbing the -1 into
        # the last eigenvector row keeps bs_array(theta)^-1 = P (+) P exact
        # and leaves the reconstructed evolution unchanged.
        P = P.copy()
        P[-1] *= -1.0
    N = H.N
    metadata = {
        "theory": H.theory,
        "epsilon": H.epsilon,
        "givens_sign": sign,
        "n_ps": N,
        "n_sq": 2 * N,
        "n_bs": N * (N - 1),
    }
    return OTACircuit(N, d, z, theta, P, gamma, metadata)


def evolution_matrix(circuit: OTACircuit, t: float) -> NDArray[np.float64]:
    """Reconstruct S(t) from the compiled parameters.

    The middle layer S_Sq(z)^-1 S_PS(t d) S_Sq(z) collapses per mode to
    [[cos, sin/gamma], [-gamma sin, cos]]; frozen zero modes (d_j = 0)
    contribute the identity, consistent with the phase rule phi_j(t) = 0.

    :param circuit: compiled parameters.
    :param t: evolution time (finite).
    """
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    N = circuit.N
    phases = t * circuit.d
    c = np.cos(phases)
    s = np.sin(phases)
    B = circuit.bs_matrix()
    middle = np.zeros((2 * N, 2 * N))
    middle[:N, :N] = np.diag(c)
    middle[N:, N:] = np.diag(c)
    middle[:N, N:] = np.diag(s / circuit.gamma)
    middle[N:, :N] = np.diag(-s * circuit.gamma)
    return B @ middle @ B.T


def complex_squeezer_params(
    z: float, phi: float
) -> tuple[float, float, NDArray[np.float64]]:
    """Polar-split the single-mode block S_Sq(z)^-1 S_PS(phi) S_Sq(z).

    The product M = [[cos phi, e^{2z} sin phi], [-e^{-2z} sin phi, cos phi]]
    is symplectic but not symmetric; its symmetric positive polar factor is
    the complex squeezer with cosh(2 xi) = cos^2(phi) + sin^2(phi) cosh(4z),
    and the orthogonal remainder is a rotation returned alongside.

    Returns:
        (xi, Phi, R) with Phi in [0, pi), xi signed accordingly, and R the
        2x2 rotation such that S_CSq(xi e^{i Phi}) @ R = M.
    """
    c, s = np.cos(phi), np.sin(phi)
    M = np.array([[c, np.exp(2 * z) * s], [-np.exp(-2 * z) * s, c]])
    A = M @ M.T
    # det(A) = 1, so the principal square root has the closed form below.
    S_csq = (A + np.eye(2)) / np.sqrt(A[0, 0] + A[1, 1] + 2.0)
    sinh_cos = 0.5 * (S_csq[1, 1] - S_csq[0, 0])
    sinh_sin = -S_csq[0, 1]
    mag = float(np.hypot(sinh_cos, sinh_sin))
    ang = float(np.arctan2(sinh_sin, sinh_cos))
    if ang < 0.0:
        ang += np.pi
        mag = -mag
    if ang >= np.pi:
        ang -= np.pi
        mag = -mag
    xi = float(np.arcsinh(mag))
    # Inverse of the unit-determinant symmetric factor, applied to M.
    inv = np.array([[S_csq[1, 1], -S_csq[0, 1]], [-S_csq[1, 0], S_csq[0, 0]]])
    R = inv @ M
    return xi, ang, R


def coherent_reduction(
    circuit: OTACircuit, t: float, alpha: NDArray[np.complex128]
) -> CoherentReduction:
    """Reduce the evolved-vacuum pipeline to S_BS(theta) . S_CSq(zeta(t)).

    Per mode, the squeezer-conjugated phase shift splits into a complex
    squeezer times a residual rotation; the rotations join S_BS(theta)^-1
    into one passive factor that is applied to the coherent amplitudes:

        alpha'(t) = to_complex( S_PS(rho(t)) . S_BS(theta)^-1 . r(alpha) ),

    with r(alpha) = sqrt(2) (Re alpha, Im alpha). On the vacuum covariance
    the passive factor cancels, so S_BS(theta) @ S_CSq reproduces the full
    S(t) sigma S(t)^T exactly.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    if alpha.shape != (circuit.N,):
        raise ValueError(f"expected {circuit.N} coherent amplitudes")
    N = circuit.N
    xi = np.zeros(N)
    Phi = np.zeros(N)
    rho = np.zeros(N)
    for j in range(N):
        xi_j, Phi_j, R = complex_squeezer_params(circuit.z[j], circuit.d[j] * t)
        xi[j] = xi_j
        Phi[j] = Phi_j
        rho[j] = np.arctan2(R[0, 1], R[0, 0])
    binv = np.zeros((2 * N, 2 * N))
    binv[:N, :N] = circuit.P
    binv[N:, N:] = circuit.P
    residual = phase_shift_gate(rho) @ binv
    mean_in = np.sqrt(2.0) * np.concatenate([alpha.real, alpha.imag])
    mean_adj = residual @ mean_in
    alpha_prime = (mean_adj[:N] + 1j * mean_adj[N:]) / np.sqrt(2.0)
    return CoherentReduction(circuit.theta, xi, Phi, residual, alpha_prime)


def trotter_evolution(
    H_of_t, t_final: float, steps: int, midpoint: bool = False
) -> NDArray[np.float64]:
    """Snapshot product for a slowly time-dependent Hamiltonian.

    Each interval [t_k, t_k + dt] is evolved with the circuit compiled from
    the snapshot H(t_k) (left endpoint by default, midpoint optionally),
    composing later factors on the left. First-order accurate in dt.

    :param H_of_t: callable t -> HamiltonianMatrix.
    :param t_final: total evolution time.
    :param steps: number of snapshots (>= 1).
    :param midpoint: sample each interval at its midpoint instead.
    """
    if steps < 1:
        raise ValueError("need at least one step")
    dt = t_final / steps
    total = None
    for k in range(steps):
        t_k = (k + 0.5) * dt if midpoint else k * dt
        S = evolution_matrix(compile(H_of_t(t_k)), dt)
        total = S if total is None else S @ total
    return total


def circuit_to_dict(circuit: OTACircuit) -> dict:
    """JSON-ready dict of a circuit (P stored row-major)."""
    return {
        "N": circuit.N,
        "d": circuit.d.tolist(),
        "z": circuit.z.tolist(),
        "theta": circuit.theta.tolist(),
        "P": circuit.P.flatten().tolist(),
        "gamma": circuit.gamma.tolist(),
        "metadata": dict(circuit.metadata),
    }


def circuit_from_dict(doc: dict) -> OTACircuit:
    """Rebuild a circuit from its JSON dict."""
    N = int(doc["N"])
    return OTACircuit(
        N=N,
        d=np.asarray(doc["d"], dtype=float),
        z=np.asarray(doc["z"], dtype=float),
        theta=np.asarray(doc["theta"], dtype=float),
        P=np.asarray(doc["P"], dtype=float).reshape(N, N),
        gamma=np.asarray(doc["gamma"], dtype=float),
        metadata=dict(doc.get("metadata", {})),
    )
