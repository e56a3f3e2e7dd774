"""Dense evolution backends, the dephasing channel, and state utilities.

Statevectors and density matrices are bare numpy arrays; the validators here
are the one place dimension, normalization, and positivity rules live.
Size limits: statevectors up to 12 sites, density matrices up to 8.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParameterError, ZeroSupportError

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
HERMITICITY_TOL = 1e-10
PSD_TOL = -1e-9
ZERO_SUPPORT_TOL = 1e-12
PURE_STATE_MAX_SITES = 12
DENSITY_MAX_SITES = 8


def n_sites_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise ParameterError(f"dimension {dim} is not a power of two >= 2")
    return n


def check_pure(state: np.ndarray) -> int:
    """Validate a statevector; returns the site count."""
    state = np.asarray(state)
    if state.ndim != 1:
        raise ParameterError(f"statevector must be 1-d, got shape {state.shape}")
    n = n_sites_of(state.shape[0])
    if n > PURE_STATE_MAX_SITES:
        raise ParameterError(f"statevector limit is {PURE_STATE_MAX_SITES} sites, got {n}")
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > NORM_TOL:
        raise ParameterError(f"statevector norm {norm} is not 1 within {NORM_TOL}")
    return n


def check_density(rho: np.ndarray) -> int:
    """Validate a density matrix (Hermitian, unit trace, PSD up to tolerance)."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ParameterError(f"density matrix must be square, got shape {rho.shape}")
    n = n_sites_of(rho.shape[0])
    if n > DENSITY_MAX_SITES:
        raise ParameterError(f"density-matrix limit is {DENSITY_MAX_SITES} sites, got {n}")
    if float(np.max(np.abs(rho - rho.conj().T))) > HERMITICITY_TOL:
        raise ParameterError("density matrix is not Hermitian")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_TOL:
        raise ParameterError(f"density matrix trace {tr} is not 1 within {TRACE_TOL}")
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < PSD_TOL:
        raise ParameterError(f"density matrix has eigenvalue {smallest} below {PSD_TOL}")
    return n


def to_density(state: np.ndarray) -> np.ndarray:
    check_pure(state)
    state = np.asarray(state, dtype=np.complex128)
    return np.outer(state, state.conj())


class ExactPropagator:
    """Eigendecomposition of a Hamiltonian, done once, reused for any time."""

    def __init__(self, H: np.ndarray):
        H = np.asarray(H, dtype=np.complex128)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise ParameterError(f"Hamiltonian must be square, got shape {H.shape}")
        if float(np.max(np.abs(H - H.conj().T))) > 1e-12:
            raise ParameterError("Hamiltonian is not Hermitian")
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(H)
        self.dim = H.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        V = self.eigenvectors
        return (V * np.exp(-1j * self.eigenvalues * t)) @ V.conj().T

    def evolve(self, state: np.ndarray, t: float) -> np.ndarray:
        state = np.asarray(state, dtype=np.complex128)
        if state.shape != (self.dim,):
            raise ParameterError(f"state shape {state.shape} does not match dim {self.dim}")
        V = self.eigenvectors
        return V @ (np.exp(-1j * self.eigenvalues * t) * (V.conj().T @ state))

    def evolve_density(self, rho: np.ndarray, t: float) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (self.dim, self.dim):
            raise ParameterError(f"density shape {rho.shape} does not match dim {self.dim}")
        U = self.unitary(t)
        return U @ rho @ U.conj().T


def evolve_exact(H: np.ndarray, state: np.ndarray, t: float) -> np.ndarray:
    return ExactPropagator(H).evolve(state, t)


def evolve_exact_density(H: np.ndarray, rho: np.ndarray, t: float) -> np.ndarray:
    return ExactPropagator(H).evolve_density(rho, t)


def evolution_operator(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H."""
    return ExactPropagator(H).unitary(t)


@dataclass(frozen=True)
class DephasingModel:
    """Independent per-site phase flips, probability p each, 0 <= p <= 1/2."""

    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 0.5):
            raise ParameterError(f"dephasing probability must lie in [0, 1/2], got {self.p}")

    @property
    def decay(self) -> float:
        return 1.0 - 2.0 * self.p


def apply_dephasing(rho: np.ndarray, model: DephasingModel) -> np.ndarray:
    """Coherence rho[a,b] decays by (1-2p)^hamming(a,b); diagonal untouched.

    Channels for different p commute (they multiply entrywise), and the
    channel commutes with any diagonal projector.
    """
    rho = np.asarray(rho)
    n = n_sites_of(rho.shape[0])
    out = np.array(rho, dtype=np.complex128, order="C", copy=True)
    popcounts = np.bitwise_count(np.arange(2**n, dtype=np.int64)).astype(np.int64)
    kernels.dephase(out, model.decay, popcounts)
    return out


def _projector_mask(projector: np.ndarray, dim: int) -> np.ndarray:
    projector = np.asarray(projector)
    if projector.shape != (dim, dim):
        raise ParameterError(f"projector shape {projector.shape} does not match dim {dim}")
    mask = np.real(np.diag(projector))
    if np.max(np.abs(projector - np.diag(mask))) > 1e-12 or not np.all(
        (np.abs(mask) < 1e-12) | (np.abs(mask - 1.0) < 1e-12)
    ):
        raise ParameterError("projector must be diagonal with 0/1 entries")
    return mask > 0.5


def postselect(rho: np.ndarray, projector: np.ndarray) -> tuple[np.ndarray, float]:
    """(P rho P / tr, retention).  Raises ZeroSupportError on vanishing weight."""
    rho = np.asarray(rho, dtype=np.complex128)
    keep = _projector_mask(projector, rho.shape[0])
    retention = float(np.sum(np.real(np.diag(rho))[keep]))
    if retention < ZERO_SUPPORT_TOL:
        raise ZeroSupportError(f"kept weight {retention} below {ZERO_SUPPORT_TOL}")
    out = rho * np.outer(keep, keep)
    return out / retention, retention


def postselect_pure(state: np.ndarray, projector: np.ndarray) -> tuple[np.ndarray, float]:
    state = np.asarray(state, dtype=np.complex128)
    keep = _projector_mask(projector, state.shape[0])
    retention = float(np.sum(np.abs(state[keep]) ** 2))
    if retention < ZERO_SUPPORT_TOL:
        raise ZeroSupportError(f"kept weight {retention} below {ZERO_SUPPORT_TOL}")
    out = np.where(keep, state, 0.0)
    return out / np.sqrt(retention), retention


def partial_transpose(rho: np.ndarray, cut: int, n_sites: int | None = None) -> np.ndarray:
    """Transpose the left block of sites 1..cut (the MSB factor)."""
    rho = np.asarray(rho)
    n = n_sites_of(rho.shape[0])
    if n_sites is not None and n_sites != n:
        raise ParameterError(f"n_sites {n_sites} does not match matrix dimension 2^{n}")
    if not 1 <= cut < n:
        raise ParameterError(f"cut must lie in 1..{n - 1}, got {cut}")
    dl, dr = 2**cut, 2 ** (n - cut)
    return (
        rho.reshape(dl, dr, dl, dr).transpose(2, 1, 0, 3).reshape(rho.shape)
    )


def sample_shots(state: np.ndarray, n_shots: int, seed: int | None = None) -> np.ndarray:
    """Multinomial z-basis counts from a statevector or density matrix."""
    if n_shots < 1:
        raise ParameterError(f"n_shots must be >= 1, got {n_shots}")
    state = np.asarray(state)
    if state.ndim == 1:
        probs = np.abs(state) ** 2
    else:
        probs = np.clip(np.real(np.diag(state)), 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    return rng.multinomial(n_shots, probs)
