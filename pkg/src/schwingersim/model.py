"""Spin Hamiltonians, Gauss-law fields, and the physical-subspace projector.

Conventions, fixed once and used everywhere:

* sites are numbered n = 1..N, site 1 sits in the most significant bit of a
  basis index, and spin up maps to sigma^z = +1 and to bit value 0;
* the bare vacuum is the alternating state |up, down, up, down, ...> (index
  0b0101... = 5 for N = 4);
* odd sites host electrons (down = occupied), even sites host positrons
  (up = occupied);
* the background field epsilon0 on the link left of site 1 is an integer.

Operators are dense complex matrices ordered by basis index.  The full
Hamiltonian keeps its constant terms; the split builders drop them, so the two
agree up to a multiple of the identity (checked, not assumed, in the tests).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

SPIN_UP = +1
SPIN_DOWN = -1

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the encoded model.

    w is the pair-creation (hopping) rate, J the electric-field energy scale,
    m the rest mass.  All rates are nonnegative and N >= 2.  Evenness of N is
    required only where the staggered vacuum enters (full Hamiltonian,
    projector, vacuum helpers); the split builders and the step compiler accept
    odd N so window bookkeeping can be exercised at any size.
    """

    N: int
    w: float = 1.0
    J: float = 1.0
    m: float = 0.0
    epsilon0: int = 0

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or isinstance(self.N, bool):
            raise ParameterError(f"N must be an integer, got {self.N!r}")
        if self.N < 2:
            raise ParameterError(f"N must be >= 2, got {self.N}")
        for name in ("w", "J", "m"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0.0:
                raise ParameterError(f"{name} must be finite and >= 0, got {value!r}")
        if not float(self.epsilon0).is_integer():
            raise ParameterError(f"epsilon0 must be an integer, got {self.epsilon0!r}")

    @property
    def dim(self) -> int:
        return 2**self.N


def _require_even(N: int, what: str) -> None:
    if N % 2 != 0:
        raise ParameterError(f"{what} requires even N (staggered vacuum), got N={N}")


@dataclass(frozen=True)
class BasisState:
    """A z-basis product state; spins[k] in {+1, -1} is site k+1."""

    spins: tuple[int, ...]

    def __post_init__(self):
        if not self.spins:
            raise ParameterError("BasisState needs at least one site")
        if any(s not in (SPIN_UP, SPIN_DOWN) for s in self.spins):
            raise ParameterError(f"spins must lie in {{+1, -1}}, got {self.spins!r}")

    @classmethod
    def from_label(cls, label: str) -> "BasisState":
        """Build from a string such as 'udud' (u = up, d = down), site 1 first."""
        table = {"u": SPIN_UP, "d": SPIN_DOWN}
        try:
            return cls(tuple(table[c] for c in label))
        except KeyError as exc:
            raise ParameterError(f"bad spin character {exc.args[0]!r} in {label!r}") from None

    @classmethod
    def from_index(cls, index: int, N: int) -> "BasisState":
        if not 0 <= index < 2**N:
            raise ParameterError(f"index {index} out of range for N={N}")
        bits = [(index >> (N - n)) & 1 for n in range(1, N + 1)]
        return cls(tuple(SPIN_UP if b == 0 else SPIN_DOWN for b in bits))

    @property
    def N(self) -> int:
        return len(self.spins)

    @property
    def index(self) -> int:
        """Basis index: site 1 is the most significant bit, up = 0."""
        idx = 0
        for s in self.spins:
            idx = (idx << 1) | (0 if s == SPIN_UP else 1)
        return idx

    def occupations(self) -> tuple[str, ...]:
        """Site contents under the staggered encoding."""
        out = []
        for n, s in enumerate(self.spins, start=1):
            if n % 2 == 1:
                out.append("electron" if s == SPIN_DOWN else "vacuum")
            else:
                out.append("positron" if s == SPIN_UP else "vacuum")
        return tuple(out)


def vacuum_spins(N: int) -> tuple[int, ...]:
    _require_even(N, "vacuum_spins")
    return tuple(SPIN_UP if n % 2 == 1 else SPIN_DOWN for n in range(1, N + 1))


def vacuum_index(N: int) -> int:
    return BasisState(vacuum_spins(N)).index


def vacuum_state(N: int) -> np.ndarray:
    """The bare vacuum as a statevector."""
    psi = np.zeros(2**N, dtype=np.complex128)
    psi[vacuum_index(N)] = 1.0
    return psi


@functools.lru_cache(maxsize=None)
def z_values(N: int) -> np.ndarray:
    """(2^N, N) table; column k holds sigma^z of site k+1 for every basis index."""
    if N < 1:
        raise ParameterError(f"z_values needs N >= 1, got {N}")
    idx = np.arange(2**N, dtype=np.int64)
    bits = (idx[:, None] >> (N - 1 - np.arange(N))) & 1
    table = (1 - 2 * bits).astype(np.float64)
    table.flags.writeable = False
    return table


def staggered_signs(N: int) -> np.ndarray:
    """Vector of (-1)^n for n = 1..N."""
    return np.array([(-1.0) ** n for n in range(1, N + 1)])


def gauss_fields(state, epsilon0: int = 0) -> tuple[int, ...]:
    """Electric field on each link right of site n, solved iteratively.

    Accepts a BasisState or a plain sequence of +-1 spins.  Fields are exact
    integers for any product state: the per-site increment (s_n + (-1)^n)/2
    is always 0 or +-1.
    """
    spins = state.spins if isinstance(state, BasisState) else tuple(state)
    if not spins or any(s not in (SPIN_UP, SPIN_DOWN) for s in spins):
        raise ParameterError(f"spins must lie in {{+1, -1}}, got {spins!r}")
    if not float(epsilon0).is_integer():
        raise ParameterError(f"epsilon0 must be an integer, got {epsilon0!r}")
    fields = []
    L = int(epsilon0)
    for n, s in enumerate(spins, start=1):
        L += (s + (-1) ** n) // 2
        fields.append(L)
    return tuple(fields)


@dataclass(frozen=True)
class CouplingMatrix:
    """Long-range sigma^z sigma^z couplings, 1-based and strictly upper."""

    N: int
    values: np.ndarray  # (N+1, N+1); zero outside m < n <= N-1

    def coefficient(self, m: int, n: int) -> float:
        if not (1 <= m < n <= self.N):
            raise ParameterError(f"need 1 <= m < n <= N, got ({m}, {n})")
        return float(self.values[m, n])

    def pairs(self) -> dict[tuple[int, int], float]:
        """Nonzero couplings keyed by (m, n)."""
        out = {}
        for m in range(1, self.N):
            for n in range(m + 1, self.N):
                if self.values[m, n] != 0.0:
                    out[(m, n)] = float(self.values[m, n])
        return out


def coupling_matrix(params: ModelParams) -> CouplingMatrix:
    """Pair coupling (J/2)(N - n) between sites m < n <= N - 1; site N decouples."""
    N = params.N
    values = np.zeros((N + 1, N + 1))
    for m in range(1, N - 1):
        for n in range(m + 1, N):
            values[m, n] = 0.5 * params.J * (N - n)
    values.flags.writeable = False
    return CouplingMatrix(N=N, values=values)


def hz_coefficients(params: ModelParams) -> np.ndarray:
    """Per-site sigma^z coefficients of the single-body split term.

    c_n = (m/2)(-1)^n - (J/2) * #{odd j : n <= j <= N-1}.  For N=4, J=1,
    m=0.5 this is (-1.25, -0.25, -0.75, 0.25).
    """
    N = params.N
    coef = np.empty(N)
    for n in range(1, N + 1):
        odd_count = sum(1 for j in range(n, N) if j % 2 == 1)
        coef[n - 1] = 0.5 * params.m * (-1.0) ** n - 0.5 * params.J * odd_count
    return coef


def _add_hopping(H: np.ndarray, N: int, w: float) -> None:
    # sigma^+_n sigma^-_{n+1} flips (down, up) -> (up, down) on adjacent sites
    if w == 0.0:
        return
    idx = np.arange(2**N)
    for n in range(1, N):
        hi = N - n  # bit of site n
        lo = N - n - 1  # bit of site n + 1
        src = idx[(((idx >> hi) & 1) == 1) & (((idx >> lo) & 1) == 0)]
        dst = src - (1 << hi) + (1 << lo)
        H[dst, src] += w
        H[src, dst] += w


def build_spin_hamiltonian(params: ModelParams) -> np.ndarray:
    """Encoded Hamiltonian with long-range fields eliminated, constants kept.

    H = (m/2) sum_n (-1)^n Z_n + w sum_n (s+_n s-_{n+1} + h.c.)
        + J sum_{n<N} [epsilon0 + (1/2) sum_{l<=n} (Z_l + (-1)^l)]^2
    """
    N = params.N
    _require_even(N, "build_spin_hamiltonian")
    z = z_values(N)
    sign = staggered_signs(N)
    diag = 0.5 * params.m * (z @ sign)
    fields = params.epsilon0 + np.cumsum(0.5 * (z + sign), axis=1)
    diag = diag + params.J * np.sum(fields[:, : N - 1] ** 2, axis=1)
    H = np.diag(diag.astype(np.complex128))
    _add_hopping(H, N, params.w)
    return H


def build_split_hamiltonians(params: ModelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(H_ZZ, H_pm, H_Z): the gate-protocol split with constant terms dropped.

    Their sum differs from build_spin_hamiltonian by a multiple of the
    identity.  Only epsilon0 = 0 is supported here: a background field adds
    site-dependent constants that the protocol does not realize.
    """
    if params.epsilon0 != 0:
        raise ParameterError("split Hamiltonians support epsilon0 = 0 only")
    N = params.N
    dim = params.dim
    z = z_values(N)

    cm = coupling_matrix(params).values[1 : N + 1, 1 : N + 1]
    diag_zz = np.einsum("im,mn,in->i", z, cm, z)
    H_zz = np.diag(diag_zz.astype(np.complex128))

    H_pm = np.zeros((dim, dim), dtype=np.complex128)
    _add_hopping(H_pm, N, params.w)

    H_z = np.diag((z @ hz_coefficients(params)).astype(np.complex128))
    return H_zz, H_pm, H_z


def total_magnetization_diagonal(N: int) -> np.ndarray:
    """Diagonal of sum_n Z_n; zero on the charge-neutral sector."""
    return z_values(N).sum(axis=1)


def physical_projector(N: int) -> np.ndarray:
    """Projector onto the zero-magnetization (charge-neutral) sector.

    Diagonal 0/1 matrix; rank C(N, N/2), e.g. 6 of 16 for N = 4.
    """
    _require_even(N, "physical_projector")
    keep = (total_magnetization_diagonal(N) == 0.0).astype(np.complex128)
    return np.diag(keep)


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol


def assert_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, what: str = "operator") -> None:
    if not is_hermitian(a, tol):
        raise ParameterError(f"{what} is not Hermitian within {tol}")
