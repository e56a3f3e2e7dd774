"""Gate intermediate representation and circuit evaluation.

Gates address 1-based sites; site 1 occupies the most significant bit of the
state index.  Hiding is ideal: a hidden site is excluded from every active
mask and the evaluators enforce the bookkeeping, so Hide/Unhide never touch
amplitudes.

Semantics:

* CollectiveRotation(theta, phi, active) = exp(-i theta/2 sum_n (cos phi X_n
  + sin phi Y_n)) over the active sites;
* EntanglingMS(theta, phi, active) = exp(-i theta/2 sum_{i<j} s^phi_i s^phi_j)
  with s^phi = cos phi X + sin phi Y;
* AddressedZ(theta, site) = exp(-i theta/2 Z_site).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ParameterError, StructureError


@dataclass(frozen=True)
class CollectiveRotation:
    theta: float
    phi: float
    active: tuple[int, ...]


@dataclass(frozen=True)
class EntanglingMS:
    theta: float
    phi: float
    active: tuple[int, ...]


@dataclass(frozen=True)
class AddressedZ:
    theta: float
    site: int


@dataclass(frozen=True)
class Hide:
    site: int


@dataclass(frozen=True)
class Unhide:
    site: int


Gate = CollectiveRotation | EntanglingMS | AddressedZ | Hide | Unhide


@dataclass
class Circuit:
    """An ordered gate list plus section metadata.

    sections maps a section label ("ZZ", "PM", "Z") to [start, stop) spans
    into gates, one span per emitted window.  dropped_crosstalk counts pulse
    lines discarded when the circuit came from pulse text.
    """

    n_sites: int
    gates: list
    sections: dict = field(default_factory=dict)
    dropped_crosstalk: int = 0


def _gate_sites(gate) -> tuple[int, ...]:
    if isinstance(gate, (CollectiveRotation, EntanglingMS)):
        return gate.active
    if isinstance(gate, AddressedZ):
        return (gate.site,)
    return (gate.site,)


def validate_circuit(circuit: Circuit) -> frozenset:
    """Walk the gates enforcing mask and hide/unhide consistency.

    Returns the set of sites left hidden at the end.  Raises StructureError
    on the first violation, identifying the gate position.
    """
    N = circuit.n_sites
    if N < 1:
        raise StructureError(f"circuit needs n_sites >= 1, got {N}")
    hidden: set[int] = set()
    for k, gate in enumerate(circuit.gates):
        sites = _gate_sites(gate)
        for s in sites:
            if not 1 <= s <= N:
                raise StructureError(f"gate {k}: site {s} outside 1..{N}")
        if isinstance(gate, Hide):
            if gate.site in hidden:
                raise StructureError(f"gate {k}: site {gate.site} is already hidden")
            hidden.add(gate.site)
        elif isinstance(gate, Unhide):
            if gate.site not in hidden:
                raise StructureError(f"gate {k}: site {gate.site} is not hidden")
            hidden.remove(gate.site)
        else:
            if len(set(sites)) != len(sites):
                raise StructureError(f"gate {k}: duplicate sites in {sites}")
            if isinstance(gate, EntanglingMS) and len(sites) < 2:
                raise StructureError(f"gate {k}: entangling gate needs >= 2 active sites")
            if isinstance(gate, CollectiveRotation) and len(sites) < 1:
                raise StructureError(f"gate {k}: rotation needs a nonempty active set")
            touched = hidden.intersection(sites)
            if touched:
                raise StructureError(f"gate {k}: hidden sites {sorted(touched)} in active mask")
    return frozenset(hidden)


def _rotation_2x2(theta: float, phi: float) -> np.ndarray:
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    return np.array(
        [
            [c, -1j * s * np.exp(-1j * phi)],
            [-1j * s * np.exp(1j * phi), c],
        ]
    )


def _zrotation_2x2(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _ms_eigenbasis_2x2(phi: float) -> np.ndarray:
    # columns diagonalize s^phi: s^phi = V Z V^dag
    return np.array([[1.0, 1.0], [np.exp(1j * phi), -np.exp(1j * phi)]]) / np.sqrt(2.0)


@functools.lru_cache(maxsize=None)
def _pair_exponents(n_sites: int, active: tuple[int, ...]) -> np.ndarray:
    """q[i] = sum_{a<b in active} z_a z_b on basis index i, z read from bits."""
    mask = 0
    for s in active:
        mask |= 1 << (n_sites - s)
    idx = np.arange(2**n_sites, dtype=np.int64)
    downs = np.bitwise_count(idx & mask).astype(np.int64)
    k = len(active)
    total = k - 2 * downs  # sum of z over the active sites
    q = 0.5 * (total.astype(np.float64) ** 2 - k)
    q.flags.writeable = False
    return q


def apply_gate(state: np.ndarray, gate, n_sites: int) -> None:
    """Apply one gate in place to a statevector.  Hide/Unhide are markers."""
    if isinstance(gate, (Hide, Unhide)):
        return
    if isinstance(gate, CollectiveRotation):
        u = _rotation_2x2(gate.theta, gate.phi)
        for s in gate.active:
            kernels.apply_single_qubit(state, u, n_sites - s)
    elif isinstance(gate, AddressedZ):
        kernels.apply_single_qubit(state, _zrotation_2x2(gate.theta), n_sites - gate.site)
    elif isinstance(gate, EntanglingMS):
        v = _ms_eigenbasis_2x2(gate.phi)
        vd = v.conj().T
        for s in gate.active:
            kernels.apply_single_qubit(state, vd, n_sites - s)
        kernels.apply_scaled_phase(state, 0.5 * gate.theta, _pair_exponents(n_sites, gate.active))
        for s in gate.active:
            kernels.apply_single_qubit(state, v, n_sites - s)
    else:
        raise ParameterError(f"unknown gate type {type(gate).__name__}")


def apply_circuit(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Run the whole gate list on a statevector; returns a new array."""
    validate_circuit(circuit)
    out = np.ascontiguousarray(state, dtype=np.complex128).copy()
    if out.ndim != 1 or out.shape[0] != 2**circuit.n_sites:
        raise ParameterError(f"state has shape {state.shape}, expected ({2**circuit.n_sites},)")
    for gate in circuit.gates:
        apply_gate(out, gate, circuit.n_sites)
    return out


def _embed_product(n_sites: int, factors: dict) -> np.ndarray:
    """Kronecker product placing factors[site] at each site, identity elsewhere."""
    out = np.array([[1.0 + 0.0j]])
    eye = np.eye(2)
    for s in range(1, n_sites + 1):
        out = np.kron(out, factors.get(s, eye))
    return out


def gate_unitary(gate, n_sites: int) -> np.ndarray:
    """Dense matrix of a single gate; markers map to the identity."""
    dim = 2**n_sites
    if isinstance(gate, (Hide, Unhide)):
        return np.eye(dim, dtype=np.complex128)
    if isinstance(gate, CollectiveRotation):
        u = _rotation_2x2(gate.theta, gate.phi)
        return _embed_product(n_sites, {s: u for s in gate.active})
    if isinstance(gate, AddressedZ):
        return _embed_product(n_sites, {gate.site: _zrotation_2x2(gate.theta)})
    if isinstance(gate, EntanglingMS):
        v = _ms_eigenbasis_2x2(gate.phi)
        W = _embed_product(n_sites, {s: v for s in gate.active})
        phases = np.exp(-0.5j * gate.theta * _pair_exponents(n_sites, gate.active))
        return (W * phases) @ W.conj().T
    raise ParameterError(f"unknown gate type {type(gate).__name__}")


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Ordered product of the gate matrices (first gate acts first)."""
    validate_circuit(circuit)
    U = np.eye(2**circuit.n_sites, dtype=np.complex128)
    for gate in circuit.gates:
        U = gate_unitary(gate, circuit.n_sites) @ U
    return U
