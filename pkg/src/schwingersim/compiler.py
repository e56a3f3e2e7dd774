"""Compilation of one Trotter step into the three-section gate protocol.

Each step realizes, in a configurable order, exp(-i H_pm T) split into
nearest-neighbor hopping windows, exp(-i H_Z T) as addressed z rotations, and
exp(-i H_ZZ T) split into nested collective windows.  The ZZ and Z sections
are exact (their terms commute); the hopping section carries the usual
first-order splitting error between adjacent pairs.

Window construction:

* ZZ window n (n = 1..N-2) acts on sites 1..n+1 and conjugates a collective
  XX entangler into ZZ form by a collective y rotation; each window equals
  exp(-i dt_I H^(n)) with H^(n) = J0 sum_{i<j} Z_i Z_j, and the windows sum
  to (2 J0 / J) H_ZZ.
* hopping window n (n = 1..N-1) sandwiches two XX entangler halves between
  addressed z rotations of opposite sign; the four-gate composite equals the
  pair hopping evolution exp(-i theta (s+ s- + s- s+)) exactly.
* the z section shifts every coefficient by the last site's (the shift
  operator is total magnetization, conserved, identity on the charge-zero
  sector), so the last site needs no pulse; zero-angle rotations are omitted.

All sites outside a window's active set are hidden for its duration and every
section restores full visibility, so sections compose in any order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine, model
from .errors import ParameterError
from .gates import (
    AddressedZ,
    Circuit,
    CollectiveRotation,
    EntanglingMS,
    Hide,
    Unhide,
    apply_circuit,
    circuit_unitary,
)

SECTION_LABELS = ("ZZ", "PM", "Z")
DEFAULT_SECTION_ORDER = ("PM", "Z", "ZZ")


@dataclass(frozen=True)
class TrotterSchedule:
    """Step duration T, step count, entangler scale J0, and section order.

    n_steps = 0 is allowed (a run that only reports the initial state).
    """

    T: float
    n_steps: int
    J0: float = 1.0
    section_order: tuple[str, ...] = DEFAULT_SECTION_ORDER

    def __post_init__(self):
        if not np.isfinite(self.T) or self.T < 0.0:
            raise ParameterError(f"T must be finite and >= 0, got {self.T!r}")
        if not isinstance(self.n_steps, (int, np.integer)) or self.n_steps < 0:
            raise ParameterError(f"n_steps must be an integer >= 0, got {self.n_steps!r}")
        if not np.isfinite(self.J0) or self.J0 <= 0.0:
            raise ParameterError(f"J0 must be finite and > 0, got {self.J0!r}")
        order = tuple(self.section_order)
        if sorted(order) != sorted(SECTION_LABELS):
            raise ParameterError(
                f"section_order must be a permutation of {SECTION_LABELS}, got {order!r}"
            )
        object.__setattr__(self, "section_order", order)

    def window_durations(self, params: model.ModelParams) -> tuple[float, float]:
        """(dt_I, dt_II): entangler times for one ZZ and one hopping window."""
        dt_one = 0.5 * params.J * self.T / self.J0
        dt_two = params.w * self.T / self.J0
        return dt_one, dt_two


def section_z_angles(
    params: model.ModelParams, T: float, magnetization_shift: bool = True
) -> np.ndarray:
    """Per-site AddressedZ angles theta_n = 2 c_n T of the z section."""
    coef = model.hz_coefficients(params)
    if magnetization_shift:
        coef = coef - coef[-1]
    return 2.0 * coef * T


def z_symbolic_coefficients(N: int) -> list[tuple[int, int]]:
    """Integer pairs (a_m, a_J) so the emitted pulse angle is (a_m m + a_J J) T.

    Pulse angles carry the opposite sign of the IR rotation (the pulse z
    convention is the hardware frame); with the magnetization shift both
    coefficients are nonnegative for even N and site N drops out.
    """
    out = []
    for n in range(1, N + 1):
        a_m = (-1) ** N - (-1) ** n
        a_j = sum(1 for j in range(n, N) if j % 2 == 1)
        out.append((a_m, a_j))
    return out


def compile_step(
    params: model.ModelParams,
    schedule: TrotterSchedule,
    magnetization_shift: bool = True,
) -> Circuit:
    """One Trotter step as a gate list with per-window section spans."""
    if params.epsilon0 != 0:
        raise ParameterError("the gate protocol supports epsilon0 = 0 only")
    N = params.N
    dt_one, dt_two = schedule.window_durations(params)
    theta_zz = 2.0 * schedule.J0 * dt_one  # = J T
    theta_pm = schedule.J0 * dt_two  # = w T

    gates: list = []
    sections: dict = {label: [] for label in SECTION_LABELS}
    hidden: set[int] = set()

    def goto_hidden(target: set) -> None:
        for s in sorted(hidden - target):
            gates.append(Unhide(s))
        for s in sorted(target - hidden):
            gates.append(Hide(s))
        hidden.clear()
        hidden.update(target)

    def emit_zz() -> None:
        for n in range(1, N - 1):
            active = tuple(range(1, n + 2))
            goto_hidden(set(range(n + 2, N + 1)))
            start = len(gates)
            gates.append(CollectiveRotation(np.pi / 2, +np.pi / 2, active))
            gates.append(EntanglingMS(theta_zz, 0.0, active))
            gates.append(CollectiveRotation(np.pi / 2, -np.pi / 2, active))
            sections["ZZ"].append((start, len(gates)))
        goto_hidden(set())

    def emit_pm() -> None:
        for n in range(1, N):
            pair = (n, n + 1)
            goto_hidden(set(range(1, N + 1)) - set(pair))
            start = len(gates)
            gates.append(AddressedZ(-np.pi / 2, n))
            gates.append(AddressedZ(-np.pi / 2, n + 1))
            gates.append(EntanglingMS(theta_pm, 0.0, pair))
            gates.append(AddressedZ(+np.pi / 2, n))
            gates.append(AddressedZ(+np.pi / 2, n + 1))
            gates.append(EntanglingMS(theta_pm, 0.0, pair))
            sections["PM"].append((start, len(gates)))
        goto_hidden(set())

    def emit_z() -> None:
        angles = section_z_angles(params, schedule.T, magnetization_shift)
        start = len(gates)
        for n in range(1, N + 1):
            if angles[n - 1] != 0.0:
                gates.append(AddressedZ(float(angles[n - 1]), n))
        sections["Z"].append((start, len(gates)))

    emitters = {"ZZ": emit_zz, "PM": emit_pm, "Z": emit_z}
    for label in schedule.section_order:
        emitters[label]()
    return Circuit(n_sites=N, gates=gates, sections=sections)


def section_targets(
    params: model.ModelParams,
    schedule: TrotterSchedule,
    magnetization_shift: bool = True,
) -> dict[str, np.ndarray]:
    """Exact one-step exponentials each section aims at, keyed by label."""
    H_zz, H_pm, H_z = model.build_split_hamiltonians(params)
    if magnetization_shift:
        coef = model.hz_coefficients(params)
        shift = coef[-1] * model.total_magnetization_diagonal(params.N)
        H_z = H_z - np.diag(shift.astype(np.complex128))
    T = schedule.T
    return {
        "ZZ": engine.evolution_operator(H_zz, T),
        "PM": engine.evolution_operator(H_pm, T),
        "Z": engine.evolution_operator(H_z, T),
    }


def step_target(
    params: model.ModelParams,
    schedule: TrotterSchedule,
    magnetization_shift: bool = True,
) -> np.ndarray:
    """Ordered product of the per-section exact exponentials for one step."""
    targets = section_targets(params, schedule, magnetization_shift)
    U = np.eye(params.dim, dtype=np.complex128)
    for label in schedule.section_order:
        U = targets[label] @ U
    return U


def trotter_evolve(
    params: model.ModelParams,
    schedule: TrotterSchedule,
    initial: np.ndarray | None = None,
    noise: engine.DephasingModel | None = None,
    magnetization_shift: bool = True,
) -> list[np.ndarray]:
    """States at every step boundary, initial included (n_steps + 1 entries).

    A 1-d initial state runs the pure gate evaluator (noise unsupported
    there); a 2-d initial runs density evolution with one dephasing
    application per step, after the step's gates.
    """
    if initial is None:
        initial = model.vacuum_state(params.N)
    initial = np.asarray(initial, dtype=np.complex128)
    circuit = compile_step(params, schedule, magnetization_shift)

    if initial.ndim == 1:
        if noise is not None:
            raise ParameterError("dephasing requires density-matrix evolution")
        n = engine.check_pure(initial)
        if n != params.N:
            raise ParameterError(f"state has {n} sites, params say {params.N}")
        states = [initial.copy()]
        for _ in range(schedule.n_steps):
            states.append(apply_circuit(circuit, states[-1]))
        return states

    n = engine.check_density(initial)
    if n != params.N:
        raise ParameterError(f"state has {n} sites, params say {params.N}")
    U = circuit_unitary(circuit)
    Ud = U.conj().T
    states = [initial.copy()]
    for _ in range(schedule.n_steps):
        rho = U @ states[-1] @ Ud
        if noise is not None:
            rho = engine.apply_dephasing(rho, noise)
        states.append(rho)
    return states
