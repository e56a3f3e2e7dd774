"""Self-check suite behind the `check` subcommand.

Each check re-derives an algebraic identity the simulator relies on and
reports a pass/fail with a measured residual.  The two keyword hooks exist
for fault injection in tests: a coupling perturbation breaks the split
consistency, and an injected fixture text replaces the packaged one.
"""
from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

import numpy as np

from . import engine, model
from .errors import PulseSyntaxError, StructureError
from .pulses import Comment, Pulse, parse_pulse_program, pulses_to_circuit

FIXTURE_NAME = "reference_n4.pulse"
FIXTURE_TOTAL = 222
FIXTURE_BLOCKS = (12, 51, 51, 51, 51, 6)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def load_fixture_text() -> str:
    return (
        importlib.resources.files("schwingersim.data").joinpath(FIXTURE_NAME).read_text()
    )


def _kron_chain(factors) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_Z = np.diag([1.0 + 0.0j, -1.0])
_EYE = np.eye(2, dtype=np.complex128)


def _embed(n_sites: int, ops: dict) -> np.ndarray:
    return _kron_chain(ops.get(s, _EYE) for s in range(1, n_sites + 1))


def _h_msx(n_sites: int, sites, J0: float = 1.0) -> np.ndarray:
    H = np.zeros((2**n_sites, 2**n_sites), dtype=np.complex128)
    sites = tuple(sites)
    for a in range(len(sites)):
        for b in range(a + 1, len(sites)):
            H += _embed(n_sites, {sites[a]: _X, sites[b]: _X})
    return J0 * H


def check_split_consistency(zz_perturbation: float = 0.0) -> CheckResult:
    """Full Hamiltonian minus the split sum must be a multiple of the identity."""
    worst = 0.0
    for N in (2, 4, 6):
        params = model.ModelParams(N=N, w=1.0, J=0.9, m=0.4)
        H_zz, H_pm, H_z = model.build_split_hamiltonians(params)
        if zz_perturbation:
            H_zz = H_zz.copy()
            H_zz[0, 0] += zz_perturbation
        diff = model.build_spin_hamiltonian(params) - (H_zz + H_pm + H_z)
        diff = diff - (np.trace(diff) / diff.shape[0]) * np.eye(diff.shape[0])
        worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult(
        name="split-consistency",
        passed=worst < 1e-12,
        detail=f"max off-identity residual {worst:.3e} over N in (2, 4, 6)",
    )


def check_pair_gate_identity() -> CheckResult:
    """(H_MSX + U^dag H_MSX U)/2 equals the pair hopping coupling."""
    J0 = 1.0
    H = _h_msx(2, (1, 2), J0)
    u1 = np.diag([np.exp(0.25j * np.pi), np.exp(-0.25j * np.pi)])
    U = _kron_chain([u1, u1])
    sp = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)  # s+ (up = first row)
    hop = _kron_chain([sp, sp.T]) + _kron_chain([sp.T, sp])
    residual = float(np.max(np.abs(0.5 * (H + U.conj().T @ H @ U) - J0 * hop)))
    return CheckResult(
        name="pair-gate-identity",
        passed=residual < 1e-12,
        detail=f"residual {residual:.3e}",
    )


def check_basis_rotation_identity() -> CheckResult:
    """Collective y rotation turns the XX entangler sum into ZZ form."""
    n, J0 = 3, 1.0
    sites = (1, 2, 3)
    ry = np.array(
        [[np.cos(np.pi / 4), -np.sin(np.pi / 4)], [np.sin(np.pi / 4), np.cos(np.pi / 4)]],
        dtype=np.complex128,
    )  # exp(-i pi/4 Y)
    R = _kron_chain([ry] * n)
    H_msz = np.zeros((2**n, 2**n), dtype=np.complex128)
    for a in range(len(sites)):
        for b in range(a + 1, len(sites)):
            H_msz += _embed(n, {sites[a]: _Z, sites[b]: _Z})
    residual = float(np.max(np.abs(R @ _h_msx(n, sites, J0) @ R.conj().T - J0 * H_msz)))
    return CheckResult(
        name="basis-rotation-identity",
        passed=residual < 1e-12,
        detail=f"residual {residual:.3e}",
    )


def check_channel_projector() -> CheckResult:
    """Dephasing must commute with post-selection weight (diagonal projector)."""
    N = 4
    rng = np.random.default_rng(11)
    a = rng.normal(size=(2**N, 2**N)) + 1j * rng.normal(size=(2**N, 2**N))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    P = model.physical_projector(N)
    worst = 0.0
    for p in (0.031, 0.038):
        sent = engine.apply_dephasing(rho, engine.DephasingModel(p))
        before = float(np.real(np.trace(P @ rho @ P)))
        after = float(np.real(np.trace(P @ sent @ P)))
        worst = max(worst, abs(after - before))
    return CheckResult(
        name="channel-projector",
        passed=worst < 1e-12,
        detail=f"max kept-weight change {worst:.3e} for p in (0.031, 0.038)",
    )


def check_fixture(fixture_text: str | None = None) -> CheckResult:
    """The packaged four-site pulse program must hold exactly 222 pulses,
    split 12 / 51x4 / 6 across its marked blocks, and map to a valid circuit."""
    text = load_fixture_text() if fixture_text is None else fixture_text
    try:
        program = parse_pulse_program(text, n_sites=4)
    except PulseSyntaxError as exc:
        return CheckResult("fixture", False, f"expected {FIXTURE_TOTAL} pulses, parse failed: {exc}")
    total = len(program.pulses())
    if total != FIXTURE_TOTAL:
        return CheckResult(
            "fixture", False, f"expected {FIXTURE_TOTAL} pulses, counted {total}"
        )
    blocks = []
    count = 0
    seen_marker = False
    for entry in program.entries:
        if isinstance(entry, Comment) and entry.text.startswith("% ==="):
            if seen_marker:
                blocks.append(count)
            seen_marker = True
            count = 0
        elif isinstance(entry, Pulse):
            count += 1
    blocks.append(count)
    if tuple(blocks) != FIXTURE_BLOCKS:
        return CheckResult(
            "fixture",
            False,
            f"expected block sizes {FIXTURE_BLOCKS}, counted {tuple(blocks)}",
        )
    try:
        circuit = pulses_to_circuit(
            program, 4, bindings={"Delta_t": 0.1, "m": 0.5, "J": 1.0}
        )
    except StructureError as exc:
        return CheckResult("fixture", False, f"structure: {exc}")
    return CheckResult(
        "fixture",
        True,
        f"{total} pulses, blocks {tuple(blocks)}, "
        f"{len(circuit.gates)} gates, {circuit.dropped_crosstalk} crosstalk pulses dropped",
    )


def run_checks(fixture_text: str | None = None, zz_perturbation: float = 0.0) -> list:
    return [
        check_split_consistency(zz_perturbation),
        check_pair_gate_identity(),
        check_basis_rotation_identity(),
        check_channel_projector(),
        check_fixture(fixture_text),
    ]
