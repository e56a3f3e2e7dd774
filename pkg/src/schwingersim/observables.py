"""Reported quantities: particle density, vacuum persistence, rate function,
and entanglement negativity, plus the per-step record the CLI serializes.

The rate function uses lambda = -log(g2)/N with g2 clipped into [0, 1]; a
vanishing g2 is floored at 1e-300 and flagged on the record (the flag is not
a CSV column).  The stored g2 is the value the rate function actually used,
so g2 = exp(-N lambda) holds to 1e-12 by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engine, model
from .errors import ParameterError

G2_FLOOR = 1e-300

CSV_COLUMNS = ("step", "wt", "nu", "g2", "lambda", "negativity", "log_negativity", "retention")


@dataclass(frozen=True)
class ObservableRecord:
    step: int
    wt: float
    nu: float
    g2: float
    lam: float  # serialized under the column name "lambda"
    negativity: float
    log_negativity: float
    retention: float = 1.0
    g2_floored: bool = False

    def row(self) -> tuple:
        return (
            self.step,
            self.wt,
            self.nu,
            self.g2,
            self.lam,
            self.negativity,
            self.log_negativity,
            self.retention,
        )


def particle_number_density(state: np.ndarray) -> float:
    """nu = (1/2N) sum_n <(-1)^n Z_n + 1>, clipped into [0, 1]."""
    state = np.asarray(state)
    if state.ndim == 1:
        n = engine.check_pure(state)
        weights = np.abs(state) ** 2
    else:
        n = engine.check_density(state)
        weights = np.clip(np.real(np.diag(state)), 0.0, None)
    staggered = model.z_values(n) @ model.staggered_signs(n)
    value = (float(weights @ staggered) + n) / (2.0 * n)
    return min(max(value, 0.0), 1.0)


def vacuum_persistence(state: np.ndarray, vacuum_index: int | None = None) -> tuple:
    """(amplitude, probability) of remaining in the bare vacuum.

    For density matrices the amplitude is None; the probability is the
    vacuum diagonal entry.
    """
    state = np.asarray(state)
    if state.ndim == 1:
        n = engine.check_pure(state)
        idx = model.vacuum_index(n) if vacuum_index is None else vacuum_index
        amp = complex(state[idx])
        return amp, min(max(abs(amp) ** 2, 0.0), 1.0)
    n = engine.check_density(state)
    idx = model.vacuum_index(n) if vacuum_index is None else vacuum_index
    prob = float(np.real(state[idx, idx]))
    return None, min(max(prob, 0.0), 1.0)


def rate_function(g2: float, N: int) -> tuple[float, float, bool]:
    """(lambda, g2_used, floored): lambda = -log(g2)/N after clip and floor."""
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    if not np.isfinite(g2):
        raise ParameterError(f"g2 must be finite, got {g2!r}")
    g2_used = min(max(float(g2), 0.0), 1.0)
    floored = g2_used < G2_FLOOR
    if floored:
        g2_used = G2_FLOOR
    lam = max(0.0, -math.log(g2_used) / N)
    return lam, g2_used, floored


def negativities(rho: np.ndarray, cut: int) -> tuple[float, float]:
    """(negativity, log-negativity) across the cut, via partial transpose."""
    engine.check_density(rho)
    pt = engine.partial_transpose(rho, cut)
    eigs = np.linalg.eigvalsh(pt)
    neg = float(np.sum(np.abs(np.minimum(eigs, 0.0))))
    return neg, math.log2(2.0 * neg + 1.0)


def negativities_pure(state: np.ndarray, cut: int) -> tuple[float, float]:
    """Pure-state shortcut through the Schmidt spectrum.

    For |psi> with Schmidt coefficients s_i, the negativity is
    ((sum_i s_i)^2 - 1)/2; kept as an independent route and cross-checked
    against the dense partial transpose in the tests.
    """
    n = engine.check_pure(state)
    if not 1 <= cut < n:
        raise ParameterError(f"cut must lie in 1..{n - 1}, got {cut}")
    mat = np.asarray(state).reshape(2**cut, 2 ** (n - cut))
    s = np.linalg.svd(mat, compute_uv=False)
    total = float(np.sum(s))
    neg = 0.5 * (total**2 - 1.0)
    neg = max(neg, 0.0)
    return neg, math.log2(2.0 * neg + 1.0)


def dominant_frequency(values, dt: float) -> float:
    """Peak frequency (cycles per unit time) of a uniformly sampled series.

    Mean-subtracted, zero-padded 16x for peak resolution; returns 0 for a
    constant series.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size < 2:
        raise ParameterError("need a 1-d series with at least two samples")
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    centered = values - values.mean()
    if not np.any(centered):
        return 0.0
    padded = 16 * values.size
    spectrum = np.abs(np.fft.rfft(centered, n=padded))
    freqs = np.fft.rfftfreq(padded, d=dt)
    return float(freqs[int(np.argmax(spectrum))])


def time_series(
    states,
    params: model.ModelParams,
    T: float,
    cut: int | None = None,
    vacuum_index: int | None = None,
    projector: np.ndarray | None = None,
) -> list[ObservableRecord]:
    """One record per state; states are step boundaries 0..n.

    When a projector is supplied, each state is post-selected before
    measurement and the kept weight lands in retention; otherwise retention
    is reported as 1.0.
    """
    cut = params.N // 2 if cut is None else cut
    if not 1 <= cut < params.N:
        raise ParameterError(f"cut must lie in 1..{params.N - 1}, got {cut}")
    records = []
    for step, state in enumerate(states):
        state = np.asarray(state)
        retention = 1.0
        if projector is not None:
            if state.ndim == 1:
                state, retention = engine.postselect_pure(state, projector)
            else:
                state, retention = engine.postselect(state, projector)
        _, g2_raw = vacuum_persistence(state, vacuum_index)
        lam, g2_used, floored = rate_function(g2_raw, params.N)
        if state.ndim == 1:
            neg, logneg = negativities_pure(state, cut)
        else:
            neg, logneg = negativities(state, cut)
        records.append(
            ObservableRecord(
                step=step,
                wt=params.w * T * step,
                nu=particle_number_density(state),
                g2=g2_used,
                lam=lam,
                negativity=neg,
                log_negativity=logneg,
                retention=retention,
                g2_floored=floored,
            )
        )
    return records
