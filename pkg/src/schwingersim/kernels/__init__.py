"""State-update hot loops with a selectable backend.

The jit backend is the default whenever numba imports; set
SCHWINGERSIM_KERNELS to "numpy" or "numba" to force one (or "auto").  Both
backends expose identical in-place operations on contiguous complex128
arrays; the wrappers here normalize arguments so callers never touch the
implementation modules directly.
"""
import os

import numpy as np

from . import _numpy

ENV_VAR = "SCHWINGERSIM_KERNELS"

try:
    from . import _numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    _numba = None
    _HAVE_NUMBA = False


def _resolve(name=None):
    name = (name if name is not None else os.environ.get(ENV_VAR, "auto")).strip().lower()
    if name in ("", "auto"):
        name = "numba" if _HAVE_NUMBA else "numpy"
    if name == "numba":
        if not _HAVE_NUMBA:
            raise ImportError(f"{ENV_VAR}=numba requested but numba is not importable")
        return _numba
    if name == "numpy":
        return _numpy
    raise ValueError(f"unknown {ENV_VAR} value {name!r}; use auto, numba, or numpy")


_impl = _resolve()


def backend_name() -> str:
    return "numba" if _impl is _numba else "numpy"


def apply_single_qubit(state: np.ndarray, gate: np.ndarray, bitpos: int) -> None:
    """In-place 2x2 gate on the qubit occupying bit position bitpos (0 = LSB)."""
    _impl.apply_single_qubit(
        state,
        complex(gate[0, 0]),
        complex(gate[0, 1]),
        complex(gate[1, 0]),
        complex(gate[1, 1]),
        1 << bitpos,
    )


def apply_scaled_phase(state: np.ndarray, c: float, exponents: np.ndarray) -> None:
    """In-place state[i] *= exp(-1j * c * exponents[i])."""
    _impl.apply_scaled_phase(state, float(c), exponents)


def dephase(rho: np.ndarray, decay: float, popcounts: np.ndarray) -> None:
    """In-place rho[a, b] *= decay ** popcount(a XOR b)."""
    _impl.dephase(rho, float(decay), popcounts)
