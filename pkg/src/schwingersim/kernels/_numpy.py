"""Pure-numpy kernel implementations.

Reference semantics for the jit backend; everything operates in place on
contiguous complex128 arrays.
"""
import numpy as np


def apply_single_qubit(state, g00, g01, g10, g11, stride):
    dim = state.shape[0]
    v = state.reshape(dim // (2 * stride), 2, stride)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = g00 * a0 + g01 * a1
    v[:, 1, :] = g10 * a0 + g11 * a1


def apply_scaled_phase(state, c, exponents):
    state *= np.exp(-1j * c * exponents)


def dephase(rho, decay, popcounts):
    idx = np.arange(rho.shape[0])
    rho *= decay ** popcounts[idx[:, None] ^ idx[None, :]]
