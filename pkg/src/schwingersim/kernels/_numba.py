"""Jit-compiled kernels; semantics match _numpy exactly.

cache=True keeps compilation a one-time cost per machine.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def apply_single_qubit(state, g00, g01, g10, g11, stride):
    dim = state.shape[0]
    step = 2 * stride
    for base in range(0, dim, step):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a0 = state[i0]
            a1 = state[i1]
            state[i0] = g00 * a0 + g01 * a1
            state[i1] = g10 * a0 + g11 * a1


@numba.njit(cache=True)
def apply_scaled_phase(state, c, exponents):
    for i in range(state.shape[0]):
        state[i] *= np.exp(-1j * c * exponents[i])


@numba.njit(cache=True)
def dephase(rho, decay, popcounts):
    n = rho.shape[0]
    for a in range(n):
        for b in range(n):
            rho[a, b] *= decay ** popcounts[a ^ b]
