import numpy as np
import pytest

from schwingersim import (
    DephasingModel,
    ExactPropagator,
    ModelParams,
    ParameterError,
    ZeroSupportError,
    apply_dephasing,
    build_spin_hamiltonian,
    partial_transpose,
    physical_projector,
    postselect,
    postselect_pure,
    sample_shots,
    vacuum_state,
)
from schwingersim.engine import check_density, check_pure, evolution_operator, to_density

import _oracles as orc


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def _random_hermitian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def test_exact_propagator_matches_expm(rng):
    H = _random_hermitian(8, rng)
    prop = ExactPropagator(H)
    psi = orc.random_state(3, rng)
    for t in (0.0, 0.3, 1.7):
        U = orc.expm_u(H, t)
        assert np.allclose(prop.unitary(t), U, atol=1e-12)
        assert np.allclose(prop.evolve(psi, t), U @ psi, atol=1e-12)
    rho = orc.random_density(3, rng)
    U = orc.expm_u(H, 0.9)
    assert np.allclose(prop.evolve_density(rho, 0.9), U @ rho @ U.conj().T, atol=1e-12)


def test_propagator_preserves_norm_and_rejects_bad_input(rng):
    H = build_spin_hamiltonian(ModelParams(N=4, w=1.0, J=1.0, m=0.5))
    prop = ExactPropagator(H)
    psi = prop.evolve(vacuum_state(4), 2.7)
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
    with pytest.raises(ParameterError):
        ExactPropagator(np.triu(np.ones((4, 4))))
    with pytest.raises(ParameterError):
        prop.evolve(np.ones(4, dtype=complex) / 2.0, 1.0)
    U = evolution_operator(H, 0.4)
    assert np.max(np.abs(U @ U.conj().T - np.eye(16))) < 1e-12


def test_dephasing_weights_and_edge_probabilities(rng):
    rho = orc.random_density(3, rng)
    p = 0.038
    out = apply_dephasing(rho, DephasingModel(p))
    idx = np.arange(8)
    hamming = np.array([[bin(a ^ b).count("1") for b in idx] for a in idx])
    assert np.allclose(out, rho * (1 - 2 * p) ** hamming, atol=1e-14)
    # diagonal is exactly untouched
    assert np.array_equal(np.diag(out), np.diag(rho))
    assert np.allclose(apply_dephasing(rho, DephasingModel(0.0)), rho, atol=0)
    fully = apply_dephasing(rho, DephasingModel(0.5))
    assert np.allclose(fully, np.diag(np.diag(rho)), atol=1e-15)
    with pytest.raises(ParameterError):
        DephasingModel(0.6)
    with pytest.raises(ParameterError):
        DephasingModel(-0.01)


def test_dephasing_channels_commute(rng):
    rho = orc.random_density(3, rng)
    a, b = DephasingModel(0.031), DephasingModel(0.038)
    ab = apply_dephasing(apply_dephasing(rho, a), b)
    ba = apply_dephasing(apply_dephasing(rho, b), a)
    assert np.allclose(ab, ba, atol=1e-15)


def test_postselect(rng):
    P = physical_projector(4)
    rho = orc.random_density(4, rng)
    kept, retention = postselect(rho, P)
    assert 0 < retention < 1
    assert abs(np.trace(kept).real - 1.0) < 1e-12
    mask = np.real(np.diag(P)) > 0.5
    assert np.all(kept[~mask][:, ~mask] == 0)
    psi = orc.random_state(4, rng)
    kept_psi, r2 = postselect_pure(psi, P)
    assert abs(np.linalg.norm(kept_psi) - 1.0) < 1e-12
    assert r2 == pytest.approx(float(np.sum(np.abs(psi[mask]) ** 2)), abs=1e-14)
    # a fully charged state has no support in the kept sector
    charged = np.zeros(16, dtype=complex)
    charged[0] = 1.0  # all spins up
    with pytest.raises(ZeroSupportError):
        postselect_pure(charged, P)
    with pytest.raises(ZeroSupportError):
        postselect(to_density(charged), P)
    with pytest.raises(ParameterError):
        postselect(rho, np.ones((16, 16)))


def test_partial_transpose_bell_state():
    bell = np.zeros(4, dtype=complex)
    bell[0b00] = bell[0b11] = 1 / np.sqrt(2)
    rho = to_density(bell)
    pt = partial_transpose(rho, 1)
    eigs = np.linalg.eigvalsh(pt)
    assert eigs[0] == pytest.approx(-0.5, abs=1e-12)
    assert np.allclose(partial_transpose(pt, 1), rho, atol=0)
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-15
    with pytest.raises(ParameterError):
        partial_transpose(rho, 2)


def test_partial_transpose_matches_reference(rng):
    rho = orc.random_density(4, rng)
    for cut in (1, 2, 3):
        mine = partial_transpose(rho, cut)
        eigs = np.linalg.eigvalsh(mine)
        neg = float(np.sum(np.abs(eigs[eigs < 0])))
        assert neg == pytest.approx(orc.negativity_pt(rho, cut, 4), abs=1e-12)


def test_state_validators(rng):
    with pytest.raises(ParameterError):
        check_pure(np.ones(8, dtype=complex))  # not normalized
    with pytest.raises(ParameterError):
        check_pure(np.ones(6, dtype=complex) / np.sqrt(6))  # not a power of two
    with pytest.raises(ParameterError):
        check_pure(np.zeros(2**13, dtype=complex))  # beyond the size limit
    rho = orc.random_density(2, rng)
    assert check_density(rho) == 2
    with pytest.raises(ParameterError):
        check_density(rho * 2.0)  # trace 2
    bad = rho.copy()
    bad[0, 1] += 0.2
    with pytest.raises(ParameterError):
        check_density(bad)  # not Hermitian
    # slightly negative eigenvalues inside the tolerance pass
    eps = 5e-10
    soft = (1 - 2 * eps) * np.diag([0.5, 0.5, 0.0, 0.0]) + eps * np.diag([1, 1, -1, 1])
    soft = soft.astype(complex)
    assert check_density(soft + 0j) == 2
    with pytest.raises(ParameterError):
        check_density(np.diag([0.7, 0.4, -0.1, 0.0]).astype(complex))


def test_sample_shots(rng):
    psi = orc.random_state(3, rng)
    counts = sample_shots(psi, 500, seed=9)
    assert counts.sum() == 500
    assert np.array_equal(counts, sample_shots(psi, 500, seed=9))
    peaked = np.zeros(8, dtype=complex)
    peaked[3] = 1.0
    counts = sample_shots(peaked, 100, seed=1)
    assert counts[3] == 100
    with pytest.raises(ParameterError):
        sample_shots(psi, 0)
