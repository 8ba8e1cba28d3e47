import numpy as np

from spimris.kernels import _numba, _numpy, backend


def random_psd(m, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, 2 * m)) + 1j * rng.standard_normal((m, 2 * m))
    return np.ascontiguousarray(a @ a.conj().T / m)


def test_backend_reported():
    assert backend() in {"numba", "numpy"}


def test_ris_sweep_backends_agree():
    for seed in range(6):
        q = random_psd(24, seed)
        psi = np.exp(2j * np.pi * np.random.default_rng(seed).uniform(size=24))
        for grid in (0, 4, 8):
            a = _numpy.ris_sweep(psi, q, 3, grid)
            b = _numba.ris_sweep(psi, q, 3, grid)
            assert np.allclose(a, b, atol=1e-12)


def test_mu_greedy_backends_agree():
    rng = np.random.default_rng(3)
    for seed in range(4):
        m, users = 16, 3
        z = rng.standard_normal((m, users, users)) + 1j * rng.standard_normal(
            (m, users, users)
        )
        psi = np.exp(2j * np.pi * rng.uniform(size=m))
        kappa = np.zeros(users)
        a = _numpy.mu_greedy_sweep(psi, z, kappa, 0.5, 8, 2)
        b = _numba.mu_greedy_sweep(psi, z, kappa, 0.5, 8, 2)
        assert np.allclose(a, b, atol=1e-10)


def test_greedy_never_reduces_min_margin():
    rng = np.random.default_rng(4)
    m, users = 16, 2
    z = rng.standard_normal((m, users, users)) + 1j * rng.standard_normal(
        (m, users, users)
    )
    psi = np.exp(2j * np.pi * rng.uniform(size=m))

    def min_sinr(p):
        t = np.einsum("m,muv->uv", p, z)
        power = np.abs(t) ** 2
        sig = np.diag(power)
        interf = power.sum(axis=1) - sig
        return ((sig / users) / (interf / users + 0.3)).min()

    before = min_sinr(psi)
    after = min_sinr(_numpy.mu_greedy_sweep(psi, z, np.zeros(users), 0.3, 8, 2))
    assert after >= before - 1e-12
