import numpy as np
import pytest

from spinres import ModelParams, coherence_l1, concurrence, discord, g_series
from spinres.errors import CapacityError, ConfigurationError
from spinres.oracle import (
    dense_hamiltonian,
    ground_parity,
    ground_state,
    oracle_correlators,
    oracle_state,
    sector_matched_g,
    solve,
    two_site_rdm,
)
from spinres.rdm import correlators, state_from_correlators


def test_xx_ring_is_traceless_and_symmetric():
    H = dense_hamiltonian(ModelParams(gamma=0, lam=0, chain_length=3))
    assert H.shape == (8, 8)
    assert abs(np.trace(H)) < 1e-14
    assert np.allclose(H, H.T)


def test_missing_or_oversized_chain():
    with pytest.raises(ConfigurationError):
        dense_hamiltonian(ModelParams(gamma=1))
    with pytest.raises(CapacityError):
        dense_hamiltonian(ModelParams(gamma=1, chain_length=15))


def test_ground_state_of_diagonal_matrix():
    s = ground_state(np.diag([0.0, 1.0]))
    assert s.energy == 0.0 and s.degeneracy == 1
    assert np.allclose(np.abs(s.amplitudes), [1.0, 0.0])


def test_ising_ring_degenerate_cat_state():
    s = solve(ModelParams(gamma=1, lam=0, chain_length=9))
    assert s.degeneracy == 2
    rho = two_site_rdm(s, 0, 3)
    expected = 0.25 * (np.eye(4) + np.fliplr(np.eye(4)))  # even cat state: X matrix
    assert np.allclose(rho, expected, atol=1e-10)
    assert coherence_l1(oracle_state(s, 3)) == pytest.approx(1.0, abs=1e-10)


def test_deep_field_polarized():
    s = solve(ModelParams(gamma=0.5, lam=10, chain_length=7))
    assert s.degeneracy == 1
    rho = two_site_rdm(s, 0, 2)
    assert rho[0, 0].real > 0.99


@pytest.mark.parametrize("params", [
    ModelParams.xxt(0.7, 1.0, chain_length=9),
    ModelParams(gamma=0.6, lam=0.4, alpha=0.3, delta=-0.5, chain_length=9),
])
def test_rdm_is_a_density_matrix(params):
    s = solve(params)
    for j in range(1, 5):
        rho = two_site_rdm(s, 0, j)
        assert np.allclose(rho, rho.conj().T)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_translation_invariance():
    s = solve(ModelParams(gamma=0.6, lam=0.4, alpha=0.3, delta=-0.5, chain_length=9))
    ref = two_site_rdm(s, 0, 2)
    for i in range(1, 9):
        assert np.allclose(two_site_rdm(s, i, (i + 2) % 9), ref, atol=1e-9)


def test_site_index_errors():
    s = solve(ModelParams(gamma=1, lam=0.5, chain_length=5))
    with pytest.raises(ConfigurationError):
        two_site_rdm(s, 0, 5)
    with pytest.raises(ConfigurationError):
        two_site_rdm(s, 1, 1)


@pytest.mark.parametrize("params", [
    ModelParams.xxt(0.7, 1.0, chain_length=9),
    ModelParams.xxt(0.7, 1.0, chain_length=11),
    ModelParams.xxt(3.0, 0.5, chain_length=11),
    ModelParams(gamma=0.6, lam=0.4, alpha=0.3, delta=-0.5, chain_length=7),
    ModelParams(gamma=1, lam=1.5, alpha=0.4, delta=-1, chain_length=9),
])
def test_sector_matched_free_fermions_are_exact(params):
    s = solve(params)
    r_max = (params.chain_length - 1) // 2
    g = sector_matched_g(params, s, r_max)
    for r in range(1, r_max + 1):
        ff = correlators(g, r)
        ed = oracle_correlators(s, r)
        for name in ("mag_z", "xx", "yy", "zz"):
            assert getattr(ff, name) == pytest.approx(getattr(ed, name), abs=1e-9), (r, name)


def test_resources_agree_with_oracle():
    params = ModelParams.xxt(0.7, 1.0, chain_length=11)
    s = solve(params)
    g = sector_matched_g(params, s, 5)
    for r in range(1, 6):
        ff = state_from_correlators(correlators(g, r))
        ed = oracle_state(s, r)
        assert coherence_l1(ff) == pytest.approx(coherence_l1(ed), abs=1e-9)
        assert concurrence(ff) == pytest.approx(concurrence(ed), abs=1e-9)
        assert discord(ff).value == pytest.approx(discord(ed).value, abs=1e-8)


def test_ground_parity_is_definite():
    assert ground_parity(solve(ModelParams.xxt(0.7, 1.0, chain_length=9))) in (1, -1)
    assert ground_parity(solve(ModelParams(gamma=0.5, lam=10, chain_length=7))) == 1


def test_finite_size_trend_against_thermodynamic_limit():
    """Oracle magnetization approaches the infinite-chain value as L grows."""
    inf = g_series(ModelParams.xxt(0.7, 1.0), 1)
    errs = []
    for L in (7, 11, 13):
        s = solve(ModelParams.xxt(0.7, 1.0, chain_length=L))
        errs.append(abs(oracle_correlators(s, 1).xx - correlators(inf, 1).xx))
    assert errs[-1] < errs[0]
