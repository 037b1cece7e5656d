import numpy as np
import pytest

from spinres import (
    ConfigurationError,
    ConsistencyError,
    Correlators,
    GSeries,
    Method,
    ModelParams,
    TwoSiteState,
    correlator_table,
    correlators,
    g_series,
    oracle,
    reduced_state,
    reduced_states,
    state_from_correlators,
)


def test_r1_determinants_are_scalars():
    g = g_series(ModelParams(gamma=0.6, lam=0.4, alpha=0.3, delta=0.2), 2, "quadrature")
    c = correlators(g, 1)
    assert c.xx == pytest.approx(g[-1], abs=1e-15)
    assert c.yy == pytest.approx(g[1], abs=1e-15)
    assert c.zz == pytest.approx(g[0] ** 2 - g[1] * g[-1], abs=1e-15)
    assert c.mag_z == g[0]


def test_ferromagnetic_correlators():
    g = g_series(ModelParams.xxt(0.5, 2.0), 6, "analytic")
    for c in correlator_table(g):
        assert (c.xx, c.yy, c.zz, c.mag_z) == (0.0, 0.0, 1.0, -1.0)


def test_xx_chain_two_by_two_determinant():
    g = g_series(ModelParams.xxt(0.0, 0.0), 2, "analytic")
    assert correlators(g, 2).xx == pytest.approx((2 / np.pi) ** 2, abs=1e-14)
    q = g_series(ModelParams.xxt(0.0, 0.0), 2, "quadrature")
    assert correlators(q, 2).xx == pytest.approx((2 / np.pi) ** 2, abs=1e-9)


def test_general_toeplitz_determinant_against_numpy():
    g = g_series(ModelParams(gamma=0.9, lam=0.2, alpha=0.5, delta=-0.4), 8, "quadrature")
    for r in (3, 5, 8):
        mx = np.array([[g[i - j - 1] for j in range(r)] for i in range(r)])
        my = np.array([[g[i - j + 1] for j in range(r)] for i in range(r)])
        c = correlators(g, r)
        assert c.xx == pytest.approx(np.linalg.det(mx), abs=1e-12)
        assert c.yy == pytest.approx(np.linalg.det(my), abs=1e-12)
        assert c.zz == pytest.approx(g[0] ** 2 - g[r] * g[-r], abs=1e-15)


def test_range_error():
    g = g_series(ModelParams.xxt(0.7, 1.0), 3, "analytic")
    with pytest.raises(ConfigurationError):
        correlators(g, 4)
    with pytest.raises(ConfigurationError):
        correlators(g, 0)


def test_reduced_state_examples():
    for r in (1, 4, 9):
        s = reduced_state(ModelParams.xxt(0.5, 2.0), r, "analytic")
        assert (s.u_plus, s.u_minus, s.z_diag, s.y_plus, s.y_minus) == (0.0, 1.0, 0.0, 0.0, 0.0)
    for s in reduced_states(ModelParams.xxt(3.0, 0.5), 12):
        assert abs(s.y_minus) <= 1e-12
    for s in reduced_states(ModelParams(gamma=1, lam=0), 12):
        for v in (s.u_plus, s.u_minus, s.z_diag, abs(s.y_plus), abs(s.y_minus)):
            assert v == pytest.approx(0.25, abs=1e-9)


def test_state_invariants_on_random_parameters(rng):
    for _ in range(20):
        p = ModelParams(gamma=rng.uniform(-2, 2), lam=rng.uniform(-2, 2), alpha=rng.uniform(-2, 2),
                        delta=rng.uniform(-2, 2))
        for s in reduced_states(p, 8):
            assert s.u_plus + s.u_minus + 2 * s.z_diag == pytest.approx(1.0, abs=1e-10)
            assert min(s.u_plus, s.u_minus, s.z_diag) >= -1e-10
            assert s.y_minus**2 <= s.u_plus * s.u_minus + 1e-10
            assert s.y_plus**2 <= s.z_diag**2 + 1e-10


def test_positivity_violation_is_reported_not_clipped():
    bad = Correlators(mag_z=0.0, xx=1.5, yy=1.5, zz=0.0, distance=1)
    with pytest.raises(ConsistencyError):
        state_from_correlators(bad)
    with pytest.raises(ConsistencyError):
        TwoSiteState(0.5, 0.5, 0.1, 0.0, 0.0).check()


def test_matrix_round_trip_and_shape_check():
    s = TwoSiteState(0.3, 0.2, 0.25, -0.1, 0.15, distance=3)
    assert TwoSiteState.from_matrix(s.matrix(), distance=3) == s
    m = s.matrix()
    m[0, 1] = m[1, 0] = 0.01
    with pytest.raises(ConsistencyError):
        TwoSiteState.from_matrix(m)
    assert (s.mag_z, s.xx, s.yy, s.zz) == pytest.approx((0.1, 0.1, -0.5, 0.0))


def test_toeplitz_consistency_analytic_vs_quadrature():
    for a, lam in ((0.7, 1.0), (3.0, 0.5), (-0.8, 0.5)):
        an = g_series(ModelParams.xxt(a, lam), 12, "analytic")
        qu = g_series(ModelParams.xxt(a, lam), 12, "quadrature")
        for r in range(1, 13):
            assert correlators(an, r).xx == pytest.approx(correlators(qu, r).xx, abs=1e-7)


def test_finite_backend_range_check():
    with pytest.raises(ConfigurationError):
        reduced_states(ModelParams.xxt(0.7, 1.0, chain_length=9), 9, "finite")


def _max_diff(a, b):
    return max(abs(getattr(a, f) - getattr(b, f)) for f in ("mag_z", "xx", "yy", "zz"))


def test_oracle_agreement_with_finite_sum_backend():
    """Spec property: finite-sum correlators vs exact diagonalization at r=2.

    Fails at L=11: the exact ground state there lies in the Jordan-Wigner
    sector with antiperiodic momenta, which Eq. 3's grid does not sample
    (see test_oracle.py::test_sector_matched_free_fermions_are_exact).
    """
    p = ModelParams.xxt(0.7, 1.0)
    errs = {}
    for L in (9, 11, 13):
        pl = p.with_(chain_length=L)
        ed = oracle.oracle_correlators(oracle.solve(pl), 2)
        errs[L] = _max_diff(ed, correlators(g_series(pl, 2, "finite"), 2))
    assert errs[13] < errs[9]
    assert errs[11] <= 5e-2, errs
