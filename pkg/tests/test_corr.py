import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinres import (
    AmbiguousPhaseError,
    ConfigurationError,
    CriticalParametersError,
    Method,
    ModelParams,
    NumericalError,
    XXTPhase,
    critical_lines_xxt,
    fermi_points,
    g_analytic_xxt,
    g_finite,
    g_quadrature,
    g_series,
    phase_region_xxt,
)

# Values recomputed from Eq. 5 at full precision (the spec quotes hand-rounded ones).
PHI_PLUS_SL1 = 0.641441763375998          # (alpha=0.7, lambda=1.0); spec "~0.6397"
G1_SL1 = 0.38092223820061755              # spec "~0.3801"
PHI_SL2 = (0.8162447332564471, 2.589881172842719)  # (3.0, 0.5); spec "~0.8157, ~2.5900"
G1_SL2 = 0.1301462273182617               # spec "~0.1305"


def eq5(alpha, lam, sign):
    return np.arccos((-1 + sign * np.sqrt(1 + 8 * alpha**2 + 8 * alpha * lam)) / (4 * alpha))


def off_critical_xxt(rng, margin=0.05):
    """Random SL-I / SL-II point at least ``margin`` away from every critical line."""
    while True:
        a, lam = rng.uniform(-3, 3), rng.uniform(-4, 4)
        if abs(a) < 0.05:
            continue
        if min(abs(lam - lc) for lc in critical_lines_xxt(a)) < margin:
            continue
        if phase_region_xxt(a, lam) in (XXTPhase.SL1, XXTPhase.SL2):
            return a, lam


# --- g_finite ----------------------------------------------------------------

def test_g_finite_examples():
    deep = ModelParams(lam=10, chain_length=1001)
    assert abs(g_finite(deep, 3)) < 1e-3
    assert g_finite(deep, 0) == pytest.approx(-1.0, abs=1e-3)
    assert abs(g_finite(ModelParams(lam=0, chain_length=1001), 0)) < 1e-3


def test_g_finite_errors():
    with pytest.raises(CriticalParametersError):
        g_finite(ModelParams(gamma=1, lam=1, chain_length=7), 1)   # mode phi=0 has zero energy
    with pytest.raises(ConfigurationError):
        g_finite(ModelParams(lam=2, chain_length=7), 7)


def test_g_finite_is_the_mode_sum():
    p = ModelParams(gamma=0.7, lam=0.3, alpha=0.4, delta=-0.5, chain_length=9)
    k = np.arange(-4, 5)
    phi = 2 * np.pi * k / 9
    z = 0.3 - np.cos(phi) - 0.4 * np.cos(2 * phi)
    y = 0.7 * np.sin(phi) - 0.2 * np.sin(2 * phi)
    for r in (-3, 0, 2):
        expected = -np.mean((np.cos(phi * r) * z + np.sin(phi * r) * y) / np.hypot(z, y))
        assert g_finite(p, r) == pytest.approx(expected, abs=1e-15)


# --- g_quadrature ------------------------------------------------------------

def test_g_quadrature_examples():
    assert g_quadrature(ModelParams.xxt(0.7, 1.0), 1) == pytest.approx(2 * np.sin(eq5(0.7, 1.0, 1)) / np.pi, abs=1e-10)
    assert g_quadrature(ModelParams.xxt(0.7, 1.0), 1) == pytest.approx(G1_SL1, abs=1e-10)
    assert abs(g_quadrature(ModelParams.xxt(0.5, 2.0), 4)) <= 1e-10
    p = ModelParams(gamma=1, delta=-1, lam=1, alpha=1)
    assert g_quadrature(p, 0) == pytest.approx(g_finite(p.with_(chain_length=1001), 0), abs=1e-3)


def test_g_quadrature_tolerance_failure_carries_estimate():
    p = ModelParams(gamma=1, delta=-1, lam=1, alpha=1)
    with pytest.raises(NumericalError) as info:
        g_quadrature(p, 0, tol=1e-20)
    assert info.value.estimate == pytest.approx(g_quadrature(p, 0), abs=1e-10)
    with pytest.raises(ConfigurationError):
        g_quadrature(p, 0, tol=0)


def test_finite_size_convergence():
    # close to the alpha_c = 2 closing so the finite-size error stays above round-off
    p = ModelParams(gamma=1, delta=-1, lam=1, alpha=1.95)
    q = g_series(p, 5, "quadrature")
    errs = [np.abs(g_series(p.with_(chain_length=L), 5, "finite").table() - q.table()).max()
            for L in (101, 301, 1001)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-3


# --- Fermi points and phases -------------------------------------------------

def test_fermi_point_examples():
    (p,) = fermi_points(0.7, 1.0).points
    assert p == pytest.approx(eq5(0.7, 1.0, 1), abs=1e-12)
    assert p == pytest.approx(PHI_PLUS_SL1, abs=1e-12)
    pts = fermi_points(3.0, 0.5).points
    np.testing.assert_allclose(pts, [eq5(3.0, 0.5, 1), eq5(3.0, 0.5, -1)], atol=1e-12)
    np.testing.assert_allclose(pts, PHI_SL2, atol=1e-12)
    assert fermi_points(0.5, 2.0).points == ()


def test_fermi_points_alpha_zero_limit():
    assert fermi_points(0.0, 0.3).points == pytest.approx((np.arccos(0.3),))
    assert fermi_points(1e-10, 0.3).points == pytest.approx((np.arccos(0.3),), abs=1e-8)
    assert fermi_points(0.0, 1.3).points == ()


@given(st.floats(-3, 3), st.floats(-4, 4))
def test_fermi_points_are_roots(alpha, lam):
    for phi in fermi_points(alpha, lam).points:
        assert 0 <= phi <= np.pi
        assert abs(lam - np.cos(phi) - alpha * np.cos(2 * phi)) <= 1e-10


def test_phase_region_examples():
    assert phase_region_xxt(0.7, 1.0) is XXTPhase.SL1
    assert phase_region_xxt(3.0, 0.5) is XXTPhase.SL2
    assert phase_region_xxt(0.25, -0.75) is XXTPhase.CRITICAL
    assert phase_region_xxt(0.5, 2.0) is XXTPhase.FERR_I
    assert phase_region_xxt(0.5, -2.0) is XXTPhase.FERR_II


# --- analytic XXT ------------------------------------------------------------

def test_g_analytic_examples():
    assert g_analytic_xxt(0.5, 2.0, 5) == 0.0 and g_analytic_xxt(0.5, 2.0, 0) == -1.0
    assert g_analytic_xxt(0.7, 1.0, 1) == pytest.approx(G1_SL1, abs=1e-12)
    p1, p2 = PHI_SL2
    assert g_analytic_xxt(3.0, 0.5, 1) == pytest.approx(2 * (np.sin(p1) - np.sin(p2)) / np.pi, abs=1e-12)
    assert g_analytic_xxt(3.0, 0.5, 1) == pytest.approx(G1_SL2, abs=1e-12)
    assert g_quadrature(ModelParams.xxt(3.0, 0.5), 1) == pytest.approx(G1_SL2, abs=1e-10)
    with pytest.raises(AmbiguousPhaseError):
        g_analytic_xxt(0.5, 1.5, 1)


def test_method_agreement_random_points(rng):
    for _ in range(25):
        a, lam = off_critical_xxt(rng)
        an = g_series(ModelParams.xxt(a, lam), 10, "analytic")
        qu = g_series(ModelParams.xxt(a, lam), 10, "quadrature")
        assert np.abs(an.table() - qu.table()).max() <= 1e-8


def test_alpha_negative_sl2_sign_pattern():
    # alpha < 0 flips which side of the Fermi points z is negative on
    for a, lam in ((-3.0, -0.5), (-1.0, 0.3)):
        if phase_region_xxt(a, lam) is not XXTPhase.SL2:
            continue
        an = g_series(ModelParams.xxt(a, lam), 6, "analytic")
        qu = g_series(ModelParams.xxt(a, lam), 6, "quadrature")
        assert np.abs(an.table() - qu.table()).max() <= 1e-8


# --- GSeries -----------------------------------------------------------------

@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_g_bound_and_xxt_symmetry(g, lam, a, d):
    p = ModelParams(gamma=g, lam=lam, alpha=a, delta=d)
    try:
        s = g_series(p, 6, "quadrature")
    except NumericalError:
        return  # gapless set defeating subdivision is reported, not hidden
    assert np.abs(s.table()).max() <= 1 + 1e-9
    x = g_series(ModelParams.xxt(a, lam), 6, "quadrature")
    np.testing.assert_allclose(x.table(), x.table()[::-1], atol=1e-10)


def test_gseries_is_read_only_and_indexed():
    s = g_series(ModelParams.xxt(0.7, 1.0), 3, "analytic")
    assert s.method is Method.ANALYTIC and s[1] == pytest.approx(G1_SL1)
    with pytest.raises(ValueError):
        s.values[0] = 1.0
    with pytest.raises(IndexError):
        s[4]


def test_analytic_requires_xxt():
    with pytest.raises((ConfigurationError, ValueError)):
        g_series(ModelParams(gamma=1, lam=0.5), 3, "analytic")


def test_finite_method_requires_chain_length():
    with pytest.raises(ConfigurationError):
        g_series(ModelParams.xxt(0.7, 1.0), 3, "finite")
