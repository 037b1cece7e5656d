"""Winding number, gap closings and coherence-derivative detection of transitions."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .corr import DEFAULT_TOL, g_series
from .errors import ConfigurationError, CriticalParametersError, NumericalError
from .model import ModelParams, dispersion, dispersion_derivative, gap_tolerance
from .rdm import correlators, state_from_correlators
from .resources import coherence_l1

__all__ = [
    "Axis",
    "WindingResult",
    "winding_number",
    "winding_integral",
    "gap_minimum",
    "critical_scan",
    "coherence_derivative_scan",
    "DerivativeScan",
]

N_WINDING = 4096
N_GAP_SCAN = 1024
CRITICAL_GAP_TOL = 1e-9
DEDUPE_TOL = 1e-6


class Axis(str, enum.Enum):
    ALPHA = "alpha"
    LAMBDA = "lambda"
    GAMMA = "gamma"
    DELTA = "delta"

    @property
    def field(self):
        return "lam" if self is Axis.LAMBDA else self.value


def _at(params: ModelParams, axis: Axis, value: float) -> ModelParams:
    return params.with_(**{axis.field: value})


@dataclass(frozen=True)
class WindingResult:
    n: int
    raw: float
    closure_defect: float


def winding_number(params: ModelParams, n_steps: int = N_WINDING) -> WindingResult:
    """Signed number of turns of (y(phi), z(phi)) around the origin over one zone.

    Counter-clockwise in the (y, z) plane counts positive, which makes the
    pure Ising point (gamma=1, lambda=alpha=0) wind +1.
    """
    if n_steps < 3:
        raise ConfigurationError("n_steps must be >= 3")
    gap = gap_minimum(params)[1]
    if gap <= max(gap_tolerance(params), 1e-12):
        raise CriticalParametersError(f"loop passes through the origin (gap={gap:.2e})")
    phis = np.linspace(0.0, 2 * np.pi, n_steps + 1)
    z, y, _ = dispersion(params, phis)
    angles = np.arctan2(z, y)
    steps = np.diff(angles)
    steps = (steps + np.pi) % (2 * np.pi) - np.pi  # wrap each increment to [-pi, pi)
    # on a closed loop the wrapped sum is always an integer; a coarse grid shows
    # up as increments so large that their wrapping is ambiguous
    largest = float(np.abs(steps).max())
    if largest > np.pi / 2:
        raise NumericalError(f"angle increment {largest:.3f} rad unresolved; increase n_steps")
    raw = steps.sum() / (2 * np.pi)
    n = int(round(raw))
    defect = abs(raw - n)
    if defect > 1e-3:
        raise NumericalError(f"winding not integral (raw={raw:.6f}); increase n_steps", estimate=raw)
    return WindingResult(n=n, raw=float(raw), closure_defect=float(defect))


def winding_integral(params: ModelParams, n_steps: int = N_WINDING) -> float:
    """(1/2pi) * loop integral of (y dz - z dy)/(y^2 + z^2), by the periodic trapezoid rule."""
    phis = np.linspace(0.0, 2 * np.pi, n_steps, endpoint=False)
    z, y, e = dispersion(params, phis)
    dz, dy = dispersion_derivative(params, phis)
    integrand = (y * dz - z * dy) / (e * e)
    return float(integrand.mean())


def gap_minimum(params: ModelParams, n_scan: int = N_GAP_SCAN):
    """Global minimum of the quasiparticle energy over [0, pi] -> (phi_star, gap)."""
    phis = np.linspace(0.0, np.pi, n_scan + 1)
    _, _, e = dispersion(params, phis)
    k = int(np.argmin(e))
    lo, hi = phis[max(k - 1, 0)], phis[min(k + 1, n_scan)]

    def e2(phi):
        z, y, _ = dispersion(params, phi)
        return z * z + y * y

    def slope(phi):
        # d(E^2)/dphi / 2
        z, y, _ = dispersion(params, phi)
        dz, dy = dispersion_derivative(params, phi)
        return float(z * dz + y * dy)

    candidates = [float(phis[k])]
    if slope(lo) < 0.0 < slope(hi):
        # root of the derivative is resolved to ~1e-15, unlike a bracketing
        # minimizer whose floor is sqrt(eps)
        candidates.append(optimize.brentq(slope, lo, hi, xtol=1e-15))
    else:
        res = optimize.minimize_scalar(e2, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        candidates.append(float(res.x))
    phi_star = min(candidates, key=e2)
    return phi_star, float(np.sqrt(max(e2(phi_star), 0.0)))


def _golden(f, a, b, xtol=1e-12):
    """Golden-section minimum of a unimodal f on [a, b] to an absolute xtol.

    The gap near an isolated closing is V-shaped, |x - x_c|; scipy's bounded
    Brent stops at a relative sqrt(eps) and would leave the gap at ~1e-8.
    """
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return float(x), float(f(x))


def critical_scan(params: ModelParams, axis, lo: float, hi: float, n: int = 401,
                  tol: float = CRITICAL_GAP_TOL) -> list[float]:
    """Parameter values in [lo, hi] where the single-particle gap closes.

    Two kinds of closing are located: edges of gapless intervals (bisection
    on the indicator gap < tol) and isolated touchings (bounded minimization
    of the gap around local minima of the scan).
    """
    axis = Axis(axis)
    if not lo < hi:
        raise ConfigurationError("need lo < hi")
    if n < 3:
        raise ConfigurationError("need n >= 3")

    def gap(x):
        return gap_minimum(_at(params, axis, x))[1]

    xs = np.linspace(lo, hi, n)
    gs = np.array([gap(x) for x in xs])
    closed = gs < tol
    roots = []

    for i in range(n - 1):
        if closed[i] != closed[i + 1]:
            a, b = xs[i], xs[i + 1]
            ca = closed[i]
            while b - a > 1e-10:
                m = 0.5 * (a + b)
                if (gap(m) < tol) == ca:
                    a = m
                else:
                    b = m
            roots.append(0.5 * (a + b))

    for i in range(n):
        if closed[i]:
            continue
        left = gs[i - 1] if i > 0 else np.inf
        right = gs[i + 1] if i < n - 1 else np.inf
        if gs[i] <= left and gs[i] <= right:
            x_min, g_min = _golden(gap, xs[max(i - 1, 0)], xs[min(i + 1, n - 1)])
            if g_min < tol:
                roots.append(x_min)

    # an isolated touching that falls on a scan point is bracketed from both
    # sides; averaging the cluster recovers its centre
    roots.sort()
    clusters = []
    for x in roots:
        if clusters and x - clusters[-1][-1] <= DEDUPE_TOL:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    return [float(np.mean(c)) for c in clusters]


@dataclass(frozen=True)
class DerivativeScan:
    values: np.ndarray
    coherence: np.ndarray
    derivative: np.ndarray
    flagged: list[float]
    growth: dict = field(default_factory=dict)  # critical value -> |dC/dx| gain per decade of approach


PROBE_STEPS = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


def _adjacent_coherence(params: ModelParams, tol: float) -> float:
    c = correlators(g_series(params, 1, "quadrature", tol), 1)
    return coherence_l1(state_from_correlators(c, check=False))


def coherence_derivative_scan(params: ModelParams, axis, lo: float, hi: float, n: int = 201,
                              tol: float = DEFAULT_TOL, spike_factor: float = 10.0,
                              growth_factor: float = 0.1) -> DerivativeScan:
    """Adjacent-site coherence along an axis and its central-difference derivative.

    A critical value x_c found by :func:`critical_scan` is flagged as a
    divergence of dC/dx when either

    * the largest |dC/dx| on the grid within two steps of x_c exceeds
      ``spike_factor`` times the median |dC/dx| of the scan, or
    * one-sided difference quotients taken at offsets h = 1e-3 .. 1e-7 from
      x_c grow by more than ``growth_factor`` times that median per decade of
      h on both sides: the signature of the logarithmic divergence of a
      free-fermion transition, which a grid of modest resolution never
      resolves into a 10x spike.

    Grid points that land on a gap closing are evaluated at a nudged position.
    """
    axis = Axis(axis)
    if n < 5:
        raise ConfigurationError("need n >= 5")
    xs = np.linspace(lo, hi, n)
    step = xs[1] - xs[0]
    cs = np.empty(n)
    for i, x in enumerate(xs):
        p = _at(params, axis, x)
        if gap_minimum(p)[1] < CRITICAL_GAP_TOL:
            p = _at(params, axis, x + 1e-6 * step)
        cs[i] = _adjacent_coherence(p, tol)
    deriv = np.gradient(cs, xs)
    scale = max(float(np.median(np.abs(deriv))), 1e-12)
    flagged, growth = [], {}
    for xc in critical_scan(params, axis, lo, hi):
        near = np.abs(xs - xc) <= 2 * step
        spike = near.any() and np.abs(deriv[near]).max() > spike_factor * scale
        c0 = _adjacent_coherence(_at(params, axis, xc), tol)
        rates = []
        for side in (1.0, -1.0):
            quotients = [abs(_adjacent_coherence(_at(params, axis, xc + side * h), tol) - c0) / h
                         for h in PROBE_STEPS]
            # least-squares slope of |dC/dx| against decades of approach
            rates.append(float(np.polyfit(-np.log10(PROBE_STEPS), quotients, 1)[0]))
        growth[xc] = min(rates)
        if spike or growth[xc] > growth_factor * scale:
            flagged.append(xc)
    return DerivativeScan(values=xs, coherence=cs, derivative=deriv, flagged=flagged, growth=growth)
