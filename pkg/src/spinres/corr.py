"""The fermionic contraction G_r = <B_0 A_r> by three routes.

* ``g_finite``      -- exact mode sum on an odd ring of L sites,
* ``g_quadrature``  -- thermodynamic-limit integral over (0, pi),
* ``g_analytic_xxt`` -- closed forms for the XXT chain (gamma = delta = 0).

Every spin correlator of the two-site state is built from a table of G_r
(see :mod:`spinres.rdm`), so a :class:`GSeries` covering r in [-R, R] is the
unit of caching.
"""
from __future__ import annotations

import enum
import functools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import (
    AmbiguousPhaseError,
    ConfigurationError,
    CriticalParametersError,
    NumericalError,
)
from .model import ModelParams, dispersion, gap_tolerance, mode_momenta

__all__ = [
    "Method",
    "XXTPhase",
    "GSeries",
    "FermiPoints",
    "g_finite",
    "g_quadrature",
    "g_analytic_xxt",
    "g_series",
    "fermi_points",
    "phase_region_xxt",
    "critical_lines_xxt",
    "split_points",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
CRITICAL_LINE_TOL = 1e-9
N_ROOT_SCAN = 1024


class Method(str, enum.Enum):
    FINITE = "finite"
    QUADRATURE = "quadrature"
    ANALYTIC = "analytic"


class XXTPhase(str, enum.Enum):
    FERR_I = "Ferr-I"
    FERR_II = "Ferr-II"
    SL1 = "SL-I"
    SL2 = "SL-II"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class GSeries:
    """G_r for r in [-r_max, r_max]; ``values[r + r_max]`` holds G_r."""

    r_max: int
    values: np.ndarray
    method: Method
    params: ModelParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (2 * self.r_max + 1,):
            raise ValueError("values must have length 2*r_max + 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, r: int) -> float:
        if abs(r) > self.r_max:
            raise IndexError(f"G_{r} outside the tabulated range [-{self.r_max}, {self.r_max}]")
        return float(self.values[r + self.r_max])

    def table(self):
        """Array view indexable with offset ``r_max``; for vectorized consumers."""
        return self.values

    @property
    def rs(self):
        return np.arange(-self.r_max, self.r_max + 1)


@dataclass(frozen=True)
class FermiPoints:
    points: tuple[float, ...]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


# ---------------------------------------------------------------------------
# finite chain

def _finite_kernel(params: ModelParams):
    L = params.chain_length
    if L is None:
        raise ConfigurationError("finite-sum G_r needs chain_length")
    phis = mode_momenta(L)
    z, y, energy = dispersion(params, phis)
    if energy.min() < gap_tolerance(params):
        k = int(np.argmin(energy))
        raise CriticalParametersError(
            f"mode phi={phis[k]:.6g} is gapless for {params}; nudge the parameters"
        )
    return phis, z / energy, y / energy


def g_finite(params: ModelParams, r: int) -> float:
    L = params.chain_length
    if L is not None and abs(r) >= L:
        raise ConfigurationError(f"|r| must be < L={L}, got r={r}")
    phis, zn, yn = _finite_kernel(params)
    return float(-np.mean(np.cos(phis * r) * zn + np.sin(phis * r) * yn))


def _g_finite_series(params: ModelParams, r_max: int) -> np.ndarray:
    if params.chain_length is None:
        raise ConfigurationError("the finite-sum backend needs a chain_length")
    if r_max >= params.chain_length:
        raise ConfigurationError(f"r_max={r_max} must be < L={params.chain_length}")
    phis, zn, yn = _finite_kernel(params)
    rs = np.arange(-r_max, r_max + 1)[:, None]
    return -np.mean(np.cos(phis * rs) * zn + np.sin(phis * rs) * yn, axis=1)


# ---------------------------------------------------------------------------
# thermodynamic limit

def _scan_roots(f, lo, hi, n=N_ROOT_SCAN):
    xs = np.linspace(lo, hi, n + 1)
    fs = f(xs)
    roots = [float(x) for x, v in zip(xs, fs) if v == 0.0 and lo < x < hi]
    for a, b, fa, fb in zip(xs[:-1], xs[1:], fs[:-1], fs[1:]):
        if fa * fb < 0:
            roots.append(optimize.brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots


def split_points(params: ModelParams) -> list[float]:
    """Interior points of (0, pi) where the integrand may be non-smooth.

    These are the sign changes of z (Fermi points in the XXT case) and of y;
    every zero of the energy lies among them.
    """
    def z(phi):
        return params.lam - np.cos(phi) - params.alpha * np.cos(2 * phi)

    def y(phi):
        return params.gamma * np.sin(phi) + params.alpha * params.delta * np.sin(2 * phi)

    pts = _scan_roots(z, 0.0, np.pi)
    if params.gamma != 0.0 or params.delta != 0.0:
        pts += _scan_roots(y, 0.0, np.pi)
    pts = sorted(p for p in pts if 0.0 < p < np.pi)
    out = []
    for p in pts:
        if not out or p - out[-1] > 1e-13:
            out.append(p)
    return out


def _kernel(params: ModelParams, rs):
    rs = np.asarray(rs, dtype=float)

    def f(phi):
        z, y, energy = dispersion(params, phi)
        if energy == 0.0:
            # measure-zero point; pick the one-sided limit's magnitude bound
            return np.zeros_like(rs)
        return (np.cos(phi * rs) * z + np.sin(phi * rs) * y) / energy

    return f


def g_quadrature(params: ModelParams, r: int, tol: float = DEFAULT_TOL) -> float:
    """-(1/pi) * integral_0^pi [cos(phi r) z + sin(phi r) y] / energy dphi."""
    if not tol > 0:
        raise ConfigurationError("tol must be positive")
    try:
        return float(_quadrature_series(params, np.array([r]), tol)[0])
    except NumericalError as exc:
        raise NumericalError(str(exc), estimate=float(exc.estimate[0])) from exc


def _quadrature_series(params: ModelParams, rs, tol):
    edges = [0.0, *split_points(params), np.pi]
    f = _kernel(params, rs)
    total = np.zeros(len(rs))
    err_total = 0.0
    # per-panel budget keeps the summed error under tol (integral is divided by pi)
    budget = tol * np.pi / (len(edges) - 1)
    for a, b in zip(edges[:-1], edges[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad_vec(f, a, b, epsabs=budget, epsrel=0.0,
                                              norm="max", limit=2000)
            except integrate.IntegrationWarning as exc:
                raise NumericalError(f"quadrature failed on [{a}, {b}]: {exc}") from exc
        total += val
        err_total += err
    estimate = -total / np.pi
    if err_total / np.pi > tol:
        raise NumericalError(
            f"quadrature error {err_total / np.pi:.3g} exceeds tol {tol:.3g}", estimate=estimate
        )
    return estimate


# ---------------------------------------------------------------------------
# XXT closed forms

def _cos_roots(alpha, lam):
    """Roots c = cos(phi) of 2 alpha c^2 + c - (lam + alpha) = 0 inside [-1, 1]."""
    if alpha == 0.0:
        # the cancellation-free form below is regular as alpha -> 0, so the
        # limit arccos(lambda) is only needed at alpha = 0 itself
        return [lam] if abs(lam) <= 1.0 else []
    disc = 1.0 + 8.0 * alpha * alpha + 8.0 * alpha * lam
    if disc < 0.0:
        return []
    s = np.sqrt(disc)
    c_plus = 2.0 * (lam + alpha) / (1.0 + s)  # = (-1 + s) / (4 alpha), cancellation-free
    roots = [c_plus]
    # |c_minus| = (1 + s) / (4 |alpha|) > 1 whenever |alpha| < 1/4
    if abs(alpha) >= 0.25:
        roots.append((-1.0 - s) / (4.0 * alpha))
    return [c for c in roots if -1.0 <= c <= 1.0]


def fermi_points(alpha: float, lam: float) -> FermiPoints:
    """Zeros of the XXT dispersion on [0, pi], ascending."""
    roots = sorted(float(np.arccos(c)) for c in _cos_roots(alpha, lam))
    return FermiPoints(tuple(roots))


def critical_lines_xxt(alpha: float) -> list[float]:
    """Field values of the XXT critical lines at this alpha."""
    lines = [alpha + 1.0, alpha - 1.0]
    if abs(alpha) >= 0.25:
        lines.append(-(1.0 + 8.0 * alpha * alpha) / (8.0 * alpha))
    return lines


def phase_region_xxt(alpha: float, lam: float) -> XXTPhase:
    for lc in critical_lines_xxt(alpha):
        # a point nominally CRITICAL_LINE_TOL off a line stays off it despite
        # the rounding of lam - lc
        slack = 8 * np.finfo(float).eps * max(1.0, abs(lam), abs(lc))
        if abs(lam - lc) < CRITICAL_LINE_TOL - slack:
            return XXTPhase.CRITICAL
    n = len(fermi_points(alpha, lam))
    if n == 1:
        return XXTPhase.SL1
    if n == 2:
        return XXTPhase.SL2
    # no Fermi point: z has one sign everywhere
    return XXTPhase.FERR_I if lam - 1.0 - alpha > 0 else XXTPhase.FERR_II


def g_analytic_xxt(alpha: float, lam: float, r: int) -> float:
    phase = phase_region_xxt(alpha, lam)
    if phase is XXTPhase.CRITICAL:
        raise AmbiguousPhaseError(f"(alpha={alpha}, lambda={lam}) lies on a critical line")
    r = abs(int(r))
    if phase is XXTPhase.FERR_I:
        return -1.0 if r == 0 else 0.0
    if phase is XXTPhase.FERR_II:
        return 1.0 if r == 0 else 0.0
    pts = fermi_points(alpha, lam).points
    if phase is XXTPhase.SL1:
        (p,) = pts
        return 2 * p / np.pi - 1.0 if r == 0 else 2 * np.sin(r * p) / (np.pi * r)
    p1, p2 = pts
    g = 2 * (p1 - p2) / np.pi + 1.0 if r == 0 else 2 * (np.sin(r * p1) - np.sin(r * p2)) / (np.pi * r)
    # z < 0 outside [p1, p2] for alpha > 0; alpha < 0 flips the sign pattern
    return g if lam - 1.0 - alpha < 0 else -g


def _analytic_series(params: ModelParams, r_max: int) -> np.ndarray:
    if not params.is_xxt:
        raise ConfigurationError("the analytic backend requires gamma = delta = 0")
    half = [g_analytic_xxt(params.alpha, params.lam, r) for r in range(r_max + 1)]
    return np.array(half[:0:-1] + half)


# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=256)
def _cached_series(params: ModelParams, r_max: int, method: Method, tol: float) -> GSeries:
    if method is Method.FINITE:
        values = _g_finite_series(params, r_max)
    elif method is Method.QUADRATURE:
        rs = np.arange(-r_max, r_max + 1)
        if params.is_xxt:
            # kernel is even in r; integrate half the table
            half = _quadrature_series(params, np.arange(r_max + 1), tol)
            values = np.concatenate([half[:0:-1], half])
        else:
            values = _quadrature_series(params, rs, tol)
    else:
        values = _analytic_series(params, r_max)
    return GSeries(r_max=r_max, values=values, method=method, params=params)


def g_series(params: ModelParams, r_max: int, method="quadrature", tol: float = DEFAULT_TOL) -> GSeries:
    """G_r for r in [-r_max, r_max] by the chosen backend (cached)."""
    method = Method(method)
    if r_max < 0:
        raise ConfigurationError("r_max must be non-negative")
    if method is not Method.FINITE:
        params = params.with_(chain_length=None)
    return _cached_series(params, int(r_max), method, float(tol))
