"""Quantum-resource measures of the X-shaped two-site state.

All entropies are in bits.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .corr import XXTPhase, fermi_points, phase_region_xxt
from .errors import AmbiguousPhaseError, NormalizationError, PhaseError
from .rdm import TwoSiteState

__all__ = [
    "Family",
    "Strategy",
    "Grid",
    "Measurement",
    "DiscordResult",
    "coherence_l1",
    "concurrence",
    "entropy",
    "binary_entropy",
    "conditional_entropy",
    "conditional_entropy_angles",
    "sigma_z_condition",
    "sigma_x_condition",
    "discord",
    "concurrence_range_factor",
]


def coherence_l1(state: TwoSiteState) -> float:
    return 2.0 * (abs(state.y_plus) + abs(state.y_minus))


def concurrence(state: TwoSiteState) -> float:
    # both X-state branches; the second vanishes when y_minus = 0
    a = abs(state.y_plus) - np.sqrt(max(state.u_plus * state.u_minus, 0.0))
    b = abs(state.y_minus) - state.z_diag
    return float(max(0.0, 2 * a, 2 * b))


def _xlog2x(p):
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def entropy(eigs) -> float:
    """Shannon/von Neumann entropy -sum p log2 p of a spectrum."""
    p = np.asarray(eigs, dtype=float)
    if p.size == 0 or p.min() < -1e-12 or p.max() > 1 + 1e-12:
        raise NormalizationError(f"eigenvalues out of [0, 1]: {p}")
    if abs(p.sum() - 1.0) > 1e-9:
        raise NormalizationError(f"eigenvalues sum to {p.sum()!r}, not 1")
    return float(-_xlog2x(p).sum())


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    return -_xlog2x(p) - _xlog2x(1.0 - p)


class Family(str, enum.Enum):
    """Closed-form measurement families on site A.

    I: sigma_y basis (theta = pi/2, phi = pi/2), II: sigma_x basis
    (theta = pi/2, phi = 0), III: sigma_z basis (theta = 0).
    """

    I = "I"
    II = "II"
    III = "III"

    @property
    def angles(self):
        return {"I": (np.pi / 2, np.pi / 2), "II": (np.pi / 2, 0.0), "III": (0.0, 0.0)}[self.value]


def conditional_entropy(state: TwoSiteState, family) -> float:
    family = Family(family)
    m = state.mag_z
    if family is Family.I or family is Family.II:
        t = state.yy if family is Family.I else state.xx
        radius = min(np.sqrt(t * t + m * m), 1.0)
        return float(binary_entropy((1.0 + radius) / 2.0))
    zz = state.zz
    total = 0.0
    for sign in (1.0, -1.0):
        p = (1.0 + sign * m) / 2.0
        if p <= 1e-15:
            continue
        xi = (1.0 - zz) / (2.0 * (1.0 + sign * m))
        eta = (1.0 + 2.0 * sign * m + zz) / (2.0 * (1.0 + sign * m))
        total += p * float(-_xlog2x(xi) - _xlog2x(eta))
    return total


def _measurement_vectors(theta, phi):
    """Columns of V(theta, phi): the two projective measurement directions."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    v0 = np.stack([c + 0j * e, e * s], axis=-1)
    v1 = np.stack([np.conj(e) * s, -c + 0j * e], axis=-1)
    return v0, v1


def conditional_entropy_angles(state: TwoSiteState, theta, phi):
    """sum_k p_k S(rho_B|k) for the measurement {V|k><k|V^dag} on site A.

    Works directly on the 4x4 matrix, so it is independent of the family
    closed forms; ``theta`` and ``phi`` broadcast.
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    rho = state.matrix().reshape(2, 2, 2, 2)  # [a, b, a', b']
    total = np.zeros(theta.shape)
    for v in _measurement_vectors(theta, phi):
        # Tr_A[(|v><v| x 1) rho]_{bb'} = sum_{a a'} conj(v_a) rho[a b a' b'] v_a'
        block = np.einsum("...a,abcd,...c->...bd", np.conj(v), rho, v)
        p = np.real(block[..., 0, 0] + block[..., 1, 1])
        det = np.real(block[..., 0, 0] * block[..., 1, 1] - block[..., 0, 1] * block[..., 1, 0])
        gap = np.sqrt(np.clip(p * p - 4.0 * det, 0.0, None))
        mu1, mu2 = (p + gap) / 2.0, (p - gap) / 2.0
        # p S(mu/p) = -sum mu log mu + p log p
        total += -_xlog2x(mu1) - _xlog2x(mu2) + _xlog2x(p)
    return total


def sigma_z_condition(state: TwoSiteState) -> bool:
    """sigma_z is optimal on A when (|y+|+|y-|)^2 <= (u+ - z)(u- - z).

    Reduces to (y+)^2 <= (u+ - z)(u- - z) for y- = 0. Only applicable when
    y+ and y- do not have opposite signs.
    """
    if not _conditions_applicable(state):
        return False
    y = abs(state.y_plus) + abs(state.y_minus)
    return y * y <= (state.u_plus - state.z_diag) * (state.u_minus - state.z_diag)


def sigma_x_condition(state: TwoSiteState) -> bool:
    """sigma_x is optimal on A when |sqrt(u+ u-) - z| <= |y+| + |y-|."""
    if not _conditions_applicable(state):
        return False
    y = abs(state.y_plus) + abs(state.y_minus)
    return abs(np.sqrt(max(state.u_plus * state.u_minus, 0.0)) - abs(state.z_diag)) <= y


def _conditions_applicable(state):
    return abs(state.y_plus + state.y_minus) >= abs(state.y_plus - state.y_minus)


class Strategy(str, enum.Enum):
    XXT_CONDITIONS = "xxt"
    THREE_FAMILY = "three-family"


@dataclass(frozen=True)
class Grid:
    n_theta: int = 181
    n_phi: int = 91
    refine: bool = True


@dataclass(frozen=True)
class Measurement:
    """Either one of the closed-form families or explicit grid angles."""

    family: Family | None = None
    theta: float | None = None
    phi: float | None = None

    @property
    def label(self):
        if self.family is not None:
            return self.family.value
        return f"grid({self.theta:.6f},{self.phi:.6f})"


@dataclass(frozen=True)
class DiscordResult:
    value: float
    optimal_measurement: Measurement
    conditional_entropy: float


def _joint_entropy(state: TwoSiteState) -> float:
    up, um, z, yp, ym = state.u_plus, state.u_minus, state.z_diag, state.y_plus, state.y_minus
    half = np.sqrt((up - um) ** 2 / 4.0 + ym * ym)
    spectrum = [z + yp, z - yp, (up + um) / 2 + half, (up + um) / 2 - half]
    return float(-_xlog2x(spectrum).sum())


def _marginal_entropy(state: TwoSiteState) -> float:
    return float(binary_entropy(state.u_plus + state.z_diag))


def _grid_search(state: TwoSiteState, grid: Grid):
    thetas = np.linspace(0.0, np.pi, grid.n_theta)
    # projective measurements are invariant under n -> -n, so phi in [0, pi] suffices
    phis = np.linspace(0.0, np.pi, grid.n_phi)
    values = conditional_entropy_angles(state, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(np.argmin(values), values.shape)
    best = (float(values[i, j]), float(thetas[i]), float(phis[j]))
    if not grid.refine:
        return best
    dt = np.pi / max(grid.n_theta - 1, 1)
    dp = np.pi / max(grid.n_phi - 1, 1)
    s, t, p = best
    for _ in range(2):
        res = optimize.minimize_scalar(
            lambda x: float(conditional_entropy_angles(state, x, p)),
            bounds=(max(t - dt, 0.0), min(t + dt, np.pi)), method="bounded",
            options={"xatol": 1e-9})
        if res.fun < s:
            s, t = float(res.fun), float(res.x)
        res = optimize.minimize_scalar(
            lambda x: float(conditional_entropy_angles(state, t, x)),
            bounds=(p - dp, p + dp), method="bounded", options={"xatol": 1e-9})
        if res.fun < s:
            s, p = float(res.fun), float(res.x)
    return s, t, p


def discord(state: TwoSiteState, strategy=Strategy.XXT_CONDITIONS) -> DiscordResult:
    """Discord D_A = S(A) - S(AB) + min_measurements sum_k p_k S(B|k).

    ``strategy`` is ``"xxt"`` (closed-form optimality conditions, falling back
    to a grid search when neither holds), ``"three-family"`` (minimum over
    the sigma_y/sigma_x/sigma_z bases) or a :class:`Grid`.
    """
    if isinstance(strategy, str):
        strategy = Grid() if strategy == "grid" else Strategy(strategy)

    if isinstance(strategy, Grid):
        s, theta, phi = _grid_search(state, strategy)
        measurement = Measurement(theta=theta, phi=phi)
    elif strategy is Strategy.THREE_FAMILY:
        s, fam = min((conditional_entropy(state, f), f) for f in Family)
        measurement = Measurement(family=fam)
    else:
        candidates = []
        if sigma_z_condition(state):
            candidates.append(Family.III)
        if sigma_x_condition(state):
            candidates.append(Family.II)
        if candidates:
            s, fam = min((conditional_entropy(state, f), f) for f in candidates)
            measurement = Measurement(family=fam)
        else:
            s, theta, phi = _grid_search(state, Grid())
            measurement = Measurement(theta=theta, phi=phi)

    value = _marginal_entropy(state) - _joint_entropy(state) + s
    # round-off can push an exactly classical state a hair below zero
    value = max(value, 0.0) if value > -1e-9 else value
    return DiscordResult(value=float(value), optimal_measurement=measurement, conditional_entropy=float(s))


def concurrence_range_factor(alpha: float, lam: float) -> float:
    """Distance-independent product controlling long-range concurrence.

    phi+^2 (pi - phi+)^2 in SL-I, (pi + phi+ - phi-)^2 (phi+ - phi-)^2 in SL-II;
    it vanishes on the critical lines bounding the spin-liquid phases.
    """
    phase = phase_region_xxt(alpha, lam)
    if phase is XXTPhase.CRITICAL:
        raise AmbiguousPhaseError(f"(alpha={alpha}, lambda={lam}) is critical")
    pts = fermi_points(alpha, lam).points
    if phase is XXTPhase.SL1:
        (p,) = pts
        return float(p * p * (np.pi - p) ** 2)
    if phase is XXTPhase.SL2:
        p_plus, p_minus = pts
        return float((np.pi + p_plus - p_minus) ** 2 * (p_plus - p_minus) ** 2)
    raise PhaseError(f"no Fermi points at (alpha={alpha}, lambda={lam}): ferromagnetic phase")
