"""Two-site reduced density matrix assembled from a G_r table.

    <Z>      = G_0
    <X_0X_r> = det[G_{i-j-1}]_{i,j<r}
    <Y_0Y_r> = det[G_{i-j+1}]_{i,j<r}
    <Z_0Z_r> = G_0^2 - G_r G_{-r}

and the X-shaped state

    [[u+, 0,  0,  y-],
     [0,  z,  y+, 0 ],
     [0,  y+, z,  0 ],
     [y-, 0,  0,  u-]]

with u+- = (1 +- 2<Z> + <ZZ>)/4, z = (1 - <ZZ>)/4, y+- = (<XX> +- <YY>)/4.

Note the magnetization sign follows the fermionic convention: deep in the
field-polarized phase G_0 = -1. Every resource measure is symmetric under
u+ <-> u-, so nothing downstream depends on it.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .corr import DEFAULT_TOL, GSeries, Method, g_series
from .errors import ConfigurationError, ConsistencyError
from .model import ModelParams

__all__ = [
    "Correlators",
    "TwoSiteState",
    "correlators",
    "correlator_table",
    "state_from_correlators",
    "reduced_state",
    "reduced_states",
    "POSITIVITY_TOL",
]

POSITIVITY_TOL = 1e-8


@dataclass(frozen=True)
class Correlators:
    mag_z: float
    xx: float
    yy: float
    zz: float
    distance: int


@dataclass(frozen=True)
class TwoSiteState:
    u_plus: float
    u_minus: float
    z_diag: float
    y_plus: float
    y_minus: float
    distance: int = 1

    def matrix(self) -> np.ndarray:
        up, um, z, yp, ym = self.u_plus, self.u_minus, self.z_diag, self.y_plus, self.y_minus
        return np.array([
            [up, 0.0, 0.0, ym],
            [0.0, z, yp, 0.0],
            [0.0, yp, z, 0.0],
            [ym, 0.0, 0.0, um],
        ])

    @classmethod
    def from_matrix(cls, rho, distance=1, atol=1e-9):
        """Read the five X-state elements off a 4x4 matrix.

        Raises ``ConsistencyError`` if ``rho`` is not (numerically) X-shaped
        with equal middle diagonal entries and real symmetric coherences.
        """
        rho = np.asarray(rho)
        mask = np.array([
            [1, 0, 0, 1],
            [0, 1, 1, 0],
            [0, 1, 1, 0],
            [1, 0, 0, 1],
        ], dtype=bool)
        off = np.abs(rho[~mask]).max()
        if off > atol:
            raise ConsistencyError(f"matrix is not X-shaped (stray element {off:.2e})")
        if np.iscomplexobj(rho) and np.abs(rho.imag).max() > atol:
            raise ConsistencyError("X-state elements must be real")
        rho = rho.real
        if abs(rho[1, 1] - rho[2, 2]) > atol or abs(rho[1, 2] - rho[2, 1]) > atol or abs(rho[0, 3] - rho[3, 0]) > atol:
            raise ConsistencyError("matrix lacks the site-exchange symmetry of the two-site state")
        return cls(
            u_plus=float(rho[0, 0]),
            u_minus=float(rho[3, 3]),
            z_diag=float(0.5 * (rho[1, 1] + rho[2, 2])),
            y_plus=float(0.5 * (rho[1, 2] + rho[2, 1])),
            y_minus=float(0.5 * (rho[0, 3] + rho[3, 0])),
            distance=distance,
        )

    # correlators recovered from the elements
    @property
    def mag_z(self):
        return self.u_plus - self.u_minus

    @property
    def xx(self):
        return 2.0 * (self.y_plus + self.y_minus)

    @property
    def yy(self):
        return 2.0 * (self.y_plus - self.y_minus)

    @property
    def zz(self):
        return self.u_plus + self.u_minus - 2.0 * self.z_diag

    def flipped(self) -> "TwoSiteState":
        """Global spin flip: exchange u+ and u-."""
        return TwoSiteState(self.u_minus, self.u_plus, self.z_diag, self.y_plus, self.y_minus, self.distance)

    def check(self, tol=POSITIVITY_TOL):
        """Raise ``ConsistencyError`` unless trace and positivity hold to ``tol``."""
        trace = self.u_plus + self.u_minus + 2 * self.z_diag
        if abs(trace - 1.0) > tol:
            raise ConsistencyError(f"trace {trace!r} != 1")
        problems = []
        for name in ("u_plus", "u_minus", "z_diag"):
            if getattr(self, name) < -tol:
                problems.append(f"{name}={getattr(self, name):.3e}")
        if self.y_minus ** 2 > self.u_plus * self.u_minus + tol:
            problems.append("y_minus^2 > u_plus*u_minus")
        if self.y_plus ** 2 > self.z_diag ** 2 + tol:
            problems.append("y_plus^2 > z_diag^2")
        if problems:
            raise ConsistencyError(f"state at r={self.distance} is not positive: " + ", ".join(problems))
        return self


def _toeplitz_det(g: GSeries, r: int, shift: int) -> float:
    # entry (i, j) = G_{i - j + shift}
    table, R = g.table(), g.r_max
    col = table[R + shift + np.arange(r)]          # i - j = 0..r-1 in column 0
    row = table[R + shift - np.arange(r)]          # i - j = 0..-(r-1) in row 0
    mat = scipy.linalg.toeplitz(col, row)
    with warnings.catch_warnings():
        # an exactly singular matrix (e.g. ferromagnetic phase) has det 0, which is the answer
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(mat, check_finite=False)
    sign = (-1.0) ** np.count_nonzero(piv != np.arange(r))
    return float(sign * np.prod(np.diag(lu)))


def correlators(g: GSeries, r: int) -> Correlators:
    if r < 1:
        raise ConfigurationError("distance r must be >= 1")
    if g.r_max < r:
        raise ConfigurationError(f"G table covers |r| <= {g.r_max}, need {r}")
    g0 = g[0]
    return Correlators(
        mag_z=g0,
        xx=_toeplitz_det(g, r, -1),
        yy=_toeplitz_det(g, r, +1),
        zz=g0 * g0 - g[r] * g[-r],
        distance=r,
    )


def correlator_table(g: GSeries, r_max: int | None = None) -> list[Correlators]:
    r_max = g.r_max if r_max is None else r_max
    return [correlators(g, r) for r in range(1, r_max + 1)]


def state_from_correlators(c: Correlators, check=True) -> TwoSiteState:
    state = TwoSiteState(
        u_plus=(1 + 2 * c.mag_z + c.zz) / 4,
        u_minus=(1 - 2 * c.mag_z + c.zz) / 4,
        z_diag=(1 - c.zz) / 4,
        y_plus=(c.xx + c.yy) / 4,
        y_minus=(c.xx - c.yy) / 4,
        distance=c.distance,
    )
    return state.check() if check else state


def reduced_state(params: ModelParams, r: int, method="quadrature", tol: float = DEFAULT_TOL) -> TwoSiteState:
    g = g_series(params, r, method, tol)
    return state_from_correlators(correlators(g, r))


def reduced_states(params: ModelParams, r_max: int, method="quadrature", tol: float = DEFAULT_TOL) -> list[TwoSiteState]:
    """States for r = 1..r_max sharing one G table."""
    if Method(method) is Method.FINITE and params.chain_length is not None and r_max >= params.chain_length:
        raise ConfigurationError("r_max must be < chain_length")
    g = g_series(params, r_max, method, tol)
    return [state_from_correlators(c) for c in correlator_table(g, r_max)]
