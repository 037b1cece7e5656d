"""Hamiltonian couplings and single-particle mode data of the extended Ising chain.

The chain is

    H = -sum_j [ (1+g)/2 X_j X_{j+1} + (1-g)/2 Y_j Y_{j+1} + lam Z_j
                 + alpha Z_j ((1+d)/2 X_{j-1} X_{j+1} + (1-d)/2 Y_{j-1} Y_{j+1}) ]

with g = gamma and d = delta. After Jordan-Wigner and Fourier transforms each
momentum pair sees the pseudo-field (y, z) with

    z(phi) = lam - cos(phi) - alpha cos(2 phi)
    y(phi) = gamma sin(phi) + alpha delta sin(2 phi)

and quasiparticle energy sqrt(z^2 + y^2).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, CriticalParametersError

__all__ = [
    "ModelParams",
    "ModeData",
    "dispersion",
    "dispersion_derivative",
    "mode_grid",
    "mode_momenta",
    "bogoliubov_angle",
    "gap_tolerance",
]


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the extended Ising / XXT chain.

    ``lam`` is the transverse field (``lambda`` is a Python keyword).
    ``chain_length`` is only needed by finite-chain computations and must be odd.
    """

    gamma: float = 0.0
    lam: float = 0.0
    alpha: float = 0.0
    delta: float = 0.0
    chain_length: int | None = None

    def __post_init__(self):
        for name in ("gamma", "lam", "alpha", "delta"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ConfigurationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        L = self.chain_length
        if L is not None:
            if int(L) != L or L < 3 or L % 2 == 0:
                raise ConfigurationError(f"chain_length must be an odd integer >= 3, got {L!r}")
            object.__setattr__(self, "chain_length", int(L))

    @classmethod
    def xxt(cls, alpha, lam, chain_length=None):
        return cls(gamma=0.0, lam=lam, alpha=alpha, delta=0.0, chain_length=chain_length)

    @property
    def is_xxt(self):
        return self.gamma == 0.0 and self.delta == 0.0

    def with_(self, **changes):
        """Copy with some fields replaced; accepts ``lambda_`` as an alias of ``lam``."""
        if "lambda_" in changes:
            changes["lam"] = changes.pop("lambda_")
        return replace(self, **changes)

    def as_dict(self):
        return {
            "gamma": self.gamma,
            "lambda": self.lam,
            "alpha": self.alpha,
            "delta": self.delta,
            "chain_length": self.chain_length,
        }


@dataclass(frozen=True)
class ModeData:
    phi: float
    z: float
    y: float
    energy: float
    theta: float


def gap_tolerance(params: ModelParams) -> float:
    """Energy below which a mode is treated as gapless."""
    return 1e-12 * max(1.0, abs(params.lam) + abs(params.alpha) + abs(params.gamma))


def dispersion(params: ModelParams, phi):
    """Return ``(z, y, energy)`` at momentum ``phi`` (scalar or array)."""
    phi = np.asarray(phi, dtype=float)
    z = params.lam - np.cos(phi) - params.alpha * np.cos(2 * phi)
    y = params.gamma * np.sin(phi) + params.alpha * params.delta * np.sin(2 * phi)
    energy = np.hypot(z, y)
    if phi.ndim == 0:
        return float(z), float(y), float(energy)
    return z, y, energy


def dispersion_derivative(params: ModelParams, phi):
    """Analytic ``(dz/dphi, dy/dphi)``."""
    phi = np.asarray(phi, dtype=float)
    dz = np.sin(phi) + 2 * params.alpha * np.sin(2 * phi)
    dy = params.gamma * np.cos(phi) + 2 * params.alpha * params.delta * np.cos(2 * phi)
    return dz, dy


def bogoliubov_angle(z, y):
    """Quadrant-aware angle with cos(theta) = z/E and sin(theta) = -y/E."""
    if z == 0.0 and y == 0.0:
        raise CriticalParametersError("Bogoliubov angle undefined: the mode energy vanishes")
    # "+ 0.0" turns -0.0 into 0.0, keeping the result in (-pi, pi]
    return float(np.arctan2(-y + 0.0, z))


def mode_momenta(chain_length: int) -> np.ndarray:
    """phi_k = 2 pi k / L for k = -M..M, M = (L-1)/2."""
    if chain_length is None or chain_length < 3 or chain_length % 2 == 0:
        raise ConfigurationError(f"mode grid needs an odd chain_length >= 3, got {chain_length!r}")
    M = (chain_length - 1) // 2
    return 2 * np.pi * np.arange(-M, M + 1) / chain_length


def mode_grid(params: ModelParams) -> list[ModeData]:
    phis = mode_momenta(params.chain_length)
    z, y, energy = dispersion(params, phis)
    tol = gap_tolerance(params)
    modes = []
    for p, zk, yk, ek in zip(phis, z, y, energy):
        # critical modes keep theta = nan rather than aborting the whole grid
        theta = bogoliubov_angle(zk, yk) if ek > tol else float("nan")
        modes.append(ModeData(float(p), float(zk), float(yk), float(ek), theta))
    return modes
