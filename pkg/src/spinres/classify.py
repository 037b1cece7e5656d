"""Decay-mode classification of resource-versus-distance profiles and phase diagnosis."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .corr import DEFAULT_TOL, XXTPhase, fermi_points, phase_region_xxt
from .errors import ConfigurationError, CriticalParametersError, InsufficientDataError
from .model import ModelParams
from .rdm import reduced_states
from .resources import coherence_l1, concurrence, discord
from .topology import gap_minimum, winding_number, CRITICAL_GAP_TOL

__all__ = [
    "Measure",
    "Mode",
    "PhaseLabel",
    "Thresholds",
    "ResourceProfile",
    "DecayClass",
    "XXTDiagnosis",
    "TopologicalDiagnosis",
    "resource_profile",
    "classify_decay",
    "diagnose_xxt",
    "diagnose_topological",
    "DEFAULT_R_MAX",
    "TOPOLOGICAL_THRESHOLDS",
]

DEFAULT_R_MAX = 30


class Measure(str, enum.Enum):
    COHERENCE = "coherence"
    CONCURRENCE = "concurrence"
    DISCORD = "discord"


class Mode(str, enum.Enum):
    ZERO = "Zero"
    ASYMPTOTIC = "Asymptotic"
    OSCILLATING = "Oscillating"
    FROZEN = "Frozen"
    UNDETERMINED = "Undetermined"


class PhaseLabel(str, enum.Enum):
    FERROMAGNETIC = "Ferromagnetic"
    SL1 = "SL-I"
    SL2 = "SL-II"
    WINDING_M2 = "N=-2"
    WINDING_M1 = "N=-1"
    WINDING_0 = "N=0"
    WINDING_P1 = "N=1"
    WINDING_P2 = "N=2"
    CRITICAL = "Critical"
    UNDETERMINED = "Undetermined"

    @classmethod
    def winding(cls, n: int) -> "PhaseLabel":
        return cls(f"N={n}")


@dataclass(frozen=True)
class Thresholds:
    """Knobs of :func:`classify_decay`.

    ``decay_ratio`` bounds tail mean / value at burn-in for an asymptotic
    profile. Power-law decay ~ r^(-1/2) over r <= 30 only reaches ~0.45, so
    the default is 0.5.
    """

    zero_floor: float = 1e-4
    freeze_rel: float = 1e-2
    min_extrema: int = 4
    burn_in: int = 3
    decay_ratio: float = 0.5
    min_entries: int = 10


@dataclass(frozen=True)
class ResourceProfile:
    rs: np.ndarray
    values: np.ndarray
    measure: Measure = Measure.COHERENCE

    def __post_init__(self):
        rs = np.asarray(self.rs, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if rs.shape != values.shape or rs.ndim != 1:
            raise ConfigurationError("rs and values must be 1-D and equally long")
        if rs.size > 1 and np.any(np.diff(rs) <= 0):
            raise ConfigurationError("distances must be strictly increasing")
        if values.size and values.min() < -1e-12:
            raise ConfigurationError("resource values must be non-negative")
        object.__setattr__(self, "rs", rs)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "measure", Measure(self.measure))

    def __len__(self):
        return len(self.rs)

    def scaled(self, factor: float) -> "ResourceProfile":
        return ResourceProfile(self.rs, self.values * factor, self.measure)


@dataclass(frozen=True)
class DecayClass:
    mode: Mode
    frozen_value: float | None
    extremum_count: int
    tail_spread: float


def classify_decay(profile: ResourceProfile, cfg: Thresholds = Thresholds()) -> DecayClass:
    """Zero, Frozen, Oscillating, Asymptotic or Undetermined, tested in that order."""
    v = profile.values
    if len(v) < cfg.min_entries or len(v) <= cfg.burn_in + 2:
        raise InsufficientDataError(f"need at least {cfg.min_entries} entries, got {len(v)}")

    tail = v[len(v) // 2:]
    tail_mean = float(tail.mean())
    spread = float((tail.max() - tail.min()) / tail_mean) if tail_mean > 0 else float("inf")

    after = v[cfg.burn_in:]
    diffs = np.diff(after)
    signs = np.sign(diffs[np.abs(diffs) >= cfg.zero_floor])
    extrema = int(np.count_nonzero(signs[1:] != signs[:-1]))

    def result(mode, frozen=None):
        return DecayClass(mode=mode, frozen_value=frozen, extremum_count=extrema, tail_spread=spread)

    if v.max() <= cfg.zero_floor:
        return result(Mode.ZERO)
    if tail_mean > cfg.zero_floor and spread <= cfg.freeze_rel:
        return result(Mode.FROZEN, tail_mean)
    if extrema >= cfg.min_extrema:
        return result(Mode.OSCILLATING)
    if np.all(diffs <= cfg.zero_floor) and tail_mean < cfg.decay_ratio * after[0]:
        return result(Mode.ASYMPTOTIC)
    return result(Mode.UNDETERMINED)


_MEASURES = {
    Measure.COHERENCE: coherence_l1,
    Measure.CONCURRENCE: concurrence,
    Measure.DISCORD: lambda s: discord(s).value,
}


def resource_profile(params: ModelParams, measure=Measure.COHERENCE, r_max: int = DEFAULT_R_MAX,
                     method="quadrature", tol: float = DEFAULT_TOL) -> ResourceProfile:
    measure = Measure(measure)
    states = reduced_states(params, r_max, method, tol)
    values = [_MEASURES[measure](s) for s in states]
    return ResourceProfile(np.arange(1, r_max + 1), np.array(values), measure)


@dataclass(frozen=True)
class XXTDiagnosis:
    label: PhaseLabel
    decay: DecayClass
    expected: XXTPhase
    fermi_points: tuple[float, ...]
    profile: ResourceProfile
    failed: bool = False

    @property
    def agrees(self):
        return _XXT_LABELS.get(self.expected) == self.label


_XXT_LABELS = {
    XXTPhase.FERR_I: PhaseLabel.FERROMAGNETIC,
    XXTPhase.FERR_II: PhaseLabel.FERROMAGNETIC,
    XXTPhase.SL1: PhaseLabel.SL1,
    XXTPhase.SL2: PhaseLabel.SL2,
    XXTPhase.CRITICAL: PhaseLabel.CRITICAL,
}

_MODE_TO_XXT = {
    Mode.ZERO: PhaseLabel.FERROMAGNETIC,
    Mode.ASYMPTOTIC: PhaseLabel.SL1,
    Mode.OSCILLATING: PhaseLabel.SL2,
}


def diagnose_xxt(alpha: float, lam: float, r_max: int = DEFAULT_R_MAX, measure=Measure.COHERENCE,
                 cfg: Thresholds = Thresholds(), tol: float = DEFAULT_TOL) -> XXTDiagnosis:
    """Phase of the XXT chain read off the decay mode of a resource profile.

    An Undetermined (or Frozen) profile is reported with ``failed=True`` and
    label ``UNDETERMINED`` rather than coerced into a phase.
    """
    params = ModelParams.xxt(alpha, lam)
    profile = resource_profile(params, measure, r_max, "quadrature", tol)
    decay = classify_decay(profile, cfg)
    label = _MODE_TO_XXT.get(decay.mode, PhaseLabel.UNDETERMINED)
    return XXTDiagnosis(
        label=label,
        decay=decay,
        expected=phase_region_xxt(alpha, lam),
        fermi_points=fermi_points(alpha, lam).points,
        profile=profile,
        failed=label is PhaseLabel.UNDETERMINED,
    )


# Off the XXT line the three-spin term leaves a short-distance transient
# (upticks at r = 3, 5, 8 in the |N| = 2 sectors) that outlasts burn_in = 3.
TOPOLOGICAL_THRESHOLDS = Thresholds(burn_in=8)

# decay modes compatible with each winding sector
_EXPECTED_MODES = {
    2: {Mode.OSCILLATING, Mode.ASYMPTOTIC},
    -2: {Mode.OSCILLATING, Mode.ASYMPTOTIC},
    1: {Mode.FROZEN},
    -1: {Mode.FROZEN},
    0: {Mode.OSCILLATING, Mode.ASYMPTOTIC, Mode.ZERO},
}


@dataclass(frozen=True)
class TopologicalDiagnosis:
    label: PhaseLabel
    winding: int
    decay: DecayClass
    consistent: bool
    profile: ResourceProfile = field(repr=False)


def diagnose_topological(params: ModelParams, r_max: int = DEFAULT_R_MAX, measure=Measure.COHERENCE,
                         cfg: Thresholds = TOPOLOGICAL_THRESHOLDS, tol: float = DEFAULT_TOL) -> TopologicalDiagnosis:
    """Winding sector paired with the decay class of the resource profile.

    ``consistent`` records whether the decay mode is one expected for the
    sector: frozen for |N| = 1, a damped mode for |N| = 2 and N = 0.
    """
    if gap_minimum(params)[1] < CRITICAL_GAP_TOL:
        raise CriticalParametersError(f"gap closes at {params}; no winding sector")
    w = winding_number(params)
    profile = resource_profile(params, measure, r_max, "quadrature", tol)
    decay = classify_decay(profile, cfg)
    return TopologicalDiagnosis(
        label=PhaseLabel.winding(w.n),
        winding=w.n,
        decay=decay,
        consistent=decay.mode in _EXPECTED_MODES[w.n] if w.n in _EXPECTED_MODES else False,
        profile=profile,
    )
