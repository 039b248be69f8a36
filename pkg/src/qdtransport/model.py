"""Domain types shared by all frameworks: reservoirs, dot models, grids, and
the Fermi-Dirac occupation.

Units: hbar = k_B = 1.  Rates, energies, temperatures and frequencies share
one energy unit; times are inverse energies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.special as sp

__all__ = [
    "ModelError",
    "Configuration",
    "Reservoir",
    "SingleDotModel",
    "DqdModel",
    "TimeGrid",
    "FrequencyGrid",
    "fermi",
]

LEADS = ("L", "R")


class ModelError(ValueError):
    """A model record violates one of its invariants."""


class Configuration(str, Enum):
    PARALLEL = "parallel"
    SERIES = "series"


@dataclass(frozen=True)
class Reservoir:
    """One lead: temperature, chemical potential and wide-band tunneling rate.

    Temperature must be strictly positive; exact zero temperature enters
    only through the dedicated closed-form (arctan) steady-state routes,
    which never read ``temperature``.
    """

    label: str
    temperature: float
    mu: float
    gamma: float

    def __post_init__(self):
        if self.label not in LEADS:
            raise ModelError(f"label must be one of {LEADS}, got {self.label!r}")
        if not (np.isfinite(self.temperature) and self.temperature > 0):
            raise ModelError("temperature must be finite and > 0")
        if not np.isfinite(self.mu):
            raise ModelError("mu must be finite")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ModelError("gamma must be finite and >= 0")


def fermi(res: Reservoir, epsilon):
    """Fermi-Dirac occupation of reservoir ``res`` at energy ``epsilon``."""
    x = (np.asarray(epsilon, dtype=float) - res.mu) / res.temperature
    out = sp.expit(-x)
    return float(out) if np.ndim(epsilon) == 0 else out


def _check_reservoir_pair(reservoirs):
    if len(reservoirs) != 2:
        raise ModelError("exactly two reservoirs are required")
    labels = {r.label for r in reservoirs}
    if labels != set(LEADS):
        raise ModelError(f"reservoir labels must be L and R, got {labels}")


class _TwoLeadMixin:
    @property
    def gamma_total(self):
        return sum(r.gamma for r in self.reservoirs)

    def reservoir(self, lead):
        for r in self.reservoirs:
            if r.label == lead:
                return r
        raise ModelError(f"unknown lead {lead!r}")

    def other(self, lead):
        return "R" if lead == "L" else "L"


@dataclass(frozen=True)
class SingleDotModel(_TwoLeadMixin):
    """Single resonant level coupled to two wide-band reservoirs."""

    epsilon_d: float
    n_d: float
    reservoirs: tuple
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "reservoirs", tuple(self.reservoirs))
        _check_reservoir_pair(self.reservoirs)
        if not (0.0 <= self.n_d <= 1.0):
            raise ModelError("n_d must lie in [0, 1]")
        if not np.isfinite(self.epsilon_d) or not np.isfinite(self.t0):
            raise ModelError("epsilon_d and t0 must be finite")
        if self.gamma_total <= 0.0:
            raise ModelError("total rate gamma_L + gamma_R must be > 0")


@dataclass(frozen=True)
class DqdModel(_TwoLeadMixin):
    """Two degenerate, tunnel-coupled dots attached to two reservoirs.

    In the series configuration dot 1 couples to L and dot 2 to R, and the
    overdamped regime g <= |gamma_asym| with gamma_asym = (G_L - G_R)/4 is
    required so the decay-splitting parameter stays real.
    """

    epsilon_d: float
    g: float
    n1: float
    n2: float
    configuration: Configuration
    reservoirs: tuple
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "reservoirs", tuple(self.reservoirs))
        object.__setattr__(self, "configuration",
                           Configuration(self.configuration))
        _check_reservoir_pair(self.reservoirs)
        for name, val in (("n1", self.n1), ("n2", self.n2)):
            if not (0.0 <= val <= 1.0):
                raise ModelError(f"{name} must lie in [0, 1]")
        if not (np.isfinite(self.g) and self.g >= 0.0):
            raise ModelError("g must be finite and >= 0")
        if not np.isfinite(self.epsilon_d) or not np.isfinite(self.t0):
            raise ModelError("epsilon_d and t0 must be finite")
        if self.gamma_total <= 0.0:
            raise ModelError("total rate gamma_L + gamma_R must be > 0")
        if self.configuration is Configuration.SERIES:
            if self.g > abs(self.gamma_asym):
                raise ModelError(
                    "series configuration requires g <= |gamma_L - gamma_R|/4 "
                    "(overdamped regime)")

    @property
    def gamma_asym(self):
        return (self.reservoir("L").gamma - self.reservoir("R").gamma) / 4.0

    @property
    def eta(self):
        return float(np.sqrt(max(self.gamma_asym ** 2 - self.g ** 2, 0.0)))

    def relabeled(self):
        """Model with L <-> R and dots 1 <-> 2 exchanged.

        Dot-2 observables are the dot-1 closed forms of this model.
        """
        swapped = tuple(
            Reservoir(label="R" if r.label == "L" else "L",
                      temperature=r.temperature, mu=r.mu, gamma=r.gamma)
            for r in self.reservoirs)
        return DqdModel(epsilon_d=self.epsilon_d, g=self.g,
                        n1=self.n2, n2=self.n1,
                        configuration=self.configuration,
                        reservoirs=swapped, t0=self.t0)


def _check_grid(points):
    pts = tuple(float(p) for p in points)
    if len(pts) == 0:
        raise ModelError("grid must contain at least one point")
    if not all(np.isfinite(p) for p in pts):
        raise ModelError("grid points must be finite")
    if any(b <= a for a, b in zip(pts[:-1], pts[1:])):
        raise ModelError("grid points must be strictly increasing")
    return pts


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing times, relative to the model's t0."""

    points: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "points", _check_grid(self.points))


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing angular frequencies."""

    points: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "points", _check_grid(self.points))
