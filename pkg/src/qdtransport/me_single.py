"""Closed-form Lindblad results for the single dot: populations, currents,
activity, two-time noise, stationary noise, and the cross-correlation jump.

All Fermi factors here are single-point evaluations at the dot energy (the
weak-coupling assumption); no quadrature is involved.  Delta-function terms
of the noise are returned as explicit weights, never mollified.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .model import fermi

__all__ = [
    "DeltaPlusRegular",
    "rate_matrix",
    "me_population",
    "me_current_particle",
    "me_current_energy",
    "me_activity",
    "me_activity_from_rates",
    "me_noise_two_time",
    "me_noise_stationary",
    "me_noise_stationary_jump",
    "me_noise_zero_frequency",
]


class DeltaPlusRegular(NamedTuple):
    """A distribution-valued result: ``delta_weight * delta(...)`` plus a
    regular part."""

    delta_weight: float
    regular: float


def _f(model, lead):
    return fermi(model.reservoir(lead), model.epsilon_d)


def _gammas(model):
    return {lead: model.reservoir(lead).gamma for lead in ("L", "R")}


def rate_matrix(model, lead=None):
    """Transition-rate matrix between the empty/occupied states.

    With ``lead`` given, only that lead's in/out rates enter; columns of the
    full matrix sum to zero (probability conservation).
    """
    w = np.zeros((2, 2))
    for label, ga in _gammas(model).items():
        if lead is not None and label != lead:
            continue
        f = _f(model, label)
        gin, gout = ga * f, ga * (1.0 - f)
        w[1, 0] += gin    # 0 -> 1
        w[0, 0] -= gin
        w[0, 1] += gout   # 1 -> 0
        w[1, 1] -= gout
    return w


def me_population(model, t):
    """(p0, p1) at time t: exponential relaxation at the total rate."""
    dt = t - model.t0
    if dt < 0.0:
        raise ValueError("t must be >= t0")
    gam = model.gamma_total
    p1 = 0.0
    for lead, ga in _gammas(model).items():
        f = _f(model, lead)
        p1 += ga / gam * (f + (model.n_d - f) * np.exp(-gam * dt))
    return 1.0 - p1, float(p1)


def me_current_particle(model, lead, t):
    """Weak-coupling particle current into ``lead``."""
    dt = t - model.t0
    if dt < 0.0:
        raise ValueError("t must be >= t0")
    gam = model.gamma_total
    ga = model.reservoir(lead).gamma
    fa = _f(model, lead)
    val = 0.0
    for beta, gb in _gammas(model).items():
        fb = _f(model, beta)
        val += ga * gb / gam * ((fa - fb) + (fb - model.n_d) * np.exp(-gam * dt))
    return float(val)


def me_current_energy(model, lead, t):
    """Energy current; identically epsilon_d times the particle current."""
    return model.epsilon_d * me_current_particle(model, lead, t)


def me_activity(model, lead, t):
    """Mean jump rate between the dot and ``lead`` (dynamical activity)."""
    dt = t - model.t0
    if dt < 0.0:
        raise ValueError("t must be >= t0")
    gam = model.gamma_total
    ga = model.reservoir(lead).gamma
    fa = _f(model, lead)
    val = 0.0
    for beta, gb in _gammas(model).items():
        fb = _f(model, beta)
        val += ga * gb / gam * (
            np.exp(-gam * dt) * (fb - model.n_d) * (2.0 * fa - 1.0)
            + fb * (1.0 - fa) + fa * (1.0 - fb))
    return float(val)


def me_activity_from_rates(model, lead, t):
    """Same activity from the rate matrix: sum_{i != j} (W_lead)_{ij} p_j."""
    w = rate_matrix(model, lead)
    p = np.array(me_population(model, t))
    return float(w[1, 0] * p[0] + w[0, 1] * p[1])


def _sme_regular_ordered(model, alpha, alphap, t, tp):
    """Regular part of S for t >= tp (the later current sits at lead alpha)."""
    gam = model.gamma_total
    gammas = _gammas(model)
    f = {lead: _f(model, lead) for lead in gammas}
    ga, gap = gammas[alpha], gammas[alphap]
    fa, fap = f[alpha], f[alphap]
    d_late = t - model.t0
    d_early = tp - model.t0
    decay = np.exp(-gam * (d_late - d_early))
    val = 0.0
    for beta, gb in gammas.items():
        fb = f[beta]
        for betap, gbp in gammas.items():
            fbp = f[betap]
            coup = ga * gap * gb * gbp / gam ** 2
            transient = np.exp(-gam * d_early) * (fb - model.n_d) * (
                (fa - fbp) + (fap - fbp) + (fap - fa)
                + np.exp(-gam * d_early) * (fbp - model.n_d))
            steady = (1.0 - fb) * fap + fb * (fbp - fap)
            val -= coup * decay * (transient + steady)
    return float(val)


def me_noise_two_time(model, alpha, alphap, t, tp):
    """Two-time current correlation S_{a a'}(t, t') in the weak-coupling
    description.

    Returns the regular part plus the white-noise delta weight (the activity
    at the later time), the latter nonzero only for the auto-correlation.
    The t < t' branch follows from exchanging leads and times.
    """
    if t - model.t0 < 0.0 or tp - model.t0 < 0.0:
        raise ValueError("t and tp must be >= t0")
    if t >= tp:
        regular = _sme_regular_ordered(model, alpha, alphap, t, tp)
    else:
        regular = _sme_regular_ordered(model, alphap, alpha, tp, t)
    weight = me_activity(model, alpha, max(t, tp)) if alpha == alphap else 0.0
    return DeltaPlusRegular(float(weight), regular)


def me_noise_stationary(model, alpha, alphap, tau):
    """Stationary noise S_{a a'}(tau) = lim_t S_{a a'}(t, t + tau).

    Positive tau means the alphap current is measured later.  The regular
    part decays as exp(-gamma |tau|); the delta weight is the stationary
    activity (auto-correlation only).
    """
    gam = model.gamma_total
    gammas = _gammas(model)
    f = {lead: _f(model, lead) for lead in gammas}
    ga, gap = gammas[alpha], gammas[alphap]
    # the later-measured lead's occupation enters the theta branches
    f_late = f[alphap] if tau >= 0.0 else f[alpha]
    val = 0.0
    weight = 0.0
    for beta, gb in gammas.items():
        fb = f[beta]
        if alpha == alphap:
            weight += ga * gb / gam * (fb * (1.0 - f[alpha])
                                       + f[alpha] * (1.0 - fb))
        for betap, gbp in gammas.items():
            fbp = f[betap]
            coup = ga * gap * gb * gbp / gam ** 2
            val -= coup * ((1.0 - fb) * f_late + fb * (fbp - f_late))
    val *= np.exp(-gam * abs(tau))
    return DeltaPlusRegular(float(weight), float(val))


def me_noise_stationary_jump(model, alpha, alphap):
    """Discontinuity of the stationary cross-correlation at tau = 0:
    ``lim_{tau->0+} - lim_{tau->0-}``; identically zero for alpha == alphap."""
    gam = model.gamma_total
    gammas = _gammas(model)
    ga, gap = gammas[alpha], gammas[alphap]
    fa, fap = _f(model, alpha), _f(model, alphap)
    val = 0.0
    for beta, gb in gammas.items():
        fb = _f(model, beta)
        val += ga * gap * gb / gam * (fap - fa) * ((1.0 - fb) - fb)
    return float(val)


def me_noise_zero_frequency(model, alpha, alphap):
    """Zero-frequency stationary noise (the full tau integral, delta ridge
    included); auto and cross values are equal and opposite."""
    gl = model.reservoir("L").gamma
    gr = model.reservoir("R").gamma
    gam = model.gamma_total
    fl, fr = _f(model, "L"), _f(model, "R")
    val = (gl * gr / gam * (fl * (1.0 - fr) + fr * (1.0 - fl))
           - 2.0 * gl ** 2 * gr ** 2 / gam ** 3 * (fl - fr) ** 2)
    return float(val) if alpha == alphap else -float(val)
