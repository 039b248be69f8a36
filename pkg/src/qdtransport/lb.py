"""Steady-state scattering transport for the single resonant level:
Breit-Wigner transmission, particle/energy currents, and zero-frequency
shot noise.
"""

from __future__ import annotations

import numpy as np

from .model import fermi
from .numerics import DEFAULT_QUAD_SPEC, integrate_real_line

__all__ = [
    "transmission",
    "lb_current_particle",
    "lb_current_energy",
    "lb_current_particle_zero_temp",
    "lb_current_energy_zero_temp",
    "lb_shot_noise",
]


def transmission(model, epsilon):
    """Breit-Wigner transmission probability of the dot at energy epsilon."""
    gl = model.reservoir("L").gamma
    gr = model.reservoir("R").gamma
    gam = model.gamma_total
    x = np.asarray(epsilon, dtype=float) - model.epsilon_d
    out = gl * gr / (gam * gam / 4.0 + x * x)
    return float(out) if np.ndim(epsilon) == 0 else out


def _bias_window_scale(model, extra=0.0):
    gam = model.gamma_total
    return max(gam, extra,
               *(abs(r.mu - model.epsilon_d) + 10.0 * r.temperature
                 for r in model.reservoirs))


def lb_current_particle(model, lead, spec=DEFAULT_QUAD_SPEC):
    """Stationary particle current into lead ``lead`` (I_L = -I_R)."""
    res_a = model.reservoir(lead)
    res_b = model.reservoir(model.other(lead))

    def integrand(e):
        return transmission(model, e) * (fermi(res_a, e) - fermi(res_b, e)) \
            / (2.0 * np.pi)

    val = integrate_real_line(
        integrand, model.epsilon_d, spec, scale=_bias_window_scale(model),
        breakpoints=[r.mu for r in model.reservoirs])
    return float(val.real)


def lb_current_energy(model, lead, spec=DEFAULT_QUAD_SPEC):
    """Stationary energy current into lead ``lead`` (J_L = -J_R)."""
    res_a = model.reservoir(lead)
    res_b = model.reservoir(model.other(lead))

    def integrand(e):
        return e * transmission(model, e) \
            * (fermi(res_a, e) - fermi(res_b, e)) / (2.0 * np.pi)

    val = integrate_real_line(
        integrand, model.epsilon_d, spec, scale=_bias_window_scale(model),
        breakpoints=[r.mu for r in model.reservoirs])
    return float(val.real)


def _atan(model, mu):
    gam = model.gamma_total
    return np.arctan(2.0 * (mu - model.epsilon_d) / gam)


def lb_current_particle_zero_temp(model, lead):
    """Exact zero-temperature particle current (arctan closed form).

    Uses step-function occupations; the reservoir temperatures are ignored.
    """
    gl = model.reservoir("L").gamma
    gr = model.reservoir("R").gamma
    gam = model.gamma_total
    mu_a = model.reservoir(lead).mu
    mu_b = model.reservoir(model.other(lead)).mu
    return float(gl * gr / (np.pi * gam) * (_atan(model, mu_a) - _atan(model, mu_b)))


def lb_current_energy_zero_temp(model, lead):
    """Exact zero-temperature energy current (arctan/log closed form)."""
    gl = model.reservoir("L").gamma
    gr = model.reservoir("R").gamma
    gam = model.gamma_total
    mu_a = model.reservoir(lead).mu
    mu_b = model.reservoir(model.other(lead)).mu

    def primitive(mu):
        # integral of e * T(e) up to mu, common constant dropped
        x = mu - model.epsilon_d
        return (model.epsilon_d * (2.0 / gam) * np.arctan(2.0 * x / gam)
                + 0.5 * np.log(gam * gam / 4.0 + x * x))

    return float(gl * gr / (2.0 * np.pi) * (primitive(mu_a) - primitive(mu_b)))


def lb_shot_noise(model, alpha, alphap, spec=DEFAULT_QUAD_SPEC):
    """Zero-frequency current noise: thermal plus partition contributions.

    S_LL = S_RR and S_LR = S_RL = -S_LL.
    """
    res_l = model.reservoir("L")
    res_r = model.reservoir("R")

    def integrand(e):
        t = transmission(model, e)
        fl = fermi(res_l, e)
        fr = fermi(res_r, e)
        thermal = t * (fl * (1.0 - fl) + fr * (1.0 - fr))
        partition = t * (1.0 - t) * (fl - fr) ** 2
        return (thermal + partition) / (2.0 * np.pi)

    val = integrate_real_line(
        integrand, model.epsilon_d, spec, scale=_bias_window_scale(model),
        breakpoints=[r.mu for r in model.reservoirs])
    auto = float(val.real)
    return auto if alpha == alphap else -auto
