"""Exact finite-time observables for the single resonant level.

Currents and two-time current correlations follow from the wide-band
operator solution of the coupled dot/lead equations of motion.  Everything
reduces to energy integrals of Lorentzian-type kernels weighted by Fermi
factors; each integral is split into an exponentially localized part
(adaptive quadrature) and a filled-Fermi-sea part (closed forms from
``fermisea``).

Conventions:

* All times enter relative to the model's ``t0``.
* The high-energy log tails of the first-moment coefficients (and of the
  single-pole kernels at coincident phase) carry the documented finite-part
  convention of ``fermisea``; every returned observable is either
  convention-free or flagged in its docstring.
* Two-time correlations exclude the white-noise delta ridge at equal times
  (its weight is the dynamical activity; see ``me_single`` for the
  weak-coupling counterpart).
"""

from __future__ import annotations

import warnings

import numpy as np

from . import fermisea as fs
from .model import fermi
from .numerics import DEFAULT_QUAD_SPEC, integrate_real_line

__all__ = [
    "WblShortTimeWarning",
    "abc_coefficient",
    "AbcCoefficients",
    "he_current_particle",
    "he_current_energy",
    "he_current_decomposition",
    "he_current_steady",
    "LambdaFunctions",
    "g_pm",
    "he_noise_two_time",
    "he_noise_two_time_blocks",
    "he_noise_frequency_ss",
    "he_contact_energy_current",
]

SHORT_TIME_FACTOR = 0.1


class WblShortTimeWarning(UserWarning):
    """Energy observables diverge logarithmically as t -> t0 in the wide-band
    limit; values inside the warned window are cutoff-sensitive physics."""


def _hole_weight(res, energies):
    """h(E) = f(E) - step(mu - E); exponentially small away from mu."""
    s = np.asarray(energies, dtype=float) - res.mu
    import scipy.special as sp
    return np.sign(s) * sp.expit(-np.abs(s) / res.temperature)


def _window_scale(model, res, extra=0.0):
    gam = model.gamma_total
    return max(gam, abs(res.mu - model.epsilon_d) + 10.0 * res.temperature + extra)


def _h_quad(model, res, kernel_x, spec, oscillation=0.0, extra_scale=0.0):
    """integral dx kernel_x(x) * h(eps_d + x) over the truncation window."""
    eps_d = model.epsilon_d
    v = res.mu - eps_d

    def f(x):
        return kernel_x(x) * _hole_weight(res, eps_d + x)

    return integrate_real_line(
        f, 0.0, spec, scale=_window_scale(model, res, extra_scale),
        breakpoints=(v,), oscillation=oscillation)


# ---------------------------------------------------------------------------
# A/B/C coefficient integrals of the exact currents
# ---------------------------------------------------------------------------

def abc_coefficient(model, lead, kind, m, dt=0.0, spec=DEFAULT_QUAD_SPEC):
    """One coefficient integral of the exact current formulas.

    ``kind`` is "a" (static), "b" (cosine) or "c" (sine); ``m`` in {0, 1} is
    the energy moment; ``dt`` the elapsed time.  The m = 1 "a"/"b" values at
    dt = 0 carry the finite-part convention (their defining integrals are
    log-divergent, a wide-band artifact); lead differences are exact.
    """
    if m not in (0, 1):
        raise ValueError("moment m must be 0 or 1")
    if kind not in ("a", "b", "c"):
        raise ValueError("kind must be 'a', 'b' or 'c'")
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    res = model.reservoir(lead)
    gam = model.gamma_total
    c = gam / 2.0
    eps_d = model.epsilon_d
    v = res.mu - eps_d

    if kind == "c" and dt == 0.0:
        return 0.0
    if kind == "b" and dt == 0.0:
        kind = "a"

    lorentz = lambda x: 1.0 / (c * c + x * x)

    if kind == "a":
        h_part = _h_quad(model, res,
                         lambda x: (x + eps_d) ** m * lorentz(x), spec)
        theta = (1.0 / c) * (np.arctan(v / c) + np.pi / 2.0)
        if m == 1:
            theta = 0.5 * np.log(c * c + v * v) + eps_d * theta
        return float(gam / (2.0 * np.pi) * (h_part.real + theta))

    if kind == "b":
        h_part = _h_quad(
            model, res,
            lambda x: (x + eps_d) ** m * np.cos(x * dt) * lorentz(x),
            spec, oscillation=dt)
        theta = fs.double_pole_ft(dt, c, c, v).real
        if m == 1:
            x_piece = (0.5j * (fs.pole_ft_conj(dt, c, v)
                               - fs.pole_ft(dt, c, v))).real
            theta = x_piece + eps_d * theta
        return float(gam / (2.0 * np.pi) * (h_part.real + theta))

    # kind == "c"
    h_part = _h_quad(
        model, res,
        lambda x: (x + eps_d) ** m * x * np.sin(x * dt) * lorentz(x),
        spec, oscillation=dt)
    x_sin = (0.5j * (fs.pole_ft_conj(dt, c, v) - fs.pole_ft(dt, c, v))).imag
    if m == 0:
        theta = x_sin
    else:
        # x^2/(c^2+x^2) = 1 - c^2/(c^2+x^2); the plane wave is Abel-summed
        plane = -np.cos(v * dt) / dt
        theta = plane - c * c * fs.double_pole_ft(dt, c, c, v).imag + eps_d * x_sin
    return float(1.0 / np.pi * (h_part.real + theta))


class AbcCoefficients:
    """Cached access to the coefficient integrals of one model."""

    def __init__(self, model, spec=DEFAULT_QUAD_SPEC):
        self.model = model
        self.spec = spec
        self._cache = {}

    def __call__(self, lead, kind, m, dt=0.0):
        key = (lead, kind, m, float(dt))
        if key not in self._cache:
            self._cache[key] = abc_coefficient(
                self.model, lead, kind, m, dt, self.spec)
        return self._cache[key]


# ---------------------------------------------------------------------------
# currents
# ---------------------------------------------------------------------------

def he_current_decomposition(model, lead, t, spec=DEFAULT_QUAD_SPEC):
    """Particle current split into its initial-occupation decay, stationary,
    and oscillatory-transient terms (their sum is ``he_current_particle``)."""
    dt = t - model.t0
    if dt < 0.0:
        raise ValueError("t must be >= t0")
    gam = model.gamma_total
    coef = AbcCoefficients(model, spec)
    ga = model.reservoir(lead).gamma
    initial = -ga * model.n_d * np.exp(-gam * dt)
    stationary = 0.0
    transient = 0.0
    for beta in ("L", "R"):
        gb = model.reservoir(beta).gamma
        stationary += ga * gb / gam * (coef(lead, "a", 0) - coef(beta, "a", 0))
        bracket = (coef(beta, "a", 0) + coef(lead, "b", 0, dt)
                   - 2.0 * coef(beta, "b", 0, dt) + coef(lead, "c", 0, dt))
        transient -= ga * gb / gam * np.exp(-gam * dt / 2.0) * bracket
    return initial, stationary, transient


def he_current_particle(model, lead, t, spec=DEFAULT_QUAD_SPEC):
    """Exact particle current into lead ``lead`` at time ``t``."""
    return float(sum(he_current_decomposition(model, lead, t, spec)))


def he_current_energy(model, lead, t, spec=DEFAULT_QUAD_SPEC):
    """Exact energy current; warns inside the wide-band short-time window."""
    dt = t - model.t0
    if dt < 0.0:
        raise ValueError("t must be >= t0")
    gam = model.gamma_total
    if 0.0 < dt < SHORT_TIME_FACTOR / gam:
        warnings.warn(
            f"energy current at (t-t0)*gamma = {dt * gam:.3g} < "
            f"{SHORT_TIME_FACTOR}: wide-band short-time regime",
            WblShortTimeWarning, stacklevel=2)
    coef = AbcCoefficients(model, spec)
    ga = model.reservoir(lead).gamma
    total = -ga * model.epsilon_d * model.n_d * np.exp(-gam * dt)
    for beta in ("L", "R"):
        gb = model.reservoir(beta).gamma
        total += ga * gb / gam * (coef(lead, "a", 1) - coef(beta, "a", 1))
        bracket = (coef(lead, "b", 1, dt) - coef(beta, "b", 1, dt)
                   + coef(lead, "c", 1, dt))
        total -= ga * gb / gam * np.exp(-gam * dt / 2.0) * bracket
    return float(total)


def he_current_steady(model, lead, spec=DEFAULT_QUAD_SPEC):
    """Stationary (particle, energy) currents; the transients have decayed."""
    gam = model.gamma_total
    coef = AbcCoefficients(model, spec)
    ga = model.reservoir(lead).gamma
    i_ss = 0.0
    j_ss = 0.0
    for beta in ("L", "R"):
        gb = model.reservoir(beta).gamma
        i_ss += ga * gb / gam * (coef(lead, "a", 0) - coef(beta, "a", 0))
        j_ss += ga * gb / gam * (coef(lead, "a", 1) - coef(beta, "a", 1))
    return float(i_ss), float(j_ss)


# ---------------------------------------------------------------------------
# two-time kernels
# ---------------------------------------------------------------------------

def g_pm(model, sign, x, t):
    """Transient resolvent kernel: ``(1 - exp(-(G/2 +- ix) dt)) / (2(G/2 +- ix))``."""
    c = model.gamma_total / 2.0
    dt = t - model.t0
    z = c + 1j * sign * np.asarray(x)
    return -np.expm1(-z * dt) / (2.0 * z)


class LambdaFunctions:
    """The elementary two-time kernels of the exact noise formula.

    Each method takes absolute times and a ``barred`` flag selecting the
    hole-substituted partner (n_d -> 1 - n_d, f -> 1 - f).  Values are
    cached per instance.  Only the oscillation-free regular parts are
    returned; the white-noise delta weight of the reservoir kernel is the
    constant ``1/gamma_total`` (both barred and unbarred).
    """

    def __init__(self, model, spec=DEFAULT_QUAD_SPEC):
        self.model = model
        self.spec = spec
        self._cache = {}

    # -- closed forms ------------------------------------------------------

    def lam0(self, t, tp, barred=False):
        m = self.model
        gam = m.gamma_total
        occ = (1.0 - m.n_d) if barred else m.n_d
        d1, d2 = t - m.t0, tp - m.t0
        return 0.5 * np.exp(-gam * (d1 + d2) / 2.0) \
            * np.exp(1j * m.epsilon_d * (t - tp)) * occ

    def lam_res(self, lead, t, tp, barred=False):
        """Reservoir kernel, regular part; odd pole dropped (PV) at t = tp."""
        m = self.model
        res = m.reservoir(lead)
        tau = t - tp
        if tau == 0.0:
            val = fs.fermi_ft_smooth(res.temperature, res.mu, 0.0)
        else:
            val = fs.fermi_ft_regular(res.temperature, res.mu, tau)
        val = complex(val) * 2.0 / m.gamma_total
        return -val if barred else val

    # -- quadrature-backed kernels ------------------------------------------

    def _key(self, *parts):
        return parts

    def lam1(self, lead, t, tp, barred=False):
        key = self._key("lam1", lead, float(t), float(tp), barred)
        if key not in self._cache:
            self._cache[key] = self._lam1(lead, t, tp, barred)
        return self._cache[key]

    def _lam1(self, lead, t, tp, barred):
        m = self.model
        res = m.reservoir(lead)
        gam = m.gamma_total
        c = gam / 2.0
        tau = t - tp
        dt = t - m.t0
        if dt < 0.0:
            raise ValueError("t must be >= t0")
        v = res.mu - m.epsilon_d
        damp = np.exp(-gam * dt / 2.0)

        def kernel(x):
            return (np.exp(1j * x * tau)
                    * (1.0 - damp * np.exp(1j * x * dt)) / (c - 1j * x))

        sign = -1.0 if barred else 1.0
        h_part = sign * _h_quad(m, res, kernel, self.spec,
                                oscillation=abs(tau) + dt)

        def pole(a):
            if a == 0.0:
                return fs.pole_ft_finite_part(c, v)
            return fs.pole_ft(a, c, v)

        if barred:
            theta = ((fs.full_line_pole(tau, c) - pole(tau))
                     - damp * (fs.full_line_pole(tau + dt, c) - pole(tau + dt)))
        else:
            theta = pole(tau) - damp * pole(tau + dt)
        return np.exp(1j * m.epsilon_d * tau) / (2.0 * np.pi) * (h_part + theta)

    def lam2(self, lead, t, tp, barred=False):
        key = self._key("lam2", lead, float(t), float(tp), barred)
        if key not in self._cache:
            self._cache[key] = self._lam2(lead, t, tp, barred)
        return self._cache[key]

    def _lam2(self, lead, t, tp, barred):
        m = self.model
        res = m.reservoir(lead)
        gam = m.gamma_total
        c = gam / 2.0
        tau = t - tp
        d1, d2 = t - m.t0, tp - m.t0
        if d1 < 0.0 or d2 < 0.0:
            raise ValueError("t and tp must be >= t0")
        v = res.mu - m.epsilon_d

        def kernel(x):
            return (np.exp(1j * x * tau)
                    * g_pm(m, +1, x, t) * g_pm(m, -1, x, tp))

        sign = -1.0 if barred else 1.0
        h_part = sign * 2.0 * gam * _h_quad(
            m, res, kernel, self.spec, oscillation=abs(tau) + d1 + d2)

        terms = ((tau, 1.0),
                 (tau + d1, -np.exp(-gam * d1 / 2.0)),
                 (tau - d2, -np.exp(-gam * d2 / 2.0)),
                 (tau + d1 - d2, np.exp(-gam * (d1 + d2) / 2.0)))
        theta = 0.0 + 0.0j
        for a, coef in terms:
            p2 = fs.double_pole_ft(a, c, c, v)
            if barred:
                p2 = fs.full_line_double_pole(a, c, c) - p2
            theta += coef * p2
        theta *= gam / 2.0
        return np.exp(1j * m.epsilon_d * tau) / (2.0 * np.pi) * (h_part + theta)

    # -- stationary kernels (direct long-time limits, for cross-checks) -----

    def lam1_stationary(self, lead, tau, barred=False):
        m = self.model
        res = m.reservoir(lead)
        c = m.gamma_total / 2.0
        v = res.mu - m.epsilon_d

        def kernel(x):
            return np.exp(1j * x * tau) / (c - 1j * x)

        sign = -1.0 if barred else 1.0
        h_part = sign * _h_quad(m, res, kernel, self.spec, oscillation=abs(tau))
        if tau == 0.0:
            theta = fs.pole_ft_finite_part(c, v)
        else:
            theta = fs.pole_ft(tau, c, v)
        if barred:
            theta = fs.full_line_pole(tau, c) - theta
        return np.exp(1j * m.epsilon_d * tau) / (2.0 * np.pi) * (h_part + theta)

    def lam2_stationary(self, lead, tau, barred=False):
        m = self.model
        res = m.reservoir(lead)
        gam = m.gamma_total
        c = gam / 2.0
        v = res.mu - m.epsilon_d

        def kernel(x):
            return np.exp(1j * x * tau) / (c * c + x * x)

        sign = -1.0 if barred else 1.0
        h_part = sign * _h_quad(m, res, kernel, self.spec, oscillation=abs(tau))
        theta = fs.double_pole_ft(tau, c, c, v)
        if barred:
            theta = fs.full_line_double_pole(tau, c, c) - theta
        return (gam / 2.0) * np.exp(1j * m.epsilon_d * tau) / (2.0 * np.pi) \
            * (h_part + theta)


# ---------------------------------------------------------------------------
# two-time noise (Wick assembly)
# ---------------------------------------------------------------------------

def _weights(model):
    gam = model.gamma_total
    return {beta: model.reservoir(beta).gamma for beta in ("L", "R")}, gam


def _cd(lf, alpha, t, tp, barred):
    """Lead-dot correlator; the barred partner is conj(formula over barred
    kernels), which keeps the bar-substitution rule in one place."""
    gammas, gam = _weights(lf.model)
    ga = gammas[alpha]
    val = 0.0 + 0.0j
    for beta, gb in gammas.items():
        val += (ga * gb / gam) * (lf.lam0(t, tp, barred)
                                  - lf.lam1(alpha, t, tp, barred)
                                  + lf.lam2(beta, t, tp, barred))
    val *= 1j
    return np.conj(val) if barred else val


def _dc(lf, alphap, t, tp, barred):
    gammas, gam = _weights(lf.model)
    gap = gammas[alphap]
    val = 0.0 + 0.0j
    for beta, gb in gammas.items():
        val += (gap * gb / gam) * np.conj(
            lf.lam0(tp, t, barred)
            - lf.lam1(alphap, tp, t, barred)
            + lf.lam2(beta, tp, t, barred))
    val *= -1j
    return np.conj(val) if barred else val


def _cc(lf, alpha, alphap, t, tp, barred):
    gammas, gam = _weights(lf.model)
    ga, gap = gammas[alpha], gammas[alphap]
    val = 0.0 + 0.0j
    if alpha == alphap:
        val += (ga * gam / 2.0) * lf.lam_res(alpha, t, tp, barred)
    for beta, gb in gammas.items():
        val += (ga * gap * gb / (2.0 * gam)) * (
            lf.lam0(t, tp, barred)
            - lf.lam1(alpha, t, tp, barred)
            - np.conj(lf.lam1(alphap, tp, t, barred))
            + lf.lam2(beta, t, tp, barred))
    return np.conj(val) if barred else val


def _dd(lf, t, tp, barred):
    gammas, gam = _weights(lf.model)
    val = 0.0 + 0.0j
    for beta, gb in gammas.items():
        val += (2.0 * gb / gam) * np.conj(lf.lam0(tp, t, barred)
                                          + lf.lam2(beta, tp, t, barred))
    return np.conj(val) if barred else val


def he_noise_two_time_blocks(model, alpha, alphap, t, tp,
                             spec=DEFAULT_QUAD_SPEC):
    """The four Wick products whose sum is the two-time current correlation."""
    lf = LambdaFunctions(model, spec)
    return {
        "cd_dcbar": -_cd(lf, alpha, t, tp, False) * _dc(lf, alphap, t, tp, True),
        "cc_ddbar": _cc(lf, alpha, alphap, t, tp, False) * _dd(lf, t, tp, True),
        "ccbar_dd": _cc(lf, alpha, alphap, t, tp, True) * _dd(lf, t, tp, False),
        "cdbar_dc": -_cd(lf, alpha, t, tp, True) * _dc(lf, alphap, t, tp, False),
    }


def he_noise_two_time(model, alpha, alphap, t, tp, spec=DEFAULT_QUAD_SPEC):
    """Exact two-time current correlation S_{a a'}(t, t'), regular part.

    Valid at all times and couplings; the equal-time auto-correlation
    white-noise delta is excluded.  Satisfies
    ``S_{a a'}(t, t') = conj(S_{a' a}(t', t))``.
    """
    blocks = he_noise_two_time_blocks(model, alpha, alphap, t, tp, spec)
    return complex(sum(blocks.values()))


# ---------------------------------------------------------------------------
# stationary finite-frequency noise
# ---------------------------------------------------------------------------

def he_noise_frequency_ss(model, alpha, alphap, omega, spec=DEFAULT_QUAD_SPEC):
    """Stationary noise spectrum S_{a a'}(omega) via the convolution-theorem
    single energy integral over products of stationary kernels."""
    gam = model.gamma_total
    c = gam / 2.0
    eps_d = model.epsilon_d
    gammas = {beta: model.reservoir(beta).gamma for beta in ("L", "R")}
    res = {beta: model.reservoir(beta) for beta in ("L", "R")}

    def f_of(beta, e):
        return fermi(res[beta], e)

    def l1(beta, e):
        return f_of(beta, e) / (c - 1j * (e - eps_d))

    def l1c(beta, e):
        return f_of(beta, e) / (c + 1j * (e - eps_d))

    def l2(beta, e):
        return c * f_of(beta, e) / (c * c + (e - eps_d) ** 2)

    def l1b(beta, e):
        return (1.0 - f_of(beta, e)) / (c - 1j * (e - eps_d))

    def l1cb(beta, e):
        return (1.0 - f_of(beta, e)) / (c + 1j * (e - eps_d))

    def l2b(beta, e):
        return c * (1.0 - f_of(beta, e)) / (c * c + (e - eps_d) ** 2)

    def l0fr(beta, e):
        return 2.0 / gam * f_of(beta, e)

    def l0frb(beta, e):
        return 2.0 / gam * (1.0 - f_of(beta, e))

    ga, gap = gammas[alpha], gammas[alphap]
    auto = alpha == alphap

    def integrand(e):
        es = e - omega
        main = np.zeros_like(e, dtype=complex)
        swap = np.zeros_like(e, dtype=complex)
        for beta, gb in gammas.items():
            for betap, gbp in gammas.items():
                w4 = ga * gap * gb * gbp / gam ** 2
                main += w4 * (-l1(alpha, e) + l2(beta, e)) \
                    * (-l1b(alphap, es) + l2b(betap, es))
                main += w4 * (-l1(alpha, e) - l1c(alphap, e) + l2(beta, e)) \
                    * l2b(betap, es)
                swap += w4 * (-l1(alphap, e) + l2(beta, e)) \
                    * (-l1b(alpha, es) + l2b(betap, es))
                swap += w4 * l2(betap, e) \
                    * (-l1b(alpha, es) - l1cb(alphap, es) + l2b(beta, es))
            if auto:
                main += ga * gb * l0fr(alpha, e) * l2b(beta, es)
                swap += ga * gb * l2(beta, e) * l0frb(alpha, es)
        return (main + np.conj(swap)) / (2.0 * np.pi)

    scale = max(
        gam, abs(omega),
        *(abs(r.mu - eps_d) + 10.0 * r.temperature for r in res.values()),
        *(abs(r.mu + omega - eps_d) + 10.0 * r.temperature for r in res.values()))
    breaks = [r.mu for r in res.values()] + [r.mu + omega for r in res.values()]
    return complex(integrate_real_line(
        integrand, eps_d, spec, scale=scale, breakpoints=breaks))


# ---------------------------------------------------------------------------
# contact energy current
# ---------------------------------------------------------------------------

def he_contact_energy_current(model, lead, t, spec=DEFAULT_QUAD_SPEC,
                              rel_refine=1e-6):
    """Energy current stored in the dot-lead contact region.

    Central difference (step 1e-4/gamma, Richardson-refined when the two-step
    estimates disagree) of the imaginary part of the equal-time lead-dot
    correlator; vanishes in the steady state and is second order in the
    coupling.
    """
    gam = model.gamma_total
    ga = model.reservoir(lead).gamma
    if ga == 0.0:
        return 0.0
    step = 1e-4 / gam
    if t - step <= model.t0:
        raise ValueError("t must exceed t0 by more than the difference step")
    lf = LambdaFunctions(model, spec)
    gammas, _ = _weights(model)

    def m_of(s):
        val = lf.lam0(s, s) - lf.lam1(lead, s, s)
        for beta, gb in gammas.items():
            val += gb / gam * lf.lam2(beta, s, s)
        return 2.0 * ga * val.imag

    def central(h):
        return (m_of(t + h) - m_of(t - h)) / (2.0 * h)

    d1 = central(step)
    d2 = central(step / 2.0)
    if abs(d1 - d2) > rel_refine * max(abs(d2), 1e-300):
        return float((4.0 * d2 - d1) / 3.0)
    return float(d2)
