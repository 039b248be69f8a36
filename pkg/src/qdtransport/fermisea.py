"""Closed forms for filled-Fermi-sea tail integrals.

Every energy integral in this package carries a Fermi factor f(E) (or
1 - f(E)) that tends to 1 on one side of the real axis, so the integrand
decays only algebraically there and naive truncation converges like 1/W.
We therefore split

    f(E) = step(mu - E) + h(E),        h = f - step,

integrate the exponentially localized h numerically, and evaluate the
step ("filled sea") part against the rational/oscillatory kernels in
closed form.  The primitives below are those closed forms; they reduce to
the exponential integral E1 of complex argument.

Conventions documented once here and used package-wide:

* ``a = 0`` single-pole integrals are logarithmically divergent (a wide-band
  artifact); ``pole_ft`` then returns the documented finite part with the
  divergent lead- and time-independent constant dropped.  Every physical
  observable uses either a != 0, differences in which the constant cancels,
  or a time derivative that kills it.
* Non-decaying pure oscillations are evaluated in the Abel sense
  (regularized by exp(eta*E), eta -> 0+).
"""

from __future__ import annotations

import numpy as np
import scipy.special as sp

__all__ = [
    "exp_e1_scaled",
    "pole_ft",
    "pole_ft_conj",
    "pole_ft_finite_part",
    "double_pole_ft",
    "full_line_pole",
    "full_line_double_pole",
    "plane_wave_abel",
    "x_over_lorentzian_ft",
    "fermi_ft_regular",
    "fermi_ft_smooth",
    "FERMI_FT_DELTA_WEIGHT",
]

# coefficient of delta(u) in the Fourier kernel of a Fermi function
FERMI_FT_DELTA_WEIGHT = 0.5


def exp_e1_scaled(z):
    """Scaled exponential integral ``G(z) = exp(z) * E1(z)``.

    Stable for any |z|: direct product for moderate z, asymptotic series
    for large |z| (where exp(z) or E1(z) alone would over/underflow).
    The branch on the negative real axis is the limit from below
    (Im z -> 0-), which is the side selected by the Abel regularization of
    the defining integrals.
    """
    z = complex(z)
    if z == 0.0:
        raise ZeroDivisionError("E1 diverges at z = 0")
    if abs(z) >= 40.0:
        # asymptotic series sum_k (-1)^k k!/z^(k+1); truncated at min term
        term = 1.0 / z
        total = term
        for k in range(1, 24):
            new = term * (-k / z)
            if abs(new) >= abs(term):
                break
            total += new
            term = new
        return total
    if z.imag == 0.0 and z.real < 0.0:
        # E1 branch cut: approach from below = conj of the principal value
        return np.exp(z) * np.conj(sp.exp1(complex(z.real, 0.0)))
    return np.exp(z) * sp.exp1(z)


def pole_ft(a, c, v):
    """``integral_{-inf}^{v} exp(i a x) / (c - i x) dx`` with Re c > 0, a != 0.

    Equals ``-i exp(i a v) G(a (c - i v))`` with G the scaled E1.
    """
    if a == 0.0:
        raise ValueError("a = 0 is logarithmically divergent; "
                         "use pole_ft_finite_part")
    c = complex(c)
    if c.real <= 0.0:
        raise ValueError("requires Re c > 0")
    return -1j * np.exp(1j * a * v) * exp_e1_scaled(a * (c - 1j * v))


def pole_ft_conj(a, c, v):
    """``integral_{-inf}^{v} exp(i a x) / (c + i x) dx``, Re c > 0, a != 0."""
    return np.conj(pole_ft(-a, np.conj(complex(c)), v))


def pole_ft_finite_part(c, v):
    """Finite part of the a = 0 single-pole integral.

    The antiderivative of ``1/(c - i x)`` is ``i log(c - i x)``; the finite
    part keeps the continuous-branch value at the upper limit and drops the
    divergent ``i log|x| + i*(i pi/2)`` tail constant:

        FP integral_{-inf}^{v} dx/(c - i x) = i Log(c - i v) + pi/2.
    """
    c = complex(c)
    if c.real <= 0.0:
        raise ValueError("requires Re c > 0")
    return 1j * np.log(c - 1j * v) + np.pi / 2.0


def double_pole_ft(a, c1, c2, v):
    """``integral_{-inf}^{v} exp(i a x) / ((c1 - i x)(c2 + i x)) dx``.

    Re c1, Re c2 > 0.  Absolutely convergent for every real a (the kernel
    decays like 1/x^2); a = 0 is handled by the exact log form.
    """
    c1 = complex(c1)
    c2 = complex(c2)
    if c1.real <= 0.0 or c2.real <= 0.0:
        raise ValueError("requires Re c1, Re c2 > 0")
    if a == 0.0:
        # continuous branch from angle pi at x -> -inf; both factors stay in
        # the right half-plane so the principal log never wraps
        ratio = (c1 - 1j * v) / (c2 + 1j * v)
        return 1j * (np.log(ratio) - 1j * np.pi) / (c1 + c2)
    return (pole_ft(a, c1, v) + pole_ft_conj(a, c2, v)) / (c1 + c2)


def full_line_pole(a, c):
    """``integral_{-inf}^{inf} exp(i a x) / (c - i x) dx``, Re c > 0.

    The pole sits in the lower half-plane: 2 pi exp(a c) for a < 0, pi at
    a = 0, zero for a > 0.
    """
    c = complex(c)
    if c.real <= 0.0:
        raise ValueError("requires Re c > 0")
    if a < 0.0:
        return 2.0 * np.pi * np.exp(a * c)
    if a == 0.0:
        return complex(np.pi)
    return 0.0 + 0.0j


def full_line_double_pole(a, c1, c2):
    """``integral_{-inf}^{inf} exp(i a x) / ((c1 - i x)(c2 + i x)) dx``.

    Contour evaluation: pole at x = -i c1 (lower) for a < 0, at x = i c2
    (upper) for a >= 0.
    """
    c1 = complex(c1)
    c2 = complex(c2)
    if a < 0.0:
        return 2.0 * np.pi * np.exp(a * c1) / (c1 + c2)
    return 2.0 * np.pi * np.exp(-a * c2) / (c1 + c2)


def plane_wave_abel(a, v):
    """Abel-regularized ``integral_{-inf}^{v} exp(i a x) dx = exp(i a v)/(i a)``."""
    if a == 0.0:
        raise ValueError("non-oscillatory plane wave has no Abel limit")
    return np.exp(1j * a * v) / (1j * a)


def x_over_lorentzian_ft(a, c, v):
    """``integral_{-inf}^{v} x exp(i a x) / (c^2 + x^2) dx`` for real c > 0.

    Partial fractions give ``(i/2)(pole_ft_conj - pole_ft)``; the a = 0
    finite part is ``(1/2) ln(c^2 + v^2)`` (same dropped constant as
    ``pole_ft_finite_part``).
    """
    if a == 0.0:
        return 0.5 * np.log(c * c + v * v) + 0.0j
    return 0.5j * (pole_ft_conj(a, c, v) - pole_ft(a, c, v))


def fermi_ft_regular(temperature, mu, u):
    """Regular part of the Fourier kernel of a Fermi function.

    ``integral dE/(2 pi) exp(i E u) f(E) = (1/2) delta(u) + fermi_ft_regular``
    with the regular (principal-value) part

        -(i T / 2) exp(i mu u) / sinh(pi T u).

    The hole kernel (1 - f) has regular part equal to minus this.
    """
    x = np.pi * temperature * u
    return -0.5j * temperature * np.exp(1j * mu * u) / np.sinh(x)


def fermi_ft_smooth(temperature, mu, u):
    """``fermi_ft_regular + i/(2 pi u)``: the pole-free remainder.

    Continuous at u = 0 with value mu/(2 pi); used where the odd pole is
    removed by symmetry (principal value) or handled separately.
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty(u.shape, dtype=complex)
    small = np.abs(np.pi * temperature * u) < 1e-4
    us = u[small]
    # series: S(u) = mu/(2pi) + i u [mu^2/(4pi) + pi T^2/12]
    #               - u^2 [mu^3/(12 pi) + mu pi T^2/12] + O(u^3)
    out[small] = (mu / (2 * np.pi)
                  + 1j * us * (mu ** 2 / (4 * np.pi) + np.pi * temperature ** 2 / 12.0)
                  - us ** 2 * (mu ** 3 / (12 * np.pi) + mu * np.pi * temperature ** 2 / 12.0))
    ub = u[~small]
    out[~small] = (fermi_ft_regular(temperature, mu, ub)
                   + 1j / (2 * np.pi * ub))
    return out[0] if scalar else out
