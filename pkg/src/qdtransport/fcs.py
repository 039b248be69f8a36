"""Generalized full-counting-statistics engine.

Numerically exact superoperator machinery for small Lindblad models with
per-lead counting fields: dressed Liouvillians, propagators, multi-time
joint probabilities, and transferred-quanta moments with an arbitrary
detection response.  Serves as the independent oracle for every closed-form
master-equation result in this package.

Vectorization is column-stacking throughout: vec(X rho Y) = (Y^T kron X) vec(rho).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import fermi
from .numerics import (DEFAULT_QUAD_SPEC, DimensionMismatch, expm,
                       integrate_real_line)

__all__ = [
    "Jump",
    "LindbladSpec",
    "DetectionResponse",
    "DressedLiouvillian",
    "build_liouvillian",
    "single_dot_lindblad_spec",
    "vec",
    "unvec",
    "propagate",
    "joint_probability",
    "joint_probability_multi",
    "mean_transferred",
    "current_via_fcs",
    "two_time_correlation_via_fcs",
]


def vec(rho):
    """Column-stacking vectorization."""
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvec(v):
    d = int(round(np.sqrt(v.size)))
    return np.asarray(v, dtype=complex).reshape((d, d), order="F")


@dataclass(frozen=True)
class Jump:
    """One dissipation channel: a lowering operator with in/out rates.

    ``quantum_weight`` is the amount counted per jump (1 for particles,
    the transition energy for energy quanta); ``transition_energy`` records
    the energy carried regardless of the counting choice.
    """

    lead: str
    level: int
    lowering: np.ndarray
    rate_in: float
    rate_out: float
    quantum_weight: float = 1.0
    transition_energy: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lowering",
                           np.asarray(self.lowering, dtype=complex))
        if self.rate_in < 0 or self.rate_out < 0:
            raise ValueError("rates must be >= 0")


@dataclass(frozen=True)
class LindbladSpec:
    hamiltonian: np.ndarray
    jumps: tuple

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian",
                           np.asarray(self.hamiltonian, dtype=complex))
        object.__setattr__(self, "jumps", tuple(self.jumps))
        d = self.hamiltonian.shape[0]
        if self.hamiltonian.shape != (d, d):
            raise DimensionMismatch("hamiltonian must be square")
        for j in self.jumps:
            if j.lowering.shape != (d, d):
                raise DimensionMismatch(
                    f"jump operator shape {j.lowering.shape} != {(d, d)}")


@dataclass(frozen=True)
class DetectionResponse:
    """Temporal weighting of when a jump is registered.

    The delta kind counts jumps instantaneously.  The window kind uses the
    normalized family F(s) = (2/T) sin^2(pi s / T) on [0, T], which
    satisfies F(0) = F(T) = 0.
    """

    kind: str = "delta"

    def __post_init__(self):
        if self.kind not in ("delta", "window"):
            raise ValueError("kind must be 'delta' or 'window'")

    @classmethod
    def delta(cls):
        return cls("delta")

    @classmethod
    def window(cls):
        return cls("window")

    def weight(self, s, span):
        """F(span - s_offset): evaluated as F(u) for u = s in [0, span]."""
        if self.kind == "delta":
            raise ValueError("delta response has no pointwise weight")
        u = np.asarray(s, dtype=float)
        out = 2.0 / span * np.sin(np.pi * u / span) ** 2
        return np.where((u >= 0) & (u <= span), out, 0.0)


class DressedLiouvillian:
    """Vectorized Lindblad generator with counting-field dressing.

    Exposes the base generator, the analytically dressed L(chi), and the
    exact first/second counting-field derivative superoperators (currents
    and activity); no numerical differentiation in production paths.
    """

    def __init__(self, spec):
        self.spec = spec
        d = spec.hamiltonian.shape[0]
        self.dim = d
        ident = np.eye(d, dtype=complex)
        h_eff = spec.hamiltonian.astype(complex).copy()
        for j in spec.jumps:
            ll = j.lowering
            h_eff -= 0.5j * (j.rate_out * ll.conj().T @ ll
                             + j.rate_in * ll @ ll.conj().T)
        self._l0 = -1j * (np.kron(ident, h_eff) - np.kron(h_eff.conj(), ident))
        self._plus = []   # (lead, nu, eps_j, superop) for L+ jumps
        self._minus = []
        for j in spec.jumps:
            ll = j.lowering
            raise_op = ll.conj().T
            # vec(L+ rho L) = (L^T kron L+) vec; vec(L rho L+) = (conj(L) kron L)
            sup_in = j.rate_in * np.kron(ll.T, raise_op)
            sup_out = j.rate_out * np.kron(ll.conj(), ll)
            self._plus.append((j.lead, j.quantum_weight, j.transition_energy,
                               sup_in))
            self._minus.append((j.lead, j.quantum_weight, j.transition_energy,
                                sup_out))
        self.leads = tuple(sorted({j.lead for j in spec.jumps}))
        self.base = self._l0 + sum(s for *_, s in self._plus) \
            + sum(s for *_, s in self._minus)
        self.trace_vec = vec(ident)

    @staticmethod
    def _nu(nu_default, eps_j, quantum_weight):
        if quantum_weight in (None, "particle"):
            return 1.0
        if quantum_weight == "energy":
            return eps_j
        if quantum_weight == "jump":
            return nu_default
        if isinstance(quantum_weight, str):
            raise ValueError(f"unknown quantum weight {quantum_weight!r}")
        return float(quantum_weight)

    def dressed(self, chi):
        """L(chi) for a dict of per-lead counting fields (jump nu weights)."""
        out = self._l0.copy()
        for (lead, nu, _, sup) in self._plus:
            out = out + np.exp(1j * chi.get(lead, 0.0) * nu) * sup
        for (lead, nu, _, sup) in self._minus:
            out = out + np.exp(-1j * chi.get(lead, 0.0) * nu) * sup
        return out

    def current_superop(self, lead, quantum_weight="particle"):
        """d/d(i chi_lead) L(chi) at chi = 0 with the requested weight."""
        out = np.zeros_like(self._l0)
        for (ld, nu, eps_j, sup) in self._plus:
            if ld == lead:
                out = out + self._nu(nu, eps_j, quantum_weight) * sup
        for (ld, nu, eps_j, sup) in self._minus:
            if ld == lead:
                out = out - self._nu(nu, eps_j, quantum_weight) * sup
        return out

    def activity_superop(self, lead, quantum_weight="particle"):
        """-d^2/d(chi_lead)^2 L(chi) at chi = 0 (nu^2-weighted jump sum)."""
        out = np.zeros_like(self._l0)
        for (ld, nu, eps_j, sup) in self._plus:
            if ld == lead:
                out = out + self._nu(nu, eps_j, quantum_weight) ** 2 * sup
        for (ld, nu, eps_j, sup) in self._minus:
            if ld == lead:
                out = out + self._nu(nu, eps_j, quantum_weight) ** 2 * sup
        return out

    def expect(self, superop, state_vec):
        return complex(self.trace_vec.conj() @ (superop @ state_vec))

    def trace(self, state_vec):
        return complex(self.trace_vec.conj() @ state_vec)


def build_liouvillian(spec):
    return DressedLiouvillian(spec)


def single_dot_lindblad_spec(model):
    """Lindblad description of the single resonant level, both leads."""
    sigma_minus = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    h = model.epsilon_d * np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    jumps = []
    for res in model.reservoirs:
        f = fermi(res, model.epsilon_d)
        jumps.append(Jump(lead=res.label, level=0, lowering=sigma_minus,
                          rate_in=res.gamma * f,
                          rate_out=res.gamma * (1.0 - f),
                          quantum_weight=1.0,
                          transition_energy=model.epsilon_d))
    return LindbladSpec(hamiltonian=h, jumps=tuple(jumps))


def single_dot_rho0(model):
    return np.diag([1.0 - model.n_d, model.n_d]).astype(complex)


def propagate(dl, chi, t, rho0_vec):
    """vec of the chi-resolved state after elapsed time t."""
    if t < 0.0:
        raise ValueError("elapsed time must be >= 0")
    return expm(dl.dressed(chi), t) @ rho0_vec


def joint_probability(dl, chi, t, chi_prime, t_prime, rho0_vec, t0=0.0):
    """Moment generating function of transfers up to t and up to t_prime.

    Time ordering is handled by exchanging the two counting records; equals
    1 at vanishing counting fields.
    """
    if t > t_prime:
        chi, chi_prime = chi_prime, chi
        t, t_prime = t_prime, t
    if t < t0:
        raise ValueError("times must be >= t0")
    both = {k: chi.get(k, 0.0) + chi_prime.get(k, 0.0)
            for k in set(chi) | set(chi_prime)}
    state = propagate(dl, both, t - t0, rho0_vec)
    state = propagate(dl, chi_prime, t_prime - t, state)
    return dl.trace(state)


def joint_probability_multi(dl, records, rho0_vec, t0=0.0):
    """N-time generalization: ``records`` is a list of (chi_dict, time) with
    nondecreasing times; counting fields accumulate over nested intervals."""
    times = [t for _, t in records]
    if any(b < a for a, b in zip(times[:-1], times[1:])) or times[0] < t0:
        raise ValueError("record times must be nondecreasing and >= t0")
    state = rho0_vec
    prev = t0
    for k, (_, t_k) in enumerate(records):
        accumulated = {}
        for chi, _ in records[k:]:
            for lead, val in chi.items():
                accumulated[lead] = accumulated.get(lead, 0.0) + val
        state = propagate(dl, accumulated, t_k - prev, state)
        prev = t_k
    return dl.trace(state)


def _integrated_current(dl, superop, span, rho0_vec):
    """integral_0^span Tr{superop e^{L s} rho0} ds via one augmented expm."""
    n = dl.base.shape[0]
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    m[:n, :n] = dl.base
    m[:n, n:] = np.eye(n)
    block = expm(m, span)[:n, n:]
    return (dl.trace_vec.conj() @ (superop @ (block @ rho0_vec))).real


def mean_transferred(dl, lead, quantum_weight, t, response, rho0_vec, t0=0.0,
                     spec=DEFAULT_QUAD_SPEC):
    """Mean transferred quanta at ``lead`` within [t0, t] under the given
    detection response."""
    span = t - t0
    if span < 0.0:
        raise ValueError("t must be >= t0")
    if span == 0.0:
        return 0.0
    sup = dl.current_superop(lead, quantum_weight)
    if response.kind == "delta":
        return float(_integrated_current(dl, sup, span, rho0_vec))

    def outer(s_arr):
        out = np.empty_like(np.asarray(s_arr, dtype=float), dtype=complex)
        for i, s in enumerate(np.atleast_1d(s_arr)):
            inner = _integrated_current(dl, sup, s - t0, rho0_vec)
            out[i] = response.weight(t - s, span) * inner
        return out

    val = integrate_real_line(outer, 0.5 * (t0 + t), spec,
                              scale=span / (2.0 * spec.window_halfwidth))
    return float(val.real)


def current_via_fcs(dl, lead, quantum_weight, t, response, rho0_vec, t0=0.0,
                    spec=DEFAULT_QUAD_SPEC):
    """d<x_lead>/dt under the detection response; the delta case reduces to
    Tr{current_superop rho(t)}."""
    span = t - t0
    if span < 0.0:
        raise ValueError("t must be >= t0")
    sup = dl.current_superop(lead, quantum_weight)
    if response.kind == "delta":
        state = propagate(dl, {}, span, rho0_vec)
        return float(dl.expect(sup, state).real)

    def integrand(s_arr):
        out = np.empty_like(np.asarray(s_arr, dtype=float), dtype=complex)
        for i, s in enumerate(np.atleast_1d(s_arr)):
            state = propagate(dl, {}, s - t0, rho0_vec)
            out[i] = response.weight(t - s, span) * dl.expect(sup, state)
        return out

    val = integrate_real_line(integrand, 0.5 * (t0 + t), spec,
                              scale=span / (2.0 * spec.window_halfwidth))
    return float(val.real)


def two_time_correlation_via_fcs(dl, alpha, alphap, t, t_prime, response,
                                 rho0_vec, t0=0.0, spec=DEFAULT_QUAD_SPEC):
    """Two-time current correlation <Delta I_alpha(t) Delta I_alphap(t')>.

    Returns (delta_weight, regular): the white-noise weight (activity at the
    later time; auto-correlation only) and the regular part with the
    mean-current product subtracted.
    """
    if t - t0 < 0.0 or t_prime - t0 < 0.0:
        raise ValueError("times must be >= t0")
    i_a = dl.current_superop(alpha, "particle")
    i_ap = dl.current_superop(alphap, "particle")
    if response.kind != "delta":
        return _two_time_window(dl, alpha, alphap, t, t_prime, response,
                                rho0_vec, t0, spec)
    t_late, t_early = max(t, t_prime), min(t, t_prime)
    sup_late, sup_early = (i_a, i_ap) if t >= t_prime else (i_ap, i_a)
    state_early = propagate(dl, {}, t_early - t0, rho0_vec)
    chained = expm(dl.base, t_late - t_early) @ (sup_early @ state_early)
    ordered = dl.expect(sup_late, chained).real
    mean_a = dl.expect(i_a, propagate(dl, {}, t - t0, rho0_vec)).real
    mean_ap = dl.expect(i_ap, propagate(dl, {}, t_prime - t0, rho0_vec)).real
    regular = ordered - mean_a * mean_ap
    weight = 0.0
    if alpha == alphap:
        act = dl.activity_superop(alpha, "particle")
        weight = dl.expect(act, propagate(dl, {}, t_late - t0, rho0_vec)).real
    return float(weight), float(regular)


def _two_time_window(dl, alpha, alphap, t, t_prime, response, rho0_vec, t0,
                     spec):
    """Window-response correlation: nested quadrature of the three-term
    jump-counting formula."""
    i_a = dl.current_superop(alpha, "particle")
    i_ap = dl.current_superop(alphap, "particle")
    act = dl.activity_superop(alpha, "particle")
    span, span_p = t - t0, t_prime - t0

    def weight_pair(s, sp):
        return (response.weight(t - s, span)
                * response.weight(t_prime - sp, span_p))

    def ordered_term(s, sp):
        early, late = (s, sp) if sp >= s else (sp, s)
        sup_early, sup_late = (i_a, i_ap) if sp >= s else (i_ap, i_a)
        state = propagate(dl, {}, early - t0, rho0_vec)
        chained = expm(dl.base, late - early) @ (sup_early @ state)
        return dl.expect(sup_late, chained).real

    def inner(s):
        def f(sp_arr):
            return np.array([weight_pair(s, sp) * ordered_term(s, sp)
                             for sp in np.atleast_1d(sp_arr)], dtype=complex)
        return integrate_real_line(
            f, 0.5 * (t0 + t_prime), spec,
            scale=span_p / (2.0 * spec.window_halfwidth)).real

    def outer(s_arr):
        return np.array([inner(s) for s in np.atleast_1d(s_arr)],
                        dtype=complex)

    correlation = integrate_real_line(
        outer, 0.5 * (t0 + t), spec,
        scale=span / (2.0 * spec.window_halfwidth)).real

    delta_term = 0.0
    if alpha == alphap:
        state_p = propagate(dl, {}, span_p, rho0_vec)
        act_val = dl.expect(act, state_p).real

        def f_act(s_arr):
            s = np.atleast_1d(np.asarray(s_arr, dtype=float))
            return (response.weight(t - s, span)
                    * response.weight(t_prime - s, span_p) * act_val).astype(complex)

        delta_term = integrate_real_line(
            f_act, 0.5 * (t0 + t), spec,
            scale=span / (2.0 * spec.window_halfwidth)).real

    mean_a = current_via_fcs(dl, alpha, "particle", t, response, rho0_vec,
                             t0, spec)
    mean_ap = current_via_fcs(dl, alphap, "particle", t_prime, response,
                              rho0_vec, t0, spec)
    return float(delta_term), float(correlation - mean_a * mean_ap)
