"""Bilinear pairings: binorms, gram matrices, smeared continuum orthonormality.

The pairing throughout is (f, g) = integral of f(x) g(x) dx with NO complex
conjugation — the bilinear form under which the catalog states are mutually
orthonormal (and sometimes self-orthogonal).  Exponentially decaying pairs go
straight to the adaptive real-line rule; rational and trigonometric/rational
pairs (Threshold, ContinuumBS) are completed with explicit tail integrals,
rotating oscillatory tails onto vertical lines where they decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .models import (
    ModelParams,
    bound_states,
    continuum_matrix,
    continuum_poles,
    denominator,
    rotated_pair,
    threshold_chain,
)
from .quadrature import composite_nodes, integrate_interval, integrate_real_line


def binorm(f, g, tol=1e-10, decay_hint=None):
    """(f, g) over the real line for integrands the decay probe can certify."""
    res = integrate_real_line(lambda x: np.asarray(f(x)) * np.asarray(g(x)), tol=tol,
                              decay_hint=decay_hint)
    return complex(res.value)


# ---------------------------------------------------------------------------
# analytic tails


def _osc_tail_right(mu, z, p, L, tol=1e-13):
    """integral_L^inf exp(i mu x) (x - z)^(-p) dx, |L| well clear of Re z.

    mu = 0 needs p >= 2 and is exact; otherwise the ray is rotated vertically
    (up for mu > 0, down for mu < 0) where the integrand decays like
    exp(-|mu| t).
    """
    if mu == 0.0:
        if p < 2:
            raise ParameterError("non-oscillatory tail needs p >= 2")
        return (L - z) ** (1 - p) / (p - 1)
    s = 1.0 if mu > 0 else -1.0

    def g(t):
        return np.exp(-abs(mu) * t) * (L + 1j * s * t - z) ** (-p)

    T = 40.0 / abs(mu)
    res = integrate_interval(g, 0.0, T, tol=tol)
    return 1j * s * np.exp(1j * mu * L) * res.value


def _osc_tail_left(mu, z, p, L, tol=1e-13):
    """integral_-inf^-L exp(i mu x) (x - z)^(-p) dx via x -> -x."""
    return (-1.0) ** p * _osc_tail_right(-mu, -z, p, L, tol)


def _sin_power_modes(j):
    """sin(w)^j = (2i)^(-j) sum_r C(j,r) (-1)^r e^{i(j-2r)w}; returns [(m, c_m)]."""
    return [
        (j - 2 * r, math.comb(j, r) * (-1) ** r / (2j) ** j) for r in range(j + 1)
    ]


def _cbs_cross_tail(params, L, side):
    """Tail of psi0*psi1 for ContinuumBS beyond |x| = L.

    The product splits exactly as W'/(16 a^3 W^2) + u/(8 a^2 (1+u)^2) with
    u = sin(2ax)/(2a(x-z)); the first term integrates in closed form, the
    second is expanded to six orders of u with vertical-line oscillatory tails.
    """
    a = params.alpha.real
    z = params.z
    W = denominator(params).eval
    if side == "right":
        total = 1.0 / (16 * a**3 * W(np.array([L]))[0])
        osc = _osc_tail_right
    else:
        total = -1.0 / (16 * a**3 * W(np.array([-L]))[0])
        osc = _osc_tail_left
    for j in range(1, 7):
        dj = ((-1) ** (j + 1)) * j / (8 * a**2 * (2 * a) ** j)
        for m, cm in _sin_power_modes(j):
            total += dj * cm * osc(2.0 * a * m, z, j, L)
    return total


def binorm_states(params, s1, s2, tol=1e-10):
    """(s1, s2) for catalog bound/associated states, tails completed analytically.

    Raises ParameterError for the ContinuumBS associated-associated pair, whose
    product does not decay (no unregularized binorm exists).
    """
    mid = params.model_id
    if mid in ("JordanBound", "TwoLevel"):
        return binorm(s1.eval, s2.eval, tol)
    if mid == "Threshold":
        chain = {f"psi{j}": cp for j, cp in enumerate(threshold_chain(params))}
        (c1, p1), (c2, p2) = chain[s1.label], chain[s2.label]
        m = p1 + p2
        L = 50.0
        core = integrate_interval(lambda x: s1(x) * s2(x), -L, L, tol=tol / 2)
        z = params.z
        anti = lambda x: c1 * c2 * (x - z) ** (1 - m) / (1 - m)  # noqa: E731
        return complex(core.value - anti(L) + anti(-L))
    labels = {s1.label, s2.label}
    L = 200.0
    if labels == {"psi0"}:
        W = denominator(params).eval
        a = params.alpha.real
        core = integrate_interval(lambda x: s1(x) * s2(x), -L, L, tol=tol / 2)
        return complex(
            core.value
            + 1.0 / (4 * a * W(np.array([L]))[0])
            - 1.0 / (4 * a * W(np.array([-L]))[0])
        )
    if labels == {"psi0", "psi1"}:
        core = integrate_interval(lambda x: s1(x) * s2(x), -L, L, tol=tol / 2)
        return complex(
            core.value
            + _cbs_cross_tail(params, L, "right")
            + _cbs_cross_tail(params, L, "left")
        )
    raise ParameterError(
        "the ContinuumBS associated-associated product does not decay; only"
        " regularized pairings exist for it"
    )


# ---------------------------------------------------------------------------
# gram matrices


def expected_gram(params):
    """(expected matrix, asserted mask) for the model's bound-state pairings.

    Unasserted entries (reported-only, or divergent for ContinuumBS) carry nan
    in the expected matrix and False in the mask.
    """
    mid = params.model_id
    if mid == "JordanBound":
        return np.array([[0.0, 1.0], [1.0, 0.0]]), np.full((2, 2), True)
    if mid == "TwoLevel":
        return np.eye(2), np.full((2, 2), True)
    if mid == "Threshold":
        m = (params.n - 1) // 2 + 1
        return np.zeros((m, m)), np.full((m, m), True)
    # ContinuumBS: both pairings with psi0 vanish; (psi1, psi1) does not exist
    return (
        np.array([[0.0, 0.0], [0.0, math.nan]]),
        np.array([[True, True], [True, False]]),
    )


@dataclass(frozen=True)
class GramReport:
    labels: tuple
    matrix: np.ndarray
    expected: np.ndarray
    asserted: np.ndarray
    max_deviation: float


def gram(params, kappa=None, tol=1e-10):
    """Pairwise binorm matrix of the bound sector (or the rotated pair).

    With ``kappa`` set (JordanBound only) the kappa-rotated pair is paired
    instead and the expected matrix is the 2x2 identity.
    """
    if kappa is not None:
        states = rotated_pair(params, kappa)
        expected = np.eye(2, dtype=complex)
        asserted = np.full((2, 2), True)
    else:
        states = bound_states(params)
        expected, asserted = expected_gram(params)
    m = len(states)
    out = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(i, m):
            if kappa is not None:
                val = binorm(states[i].eval, states[j].eval, tol)
            else:
                try:
                    val = binorm_states(params, states[i], states[j], tol)
                except ParameterError:
                    val = complex(math.nan, math.nan)
            out[i, j] = out[j, i] = val
    dev = 0.0
    for i in range(m):
        for j in range(m):
            if asserted[i, j]:
                dev = max(dev, abs(out[i, j] - expected[i, j]))
    return GramReport(tuple(s.label for s in states), out, np.asarray(expected), asserted, dev)


# ---------------------------------------------------------------------------
# smeared continuum orthonormality


def _continuum_weight(params, k):
    """Momentum weight making the smeared states regular at excluded points."""
    mid = params.model_id
    if mid == "Threshold":
        return 1j * k
    if mid == "ContinuumBS":
        a = params.alpha.real
        return k * k - a * a
    return np.ones_like(np.asarray(k, dtype=complex))


@dataclass(frozen=True)
class SmearReport:
    value: complex
    target: complex
    abs_error: float
    rel_error: float


def smeared_orthonormality(params, k_a, k_b, sigma=0.2, tol=1e-9):
    """Check (F_a, F_b) = integral a(k) b(-k) w(k) w(-k) dk.

    F_a(x) = integral a(k) w(k) psi(x;k) dk with Gaussian amplitude a centered
    at k_a (and likewise b at k_b); the right side is what the distributional
    orthonormality (psi_k, psi_k') = delta(k + k') predicts.  Amplitude
    supports are truncated at eight sigma and must stay clear of excluded
    momenta.
    """
    half = 8.0 * sigma
    for pole in continuum_poles(params):
        pc = complex(pole)
        if pc.imag == 0.0:
            for c in (k_a, k_b):
                if abs(c - pc.real) < half + 2.0 * sigma:
                    raise ParameterError(
                        f"amplitude at {c} overlaps excluded momentum {pc.real}"
                    )

    # the spatial envelope is exp(-sigma^2 x^2 / 2) per packet, so everything
    # lives inside |x| <= X; the k-rule needs enough panels that each one
    # resolves exp(ikx) across that whole window (theta = dk*X/2 <= 8)
    X = 30.0 / sigma
    panels = max(12, math.ceil(2 * half * X / 16.0))

    def make_packet(center):
        nodes, wts = composite_nodes(center - half, center + half, panels)
        amp = np.exp(-((nodes - center) ** 2) / (2 * sigma**2))
        coef = wts * amp * _continuum_weight(params, nodes)

        def F(x):
            return continuum_matrix(params, x, nodes) @ coef

        return F

    Fa, Fb = make_packet(k_a), make_packet(k_b)
    value = complex(
        integrate_interval(lambda x: Fa(x) * Fb(x), -X, X, tol=tol, breakpoints=(0.0,)).value
    )

    lo = max(k_a - half, -k_b - half)
    hi = min(k_a + half, -k_b + half)
    if lo >= hi:
        target = 0.0 + 0.0j
    else:

        def overlap(k):
            ak = np.exp(-((k - k_a) ** 2) / (2 * sigma**2))
            bk = np.exp(-((-k - k_b) ** 2) / (2 * sigma**2))
            return ak * bk * _continuum_weight(params, k) * _continuum_weight(params, -k)

        target = complex(integrate_interval(overlap, lo, hi, tol=tol).value)
    abs_err = abs(value - target)
    return SmearReport(value, target, abs_err, abs_err / max(abs(target), 1.0))
