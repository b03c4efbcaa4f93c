"""Closed-form catalog of four exactly solvable non-Hermitian models.

Each entry is a Schrödinger operator h = -d²/dx² + V(x) on the real line with
a complex-shifted coordinate (Im z != 0 keeps every denominator W away from
its real zeros).  The catalog exposes potentials, denominators, normalizable
eigen/associated functions, continuum states, and the analytic-continuation
limits that connect the discrete and continuous sectors.

    model_id     spectral feature
    -----------  -----------------------------------------------------------
    JordanBound  Jordan pair (eigen + associated) at lambda = -alpha**2
    TwoLevel     two simple levels lambda_pm = -(alpha+-beta)**2, coalescing
                 into the JordanBound pair as beta -> 0
    Threshold    centrifugal n(n+1)/(x-z)**2 family with a zero-energy chain
                 of self-orthogonal states at the continuum threshold
    ContinuumBS  bound state embedded in the continuum at lambda = +alpha**2

All evaluators are pure, vectorized over x, and safe far into the asymptotic
region (hyperbolic models are evaluated through tanh/sech or scaled
exponential sums, never bare sinh/cosh of large arguments).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError, ExcludedMomentum, ParameterError

MODEL_IDS = ("JordanBound", "TwoLevel", "Threshold", "ContinuumBS")

_SQRT2PI = math.sqrt(2.0 * math.pi)
_GUARD = 1e-12  # relative denominator guard


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter set for one catalog entry.

    alpha is the momentum scale (real > 0, except TwoLevel which also allows
    purely imaginary alpha with -i*alpha > 0), z the complex coordinate shift,
    beta the TwoLevel splitting, n the centrifugal order.
    """

    model_id: str
    alpha: complex = 1.0
    beta: float = 0.0
    z: complex = 1j
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "z", complex(self.z))
        if self.model_id not in MODEL_IDS:
            raise ParameterError(f"unknown model_id {self.model_id!r}")
        if self.z.imag == 0.0:
            raise ParameterError("Im z must be nonzero")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ParameterError("n must be a positive integer")
        a = self.alpha
        if self.model_id == "TwoLevel":
            real_ok = a.imag == 0.0 and a.real > 0.0
            imag_ok = a.real == 0.0 and a.imag > 0.0  # -i*alpha > 0
            if not (real_ok or imag_ok):
                raise ParameterError(
                    "TwoLevel alpha must be real positive or purely imaginary"
                    " with -i*alpha > 0"
                )
            b = float(self.beta)
            if b <= 0.0:
                raise ParameterError(
                    "TwoLevel beta must be positive (the beta=0 operator is the"
                    " JordanBound limit point, not a member of the family)"
                )
            if b >= math.pi / (2.0 * abs(self.z.imag)):
                raise ParameterError("beta must stay below pi/(2|Im z|)")
            if abs(b - abs(a)) < 1e-12:
                raise ParameterError("beta must differ from |alpha|")
        else:
            if self.beta != 0.0:
                raise ParameterError("beta is meaningful only for TwoLevel")
            if self.model_id in ("JordanBound", "ContinuumBS"):
                if a.imag != 0.0 or a.real <= 0.0:
                    raise ParameterError(f"{self.model_id} needs real alpha > 0")


@dataclass(frozen=True)
class Role:
    """Spectral role tag: kind in {eigen, associated, continuum}."""

    kind: str
    order: int = 0
    k: complex = 0.0

    @classmethod
    def eigen(cls):
        return cls("eigen")

    @classmethod
    def associated(cls, order):
        return cls("associated", order=order)

    @classmethod
    def continuum(cls, k):
        return cls("continuum", k=complex(k))


@dataclass(frozen=True)
class SpectralFunction:
    """Evaluatable state tagged with its role and spectral value."""

    role: Role
    lam: complex
    eval: Callable
    label: str = ""

    def __call__(self, x):
        return self.eval(x)


@dataclass(frozen=True)
class Denominator:
    """The function W(x) of a model, with an overflow-safe modulus scan."""

    eval: Callable
    log_abs: Callable

    def min_modulus(self, lo, hi, num=8001):
        x = np.linspace(lo, hi, num)
        return float(np.exp(np.min(self.log_abs(x))))


def _sinh_stable(u):
    # series below 1e-4 per the near-cancellation note; sinh is fine elsewhere
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-4
    return np.where(small, u * (1.0 + u * u / 6.0), np.sinh(np.where(small, 0.0, u)))


def _cosh_stable(u):
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-4
    return np.where(small, 1.0 + u * u / 2.0, np.cosh(np.where(small, 0.0, u)))


# ---------------------------------------------------------------------------
# scaled exponential sums (TwoLevel workhorse)


def _expsum(terms, x):
    """Evaluate sum_j c_j exp(r_j x + s_j) as (scaled sum, log scale).

    The true value is sum * exp(logscale); keeping the two factors apart
    avoids overflow for |Re(r x)| in the thousands.
    """
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    coeffs = np.array([t[0] for t in terms], dtype=complex)
    expo = np.array([t[1] for t in terms], dtype=complex)[:, None] * x[None, :]
    expo += np.array([t[2] for t in terms], dtype=complex)[:, None]
    logscale = expo.real.max(axis=0)
    total = (coeffs[:, None] * np.exp(expo - logscale[None, :])).sum(axis=0)
    return total, logscale


def _expsum_ratio(num_terms, den_terms, x):
    sn, mn = _expsum(num_terms, x)
    sd, md = _expsum(den_terms, x)
    _guard_scaled(sd)
    return (sn / sd) * np.exp(mn - md)


def _guard_scaled(scaled):
    # scaled sums are O(1) by construction; a tiny value means W nearly vanished
    if np.any(np.abs(scaled) < _GUARD):
        raise DomainError("denominator W(x) below guard threshold")


def _tl_terms(params):
    """Exponential-sum representations of W, W', W'' and the V numerator."""
    a, b, z = params.alpha, complex(params.beta), params.z
    W = [
        (0.5, 2 * a, 0.0),
        (-0.5, -2 * a, 0.0),
        (a / (2 * b), 2 * b, -2 * b * z),
        (-a / (2 * b), -2 * b, 2 * b * z),
    ]
    Wp = [
        (a, 2 * a, 0.0),
        (a, -2 * a, 0.0),
        (a, 2 * b, -2 * b * z),
        (a, -2 * b, 2 * b * z),
    ]
    Wpp = [
        (2 * a * a, 2 * a, 0.0),
        (-2 * a * a, -2 * a, 0.0),
        (2 * a * b, 2 * b, -2 * b * z),
        (-2 * a * b, -2 * b, 2 * b * z),
    ]
    # the printed numerator collapses to two cosh terms and a constant
    cp = (a - b) ** 2 / (8 * a * b)
    cm = -((a + b) ** 2) / (8 * a * b)
    Vnum = [
        (cp, 2 * (a + b), -2 * b * z),
        (cp, -2 * (a + b), 2 * b * z),
        (cm, 2 * (a - b), 2 * b * z),
        (cm, -2 * (a - b), -2 * b * z),
        (-1.0, 0.0, 0.0),
    ]
    return W, Wp, Wpp, Vnum


def _tl_psi_numerator(params, which):
    a, b, z = params.alpha, complex(params.beta), params.z
    if which == "+":
        c = math.sqrt(2.0) * 1j * a * np.sqrt(1.0 / b + 1.0 / a)
        rate = a - b
        shift = b * z
    else:
        c = math.sqrt(2.0) * a * np.sqrt(1.0 / b - 1.0 / a + 0j)
        rate = a + b
        shift = -b * z
    return [(c / 2.0, rate, shift), (c / 2.0, -rate, -shift)]


# ---------------------------------------------------------------------------
# per-model cores


def _jb_core(params, x):
    """tanh/sech reformulation: W = 2 cosh^2(ax) * D with D = t + a(x-z)s^2."""
    a = params.alpha.real
    x = np.asarray(x, dtype=float)
    t = np.tanh(a * x)
    s = 1.0 / np.cosh(np.clip(a * x, -700.0, 700.0))  # sech underflows past ~355 anyway
    D = t + a * (x - params.z) * s * s
    if np.any(np.abs(D) < _GUARD * (np.abs(t) + np.abs(a * (x - params.z)) * s * s + 1.0)):
        raise DomainError("denominator W(x) below guard threshold")
    return t, s, D


def _cbs_w(params, x):
    a = params.alpha.real
    x = np.asarray(x, dtype=float)
    W = np.sin(2 * a * x) + 2 * a * (x - params.z)
    if np.any(np.abs(W) < _GUARD * (1.0 + 2 * a * np.abs(x - params.z))):
        raise DomainError("denominator W(x) below guard threshold")
    return W


def denominator(params):
    """The model's W(x) (trivial W = x - z for Threshold)."""
    a, z = params.alpha, params.z
    if params.model_id == "JordanBound":
        ar = a.real

        def ev(x):
            x = np.asarray(x, dtype=float)
            return _sinh_stable(2 * ar * x) + 2 * ar * (x - z)

        def logabs(x):
            x = np.asarray(x, dtype=float)
            t, s, D = _jb_core(params, x)
            # log|W| = log 2 + 2 log cosh(ax) + log|D|
            u = np.abs(ar * x)
            logch = u + np.log1p(np.exp(-2 * u)) - math.log(2.0)
            return math.log(2.0) + 2 * logch + np.log(np.abs(D))

        return Denominator(ev, logabs)
    if params.model_id == "TwoLevel":
        W, _, _, _ = _tl_terms(params)

        def ev(x):
            s, m = _expsum(W, x)
            return s * np.exp(m)

        def logabs(x):
            s, m = _expsum(W, x)
            return np.log(np.abs(s)) + m

        return Denominator(ev, logabs)
    if params.model_id == "ContinuumBS":

        def ev(x):
            return _cbs_w(params, x)

        return Denominator(ev, lambda x: np.log(np.abs(ev(x))))
    # Threshold: the only denominator in sight is x - z itself

    def ev(x):
        return np.asarray(x, dtype=float) - z

    return Denominator(ev, lambda x: np.log(np.abs(ev(x))))


def potential(params, x):
    """V(x) of the selected model, per its printed closed form."""
    a, z = params.alpha, params.z
    if params.model_id == "JordanBound":
        t, s, D = _jb_core(params, x)
        ar = a.real
        return -8 * ar * ar * s * s * (ar * (np.asarray(x) - z) * t - 1.0) / (D * D)
    if params.model_id == "TwoLevel":
        W, _, _, Vnum = _tl_terms(params)
        sn, mn = _expsum(Vnum, x)
        sw, mw = _expsum(W, x)
        _guard_scaled(sw)
        return -16 * a * a * (sn / (sw * sw)) * np.exp(mn - 2 * mw)
    if params.model_id == "ContinuumBS":
        ar = a.real
        x = np.asarray(x, dtype=float)
        W = _cbs_w(params, x)
        num = ar * (x - z) * np.sin(2 * ar * x) + 2 * np.cos(ar * x) ** 2
        return 16 * ar * ar * num / (W * W)
    x = np.asarray(x, dtype=float)
    return params.n * (params.n + 1) / (x - z) ** 2


def _double_factorial(m):
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def bound_states(params):
    """Normalizable eigen/associated functions with roles and spectral values."""
    a, z = params.alpha, params.z
    if params.model_id == "JordanBound":
        ar = a.real
        lam = -ar * ar

        def psi0(x, p=params):
            _, s, D = _jb_core(p, x)
            return (2 * ar) ** 1.5 * s / (2.0 * D)

        def psi1(x, p=params):
            t, s, D = _jb_core(p, x)
            return s * (2 * ar * (np.asarray(x) - z) * t - 1.0) / (2.0 * math.sqrt(2 * ar) * D)

        return [
            SpectralFunction(Role.eigen(), lam, psi0, "psi0"),
            SpectralFunction(Role.associated(1), lam, psi1, "psi1"),
        ]
    if params.model_id == "TwoLevel":
        W, _, _, _ = _tl_terms(params)
        out = []
        for which, sign in (("+", 1.0), ("-", -1.0)):
            lam = -((a + sign * params.beta) ** 2)
            num = _tl_psi_numerator(params, which)

            def psi(x, num=num, W=W):
                return _expsum_ratio(num, W, x)

            out.append(SpectralFunction(Role.eigen(), lam, psi, f"psi{which}"))
        return out
    if params.model_id == "ContinuumBS":
        ar = a.real
        lam = ar * ar

        def psi0(x, p=params):
            x = np.asarray(x, dtype=float)
            return np.cos(ar * x) / _cbs_w(p, x)

        def psi1(x, p=params):
            x = np.asarray(x, dtype=float)
            W = _cbs_w(p, x)
            return (2 * ar * (x - z) * np.sin(ar * x) + np.cos(ar * x)) / (4 * ar * ar * W)

        return [
            SpectralFunction(Role.eigen(), lam, psi0, "psi0"),
            SpectralFunction(Role.associated(1), lam, psi1, "psi1"),
        ]
    # Threshold chain psi_j = c_j (x-z)^(2j-n), j = 0..floor((n-1)/2)
    n = params.n
    out = []
    for j in range(0, (n - 1) // 2 + 1):
        cj = _double_factorial(2 * (n - j) - 1) / (
            _double_factorial(2 * j) * _double_factorial(2 * n - 1)
        )

        def psi(x, cj=cj, p=n - 2 * j):
            return cj / (np.asarray(x, dtype=float) - z) ** p

        role = Role.eigen() if j == 0 else Role.associated(j)
        out.append(SpectralFunction(role, 0.0, psi, f"psi{j}"))
    return out


def threshold_chain(params):
    """[(c_j, p_j)] with psi_j = c_j (x-z)^(-p_j) for the Threshold chain."""
    if params.model_id != "Threshold":
        raise ParameterError("chain data exists only for Threshold")
    n = params.n
    out = []
    for j in range(0, (n - 1) // 2 + 1):
        cj = _double_factorial(2 * (n - j) - 1) / (
            _double_factorial(2 * j) * _double_factorial(2 * n - 1)
        )
        out.append((cj, n - 2 * j))
    return out


def rotated_pair(params, kappa=1.0):
    """JordanBound diagonal-resolution pair Psi1, Psi2 for the given kappa."""
    if params.model_id != "JordanBound":
        raise ParameterError("rotated pair exists only for JordanBound")
    if kappa == 0:
        raise ParameterError("kappa must be nonzero")
    psi0, psi1 = bound_states(params)
    s2 = math.sqrt(2.0)

    def big1(x):
        return (kappa * psi0(x) + psi1(x) / kappa) / s2

    def big2(x):
        return 1j * (kappa * psi0(x) - psi1(x) / kappa) / s2

    lam = psi0.lam
    return [
        SpectralFunction(Role.eigen(), lam, big1, f"Psi1(kappa={kappa})"),
        SpectralFunction(Role.eigen(), lam, big2, f"Psi2(kappa={kappa})"),
    ]


# ---------------------------------------------------------------------------
# continuum sector.  Every model's scattering state factorizes as
#   psi(x;k) = (1/sqrt(2 pi)) * [c0(k) + (i k a(x) - b(x)) g(k)] * exp(i k x)
# which keeps x- and k-dependence separable for fast kernel assembly.


def continuum_poles(params):
    """Momenta (possibly complex) where the closed form is singular."""
    a, b = params.alpha, params.beta
    if params.model_id == "JordanBound":
        return (1j * a, -1j * a)
    if params.model_id == "TwoLevel":
        return (1j * (a + b), -1j * (a + b), 1j * (a - b), -1j * (a - b))
    if params.model_id == "Threshold":
        return (0.0,)
    return (a.real, -a.real)


def _tl_branch_sqrt(params, k):
    """sqrt((k^2+alpha^2+beta^2)^2 - 4 alpha^2 beta^2) with cuts joining the
    branch points pairwise inside each half-plane and D(k) ~ k^2 at infinity."""
    k = np.asarray(k, dtype=complex)
    roots = [p for p in continuum_poles(params)]
    upper = [r for r in roots if complex(r).imag > 0]
    if len(upper) != 2:
        raise ParameterError("branch construction expects two upper roots")
    u1, u2 = (complex(r) for r in upper)
    m = 0.5 * (u1 + u2)
    d = 0.5 * (u1 - u2)

    def pair(kk, mm):
        w = kk - mm
        tiny = np.abs(w) < 1e-14 * max(1.0, abs(mm))
        w_safe = np.where(tiny, 1.0, w)
        out = w_safe * np.sqrt(1.0 - d * d / (w_safe * w_safe))
        direct = np.sqrt((kk - u1) * (kk - u2)) if mm is m else np.sqrt((kk + u1) * (kk + u2))
        return np.where(tiny, direct, out)

    return pair(k, m) * pair(k, -m)


def continuum_scalars(params, k):
    """(c0(k), g(k)) of the factorized continuum state; vectorized, complex ok."""
    k = np.asarray(k, dtype=complex)
    for pole in continuum_poles(params):
        if np.any(np.abs(k - pole) < 1e-12 * max(1.0, abs(pole))):
            raise ExcludedMomentum(f"momentum too close to excluded point {pole}")
    a = params.alpha
    if params.model_id == "JordanBound":
        g = 1.0 / (a * a + k * k)
        return np.ones_like(k), g
    if params.model_id == "TwoLevel":
        D = _tl_branch_sqrt(params, k)
        b = params.beta
        return (a * a + b * b + k * k) / D, 1.0 / D
    if params.model_id == "Threshold":
        if params.n != 1:
            raise ParameterError("continuum closed form implemented for n = 1 only")
        return np.ones_like(k), 1.0 / (k * k)
    g = 1.0 / (k * k - a * a)
    return np.ones_like(k), g


def continuum_fields(params, x):
    """(a(x), b(x)) = (W'/W, W''/(2W)) of the factorized continuum state."""
    if params.model_id == "JordanBound":
        t, _, D = _jb_core(params, x)
        ar = params.alpha.real
        return 2 * ar / D, 2 * ar * ar * t / D
    if params.model_id == "TwoLevel":
        W, Wp, Wpp, _ = _tl_terms(params)
        return _expsum_ratio(Wp, W, x), 0.5 * _expsum_ratio(Wpp, W, x)
    if params.model_id == "Threshold":
        if params.n != 1:
            raise ParameterError("continuum closed form implemented for n = 1 only")
        x = np.asarray(x, dtype=float)
        return 1.0 / (x - params.z), np.zeros_like(x, dtype=complex)
    ar = params.alpha.real
    x = np.asarray(x, dtype=float)
    W = _cbs_w(params, x)
    Wp = 2 * ar * np.cos(2 * ar * x) + 2 * ar
    Wpp = -4 * ar * ar * np.sin(2 * ar * x)
    return Wp / W, 0.5 * Wpp / W


def continuum_matrix(params, x, k):
    """psi(x_i; k_j) as an (len(x), len(k)) array; k may be complex."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    a, b = continuum_fields(params, x)
    c0, g = continuum_scalars(params, k)
    bracket = c0[None, :] + (1j * a[:, None] * k[None, :] - b[:, None]) * g[None, :]
    phase = np.exp(1j * x[:, None] * k[None, :])
    return bracket * phase / _SQRT2PI


def continuum_state(params, k):
    """Scattering state psi(.; k) at real non-excluded momentum."""
    kc = complex(k)
    if kc.imag != 0.0:
        raise ParameterError("continuum_state takes real momenta")
    continuum_scalars(params, kc)  # excluded-momentum check

    def ev(x, p=params, kv=kc):
        return continuum_matrix(p, x, np.array([kv]))[:, 0]

    return SpectralFunction(Role.continuum(kc), kc * kc, ev, f"psi(k={k})")


def regularized_bracket(params, x, k):
    """The pole-free products used in continuation limits.

    JordanBound: (k^2+alpha^2) psi; ContinuumBS: (k^2-alpha^2) psi;
    TwoLevel: D(k) psi; Threshold: -sqrt(2 pi) i k psi.  All reduce to a
    bracket times exp(ikx) with no momentum denominators.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = complex(k)
    a, b = continuum_fields(params, x)
    al = params.alpha
    phase = np.exp(1j * k * x)
    if params.model_id == "JordanBound":
        return ((k * k + al * al) + 1j * k * a - b) * phase / _SQRT2PI
    if params.model_id == "ContinuumBS":
        return ((k * k - al * al) + 1j * k * a - b) * phase / _SQRT2PI
    if params.model_id == "TwoLevel":
        bt = params.beta
        return ((al * al + bt * bt + k * k) + 1j * k * a - b) * phase / _SQRT2PI
    # Threshold: -sqrt(2 pi) * i k * psi = (1/(x-z) - i k) e^{ikx}
    return (a - 1j * k) * phase


def default_grid(params):
    """Uniform certification grid [-L, L], 8001 points."""
    if params.model_id == "Threshold":
        L = 40.0
    else:
        re = abs(params.alpha.real)
        if re > 0:
            L = max(40.0, 25.0 / re)
        else:
            L = max(40.0, 25.0 / params.beta)  # imaginary-alpha TwoLevel decays at rate beta
    return np.linspace(-L, L, 8001)


# ---------------------------------------------------------------------------
# analytic-continuation limits


def _limit_table(params):
    a, z = params.alpha, params.z
    states = bound_states(params)
    if params.model_id == "JordanBound":
        ar = a.real
        scale = math.sqrt(ar / math.pi)
        psi0, psi1 = states
        c_up = (1 - 2 * ar * z) / (4 * ar * ar)
        c_dn = (1 + 2 * ar * z) / (4 * ar * ar)
        return {
            "psi0+": (1j * ar, "value", -scale, psi0.eval),
            "psi0-": (-1j * ar, "value", scale, psi0.eval),
            "psi1+": (1j * ar, "deriv", -scale, lambda x: psi1(x) - c_up * psi0(x)),
            "psi1-": (-1j * ar, "deriv", scale, lambda x: psi1(x) - c_dn * psi0(x)),
        }
    if params.model_id == "ContinuumBS":
        ar = a.real
        s = 4j * ar * ar / _SQRT2PI
        psi0, psi1 = states
        c_m = (1 - 2j * ar * z) / (4 * ar * ar)
        c_p = (1 + 2j * ar * z) / (4 * ar * ar)
        return {
            "psi0-": (-ar, "value", -s, psi0.eval),
            "psi0+": (ar, "value", s, psi0.eval),
            "psi1-": (-ar, "deriv", -s, lambda x: psi1(x) + c_m * psi0(x)),
            "psi1+": (ar, "deriv", s, lambda x: psi1(x) + c_p * psi0(x)),
        }
    if params.model_id == "TwoLevel":
        b = params.beta
        psip, psim = states
        sp = 2j * a * b / math.sqrt(math.pi) * np.sqrt(1 / b + 1 / a)
        sm = 2 * a * b / math.sqrt(math.pi) * np.sqrt(1 / b - 1 / a + 0j)
        return {
            "psi_plus_upper": (1j * (a + b), "value", sp * np.exp(-b * z), psip.eval),
            "psi_plus_lower": (-1j * (a + b), "value", -sp * np.exp(b * z), psip.eval),
            "psi_minus_upper": (1j * (a - b), "value", -sm * np.exp(b * z), psim.eval),
            "psi_minus_lower": (-1j * (a - b), "value", sm * np.exp(-b * z), psim.eval),
        }
    psi0 = states[0]
    return {"psi0": (0.0, "value", 1.0, psi0.eval)}


@dataclass(frozen=True)
class LimitResult:
    fn: SpectralFunction  # extrapolated left side of the limit identity
    scale: complex
    sup_error: float
    stabilization: float


def continuation_limit(params, which, x=None, tol=1e-3, offsets=(1e-2, 1e-3, 1e-4)):
    """Evaluate one printed continuation limit by offset extrapolation.

    The momentum approaches its landing point through the printed offsets with
    first-order Richardson extrapolation; stabilization is measured on the
    half-window where exp(ikx) does not grow.  Raises ConvergenceError when
    the extrapolants disagree or the limit misses its bound-state target.
    """
    table = _limit_table(params)
    if which not in table:
        raise ParameterError(f"unknown limit {which!r}; options: {sorted(table)}")
    k0, mode, scale, target = table[which]
    k0 = complex(k0)
    if x is None:
        # exp(ik0 x) grows like exp(|Im k0| |x|) on one side, amplifying the
        # finite-offset error there; shrink the window to keep that in check
        w = 10.0 if k0.imag == 0.0 else 6.0 / max(1.0, abs(k0.imag))
        x = np.linspace(-w, w, 1201)
    x = np.asarray(x, dtype=float)

    def left_side(delta):
        if k0 == 0.0:
            k = delta
        else:
            k = k0 * (1.0 - delta / abs(k0))  # land along the ray toward k0
        if mode == "value":
            return regularized_bracket(params, x, k)
        h = delta / 8.0  # sideways step, analytic in k so any direction works
        fp = regularized_bracket(params, x, k + h)
        fm = regularized_bracket(params, x, k - h)
        return (fp - fm) / (2.0 * h) / (2.0 * k)

    vals = [left_side(d) for d in offsets]
    r = offsets[0] / offsets[1]
    rich1 = (r * vals[1] - vals[0]) / (r - 1.0)
    r2 = offsets[1] / offsets[2]
    rich2 = (r2 * vals[2] - vals[1]) / (r2 - 1.0)

    tgt = scale * np.asarray(target(x), dtype=complex)
    safe = (k0.imag * x) >= 0.0  # non-growing side of exp(ik0 x)
    norm = float(np.max(np.abs(tgt))) or 1.0
    stab = float(np.max(np.abs(rich2[safe] - rich1[safe]))) / norm
    if stab > 0.05:
        raise ConvergenceError(f"offset sequence did not stabilize (rel {stab:.2e})")
    sup_err = float(np.max(np.abs(rich2 - tgt)))
    if sup_err > tol * max(1.0, norm):
        raise ConvergenceError(
            f"extrapolated limit misses target: sup error {sup_err:.3e}"
        )
    limit_fn = SpectralFunction(
        Role.eigen(), k0 * k0, lambda xx: _reeval_limit(params, which, xx),
        f"limit[{which}]",
    )
    return LimitResult(limit_fn, scale, sup_err, stab)


def _reeval_limit(params, which, x, offsets=(1e-2, 1e-3, 1e-4)):
    table = _limit_table(params)
    k0, mode, _, _ = table[which]
    k0 = complex(k0)
    x = np.atleast_1d(np.asarray(x, dtype=float))

    def left_side(delta):
        k = delta if k0 == 0.0 else k0 * (1.0 - delta / abs(k0))
        if mode == "value":
            return regularized_bracket(params, x, k)
        h = delta / 8.0
        return (
            regularized_bracket(params, x, k + h) - regularized_bracket(params, x, k - h)
        ) / (2.0 * h) / (2.0 * k)

    vals = [left_side(d) for d in offsets]
    r2 = offsets[1] / offsets[2]
    return (r2 * vals[2] - vals[1]) / (r2 - 1.0)
