"""Gauss-Kronrod panel quadrature for intervals, the real line, and momentum contours.

All integrals in the package funnel through this module: binorm integrals on
the real axis, punctured/deformed momentum integrals for resolutions of the
identity, and probe circles for Green-function pole fits.  Error estimates are
absolute and intentionally conservative (embedded 7/15 difference per panel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SlowDecay, ToleranceNotMet

# 15-point Kronrod nodes (positive half) with embedded 7-point Gauss rule.
_XGK_HALF = np.array(
    [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
    ]
)
_WGK_HALF = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
    ]
)
_WGK_CENTER = 0.209482141084728
_WG_HALF = np.array([0.129484966168870, 0.279705391489277, 0.381830050505119])
_WG_CENTER = 0.417959183673469

# node order: -x0 .. -x6, 0, x6 .. x0 ; Gauss nodes sit at the odd positions
_XGK = np.concatenate([-_XGK_HALF, [0.0], _XGK_HALF[::-1]])
_WGK = np.concatenate([_WGK_HALF, [_WGK_CENTER], _WGK_HALF[::-1]])
_WG = np.concatenate([_WG_HALF, [_WG_CENTER], _WG_HALF[::-1]])


@dataclass(frozen=True)
class QuadResult:
    """Value, conservative absolute error estimate, and integrand evaluation count."""

    value: complex
    error: float
    evaluations: int


def composite_nodes(a, b, panels):
    """Fixed 15-point Kronrod nodes and weights on ``panels`` equal panels of [a, b].

    Meant for smooth integrands sampled once and reused (smearing amplitudes,
    separable kernel assembly); no error estimate is produced.
    """
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (center[:, None] + half[:, None] * _XGK[None, :]).ravel()
    w = (half[:, None] * _WGK[None, :]).ravel()
    return x, w


def _panel_apply(f, lo, hi):
    """Kronrod and Gauss sums on a batch of panels [lo_i, hi_i]."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = center[:, None] + half[:, None] * _XGK[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=complex).reshape(pts.shape)
    kron = (vals * _WGK).sum(axis=1) * half
    gauss = (vals[:, 1::2] * _WG).sum(axis=1) * half
    return kron, np.abs(kron - gauss)


def integrate_interval(f, a, b, tol=1e-10, *, breakpoints=(), max_panels=2 ** 14):
    """Integrate vectorized ``f`` over [a, b] to absolute tolerance ``tol``.

    Panels whose 7/15 discrepancy exceeds their width-share of the budget are
    bisected; raises ToleranceNotMet (carrying the best value) if the panel
    budget runs out first.
    """
    a, b = float(a), float(b)
    if not b > a:
        raise ParameterError(f"empty interval [{a}, {b}]")
    pts = sorted({a, b, *(float(p) for p in breakpoints if a < p < b)})
    lo = np.array(pts[:-1])
    hi = np.array(pts[1:])
    val, err = _panel_apply(f, lo, hi)
    evals = 15 * lo.size

    min_width = 1e-13 * max(1.0, abs(a), abs(b))
    for _ in range(64):
        total_err = float(err.sum())
        if total_err <= tol:
            return QuadResult(complex(val.sum()), total_err, evals)
        share = tol * (hi - lo) / (b - a)
        rounding_floor = 1e-16 * (np.abs(val) + 1.0)
        split = (err > np.maximum(share, rounding_floor)) & (hi - lo > min_width)
        if not split.any() or lo.size + split.sum() > max_panels:
            break
        mid = 0.5 * (lo[split] + hi[split])
        child_lo = np.concatenate([lo[split], mid])
        child_hi = np.concatenate([mid, hi[split]])
        child_val, child_err = _panel_apply(f, child_lo, child_hi)
        evals += 15 * child_lo.size
        lo = np.concatenate([lo[~split], child_lo])
        hi = np.concatenate([hi[~split], child_hi])
        val = np.concatenate([val[~split], child_val])
        err = np.concatenate([err[~split], child_err])
        order = np.argsort(lo)
        lo, hi, val, err = lo[order], hi[order], val[order], err[order]
    total_err = float(err.sum())
    if total_err <= tol:
        return QuadResult(complex(val.sum()), total_err, evals)
    exc = ToleranceNotMet(
        f"achieved {total_err:.3e} > requested {tol:.3e} on [{a}, {b}]"
    )
    exc.value = complex(val.sum())
    exc.error = total_err
    raise exc


def _decay_probe(f, p_hint=None):
    """Estimate (C, p) with |f(x)| <= C |x|^-p from dyadic probes.

    Returns (C, p, L_zero) where L_zero is the first octave at which the
    integrand underflowed to zero everywhere (None otherwise).
    """
    offsets = 1.0 + np.arange(6) / 6.0
    octs = []
    for j in range(3, 28):
        X = 2.0 ** j
        xs = np.concatenate([X * offsets, -X * offsets])
        m = float(np.max(np.abs(f(xs))))
        octs.append((X, m))
        if m == 0.0 and j >= 6:
            break
    xs_arr = np.array([x for x, _ in octs])
    ms_arr = np.array([m for _, m in octs])
    if ms_arr[-1] == 0.0:
        nz = np.nonzero(ms_arr)[0]
        L_zero = xs_arr[nz[-1] + 1] if nz.size else xs_arr[0]
        return 0.0, math.inf, L_zero
    if p_hint is None:
        # slope over the last two octaves of the probe window
        if ms_arr.size < 3:
            raise SlowDecay("not enough probe octaves to fit a decay exponent")
        tail = slice(-3, None)
        logs = np.log(ms_arr[tail])
        logx = np.log(xs_arr[tail])
        p = -np.polyfit(logx, logs, 1)[0]
        if p <= 1.05:
            raise SlowDecay(f"fitted decay exponent {p:.3f} <= 1")
    else:
        p = float(p_hint)
        if p <= 1.0:
            raise ParameterError(f"decay hint must exceed 1, got {p}")
    C = float(np.max(ms_arr * xs_arr ** p))
    return C, p, None


def integrate_real_line(f, tol=1e-10, decay_hint=None, *, max_L=1e9):
    """Integrate over the whole real line with a certified power-law tail bound.

    With no ``decay_hint`` the exponent is fitted from dyadic probes and
    SlowDecay is raised when it is not safely above 1.  The truncation L is
    chosen so the two tails together contribute less than tol/2.
    """
    C, p, L_zero = _decay_probe(f, decay_hint)
    if L_zero is not None:
        L, tail = float(L_zero), 0.0
    elif math.isinf(p):
        L, tail = 32.0, 0.0
    else:
        # 2 * C * L^(1-p) / (p-1) <= tol / 2
        L = (4.0 * C / ((p - 1.0) * tol)) ** (1.0 / (p - 1.0))
        L = min(max(L, 32.0), max_L)
        tail = 2.0 * C * L ** (1.0 - p) / (p - 1.0)
        if tail > tol:
            raise SlowDecay(
                f"tail bound {tail:.3e} above tolerance even at L={L:.3e}"
            )
    L = 2.0 ** math.ceil(math.log2(L))
    brk = [0.0]
    j = 0
    while 2.0 ** j < L:
        brk.extend([2.0 ** j, -(2.0 ** j)])
        j += 1
    res = integrate_interval(f, -L, L, tol=max(tol - tail, tol / 2), breakpoints=brk)
    return QuadResult(res.value, res.error + tail, res.evaluations)


@dataclass(frozen=True)
class ContourPath:
    """Piecewise momentum contour: straight segments and semicircular detours.

    ``pieces`` is a tuple of ("segment", a, b) with complex endpoints or
    ("semicircle", center, radius, orientation) where orientation "down"
    (the default deformation) passes below the real axis.
    """

    pieces: tuple

    def __post_init__(self):
        if not self.pieces:
            raise ParameterError("empty contour")
        prev_end = None
        for piece in self.pieces:
            kind = piece[0]
            if kind == "segment":
                _, a, b = piece
                start, end = complex(a), complex(b)
                if start == end:
                    raise ParameterError("zero-length segment")
            elif kind == "semicircle":
                _, c, r, orientation = piece
                if r <= 0:
                    raise ParameterError("semicircle radius must be positive")
                if orientation not in ("up", "down"):
                    raise ParameterError(f"unknown orientation {orientation!r}")
                start, end = complex(c) - r, complex(c) + r
            else:
                raise ParameterError(f"unknown contour piece {kind!r}")
            if prev_end is not None and abs(start - prev_end) > 1e-12 * max(
                1.0, abs(start)
            ):
                raise ParameterError("contour pieces are not connected")
            prev_end = end

    @classmethod
    def real_line_with_dips(cls, span, dips=(), orientation="down"):
        """[-span, span] on the real axis with semicircles around each dip center."""
        dips = sorted((float(c), float(r)) for c, r in dips)
        pieces = []
        pos = -float(span)
        for c, r in dips:
            if c - r < pos:
                raise ParameterError("overlapping or out-of-range dips")
            if c - r > pos:
                pieces.append(("segment", pos, c - r))
            pieces.append(("semicircle", c, r, orientation))
            pos = c + r
        if pos < span:
            pieces.append(("segment", pos, float(span)))
        return cls(tuple(pieces))


def integrate_contour(f, path, tol=1e-10):
    """Integrate vectorized ``f(k)`` along a ContourPath."""
    pieces = path.pieces
    per_piece = tol / len(pieces)
    total = 0.0 + 0.0j
    err = 0.0
    evals = 0
    for piece in pieces:
        if piece[0] == "segment":
            _, a, b = piece
            a, b = complex(a), complex(b)
            jac = b - a

            def g(t, a=a, jac=jac):
                return f(a + t * jac) * jac

            res = integrate_interval(g, 0.0, 1.0, tol=per_piece / max(abs(jac), 1.0))
            res = QuadResult(res.value, res.error * abs(jac), res.evaluations)
        else:
            _, c, r, orientation = piece
            c = complex(c)
            th0, th1 = (math.pi, 0.0) if orientation == "up" else (math.pi, 2 * math.pi)

            def g(th, c=c, r=r):
                w = r * np.exp(1j * th)
                return f(c + w) * 1j * w

            lo, hi = min(th0, th1), max(th0, th1)
            res = integrate_interval(g, lo, hi, tol=per_piece / r)
            sign = 1.0 if th1 > th0 else -1.0
            res = QuadResult(sign * res.value, res.error * r, res.evaluations)
        total += res.value
        err += res.error
        evals += res.evaluations
    return QuadResult(total, err, evals)


def _sinc_scaled(freq, delta):
    """sin(freq*delta)/delta with the removable singularity filled by series."""
    freq = float(freq)
    delta = np.asarray(delta, dtype=complex)
    w = freq * delta
    small = np.abs(w) < 1e-4
    safe = np.where(small, 1.0, delta)
    out = np.where(small, freq * (1.0 - w * w / 6.0), np.sin(w) / safe)
    return out


def closed_form_kernel(params, which, *, x, xp, A=None, eps=None):
    """Closed-form centrifugal-model kernels used as quadrature oracles.

    ``which`` is "full" (finite-window kernel, needs A) or "inner"
    (small-window kernel around the excluded momentum, needs eps).  Only the
    n=1 centrifugal model has these printed forms.
    """
    if getattr(params, "model_id", None) != "Threshold" or params.n != 1:
        raise ParameterError("closed-form kernels exist only for the n=1 centrifugal model")
    z = params.z
    x = np.asarray(x, dtype=complex)
    delta = x - xp
    pole = (x - z) * (xp - z)
    if which == "full":
        if A is None:
            raise ParameterError("full kernel needs the window half-width A")
        return (_sinc_scaled(A, delta) - np.cos(A * delta) / (A * pole)) / math.pi
    if which == "inner":
        if eps is None:
            raise ParameterError("inner kernel needs eps")
        sin_half = np.sin(0.5 * eps * delta)
        return (
            -1.0 / (math.pi * eps * pole)
            + _sinc_scaled(eps, delta) / math.pi
            + 2.0 * sin_half * sin_half / (math.pi * eps * pole)
        )
    raise ParameterError(f"unknown kernel form {which!r}")
