"""Resolutions of the identity and their action on test functions.

Four regularizations appear across the catalog:

* razl      — full-line momentum integral plus the discrete (Jordan-pair or
              two-level) contribution; complete as it stands for JordanBound
              and TwoLevel, whose excluded momenta are off the real axis.
* deformed  — contour integral with semicircular detours (default downward)
              around real excluded momenta.
* reduced   — punctured real-axis integral minus the 1/(pi eps) counterterm;
              the identity on test functions decaying faster than |x|^(-1).
* extended  — reduced with the counterterm softened by the 2 sin^2 factor,
              which restores plain square-integrable test functions (psi0
              itself included).

Applying a kernel to a test function always goes moment-first: Phi(k) =
(psi(.;k), phi) is assembled on the momentum nodes via the separable bracket,
then the outer k-integral is one weighted matrix product.  Test functions
that only decay like 1/x (the threshold and in-continuum eigenfunctions) get
their moments completed by analytic tails: the integrand is expanded in an
oscillatory Laurent series sum c_(m,p) exp(i m alpha x) (x-z)^(-p) and each
term is integrated along a vertical rotation where it decays exponentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .models import (
    bound_states,
    continuum_fields,
    continuum_matrix,
    continuum_poles,
    continuum_scalars,
)
from .quadrature import (
    ContourPath,
    composite_nodes,
    integrate_contour,
    integrate_interval,
    integrate_real_line,
)

_SQRT2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# oscillatory Laurent algebra: {(m, p): c} stands for sum of
# c * exp(i m w x) * (x - z)^(-p), with w the model's mode frequency.


def _mode_mul(A, B, pmax):
    out = {}
    for (m1, p1), c1 in A.items():
        for (m2, p2), c2 in B.items():
            p = p1 + p2
            if p > pmax:
                continue
            key = (m1 + m2, p)
            out[key] = out.get(key, 0.0) + c1 * c2
    return out


def _mode_add(A, B):
    out = dict(A)
    for key, c in B.items():
        out[key] = out.get(key, 0.0) + c
    return out


def _mode_scale(A, s):
    return {key: s * c for key, c in A.items()}


def _inv_w_modes(params, pmax):
    """1/W as an oscillatory Laurent series (ContinuumBS or Threshold)."""
    if params.model_id == "Threshold":
        return {(0, 1): 1.0}
    a = params.alpha.real
    # 1/W = q sum_j (-s q)^j, q = 1/(2a(x-z)), s = sin(2ax) in half-mode units
    q = {(0, 1): 1.0 / (2 * a)}
    s = {(2, 0): 1.0 / 2j, (-2, 0): -1.0 / 2j}
    minus_sq = _mode_scale(_mode_mul(s, q, pmax), -1.0)
    term = dict(q)
    total = dict(q)
    for _ in range(pmax):
        term = _mode_mul(term, minus_sq, pmax)
        if not term:
            break
        total = _mode_add(total, term)
    return total


def _state_modes(params, pmax=8):
    """Oscillatory Laurent data for psi0, a = W'/W and b = W''/2W."""
    invw = _inv_w_modes(params, pmax)
    if params.model_id == "Threshold":
        psi0 = dict(invw)
        a = {(0, 1): 1.0}
        b = {}
        return psi0, a, b
    al = params.alpha.real
    cos1 = {(1, 0): 0.5, (-1, 0): 0.5}
    wp = {(0, 0): 2 * al, (2, 0): al, (-2, 0): al}
    wpp = {(2, 0): -4 * al * al / 2j, (-2, 0): 4 * al * al / 2j}
    psi0 = _mode_mul(cos1, invw, pmax)
    a = _mode_mul(wp, invw, pmax)
    b = _mode_scale(_mode_mul(wpp, invw, pmax), 0.5)
    return psi0, a, b


def _mode_unit(params):
    return params.alpha.real if params.model_id == "ContinuumBS" else 0.0


def _osc_tail_batch(mu, z, p, L, side):
    """Tails of exp(i mu x)(x-z)^(-p) beyond +-L, vectorized over mu.

    Right side, mu > 0: rotate up, x = L + it; mu < 0: rotate down.  The
    substitution t = u/|mu| turns every case into a fixed smooth integral of
    exp(-u) against a rational factor.  mu = 0 entries (p >= 2) are exact.
    The left side maps onto the right one through x -> -x.
    """
    mu = np.asarray(mu, dtype=float)
    if side == "left":
        return (-1.0) ** p * _osc_tail_batch(-mu, -z, p, L, "right")
    out = np.zeros(mu.shape, dtype=complex)
    zero = mu == 0.0
    if np.any(zero):
        if p < 2:
            raise ParameterError("non-oscillatory tail needs p >= 2")
        out[zero] = (L - z) ** (1 - p) / (p - 1)
    live = ~zero
    if np.any(live):
        m = mu[live]
        s = np.sign(m)
        # geometric edges resolve the rational factor's u ~ |mu| L knee for
        # every mu scale with one fixed panel set
        edges = np.concatenate([[0.0], 45.0 * 2.0 ** np.arange(-26.0, 1.0)])
        u, w = _panelize(edges)
        t = u[None, :] / np.abs(m)[:, None]
        vals = np.exp(-u)[None, :] * (L + 1j * s[:, None] * t - z) ** (-p)
        integral = (vals * w[None, :]).sum(axis=1) / np.abs(m)
        out[live] = 1j * s * np.exp(1j * m * L) * integral
    return out


def _moment_tails(params, modes, kshift, L):
    """Tail part of integral exp(i k x) * (mode sum) dx for each k in kshift.

    kshift is the plane-wave frequency added on top of each mode's own
    exp(i m w x) factor.
    """
    kshift = np.asarray(kshift, dtype=float)
    unit = _mode_unit(params)
    total = np.zeros(kshift.shape, dtype=complex)
    for (m, p), c in modes.items():
        if p == 0:
            raise ParameterError("non-decaying mode term in tail expansion")
        mu = kshift + unit * m
        total += c * (
            _osc_tail_batch(mu, params.z, p, L, "right")
            + _osc_tail_batch(mu, params.z, p, L, "left")
        )
    return total


# ---------------------------------------------------------------------------
# momentum grids


def _real_punctures(params):
    return tuple(
        complex(p).real for p in continuum_poles(params) if complex(p).imag == 0.0
    )


def _panelize(edges):
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    from .quadrature import _WGK, _XGK  # fixed 15-point rule

    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (center[:, None] + half[:, None] * _XGK[None, :]).ravel()
    w = (half[:, None] * _WGK[None, :]).ravel()
    return x, w


def _region_edges(lo, hi, geom_lo, geom_hi, eps, coarse):
    """Panel edges on [lo, hi], geometrically refined toward punctured ends."""
    left, right = [lo], [hi]
    step = eps
    while geom_lo and left[-1] + step < 0.5 * (lo + hi):
        left.append(left[-1] + step)
        if step >= coarse:
            break
        step *= 2.0
    step = eps
    while geom_hi and right[-1] - step > 0.5 * (lo + hi):
        right.append(right[-1] - step)
        if step >= coarse:
            break
        step *= 2.0
    inner_lo, inner_hi = left[-1], right[-1]
    n = max(1, math.ceil((inner_hi - inner_lo) / coarse))
    middle = np.linspace(inner_lo, inner_hi, n + 1)
    return np.unique(np.concatenate([left, middle, right[::-1]]))


def momentum_grid(params, K, eps=0.0, coarse=0.5):
    """Punctured momentum nodes/weights on [-K, K] for the outer k-integral.

    Real excluded momenta are cut out with half-width eps and approached by
    geometrically shrinking panels, so integrands as singular as (k-k0)^-2
    are still handled accurately by the fixed per-panel rule.
    """
    punct = sorted(_real_punctures(params))
    if punct and eps <= 0.0:
        raise ParameterError("punctured model needs eps > 0")
    bounds = [-K] + [p for p in punct if -K < p < K] + [K]
    xs, ws = [], []
    for i in range(len(bounds) - 1):
        lo_p, hi_p = bounds[i], bounds[i + 1]
        lo = lo_p + (eps if i > 0 else 0.0)
        hi = hi_p - (eps if i < len(bounds) - 2 else 0.0)
        edges = _region_edges(lo, hi, i > 0, i < len(bounds) - 2, eps, coarse)
        x, w = _panelize(edges)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


# ---------------------------------------------------------------------------
# moments Phi(k) = (psi(.;k), phi)


def _probe_extent(phi, floor=1e-16):
    xs = 2.0 ** np.arange(3, 11)
    mags = [float(np.max(np.abs(phi(np.array([x, -x]))))) for x in xs]
    top = max(max(mags), 1.0)
    for x, m in zip(xs, mags):
        if m < floor * top:
            return float(x)
    return float(xs[-1])


def _transform_triplet(params, phi_vals, xg, wg, k):
    """T0, Ta, Tb = weighted transforms of phi, a*phi, b*phi at momenta k."""
    a, b = continuum_fields(params, xg)
    out = []
    for vec in (phi_vals, a * phi_vals, b * phi_vals):
        coef = wg * vec
        vals = np.empty(k.shape, dtype=complex)
        step = 256
        for i in range(0, k.size, step):
            kk = k[i : i + step]
            vals[i : i + step] = coef @ np.exp(1j * xg[:, None] * kk[None, :])
        out.append(vals)
    return out


def _x_density(params):
    """Panels per unit length needed to resolve the bracket fields.

    The nearest complex zeros of the denominator sit about 1/(2 alpha) (or
    |Im z| at threshold) off the real axis; per-panel Gauss-Kronrod error
    decays with the singularity-distance/panel-width ratio, so the density
    scales with the inverse of that distance.
    """
    scale = abs(params.alpha) if params.model_id != "Threshold" else 0.0
    return 2.5 * max(1.0, 2.0 * scale, 1.0 / abs(params.z.imag))


def phi_moments(params, phi, k, *, extent=None, tail_modes=None, tail_L=150.0):
    """Phi(k) = integral psi(x;k) phi(x) dx on the given momentum nodes.

    Fast path: phi decays fast enough that a truncated x-grid suffices.  With
    ``tail_modes`` set (the oscillatory Laurent data of psi(.;k) * phi) the
    core is integrated on [-tail_L, tail_L] and completed analytically.
    """
    k = np.asarray(k, dtype=float)
    X = extent if extent is not None else _probe_extent(phi)
    if tail_modes is not None:
        X = tail_L
    kmax = float(np.max(np.abs(k))) if k.size else 1.0
    panels = max(
        24,
        math.ceil(2 * X * kmax / 14.0),
        math.ceil(2 * X * _x_density(params)),
    )
    xg, wg = composite_nodes(-X, X, panels)
    phi_vals = np.asarray(phi(xg), dtype=complex)
    T0, Ta, Tb = _transform_triplet(params, phi_vals, xg, wg, k)
    c0, g = continuum_scalars(params, k)
    out = (c0 * T0 + g * (1j * k * Ta - Tb)) / _SQRT2PI
    if tail_modes is not None:
        base, amode, bmode = tail_modes
        out = out + _moment_tails(params, base, k, X) / _SQRT2PI
        out = out + g * 1j * k * _moment_tails(params, amode, k, X) / _SQRT2PI
        out = out - g * _moment_tails(params, bmode, k, X) / _SQRT2PI
    return out


def psi0_moment_modes(params, pmax=8):
    """Laurent data of psi0, a psi0, b psi0 for moment tails."""
    psi0, a, b = _state_modes(params, pmax)
    return psi0, _mode_mul(a, psi0, pmax), _mode_mul(b, psi0, pmax)


# ---------------------------------------------------------------------------
# pointwise kernels


def _pair_integrand(params, x, xp):
    def f(k):
        k = np.asarray(k, dtype=complex)
        left = continuum_matrix(params, np.array([x]), k)[0]
        right = continuum_matrix(params, np.array([xp]), -k)[0]
        return left * right

    return f


def contour_kernel(params, x, xp, A, *, radius=0.1, orientation="down", tol=1e-10):
    """integral over L(A) of psi(x;k) psi(xp;-k) dk with semicircular detours."""
    dips = [(c, radius) for c in _real_punctures(params)]
    path = ContourPath.real_line_with_dips(A, dips, orientation=orientation)
    return complex(integrate_contour(_pair_integrand(params, x, xp), path, tol=tol).value)


def punctured_kernel(params, x, xp, eps, K, tol=1e-10):
    """Real-axis kernel with eps-half-width punctures at excluded momenta."""
    punct = sorted(_real_punctures(params))
    f = _pair_integrand(params, x, xp)
    bounds = [-K] + [p for p in punct if -K < p < K] + [K]
    total = 0.0 + 0.0j
    for i in range(len(bounds) - 1):
        lo = bounds[i] + (eps if i > 0 else 0.0)
        hi = bounds[i + 1] - (eps if i < len(bounds) - 2 else 0.0)
        total += integrate_interval(f, lo, hi, tol=tol / (len(bounds) - 1)).value
    return complex(total)


def discrete_kernel(params, x, xp):
    """Bound-sector part of the resolution: cross-paired for a Jordan cell."""
    scalar = np.ndim(x) == 0 and np.ndim(xp) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    if params.model_id == "JordanBound":
        p0, p1 = bound_states(params)
        out = p0(x) * p1(xp) + p1(x) * p0(xp)
    elif params.model_id == "TwoLevel":
        pp, pm = bound_states(params)
        out = pp(x) * pp(xp) + pm(x) * pm(xp)
    else:
        out = np.zeros(np.broadcast(x, xp).shape, dtype=complex)
    return complex(out[0]) if scalar else out


def counterterm_kernel(params, x, xp, eps, variant):
    """The 1/(pi eps) subtraction (reduced) or its sin^2-softened form (extended)."""
    if params.model_id not in ("Threshold", "ContinuumBS"):
        raise ParameterError("counterterms exist only for the punctured models")
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    psi0 = bound_states(params)[0]
    c = 1.0 if params.model_id == "Threshold" else 1.0 / params.alpha.real
    base = c / (math.pi * eps) * psi0(x) * psi0(xp)
    if variant == "reduced":
        return base
    if variant == "extended":
        return base * (1.0 - 2.0 * np.sin(0.5 * eps * (x - xp)) ** 2)
    raise ParameterError(f"unknown counterterm variant {variant!r}")


def kernel_residue(params, x, xp, center, radius=0.05, n=128):
    """(2 pi i)^-1 contour integral of the kernel on a small circle.

    Trapezoid on the circle is spectrally accurate for Laurent expansions;
    a vanishing residue certifies that up and down deformations agree.
    """
    f = _pair_integrand(params, x, xp)
    theta = 2.0 * math.pi * np.arange(n) / n
    kk = center + radius * np.exp(1j * theta)
    vals = f(kk) * radius * np.exp(1j * theta)
    return complex(vals.mean())


# ---------------------------------------------------------------------------
# applying a resolution to a test function


@dataclass(frozen=True)
class ApplyResult:
    """(RoI phi)(xp) against phi(xp), with named contributions."""

    xp: np.ndarray
    values: np.ndarray
    reference: np.ndarray
    sup_error: float
    pieces: dict


def _pole_fourier(z, p, mu):
    """Full-line integral of exp(i mu x)(x-z)^(-p) by residues (mu != 0)."""
    if mu == 0.0:
        return 0.0 if p >= 2 else None
    if mu * np.sign(z.imag) > 0:
        res = (1j * mu) ** (p - 1) * np.exp(1j * mu * z) / math.factorial(p - 1)
        return 2j * math.pi * np.sign(z.imag) * res
    return 0.0 + 0.0j


def _psi0_cos_moment(params, eps, tol=1e-11):
    """M(+-) = integral exp(+-i eps x) psi0^2 dx, tails done analytically."""
    psi0 = bound_states(params)[0]
    if params.model_id == "Threshold":
        z = params.z
        out = []
        for mu in (eps, -eps):
            out.append(_pole_fourier(z, 2, mu))
        return out
    pmax = 8
    base, _, _ = _state_modes(params, pmax)
    sq = _mode_mul(base, base, pmax)
    L = 150.0
    out = []
    for mu in (eps, -eps):
        core = integrate_interval(
            lambda x: np.exp(1j * mu * x) * psi0(x) ** 2, -L, L, tol=tol,
            breakpoints=(0.0,),
        ).value
        out.append(core + complex(_moment_tails(params, sq, np.array([mu]), L)[0]))
    return out


def _phi_psi0_overlap(params, phi, tol=1e-11):
    """(phi, psi0) for a fast-decaying test function phi."""
    psi0 = bound_states(params)[0]
    return complex(
        integrate_real_line(lambda x: np.asarray(phi(x)) * psi0(x), tol=tol).value
    )


@dataclass(frozen=True)
class TestFunction:
    """A smooth probe with a declared weighted-square-integrability class.

    gamma_class is the weight exponent the function claims to support:
    integral |phi|^2 (1 + |x|^gamma) dx < infinity.  The claim is checked
    numerically by in_class, not taken on faith.
    """

    label: str
    fn: object
    gamma_class: float

    def __call__(self, x):
        return self.fn(x)


def _gaussian(c, s):
    return lambda x: np.exp(-0.5 * ((np.asarray(x) - c) / s) ** 2)


def gaussian_battery():
    """Five Gaussians: all three widths at the origin plus both shifted centers."""
    specs = [(0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (1.0, 1.0), (-1.0, 1.0)]
    return [
        TestFunction(label=f"gauss[c={c:g},s={s:g}]", fn=_gaussian(c, s), gamma_class=2.0)
        for c, s in specs
    ]


def slow_decay_battery():
    """Two algebraic-decay probes outside the gamma > 1 classes."""

    def make(power):
        return lambda x: (1.0 + np.asarray(x) ** 2) ** (-power)

    return [
        TestFunction(label="slow[p=0.6]", fn=make(0.6), gamma_class=1.0),
        TestFunction(label="slow[p=0.7]", fn=make(0.7), gamma_class=1.0),
    ]


def in_class(phi, gamma, *, base=8.0, levels=7, tol=1e-9):
    """Numerically decide membership of integral |phi|^2 (1+|x|^gamma) dx.

    Integrates the weighted square over geometrically growing annuli and
    inspects the increment ratio: a convergent tail must shrink by a
    uniform factor per doubling.  Returns (converged, last_ratio).
    """

    def f(x):
        x = np.asarray(x)
        return np.abs(np.asarray(phi(x))) ** 2 * (1.0 + np.abs(x) ** gamma)

    edges = base * 2.0 ** np.arange(levels + 1)
    shells = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        left = integrate_interval(f, -hi, -lo, tol=tol).value
        right = integrate_interval(f, lo, hi, tol=tol).value
        shells.append(float((left + right).real))
    core = float(integrate_interval(f, -base, base, tol=tol).value.real)
    floor = 1e-14 * max(core, 1e-300)
    ratios = [
        b / a for a, b in zip(shells[:-1], shells[1:]) if a > floor and b > floor
    ]
    if not ratios:
        return True, 0.0
    last = ratios[-1]
    return bool(last < 0.92), last


def probe_points():
    return np.array([-3.1, -1.2, 0.0, 0.9, 2.4])


def sine_functional(phi, xp, eps, tol=1e-10):
    """F_eps(phi)(xp) = integral sin(eps (x-xp))/(x-xp) phi(x) dx."""
    xp = float(xp)
    if eps == 0:
        return 0.0 + 0.0j

    def f(x):
        u = np.asarray(x) - xp
        return eps * np.sinc(eps * u / math.pi) * np.asarray(phi(x))

    return complex(integrate_real_line(f, tol=tol).value)


def sine_functional_bound(phi, eps, tol=1e-10):
    """The Bunyakovskii majorant sqrt(pi eps) ||phi||_2 of the sine functional."""
    norm2 = integrate_real_line(lambda x: np.abs(np.asarray(phi(x))) ** 2, tol=tol).value
    return math.sqrt(math.pi * eps * float(norm2.real))


def lemma_functional(which, phi, xp, eps, *, z=1j, tol=1e-10):
    """Evaluate one of the two vanishing-remainder functionals.

    "sine": the delta-family remainder sin(eps(x-xp))/(x-xp) smeared with
    phi; obeys the sqrt(eps) majorant of sine_functional_bound for any
    square-integrable phi.  "sine2": the counterterm remainder
    sin^2(eps(x-xp)/2)/(eps(x-z)(xp-z)) smeared with phi; vanishes with
    eps only on classes with gamma > 1.
    """
    xp = float(xp)
    if eps == 0:
        return 0.0 + 0.0j
    if which == "sine":
        return sine_functional(phi, xp, eps, tol=tol)
    if which != "sine2":
        raise ParameterError(f"unknown functional {which!r}")

    def f(x):
        x = np.asarray(x)
        s = np.sin(0.5 * eps * (x - xp)) ** 2
        return s * np.asarray(phi(x)) / (eps * (x - z) * (xp - z))

    return complex(integrate_real_line(f, tol=tol).value)


def apply_identity(params, phi, xp=None, *, variant="auto", eps=1e-3, K=None,
                   coarse=0.5, kappa=None, tol=1e-10):
    """Act with one resolution-of-identity variant on a test function.

    phi may be a callable (fast-decaying) or the string "psi0", which selects
    the model's threshold/in-continuum eigenfunction with analytic moment
    tails.  With ``kappa`` set (JordanBound) the discrete part uses the
    diagonal rotated-pair form instead of the cross-paired Jordan form.
    Returns the applied values on the xp grid together with phi(xp) and
    their sup distance.
    """
    mid = params.model_id
    if variant == "auto":
        variant = "razl" if mid in ("JordanBound", "TwoLevel") else "reduced"
    if xp is None:
        xp = np.linspace(-10.0, 10.0, 401)
    xp = np.asarray(xp, dtype=float)

    use_psi0 = isinstance(phi, str)
    if use_psi0:
        if phi != "psi0":
            raise ParameterError(f"unknown symbolic test function {phi!r}")
        if mid not in ("Threshold", "ContinuumBS"):
            raise ParameterError("symbolic psi0 tests exist for punctured models")
        psi0 = bound_states(params)[0]
        phi_fn = psi0.eval
        tail_modes = psi0_moment_modes(params)
    else:
        phi_fn = phi
        tail_modes = None

    if K is None:
        # moments of smooth test functions decay like exp(-k d0) with d0 the
        # distance of the nearest denominator zero from the real axis, not
        # like the test function's own transform
        K = 40.0 if use_psi0 else 32.0

    if variant == "razl":
        if mid not in ("JordanBound", "TwoLevel"):
            raise ParameterError("razl form exists for JordanBound and TwoLevel")
        k, w = momentum_grid(params, K, eps=0.0, coarse=coarse)
        Phi = phi_moments(params, phi_fn, k)
        cont = (w * Phi) @ continuum_matrix(params, xp, -k).T
        if kappa is not None:
            if mid != "JordanBound":
                raise ParameterError("rotated pairs exist for JordanBound only")
            from .models import rotated_pair

            P1, P2 = rotated_pair(params, kappa)
            disc = (
                _state_overlap(phi_fn, P1, tol) * P1(xp)
                + _state_overlap(phi_fn, P2, tol) * P2(xp)
            )
        elif mid == "JordanBound":
            p0, p1 = bound_states(params)
            disc = (
                _state_overlap(phi_fn, p1, tol) * p0(xp)
                + _state_overlap(phi_fn, p0, tol) * p1(xp)
            )
        else:
            pp, pm = bound_states(params)
            disc = (
                _state_overlap(phi_fn, pp, tol) * pp(xp)
                + _state_overlap(phi_fn, pm, tol) * pm(xp)
            )
        values = cont + disc
        pieces = {"continuum": cont, "discrete": disc}
    elif variant in ("reduced", "extended"):
        if mid not in ("Threshold", "ContinuumBS"):
            raise ParameterError("reduced/extended forms exist for punctured models")
        k, w = momentum_grid(params, K, eps=eps, coarse=coarse)
        Phi = phi_moments(params, phi_fn, k, tail_modes=tail_modes)
        values = (w * Phi) @ continuum_matrix(params, xp, -k).T
        psi0 = bound_states(params)[0]
        c = 1.0 if mid == "Threshold" else 1.0 / params.alpha.real
        if use_psi0:
            from .biortho import binorm_states

            overlap = binorm_states(params, psi0, psi0)
        else:
            overlap = _phi_psi0_overlap(params, phi_fn)
        pieces = {"punctured": values.copy()}
        if variant == "reduced":
            counter = c / (math.pi * eps) * overlap * psi0(xp)
        else:
            if use_psi0:
                Mp, Mm = _psi0_cos_moment(params, eps)
            else:
                Mp = complex(
                    integrate_real_line(
                        lambda x: np.exp(1j * eps * x) * np.asarray(phi_fn(x)) * psi0(x),
                        tol=tol,
                    ).value
                )
                Mm = complex(
                    integrate_real_line(
                        lambda x: np.exp(-1j * eps * x) * np.asarray(phi_fn(x)) * psi0(x),
                        tol=tol,
                    ).value
                )
            cos_moment = 0.5 * (np.exp(-1j * eps * xp) * Mp + np.exp(1j * eps * xp) * Mm)
            counter = c / (math.pi * eps) * cos_moment * psi0(xp)
        values = values - counter
        pieces["counterterm"] = counter
    else:
        raise ParameterError(f"unknown variant {variant!r}")

    reference = np.asarray(phi_fn(xp), dtype=complex)
    sup = float(np.max(np.abs(values - reference)))
    return ApplyResult(xp, values, reference, sup, pieces)


def _state_overlap(phi_fn, state, tol):
    return complex(
        integrate_real_line(lambda x: np.asarray(phi_fn(x)) * state(x), tol=tol).value
    )


@dataclass(frozen=True)
class StudyResult:
    eps: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    order: float


def convergence_study(params, phi, xp, *, variant, eps_seq=None, **kwargs):
    """Apply one kernel variant at a single point over a falling eps ladder.

    Reports the applied values, their distances to phi(xp), and the fitted
    log-log decay order of those distances (nan when the error saturates,
    e.g. when the kernel annihilates rather than reproduces).
    """
    if eps_seq is None:
        eps_seq = np.geomspace(1e-1, 1e-4, 4)
    eps_seq = np.asarray(eps_seq, dtype=float)
    if np.any(np.diff(eps_seq) >= 0):
        raise ParameterError("eps sequence must decrease")
    values, errors = [], []
    for eps in eps_seq:
        res = apply_identity(params, phi, np.array([xp], dtype=float),
                             variant=variant, eps=float(eps), **kwargs)
        values.append(complex(res.values[0]))
        errors.append(abs(complex(res.values[0]) - complex(res.reference[0])))
    errors = np.array(errors)
    if np.all(errors > 0) and errors[-1] < 0.5 * errors[0]:
        order = float(np.polyfit(np.log(eps_seq), np.log(errors), 1)[0])
    else:
        order = float("nan")
    return StudyResult(eps=eps_seq, values=np.array(values), errors=errors,
                       order=order)
