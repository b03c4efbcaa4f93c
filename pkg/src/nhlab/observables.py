"""Wave-packet expectation values over the threshold potential.

The packet is the superpartner image of a Gaussian,

    psi_eps = (-d/dx + 1/(x-z)) exp(-eps x^2 / 4)
            = (eps x / 2 + 1/(x-z)) exp(-eps x^2 / 4),

whose binorm and total energy collapse to Gaussian moments:

    (psi_eps, psi_eps)   = sqrt(pi/8)    eps^(1/2)      (exactly)
    (psi_eps, h psi_eps) = sqrt(9pi/128) eps^(3/2)      (exactly)

so <H>/binorm = (3/4) eps -> 0: the packet's mean energy vanishes even
though it never leaves the threshold's reach.  <V> has no such closed form
uniformly in eps; it is produced by quadrature, against which any printed
prefactor is judged.  The h-action used in the quadrature route is the
analytic one; a finite-difference consistency check guards it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ZeroDenominator
from .models import ModelParams, bound_states, potential
from .quadrature import integrate_interval, integrate_real_line

EXACT_BINORM_PREFACTOR = math.sqrt(math.pi / 8.0)
EXACT_ENERGY_PREFACTOR = math.sqrt(9.0 * math.pi / 128.0)


def _require_threshold(params):
    if params.model_id != "Threshold" or params.n != 1:
        raise ParameterError("packets are defined over Threshold with n=1")


def packet(params, eps):
    """The packet and its analytic h-image, as a pair of callables."""
    _require_threshold(params)
    z = params.z

    def psi(x):
        x = np.asarray(x, dtype=float)
        return (0.5 * eps * x + 1.0 / (x - z)) * np.exp(-0.25 * eps * x * x)

    def h_psi(x):
        x = np.asarray(x, dtype=float)
        g = np.exp(-0.25 * eps * x * x)
        quad = 0.5 * eps - 0.25 * eps * eps * x * x
        return (0.5 * eps * eps * x + quad * (0.5 * eps * x + 1.0 / (x - z))) * g

    return psi, h_psi


def packet_momentum_route(params, eps, x, tol=1e-12):
    """The packet evaluated through its momentum-integral form.

    Independent of the closed form: a plain Gaussian k-quadrature of
    (-ik + 1/(x-z)) exp(ikx - k^2/eps) / sqrt(pi eps).
    """
    _require_threshold(params)
    z = params.z
    x = float(x)

    def f(k):
        k = np.asarray(k, dtype=float)
        return (
            (-1j * k + 1.0 / (x - z))
            * np.exp(1j * k * x - k * k / eps)
            / math.sqrt(math.pi * eps)
        )

    return complex(integrate_real_line(f, tol=tol).value)


def kinetic_fd_route(params, eps, n=20001):
    """Kinetic energy by finite differences: integral psi (-psi'') dx.

    Does not touch the analytic h-image; the second derivative comes from
    the stencil and the integral from the trapezoid rule on a window wide
    enough for the Gaussian envelope to underflow the target accuracy.
    """
    from .diffop import second_derivative

    _require_threshold(params)
    psi, _ = packet(params, eps)
    half = 14.0 / math.sqrt(eps)
    x = np.linspace(-half, half, n)
    vals = psi(x).astype(complex)
    dd = second_derivative(vals, x[1] - x[0])
    return complex(np.trapezoid(-vals[4:-4] * dd, x[4:-4]))


def h_action_consistency(params, eps, half_width=None, n=4001):
    """Sup |FD(psi_eps) - analytic h psi_eps| over the packet's core."""
    from .diffop import second_derivative

    _require_threshold(params)
    psi, h_psi = packet(params, eps)
    if half_width is None:
        half_width = 6.0 / math.sqrt(eps)
    x = np.linspace(-half_width, half_width, n)
    step = x[1] - x[0]
    hf = -second_derivative(psi(x).astype(complex), step) + (
        potential(params, x) * psi(x)
    )[4:-4]
    return float(np.max(np.abs(hf - h_psi(x[4:-4]))))


@dataclass(frozen=True)
class PacketValues:
    epsilon: float
    binorm: complex
    ev_total: complex
    ev_potential: complex
    ev_kinetic: complex


def packet_values(params, eps, tol=1e-12):
    """All packet integrals by real-line quadrature (the oracle route)."""
    _require_threshold(params)
    psi, h_psi = packet(params, eps)
    V = lambda x: potential(params, x)
    binorm = integrate_real_line(lambda x: psi(x) ** 2, tol=tol).value
    total = integrate_real_line(lambda x: psi(x) * h_psi(x), tol=tol).value
    pot = integrate_real_line(lambda x: V(x) * psi(x) ** 2, tol=tol).value
    return PacketValues(
        epsilon=float(eps),
        binorm=complex(binorm),
        ev_total=complex(total),
        ev_potential=complex(pot),
        ev_kinetic=complex(total - pot),
    )


def exact_values(eps):
    """The closed-form binorm and total energy, and their ratio (3/4) eps."""
    return {
        "binorm": EXACT_BINORM_PREFACTOR * math.sqrt(eps),
        "ev_total": EXACT_ENERGY_PREFACTOR * eps ** 1.5,
        "ratio": 0.75 * eps,
    }


def sweep(params, eps_grid, tol=1e-12):
    """PacketValues rows over a grid of eps, ready for tabulation."""
    return [packet_values(params, float(e), tol=tol) for e in eps_grid]


def fit_slope(eps_grid, values, lo=None, hi=None):
    """Log-log slope of |values| against eps, optionally windowed."""
    eps_grid = np.asarray(eps_grid, dtype=float)
    mags = np.abs(np.asarray(values))
    mask = np.ones(eps_grid.shape, dtype=bool)
    if lo is not None:
        mask &= eps_grid >= lo
    if hi is not None:
        mask &= eps_grid <= hi
    if mask.sum() < 2:
        raise ParameterError("slope fit needs at least two eps points")
    return float(np.polyfit(np.log(eps_grid[mask]), np.log(mags[mask]), 1)[0])


# ---------------------------------------------------------------------------
# quantum averages: the two well-defined prescriptions plus the raw bilinear
# diagnostic that exhibits the 0/0 structure on self-orthogonal states.

def _whole_line(f, tol=1e-11, cut=40.0):
    """Real-line integral with algebraic tails folded by u = 1/x.

    The chain products of the threshold family decay only like powers of
    x, far too slowly for adaptive truncation; the substitution turns each
    tail into a finite smooth panel (quadrature nodes never touch u = 0).
    """
    core = integrate_interval(f, -cut, cut, tol=tol).value

    def folded(u):
        u = np.asarray(u, dtype=float)
        return np.asarray(f(1.0 / u), dtype=complex) / u**2

    right = integrate_interval(folded, 0.0, 1.0 / cut, tol=tol).value
    left = integrate_interval(folded, -1.0 / cut, 0.0, tol=tol).value
    return complex(core + left + right)


@dataclass(frozen=True)
class AverageReport:
    prescription: str
    operator: str
    numerator: complex
    denominator: complex
    value: object
    flag: str = ""


def _chain_with_images(params):
    """Bound chain plus exact h-images: h psi_i = lam psi_i + psi_{i-1}."""
    states = bound_states(params)
    images = []
    for i, s in enumerate(states):
        prev = states[i - 1].eval if s.role.order >= 1 and i >= 1 else None

        def image(x, s=s, prev=prev):
            out = s.lam * np.asarray(s.eval(x), dtype=complex)
            if prev is not None:
                out = out + prev(x)
            return out

        images.append(image)
    return states, images


def _apply_operator(params, operator, fn, h_fn):
    if operator == "potential":
        return lambda x: potential(params, x) * np.asarray(fn(x), dtype=complex)
    if h_fn is None:
        raise ParameterError("total/kinetic averages need the state's h-image")
    if operator == "total":
        return h_fn
    if operator == "kinetic":
        return lambda x: np.asarray(h_fn(x), dtype=complex) - potential(
            params, x
        ) * np.asarray(fn(x), dtype=complex)
    raise ParameterError(f"unknown operator {operator!r}")


def average(params, operator, *, state=None, coeffs=None,
            prescription="hermitian", tol=1e-10):
    """Quantum average of an observable in one of three prescriptions.

    hermitian   <psi|O psi> / <psi|psi>: conjugated pairing, denominator
                always positive.
    binorm      coefficient form over the model's bound chain with the
                conjugate-basis partner carrying conjugated coefficients;
                denominator sum |C_r|^2.
    raw         the plain bilinear form; on self-orthogonal states both
                integrals vanish and the report flags the 0/0 structure
                instead of dividing.

    Provide either coeffs (expansion over the bound chain) or state — a
    callable, or a (callable, h-image callable) pair when the operator
    needs the Hamiltonian's action.
    """
    if (state is None) == (coeffs is None):
        raise ParameterError("provide exactly one of state and coeffs")

    if coeffs is not None:
        states, images = _chain_with_images(params)
        coeffs = np.asarray(coeffs, dtype=complex)
        if len(coeffs) != len(states):
            raise ParameterError(
                f"chain of {params.model_id} has {len(states)} members"
            )

        def fn(x):
            return sum(c * np.asarray(s.eval(x), dtype=complex)
                       for c, s in zip(coeffs, states))

        def h_fn(x):
            return sum(c * im(x) for c, im in zip(coeffs, images))

    elif isinstance(state, tuple):
        fn, h_fn = state
    else:
        fn, h_fn = state, None

    op_fn = _apply_operator(params, operator, fn, h_fn)

    if prescription == "binorm":
        if coeffs is None:
            raise ParameterError("the binorm prescription takes coefficients")
        if params.model_id == "JordanBound":
            partners = [states[1].eval, states[0].eval]
        elif params.model_id == "TwoLevel":
            partners = [s.eval for s in states]
        else:
            raise ParameterError(
                "no complete discrete biorthogonal pairing for this model"
            )
        num = 0.0 + 0.0j
        for r, (cr, pr) in enumerate(zip(coeffs, partners)):
            op_r = [
                _apply_operator(params, operator, s.eval, im)
                for s, im in zip(states, images)
            ]
            for s_idx, cs in enumerate(coeffs):
                if cr == 0 or cs == 0:
                    continue
                elem = _whole_line(
                    lambda x, pr=pr, g=op_r[s_idx]: np.asarray(pr(x)) * g(x),
                    tol=tol,
                )
                num += np.conj(cr) * cs * complex(elem)
        den = complex(np.sum(np.abs(coeffs) ** 2))
        return AverageReport("binorm", operator, num, den, num / den)

    if prescription == "hermitian":
        num = _whole_line(
            lambda x: np.conj(np.asarray(fn(x), dtype=complex)) * op_fn(x),
            tol=tol)
        den = _whole_line(
            lambda x: np.abs(np.asarray(fn(x), dtype=complex)) ** 2,
            tol=tol)
        return AverageReport("hermitian", operator, num, den, num / den)

    if prescription == "raw":
        num = _whole_line(
            lambda x: np.asarray(fn(x), dtype=complex) * op_fn(x),
            tol=tol)
        den = _whole_line(
            lambda x: np.asarray(fn(x), dtype=complex) ** 2, tol=tol)
        scale = _whole_line(
            lambda x: np.abs(np.asarray(fn(x), dtype=complex)) ** 2,
            tol=tol).real
        if abs(den) < 1e-8 * max(scale, 1e-300):
            if abs(num) < 1e-8 * max(scale, 1e-300) * max(scale, 1.0):
                return AverageReport(
                    "raw", operator, num, den, None,
                    flag="0/0, use packet regularization",
                )
            raise ZeroDenominator("bilinear norm vanishes but numerator does not")
        return AverageReport("raw", operator, num, den, num / den)

    raise ParameterError(f"unknown prescription {prescription!r}")
