"""Level coalescence: the two-level family collapsing onto the Jordan cell.

As beta -> 0 the simple eigenvalues -(alpha +- beta)^2 merge at -alpha^2 and
the pair of eigenfunctions degenerates; scaled combinations of them converge
to the Jordan eigenfunction and its associated partner:

    psi0 = -2i sqrt(alpha) lim sqrt(beta) psi+
         =  2  sqrt(alpha) lim sqrt(beta) psi-
    psi1 =  2  sqrt(alpha) lim d/dbeta [sqrt(beta)(psi- + i psi+)] / (4 alpha)

with d(lambda- - lambda+)/dbeta = 4 alpha exactly.  The full resolution
kernel (discrete cross terms plus momentum integral) converges likewise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import ModelParams, bound_states
from .identity import discrete_kernel, _pair_integrand
from .quadrature import integrate_interval


def pair_params(alpha, z, beta):
    return ModelParams("TwoLevel", alpha=alpha, beta=beta, z=z)


def cell_params(alpha, z):
    return ModelParams("JordanBound", alpha=alpha, z=z)


def lambda_pair(alpha, beta):
    """The coalescing eigenvalue pair and its exact gap 4 alpha beta."""
    lp = -((alpha + beta) ** 2)
    lm = -((alpha - beta) ** 2)
    return lp, lm, lm - lp


def psi0_limits(alpha, z, beta, x):
    """Both scaled-eigenfunction routes to psi0 at finite beta."""
    tl = pair_params(alpha, z, beta)
    pp, pm = bound_states(tl)
    ra = math.sqrt(alpha)
    rb = math.sqrt(beta)
    return -2j * ra * rb * pp(x), 2 * ra * rb * pm(x)


def psi1_limit(alpha, z, beta, x):
    """The derivative route to psi1 at finite beta.

    sqrt(beta)(psi- + i psi+) vanishes at beta = 0, so the beta-derivative is
    evaluated as the ratio to beta itself; no subtractive differencing in
    beta is needed.
    """
    tl = pair_params(alpha, z, beta)
    pp, pm = bound_states(tl)
    F = math.sqrt(beta) * (pm(x) + 1j * pp(x))
    return 2 * math.sqrt(alpha) * F / (4 * alpha * beta)


@dataclass(frozen=True)
class LimitOrder:
    betas: tuple
    sup_errors: tuple
    order: float


def _fit_order(betas, errs):
    lb = np.log(np.asarray(betas, dtype=float))
    le = np.log(np.asarray(errs, dtype=float))
    return float(np.polyfit(lb, le, 1)[0])


def state_limit_orders(alpha, z, betas=None, grid=None):
    """Sup-error beta-ladders and fitted convergence orders for both limits.

    Returns a dict with keys "psi0_plus", "psi0_minus", "psi1", each holding
    a LimitOrder.
    """
    if betas is None:
        betas = tuple(0.1 / 2**j for j in range(5))
    if grid is None:
        grid = np.linspace(-8.0, 8.0, 321)
    jb = cell_params(alpha, z)
    p0, p1 = bound_states(jb)
    ref0 = p0(grid)
    ref1 = p1(grid)
    errs = {"psi0_plus": [], "psi0_minus": [], "psi1": []}
    for beta in betas:
        via_p, via_m = psi0_limits(alpha, z, beta, grid)
        errs["psi0_plus"].append(float(np.max(np.abs(via_p - ref0))))
        errs["psi0_minus"].append(float(np.max(np.abs(via_m - ref0))))
        errs["psi1"].append(float(np.max(np.abs(psi1_limit(alpha, z, beta, grid) - ref1))))
    return {
        key: LimitOrder(tuple(betas), tuple(vals), _fit_order(betas, vals))
        for key, vals in errs.items()
    }


def kernel_gap(alpha, z, beta, A=20.0, points=None, tol=1e-9):
    """Pointwise distance between the two-level and Jordan-cell resolutions.

    Both kernels are taken at the same momentum truncation A, so the
    comparison isolates the beta-dependence: discrete cross terms plus the
    truncated momentum integral.
    """
    if points is None:
        points = [(0.3, -0.4), (1.1, 0.6), (-2.0, 0.8), (0.0, 0.0)]
    tl = pair_params(alpha, z, beta)
    jb = cell_params(alpha, z)
    worst = 0.0
    for x, xp in points:
        val_tl = discrete_kernel(tl, x, xp) + integrate_interval(
            _pair_integrand(tl, x, xp), -A, A, tol=tol
        ).value
        val_jb = discrete_kernel(jb, x, xp) + integrate_interval(
            _pair_integrand(jb, x, xp), -A, A, tol=tol
        ).value
        worst = max(worst, float(abs(val_tl - val_jb)))
    return worst


def potential_gap(alpha, z, beta, grid=None):
    """Sup distance of the two potentials on a real window (O(beta^2))."""
    from .models import potential

    if grid is None:
        grid = np.linspace(-10.0, 10.0, 2001)
    return float(
        np.max(np.abs(potential(pair_params(alpha, z, beta), grid)
                      - potential(cell_params(alpha, z), grid)))
    )
