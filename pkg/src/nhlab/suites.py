"""Verification suites: every headline claim of the laboratory as CheckRecords.

Each suite certifies one family of claims — Jordan-chain residuals, binorm
tables, wave-packet scaling laws, level coalescence, resolutions of identity,
Green-function singularities and transparent scattering, and the
finite-dimensional cell algebra — and returns a SuiteReport whose records
carry the claim anchor, the computed number, the target, and the tolerance.
verify_all runs them all; NHLAB_THREADS caps how many run concurrently.

Suite-internal constants (probe points, epsilon ladders, pinned model
parameters) are part of the certified configuration and are recorded in each
report's config block, so a report is reproducible from its own content.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import coalescence as coal
from . import identity as ident
from . import jordan
from . import observables as obs
from . import scattering as scat
from .biortho import gram
from .diffop import residual
from .errors import ParameterError
from .models import ModelParams, bound_states
from .reports import CheckRecord, SuiteReport, check, check_bound

MODEL_SLUGS = {
    "jordan-bound": "JordanBound",
    "two-level": "TwoLevel",
    "threshold": "Threshold",
    "continuum-bs": "ContinuumBS",
}
SLUG_FOR = {v: k for k, v in MODEL_SLUGS.items()}

SUITE_NAMES = (
    "chain",
    "binorm",
    "packet",
    "coalescence",
    "identity",
    "scattering",
    "finite",
)


@dataclass(frozen=True)
class RunSettings:
    """Resolved run knobs; the parsed form of a RunConfig mapping."""

    model: str | None = None
    alpha: float = 1.0
    beta: float = 0.3
    z: complex = 1j
    n: int = 3
    tol: float | None = None
    seed: int = 0

    def params(self, model_id: str, **over) -> ModelParams:
        kw: dict = {"alpha": self.alpha, "z": self.z}
        if model_id == "TwoLevel":
            kw["beta"] = self.beta
        elif model_id == "Threshold":
            kw.pop("alpha")
            kw["n"] = self.n
        kw.update(over)
        return ModelParams(model_id, **kw)


_SETTINGS_KEYS = {"model", "alpha", "beta", "z_re", "z_im", "n", "tol", "seed"}


def settings_from(config: dict | None) -> RunSettings:
    cfg = dict(config or {})
    unknown = set(cfg) - _SETTINGS_KEYS
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    model = cfg.get("model")
    if model is not None and model not in MODEL_SLUGS:
        raise ParameterError(
            f"unknown model {model!r}; expected one of {sorted(MODEL_SLUGS)}"
        )
    z = complex(float(cfg.get("z_re", 0.0)), float(cfg.get("z_im", 1.0)))
    tol = cfg.get("tol")
    return RunSettings(
        model=model,
        alpha=float(cfg.get("alpha", 1.0)),
        beta=float(cfg.get("beta", 0.3)),
        z=z,
        n=int(cfg.get("n", 3)),
        tol=None if tol is None else float(tol),
        seed=int(cfg.get("seed", 0)),
    )


def check_floor(id: str, anchor: str, computed: float, floor: float,
                *, detail: str = "") -> CheckRecord:
    """Record for a lower-bound claim: computed >= floor."""
    ok = bool(math.isfinite(float(computed)) and float(computed) >= float(floor))
    return CheckRecord(id, anchor, float(computed), float(floor), 0.0, ok,
                       detail or "computed must reach the target from above")


def _suite(name: str, config: dict, records: list[CheckRecord],
           started: float) -> SuiteReport:
    return SuiteReport(suite=name, records=records,
                       runtime=time.perf_counter() - started, config=config)


# ---------------------------------------------------------------------------
# 1. Jordan-chain residual certification


def suite_chain(config: dict | None = None) -> SuiteReport:
    """Finite-difference residuals of the printed chains on [-20, 20]."""
    t0 = time.perf_counter()
    s = settings_from(config)
    tol = s.tol if s.tol is not None else 1e-6
    slugs = [s.model] if s.model else ["jordan-bound", "continuum-bs"]
    grid = np.linspace(-20.0, 20.0, 4001)
    records = []
    for slug in slugs:
        params = s.params(MODEL_SLUGS[slug])
        states = bound_states(params)
        for i, state in enumerate(states):
            partner = states[i - 1].eval if state.role.order > 0 else None
            rep = residual(params, state.eval, state.lam, partner=partner, grid=grid)
            what = (
                f"(h - lambda) {state.label} = psi{state.role.order - 1}"
                if partner is not None
                else f"h {state.label} = lambda {state.label}"
            )
            records.append(
                check_bound(
                    f"chain.{slug}.{state.label}",
                    "jordan-chain-residual",
                    rep.sup_residual,
                    tol,
                    detail=f"sup-norm of {what} on [-20, 20], step {rep.step:g}",
                )
            )
    cfg = {"models": slugs, "alpha": s.alpha, "z_re": s.z.real, "z_im": s.z.imag,
           "grid": [-20.0, 20.0, 4001], "tol": tol}
    return _suite("chain", cfg, records, t0)


# ---------------------------------------------------------------------------
# 2. binorm tables


def suite_binorm(config: dict | None = None) -> SuiteReport:
    """Bilinear pairing tables of every model's bound sector."""
    t0 = time.perf_counter()
    s = settings_from(config)
    tol = s.tol if s.tol is not None else 1e-8
    slugs = [s.model] if s.model else list(MODEL_SLUGS)
    records = []
    for slug in slugs:
        params = s.params(MODEL_SLUGS[slug])
        rep = gram(params)
        m = len(rep.labels)
        for i in range(m):
            for j in range(i, m):
                if not rep.asserted[i, j]:
                    continue
                records.append(
                    check(
                        f"binorm.{slug}.({rep.labels[i]},{rep.labels[j]})",
                        "binorm-table",
                        rep.matrix[i, j],
                        complex(rep.expected[i, j]),
                        tol,
                    )
                )
    cfg = {"models": slugs, "alpha": s.alpha, "beta": s.beta,
           "z_re": s.z.real, "z_im": s.z.imag, "n": s.n, "tol": tol}
    return _suite("binorm", cfg, records, t0)


# ---------------------------------------------------------------------------
# 3. wave-packet scaling laws

_PACKET_EPS = (1e-3, 1e-1, 9)          # slope window mandated by the claim
_PREFACTOR_EPS = (1e-4, 1e-2, 9)       # extraction ladder for the eps->0 limit
_PRINTED_POTENTIAL_PREFACTOR = -math.sqrt(25.0 * math.pi / 36.0)
_ORACLE_POTENTIAL_PREFACTOR = -(5.0 / 6.0) * math.sqrt(2.0 * math.pi)


def _prefactor_limit(eps: np.ndarray, values: np.ndarray, power: float) -> float:
    """eps -> 0 limit of values/eps**power via a cubic fit in sqrt(eps)."""
    y = np.asarray(values, dtype=complex).real / eps**power
    return float(np.polyfit(np.sqrt(eps), y, 3)[-1])


def suite_packet(config: dict | None = None) -> SuiteReport:
    """Scaling laws of the threshold wave packet: slopes, prefactors, ratios."""
    t0 = time.perf_counter()
    s = settings_from(config)
    params = s.params("Threshold", n=1)
    lo, hi, npts = _PACKET_EPS
    eps = np.geomspace(lo, hi, npts)
    rows = obs.sweep(params, eps)
    bn = np.array([r.binorm for r in rows])
    tv = np.array([r.ev_total for r in rows])
    pv = np.array([r.ev_potential for r in rows])

    records = [
        check("packet.binorm.slope", "packet-scaling-law",
              obs.fit_slope(eps, bn), 0.5, 0.02,
              detail=f"log-log fit over eps in [{lo:g}, {hi:g}]"),
        check("packet.ev-total.slope", "packet-scaling-law",
              obs.fit_slope(eps, tv), 1.5, 0.02,
              detail=f"log-log fit over eps in [{lo:g}, {hi:g}]"),
        check("packet.ev-potential.slope", "packet-scaling-law",
              obs.fit_slope(eps, pv), 1.5, 0.02,
              detail=(
                  f"log-log fit over eps in [{lo:g}, {hi:g}]; the potential "
                  "average carries a subleading sqrt(eps) correction of "
                  "relative size ~1.5 sqrt(eps), which keeps the fitted slope "
                  "near 1.42 on this window (a clean decade at eps <= 1e-3 "
                  "fits 1.49); asserted unconditionally on the stated window"
              )),
    ]

    pref_b = abs(bn[0]) / math.sqrt(eps[0])
    target_b = math.sqrt(math.pi / 8.0)
    records.append(
        check("packet.binorm.prefactor", "packet-scaling-law",
              pref_b, target_b, 1e-3 * target_b,
              detail="relative tolerance 1e-3; evaluated at eps = 1e-3")
    )

    plo, phi_, pn = _PREFACTOR_EPS
    peps = np.geomspace(plo, phi_, pn)
    prows = obs.sweep(params, peps)
    pref_t = _prefactor_limit(peps, np.array([r.ev_total for r in prows]), 1.5)
    pref_v = _prefactor_limit(peps, np.array([r.ev_potential for r in prows]), 1.5)
    target_t = math.sqrt(9.0 * math.pi / 128.0)
    records.append(
        check("packet.ev-total.prefactor", "packet-scaling-law",
              pref_t, target_t, 1e-3 * target_t,
              detail="printed value and quadrature oracle agree")
    )
    records.append(
        check("packet.ev-potential.prefactor", "packet-scaling-law",
              pref_v, _ORACLE_POTENTIAL_PREFACTOR,
              1e-3 * abs(_ORACLE_POTENTIAL_PREFACTOR),
              detail=(
                  f"quadrature oracle governs; the printed value "
                  f"{_PRINTED_POTENTIAL_PREFACTOR:.6f} is smaller by exactly "
                  "sqrt(2) and is flagged as a suspected misprint"
              ))
    )

    ratios = np.abs(tv / bn)
    records.append(
        check("packet.ratio.limit", "packet-average-vanishes",
              float(ratios[0]), 0.75 * eps[0], 1e-2 * 0.75 * eps[0],
              detail="|total/binorm| at the smallest eps matches (3/4) eps")
    )
    records.append(
        check_bound("packet.ratio.monotone", "packet-average-vanishes",
                    float(np.max(np.diff(ratios[::-1]))), 0.0,
                    detail="|total/binorm| must decrease as eps falls")
    )

    cfg = {"model": "threshold", "n": 1, "z_re": s.z.real, "z_im": s.z.imag,
           "eps_window": [lo, hi, npts], "prefactor_window": [plo, phi_, pn]}
    return _suite("packet", cfg, records, t0)


# ---------------------------------------------------------------------------
# 4. level coalescence


def suite_coalescence(config: dict | None = None) -> SuiteReport:
    """Two-level -> Jordan-cell limits: state ladders and the kernel gap."""
    t0 = time.perf_counter()
    s = settings_from(config)
    orders = coal.state_limit_orders(s.alpha, s.z)
    records = []
    for key in ("psi0_plus", "psi0_minus", "psi1"):
        lad = orders[key]
        records.append(
            check_floor(f"coalesce.{key}.order", "coalescence-limit",
                        lad.order, 0.8,
                        detail=f"fitted over beta in {list(lad.betas)}")
        )
        records.append(
            check_bound(f"coalesce.{key}.monotone", "coalescence-limit",
                        float(np.max(np.array(lad.sup_errors[1:])
                                     / np.array(lad.sup_errors[:-1]))), 1.0,
                        detail="sup errors must shrink at every beta halving")
        )
    gap = coal.kernel_gap(s.alpha, s.z, 1e-3)
    records.append(
        check_bound("coalesce.kernel.gap", "coalescence-kernel-limit",
                    gap, 1e-2,
                    detail="two-level vs Jordan-cell resolution kernels at "
                           "beta = 1e-3, shared momentum truncation")
    )
    cfg = {"alpha": s.alpha, "z_re": s.z.real, "z_im": s.z.imag,
           "betas": [0.1 / 2**j for j in range(5)], "kernel_beta": 1e-3}
    return _suite("coalescence", cfg, records, t0)


# ---------------------------------------------------------------------------
# 5. resolutions of identity

# pinned identity-suite parameters: the threshold family runs its n = 1
# member (the only one with a complete continuum closure), the in-continuum
# model runs alpha = 1/2 where the counterterm normalization is exact
_IDENTITY_CBS_ALPHA = 0.5
_PSI0_PROBE = 0.5
_LEMMA_EPS = (1e-1, 1e-2, 1e-3)


def suite_identity(config: dict | None = None) -> SuiteReport:
    """Full kernels on the Gaussian battery; reduced/extended on psi0; lemma bound."""
    t0 = time.perf_counter()
    s = settings_from(config)
    battery = ident.gaussian_battery()
    probes = ident.probe_points()
    records = []

    jb = s.params("JordanBound")
    tl = s.params("TwoLevel")
    for slug, params, kappa, rid in (
        ("jordan-bound", jb, None, "razl"),
        ("jordan-bound", jb, 1.0, "razl-rotated"),
        ("two-level", tl, None, "razl"),
    ):
        for phi in battery:
            res = ident.apply_identity(params, phi, probes, variant="razl",
                                       kappa=kappa)
            records.append(
                check_bound(
                    f"identity.{rid}.{slug}.{phi.label}",
                    "identity-full-kernel",
                    res.sup_error, 1e-4,
                    detail="sup over the 5 probe points",
                )
            )

    th = s.params("Threshold", n=1)
    cbs = s.params("ContinuumBS", alpha=_IDENTITY_CBS_ALPHA)
    xp = np.array([_PSI0_PROBE])
    for slug, params in (("threshold", th), ("continuum-bs", cbs)):
        red = ident.apply_identity(params, "psi0", xp, variant="reduced", eps=1e-3)
        records.append(
            check_bound(f"identity.reduced.{slug}.psi0", "identity-reduced-annihilates",
                        float(np.max(np.abs(red.values))), 1e-3,
                        detail=f"|(K_reduced psi0)({_PSI0_PROBE})| at eps = 1e-3")
        )
        ext = ident.apply_identity(params, "psi0", xp, variant="extended", eps=1e-3)
        records.append(
            check_bound(f"identity.extended.{slug}.psi0", "identity-extended-reproduces",
                        ext.sup_error, 1e-3,
                        detail=f"|(K_extended psi0 - psi0)({_PSI0_PROBE})| at eps = 1e-3")
        )

    for eps in _LEMMA_EPS:
        worst = 0.0
        for phi in battery:
            bound = ident.sine_functional_bound(phi, eps)
            for q in probes:
                val = abs(ident.lemma_functional("sine", phi, float(q), eps))
                worst = max(worst, val / bound)
        records.append(
            check_bound(f"identity.lemma-sine.eps={eps:g}", "lemma-sine-bound",
                        worst, 1.0,
                        detail="worst |F_eps(phi)| / (sqrt(pi eps) ||phi||) "
                               "over the battery and probe points")
        )

    cfg = {"alpha": s.alpha, "beta": s.beta, "z_re": s.z.real, "z_im": s.z.imag,
           "cbs_alpha": _IDENTITY_CBS_ALPHA, "psi0_probe": _PSI0_PROBE,
           "battery": [phi.label for phi in battery],
           "probes": [float(q) for q in probes], "lemma_eps": list(_LEMMA_EPS)}
    return _suite("identity", cfg, records, t0)


# ---------------------------------------------------------------------------
# 6. scattering

_POLE_PROBE = (0.3, -0.4)
_K_GRID = (0.5, 1.0, 2.0)
# k = alpha is the in-continuum model's spectral singularity; alpha = 0.7
# keeps the probe momenta clear of it
_SCATTER_CBS_ALPHA = 0.7


def suite_scattering(config: dict | None = None) -> SuiteReport:
    """Green-function singularity orders, closed-form T(k), and reflectionlessness."""
    t0 = time.perf_counter()
    s = settings_from(config)
    x, xp = _POLE_PROBE
    records = []

    jb = s.params("JordanBound")
    tl = s.params("TwoLevel")
    th = s.params("Threshold", n=1)
    cbs = s.params("ContinuumBS", alpha=_SCATTER_CBS_ALPHA)

    records.append(
        check("scatter.pole.jordan-bound", "green-pole-order",
              scat.pole_order(jb, x, xp, -s.alpha**2).order, 2.0, 0.05,
              detail="double pole at the Jordan level")
    )
    for sign, name in ((+1.0, "plus"), (-1.0, "minus")):
        lam0 = -((s.alpha + sign * s.beta) ** 2)
        records.append(
            check(f"scatter.pole.two-level.{name}", "green-pole-order",
                  scat.pole_order(tl, x, xp, lam0).order, 1.0, 0.05,
                  detail=f"simple pole at lambda = {lam0:g}")
        )
    records.append(
        check("scatter.pole.threshold", "green-threshold-exponent",
              -scat.pole_order(th, x, xp, 0.0).order, -1.5, 0.05,
              detail="branch exponent of G as lambda -> 0")
    )
    records.append(
        check("scatter.pole.continuum-bs", "green-pole-order",
              scat.pole_order(cbs, x, xp, _SCATTER_CBS_ALPHA**2).order, 2.0, 0.05,
              detail="double pole at the embedded level, approached off the cut")
    )

    for slug, params in (("jordan-bound", jb), ("two-level", tl),
                         ("threshold", th), ("continuum-bs", cbs)):
        for k in _K_GRID:
            gap = abs(scat.transmission(params, k) - scat.transmission_closed(params, k))
            records.append(
                check_bound(f"scatter.T.{slug}.k={k:g}", "transmission-closed-form",
                            gap, 1e-6)
            )
            r, resid = scat.reflection_bound(params, k)
            records.append(
                check_bound(f"scatter.R.{slug}.k={k:g}", "reflectionless",
                            r, 1e-8, detail=f"fit residual {resid:.1e}")
            )

    cfg = {"alpha": s.alpha, "beta": s.beta, "z_re": s.z.real, "z_im": s.z.imag,
           "cbs_alpha": _SCATTER_CBS_ALPHA, "probe": list(_POLE_PROBE),
           "k_grid": list(_K_GRID)}
    return _suite("scattering", cfg, records, t0)


# ---------------------------------------------------------------------------
# 7. finite-dimensional cell algebra


def suite_finite(config: dict | None = None) -> SuiteReport:
    """Randomized algebra checks plus the closed-form rotated cell matrix."""
    t0 = time.perf_counter()
    s = settings_from(config)
    tol = s.tol if s.tol is not None else 1e-10
    rng = np.random.default_rng(s.seed)
    trials = 100
    worst = {"chain": 0.0, "triangle-invariance": 0.0, "t-symmetry": 0.0,
             "pairing": 0.0, "diagonalized-identity": 0.0,
             "eigvec-residual": 0.0, "zero-bilinear-eigenvector": 0.0}
    for _ in range(trials):
        spec = jordan.random_spec(rng)
        H, sys0 = jordan.build(spec)
        worst["chain"] = max(worst["chain"],
                             jordan.chain_residual(spec, H, sys0))
        tr = jordan.random_transform(rng, spec)
        sys1 = jordan.triangle(spec, sys0, tr)
        eye = np.eye(spec.dimension)
        worst["pairing"] = max(
            worst["pairing"], float(np.max(np.abs(sys1.pairing() - eye))))
        worst["chain"] = max(worst["chain"],
                             jordan.chain_residual(spec, H, sys1))
        M0, _ = jordan.t_symmetric_form(spec, sys0)
        M1, _ = jordan.t_symmetric_form(spec, sys1)
        worst["triangle-invariance"] = max(
            worst["triangle-invariance"], float(np.max(np.abs(M1 - M0))))
        worst["t-symmetry"] = max(
            worst["t-symmetry"], float(np.max(np.abs(M1 - M1.T))))
        rot = jordan.diagonalize_identity(spec, sys1, kappa=1.0)
        worst["diagonalized-identity"] = max(
            worst["diagonalized-identity"],
            float(np.max(np.abs(rot.pairing() - eye))))
        for value, p, off in spec.cells():
            if p < 2:
                continue
            S = jordan.cell_rotation(p, 1.0)
            v = np.linalg.solve(S, np.eye(p, 1, dtype=complex)[:, 0])
            Mc = rot.matrix[off:off + p, off:off + p]
            resid = float(np.max(np.abs((Mc - value * np.eye(p)) @ v)))
            worst["eigvec-residual"] = max(
                worst["eigvec-residual"], resid / max(1.0, abs(value)))
            worst["zero-bilinear-eigenvector"] = max(
                worst["zero-bilinear-eigenvector"], abs(v @ v) / (abs(v) ** 2).sum())
    records = [
        check_bound(f"finite.{key}", f"cell-algebra-{key}", val, tol,
                    detail=f"worst case over {trials} random specs, dim <= 12")
        for key, val in worst.items()
    ]

    cell = jordan.JordanSpec((jordan.CellGroup(-1.0 + 0j, (2,)),))
    _, csys = jordan.build(cell)
    rot = jordan.diagonalize_identity(cell, csys, kappa=1.0)
    gap = float(np.max(np.abs(rot.matrix - jordan.mansym_matrix(-1.0 + 0j, 1.0))))
    records.append(
        check_bound("finite.rotated-cell-matrix", "rotated-cell-closed-form",
                    gap, 1e-15,
                    detail="kappa = 1 cell at the unit Jordan level; "
                           "machine-exact agreement")
    )
    cfg = {"seed": s.seed, "trials": trials, "max_dim": 12, "tol": tol}
    return _suite("finite", cfg, records, t0)


# ---------------------------------------------------------------------------
# aggregation

_SUITE_FNS = {
    "chain": suite_chain,
    "binorm": suite_binorm,
    "packet": suite_packet,
    "coalescence": suite_coalescence,
    "identity": suite_identity,
    "scattering": suite_scattering,
    "finite": suite_finite,
}


def run_suite(name: str, config: dict | None = None) -> SuiteReport:
    try:
        fn = _SUITE_FNS[name]
    except KeyError:
        raise ParameterError(
            f"unknown suite {name!r}; expected one of {list(SUITE_NAMES)}"
        ) from None
    return fn(config)


def _thread_cap() -> int:
    raw = os.environ.get("NHLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"NHLAB_THREADS must be an integer, got {raw!r}")


def verify_all(config: dict | None = None) -> SuiteReport:
    """Run every suite; records are assembled in the canonical suite order.

    Individual suites run concurrently up to the NHLAB_THREADS cap (default
    sequential); each suite is internally deterministic, so the assembled
    report does not depend on scheduling.
    """
    t0 = time.perf_counter()
    workers = _thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {name: pool.submit(_SUITE_FNS[name], config)
                       for name in SUITE_NAMES}
            parts = [futures[name].result() for name in SUITE_NAMES]
    else:
        parts = [_SUITE_FNS[name](config) for name in SUITE_NAMES]
    records = [r for part in parts for r in part.records]
    cfg = {"suites": list(SUITE_NAMES), "threads": workers,
           "config": dict(config or {})}
    return SuiteReport(suite="all", records=records,
                       runtime=time.perf_counter() - t0, config=cfg)


# ---------------------------------------------------------------------------
# parameter sweeps (rows + per-row records, shared by the CLI and service)

SWEEP_KINDS = ("beta", "k", "eps")


def sweep_rows(kind: str, config: dict | None = None,
               grid: list[float] | None = None):
    """Grid of runs for one sweep family: (fieldnames, rows, report).

    "beta" drives the coalescence ladder, "k" the transmission grid, "eps"
    the wave-packet table (columns epsilon, binorm, ev_total, ev_potential,
    ev_kinetic).  Rows appear in grid order; each row contributes its own
    pass/fail records, so partial failures stay visible per row.
    """
    t0 = time.perf_counter()
    s = settings_from(config)
    if grid is not None and len(grid) == 0:
        raise ParameterError("empty sweep grid")
    records: list[CheckRecord] = []

    if kind == "beta":
        betas = [float(b) for b in grid] if grid is not None \
            else [0.1 / 2**j for j in range(5)]
        orders = coal.state_limit_orders(s.alpha, s.z, betas=tuple(betas))
        keys = ("psi0_plus", "psi0_minus", "psi1")
        fieldnames = ["beta"] + [f"sup_err_{k}" for k in keys]
        rows = [
            {"beta": b, **{f"sup_err_{k}": orders[k].sup_errors[i] for k in keys}}
            for i, b in enumerate(betas)
        ]
        for k in keys:
            records.append(
                check_floor(f"sweep.beta.{k}.order", "coalescence-limit",
                            orders[k].order, 0.8)
            )
        for i in range(1, len(betas)):
            worst = max(orders[k].sup_errors[i] / orders[k].sup_errors[i - 1]
                        for k in keys)
            records.append(
                check_bound(f"sweep.beta.row{i}.decreasing", "coalescence-limit",
                            worst, 1.0,
                            detail=f"errors at beta = {betas[i]:g} vs {betas[i - 1]:g}")
            )
    elif kind == "k":
        ks = [float(k) for k in grid] if grid is not None else list(_K_GRID)
        slug = s.model or "jordan-bound"
        params = s.params(MODEL_SLUGS[slug])
        fieldnames = ["k", "T_re", "T_im", "abs_T", "closed_gap"]
        rows = []
        for k in ks:
            T = scat.transmission(params, k)
            gap = abs(T - scat.transmission_closed(params, k))
            rows.append({"k": k, "T_re": T.real, "T_im": T.imag,
                         "abs_T": abs(T), "closed_gap": gap})
            records.append(
                check(f"sweep.k={k:g}.unimodular", "transmission-unimodular",
                      abs(T), 1.0, 1e-6, detail=f"model {slug}")
            )
            records.append(
                check_bound(f"sweep.k={k:g}.closed-form", "transmission-closed-form",
                            gap, 1e-6, detail=f"model {slug}")
            )
    elif kind == "eps":
        eps = [float(e) for e in grid] if grid is not None \
            else list(np.geomspace(*_PACKET_EPS))
        params = s.params("Threshold", n=1)
        vals = obs.sweep(params, eps)
        fieldnames = ["epsilon", "binorm", "ev_total", "ev_potential", "ev_kinetic"]
        rows = [
            {"epsilon": r.epsilon, "binorm": r.binorm, "ev_total": r.ev_total,
             "ev_potential": r.ev_potential, "ev_kinetic": r.ev_kinetic}
            for r in vals
        ]
        if len(eps) >= 2:
            grid_arr = np.array(eps)
            for col, target in (("binorm", 0.5), ("ev_total", 1.5),
                                ("ev_potential", 1.5)):
                slope = obs.fit_slope(grid_arr, np.array([row[col] for row in rows]))
                records.append(
                    check(f"sweep.eps.{col}.slope", "packet-scaling-law",
                          slope, target, 0.02)
                )
    else:
        raise ParameterError(
            f"unknown sweep kind {kind!r}; expected one of {list(SWEEP_KINDS)}"
        )

    report = SuiteReport(suite=f"sweep[{kind}]", records=records,
                         runtime=time.perf_counter() - t0,
                         config={"kind": kind, "grid": grid,
                                 "config": dict(config or {})})
    return fieldnames, rows, report


def verify_model(config: dict | None = None) -> SuiteReport:
    """Model-scoped verification: chain residuals plus the binorm table."""
    t0 = time.perf_counter()
    s = settings_from(config)
    if s.model is None:
        raise ParameterError("model-scoped verify needs a model slug")
    parts = [suite_chain(config), suite_binorm(config)]
    records = [r for part in parts for r in part.records]
    return SuiteReport(suite=f"verify[{s.model}]", records=records,
                       runtime=time.perf_counter() - t0,
                       config=dict(config or {}))
