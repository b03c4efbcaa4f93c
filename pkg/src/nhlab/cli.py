"""Command-line harness: a thin client over the in-process verification service.

Each subcommand resolves its flags (plus an optional JSON --config file) into
one request against the service app, writes the returned report to disk
atomically, prints a one-line summary, and exits 0 when every check passed,
1 on a tolerance failure, 2 on an invalid configuration.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .reports import REPORT_CSV_FIELDS, write_csv, write_json
from .service import app

ENDPOINTS = {
    "verify": "/verify",
    "identity": "/suites/identity",
    "coalesce": "/suites/coalescence",
    "packet": "/sweep",
    "scatter": "/suites/scattering",
    "finite": "/suites/finite",
    "sweep": "/sweep",
}

_CONFIG_FLAGS = ("model", "alpha", "beta", "z_re", "z_im", "n", "tol", "seed")


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nhlab",
        description="verification harness for the non-Hermitian model laboratory",
    )
    sub = top.add_subparsers(dest="command", required=True)
    for name, blurb in (
        ("verify", "chain residuals and binorm tables (--all: every suite)"),
        ("identity", "resolution-of-identity battery"),
        ("coalesce", "two-level to Jordan-cell limits"),
        ("packet", "wave-packet scaling table (eps sweep)"),
        ("scatter", "Green-function poles, transmission, reflection"),
        ("finite", "finite-dimensional cell algebra, seeded random specs"),
        ("sweep", "parameter sweep: --kind beta | k | eps"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--model", choices=["jordan-bound", "two-level",
                                           "threshold", "continuum-bs"])
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--z-re", dest="z_re", type=float)
        p.add_argument("--z-im", dest="z_im", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--out", help="report path (default nhlab-<command>.<fmt>)")
        p.add_argument("--format", choices=["json", "csv"],
                       help="default json, or csv when --out ends in .csv")
        p.add_argument("--seed", type=int)
        p.add_argument("--config", help="JSON file with config keys; flags override")
        if name == "verify":
            p.add_argument("--all", action="store_true",
                           help="run every suite, not just the scoped checks")
        if name in ("sweep", "packet"):
            p.add_argument("--grid", help="comma-separated sweep grid values")
        if name == "sweep":
            p.add_argument("--kind", choices=["beta", "k", "eps"], default="beta")
    return top


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _payload(args: argparse.Namespace) -> dict:
    payload: dict = {}
    if args.config:
        payload.update(_load_config_file(args.config))
    for key in _CONFIG_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            payload[key] = value
    if args.command == "verify":
        payload["all"] = bool(args.all)
    if args.command in ("sweep", "packet"):
        payload["kind"] = "eps" if args.command == "packet" else args.kind
        if getattr(args, "grid", None) is not None:
            payload["grid"] = [float(v) for v in args.grid.split(",") if v.strip()]
    return payload


def _post(path: str, payload: dict) -> httpx.Response:
    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, timeout=None,
                                     base_url="http://nhlab") as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _from_json_value(v):
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(_from_json_value(v["re"]), _from_json_value(v["im"]))
    if v in ("nan", "inf", "-inf"):
        return float(v)
    return v


def _detail(resp: httpx.Response) -> str:
    try:
        body = resp.json()
    except ValueError:
        return resp.text
    detail = body.get("detail", body)
    if isinstance(detail, list):  # pydantic validation errors
        parts = []
        for item in detail:
            loc = ".".join(str(p) for p in item.get("loc", []) if p != "body")
            parts.append(f"{loc}: {item.get('msg', '')}" if loc else item.get("msg", ""))
        return "; ".join(parts)
    return str(detail)


def _resolve_output(args: argparse.Namespace) -> tuple[str, str]:
    fmt = args.format
    if fmt is None:
        fmt = "csv" if (args.out or "").endswith(".csv") else "json"
    out = args.out or f"nhlab-{args.command}.{fmt}"
    return out, fmt


def _write_suite_report(data: dict, out: str, fmt: str) -> None:
    if fmt == "json":
        write_json(data, out)
        return
    rows = []
    for rec in data["records"]:
        rows.append({
            "id": rec["id"],
            "anchor": rec["anchor"],
            "computed": _from_json_value(rec["computed"]),
            "target": _from_json_value(rec["target"]),
            "tolerance": rec["tolerance"],
            "pass": rec["pass"],
            "detail": rec.get("detail", ""),
        })
    write_csv(rows, REPORT_CSV_FIELDS, out)


def _write_sweep(data: dict, out: str, fmt: str) -> None:
    if fmt == "json":
        write_json(data, out)
        return
    rows = [
        {k: _from_json_value(v) for k, v in row.items()} for row in data["rows"]
    ]
    write_csv(rows, data["fieldnames"], out)


def _summary(report: dict, out: str) -> str:
    verdict = "PASS" if report["pass"] else "FAIL"
    good = report["checks"] - report["failures"]
    return (f"{report['suite']}: {verdict} ({good}/{report['checks']} checks, "
            f"{report['runtime']:.1f}s) -> {out}")


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        payload = _payload(args)
    except (OSError, ValueError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2

    resp = _post(ENDPOINTS[args.command], payload)
    if resp.status_code in (400, 422):
        print(f"error: invalid configuration: {_detail(resp)}", file=sys.stderr)
        return 2
    if resp.status_code != 200:
        print(f"error: service failure ({resp.status_code}): {_detail(resp)}",
              file=sys.stderr)
        return 2

    data = resp.json()
    out, fmt = _resolve_output(args)
    if "rows" in data:  # sweep-shaped response
        _write_sweep(data, out, fmt)
        report = data["report"]
    else:
        _write_suite_report(data, out, fmt)
        report = data
    print(_summary(report, out))
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
