"""Command-line front end: integrate, decide, verify, and table.

Exit codes: 0 ok/Integrable, 1 usage or parse error, 2 NotIntegrable
(or verification failures), 3 Undecided.  Every verdict is accompanied by a
machine-parsable JSON line, also in human format.  Flag values override
RSQUAD_* environment variables, which override the defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .catalog import SLACK_DEFAULT, CatalogError, Interval, build_handle, product_handle
from .harness import (
    default_corpus,
    load_corpus,
    report_json_line,
    reports_csv,
    run_all,
)
from .integrator import (
    DEFAULT_BUDGET,
    Enclosure,
    IndefiniteIntegral,
    Integrable,
    NotIntegrable,
    Undecided,
    decide_riemann_integrable,
    integrate_rs_reduced,
)
from .partition import tag, uniform
from .sums import rs_sum, rs_vs_riemann_gap_bound

ENV_PREFIX = "RSQUAD_"
FORMATS = ("json", "csv", "human")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_INTEGRABLE = 2
EXIT_UNDECIDED = 3


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    tolerance: float
    budget: int
    seed: int
    slack: float
    out: Optional[str]
    format: str

    def __post_init__(self):
        if not self.tolerance > 0:
            raise CliError(f"tolerance must be positive, got {self.tolerance}")
        if self.budget < 2:
            raise CliError(f"budget must be at least 2, got {self.budget}")
        if self.slack < 0:
            raise CliError(f"slack must be nonnegative, got {self.slack}")
        if self.format not in FORMATS:
            raise CliError(f"format must be one of {FORMATS}, got {self.format!r}")


def _pick(flag_value, env_name: str, default, cast):
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(ENV_PREFIX + env_name)
    if raw is not None:
        try:
            return cast(raw)
        except ValueError:
            raise CliError(f"bad {ENV_PREFIX}{env_name} value {raw!r}")
    return default


def _config(args) -> RunConfig:
    return RunConfig(
        tolerance=_pick(args.tol, "TOL", 1e-6, float),
        budget=_pick(args.budget, "BUDGET", DEFAULT_BUDGET, int),
        seed=_pick(args.seed, "SEED", 0, int),
        slack=_pick(args.slack, "SLACK", SLACK_DEFAULT, float),
        out=_pick(args.out, "OUT", None, str),
        format=_pick(args.format, "FORMAT", "human", str),
    )


def _load_spec(source: str) -> dict:
    """Inline JSON (starts with '{') or a path to a JSON file."""
    text = source
    if not source.lstrip().startswith("{"):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise CliError(f"cannot read spec {source!r}: {e}")
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"invalid spec JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(spec, dict):
        raise CliError("spec must be a JSON object")
    return spec


def _domain_arg(args) -> Optional[Interval]:
    if args.domain is None:
        return None
    try:
        return Interval(args.domain[0], args.domain[1])
    except CatalogError as e:
        raise CliError(str(e))


def _emit(text: str, cfg: RunConfig):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verdict_payload(verdict) -> dict:
    if isinstance(verdict, Integrable):
        verdict = verdict.enclosure
    if isinstance(verdict, Enclosure):
        return {"verdict": "integrable", "mid": verdict.mid, "rad": verdict.rad,
                "provenance": verdict.provenance}
    if isinstance(verdict, NotIntegrable):
        return {"verdict": "not-integrable", "gap_floor": verdict.gap_floor,
                "witness": verdict.witness}
    if isinstance(verdict, Undecided):
        return {"verdict": "undecided", "best_gap": verdict.best_gap,
                "budget_spent": verdict.budget_spent}
    raise CliError(f"unexpected verdict {verdict!r}")


def _verdict_exit(payload: dict) -> int:
    return {"integrable": EXIT_OK, "not-integrable": EXIT_NOT_INTEGRABLE,
            "undecided": EXIT_UNDECIDED}[payload["verdict"]]


_VERDICT_COLUMNS = ("verdict", "mid", "rad", "provenance", "gap_floor",
                    "best_gap", "budget_spent", "witness")


def _render_verdict(payload: dict, cfg: RunConfig) -> str:
    machine = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if cfg.format == "json":
        return machine + "\n"
    if cfg.format == "csv":
        row = [repr(payload[k]) if isinstance(payload.get(k), float)
               else str(payload.get(k, "")) for k in _VERDICT_COLUMNS]
        return ",".join(_VERDICT_COLUMNS) + "\n" + ",".join(row) + "\n"
    lines = [f"verdict: {payload['verdict']}"]
    if payload["verdict"] == "integrable":
        lines.append(f"value: {payload['mid']:.12g} ± {payload['rad']:.3g}")
        lines.append(f"provenance: {payload['provenance']}")
    elif payload["verdict"] == "not-integrable":
        lines.append(f"gap floor: {payload['gap_floor']:.12g}")
        lines.append(f"witness: {payload['witness']}")
    else:
        lines.append(f"best gap: {payload['best_gap']:.12g} "
                     f"after {payload['budget_spent']} subintervals")
    lines.append(machine)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_integrate(args) -> int:
    cfg = _config(args)
    f = build_handle(_load_spec(args.fspec), _domain_arg(args))
    g = build_handle(_load_spec(args.gspec), f.domain)
    verdict = integrate_rs_reduced(f, g, args.c, cfg.tolerance, cfg.budget, cfg.slack)
    payload = _verdict_payload(verdict)
    _emit(_render_verdict(payload, cfg), cfg)
    return _verdict_exit(payload)


def cmd_decide(args) -> int:
    cfg = _config(args)
    h = build_handle(_load_spec(args.hspec), _domain_arg(args))
    verdict = decide_riemann_integrable(h, cfg.tolerance, cfg.budget, cfg.slack)
    payload = _verdict_payload(verdict)
    _emit(_render_verdict(payload, cfg), cfg)
    return _verdict_exit(payload)


def cmd_verify(args) -> int:
    cfg = _config(args)
    if args.corpus == "default":
        corpus = default_corpus()
    else:
        if not os.path.exists(args.corpus):
            raise CliError(f"corpus file not found: {args.corpus}")
        corpus = load_corpus(args.corpus)
    reports, summary = run_all(corpus, cfg.seed, cfg.slack)
    if cfg.format == "json":
        body = "".join(report_json_line(r) + "\n" for r in reports)
    elif cfg.format == "csv":
        body = reports_csv(reports)
    else:
        lines = []
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            detail = "" if r.residual is None else \
                f" residual={r.residual:.6g} bound={r.bound:.6g}"
            note = f" [{r.note}]" if r.note else ""
            lines.append(f"{status} {r.scenario} ({r.statement_id}){detail}{note}")
        lines.append(json.dumps({"summary": summary}, sort_keys=True,
                                separators=(",", ":")))
        body = "\n".join(lines) + "\n"
    _emit(body, cfg)
    return EXIT_OK if summary["failed"] == 0 else EXIT_NOT_INTEGRABLE


def cmd_table(args) -> int:
    cfg = _config(args)
    meshes = []
    try:
        meshes = [float(m) for m in args.meshes.split(",") if m.strip()]
    except ValueError:
        raise CliError(f"bad mesh list {args.meshes!r}")
    if not meshes or any(m <= 0 for m in meshes):
        raise CliError("meshes must be positive")
    if any(b >= a for a, b in zip(meshes, meshes[1:])):
        raise CliError("meshes must be strictly descending")
    f = build_handle(_load_spec(args.fspec), _domain_arg(args))
    g = build_handle(_load_spec(args.gspec), f.domain)
    G = IndefiniteIntegral(g, 0.0, slack=cfg.slack)
    dom = f.domain
    rows = []
    for m in meshes:
        n = max(1, round(dom.width / m))
        p = uniform(dom, n)
        hi_sum = rs_sum(f, G, tag(p, "sup-seeking", f))
        lo_sum = rs_sum(f, G, tag(p, "inf-seeking", f))
        rows.append({"mesh": dom.width / n,
                     "spread": abs(hi_sum.value - lo_sum.value),
                     "bound": rs_vs_riemann_gap_bound(f, g, p)})
    if cfg.format == "json":
        body = json.dumps(rows, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        lines = ["mesh,spread,bound"]
        lines.extend(f"{r['mesh']!r},{r['spread']!r},{r['bound']!r}" for r in rows)
        body = "\n".join(lines) + "\n"
    _emit(body, cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser / entry point
# ---------------------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--tol", type=float, default=None,
                    help="certified tolerance (default 1e-6)")
    sp.add_argument("--budget", type=int, default=None,
                    help=f"max subintervals in a working partition (default {DEFAULT_BUDGET})")
    sp.add_argument("--seed", type=int, default=None, help="harness seed (default 0)")
    sp.add_argument("--slack", type=float, default=None,
                    help="additive slack per arithmetic reduction (default 2^-40)")
    sp.add_argument("--format", choices=FORMATS, default=None,
                    help="output format (default human)")
    sp.add_argument("--out", default=None, help="write output to this path")


def _add_domain(sp):
    sp.add_argument("--domain", type=float, nargs=2, metavar=("LO", "HI"),
                    default=None, help="override the spec's domain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsquad",
        description="Certified Riemann-Stieltjes quadrature over an exact-oracle "
                    "function catalog.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("integrate", help="integrate f against G(x) = c + integral of g")
    sp.add_argument("fspec", help="integrand spec: JSON file path or inline JSON")
    sp.add_argument("gspec", help="integrator density spec")
    sp.add_argument("--c", type=float, default=0.0, help="additive constant of G")
    _add_domain(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_integrate)

    sp = sub.add_parser("decide", help="decide Riemann integrability of a handle")
    sp.add_argument("hspec", help="integrand spec: JSON file path or inline JSON")
    _add_domain(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("verify", help="run a verification corpus")
    sp.add_argument("corpus", help="'default' or a path to a JSON corpus")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("table", help="emit a (mesh, RS-sum spread, bound) table")
    sp.add_argument("fspec", help="integrand spec")
    sp.add_argument("gspec", help="integrator density spec")
    sp.add_argument("--meshes", required=True,
                    help="comma-separated positive descending mesh sizes")
    _add_domain(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (CliError, CatalogError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
