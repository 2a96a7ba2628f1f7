"""Executable verification scenarios and structured reports.

Each scenario pins one statement family to a check procedure:

  eq3               reduction vs direct RS integration agree within radii,
                    including invariance under the integrator constant c
  lemma1            mixed sums stay within the oscillation bound of the
                    y-tagged Riemann sum of the product, for any z-tags
  necessity-gap     Riemann sums of f*g stay within the oscillation bound of
                    the RS sums of f, for every tagging
  corollary-parts   the integration-by-parts identity residual is within the
                    combined radii
  corollary-symmetric  both RS integrals of a Riemann-integrable pair (one an
                    indefinite integral) exist and link through parts
  mvt               mean-value points are strictly interior and satisfy the
                    relaxed inequalities
  counterexample-s3 a bounded non-integrable f against a density vanishing on
                    the bad set: f is NotIntegrable there, the RS integral
                    still exists; with a nonvanishing density the verdict
                    flips to NotIntegrable and the tagged RS sums stay spread

Scenario failures never abort a run; the summary carries the failure count.
Reports serialize as JSON lines (without the runtime field, so a fixed seed
reproduces them byte-for-bit) and as a CSV summary that includes seconds.
Scenarios are independent and may run in parallel; reports are gathered in
corpus order.
"""

from __future__ import annotations

import json
import math
import random
import time
import zlib
from dataclasses import dataclass, field, fields
from typing import Callable, Optional

from .catalog import (
    SLACK_DEFAULT,
    FunctionHandle,
    Interval,
    SpecError,
    TagKind,
    build_handle,
    product_handle,
)
from .integrator import (
    DEFAULT_BUDGET,
    Enclosure,
    IndefiniteIntegral,
    Integrable,
    NotIntegrable,
    decide_riemann_integrable,
    integrate_by_parts,
    integrate_rs_direct,
    integrate_rs_reduced,
    mean_value_points,
    symmetric_rs_integrate,
)
from .partition import (
    DoubleTaggedPartition,
    Partition,
    Tag,
    TaggedPartition,
    mesh,
    tag,
    uniform,
)
from .sums import (
    mixed_sum,
    mixed_sum_error_bound,
    riemann_sum,
    rs_sum,
    rs_vs_riemann_gap_bound,
)

STATEMENT_IDS = (
    "eq3",
    "lemma1",
    "necessity-gap",
    "corollary-parts",
    "corollary-symmetric",
    "mvt",
    "counterexample-s3",
)

C_SWEEP = (-3.0, 0.0, 7.0)


@dataclass
class Scenario:
    """One verification scenario; statement_id selects the check procedure."""

    name: str
    statement_id: str
    f: Optional[dict] = None
    g: Optional[dict] = None
    domain: tuple = (0.0, 1.0)
    c: float = 0.0
    tol: float = 1e-6
    tol_direct: Optional[float] = None
    trials: int = 6
    max_cells: int = 32
    budget: int = DEFAULT_BUDGET
    random_f: Optional[str] = None
    random_g: Optional[str] = None
    expected: Optional[list] = None
    check_uniform_bound_reciprocal: bool = False
    negate_identity: bool = False

    def __post_init__(self):
        if self.statement_id not in STATEMENT_IDS:
            raise SpecError(f"unknown statement id {self.statement_id!r}",
                            f"scenario[{self.name}].statement_id")
        if self.tol <= 0:
            raise SpecError("tolerance must be positive",
                            f"scenario[{self.name}].tol")

    @property
    def interval(self) -> Interval:
        return Interval(float(self.domain[0]), float(self.domain[1]))


@dataclass
class VerificationReport:
    """Outcome of one scenario: worst observed residual vs certified bound."""

    scenario: str
    statement_id: str
    passed: bool
    residual: Optional[float]
    bound: Optional[float]
    partitions_tested: int
    mesh_final: Optional[float]
    seconds: float
    note: str = ""


def report_json_line(r: VerificationReport) -> str:
    """One JSON object per report; omits seconds so runs are byte-reproducible."""
    payload = {
        "scenario": r.scenario,
        "statement_id": r.statement_id,
        "pass": r.passed,
        "residual": r.residual,
        "bound": r.bound,
        "partitions_tested": r.partitions_tested,
        "mesh_final": r.mesh_final,
        "note": r.note,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


CSV_HEADER = "scenario,statement_id,pass,residual,bound,mesh_final,seconds"


def reports_csv(reports: list[VerificationReport]) -> str:
    def cell(v) -> str:
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        return repr(v) if isinstance(v, float) else str(v)

    lines = [CSV_HEADER]
    for r in reports:
        lines.append(",".join((
            r.scenario, r.statement_id, cell(r.passed), cell(r.residual),
            cell(r.bound), cell(r.mesh_final), cell(r.seconds))))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Random function specs (exact oracles stay available everywhere)
# ---------------------------------------------------------------------------

def random_piecewise_poly_spec(rng: random.Random, domain: tuple,
                               max_pieces: int = 8, max_degree: int = 3) -> dict:
    lo, hi = float(domain[0]), float(domain[1])
    n = rng.randint(1, max_pieces)
    width = hi - lo
    cuts: list[float] = []
    while len(cuts) < n - 1:
        x = rng.uniform(lo + 0.05 * width, hi - 0.05 * width)
        if all(abs(x - c) > 1e-3 * width for c in cuts):
            cuts.append(x)
    bps = [lo] + sorted(cuts) + [hi]
    coeffs = [[rng.uniform(-2.0, 2.0) for _ in range(rng.randint(1, max_degree + 1))]
              for _ in range(n)]
    return {"kind": "piecewise-polynomial", "domain": [lo, hi],
            "breakpoints": bps, "coefficients": coeffs}


def random_step_spec(rng: random.Random, domain: tuple, max_pieces: int = 8) -> dict:
    lo, hi = float(domain[0]), float(domain[1])
    n = rng.randint(1, max_pieces)
    width = hi - lo
    cuts: list[float] = []
    while len(cuts) < n - 1:
        x = rng.uniform(lo + 0.05 * width, hi - 0.05 * width)
        if all(abs(x - c) > 1e-3 * width for c in cuts):
            cuts.append(x)
    return {"kind": "step", "domain": [lo, hi],
            "breakpoints": [lo] + sorted(cuts) + [hi],
            "values": [rng.uniform(-2.0, 2.0) for _ in range(n)],
            "convention": rng.choice(("left", "right"))}


def _draw_spec(kind: Optional[str], rng: random.Random, domain: tuple) -> dict:
    if kind == "step":
        return random_step_spec(rng, domain)
    if kind == "mixed":
        return (random_step_spec(rng, domain) if rng.random() < 0.5
                else random_piecewise_poly_spec(rng, domain))
    return random_piecewise_poly_spec(rng, domain)


def _scenario_pair(s: Scenario, rng: random.Random):
    dom = s.interval
    fspec = s.f if s.f is not None else _draw_spec(s.random_f, rng, s.domain)
    gspec = s.g if s.g is not None else _draw_spec(s.random_g, rng, s.domain)
    return build_handle(fspec, dom), build_handle(gspec, dom)


def _random_partition(rng: random.Random, dom: Interval, max_cells: int) -> Partition:
    n = rng.randint(1, max_cells)
    pts = {dom.lo, dom.hi}
    guard = 0
    while len(pts) < n + 1 and guard < 10 * n + 100:
        pts.add(rng.uniform(dom.lo, dom.hi))
        guard += 1
    return Partition(tuple(sorted(pts)))


def _random_tag(rng: random.Random, lo: float, hi: float,
                h: FunctionHandle) -> Tag:
    kind = None
    if not h.pointwise:
        kind = rng.choice((None, TagKind.ON, TagKind.OFF))
    return Tag(rng.uniform(lo, hi), kind)


# ---------------------------------------------------------------------------
# Statement checks
# ---------------------------------------------------------------------------

class _Worst:
    """Tracks the worst (residual, bound) pair by margin residual - bound."""

    def __init__(self):
        self.residual = 0.0
        self.bound = math.inf
        self._margin = -math.inf
        self.ok = True

    def observe(self, residual: float, bound: float):
        margin = residual - bound
        if margin > self._margin:
            self._margin = margin
            self.residual = residual
            self.bound = bound
        if residual > bound:
            self.ok = False


def _check_eq3(s: Scenario, rng: random.Random, slack: float):
    worst = _Worst()
    notes = []
    runs = 0
    tol_direct = s.tol_direct if s.tol_direct is not None else max(s.tol, 1e-2)
    for _ in range(s.trials):
        f, g = _scenario_pair(s, rng)
        red = integrate_rs_reduced(f, g, s.c, s.tol, s.budget, slack)
        if not isinstance(red, Integrable):
            return False, None, None, runs, None, f"reduced verdict {type(red).__name__}"
        enc = red.enclosure
        directs = []
        for c in C_SWEEP:
            G = IndefiniteIntegral(g, c, slack=slack)
            d = integrate_rs_direct(f, G, tol_direct, s.budget, slack)
            runs += 1
            if not isinstance(d, Enclosure):
                return False, None, None, runs, None, f"direct verdict {type(d).__name__}"
            directs.append(d)
            worst.observe(abs(d.mid - enc.mid), d.rad + enc.rad)
        for i in range(len(directs)):
            for j in range(i + 1, len(directs)):
                worst.observe(abs(directs[i].mid - directs[j].mid),
                              directs[i].rad + directs[j].rad)
    if not worst.ok:
        notes.append("agreement violated")
    return worst.ok, worst.residual, worst.bound, runs, None, "; ".join(notes)


def _check_lemma1(s: Scenario, rng: random.Random, slack: float):
    worst = _Worst()
    partitions = 0
    mesh_final = None
    for _ in range(s.trials):
        f, g = _scenario_pair(s, rng)
        fg = product_handle(f, g)
        p = _random_partition(rng, s.interval, s.max_cells)
        partitions += 1
        mesh_final = mesh(p) if mesh_final is None else min(mesh_final, mesh(p))
        ys, zs = [], []
        for lo, hi in zip(p.points, p.points[1:]):
            ys.append(_random_tag(rng, lo, hi, f))
            zs.append(_random_tag(rng, lo, hi, g))
        dtp = DoubleTaggedPartition(p, tuple(zip(ys, zs)))
        m = mixed_sum(f, g, dtp)
        r = riemann_sum(fg, TaggedPartition(p, tuple(ys)))
        bound = mixed_sum_error_bound(f, g, p)
        worst.observe(abs(m.value - r.value), bound + slack * (p.n + 1))
    note = ""
    if s.check_uniform_bound_reciprocal:
        f, g = _scenario_pair(s, rng)
        width = s.interval.width
        for n in (4, 8, 16, 64):
            p = uniform(s.interval, n)
            partitions += 1
            bound = mixed_sum_error_bound(f, g, p)
            expected = f.sup_abs() * width * width / n
            worst.observe(abs(bound - expected), slack * (n + 1))
        note = "uniform bound matches sup|f|*(b-a)^2/n"
    return worst.ok, worst.residual, worst.bound, partitions, mesh_final, note


def _check_necessity(s: Scenario, rng: random.Random, slack: float):
    worst = _Worst()
    partitions = 0
    mesh_final = None
    strategies = ("left", "right", "midpoint", "inf-seeking", "sup-seeking")
    for i in range(s.trials):
        f, g = _scenario_pair(s, rng)
        G = IndefiniteIntegral(g, s.c, slack=slack)
        fg = product_handle(f, g)
        p = _random_partition(rng, s.interval, s.max_cells)
        partitions += 1
        mesh_final = mesh(p) if mesh_final is None else min(mesh_final, mesh(p))
        tp = tag(p, strategies[i % len(strategies)], f)
        r = riemann_sum(fg, tp)
        rs = rs_sum(f, G, tp)
        bound = rs_vs_riemann_gap_bound(f, g, p)
        worst.observe(abs(r.value - rs.value),
                      bound + (rs.bound or 0.0) + slack * (p.n + 1))
    return worst.ok, worst.residual, worst.bound, partitions, mesh_final, ""


def _parts_box(f: FunctionHandle, G: IndefiniteIntegral):
    dom = f.domain
    e_a, e_b = G.eval(dom.lo), G.eval(dom.hi)
    fa, fb = f.eval(dom.lo), f.eval(dom.hi)
    return e_b.mid * fb - e_a.mid * fa, e_b.rad * abs(fb) + e_a.rad * abs(fa)


def _check_parts(s: Scenario, rng: random.Random, slack: float):
    worst = _Worst()
    runs = 0
    sign = -1.0 if s.negate_identity else 1.0
    for _ in range(s.trials):
        f, g = _scenario_pair(s, rng)
        pv = integrate_by_parts(f, g, s.c, s.tol, s.budget, slack)
        rv = integrate_rs_reduced(f, g, s.c, s.tol, s.budget, slack)
        runs += 1
        if not isinstance(pv, Enclosure) or not isinstance(rv, Integrable):
            return False, None, None, runs, None, "parts or reduction undecided"
        box, box_rad = _parts_box(f, IndefiniteIntegral(g, s.c, slack=slack))
        residual = abs(sign * pv.mid + rv.enclosure.mid - box)
        worst.observe(residual,
                      pv.rad + rv.enclosure.rad + box_rad + slack * 4.0)
    return worst.ok, worst.residual, worst.bound, runs, None, ""


def _check_symmetric(s: Scenario, rng: random.Random, slack: float):
    worst = _Worst()
    runs = 0
    notes = []
    for _ in range(s.trials):
        alpha, density = _scenario_pair(s, rng)
        out = symmetric_rs_integrate(alpha, density, "beta", s.c, s.tol,
                                     s.budget, slack)
        runs += 1
        if not isinstance(out, tuple):
            return False, None, None, runs, None, f"verdict {type(out).__name__}"
        e1, e2 = out
        box, box_rad = _parts_box(alpha, IndefiniteIntegral(density, s.c, slack=slack))
        worst.observe(abs(e1.mid + e2.mid - box),
                      e1.rad + e2.rad + box_rad + slack * 4.0)
        if s.expected is not None:
            for enc, value in zip((e1, e2), s.expected):
                worst.observe(abs(enc.mid - float(value)), enc.rad + slack)
            notes = ["expected values enclosed"]
    return worst.ok, worst.residual, worst.bound, runs, None, "; ".join(notes)


def _check_mvt(s: Scenario, rng: random.Random, slack: float):
    worst = _Worst()
    runs = 0
    notes = []
    for _ in range(s.trials):
        h, _ = _scenario_pair(s, rng)
        verdict = decide_riemann_integrable(h, s.tol, s.budget, slack)
        if not isinstance(verdict, Integrable):
            return False, None, None, runs, None, "integrand undecided"
        enc = verdict.enclosure
        c1, c2 = mean_value_points(h, tol=s.tol, budget=s.budget, slack=slack)
        runs += 1
        dom = h.domain
        if not (dom.lo < c1 < dom.hi and dom.lo < c2 < dom.hi):
            return False, None, None, runs, None, "witness not strictly interior"
        w = dom.width
        worst.observe(h.eval(c1) * w, enc.mid + enc.rad + slack)
        worst.observe(enc.mid - enc.rad, h.eval(c2) * w + slack)
        if s.expected is not None:
            lo_v, hi_v = float(s.expected[0]), float(s.expected[1])
            mean = enc.mid / w
            if not (abs(h.eval(c1) - lo_v) <= 1e-9 and abs(h.eval(c2) - hi_v) <= 1e-9
                    and h.eval(c1) < mean < h.eval(c2)):
                return False, None, None, runs, None, "bracketing values not matched"
            notes = ["mean bracketed, not attained"]
    return worst.ok, worst.residual, worst.bound, runs, None, "; ".join(notes)


def _glued_spec(domain: tuple) -> dict:
    lo, hi = domain
    midpt = 0.5 * (lo + hi)
    return {"kind": "sum", "domain": [lo, hi], "terms": [
        {"kind": "named-special", "name": "dense-indicator",
         "params": {"sub": [lo, midpt], "off": 0.0, "on": 1.0}},
        {"kind": "piecewise-polynomial", "breakpoints": [lo, midpt, hi],
         "coefficients": [[0.0], [0.0, 1.0]]},
    ]}


def _check_counterexample(s: Scenario, rng: random.Random, slack: float):
    dom = s.interval
    midpt = 0.5 * (dom.lo + dom.hi)
    f = build_handle(_glued_spec(s.domain), dom)
    g = build_handle({"kind": "step", "breakpoints": [dom.lo, midpt, dom.hi],
                      "values": [0.0, 1.0]}, dom)
    notes = []

    bad = decide_riemann_integrable(f.restrict(Interval(dom.lo, midpt)),
                                    s.tol, s.budget, slack)
    if not isinstance(bad, NotIntegrable):
        return False, None, None, 0, None, "restriction not certified NotIntegrable"
    floor_err = abs(bad.gap_floor - (midpt - dom.lo))
    if floor_err > slack:
        return False, floor_err, slack, 0, None, "gap floor off"
    notes.append(f"gap_floor {bad.gap_floor}")

    red = integrate_rs_reduced(f, g, s.c, s.tol, s.budget, slack)
    if not isinstance(red, Integrable):
        return False, None, None, 0, None, "product integral undecided"
    expected = 0.5 * (dom.hi ** 2 - midpt ** 2)  # integral of x over the upper half
    residual = abs(red.enclosure.mid - expected)
    if residual > s.tol:
        return False, residual, s.tol, 0, None, "reduced value off"
    notes.append("RS integral exists despite non-integrable f")

    dense = build_handle({"kind": "named-special", "name": "dense-indicator",
                          "domain": list(s.domain),
                          "params": {"sub": list(s.domain), "off": 0.0, "on": 1.0}})
    one = build_handle({"kind": "piecewise-polynomial",
                        "breakpoints": list(s.domain), "coefficients": [[1.0]]}, dom)
    flipped = integrate_rs_reduced(dense, one, s.c, s.tol, s.budget, slack)
    if not isinstance(flipped, NotIntegrable):
        return False, None, None, 0, None, "necessity direction not certified"
    if abs(flipped.gap_floor - dom.width) > slack:
        return False, abs(flipped.gap_floor - dom.width), slack, 0, None, \
            "necessity gap floor off"
    notes.append(f"nonvanishing density flips to gap_floor {flipped.gap_floor}")

    worst = _Worst()
    partitions = 0
    mesh_final = None
    G = IndefiniteIntegral(one, s.c, slack=slack)
    width = dom.width
    for n in (1, 2, 4, 8, 16, 32):
        p = uniform(dom, n)
        partitions += 1
        mesh_final = mesh(p)
        hi_sum = rs_sum(dense, G, tag(p, "sup-seeking", dense))
        lo_sum = rs_sum(dense, G, tag(p, "inf-seeking", dense))
        spread = hi_sum.value - lo_sum.value
        worst.observe(abs(spread - width),
                      (hi_sum.bound or 0.0) + (lo_sum.bound or 0.0) + slack * (n + 1))
    if not worst.ok:
        return False, worst.residual, worst.bound, partitions, mesh_final, \
            "tagged RS spread off"
    return True, residual, s.tol, partitions, mesh_final, "; ".join(notes)


_CHECKS: dict[str, Callable] = {
    "eq3": _check_eq3,
    "lemma1": _check_lemma1,
    "necessity-gap": _check_necessity,
    "corollary-parts": _check_parts,
    "corollary-symmetric": _check_symmetric,
    "mvt": _check_mvt,
    "counterexample-s3": _check_counterexample,
}


def run_scenario(s: Scenario, seed: int, slack: float = SLACK_DEFAULT) -> VerificationReport:
    """Run one scenario deterministically for the given seed."""
    rng = random.Random((zlib.crc32(s.name.encode()) << 17) ^ (seed & 0xFFFFFFFF))
    start = time.perf_counter()
    try:
        passed, residual, bound, partitions, mesh_final, note = \
            _CHECKS[s.statement_id](s, rng, slack)
    except Exception as e:  # build/run failures are reported, not thrown
        passed, residual, bound, partitions, mesh_final = False, None, None, 0, None
        note = f"error: {type(e).__name__}: {e}"
    seconds = time.perf_counter() - start
    return VerificationReport(
        scenario=s.name, statement_id=s.statement_id, passed=passed,
        residual=residual, bound=bound, partitions_tested=partitions,
        mesh_final=mesh_final, seconds=seconds, note=note)


def run_all(corpus: list[Scenario], seed: int,
            slack: float = SLACK_DEFAULT) -> tuple[list[VerificationReport], dict]:
    """Run every scenario; never raises past the per-scenario reports."""
    reports = [run_scenario(s, seed, slack) for s in corpus]
    failed = sum(1 for r in reports if not r.passed)
    summary = {"total": len(reports), "passed": len(reports) - failed,
               "failed": failed}
    return reports, summary


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

def _poly(domain, breakpoints, coefficients) -> dict:
    return {"kind": "piecewise-polynomial", "domain": list(domain),
            "breakpoints": breakpoints, "coefficients": coefficients}


def _identity(domain) -> dict:
    return _poly(domain, list(domain), [[0.0, 1.0]])


def default_corpus() -> list[Scenario]:
    """>= 12 scenarios covering all seven statement families with
    nontrivial function pairs."""
    dom = (0.0, 1.0)
    sine = {"kind": "named-special", "name": "scaled-sin", "domain": [0.0, 1.0],
            "params": {"amplitude": 1.0, "frequency": 3.0}}
    dense_half = {"kind": "named-special", "name": "dense-indicator",
                  "domain": [0.0, 1.0],
                  "params": {"sub": [0.0, 0.5], "off": 0.0, "on": 1.0}}
    return [
        Scenario("eq3-linear-pair", "eq3", f=_identity(dom), g=_identity(dom),
                 tol=1e-8, trials=1),
        Scenario("eq3-random-cubics", "eq3", random_f="piecewise",
                 random_g="piecewise", tol=1e-8, trials=3),
        Scenario("eq3-step-times-poly", "eq3", random_f="step",
                 random_g="piecewise", tol=1e-8, trials=3),
        Scenario("eq3-sine-integrand", "eq3", f=sine, random_g="step",
                 tol=5e-3, tol_direct=2e-2, trials=2),
        Scenario("lemma1-random-cubics", "lemma1", random_f="piecewise",
                 random_g="piecewise", trials=150),
        Scenario("lemma1-identity-integrand", "lemma1", f=_identity(dom),
                 g=_identity(dom), trials=20,
                 check_uniform_bound_reciprocal=True),
        Scenario("lemma1-dense-oscillator", "lemma1", random_f="piecewise",
                 g=dense_half, trials=60),
        Scenario("necessity-random-cubics", "necessity-gap",
                 random_f="piecewise", random_g="piecewise", trials=100),
        Scenario("necessity-step-integrator", "necessity-gap",
                 random_f="piecewise", random_g="step", trials=60),
        Scenario("parts-random-pairs", "corollary-parts", random_f="mixed",
                 random_g="mixed", tol=1e-8, trials=8),
        Scenario("parts-step-against-poly", "corollary-parts", random_f="step",
                 random_g="piecewise", tol=1e-8, trials=6),
        Scenario("symmetric-square-vs-linear", "corollary-symmetric",
                 f=_poly(dom, [0.0, 1.0], [[0.0, 0.0, 1.0]]), g=_identity(dom),
                 tol=1e-9, trials=1, expected=[0.25, 0.25]),
        Scenario("symmetric-random-pairs", "corollary-symmetric",
                 random_f="mixed", random_g="piecewise", tol=1e-8, trials=6),
        Scenario("mvt-random-integrands", "mvt", random_f="mixed", trials=12),
        Scenario("mvt-step-bracket", "mvt",
                 f={"kind": "step", "domain": [0.0, 1.0],
                    "breakpoints": [0.0, 0.5, 1.0], "values": [0.0, 1.0],
                    "convention": "right"},
                 trials=1, expected=[0.0, 1.0]),
        Scenario("counterexample-family", "counterexample-s3", tol=1e-6),
    ]


_SCENARIO_FIELDS = {f.name for f in fields(Scenario)}


def load_corpus(path: str) -> list[Scenario]:
    """Load a JSON corpus: a list of scenario objects."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise SpecError(f"invalid JSON: {e}", path)
    if not isinstance(raw, list):
        raise SpecError("corpus must be a JSON list of scenarios", path)
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise SpecError("scenario must be an object", f"{path}[{i}]")
        unknown = set(item) - _SCENARIO_FIELDS
        if unknown:
            raise SpecError(f"unknown fields {sorted(unknown)}", f"{path}[{i}]")
        if "name" not in item or "statement_id" not in item:
            raise SpecError("scenario needs name and statement_id", f"{path}[{i}]")
        if "domain" in item:
            item = dict(item, domain=tuple(item["domain"]))
        out.append(Scenario(**item))
    return out
