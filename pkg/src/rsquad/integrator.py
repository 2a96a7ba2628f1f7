"""Certified decision and integration procedures.

The decision procedure drives a worst-first bisection of a working partition
(the same policy as partition.refine_worst: split the max-score subinterval,
ties to the leftmost) and maintains certified lower/upper bounds on the
integral per subinterval: the exact piece integral where the handle is
polynomial-representable on the cell, the Darboux bracket [inf*w, sup*w]
otherwise.  The reported gap is the sum of per-cell bound widths, so on
purely Darboux cells it is exactly the oscillation-weighted sum that the
non-integrability certificates floor from below.

Verdict semantics: Integrable(enclosure) certifies that both Darboux
integrals (hence the Riemann integral, when it exists) lie inside
mid +/- rad.  NotIntegrable is emitted only from a declared uniform
oscillation lower bound, never from a stalled sample.  Undecided reports the
best gap at budget exhaustion.

Decision procedures are single-threaded state machines over an owned working
partition; IndefiniteIntegral caches are guarded for concurrent readers.
"""

from __future__ import annotations

import heapq
import math
import threading
from dataclasses import dataclass
from typing import Optional, Union

from .catalog import (
    SLACK_DEFAULT,
    DomainError,
    FunctionHandle,
    Interval,
    TagKind,
    product_handle,
)

DEFAULT_BUDGET = 2 ** 16

PROVENANCES = ("darboux-gap", "reduction", "direct-rs", "parts", "slack")


class IntegrationError(RuntimeError):
    """A procedure's precondition failed (e.g. a non-decidable density)."""

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class MeanValuePointsError(IntegrationError):
    """Mean-value search exhausted its budget; carries the best candidates."""

    def __init__(self, message: str, best_c1: Optional[float], best_c2: Optional[float]):
        super().__init__(message)
        self.best_c1 = best_c1
        self.best_c2 = best_c2


@dataclass(frozen=True)
class Enclosure:
    """Certified value: |true value - mid| <= rad."""

    mid: float
    rad: float
    provenance: str

    def __post_init__(self):
        if not self.rad >= 0:
            raise ValueError(f"radius must be nonnegative, got {self.rad}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def contains(self, x: float) -> bool:
        return abs(x - self.mid) <= self.rad

    def reprovenance(self, provenance: str) -> "Enclosure":
        return Enclosure(self.mid, self.rad, provenance)


@dataclass(frozen=True)
class Integrable:
    enclosure: Enclosure


@dataclass(frozen=True)
class NotIntegrable:
    gap_floor: float
    witness: str

    def __post_init__(self):
        if not self.gap_floor > 0:
            raise ValueError("gap floor must be positive")


@dataclass(frozen=True)
class Undecided:
    best_gap: float
    budget_spent: int


IntegrabilityVerdict = Union[Integrable, NotIntegrable, Undecided]


# ---------------------------------------------------------------------------
# Indefinite integrals G(x) = c + integral of g from a to x
# ---------------------------------------------------------------------------

class IndefiniteIntegral:
    """Absolutely continuous integrator with density g and G(a) = c exactly.

    Evaluations return certified enclosures: the exact piece integral with a
    slack-level radius when the density supports it, otherwise a Darboux
    enclosure refined to the requested tolerance (``tol``).  Evaluations are
    memoized; the cache is safe under concurrent read, exclusive write.
    """

    def __init__(self, g: FunctionHandle, c: float = 0.0, tol: float = 1e-9,
                 budget: int = DEFAULT_BUDGET, slack: float = SLACK_DEFAULT):
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        self.g = g
        self.c = float(c)
        self.tol = tol
        self.budget = budget
        self.slack = slack
        self._cache: dict[float, Enclosure] = {
            g.domain.lo: Enclosure(self.c, 0.0, "slack")}
        self._lock = threading.Lock()

    @property
    def domain(self) -> Interval:
        return self.g.domain

    def eval(self, x: float) -> Enclosure:
        if not self.domain.contains(x):
            raise DomainError(
                f"{x} outside integrator domain [{self.domain.lo}, {self.domain.hi}]")
        with self._lock:
            hit = self._cache.get(x)
        if hit is not None:
            return hit
        iv = Interval(self.domain.lo, x)
        exact = self.g.exact_integral(iv)
        if exact is not None:
            out = Enclosure(self.c + exact, self.slack * (1.0 + iv.width), "slack")
        else:
            verdict = decide_riemann_integrable(
                self.g.restrict(iv), self.tol, self.budget, self.slack)
            if not isinstance(verdict, Integrable):
                raise IntegrationError(
                    f"density not decidable on [{iv.lo}, {iv.hi}]", verdict)
            e = verdict.enclosure
            out = Enclosure(self.c + e.mid, e.rad, "darboux-gap")
        with self._lock:
            self._cache[x] = out
        return out


def eval_indefinite(G: IndefiniteIntegral, x: float) -> Enclosure:
    """Certified G(x); G(a) is (c, 0) exactly."""
    return G.eval(x)


# ---------------------------------------------------------------------------
# Integrability decision
# ---------------------------------------------------------------------------

def _cell_bounds(h: FunctionHandle, lo: float, hi: float,
                 slack: float) -> tuple[float, float]:
    iv = Interval(lo, hi)
    w = hi - lo
    v = h.exact_integral(iv)
    if v is not None:
        cushion = slack * w
        return v - cushion, v + cushion
    r = h.range(iv)
    return r.inf * w, r.sup * w


def decide_riemann_integrable(h: FunctionHandle, tol: float,
                              budget: int = DEFAULT_BUDGET,
                              slack: float = SLACK_DEFAULT) -> IntegrabilityVerdict:
    """Decide Riemann integrability of h at tolerance tol.

    Declared uniform-oscillation certificates (on h or derived from its
    factors) yield NotIntegrable immediately: every partition keeps
    sum(osc * width) >= gamma * width(region) on the certified region.
    Otherwise the working partition is refined worst-first until the
    certified gap is at most 2*tol (Integrable) or the subinterval budget is
    exhausted (Undecided).  Conservative range oracles can only yield
    Integrable or Undecided.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    cert = h.osc_lower_uniform()
    if cert is not None:
        return NotIntegrable(
            gap_floor=cert.gamma * cert.region.width,
            witness=(f"oscillation >= {cert.gamma} on every nondegenerate "
                     f"subinterval of [{cert.region.lo}, {cert.region.hi}]"))

    dom = h.domain
    lo_b, hi_b = _cell_bounds(h, dom.lo, dom.hi, slack)
    cells: dict[float, tuple[int, float, float, float]] = {
        dom.lo: (0, dom.hi, lo_b, hi_b)}
    heap = [(-(hi_b - lo_b), dom.lo, 0)]
    seq = 0
    total_lo, total_hi = lo_b, hi_b

    def _exact_totals() -> tuple[float, float]:
        return (math.fsum(c[2] for c in cells.values()),
                math.fsum(c[3] for c in cells.values()))

    while True:
        n = len(cells)
        if total_hi - total_lo <= 2.0 * tol:
            total_lo, total_hi = _exact_totals()
            gap = total_hi - total_lo
            if gap <= 2.0 * tol:
                return Integrable(Enclosure(
                    0.5 * (total_lo + total_hi), 0.5 * gap + slack * n, "darboux-gap"))
        if n >= budget:
            total_lo, total_hi = _exact_totals()
            return Undecided(best_gap=total_hi - total_lo, budget_spent=n)
        entry = None
        while heap:
            _, lo, s = heapq.heappop(heap)
            cand = cells.get(lo)
            if cand is not None and cand[0] == s:
                entry = (lo, cand)
                break
        if entry is None:
            # nothing splittable left at float resolution
            total_lo, total_hi = _exact_totals()
            return Undecided(best_gap=total_hi - total_lo, budget_spent=n)
        lo, (_, hi, c_lo, c_hi) = entry
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            continue  # cell at float resolution; leave it in the totals
        l1, u1 = _cell_bounds(h, lo, mid, slack)
        l2, u2 = _cell_bounds(h, mid, hi, slack)
        seq += 2
        cells[lo] = (seq - 1, mid, l1, u1)
        cells[mid] = (seq, hi, l2, u2)
        heapq.heappush(heap, (-(u1 - l1), lo, seq - 1))
        heapq.heappush(heap, (-(u2 - l2), mid, seq))
        total_lo += l1 + l2 - c_lo
        total_hi += u1 + u2 - c_hi


def integrate_rs_reduced(f: FunctionHandle, g: FunctionHandle, c: float = 0.0,
                         tol: float = 1e-6, budget: int = DEFAULT_BUDGET,
                         slack: float = SLACK_DEFAULT) -> IntegrabilityVerdict:
    """Integral of f against G(x) = c + integral of g, via the reduction to
    the Riemann integral of the product f*g.

    Integrable(enclosure) certifies the value of the RS integral itself;
    NotIntegrable means the RS integral does not exist (necessity direction).
    The additive constant c cancels by telescoping and does not enter the
    value; the harness asserts this rather than assuming it.
    """
    verdict = decide_riemann_integrable(product_handle(f, g), tol, budget, slack)
    if isinstance(verdict, Integrable):
        return Integrable(verdict.enclosure.reprovenance("reduction"))
    return verdict


def integrate_rs_direct(f: FunctionHandle, G: IndefiniteIntegral,
                        tol: float = 1e-6, budget: int = DEFAULT_BUDGET,
                        slack: float = SLACK_DEFAULT
                        ) -> Union[Enclosure, Undecided]:
    """RS integral straight from tagged RS sums, as a cross-check.

    Refines worst-first, computing the RS sums for inf-seeking and
    sup-seeking taggings of f; stops when their spread plus the certified
    bound terms (per-cell osc(f) * sup|g| * width, G-evaluation radii, and
    slack) is at most 2*tol and returns the midpoint enclosure.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    g = G.g
    if f.domain != g.domain:
        raise DomainError("integrand and integrator on different domains")
    dom = f.domain

    def _make_cell(lo: float, hi: float):
        iv = Interval(lo, hi)
        osc_f = f.range(iv).spread
        rg = g.range(iv)
        gabs = max(abs(rg.inf), abs(rg.sup))
        w = hi - lo
        e_lo, e_hi = G.eval(lo), G.eval(hi)
        dG = e_hi.mid - e_lo.mid
        x_min, k_min = f.argmin_on(iv)
        x_max, k_max = f.argmax_on(iv)
        f_min = f.eval(x_min, k_min)
        f_max = f.eval(x_max, k_max)
        bterm = osc_f * gabs * w
        gradterm = max(abs(f_min), abs(f_max)) * (e_hi.rad + e_lo.rad)
        score = bterm + osc_f * abs(dG)
        return (hi, f_min * dG, f_max * dG, bterm, gradterm, score)

    cells: dict[float, tuple[int, tuple]] = {}
    heap: list[tuple[float, float, int]] = []
    seq = 0
    data = _make_cell(dom.lo, dom.hi)
    cells[dom.lo] = (0, data)
    heapq.heappush(heap, (-data[5], dom.lo, 0))

    while True:
        n = len(cells)
        s_inf = math.fsum(c[1][1] for c in cells.values())
        s_sup = math.fsum(c[1][2] for c in cells.values())
        bound = math.fsum(c[1][3] for c in cells.values())
        grad = math.fsum(c[1][4] for c in cells.values())
        spread = abs(s_sup - s_inf)
        certified = bound + grad + slack * n
        if spread + certified <= 2.0 * tol:
            return Enclosure(0.5 * (s_inf + s_sup), 0.5 * spread + certified,
                             "direct-rs")
        if n >= budget:
            return Undecided(best_gap=spread + certified, budget_spent=n)
        entry = None
        while heap:
            _, lo, s = heapq.heappop(heap)
            cand = cells.get(lo)
            if cand is not None and cand[0] == s:
                entry = (lo, cand[1])
                break
        if entry is None:
            return Undecided(best_gap=spread + certified, budget_spent=n)
        lo, data = entry
        hi = data[0]
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            continue
        d1 = _make_cell(lo, mid)
        d2 = _make_cell(mid, hi)
        seq += 2
        cells[lo] = (seq - 1, d1)
        cells[mid] = (seq, d2)
        heapq.heappush(heap, (-d1[5], lo, seq - 1))
        heapq.heappush(heap, (-d2[5], mid, seq))


def integrate_by_parts(f: FunctionHandle, g: FunctionHandle, c: float = 0.0,
                       tol: float = 1e-6, budget: int = DEFAULT_BUDGET,
                       slack: float = SLACK_DEFAULT
                       ) -> Union[Enclosure, IntegrabilityVerdict]:
    """Integral of G against f: G(b)f(b) - G(a)f(a) - integral of g*f.

    Radii combine additively, with the G endpoint radii scaled by the |f|
    endpoint values.  Tolerance budget: tol/2 to each sub-integral (the
    reduced product integral and the G endpoint evaluation), endpoint radii
    on top.  A non-Integrable product verdict is propagated unchanged.
    """
    verdict = integrate_rs_reduced(f, g, c, tol / 2.0, budget, slack)
    if not isinstance(verdict, Integrable):
        return verdict
    red = verdict.enclosure
    G = IndefiniteIntegral(g, c, tol=tol / 2.0, budget=budget, slack=slack)
    dom = f.domain
    e_a, e_b = G.eval(dom.lo), G.eval(dom.hi)
    fa, fb = f.eval(dom.lo), f.eval(dom.hi)
    mid = e_b.mid * fb - e_a.mid * fa - red.mid
    rad = red.rad + e_b.rad * abs(fb) + e_a.rad * abs(fa) + slack * 3.0
    return Enclosure(mid, rad, "parts")


def symmetric_rs_integrate(alpha: FunctionHandle, beta: FunctionHandle,
                           which_is_indefinite: str = "beta", c: float = 0.0,
                           tol: float = 1e-6, budget: int = DEFAULT_BUDGET,
                           slack: float = SLACK_DEFAULT):
    """(integral of alpha d(beta), integral of beta d(alpha)) when one side
    is an indefinite integral supplied as its density plus constant.

    The designated side's handle is its density; the returned pair always
    orders (d-beta, d-alpha).  The two enclosures are linked through the
    parts identity, which is checked before returning.
    """
    if which_is_indefinite not in ("alpha", "beta"):
        raise ValueError("which_is_indefinite must be 'alpha' or 'beta'")
    if which_is_indefinite == "beta":
        other, density = alpha, beta
    else:
        other, density = beta, alpha

    reduced = integrate_rs_reduced(other, density, c, tol / 2.0, budget, slack)
    if not isinstance(reduced, Integrable):
        return reduced
    parts = integrate_by_parts(other, density, c, tol / 2.0, budget, slack)
    if not isinstance(parts, Enclosure):
        return parts

    G = IndefiniteIntegral(density, c, tol=tol / 4.0, budget=budget, slack=slack)
    dom = other.domain
    e_a, e_b = G.eval(dom.lo), G.eval(dom.hi)
    box = e_b.mid * other.eval(dom.hi) - e_a.mid * other.eval(dom.lo)
    box_rad = e_b.rad * abs(other.eval(dom.hi)) + e_a.rad * abs(other.eval(dom.lo))
    red = reduced.enclosure
    residual = abs(red.mid + parts.mid - box)
    if residual > red.rad + parts.rad + box_rad + slack * 4.0:
        raise IntegrationError(
            f"parts identity violated by {residual} (allowed "
            f"{red.rad + parts.rad + box_rad})")
    if which_is_indefinite == "beta":
        return red, parts
    return parts, red


# ---------------------------------------------------------------------------
# Mean-value points
# ---------------------------------------------------------------------------

def _walk(evalf, x0: float, v0: float, lo: float, hi: float, step: float,
          descend: bool) -> tuple[float, float]:
    x, v = x0, v0
    width = hi - lo
    while step > width * 1e-15:
        moved = False
        for cand in (x - step, x + step):
            if not (lo < cand < hi):
                continue
            vc = evalf(cand)
            if (vc < v) if descend else (vc > v):
                x, v = cand, vc
                moved = True
        if not moved:
            step *= 0.5
    return x, v


def mean_value_points(h: FunctionHandle, iv: Optional[Interval] = None,
                      tol: float = 1e-6, budget: int = DEFAULT_BUDGET,
                      slack: float = SLACK_DEFAULT,
                      tag_kind: Optional[TagKind] = None) -> tuple[float, float]:
    """Strictly interior points (c1, c2) with h(c1)*|I| <= mid + rad and
    h(c2)*|I| >= mid - rad, where (mid, rad) encloses the integral of h.

    This is the certified relaxation of the sharp mean value theorem: the
    true integral is unknown to the machine, so the inequalities are
    asserted against the enclosure; they converge to the exact statement as
    tol -> 0.  Interiority is a hard postcondition: on search failure a
    MeanValuePointsError carrying the best candidates is raised instead of
    returning an endpoint.  Dense-oscillation handles are excluded unless a
    tag-kind policy is declared via ``tag_kind``.
    """
    target = h if iv is None or iv == h.domain else h.restrict(iv)
    box = target.domain
    if not target.pointwise and tag_kind is None:
        raise IntegrationError(
            "handle is not pointwise evaluable; declare a tag-kind policy")
    verdict = decide_riemann_integrable(target, tol, budget, slack)
    if not isinstance(verdict, Integrable):
        raise IntegrationError("integrand not decided Integrable", verdict)
    enc = verdict.enclosure
    w = box.width
    hi_target = (enc.mid + enc.rad) / w
    lo_target = (enc.mid - enc.rad) / w

    def f(x: float) -> float:
        return target.eval(x, tag_kind)

    best_c1 = best_c2 = None
    best_v1 = math.inf
    best_v2 = -math.inf
    m = 63
    while m <= 2 ** 14:
        spacing = w / (m + 1)
        for i in range(1, m + 1):
            x = box.lo + spacing * i
            v = f(x)
            if v < best_v1:
                best_c1, best_v1 = x, v
            if v > best_v2:
                best_c2, best_v2 = x, v
        if best_v1 > hi_target:
            best_c1, best_v1 = _walk(f, best_c1, best_v1, box.lo, box.hi,
                                     spacing, descend=True)
        if best_v2 < lo_target:
            best_c2, best_v2 = _walk(f, best_c2, best_v2, box.lo, box.hi,
                                     spacing, descend=False)
        if best_v1 <= hi_target and best_v2 >= lo_target:
            return best_c1, best_c2
        m = (m + 1) * 4 - 1
    raise MeanValuePointsError(
        f"no interior witnesses at tolerance {tol}", best_c1, best_c2)
