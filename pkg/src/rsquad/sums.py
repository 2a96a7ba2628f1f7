"""Finite-sum primitives: Riemann, Darboux, Riemann-Stieltjes, and mixed
sums, plus the two oscillation-based proximity bounds.

Reductions are sequential left-to-right with compensated summation
(math.fsum); certified assertions downstream add a slack budget of
sigma * n on top of the bounds returned here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .catalog import FunctionHandle, Interval, oscillation
from .partition import DoubleTaggedPartition, Partition, TaggedPartition, mesh


@dataclass(frozen=True)
class SumResult:
    """A finite-sum value with the partition mesh and an optional a-priori
    bound attached by the bound-producing operations."""

    value: float
    partition_mesh: float
    bound: Optional[float] = None

    def __post_init__(self):
        if not self.partition_mesh > 0:
            raise ValueError("partition mesh must be positive")
        if self.bound is not None and self.bound < 0:
            raise ValueError("bound must be nonnegative")


def riemann_sum(h: FunctionHandle, tp: TaggedPartition) -> SumResult:
    """Sum of h(y_k) * (x_k - x_{k-1}) with tag-kind hints honored."""
    p = tp.partition
    h._check_iv(p.domain)
    terms = (h.eval(t.point, t.kind) * (hi - lo)
             for t, (lo, hi) in zip(tp.tags, zip(p.points, p.points[1:])))
    return SumResult(math.fsum(terms), mesh(p))


def darboux_sums(h: FunctionHandle, p: Partition) -> tuple[float, float]:
    """(lower, upper) Darboux sums from the handle's range oracle."""
    h._check_iv(p.domain)
    lowers = []
    uppers = []
    for lo, hi in zip(p.points, p.points[1:]):
        r = h.range(Interval(lo, hi))
        w = hi - lo
        lowers.append(r.inf * w)
        uppers.append(r.sup * w)
    return math.fsum(lowers), math.fsum(uppers)


def rs_sum(f: FunctionHandle, G, tp: TaggedPartition) -> SumResult:
    """Riemann-Stieltjes sum of f against the indefinite integral G.

    value = sum of f(y_k) * (G(x_k) - G(x_{k-1})) using enclosure midpoints;
    the attached bound is the propagated G-evaluation uncertainty,
    sum of |f(y_k)| * (rad(G(x_k)) + rad(G(x_{k-1}))).
    """
    p = tp.partition
    f._check_iv(p.domain)
    encl = [G.eval(x) for x in p.points]
    values = []
    rads = []
    for k, t in enumerate(tp.tags):
        fy = f.eval(t.point, t.kind)
        values.append(fy * (encl[k + 1].mid - encl[k].mid))
        rads.append(abs(fy) * (encl[k + 1].rad + encl[k].rad))
    return SumResult(math.fsum(values), mesh(p), bound=math.fsum(rads))


def mixed_sum(f: FunctionHandle, g: FunctionHandle,
              dtp: DoubleTaggedPartition) -> SumResult:
    """Sum of f(y_k) * g(z_k) * (x_k - x_{k-1}) with independent tags."""
    if f.domain != g.domain:
        raise ValueError("mixed sum needs factors on a common domain")
    p = dtp.partition
    f._check_iv(p.domain)
    terms = (f.eval(y.point, y.kind) * g.eval(z.point, z.kind) * (hi - lo)
             for (y, z), (lo, hi) in zip(dtp.tags, zip(p.points, p.points[1:])))
    return SumResult(math.fsum(terms), mesh(p))


def _osc_weighted_bound(f: FunctionHandle, g: FunctionHandle, p: Partition) -> float:
    if f.domain != g.domain:
        raise ValueError("bound needs factors on a common domain")
    g._check_iv(p.domain)
    terms = (oscillation(g, Interval(lo, hi)) * (hi - lo)
             for lo, hi in zip(p.points, p.points[1:]))
    return f.sup_abs() * math.fsum(terms)


def mixed_sum_error_bound(f: FunctionHandle, g: FunctionHandle, p: Partition) -> float:
    """sup|f| * sum of osc(g, I_k) * |I_k|.

    Bounds the deviation of any mixed sum from the y-tagged Riemann sum of
    f*g, for every choice of z-tags.
    """
    return _osc_weighted_bound(f, g, p)


def rs_vs_riemann_gap_bound(f: FunctionHandle, g: FunctionHandle, p: Partition) -> float:
    """Same formula as mixed_sum_error_bound, certifying a different pair:
    |riemann_sum(fg, tp) - rs_sum(f, G, tp)| for every tagging, up to the
    G-evaluation radii."""
    return _osc_weighted_bound(f, g, p)
