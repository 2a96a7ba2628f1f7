"""Partitions, tagging strategies, mesh computation, and refinement.

All values are immutable and the operations pure, so they are safe for
concurrent use.  Partitions serialize to JSON as ``list(p.points)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .catalog import FunctionHandle, Interval, TagKind

TAG_STRATEGIES = ("left", "right", "midpoint", "inf-seeking", "sup-seeking")


class Tag(NamedTuple):
    """Evaluation point inside a subinterval, with an optional kind hint for
    dense-oscillation handles."""

    point: float
    kind: Optional[TagKind] = None


@dataclass(frozen=True)
class Partition:
    """Strictly increasing breakpoints x_0 < x_1 < ... < x_n, n >= 1."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if len(pts) < 2:
            raise ValueError("partition needs at least two points")
        for i in range(1, len(pts)):
            if not pts[i - 1] < pts[i]:
                raise ValueError(f"partition points not strictly increasing at index {i}")
        if not all(math.isfinite(p) for p in pts):
            raise ValueError("partition points must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points) - 1

    @property
    def domain(self) -> Interval:
        return Interval(self.points[0], self.points[-1])

    def subintervals(self) -> list[Interval]:
        return [Interval(lo, hi) for lo, hi in zip(self.points, self.points[1:])]

    def refines(self, other: "Partition") -> bool:
        return set(other.points).issubset(self.points)


@dataclass(frozen=True)
class TaggedPartition:
    """Partition plus one tag per subinterval."""

    partition: Partition
    tags: tuple[Tag, ...]

    def __post_init__(self):
        _check_tags(self.partition, [(t,) for t in self.tags])


@dataclass(frozen=True)
class DoubleTaggedPartition:
    """Partition plus two tags (y_k, z_k) per subinterval, for mixed sums."""

    partition: Partition
    tags: tuple[tuple[Tag, Tag], ...]

    def __post_init__(self):
        _check_tags(self.partition, self.tags)


def _check_tags(p: Partition, per_cell: Sequence[Sequence[Tag]]):
    if len(per_cell) != p.n:
        raise ValueError(f"{p.n} subintervals but {len(per_cell)} tag entries")
    for k, tags in enumerate(per_cell):
        lo, hi = p.points[k], p.points[k + 1]
        for t in tags:
            if not (lo <= t.point <= hi):
                raise ValueError(
                    f"tag {t.point} outside subinterval [{lo}, {hi}] (index {k})")


def uniform(domain: Interval, n: int) -> Partition:
    """Partition into n equal subintervals."""
    if n < 1:
        raise ValueError("uniform partition needs n >= 1")
    if domain.is_degenerate:
        raise ValueError("cannot partition a degenerate interval")
    pts = [domain.lo + (domain.hi - domain.lo) * k / n for k in range(n + 1)]
    pts[0] = domain.lo
    pts[-1] = domain.hi
    return Partition(tuple(pts))


def mesh(p: Partition) -> float:
    """Norm of the partition: the maximum subinterval width."""
    return max(hi - lo for lo, hi in zip(p.points, p.points[1:]))


def refine_worst(p: Partition, scores: Sequence[float]) -> Partition:
    """Bisect the subinterval with maximal score (ties: lowest index).

    All-zero scores fall back to bisecting the widest subinterval.
    """
    if len(scores) != p.n:
        raise ValueError(f"{p.n} subintervals but {len(scores)} scores")
    if any(s < 0 for s in scores):
        raise ValueError("scores must be nonnegative")
    if max(scores) > 0:
        idx = max(range(p.n), key=lambda k: (scores[k], -k))
    else:
        widths = [hi - lo for lo, hi in zip(p.points, p.points[1:])]
        idx = max(range(p.n), key=lambda k: (widths[k], -k))
    lo, hi = p.points[idx], p.points[idx + 1]
    pts = p.points[: idx + 1] + (0.5 * (lo + hi),) + p.points[idx + 1:]
    return Partition(pts)


def tag(p: Partition, strategy: str, h: Optional[FunctionHandle] = None) -> TaggedPartition:
    """Tag every subinterval by the given strategy.

    ``h`` is needed only for inf-seeking / sup-seeking, whose tags achieve
    the subinterval infimum / supremum within slack for exact-oracle handles
    (for dense indicators, via tag-kind hints).
    """
    if strategy not in TAG_STRATEGIES:
        raise ValueError(f"unknown tag strategy {strategy!r}")
    cells = p.subintervals()
    if strategy == "left":
        tags = [Tag(c.lo) for c in cells]
    elif strategy == "right":
        tags = [Tag(c.hi) for c in cells]
    elif strategy == "midpoint":
        tags = [Tag(c.midpoint()) for c in cells]
    else:
        if h is None:
            raise ValueError(f"{strategy} tagging needs a function handle")
        seek = h.argmin_on if strategy == "inf-seeking" else h.argmax_on
        tags = [Tag(*seek(c)) for c in cells]
    return TaggedPartition(p, tuple(tags))


def double_tag(p: Partition, y_strategy: str, z_strategy: str,
               h: Optional[FunctionHandle] = None) -> DoubleTaggedPartition:
    """Convenience builder pairing two tagging strategies."""
    ys = tag(p, y_strategy, h).tags
    zs = tag(p, z_strategy, h).tags
    return DoubleTaggedPartition(p, tuple(zip(ys, zs)))
