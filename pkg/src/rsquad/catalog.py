"""Function catalog with exact range oracles.

Every built-in function family (piecewise polynomials, step functions, a
scaled sine, and dense-oscillation indicators) reports exact infima/suprema
on arbitrary subintervals, so oscillations and Darboux sums downstream carry
no sampling error.  Sums and products of catalog functions keep sound
(sometimes conservative) oracles; each handle records which.

Handles are immutable after construction and all operations are pure, so
they are safe to share across threads.
"""

from __future__ import annotations

import bisect as _bisect
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

#: Additive slack applied per arithmetic reduction when building certified
#: radii.  Keeps floating-point enclosures sound at desk scale without
#: directed rounding.
SLACK_DEFAULT = 2.0 ** -40


class TagKind(Enum):
    """Evaluation hint for dense-oscillation indicators."""

    ON = "on"
    OFF = "off"


class CatalogError(ValueError):
    pass


class SpecError(CatalogError):
    """Malformed function spec; carries the location of the defect."""

    def __init__(self, message: str, location: str = "spec"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.reason = message


class DomainError(CatalogError):
    """Domain mismatch or point outside a handle's domain."""


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]; degenerate (lo == hi) allowed for queries."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise CatalogError(f"interval endpoints must be finite: [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise CatalogError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def require_domain(iv: Interval) -> Interval:
    """Integration domains must be nondegenerate."""
    if iv.is_degenerate:
        raise CatalogError(f"degenerate interval [{iv.lo}, {iv.hi}] cannot be a domain")
    return iv


@dataclass(frozen=True)
class RangeBounds:
    """Exact-or-conservative bounds (inf, sup) of a function on an interval."""

    inf: float
    sup: float

    def __post_init__(self):
        if self.inf > self.sup:
            raise CatalogError(f"range bounds out of order: ({self.inf}, {self.sup})")

    @property
    def spread(self) -> float:
        return self.sup - self.inf

    def contains_value(self, x: float) -> bool:
        return self.inf <= x <= self.sup

    def contains(self, other: "RangeBounds") -> bool:
        return self.inf <= other.inf and other.sup <= self.sup

    def shift(self, k: float) -> "RangeBounds":
        return RangeBounds(self.inf + k, self.sup + k)

    def scale(self, k: float) -> "RangeBounds":
        if k >= 0:
            return RangeBounds(self.inf * k, self.sup * k)
        return RangeBounds(self.sup * k, self.inf * k)

    def add(self, other: "RangeBounds") -> "RangeBounds":
        return RangeBounds(self.inf + other.inf, self.sup + other.sup)

    def mul(self, other: "RangeBounds") -> "RangeBounds":
        products = (
            self.inf * other.inf,
            self.inf * other.sup,
            self.sup * other.inf,
            self.sup * other.sup,
        )
        return RangeBounds(min(products), max(products))

    @staticmethod
    def hull(parts: Sequence["RangeBounds"]) -> "RangeBounds":
        if not parts:
            raise CatalogError("hull of no ranges")
        return RangeBounds(min(p.inf for p in parts), max(p.sup for p in parts))


@dataclass(frozen=True)
class OscFloor:
    """Certificate: osc(h, J) >= gamma for every nondegenerate J inside region."""

    gamma: float
    region: Interval


# ---------------------------------------------------------------------------
# Polynomial helpers (ascending coefficient tuples)
# ---------------------------------------------------------------------------

def poly_eval(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs: Sequence[float]) -> tuple[float, ...]:
    if len(coeffs) <= 1:
        return (0.0,)
    return tuple(i * c for i, c in enumerate(coeffs) if i >= 1)


def poly_antiderivative(coeffs: Sequence[float]) -> tuple[float, ...]:
    return (0.0,) + tuple(c / (i + 1) for i, c in enumerate(coeffs))


def poly_multiply(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(c) for c in
                 np.convolve(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def poly_add(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return tuple(out)


def _poly_real_roots(coeffs: Sequence[float]) -> tuple[float, ...]:
    cs = list(coeffs)
    scale = max((abs(c) for c in cs), default=0.0)
    if scale == 0.0:
        return ()
    while cs and abs(cs[-1]) <= 1e-14 * scale:
        cs.pop()
    if len(cs) <= 1:
        return ()
    if len(cs) == 2:
        return (-cs[0] / cs[1],)
    roots = np.roots(list(reversed(cs)))
    out = [float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real))]
    return tuple(sorted(out))


def poly_range(coeffs: Sequence[float], lo: float, hi: float,
               critical: Optional[Sequence[float]] = None) -> RangeBounds:
    """Exact range of a polynomial over [lo, hi] via its critical points."""
    if critical is None:
        critical = _poly_real_roots(poly_derivative(coeffs))
    values = [poly_eval(coeffs, lo), poly_eval(coeffs, hi)]
    for r in critical:
        if lo < r < hi:
            values.append(poly_eval(coeffs, r))
    return RangeBounds(min(values), max(values))


# ---------------------------------------------------------------------------
# Handle base
# ---------------------------------------------------------------------------

class FunctionHandle:
    """A bounded real function on a closed domain with a range oracle.

    ``range_exact`` records whether the oracle returns true infima/suprema or
    a sound overestimate; conservative handles can support Integrable and
    Undecided verdicts but never non-integrability certificates.
    """

    domain: Interval
    range_exact: bool = False
    pointwise: bool = True

    def eval(self, x: float, kind: Optional[TagKind] = None) -> float:
        raise NotImplementedError

    def range(self, iv: Interval) -> RangeBounds:
        raise NotImplementedError

    def sup_abs(self) -> float:
        cached = getattr(self, "_sup_abs", None)
        if cached is None:
            r = self.range(self.domain)
            cached = max(abs(r.inf), abs(r.sup))
            self._sup_abs = cached
        return cached

    def osc_lower_uniform(self) -> Optional[OscFloor]:
        return None

    def exact_integral(self, iv: Interval) -> Optional[float]:
        """Certified-up-to-rounding integral over iv, when representable."""
        return None

    def local_poly(self, iv: Interval) -> Optional[tuple[float, ...]]:
        """Coefficients valid a.e. on iv when the handle is one polynomial there."""
        return None

    def interior_breakpoints(self) -> tuple[float, ...]:
        return ()

    def argmin_on(self, iv: Interval) -> tuple[float, Optional[TagKind]]:
        return self._argext_sampled(iv, want_max=False)

    def argmax_on(self, iv: Interval) -> tuple[float, Optional[TagKind]]:
        return self._argext_sampled(iv, want_max=True)

    def lipschitz_bound(self) -> Optional[float]:
        """Upper bound on |h'| where known; None for jump/dense handles."""
        return None

    def restrict(self, iv: Interval) -> "FunctionHandle":
        raise NotImplementedError

    # -- shared guards / fallbacks -----------------------------------------

    def _check_point(self, x: float):
        if not self.domain.contains(x):
            raise DomainError(f"{x} outside domain [{self.domain.lo}, {self.domain.hi}]")

    def _check_iv(self, iv: Interval):
        if not self.domain.contains_interval(iv):
            raise DomainError(
                f"[{iv.lo}, {iv.hi}] not inside domain [{self.domain.lo}, {self.domain.hi}]")

    def _check_restriction(self, iv: Interval):
        require_domain(iv)
        self._check_iv(iv)

    def _argext_sampled(self, iv: Interval, want_max: bool) -> tuple[float, Optional[TagKind]]:
        # Best-effort: adequate for conservative composites, where tag
        # optimality affects only convergence speed, never soundness.
        points = {iv.lo, iv.hi, iv.midpoint()}
        for b in self.interior_breakpoints():
            if iv.lo < b < iv.hi:
                points.add(b)
                points.add(min(iv.hi, b + iv.width * 1e-9))
        best_x, best_v = iv.lo, self.eval(iv.lo)
        for x in sorted(points):
            v = self.eval(x)
            if (v > best_v) if want_max else (v < best_v):
                best_x, best_v = x, v
        return best_x, None


def oscillation(h: FunctionHandle, iv: Interval) -> float:
    """sup - inf of h over iv; 0 for degenerate iv by convention."""
    if iv.is_degenerate:
        return 0.0
    h._check_iv(iv)
    return h.range(iv).spread


def _pick_best(candidates, want_max: bool):
    """Select (value, point, kind) by value only; first wins on ties."""
    best = candidates[0]
    for cand in candidates[1:]:
        if (cand[0] > best[0]) if want_max else (cand[0] < best[0]):
            best = cand
    return best


def _interior_delta(h: FunctionHandle, iv: Interval) -> float:
    lip = h.lipschitz_bound()
    if lip is not None:
        return min(iv.width / 4.0, 0.5 * SLACK_DEFAULT / max(1.0, lip))
    return iv.width * 2.0 ** -30


def _shrink_into_open(inner: Interval, sub: Interval, delta: float) -> Optional[Interval]:
    """Pull inner's endpoints off sub's boundary so its points are interior."""
    lo = inner.lo + delta if inner.lo <= sub.lo else inner.lo
    hi = inner.hi - delta if inner.hi >= sub.hi else inner.hi
    if lo >= hi:
        mid = inner.midpoint()
        if sub.lo < mid < sub.hi:
            return Interval(mid, mid)
        return None
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# Piecewise polynomial handle (covers step functions and kinked specials)
# ---------------------------------------------------------------------------

class PiecewiseHandle(FunctionHandle):
    """Piecewise polynomial with exact per-piece extrema analysis.

    The value at an interior breakpoint belongs to the left piece by default
    ('left' convention); 'right' assigns it to the right piece.  Domain
    endpoints always belong to their single adjacent piece.
    """

    range_exact = True

    def __init__(self, breakpoints: Sequence[float], coefficients: Sequence[Sequence[float]],
                 convention: str = "left"):
        if convention not in ("left", "right"):
            raise SpecError(f"unknown convention {convention!r}", "convention")
        bps = tuple(float(b) for b in breakpoints)
        if len(bps) < 2:
            raise SpecError("need at least two breakpoints", "breakpoints")
        for i in range(1, len(bps)):
            if not bps[i - 1] < bps[i]:
                raise SpecError(
                    f"breakpoints not strictly increasing at index {i}", "breakpoints")
        if len(coefficients) != len(bps) - 1:
            raise SpecError(
                f"{len(bps) - 1} pieces declared but {len(coefficients)} coefficient lists",
                "coefficients")
        coeffs = []
        for j, cs in enumerate(coefficients):
            cs = tuple(float(c) for c in cs)
            if not cs:
                raise SpecError("empty coefficient list", f"coefficients[{j}]")
            coeffs.append(cs)
        self.domain = require_domain(Interval(bps[0], bps[-1]))
        self.breakpoints = bps
        self.coefficients = tuple(coeffs)
        self.convention = convention
        self._interior = bps[1:-1]
        self._critical = tuple(_poly_real_roots(poly_derivative(cs)) for cs in coeffs)
        self._antider = tuple(poly_antiderivative(cs) for cs in coeffs)
        self._lipschitz = tuple(
            max(abs(poly_range(poly_derivative(cs), bps[j], bps[j + 1]).inf),
                abs(poly_range(poly_derivative(cs), bps[j], bps[j + 1]).sup))
            for j, cs in enumerate(coeffs))

    @classmethod
    def constant(cls, value: float, domain: Interval) -> "PiecewiseHandle":
        return cls((domain.lo, domain.hi), ((value,),))

    def _piece_index(self, x: float) -> int:
        if self.convention == "left":
            # interior breakpoint belongs to the piece on its left
            i = _bisect.bisect_left(self._interior, x)
        else:
            i = _bisect.bisect_right(self._interior, x)
        return min(i, len(self.coefficients) - 1)

    def eval(self, x: float, kind: Optional[TagKind] = None) -> float:
        self._check_point(x)
        return poly_eval(self.coefficients[self._piece_index(x)], x)

    def range(self, iv: Interval) -> RangeBounds:
        self._check_iv(iv)
        values = [self.eval(iv.lo), self.eval(iv.hi)]
        for j, cs in enumerate(self.coefficients):
            lo = max(self.breakpoints[j], iv.lo)
            hi = min(self.breakpoints[j + 1], iv.hi)
            if lo >= hi:
                continue
            r = poly_range(cs, lo, hi, self._critical[j])
            values.append(r.inf)
            values.append(r.sup)
        return RangeBounds(min(values), max(values))

    def local_poly(self, iv: Interval) -> Optional[tuple[float, ...]]:
        if iv.is_degenerate:
            return (self.eval(iv.lo),)
        owners = [j for j in range(len(self.coefficients))
                  if max(self.breakpoints[j], iv.lo) < min(self.breakpoints[j + 1], iv.hi)]
        if len(owners) == 1:
            return self.coefficients[owners[0]]
        return None

    def exact_integral(self, iv: Interval) -> Optional[float]:
        self._check_iv(iv)
        total = 0.0
        for j, anti in enumerate(self._antider):
            lo = max(self.breakpoints[j], iv.lo)
            hi = min(self.breakpoints[j + 1], iv.hi)
            if lo >= hi:
                continue
            total += poly_eval(anti, hi) - poly_eval(anti, lo)
        return total

    def interior_breakpoints(self) -> tuple[float, ...]:
        return self._interior

    def lipschitz_bound(self) -> Optional[float]:
        return max(self._lipschitz)

    def _argext(self, iv: Interval, want_max: bool) -> tuple[float, Optional[TagKind]]:
        self._check_iv(iv)
        candidates: list[tuple[float, float]] = [
            (self.eval(iv.lo), iv.lo), (self.eval(iv.hi), iv.hi)]
        for j, cs in enumerate(self.coefficients):
            lo = max(self.breakpoints[j], iv.lo)
            hi = min(self.breakpoints[j + 1], iv.hi)
            if lo >= hi:
                continue
            nudge = min((hi - lo) / 8.0,
                        0.5 * SLACK_DEFAULT / max(1.0, self._lipschitz[j]))
            for x in (r for r in self._critical[j] if lo < r < hi):
                candidates.append((poly_eval(cs, x), x))
            for edge, inward in ((lo, nudge), (hi, -nudge)):
                x = edge if self._piece_index(edge) == j else edge + inward
                candidates.append((poly_eval(cs, x), x))
        value, point = (max if want_max else min)(candidates)
        return point, None

    def argmin_on(self, iv):
        return self._argext(iv, want_max=False)

    def argmax_on(self, iv):
        return self._argext(iv, want_max=True)

    def restrict(self, iv: Interval) -> "PiecewiseHandle":
        self._check_restriction(iv)
        bps = [iv.lo]
        coeffs = []
        for j in range(len(self.coefficients)):
            lo = max(self.breakpoints[j], iv.lo)
            hi = min(self.breakpoints[j + 1], iv.hi)
            if lo >= hi:
                continue
            coeffs.append(self.coefficients[j])
            bps.append(hi)
        return PiecewiseHandle(bps, coeffs, self.convention)

    def scaled(self, k: float) -> "PiecewiseHandle":
        return PiecewiseHandle(
            self.breakpoints,
            [tuple(k * c for c in cs) for cs in self.coefficients],
            self.convention)

    def merged_with(self, other: "PiecewiseHandle") -> Optional["PiecewiseHandle"]:
        """Pointwise sum as one piecewise polynomial; None on convention clash."""
        if self.convention != other.convention or self.domain != other.domain:
            return None
        edges = sorted(set(self.breakpoints) | set(other.breakpoints))
        coeffs = []
        for lo, hi in zip(edges, edges[1:]):
            mid = 0.5 * (lo + hi)
            coeffs.append(poly_add(self.coefficients[self._piece_index(mid)],
                                   other.coefficients[other._piece_index(mid)]))
        return PiecewiseHandle(edges, coeffs, self.convention)

    def __repr__(self):
        return (f"PiecewiseHandle({len(self.coefficients)} pieces on "
                f"[{self.domain.lo}, {self.domain.hi}])")


def step_handle(breakpoints: Sequence[float], values: Sequence[float],
                convention: str = "left") -> PiecewiseHandle:
    """Step function as a piecewise handle with constant pieces."""
    if len(values) != len(breakpoints) - 1:
        raise SpecError(
            f"{len(breakpoints) - 1} pieces declared but {len(values)} values", "values")
    return PiecewiseHandle(breakpoints, [(float(v),) for v in values], convention)


# ---------------------------------------------------------------------------
# Scaled sine
# ---------------------------------------------------------------------------

class ScaledSineHandle(FunctionHandle):
    """amplitude*sin(frequency*x + phase) + offset, with exact extrema."""

    range_exact = True

    def __init__(self, domain: Interval, amplitude: float = 1.0, frequency: float = 1.0,
                 phase: float = 0.0, offset: float = 0.0):
        self.domain = require_domain(domain)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)
        self.phase = float(phase)
        self.offset = float(offset)

    def eval(self, x: float, kind: Optional[TagKind] = None) -> float:
        self._check_point(x)
        return self.amplitude * math.sin(self.frequency * x + self.phase) + self.offset

    def _extrema_in(self, lo: float, hi: float) -> list[float]:
        # stationary points: frequency*x + phase = pi/2 + k*pi
        if self.frequency == 0.0 or self.amplitude == 0.0:
            return []
        w = self.frequency
        t0, t1 = sorted((w * lo + self.phase, w * hi + self.phase))
        k0 = math.ceil((t0 - math.pi / 2.0) / math.pi)
        out = []
        k = k0
        while True:
            t = math.pi / 2.0 + k * math.pi
            if t > t1:
                break
            x = (t - self.phase) / w
            if lo < x < hi:
                out.append(x)
            k += 1
        return out

    def range(self, iv: Interval) -> RangeBounds:
        self._check_iv(iv)
        values = [self.eval(iv.lo), self.eval(iv.hi)]
        values.extend(self.eval(x) for x in self._extrema_in(iv.lo, iv.hi))
        return RangeBounds(min(values), max(values))

    def _argext(self, iv: Interval, want_max: bool):
        self._check_iv(iv)
        candidates = [(self.eval(iv.lo), iv.lo), (self.eval(iv.hi), iv.hi)]
        candidates.extend((self.eval(x), x) for x in self._extrema_in(iv.lo, iv.hi))
        value, point = (max if want_max else min)(candidates)
        return point, None

    def argmin_on(self, iv):
        return self._argext(iv, want_max=False)

    def argmax_on(self, iv):
        return self._argext(iv, want_max=True)

    def local_poly(self, iv: Interval) -> Optional[tuple[float, ...]]:
        if self.amplitude == 0.0 or self.frequency == 0.0:
            return (self.eval(iv.lo),)
        return None

    def lipschitz_bound(self) -> Optional[float]:
        return abs(self.amplitude * self.frequency)

    def restrict(self, iv: Interval) -> "ScaledSineHandle":
        self._check_restriction(iv)
        return ScaledSineHandle(iv, self.amplitude, self.frequency, self.phase, self.offset)

    def __repr__(self):
        return (f"ScaledSineHandle({self.amplitude}*sin({self.frequency}x+{self.phase})"
                f"+{self.offset} on [{self.domain.lo}, {self.domain.hi}])")


# ---------------------------------------------------------------------------
# Dense-oscillation indicator
# ---------------------------------------------------------------------------

class DenseIndicatorHandle(FunctionHandle):
    """Stand-in for Dirichlet-type functions, defined by its range oracle.

    Takes the on-value on a dense subset of the open interior of ``sub`` and
    the off-value on another dense subset; equals the off-value everywhere
    else (including the endpoints of ``sub``).  Pointwise evaluation needs a
    tag-kind hint inside the interior; without one it reports the off-value.
    The oracle, not evaluation, drives all certified computations.
    """

    range_exact = True
    pointwise = False

    def __init__(self, domain: Interval, sub: Interval, off: float, on: float):
        self.domain = require_domain(domain)
        if not domain.contains_interval(sub):
            raise SpecError("sub-domain not inside domain", "params.sub")
        self.sub = require_domain(sub)
        self.off = float(off)
        self.on = float(on)

    def _meets_interior(self, iv: Interval) -> bool:
        return iv.hi > self.sub.lo and iv.lo < self.sub.hi

    def eval(self, x: float, kind: Optional[TagKind] = None) -> float:
        self._check_point(x)
        if kind is TagKind.ON and self.sub.lo < x < self.sub.hi:
            return self.on
        return self.off

    def range(self, iv: Interval) -> RangeBounds:
        self._check_iv(iv)
        if self._meets_interior(iv):
            return RangeBounds(min(self.off, self.on), max(self.off, self.on))
        return RangeBounds(self.off, self.off)

    def osc_lower_uniform(self) -> Optional[OscFloor]:
        gamma = abs(self.on - self.off)
        if gamma == 0.0:
            return None
        return OscFloor(gamma, self.sub)

    def exact_integral(self, iv: Interval) -> Optional[float]:
        self._check_iv(iv)
        if self.on == self.off or not self._meets_interior(iv):
            return self.off * iv.width
        return None

    def local_poly(self, iv: Interval) -> Optional[tuple[float, ...]]:
        if self.on == self.off or not self._meets_interior(iv):
            return (self.off,)
        return None

    def interior_breakpoints(self) -> tuple[float, ...]:
        return tuple(b for b in (self.sub.lo, self.sub.hi)
                     if self.domain.lo < b < self.domain.hi)

    def _argext(self, iv: Interval, want_max: bool):
        self._check_iv(iv)
        if self._meets_interior(iv):
            pick_on = (self.on > self.off) if want_max else (self.on < self.off)
            if pick_on:
                lo = max(iv.lo, self.sub.lo)
                hi = min(iv.hi, self.sub.hi)
                return 0.5 * (lo + hi), TagKind.ON
        return iv.midpoint(), None

    def argmin_on(self, iv):
        return self._argext(iv, want_max=False)

    def argmax_on(self, iv):
        return self._argext(iv, want_max=True)

    def restrict(self, iv: Interval) -> FunctionHandle:
        self._check_restriction(iv)
        lo = max(iv.lo, self.sub.lo)
        hi = min(iv.hi, self.sub.hi)
        if lo < hi:
            return DenseIndicatorHandle(iv, Interval(lo, hi), self.off, self.on)
        return PiecewiseHandle.constant(self.off, iv)

    def scaled(self, k: float) -> "DenseIndicatorHandle":
        return DenseIndicatorHandle(self.domain, self.sub, k * self.off, k * self.on)

    def __repr__(self):
        return (f"DenseIndicatorHandle({{{self.off}, {self.on}}} on "
                f"[{self.sub.lo}, {self.sub.hi}])")


# ---------------------------------------------------------------------------
# Composite handles
# ---------------------------------------------------------------------------

def _single_dense_split(children: Sequence[FunctionHandle]):
    """(dense, rest) when exactly one child is dense and the rest are exact."""
    dense = [c for c in children if isinstance(c, DenseIndicatorHandle)]
    rest = [c for c in children if not isinstance(c, DenseIndicatorHandle)]
    if len(dense) == 1 and all(r.range_exact for r in rest):
        return dense[0], rest
    return None, None


def _outer_parts(iv: Interval, sub: Interval) -> list[Interval]:
    """Pieces of iv outside the open interior of sub (possibly degenerate)."""
    parts = []
    if iv.lo <= sub.lo:
        parts.append(Interval(iv.lo, min(iv.hi, sub.lo)))
    if iv.hi >= sub.hi:
        parts.append(Interval(max(iv.lo, sub.hi), iv.hi))
    return parts


class SumHandle(FunctionHandle):
    """Pointwise sum.  Exact range when one term is a dense indicator and the
    others fold into a single exact handle; interval addition otherwise."""

    def __init__(self, children: Sequence[FunctionHandle]):
        if len(children) < 2:
            raise SpecError("sum needs at least two terms", "terms")
        d = children[0].domain
        for c in children[1:]:
            if c.domain != d:
                raise DomainError("sum terms on different domains")
        self.domain = d
        self.children = tuple(children)
        dense, rest = _single_dense_split(self.children)
        self._dense = dense
        self._rest = rest[0] if (dense is not None and len(rest) == 1) else None
        self.range_exact = self._rest is not None

    def eval(self, x: float, kind: Optional[TagKind] = None) -> float:
        self._check_point(x)
        return math.fsum(c.eval(x, kind) for c in self.children)

    def range(self, iv: Interval) -> RangeBounds:
        self._check_iv(iv)
        if self._rest is not None:
            d, r = self._dense, self._rest
            parts = [r.range(p).shift(d.off) for p in _outer_parts(iv, d.sub)]
            inner = iv.intersect(d.sub)
            if inner is not None and d._meets_interior(iv):
                base = r.range(inner)
                parts.append(base.shift(d.off))
                parts.append(base.shift(d.on))
            return RangeBounds.hull(parts)
        acc = self.children[0].range(iv)
        for c in self.children[1:]:
            acc = acc.add(c.range(iv))
        return acc

    def osc_lower_uniform(self) -> Optional[OscFloor]:
        best = None
        for child in self.children:
            cert = child.osc_lower_uniform()
            if cert is None:
                continue
            others = [c for c in self.children if c is not child]
            if not all(o.range_exact for o in others):
                continue
            for region in _candidate_regions(cert.region, others):
                damp = math.fsum(oscillation(o, region) for o in others)
                gamma = cert.gamma - damp
                if gamma > 0 and (best is None or
                                  gamma * region.width > best.gamma * best.region.width):
                    best = OscFloor(gamma, region)
        return best

    def exact_integral(self, iv: Interval) -> Optional[float]:
        self._check_iv(iv)
        total = 0.0
        for c in self.children:
            v = c.exact_integral(iv)
            if v is None:
                return None
            total += v
        return total

    def local_poly(self, iv: Interval) -> Optional[tuple[float, ...]]:
        acc: tuple[float, ...] = (0.0,)
        for c in self.children:
            p = c.local_poly(iv)
            if p is None:
                return None
            acc = poly_add(acc, p)
        return acc

    def interior_breakpoints(self) -> tuple[float, ...]:
        pts = set()
        for c in self.children:
            pts.update(c.interior_breakpoints())
        return tuple(sorted(pts))

    def _argext(self, iv: Interval, want_max: bool):
        if self._rest is None:
            return self._argext_sampled(iv, want_max)
        d, r = self._dense, self._rest
        seek = (lambda h, p: h.argmax_on(p)) if want_max else (lambda h, p: h.argmin_on(p))
        candidates = []
        for p in _outer_parts(iv, d.sub):
            x, _ = seek(r, p)
            candidates.append((r.eval(x) + d.off, x, None))
        inner = iv.intersect(d.sub)
        if inner is not None and d._meets_interior(iv) and not inner.is_degenerate:
            x, _ = seek(r, inner)
            candidates.append((r.eval(x) + d.off, x, None))
            open_inner = _shrink_into_open(inner, d.sub, _interior_delta(r, inner))
            if open_inner is not None:
                x, _ = seek(r, open_inner)
                candidates.append((r.eval(x) + d.on, x, TagKind.ON))
        value, point, kind = _pick_best(candidates, want_max)
        return point, kind

    def argmin_on(self, iv):
        self._check_iv(iv)
        return self._argext(iv, want_max=False)

    def argmax_on(self, iv):
        self._check_iv(iv)
        return self._argext(iv, want_max=True)

    @property
    def pointwise(self) -> bool:  # type: ignore[override]
        return all(c.pointwise for c in self.children)

    def lipschitz_bound(self) -> Optional[float]:
        bounds = [c.lipschitz_bound() for c in self.children]
        if any(b is None for b in bounds):
            return None
        return math.fsum(bounds)

    def restrict(self, iv: Interval) -> FunctionHandle:
        self._check_restriction(iv)
        return SumHandle([c.restrict(iv) for c in self.children])

    def __repr__(self):
        return f"SumHandle({', '.join(map(repr, self.children))})"


class ProductHandle(FunctionHandle):
    """Pointwise product of two handles.

    The range oracle is exact when one factor is a dense indicator against an
    exact factor (computed per region; in particular the product range is {0}
    wherever the co-factor vanishes identically); otherwise it is the product
    of interval ranges, conservative but inclusion-correct.
    """

    def __init__(self, left: FunctionHandle, right: FunctionHandle):
        if left.domain != right.domain:
            raise DomainError("product factors on different domains")
        self.domain = left.domain
        self.left = left
        self.right = right
        self._dense = None
        self._other = None
        for a, b in ((left, right), (right, left)):
            if isinstance(a, DenseIndicatorHandle) and b.range_exact and \
                    not isinstance(b, DenseIndicatorHandle):
                self._dense, self._other = a, b
                break
        self.range_exact = self._dense is not None

    def eval(self, x: float, kind: Optional[TagKind] = None) -> float:
        self._check_point(x)
        return self.left.eval(x, kind) * self.right.eval(x, kind)

    def range(self, iv: Interval) -> RangeBounds:
        self._check_iv(iv)
        if self._dense is not None:
            d, o = self._dense, self._other
            parts = [o.range(p).scale(d.off) for p in _outer_parts(iv, d.sub)]
            inner = iv.intersect(d.sub)
            if inner is not None and d._meets_interior(iv):
                base = o.range(inner)
                parts.append(base.scale(d.off))
                parts.append(base.scale(d.on))
            return RangeBounds.hull(parts)
        return self.left.range(iv).mul(self.right.range(iv))

    def osc_lower_uniform(self) -> Optional[OscFloor]:
        best = None
        for factor, other in ((self.left, self.right), (self.right, self.left)):
            cert = factor.osc_lower_uniform()
            if cert is None or not other.range_exact:
                continue
            for region in _candidate_regions(cert.region, [other]):
                r = other.range(region)
                if r.inf > 0 or r.sup < 0:
                    m = min(abs(r.inf), abs(r.sup))
                    gamma = cert.gamma * m
                    if best is None or gamma * region.width > best.gamma * best.region.width:
                        best = OscFloor(gamma, region)
        return best

    def _cells(self, iv: Interval) -> list[Interval]:
        edges = [iv.lo, iv.hi]
        for h in (self.left, self.right):
            edges.extend(b for b in h.interior_breakpoints() if iv.lo < b < iv.hi)
        edges = sorted(set(edges))
        return [Interval(lo, hi) for lo, hi in zip(edges, edges[1:])]

    def exact_integral(self, iv: Interval) -> Optional[float]:
        self._check_iv(iv)
        if iv.is_degenerate:
            return 0.0
        total = 0.0
        for cell in self._cells(iv):
            rl = self.left.range(cell)
            rr = self.right.range(cell)
            if (rl.inf == 0.0 == rl.sup) or (rr.inf == 0.0 == rr.sup):
                continue
            pl = self.left.local_poly(cell)
            pr = self.right.local_poly(cell)
            if pl is None or pr is None:
                return None
            anti = poly_antiderivative(poly_multiply(pl, pr))
            total += poly_eval(anti, cell.hi) - poly_eval(anti, cell.lo)
        return total

    def local_poly(self, iv: Interval) -> Optional[tuple[float, ...]]:
        pl = self.left.local_poly(iv)
        pr = self.right.local_poly(iv)
        if pl is None or pr is None:
            return None
        return poly_multiply(pl, pr)

    def interior_breakpoints(self) -> tuple[float, ...]:
        pts = set(self.left.interior_breakpoints())
        pts.update(self.right.interior_breakpoints())
        return tuple(sorted(pts))

    def _argext(self, iv: Interval, want_max: bool):
        if self._dense is None:
            return self._argext_sampled(iv, want_max)
        d, o = self._dense, self._other
        candidates = []
        for p in _outer_parts(iv, d.sub):
            for x in (o.argmin_on(p)[0], o.argmax_on(p)[0]):
                candidates.append((d.off * o.eval(x), x, None))
        inner = iv.intersect(d.sub)
        if inner is not None and d._meets_interior(iv) and not inner.is_degenerate:
            for x in (o.argmin_on(inner)[0], o.argmax_on(inner)[0]):
                candidates.append((d.off * o.eval(x), x, None))
            delta = _interior_delta(o, inner) / max(1.0, abs(d.off), abs(d.on))
            open_inner = _shrink_into_open(inner, d.sub, delta)
            if open_inner is not None:
                for x in (o.argmin_on(open_inner)[0], o.argmax_on(open_inner)[0]):
                    candidates.append((d.on * o.eval(x), x, TagKind.ON))
        value, point, kind = _pick_best(candidates, want_max)
        return point, kind

    def argmin_on(self, iv):
        self._check_iv(iv)
        return self._argext(iv, want_max=False)

    def argmax_on(self, iv):
        self._check_iv(iv)
        return self._argext(iv, want_max=True)

    @property
    def pointwise(self) -> bool:  # type: ignore[override]
        return self.left.pointwise and self.right.pointwise

    def restrict(self, iv: Interval) -> FunctionHandle:
        self._check_restriction(iv)
        return ProductHandle(self.left.restrict(iv), self.right.restrict(iv))

    def __repr__(self):
        return f"ProductHandle({self.left!r}, {self.right!r})"


def _candidate_regions(region: Interval, others: Sequence[FunctionHandle]) -> list[Interval]:
    edges = {region.lo, region.hi}
    for o in others:
        edges.update(b for b in o.interior_breakpoints() if region.lo < b < region.hi)
    edges = sorted(edges)
    out = [region] if len(edges) > 2 else []
    out.extend(Interval(lo, hi) for lo, hi in zip(edges, edges[1:]))
    return out


def product_handle(f: FunctionHandle, g: FunctionHandle) -> ProductHandle:
    """Pointwise product handle; rejects factors on different domains."""
    return ProductHandle(f, g)


def scale_handle(h: FunctionHandle, k: float) -> FunctionHandle:
    """k*h with the scale folded into the leaves, preserving oracle exactness."""
    if isinstance(h, PiecewiseHandle):
        return h.scaled(k)
    if isinstance(h, DenseIndicatorHandle):
        return h.scaled(k)
    if isinstance(h, ScaledSineHandle):
        return ScaledSineHandle(h.domain, k * h.amplitude, h.frequency, h.phase, k * h.offset)
    if isinstance(h, SumHandle):
        return SumHandle([scale_handle(c, k) for c in h.children])
    if isinstance(h, ProductHandle):
        return ProductHandle(scale_handle(h.left, k), h.right)
    raise CatalogError(f"cannot scale {type(h).__name__}")


# ---------------------------------------------------------------------------
# Spec parsing
# ---------------------------------------------------------------------------

def _parse_interval(raw, location: str) -> Interval:
    if (not isinstance(raw, (list, tuple))) or len(raw) != 2:
        raise SpecError("expected [lo, hi]", location)
    try:
        return Interval(float(raw[0]), float(raw[1]))
    except (TypeError, ValueError, CatalogError) as e:
        raise SpecError(str(e), location)


def _spec_domain(spec: dict, domain: Optional[Interval], location: str) -> Interval:
    if domain is not None:
        return require_domain(domain)
    if "domain" not in spec:
        raise SpecError("missing domain", f"{location}.domain")
    return require_domain(_parse_interval(spec["domain"], f"{location}.domain"))


def build_handle(spec: dict, domain: Optional[Interval] = None,
                 _location: str = "spec") -> FunctionHandle:
    """Build a catalog handle from a JSON-style spec document.

    ``domain`` overrides the spec's own ``domain`` field; children inherit the
    parent domain.  Malformed specs raise SpecError pointing at the defect.
    """
    if not isinstance(spec, dict):
        raise SpecError("spec must be an object", _location)
    kind = spec.get("kind")
    dom = _spec_domain(spec, domain, _location)

    if kind == "piecewise-polynomial":
        bps = spec.get("breakpoints")
        if not isinstance(bps, (list, tuple)):
            raise SpecError("missing breakpoints", f"{_location}.breakpoints")
        coeffs = spec.get("coefficients")
        if not isinstance(coeffs, (list, tuple)):
            raise SpecError("missing coefficients", f"{_location}.coefficients")
        try:
            h = PiecewiseHandle(bps, coeffs, spec.get("convention", "left"))
        except SpecError as e:
            raise SpecError(e.reason, f"{_location}.{e.location}")
        if h.domain != dom:
            raise SpecError("breakpoints do not span the domain", f"{_location}.breakpoints")
        return h

    if kind == "step":
        bps = spec.get("breakpoints")
        vals = spec.get("values")
        if not isinstance(bps, (list, tuple)):
            raise SpecError("missing breakpoints", f"{_location}.breakpoints")
        if not isinstance(vals, (list, tuple)):
            raise SpecError("missing values", f"{_location}.values")
        try:
            h = step_handle(bps, vals, spec.get("convention", "left"))
        except SpecError as e:
            raise SpecError(e.reason, f"{_location}.{e.location}")
        if h.domain != dom:
            raise SpecError("breakpoints do not span the domain", f"{_location}.breakpoints")
        return h

    if kind == "named-special":
        name = spec.get("name")
        params = spec.get("params", {})
        if not isinstance(params, dict):
            raise SpecError("params must be an object", f"{_location}.params")
        if name == "scaled-sin":
            return ScaledSineHandle(dom,
                                    params.get("amplitude", 1.0),
                                    params.get("frequency", 1.0),
                                    params.get("phase", 0.0),
                                    params.get("offset", 0.0))
        if name == "abs-shift":
            s = float(params.get("shift", 0.0))
            a = float(params.get("scale", 1.0))
            d = float(params.get("offset", 0.0))
            # a*|x - s| + d as one or two linear pieces
            down = (a * s + d, -a)
            up = (-a * s + d, a)
            if dom.lo < s < dom.hi:
                return PiecewiseHandle((dom.lo, s, dom.hi), (down, up))
            return PiecewiseHandle((dom.lo, dom.hi), (up if s <= dom.lo else down,))
        if name == "sign-shift":
            s = float(params.get("shift", 0.0))
            low = float(params.get("low", -1.0))
            high = float(params.get("high", 1.0))
            conv = params.get("convention", "left")
            if dom.lo < s < dom.hi:
                return step_handle((dom.lo, s, dom.hi), (low, high), conv)
            return step_handle((dom.lo, dom.hi), (high if s <= dom.lo else low,), conv)
        if name == "dense-indicator":
            if "sub" not in params:
                raise SpecError("dense-indicator needs its sub-domain",
                                f"{_location}.params.sub")
            sub = _parse_interval(params["sub"], f"{_location}.params.sub")
            if sub.is_degenerate:
                raise SpecError("sub-domain is degenerate", f"{_location}.params.sub")
            if not dom.contains_interval(sub):
                raise SpecError("sub-domain not inside domain", f"{_location}.params.sub")
            if "off" not in params or "on" not in params:
                raise SpecError("dense-indicator needs off and on values",
                                f"{_location}.params")
            return DenseIndicatorHandle(dom, sub, float(params["off"]), float(params["on"]))
        raise SpecError(f"unknown named-special {name!r}", f"{_location}.name")

    if kind == "sum":
        terms = spec.get("terms")
        if not isinstance(terms, (list, tuple)) or len(terms) < 2:
            raise SpecError("sum needs at least two terms", f"{_location}.terms")
        children = [build_handle(t, dom, f"{_location}.terms[{i}]")
                    for i, t in enumerate(terms)]
        merged: list[FunctionHandle] = []
        folded: Optional[PiecewiseHandle] = None
        for c in children:
            if isinstance(c, PiecewiseHandle):
                m = folded.merged_with(c) if folded is not None else c
                if m is not None:
                    folded = m
                    continue
            merged.append(c)
        if folded is not None:
            merged.append(folded)
        if len(merged) == 1:
            return merged[0]
        return SumHandle(merged)

    if kind == "product":
        factors = spec.get("factors")
        if not isinstance(factors, (list, tuple)) or len(factors) != 2:
            raise SpecError("product needs exactly two factors", f"{_location}.factors")
        return ProductHandle(build_handle(factors[0], dom, f"{_location}.factors[0]"),
                             build_handle(factors[1], dom, f"{_location}.factors[1]"))

    if kind == "scalar-multiple":
        if "scalar" not in spec:
            raise SpecError("missing scalar", f"{_location}.scalar")
        if "operand" not in spec:
            raise SpecError("missing operand", f"{_location}.operand")
        return scale_handle(build_handle(spec["operand"], dom, f"{_location}.operand"),
                            float(spec["scalar"]))

    raise SpecError(f"unknown kind {kind!r}", f"{_location}.kind")
