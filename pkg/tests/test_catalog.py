import math
import random

import pytest

import rsquad as rq
from rsquad import Interval, SpecError, TagKind

from handles import UNIT, const, dense, glued, identity, poly, sine, square, step

SLACK = rq.SLACK_DEFAULT


def brute_range(h, iv, samples=2000, kinds=(None,)):
    """Independent range oracle: dense sampling with every kind hint."""
    vals = []
    for i in range(samples + 1):
        x = iv.lo + (iv.hi - iv.lo) * i / samples
        for k in kinds:
            vals.append(h.eval(x, k))
    return min(vals), max(vals)


def family():
    """Representative catalog handles paired with the kinds they honor."""
    return [
        (identity(), (None,)),
        (square(), (None,)),
        (poly([0.0, 0.3, 0.7, 1.0],
              [[1.0, -2.0, 0.5], [0.2, 1.5], [-1.0, 0.0, 0.0, 2.0]]), (None,)),
        (step([0.0, 0.25, 0.8, 1.0], [1.0, -0.5, 2.0]), (None,)),
        (step([0.0, 0.5, 1.0], [0.0, 1.0], convention="right"), (None,)),
        (sine(Interval(0.0, math.pi), frequency=2.5, amplitude=1.5, offset=0.25),
         (None,)),
        (dense((0.2, 0.7), off=-1.0, on=2.0), (None, TagKind.ON, TagKind.OFF)),
        (glued(), (None, TagKind.ON, TagKind.OFF)),
        (rq.product_handle(dense((0.0, 0.5)), identity()),
         (None, TagKind.ON, TagKind.OFF)),
        (rq.product_handle(identity(), square()), (None,)),
    ]


# ---------------------------------------------------------------------------
# build_handle / ranges
# ---------------------------------------------------------------------------

def test_identity_range_is_exact():
    h = identity()
    r = h.range(Interval(0.25, 0.5))
    assert (r.inf, r.sup) == (0.25, 0.5)


def test_dense_indicator_spans_both_values_inside_subdomain():
    h = dense((0.0, 0.5), off=0.0, on=1.0)
    r = h.range(Interval(0.1, 0.2))
    assert (r.inf, r.sup) == (0.0, 1.0)


def test_dense_indicator_off_outside_interior():
    h = dense((0.0, 0.5))
    r = h.range(Interval(0.5, 0.75))
    assert (r.inf, r.sup) == (0.0, 0.0)
    assert h.eval(0.5, TagKind.ON) == 0.0  # endpoint is not interior


def test_scaled_sin_range_matches_extrema_enumeration():
    h = sine(Interval(0.0, math.pi))
    r = h.range(Interval(0.0, math.pi))
    assert r.inf == pytest.approx(0.0, abs=1e-15)
    assert r.sup == pytest.approx(1.0, abs=1e-15)
    lo, hi = brute_range(h, h.domain, 5000)
    assert r.inf <= lo and hi <= r.sup


def test_product_of_dense_and_zero_density_has_zero_range():
    h = rq.product_handle(dense((0.0, 0.5), domain=Interval(0.0, 0.5)),
                          const(0.0, Interval(0.0, 0.5)))
    r = h.range(Interval(0.1, 0.3))
    assert (r.inf, r.sup) == (0.0, 0.0)


def test_product_identity_times_one():
    h = rq.product_handle(identity(), const(1.0))
    r = h.range(UNIT)
    assert (r.inf, r.sup) == (0.0, 1.0)


def test_product_range_is_conservative_interval_product():
    h = rq.product_handle(identity(), identity())
    r = h.range(Interval(0.5, 1.0))
    assert (r.inf, r.sup) == (0.25, 1.0)
    assert h.range_exact is False


def test_dense_against_piecewise_product_is_exact():
    h = rq.product_handle(dense((0.0, 0.5)), identity())
    assert h.range_exact is True
    r = h.range(Interval(0.25, 0.3))
    assert (r.inf, r.sup) == (0.0, 0.3)  # off*x and on*x both dense


def test_build_handle_rejects_malformed_specs_with_location():
    with pytest.raises(SpecError) as e:
        rq.build_handle({"kind": "piecewise-polynomial", "domain": [0, 1],
                         "breakpoints": [0.0, 0.5, 0.4, 1.0],
                         "coefficients": [[1], [1], [1]]})
    assert "breakpoints" in str(e.value)
    with pytest.raises(SpecError) as e:
        rq.build_handle({"kind": "piecewise-polynomial", "domain": [0, 1],
                         "breakpoints": [0.0, 1.0], "coefficients": [[]]})
    assert "coefficients[0]" in str(e.value)
    with pytest.raises(SpecError):
        rq.build_handle({"kind": "mystery", "domain": [0, 1]})
    with pytest.raises(SpecError) as e:
        rq.build_handle({"kind": "named-special", "name": "dense-indicator",
                         "domain": [0, 1], "params": {"sub": [0.2, 1.5],
                                                      "off": 0, "on": 1}})
    assert "sub" in str(e.value)


def test_product_handle_rejects_domain_mismatch():
    with pytest.raises(rq.DomainError):
        rq.product_handle(identity(), identity(Interval(0.0, 2.0)))


def test_step_endpoint_conventions():
    left = step([0.0, 0.5, 1.0], [0.0, 1.0], convention="left")
    right = step([0.0, 0.5, 1.0], [0.0, 1.0], convention="right")
    assert left.eval(0.5) == 0.0
    assert right.eval(0.5) == 1.0
    assert left.eval(0.0) == right.eval(0.0) == 0.0
    assert left.eval(1.0) == right.eval(1.0) == 1.0


def test_named_specials_desugar():
    h = rq.build_handle({"kind": "named-special", "name": "abs-shift",
                         "params": {"shift": 0.5}}, UNIT)
    assert h.eval(0.5) == 0.0
    assert h.eval(0.0) == 0.5
    assert h.range(UNIT).sup == 0.5
    s = rq.build_handle({"kind": "named-special", "name": "sign-shift",
                         "params": {"shift": 0.5}}, UNIT)
    assert s.eval(0.25) == -1.0
    assert s.eval(0.75) == 1.0


def test_scalar_multiple_folds_into_leaves():
    h = rq.build_handle({"kind": "scalar-multiple", "scalar": -2.0,
                         "operand": {"kind": "named-special",
                                     "name": "dense-indicator",
                                     "params": {"sub": [0, 1], "off": 0.0,
                                                "on": 1.0}}}, UNIT)
    assert isinstance(h, rq.DenseIndicatorHandle)
    assert h.eval(0.5, TagKind.ON) == -2.0
    cert = h.osc_lower_uniform()
    assert cert is not None and cert.gamma == 2.0


def test_sum_of_polynomials_folds_to_one_piecewise():
    h = rq.build_handle({"kind": "sum", "terms": [
        {"kind": "piecewise-polynomial", "breakpoints": [0, 1],
         "coefficients": [[0, 1]]},
        {"kind": "piecewise-polynomial", "breakpoints": [0, 0.5, 1],
         "coefficients": [[1], [2]]},
    ]}, UNIT)
    assert isinstance(h, rq.PiecewiseHandle)
    assert h.range_exact
    assert h.eval(0.25) == 1.25
    assert h.eval(0.75) == 2.75


# ---------------------------------------------------------------------------
# oscillation
# ---------------------------------------------------------------------------

def test_oscillation_examples():
    assert rq.oscillation(identity(), Interval(0.25, 0.75)) == 0.5
    assert rq.oscillation(dense((0.0, 1.0)), Interval(0.3, 0.31)) == 1.0
    h = sine(Interval(0.0, math.pi))
    assert rq.oscillation(h, h.domain) == pytest.approx(1.0, abs=1e-15)


def test_oscillation_degenerate_interval_is_zero():
    assert rq.oscillation(identity(), Interval(0.5, 0.5)) == 0.0


def test_dense_oscillation_exact_on_every_subinterval():
    h = dense((0.2, 0.7), off=-1.0, on=2.0)
    rng = random.Random(3)
    for _ in range(200):
        a = rng.uniform(0.2, 0.7)
        b = rng.uniform(0.2, 0.7)
        if a == b:
            continue
        iv = Interval(min(a, b), max(a, b))
        assert rq.oscillation(h, iv) == 3.0


# ---------------------------------------------------------------------------
# quantified soundness invariants
# ---------------------------------------------------------------------------

def test_range_soundness_ten_thousand_pairs_per_handle():
    rng = random.Random(20240201)
    for h, kinds in family():
        dom = h.domain
        for _ in range(10_000):
            a = rng.uniform(dom.lo, dom.hi)
            b = rng.uniform(dom.lo, dom.hi)
            iv = Interval(min(a, b), max(a, b))
            r = h.range(iv)
            x = rng.uniform(iv.lo, iv.hi)
            v = h.eval(x, rng.choice(kinds))
            assert r.inf <= v <= r.sup


def test_range_inclusion_monotonicity():
    rng = random.Random(7)
    for h, _ in family():
        dom = h.domain
        for _ in range(2000):
            pts = sorted(rng.uniform(dom.lo, dom.hi) for _ in range(4))
            outer = Interval(pts[0], pts[3])
            inner = Interval(pts[1], pts[2])
            assert h.range(outer).contains(h.range(inner))


def test_oscillation_monotone_under_inclusion():
    rng = random.Random(11)
    for h, _ in family():
        dom = h.domain
        for _ in range(500):
            pts = sorted(rng.uniform(dom.lo, dom.hi) for _ in range(4))
            if pts[1] == pts[2]:
                continue
            assert (rq.oscillation(h, Interval(pts[1], pts[2]))
                    <= rq.oscillation(h, Interval(pts[0], pts[3])) + SLACK)


def test_sup_abs_dominates_range():
    for h, _ in family():
        r = h.range(h.domain)
        assert h.sup_abs() >= max(abs(r.inf), abs(r.sup)) - SLACK


def test_range_tight_against_sampling_for_exact_handles():
    for h, kinds in family():
        if not h.range_exact:
            continue
        r = h.range(h.domain)
        lo, hi = brute_range(h, h.domain, 4000, kinds)
        lip = h.lipschitz_bound()
        cushion = (lip or 4.0) * h.domain.width / 4000 + 1e-12
        assert r.inf >= lo - cushion
        assert r.sup <= hi + cushion


# ---------------------------------------------------------------------------
# exact integrals / restriction
# ---------------------------------------------------------------------------

def test_exact_integrals_match_antiderivatives():
    assert square().exact_integral(UNIT) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert identity().exact_integral(Interval(0.5, 1.0)) == pytest.approx(0.375)
    s = step([0.0, 0.25, 1.0], [2.0, -1.0])
    assert s.exact_integral(UNIT) == pytest.approx(2.0 * 0.25 - 0.75)
    pr = rq.product_handle(identity(), identity())
    assert pr.exact_integral(UNIT) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_sine_has_no_exact_integral_path():
    h = sine(Interval(0.0, math.pi))
    assert h.exact_integral(h.domain) is None


def test_dense_exact_integral_only_off_the_interior():
    h = dense((0.25, 0.75))
    assert h.exact_integral(Interval(0.0, 0.25)) == 0.0
    assert h.exact_integral(Interval(0.3, 0.6)) is None


def test_random_poly_integrals_against_trapezoid_oracle():
    import numpy as np
    from rsquad.harness import random_piecewise_poly_spec
    rng = random.Random(5)
    for _ in range(20):
        h = rq.build_handle(random_piecewise_poly_spec(rng, (0.0, 1.0)))
        xs = np.linspace(0.0, 1.0, 20001)
        ys = np.array([h.eval(float(x)) for x in xs])
        approx = float(np.trapezoid(ys, xs))
        assert h.exact_integral(UNIT) == pytest.approx(approx, abs=1e-4)


def test_restrict_agrees_pointwise():
    rng = random.Random(13)
    for h, kinds in family():
        dom = h.domain
        a = dom.lo + dom.width * 0.2
        b = dom.lo + dom.width * 0.9
        sub = h.restrict(Interval(a, b))
        for _ in range(300):
            x = rng.uniform(a, b)
            k = rng.choice(kinds)
            assert sub.eval(x, k) == pytest.approx(h.eval(x, k), abs=1e-12)


def test_restrict_rejects_bad_intervals():
    with pytest.raises(rq.DomainError):
        identity().restrict(Interval(-0.5, 0.5))
    with pytest.raises(rq.CatalogError):
        identity().restrict(Interval(0.5, 0.5))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_dense_certificate_gamma_and_region():
    cert = dense((0.2, 0.7), off=-1.0, on=2.0).osc_lower_uniform()
    assert cert.gamma == 3.0
    assert (cert.region.lo, cert.region.hi) == (0.2, 0.7)
    assert dense(off=1.0, on=1.0).osc_lower_uniform() is None


def test_glued_sum_keeps_certificate_where_coterm_is_flat():
    cert = glued().osc_lower_uniform()
    assert cert is not None
    assert cert.gamma == pytest.approx(1.0)
    assert cert.region.width == pytest.approx(0.5)


def test_product_certificate_scales_by_cofactor_floor():
    h = rq.product_handle(dense((0.0, 1.0)), const(2.0))
    cert = h.osc_lower_uniform()
    assert cert is not None and cert.gamma == pytest.approx(2.0)
    # co-factor vanishing on the sub-domain: no certificate (fg integrable)
    assert rq.product_handle(dense((0.0, 1.0)), const(0.0)).osc_lower_uniform() is None
    # straddling co-factor: conservatively no certificate
    straddle = poly([0.0, 1.0], [[-0.5, 1.0]])
    assert rq.product_handle(dense((0.4, 0.6)), straddle).osc_lower_uniform() is None
