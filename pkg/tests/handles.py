"""Shared handle builders for the test suite."""

from __future__ import annotations

import rsquad as rq

UNIT = rq.Interval(0.0, 1.0)


def poly(breakpoints, coefficients, domain=None, convention="left"):
    spec = {"kind": "piecewise-polynomial", "breakpoints": list(breakpoints),
            "coefficients": [list(c) for c in coefficients],
            "convention": convention}
    if domain is None:
        domain = rq.Interval(breakpoints[0], breakpoints[-1])
    return rq.build_handle(spec, domain)


def const(value, domain=UNIT):
    return poly([domain.lo, domain.hi], [[value]], domain)


def identity(domain=UNIT):
    return poly([domain.lo, domain.hi], [[0.0, 1.0]], domain)


def square(domain=UNIT):
    return poly([domain.lo, domain.hi], [[0.0, 0.0, 1.0]], domain)


def step(breakpoints, values, convention="left", domain=None):
    spec = {"kind": "step", "breakpoints": list(breakpoints),
            "values": list(values), "convention": convention}
    if domain is None:
        domain = rq.Interval(breakpoints[0], breakpoints[-1])
    return rq.build_handle(spec, domain)


def dense(sub=(0.0, 1.0), off=0.0, on=1.0, domain=UNIT):
    return rq.build_handle(
        {"kind": "named-special", "name": "dense-indicator",
         "params": {"sub": list(sub), "off": off, "on": on}}, domain)


def sine(domain, amplitude=1.0, frequency=1.0, phase=0.0, offset=0.0):
    return rq.build_handle(
        {"kind": "named-special", "name": "scaled-sin",
         "params": {"amplitude": amplitude, "frequency": frequency,
                    "phase": phase, "offset": offset}}, domain)


def glued(domain=UNIT):
    """Dense indicator on the lower half glued with x on the upper half."""
    midpt = domain.midpoint()
    return rq.build_handle(
        {"kind": "sum", "terms": [
            {"kind": "named-special", "name": "dense-indicator",
             "params": {"sub": [domain.lo, midpt], "off": 0.0, "on": 1.0}},
            {"kind": "piecewise-polynomial",
             "breakpoints": [domain.lo, midpt, domain.hi],
             "coefficients": [[0.0], [0.0, 1.0]]},
        ]}, domain)


def zero_then_one(domain=UNIT):
    midpt = domain.midpoint()
    return step([domain.lo, midpt, domain.hi], [0.0, 1.0], domain=domain)
