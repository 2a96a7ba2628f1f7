"""Certified Riemann-Stieltjes quadrature.

Computes integrals of bounded functions f against indefinite-integral
integrators G(x) = c + integral of g, by deciding Riemann integrability of
the product f*g and reducing to a certified Riemann integral, with
oscillation-based error enclosures and a verification harness.
"""

from .catalog import (
    SLACK_DEFAULT,
    CatalogError,
    DenseIndicatorHandle,
    DomainError,
    FunctionHandle,
    Interval,
    OscFloor,
    PiecewiseHandle,
    ProductHandle,
    RangeBounds,
    ScaledSineHandle,
    SpecError,
    SumHandle,
    TagKind,
    build_handle,
    oscillation,
    product_handle,
    step_handle,
)
from .partition import (
    DoubleTaggedPartition,
    Partition,
    Tag,
    TaggedPartition,
    double_tag,
    mesh,
    refine_worst,
    tag,
    uniform,
)
from .sums import (
    SumResult,
    darboux_sums,
    mixed_sum,
    mixed_sum_error_bound,
    riemann_sum,
    rs_sum,
    rs_vs_riemann_gap_bound,
)
from .integrator import (
    DEFAULT_BUDGET,
    Enclosure,
    IndefiniteIntegral,
    Integrable,
    IntegrabilityVerdict,
    IntegrationError,
    MeanValuePointsError,
    NotIntegrable,
    Undecided,
    decide_riemann_integrable,
    eval_indefinite,
    integrate_by_parts,
    integrate_rs_direct,
    integrate_rs_reduced,
    mean_value_points,
    symmetric_rs_integrate,
)
from .harness import (
    Scenario,
    VerificationReport,
    default_corpus,
    load_corpus,
    run_all,
    run_scenario,
)

__version__ = "0.1.0"
