"""Exact and simulated moments of subgraph counts in fixed-edge and independent-edge random graphs."""

from .census import OverlapPolynomial, OverlapTable, overlap_polynomial, overlap_table
from .counting import count_colored_motif, count_edges, count_motif, count_triangles, count_two_stars
from .ensemble import (
    EnsembleSpec,
    GraphSample,
    SeedStream,
    edge_budget,
    sample_block,
    sample_dependent,
    sample_independent,
)
from .errors import DomainError, FeasibilityExceeded, VerificationFailed
from .moments import (
    asymptotic_report,
    covariance_with_edges_indep,
    falling_prob,
    mean_dependent,
    mean_indep,
    residual_variance_indep,
    variance_dependent_asymptotic,
    variance_dependent_exact,
    variance_indep_exact,
)
from .motif import Motif, automorphism_order, copies_in_complete, make_builtin

__version__ = "0.1.0"
