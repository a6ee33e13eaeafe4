"""Exact steplength thresholds that keep polyhedral sets invariant under discretization.

Everything is computed in exact rational arithmetic (:class:`fractions.Fraction`).
"""
from .euler import (EulerThresholdReport, Polytope, VertexEpsilon, euler_threshold,
                    tangent_cone_member, vertex_epsilon, vertex_epsilon_alt)
from .exceptions import (DimensionError, NoPositiveThresholdError, NotInvariantError,
                         SingularMatrixError)
from .invariance import (ContinuousCertificate, DiscreteCertificate, GammaResult, LinearSystem,
                         Polyhedron, euler_map_inclusion, min_gamma, verify_continuous,
                         verify_discrete)
from .linalg import Matrix, as_fraction
from .lp import LinearProgram, LpOutcome, feasibility, solve
from .poly import (FirstZeroResult, Polynomial, SturmChain, count_zeros, derivative,
                   first_positive_zero, first_sign_crossing, sturm_chain)
from .rational import (RationalFunction, RhoResult, radius_abs_monotonicity,
                       rational_threshold)
from .taylor import (PolynomialScheme, ThresholdResult, discrete_matrix, f_coefficient_polys,
                     taylor_threshold)

__version__ = "0.1.0"

__all__ = [
    "ContinuousCertificate", "DimensionError", "DiscreteCertificate", "EulerThresholdReport",
    "FirstZeroResult", "GammaResult", "LinearProgram", "LinearSystem", "LpOutcome", "Matrix",
    "NoPositiveThresholdError", "NotInvariantError", "Polyhedron", "Polynomial",
    "PolynomialScheme", "Polytope", "RationalFunction", "RhoResult", "SingularMatrixError",
    "SturmChain", "ThresholdResult", "VertexEpsilon", "as_fraction", "count_zeros",
    "derivative", "discrete_matrix", "euler_map_inclusion", "euler_threshold",
    "f_coefficient_polys", "feasibility", "first_positive_zero", "first_sign_crossing",
    "min_gamma", "radius_abs_monotonicity", "rational_threshold", "solve", "sturm_chain",
    "tangent_cone_member", "taylor_threshold", "verify_continuous", "verify_discrete",
    "vertex_epsilon", "vertex_epsilon_alt",
]
