"""Exact nonlinear optimization over integer points with generalized unary weights.

Exact rational LP, fiber geometry of ``x -> Wx``, the quasiconvex / norm /
ray-concave optimizers, randomized common-base search for vectorial matroid
pairs, and brute-force oracles used to check all of them.
"""

from .exact import Surd
from .fibers import ImageVertexSet, fiber_integer_point, fiber_max, image_vertices, is_vertex
from .harness import (ExplicitFeasibleSet, Instance, brute_force_opt, enumerate_common_bases,
                      gen_instance, hull_separation)
from .lp import HPolytope, LPResult, SeparationOracle, VPolytope, lex_max, lp_solve, lp_solve_oracle
from .objectives import ObjectiveOracle, norm_constants_pnorm, parse_objective, pnorm
from .optimizers import (ApproxResult, norm_max_approx, primary_objective_face, quasiconvex_max,
                         raycave_min_approx)
from .rand_intersect import VectorialMatroidPair, interpolate_support, optimal_common_base
from .weights import FeasibleMeta, GeneralizedUnaryWeights, candidate_image_grid

__version__ = "0.1.0"

__all__ = [
    "ApproxResult", "ExplicitFeasibleSet", "FeasibleMeta", "GeneralizedUnaryWeights", "HPolytope",
    "ImageVertexSet", "Instance", "LPResult", "ObjectiveOracle", "SeparationOracle", "Surd",
    "VPolytope", "VectorialMatroidPair", "brute_force_opt", "candidate_image_grid",
    "enumerate_common_bases", "fiber_integer_point", "fiber_max", "gen_instance", "hull_separation",
    "image_vertices", "interpolate_support", "is_vertex", "lex_max", "lp_solve", "lp_solve_oracle",
    "norm_constants_pnorm", "norm_max_approx", "optimal_common_base", "parse_objective", "pnorm",
    "primary_objective_face", "quasiconvex_max", "raycave_min_approx",
]
