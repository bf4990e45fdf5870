"""Exact rational geometry for convex semilinear sets.

Represents convex semilinear subsets of R^n as partitions of their closed
hull into relatively open cells, decides the six-way classification by
translation structure, dents, and ray cuts, runs the definability algebra
(affine images and preimages, finite intersections, closure, directional
limits), and compiles verified constructions between canonical sets.
"""
from .linalg import AffineMap, format_rational, parse_rational
from .lp import (EQ, LE, LT, DimensionMismatch, Feasible, Infeasible,
                 LinConstraint, constraint, solve_feasibility, verify_farkas)
from .polyhedron import (EmptyPolyhedronError, HPolyhedron, SeparationCertificate,
                         convex_hull_union, dd_convert, empty_polyhedron,
                         face_lattice, from_generators, full_space, hpoly,
                         implicit_equalities, lineality_space, minkowski_sum,
                         project, recession_cone, relint_point, separate)
from .cells import (Cell, CellSet, NotConvexError, ResourceLimitError,
                    canonicalize, cellset_from_polyhedron, closure,
                    convexity_witness, empty_cellset, equal, piece,
                    sample_points, separating_point, subset)
from .classification import (BoundedDecomposition, Classification, ConvexClass,
                       DentWitness, InnerSpaceResult, NotDecomposable,
                       RayWitness, bounded_mod_subspace, classify, dent_at,
                       essentially_inner_point, find_dent, find_ray,
                       inner_vector_space, is_affine, is_closed,
                       outer_dimension)
from .algebra import (MonotonicityReport, OpNode, affine_image, affine_preimage,
                      check_monotonicity, closure_node, directional_limit,
                      dlimit_node, evaluate, image, intersect, intersect_nodes,
                      preimage, source)
from .constructions import (ConstructionReport, GridSpec, PointwiseReport,
                            PolymorphismResult, PreconditionError,
                            construct_compact_interval, construct_open_interval,
                            construct_pointed_rectangle, construct_ray,
                            define_closed_from_ray, define_from_ray,
                            pointed_half_plane, polymorphism_check,
                            representative, verify_pointed_stripe_construction)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
