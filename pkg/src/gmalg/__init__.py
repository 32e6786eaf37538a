"""Generalized matrix algebras over prime fields: structure checks, traces, Lie maps."""

from .algebra import (Algebra, LinearMap, ProperLinearWitness, alg_mul, center_basis,
                      commuting_linear_map_space, matrix_algebra, proper_linear_decompose,
                      upper_triangular_algebra, validate_algebra)
from .blocks import BlockComponents, RequiresCommuting, block_components, lemma_checks
from .field import NoSolution, TooLarge, rref, solve_affine, subspace_contains
from .gma import (Bimodule, CenterData, Gma, MoritaContext, NotIdempotent, NotInDomain,
                  TrivialIdempotent, Verdict, build_block_partition, build_from_idempotent,
                  build_triangular, check_loyal, check_module_faithful, gma_center, phi_apply,
                  validate_morita)
from .hypotheses import HypothesisReport, hypothesis_report
from .lie import (DimensionMismatch, LieDecomposition, LieDecompositionError,
                  check_identity_L41, is_lie_isomorphism, lie_decompose, verify_standard_form)
from .traces import (BilinearMap, ProperDecomposition, evaluate_trace, is_centralizing_trace,
                     is_commuting_trace, proper_trace_decompose, properness_subspace, trace_space)

__all__ = [name for name in dir() if not name.startswith("_")]
