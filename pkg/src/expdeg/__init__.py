"""Combinatorics of expanded degenerations of xyz = t: fibres, stability and limits."""

from .errors import (ClassOverflow, ConditionUndefined, DimensionMismatch, ExpDegError,
                     MultipleLimits, NoIntegralRoom, NoLimit, NoSuchComponent, SchemaError,
                     SearchBoundExceeded, UnsupportedTarget, ValidationError)
from .fibres import (Bubble, Component, ExpandedFibre, build_fibre, delta_membership,
                     fibres_isomorphic, subdivision_of)
from .limits import (AssociatedPair, AuditReport, BarClass, PointConfiguration,
                     associated_pairs, audit_condition, bar_class, enumerate_configurations,
                     stable_extensions, unique_limit)
from .pairs import IndexEmbedding, UnbrokenPair, common_refinement, embed_pair, is_unbroken
from .smoothing import SmoothingProblem, enumerate_slides, smoothing_targets
from .stability import (BUILTIN_CONDITIONS, FibreClass, StabilityCondition, SupportAssignment,
                        SupportPoint, git_criterion, is_ab_stable, is_lw_stable, is_sws_stable,
                        stabilizer_rank)
from .strata import NormalizedStratum, Stratum, base_action_weights, normal_forms, strata_equivalent
from .tropical import (Subdivision, check_unbroken_subdivision, refines_up_to_equivalence,
                       rescale)

__all__ = [name for name in dir() if not name.startswith("_")]
