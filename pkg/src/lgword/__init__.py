"""Omega-terms over local groups: rewriting, canonical forms, outlines and a decision procedure."""

from .canon import (
    CanonReport,
    canonical_form,
    canonicalize_LG,
    canonicalize_rank1,
    is_canonical_LG,
    is_canonical_rank1,
    reduce_to_rank_le2,
    semicanonicalize_rank2,
    separator_word,
    step1_eliminations_agglutinations,
    step2_extended_shifts,
    step3_shortenings,
    variety_equal,
)
from .decide import Verdict, decide, self_consistency
from .errors import ExponentOverflow, InternalError, KTermError, PreconditionError, TermSyntaxError
from .outline import OutlineWord, block_analysis, instantiate, outline, q_param, reduce_free, root
from .rules import CATALOG, Derivation, RewriteStep, apply_step, flatten, match_rule, verify_derivation
from .semigroup import FiniteSemigroup, builtin_battery, evaluate, identity_holds
from .terms import KTerm, LimitPower, Product, Word, parse, rank, show

__all__ = [
    "CATALOG", "CanonReport", "Derivation", "ExponentOverflow", "FiniteSemigroup", "InternalError",
    "KTerm", "KTermError", "LimitPower", "OutlineWord", "PreconditionError", "Product", "RewriteStep",
    "TermSyntaxError", "Verdict", "Word", "apply_step", "block_analysis", "builtin_battery",
    "canonical_form", "canonicalize_LG", "canonicalize_rank1", "decide", "evaluate", "flatten",
    "identity_holds", "instantiate", "is_canonical_LG", "is_canonical_rank1", "match_rule", "outline",
    "parse", "q_param", "rank", "reduce_free", "reduce_to_rank_le2", "root", "self_consistency",
    "semicanonicalize_rank2", "separator_word", "show", "step1_eliminations_agglutinations",
    "step2_extended_shifts", "step3_shortenings", "variety_equal", "verify_derivation",
]
