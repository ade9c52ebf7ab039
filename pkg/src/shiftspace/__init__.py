"""Finite-length context analysis for symbolic dynamics.

Count and classify the length-n words of a shift space by the contexts
they admit: followers (right extensions), predecessors (left extensions),
and extenders (two-sided pairs).  Shift languages come from built-in
families (`spaces`), transforms of other languages (`transforms`), or JSON
spec files (`specfile`); counts feed growth-rate estimates (`entropy`) and
a verification suite (`verify`).
"""

from .core import (Alphabet, CertificationError, ConstructionError,
                   CountRow, CountTable, DEFAULT_CAP, DomainError,
                   LanguageOracle, PrecisionError, ResourceCapError,
                   ShiftSpaceError, Word, complexity_sequence,
                   enumerate_language, language_size, membership,
                   subword_count)
from .spaces import (BetaDigits, SoficPresentation, beta_dstar_digits,
                     beta_shift, context_free_shift, even_shift, full_shift,
                     random_sofic_presentation, sft, sofic, sturmian)
from .transforms import (block_image, disjoint_union, higher_block,
                         marker_interleave, product, reverse,
                         selector_shift, star_collapse, sturmian_modulated)
from .classify import (ClassifyResult, ContextSignature, SweepResult,
                       classify_bounded, classify_sofic_exact, k_sweep,
                       left_constraint_count, signature)
from .entropy import (EntropyEstimate, EntropyRow, GapReport, GapRow,
                      estimate, gap_report)
from .specfile import SpecError, build, emit, load, parse, parse_file

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "BetaDigits", "CertificationError", "ClassifyResult",
    "ConstructionError", "ContextSignature", "CountRow", "CountTable",
    "DEFAULT_CAP", "DomainError", "EntropyEstimate", "EntropyRow",
    "GapReport", "GapRow", "LanguageOracle", "PrecisionError",
    "ResourceCapError", "ShiftSpaceError", "SoficPresentation", "SpecError",
    "SweepResult", "Word", "beta_dstar_digits", "beta_shift", "block_image",
    "build", "classify_bounded", "classify_sofic_exact",
    "complexity_sequence", "context_free_shift", "disjoint_union", "emit",
    "enumerate_language", "estimate", "even_shift", "full_shift",
    "gap_report", "higher_block", "k_sweep", "language_size",
    "left_constraint_count", "load", "marker_interleave", "membership",
    "parse", "parse_file", "product", "random_sofic_presentation",
    "reverse", "selector_shift", "sft", "signature", "sofic",
    "star_collapse", "sturmian", "sturmian_modulated", "subword_count",
]
