"""Numerical toolkit for fractional Sobolev / Besov / Holder / BMO norms on
sampled periodic functions, plus a verification harness for the associated
interpolation-inequality ratios."""

from .corpus import (
    GeneratorSpec,
    Grid,
    SampledFunction,
    dilate,
    generate,
    load_corpus,
    lp_norm,
    make_grid,
    reference_corpus_specs,
    save_corpus,
)
from .inequalities import (
    EvalContext,
    InequalityCase,
    NormSpec,
    RatioRecord,
    band_holder_check,
    blowup_reference_case,
    derive_exponents,
    embedding_chain_check,
    equivalence_check,
    evaluate,
    lifting_check,
    make_case,
    reference_cases,
    two_scale_bound_check,
)
from .lpdecomp import (
    FilterBank,
    MollifierFamily,
    band,
    build_filter_bank,
    build_mollifiers,
    mollify,
    spectral_derivative,
    verify_moments,
)
from .norms import (
    NormResult,
    besov_norm,
    besov_sup_mollifier,
    bmo_norm,
    directional_difference_seminorm,
    holder_seminorm,
    sobolev_norm_general,
    sobolev_seminorm,
)
from .pointwise import (
    PointwiseField,
    g_functional,
    maximal_function,
    pointwise_bound_check,
)
from .studies import (
    StudyReport,
    blowup_probe,
    constant_scan,
    extremize_ratio,
    scaling_sweep,
)

__all__ = [
    "Grid",
    "GeneratorSpec",
    "SampledFunction",
    "make_grid",
    "generate",
    "dilate",
    "lp_norm",
    "load_corpus",
    "save_corpus",
    "reference_corpus_specs",
    "FilterBank",
    "MollifierFamily",
    "build_filter_bank",
    "band",
    "build_mollifiers",
    "mollify",
    "verify_moments",
    "spectral_derivative",
    "NormResult",
    "sobolev_seminorm",
    "sobolev_norm_general",
    "holder_seminorm",
    "besov_norm",
    "besov_sup_mollifier",
    "bmo_norm",
    "directional_difference_seminorm",
    "PointwiseField",
    "maximal_function",
    "g_functional",
    "pointwise_bound_check",
    "EvalContext",
    "InequalityCase",
    "NormSpec",
    "RatioRecord",
    "derive_exponents",
    "make_case",
    "reference_cases",
    "blowup_reference_case",
    "evaluate",
    "band_holder_check",
    "equivalence_check",
    "lifting_check",
    "two_scale_bound_check",
    "embedding_chain_check",
    "StudyReport",
    "scaling_sweep",
    "constant_scan",
    "extremize_ratio",
    "blowup_probe",
]

__version__ = "0.1.0"
