"""Numerical toolkit for the Cauchy dual subnormality question on weighted
Dirichlet spaces with finitely supported circle measures."""

from .measure import CirclePoint, Measure, parse_measure, rotate_measure
from .policy import NumericPolicy
from .fejer import TrigPoly, FejerRiesz, build_trig, factorize, verify_identity
from .dirichlet import (DirichletData, OuterData, build_dirichlet, build_outer,
                        eval_f, kernel_full, kernel_omu, kernel_perp)
from .debranges import (HermForm, SchurData, eval_S, extract_C, factor_P,
                        kernel_KB, make_schur)
from .verdict import (PairEvidence, PsdProbe, Verdict, decide,
                      moment_truncation, offdiag_sums, pair_premises,
                      psd_search)
from .report import PipelineResult, analyze, reference_checks

__all__ = [
    "CirclePoint", "Measure", "parse_measure", "rotate_measure",
    "NumericPolicy",
    "TrigPoly", "FejerRiesz", "build_trig", "factorize", "verify_identity",
    "DirichletData", "OuterData", "build_dirichlet", "build_outer",
    "eval_f", "kernel_full", "kernel_omu", "kernel_perp",
    "HermForm", "SchurData", "eval_S", "extract_C", "factor_P",
    "kernel_KB", "make_schur",
    "PairEvidence", "PsdProbe", "Verdict", "decide", "moment_truncation",
    "offdiag_sums", "pair_premises", "psd_search",
    "PipelineResult", "analyze", "reference_checks",
]

__version__ = "0.1.0"
