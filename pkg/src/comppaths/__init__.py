"""Computational paths between lambda terms, their rewriting, and checks of
the groupoid and 2-category laws they satisfy."""

from .laws import (
    LawReport,
    check_2cat_vertical,
    check_groupoid,
    check_hcomp,
    check_interchange,
    check_pentagon,
    check_triangle,
)
from .paths import (
    Atomic,
    EndpointMismatch,
    Path,
    Rho,
    Sigma,
    Tau,
    compose,
    parse_path,
    path_of_conversion,
    print_path,
    well_formed,
)
from .rewrite import (
    BudgetExceeded,
    CapExceeded,
    RuleMismatch,
    RwRule,
    RwSequence,
    RwStep,
    replay,
    rewrite_graph,
    rw_contract,
    rw_equal,
    rw_normalize,
    rw_redexes,
)
from .rewrite2 import TwoCell, canonicalize, hcomp, rw2_equal, seq_compose, seq_inverse, seq_refl
from .terms import (
    Abs,
    App,
    Free,
    ParseError,
    StepKind,
    Var,
    conversion_search,
    parse_term,
    print_term,
)

__all__ = [
    "Abs", "App", "Atomic", "BudgetExceeded", "CapExceeded", "EndpointMismatch", "Free",
    "LawReport", "ParseError", "Path", "Rho", "RuleMismatch", "RwRule", "RwSequence", "RwStep",
    "Sigma", "StepKind", "Tau", "TwoCell", "Var", "canonicalize", "check_2cat_vertical",
    "check_groupoid", "check_hcomp", "check_interchange", "check_pentagon", "check_triangle",
    "compose", "conversion_search", "hcomp", "parse_path", "parse_term", "path_of_conversion",
    "print_path", "print_term", "replay", "rewrite_graph", "rw2_equal", "rw_contract",
    "rw_equal", "rw_normalize", "rw_redexes", "seq_compose", "seq_inverse", "seq_refl",
    "well_formed",
]
