"""Deliberately wrong right-hand sides, for mutation-sensitivity checks.

Each fault replaces one rule's contraction while keeping its left-hand
side, so the rule still fires where it used to.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Callable, Iterator

from .paths import Path, Rho, Sigma, Tau
from .rewrite import RHS, RwRule, clear_caches

FAULTS: dict[RwRule, Callable[[Path], Path]] = {
    RwRule.SR: lambda p: p,  # no progress
    RwRule.SS: lambda p: p.inner,  # drops one sigma instead of two
    RwRule.TR: lambda p: Rho(p.first.dst),
    RwRule.TSR: lambda p: Rho(p.second.src),
    RwRule.TRR: lambda p: Sigma(p.first),
    RwRule.TLR: lambda p: Sigma(p.second),
    RwRule.TT: lambda p: Tau(p.first.first, Tau(p.second, p.first.second)),
}


@contextmanager
def corrupted(rule: RwRule | str) -> Iterator[RwRule]:
    """Run the body with ``rule``'s right-hand side replaced by its fault."""
    rule = RwRule(rule)
    saved = RHS[rule]
    RHS[rule] = FAULTS[rule]
    clear_caches()
    try:
        yield rule
    finally:
        RHS[rule] = saved
        clear_caches()
