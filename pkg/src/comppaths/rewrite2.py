"""Level-2 structure: rw-sequences as 2-cells between paths.

A :class:`TwoCell` wraps an :class:`RwSequence` and stands for its class
under rw2-equality.  Classes are decided by :func:`canonicalize`:

* ``tt2``, ``trr2``, ``tlr2`` hold on the nose, since sequences compose by
  concatenation and the identity is the empty sequence;
* ``ss2``, ``sr2``, ``tr2``, ``tsr2`` become cancellation of a step against
  its own reversal;
* ``cd2`` (choice independence) becomes commutation of adjacent steps at
  disjoint positions, sorted into lexicographic position order.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from .paths import EndpointMismatch, Path, Tau, canonical_text
from .rewrite import (
    FIRST,
    SECOND,
    RwSequence,
    RwStep,
    disjoint,
    format_path_position,
    position_key,
    replace_subpath,
    subpath,
)


class Rw2Rule(enum.Enum):
    SR2 = "sr2"
    SS2 = "ss2"
    TR2 = "tr2"
    TSR2 = "tsr2"
    TRR2 = "trr2"
    TLR2 = "tlr2"
    TT2 = "tt2"
    CD2 = "cd2"


def _cancels(a: RwStep, b: RwStep) -> bool:
    return (
        a.rule is b.rule
        and a.at == b.at
        and a.forward != b.forward
        and b.after == a.before
    )


def _swap(a: RwStep, b: RwStep) -> tuple[RwStep, RwStep]:
    """Exchange two consecutive steps at disjoint positions."""
    mid = replace_subpath(a.before, b.at, subpath(b.after, b.at))
    return (
        RwStep(a.before, mid, b.rule, b.at, b.forward),
        RwStep(mid, b.after, a.rule, a.at, a.forward),
    )


def _cancel_pass(steps: list[RwStep]) -> bool:
    out: list[RwStep] = []
    changed = False
    for s in steps:
        if out and _cancels(out[-1], s):
            out.pop()
            changed = True
        else:
            out.append(s)
    steps[:] = out
    return changed


def _swap_pass(steps: list[RwStep]) -> bool:
    changed = False
    for i in range(len(steps) - 1):
        a, b = steps[i], steps[i + 1]
        if disjoint(a.at, b.at) and position_key(b.at) < position_key(a.at):
            steps[i], steps[i + 1] = _swap(a, b)
            changed = True
    return changed


def canonicalize(seq: RwSequence) -> RwSequence:
    """Canonical representative of the rw2-class of ``seq``.

    Alternates cancellation of inverse pairs and sorting swaps until
    neither changes anything.  Each swap removes one inversion and each
    cancellation shortens the sequence, so this terminates.
    """
    steps = list(seq.steps)
    _cancel_pass(steps)
    while _swap_pass(steps):
        _cancel_pass(steps)
    return RwSequence(seq.start, tuple(steps), seq.name)


@dataclass(frozen=True)
class TwoCell:
    underlying: RwSequence
    canonical: RwSequence = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "canonical", canonicalize(self.underlying))

    @property
    def source(self) -> Path:
        return self.underlying.start

    @property
    def target(self) -> Path:
        return self.underlying.end

    @property
    def steps(self) -> tuple[RwStep, ...]:
        return self.underlying.steps

    def digest(self) -> str:
        return canonical_digest(self.canonical)


def canonical_digest(seq: RwSequence) -> str:
    h = hashlib.sha256(canonical_text(seq.start).encode("utf-8"))
    for s in seq.steps:
        h.update(f"|{s.rule}@{format_path_position(s.at)}:{s.direction}".encode("utf-8"))
    return h.hexdigest()[:16]


def cell(seq: RwSequence) -> TwoCell:
    return TwoCell(seq)


def seq_refl(p: Path) -> TwoCell:
    """Identity 2-cell on ``p``; on ``Rho(a)`` this is ρ_{ρ_a}."""
    return TwoCell(RwSequence(p))


def seq_inverse(theta: TwoCell) -> TwoCell:
    return TwoCell(theta.underlying.inverse())


def seq_compose(theta: TwoCell, phi: TwoCell) -> TwoCell:
    """Vertical composition: ``theta`` then ``phi``."""
    if theta.target != phi.source:
        raise EndpointMismatch("target of the first 2-cell is not the source of the second")
    return TwoCell(RwSequence(theta.source, theta.steps + phi.steps))


def rw2_equal(theta: TwoCell, phi: TwoCell) -> bool:
    return (
        theta.source == phi.source
        and theta.target == phi.target
        and theta.canonical.steps == phi.canonical.steps
    )


def _under(step: RwStep, tag: str, other: Path) -> RwStep:
    if tag == FIRST:
        return RwStep(Tau(step.before, other), Tau(step.after, other),
                      step.rule, (FIRST,) + step.at, step.forward)
    return RwStep(Tau(other, step.before), Tau(other, step.after),
                  step.rule, (SECOND,) + step.at, step.forward)


def hcomp(alpha: TwoCell, theta: TwoCell) -> TwoCell:
    """Horizontal composite of ``alpha: s => t`` (paths a -> b) and
    ``theta: r => w`` (paths b -> c), a 2-cell ``tau(s, r) => tau(t, w)``.

    Runs ``alpha`` in the first arm with ``r`` fixed, then ``theta`` in
    the second arm with ``t`` fixed.  Written ``theta o_h alpha`` in the
    usual right-to-left notation.
    """
    s, t = alpha.source, alpha.target
    r = theta.source
    if s.dst != r.src:
        raise EndpointMismatch("horizontal composite needs the first cell's paths to end "
                               "where the second cell's paths start")
    steps = [_under(x, FIRST, r) for x in alpha.steps]
    steps += [_under(x, SECOND, t) for x in theta.steps]
    return TwoCell(RwSequence(Tau(s, r), tuple(steps)))


whisker = hcomp
