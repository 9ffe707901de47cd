"""Instance checks of the groupoid and 2-category laws on paths and cells.

Level 1 laws hold up to rw-equality and are certified by an
:class:`RwSequence` that replays from one side to the other.  Level 2 laws
are decided by comparing canonical forms of :class:`TwoCell` values.

The pentagon and triangle checks build each route step by step.  When the
two routes meet at the same path but their canonical forms differ, the
report is flagged as a completeness gap: the rw2 rules available here do
not identify them, which is different from the diagram failing to commute
on the 1-level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .paths import EndpointMismatch, Path, Rho, Sigma, Tau, compose, print_path
from .rewrite import (
    FIRST,
    SECOND,
    RwRule,
    RwSequence,
    RwStep,
    replay,
    rw_equal,
    rw_expand,
    rw_step,
    subpath,
)
from .rewrite2 import TwoCell, hcomp, rw2_equal, seq_compose, seq_inverse, seq_refl

LAWS = (
    "assoc", "id-left", "id-right", "inv-left", "inv-right",
    "interchange", "pentagon", "triangle", "hcomp-assoc", "hcomp-id",
)


@dataclass
class LawReport:
    law: str
    instance: tuple[Any, ...]
    witness: Any
    verdict: bool
    detail: str = ""
    gap: bool = False
    level: int = 1

    @property
    def verdict_text(self) -> str:
        return "pass" if self.verdict else "fail"


# ------------------------------------------------------------------ level 1


def _certify(law: str, lhs: Path, rhs: Path, instance: tuple[Path, ...]) -> LawReport:
    cert = rw_equal(lhs, rhs)
    if cert is None:
        return LawReport(law, instance, None, False,
                         f"no rw-certificate between {print_path(lhs)} and {print_path(rhs)}")
    try:
        end = replay(cert)
    except ValueError as exc:
        return LawReport(law, instance, cert, False, f"certificate does not replay: {exc}")
    if cert.start != lhs or end != rhs:
        return LawReport(law, instance, cert, False, "certificate connects the wrong paths")
    return LawReport(law, instance, cert, True, f"{len(cert)} step(s)")


def check_groupoid(p: Path, q: Path, r: Path) -> list[LawReport]:
    """Associativity, both identities and both inverses for ``p: a -> b``,
    ``q: b -> c``, ``r: c -> d``.  Identities and inverses use ``p``."""
    inst = (p, q, r)
    pq_r = compose(compose(p, q), r)
    p_qr = compose(p, compose(q, r))
    return [
        _certify("assoc", pq_r, p_qr, inst),
        _certify("id-left", Tau(Rho(p.src), p), p, inst),
        _certify("id-right", Tau(p, Rho(p.dst)), p, inst),
        _certify("inv-left", Tau(Sigma(p), p), Rho(p.dst), inst),
        _certify("inv-right", Tau(p, Sigma(p)), Rho(p.src), inst),
    ]


# ------------------------------------------------------------------ level 2


def _replays(c: TwoCell) -> bool:
    try:
        return replay(c.underlying) == c.target and replay(c.canonical) == c.target
    except ValueError:
        return False


def _compare(law: str, lhs: TwoCell, rhs: TwoCell, instance: tuple[Any, ...]) -> LawReport:
    if not (_replays(lhs) and _replays(rhs)):
        return LawReport(law, instance, (lhs, rhs), False, "a composite does not replay", level=2)
    if (lhs.source, lhs.target) != (rhs.source, rhs.target):
        return LawReport(law, instance, (lhs, rhs), False, "composites have different ends",
                         level=2)
    if rw2_equal(lhs, rhs):
        return LawReport(law, instance, (lhs, rhs), True,
                         f"canonical length {len(lhs.canonical)}", level=2)
    return LawReport(
        law, instance, (lhs, rhs), False,
        f"same ends, canonical forms differ ({len(lhs.canonical)} vs {len(rhs.canonical)} steps)",
        gap=True, level=2,
    )


def check_2cat_vertical(theta: TwoCell, phi: TwoCell, psi: TwoCell) -> list[LawReport]:
    """Vertical identity, associativity and inverse laws for composable
    cells ``theta``, ``phi``, ``psi``."""
    inst = (theta, phi, psi)
    return [
        _compare("assoc", seq_compose(seq_compose(theta, phi), psi),
                 seq_compose(theta, seq_compose(phi, psi)), inst),
        _compare("id-left", seq_compose(seq_refl(theta.source), theta), theta, inst),
        _compare("id-right", seq_compose(theta, seq_refl(theta.target)), theta, inst),
        _compare("inv-left", seq_compose(seq_inverse(theta), theta), seq_refl(theta.target), inst),
        _compare("inv-right", seq_compose(theta, seq_inverse(theta)), seq_refl(theta.source), inst),
    ]


def check_interchange(alpha: TwoCell, chi: TwoCell, theta: TwoCell, phi: TwoCell) -> LawReport:
    """``alpha; chi`` on the left arm and ``theta; phi`` on the right arm.

    Compares the horizontal composite of the vertical composites with the
    vertical composite of the two horizontal composites.
    """
    inst = (alpha, chi, theta, phi)
    lhs = hcomp(seq_compose(alpha, chi), seq_compose(theta, phi))
    rhs = seq_compose(hcomp(alpha, theta), hcomp(chi, phi))
    return _compare("interchange", lhs, rhs, inst)


def _one(step: RwStep) -> TwoCell:
    return TwoCell(RwSequence(step.before, (step,)))


def check_hcomp(s: Path, r: Path, p: Path) -> list[LawReport]:
    """Componentwise checks on horizontal composition.

    ``hcomp-assoc``: the associator component at ``(s, r, p)`` is one tt
    step and is invertible.  ``hcomp-id``: the unitor components (trr with
    identity on the right, tlr with identity on the left) are invertible,
    and horizontal composition of identity cells is the identity.
    """
    inst = (s, r, p)
    assoc = _one(rw_step(compose(compose(s, r), p), RwRule.TT))
    reports = [
        _compare("hcomp-assoc", seq_compose(assoc, seq_inverse(assoc)), seq_refl(assoc.source), inst),
        _compare("hcomp-assoc", seq_compose(seq_inverse(assoc), assoc), seq_refl(assoc.target), inst),
    ]
    right_unit = _one(rw_step(Tau(s, Rho(s.dst)), RwRule.TRR))
    left_unit = _one(rw_step(Tau(Rho(s.src), s), RwRule.TLR))
    for unit in (right_unit, left_unit):
        if unit.target != s:
            reports.append(LawReport("hcomp-id", inst, unit, False,
                                     "unitor does not end at the path itself", level=2))
        reports.append(_compare("hcomp-id", seq_compose(unit, seq_inverse(unit)),
                                seq_refl(unit.source), inst))
    reports.append(_compare("hcomp-id", hcomp(seq_refl(s), seq_refl(r)),
                            seq_refl(compose(s, r)), inst))
    return reports


# ---------------------------------------------------------------- coherence


def _assoc_step(p: Path, at: tuple[str, ...]) -> RwStep:
    """Reassociate ``tau(x, tau(y, z))`` at ``at`` to ``tau(tau(x, y), z)``:
    a reversed tt step."""
    sub = subpath(p, at)
    if not (isinstance(sub, Tau) and isinstance(sub.second, Tau)):
        raise EndpointMismatch("associator needs a right-nested composite")
    x, y, z = sub.first, sub.second.first, sub.second.second
    return rw_expand(p, RwRule.TT, at, Tau(Tau(x, y), z))


def _route(start: Path, moves: list[tuple[str, tuple[str, ...], RwRule | None]]) -> TwoCell:
    cur = start
    steps = []
    for kind, at, rule in moves:
        step = _assoc_step(cur, at) if kind == "assoc" else rw_step(cur, rule, at)
        steps.append(step)
        cur = step.after
    return TwoCell(RwSequence(start, tuple(steps)))


def pentagon_routes(s: Path, r: Path, p: Path, u: Path) -> tuple[TwoCell, TwoCell]:
    """Both sides of the pentagon from ``tau(s, tau(r, tau(p, u)))`` to
    ``tau(tau(tau(s, r), p), u)``.

    The three-step side whiskers the associator by ``s``, applies it at the
    root, then whiskers it by ``u``.  The two-step side applies it twice at
    the root.
    """
    start = compose(s, compose(r, compose(p, u)))
    three = _route(start, [("assoc", (SECOND,), None), ("assoc", (), None),
                           ("assoc", (FIRST,), None)])
    two = _route(start, [("assoc", (), None), ("assoc", (), None)])
    return three, two


def triangle_routes(s: Path, r: Path) -> tuple[TwoCell, TwoCell]:
    """Both sides of the triangle from ``tau(s, tau(rho_b, r))`` to ``tau(s, r)``.

    One side reassociates and removes the identity on the right of ``s``
    (trr); the other removes the identity on the left of ``r`` (tlr).
    """
    if s.dst != r.src:
        raise EndpointMismatch("triangle needs composable paths")
    start = Tau(s, Tau(Rho(s.dst), r))
    via_assoc = _route(start, [("assoc", (), None), ("rule", (FIRST,), RwRule.TRR)])
    direct = _route(start, [("rule", (SECOND,), RwRule.TLR)])
    return via_assoc, direct


def _coherence(law: str, routes: tuple[TwoCell, TwoCell], goal: Path,
               inst: tuple[Path, ...]) -> LawReport:
    one, two = routes
    if one.target != goal or two.target != goal:
        return LawReport(law, inst, routes, False, "a route misses the expected composite",
                         level=2)
    return _compare(law, one, two, inst)


def check_pentagon(s: Path, r: Path, p: Path, u: Path) -> LawReport:
    goal = compose(compose(compose(s, r), p), u)
    return _coherence("pentagon", pentagon_routes(s, r, p, u), goal, (s, r, p, u))


def check_triangle(s: Path, r: Path) -> LawReport:
    return _coherence("triangle", triangle_routes(s, r), compose(s, r), (s, r))


@dataclass
class GapReport:
    """Instances whose routes meet on the 1-level but not as canonical cells."""

    reports: list[LawReport] = field(default_factory=list)

    def add(self, report: LawReport) -> None:
        if report.gap:
            self.reports.append(report)

    def render(self) -> str:
        lines = [f"completeness gaps: {len(self.reports)}"]
        for rep in self.reports:
            one, two = rep.witness
            lines.append(f"- {rep.law}: {rep.detail}")
            lines.append(f"    source  {print_path(one.source, 'paper')}")
            lines.append(f"    target  {print_path(one.target, 'paper')}")
            for label, c in (("route 1", one), ("route 2", two)):
                names = ", ".join(f"{st.rule}{'' if st.forward else '^-1'}@"
                                  f"{'.'.join(st.at) or 'root'}" for st in c.canonical.steps)
                lines.append(f"    {label} [{names}]")
        return "\n".join(lines)
