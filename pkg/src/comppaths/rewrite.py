"""Level-1 rewriting of paths: the seven rules sr, ss, tr, tsr, trr, tlr, tt.

Rules fire anywhere inside a path (under ``sigma`` and in both ``tau``
arms).  A :class:`PathPosition` addresses a subpath with the tags
``inner`` (into ``sigma``), ``first`` and ``second`` (into ``tau``).
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from .paths import Path, Rho, Sigma, Tau, canonical_text, print_path, size
from .terms import InvalidPosition

INNER, FIRST, SECOND = "inner", "first", "second"
_TAG_RANK = {INNER: 0, FIRST: 1, SECOND: 2}

PathPosition = tuple  # tuple[str, ...]


class RwRule(enum.Enum):
    SR = "sr"
    SS = "ss"
    TR = "tr"
    TSR = "tsr"
    TRR = "trr"
    TLR = "tlr"
    TT = "tt"

    def __str__(self) -> str:
        return self.value


class RuleMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Normalization ran past its step budget.  Would refute termination."""


class CapExceeded(RuntimeError):
    pass


# ----------------------------------------------------------------- matching


def _rules_at(p: Path) -> tuple[RwRule, ...]:
    """Rules whose left-hand side matches at the root of ``p``, in
    declaration order."""
    kind = type(p)
    if kind is Sigma:
        inner = type(p.inner)
        if inner is Rho:
            return (RwRule.SR,)
        if inner is Sigma:
            return (RwRule.SS,)
        return ()
    if kind is not Tau:
        return ()
    first, second = p.first, p.second
    found = []
    if type(second) is Sigma and second.inner == first:
        found.append(RwRule.TR)
    if type(first) is Sigma and first.inner == second:
        found.append(RwRule.TSR)
    if type(second) is Rho:
        found.append(RwRule.TRR)
    if type(first) is Rho:
        found.append(RwRule.TLR)
    if type(first) is Tau:
        found.append(RwRule.TT)
    return tuple(found)


def _matches(rule: RwRule, p: Path) -> bool:
    return rule in _rules_at(p)


def _rhs_sr(p: Sigma) -> Path:
    return p.inner


def _rhs_ss(p: Sigma) -> Path:
    return p.inner.inner


def _rhs_tr(p: Tau) -> Path:
    return Rho(p.first.src)


def _rhs_tsr(p: Tau) -> Path:
    return Rho(p.second.dst)


def _rhs_trr(p: Tau) -> Path:
    return p.first


def _rhs_tlr(p: Tau) -> Path:
    return p.second


def _rhs_tt(p: Tau) -> Path:
    t, r = p.first.first, p.first.second
    return Tau(t, Tau(r, p.second))


# Right-hand sides by rule.  Fault-injection tests swap entries here.
RHS: dict[RwRule, Callable[[Path], Path]] = {
    RwRule.SR: _rhs_sr,
    RwRule.SS: _rhs_ss,
    RwRule.TR: _rhs_tr,
    RwRule.TSR: _rhs_tsr,
    RwRule.TRR: _rhs_trr,
    RwRule.TLR: _rhs_tlr,
    RwRule.TT: _rhs_tt,
}


# ---------------------------------------------------------------- positions


def format_path_position(at: PathPosition) -> str:
    return ".".join(at) if at else "root"


def parse_path_position(text: str) -> PathPosition:
    text = text.strip()
    if text in ("", "root"):
        return ()
    tags = tuple(t.strip() for t in text.split("."))
    for tag in tags:
        if tag not in _TAG_RANK:
            raise ValueError(f"unknown path position tag {tag!r}")
    return tags


def position_key(at: PathPosition) -> tuple[int, ...]:
    return tuple(_TAG_RANK[t] for t in at)


def is_prefix(a: PathPosition, b: PathPosition) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def disjoint(a: PathPosition, b: PathPosition) -> bool:
    return not is_prefix(a, b) and not is_prefix(b, a)


def subpath(p: Path, at: PathPosition) -> Path:
    for tag in at:
        kind = type(p)
        if tag == INNER and kind is Sigma:
            p = p.inner
        elif tag == FIRST and kind is Tau:
            p = p.first
        elif tag == SECOND and kind is Tau:
            p = p.second
        else:
            raise InvalidPosition(f"path position {format_path_position(at)} leaves the path")
    return p


def replace_subpath(p: Path, at: PathPosition, new: Path) -> Path:
    if not at:
        return new
    tag, rest = at[0], at[1:]
    kind = type(p)
    if tag == INNER and kind is Sigma:
        return Sigma(replace_subpath(p.inner, rest, new))
    if tag == FIRST and kind is Tau:
        return Tau(replace_subpath(p.first, rest, new), p.second)
    if tag == SECOND and kind is Tau:
        return Tau(p.first, replace_subpath(p.second, rest, new))
    raise InvalidPosition(f"path position {format_path_position(at)} leaves the path")


def _walk(p: Path, at: PathPosition = ()) -> Iterator[tuple[PathPosition, Path]]:
    yield at, p
    match p:
        case Sigma(inner):
            yield from _walk(inner, at + (INNER,))
        case Tau(first, second):
            yield from _walk(first, at + (FIRST,))
            yield from _walk(second, at + (SECOND,))


def _walk_post(p: Path, at: PathPosition = ()) -> Iterator[tuple[PathPosition, Path]]:
    match p:
        case Sigma(inner):
            yield from _walk_post(inner, at + (INNER,))
        case Tau(first, second):
            yield from _walk_post(first, at + (FIRST,))
            yield from _walk_post(second, at + (SECOND,))
    yield at, p


# ------------------------------------------------------------ one-step rewriting


@lru_cache(maxsize=1 << 16)
def _redexes(p: Path) -> tuple[tuple[RwRule, PathPosition], ...]:
    here = tuple((rule, ()) for rule in _rules_at(p))
    kind = type(p)
    if kind is Sigma:
        return here + tuple((r, (INNER,) + at) for r, at in _redexes(p.inner))
    if kind is Tau:
        return (here
                + tuple((r, (FIRST,) + at) for r, at in _redexes(p.first))
                + tuple((r, (SECOND,) + at) for r, at in _redexes(p.second)))
    return here


@lru_cache(maxsize=1 << 16)
def _successors(p: Path) -> tuple[tuple[RwRule, PathPosition, Path], ...]:
    """``(rule, position, result)`` for every one-step contraction of ``p``,
    in the order of :func:`rw_redexes`."""
    out = [(rule, (), RHS[rule](p)) for rule in _rules_at(p)]
    kind = type(p)
    if kind is Sigma:
        out += [(r, (INNER,) + at, Sigma(q)) for r, at, q in _successors(p.inner)]
    elif kind is Tau:
        first, second = p.first, p.second
        out += [(r, (FIRST,) + at, Tau(q, second)) for r, at, q in _successors(first)]
        out += [(r, (SECOND,) + at, Tau(first, q)) for r, at, q in _successors(second)]
    return tuple(out)


def clear_caches() -> None:
    """Drop memoized redex tables; needed after swapping entries of ``RHS``."""
    _redexes.cache_clear()
    _successors.cache_clear()


def rw_redexes(p: Path) -> list[tuple[RwRule, PathPosition]]:
    """Every (rule, position) whose left-hand side matches, outermost-leftmost;
    rules at the same node come in declaration order."""
    return list(_redexes(p))


def rw_contract(p: Path, rule: RwRule, at: PathPosition = ()) -> Path:
    sub = subpath(p, at)
    if not _matches(rule, sub):
        raise RuleMismatch(f"{rule} does not match at {format_path_position(at)}")
    return replace_subpath(p, at, RHS[rule](sub))


@dataclass(frozen=True)
class RwStep:
    """One rw-contraction, or a reversed one.

    Forward: contracting ``rule`` at ``at`` in ``before`` gives ``after``.
    Reversed: contracting it in ``after`` gives ``before``.
    """

    before: Path
    after: Path
    rule: RwRule
    at: PathPosition
    forward: bool = True

    @property
    def direction(self) -> str:
        return "forward" if self.forward else "reversed"

    def inverse(self) -> RwStep:
        return RwStep(self.after, self.before, self.rule, self.at, not self.forward)

    def is_valid(self) -> bool:
        src, dst = (self.before, self.after) if self.forward else (self.after, self.before)
        try:
            return rw_contract(src, self.rule, self.at) == dst
        except (RuleMismatch, InvalidPosition):
            return False


def rw_step(p: Path, rule: RwRule, at: PathPosition = ()) -> RwStep:
    return RwStep(p, rw_contract(p, rule, at), rule, tuple(at), True)


def rw_expand(p: Path, rule: RwRule, at: PathPosition, redex: Path) -> RwStep:
    """The reversed step from ``p`` to ``p[at := redex]``, where ``redex``
    contracts under ``rule`` to the subpath of ``p`` at ``at``."""
    before = replace_subpath(p, at, redex)
    step = RwStep(p, before, rule, tuple(at), False)
    if not step.is_valid():
        raise RuleMismatch(f"{rule} does not contract the given redex to the subpath at "
                           f"{format_path_position(at)}")
    return step


@dataclass(frozen=True)
class RwSequence:
    """A finite, possibly empty, chain of (possibly reversed) rw-steps."""

    start: Path
    steps: tuple[RwStep, ...] = ()
    name: str | None = None

    @property
    def end(self) -> Path:
        return self.steps[-1].after if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def then(self, other: RwSequence) -> RwSequence:
        if other.start != self.end:
            raise ValueError("sequences do not chain")
        return RwSequence(self.start, self.steps + other.steps)

    def inverse(self) -> RwSequence:
        return RwSequence(self.end, tuple(s.inverse() for s in reversed(self.steps)))

    def paths(self) -> list[Path]:
        return [self.start] + [s.after for s in self.steps]


def replay(seq: RwSequence) -> Path:
    """Re-execute every step through :func:`rw_contract`; returns the end path.

    Raises ``ValueError`` at the first step that does not chain, does not
    re-derive, or changes the endpoints.
    """
    cur = seq.start
    for i, step in enumerate(seq.steps):
        if step.before != cur:
            raise ValueError(f"step {i} does not start where step {i - 1} ended")
        if not step.is_valid():
            raise ValueError(f"step {i} ({step.rule} @ {format_path_position(step.at)}) "
                             "does not re-derive")
        if (step.before.src, step.before.dst) != (step.after.src, step.after.dst):
            raise ValueError(f"step {i} changes endpoints")
        cur = step.after
    return cur


# -------------------------------------------------------------- normalization

STRATEGIES = ("leftmost-outermost", "leftmost-innermost", "random")


def _innermost(p: Path) -> tuple[RwRule, PathPosition] | None:
    for at, sub in _walk_post(p):
        rules = _rules_at(sub)
        if rules:
            return rules[0], at
    return None


def budget(p: Path) -> int:
    return 10 * size(p) ** 2


def rw_normalize(
    p: Path,
    strategy: str = "leftmost-outermost",
    seed: int | None = None,
) -> tuple[Path, RwSequence]:
    """Rewrite ``p`` until no rule applies; returns the normal form and the trace."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed)
    limit = budget(p)
    cur = p
    steps = []
    while True:
        if strategy == "leftmost-innermost":
            choice = _innermost(cur)
        else:
            redexes = rw_redexes(cur)
            if not redexes:
                choice = None
            elif strategy == "random":
                choice = rng.choice(redexes)
            else:
                choice = redexes[0]
        if choice is None:
            return cur, RwSequence(p, tuple(steps))
        if len(steps) >= limit:
            raise BudgetExceeded(f"no normal form within {limit} steps from {print_path(p)}")
        step = rw_step(cur, *choice)
        steps.append(step)
        cur = step.after


def is_normal(p: Path) -> bool:
    return not rw_redexes(p)


# ------------------------------------------------------------- rw-equality


def _bfs_parents(p: Path, cap: int) -> dict[Path, RwStep | None]:
    parent: dict[Path, RwStep | None] = {p: None}
    queue = deque([p])
    while queue:
        cur = queue.popleft()
        for rule, at, after in _successors(cur):
            step = RwStep(cur, after, rule, at, True)
            if step.after not in parent:
                if len(parent) >= cap:
                    raise CapExceeded(f"more than {cap} reducts")
                parent[step.after] = step
                queue.append(step.after)
    return parent


def _trace_to(parent: dict[Path, RwStep | None], node: Path) -> list[RwStep]:
    steps = []
    while parent[node] is not None:
        steps.append(parent[node])
        node = parent[node].before
    return steps[::-1]


def rw_equal(p: Path, q: Path, search_cap: int = 2000) -> RwSequence | None:
    """A certificate that ``p`` and ``q`` are rw-equal, or ``None``.

    First compares leftmost-outermost normal forms; the certificate is then
    ``trace(p)`` followed by ``trace(q)`` reversed.  If the normal forms
    differ (the rule set is not confluent), falls back to looking for any
    common reduct among at most ``search_cap`` reducts of each side.
    """
    if (p.src, p.dst) != (q.src, q.dst):
        return None
    np_, tp = rw_normalize(p)
    nq, tq = rw_normalize(q)
    if np_ == nq:
        return RwSequence(p, tp.steps + tq.inverse().steps)
    if search_cap <= 0:
        return None
    try:
        left = _bfs_parents(p, search_cap)
        right = _bfs_parents(q, search_cap)
    except CapExceeded:
        return None
    common = [n for n in left if n in right]
    if not common:
        return None
    meet = min(common, key=lambda n: len(_trace_to(left, n)) + len(_trace_to(right, n)))
    down = _trace_to(left, meet)
    up = [s.inverse() for s in reversed(_trace_to(right, meet))]
    return RwSequence(p, tuple(down + up))


# ------------------------------------------------------------- rewrite graph


@dataclass
class RewriteGraph:
    """Reachability graph under forward rw-contraction.

    ``edges`` holds ``(source index, rule, position, target index)``.
    """

    nodes: list[Path]
    edges: list[tuple[int, RwRule, PathPosition, int]]

    @property
    def root(self) -> Path:
        return self.nodes[0]

    @property
    def sinks(self) -> list[Path]:
        has_out = {e[0] for e in self.edges}
        return [n for i, n in enumerate(self.nodes) if i not in has_out]

    def steps(self) -> list[RwStep]:
        return [RwStep(self.nodes[i], self.nodes[j], rule, at, True)
                for i, rule, at, j in self.edges]

    def to_dot(self) -> str:
        lines = ["digraph rw {"]
        for i, n in enumerate(self.nodes):
            label = print_path(n, "paper").replace('"', '\\"')
            lines.append(f'  n{i} [label="{label}"];')
        for i, rule, at, j in self.edges:
            lines.append(f'  n{i} -> n{j} [label="{rule}@{format_path_position(at)}"];')
        lines.append("}")
        return "\n".join(lines)


_ATOM, _RHO, _SIGMA, _TAU = range(4)


class _Interner:
    """Hash-consed paths as small integers, for fast graph exploration.

    Node ``i`` is ``(kind, a, b)``: an :class:`Atomic` or a term in ``a`` for
    atoms and rho, child ids for sigma and tau.  Equal paths get equal ids,
    so the tr/tsr side condition is an integer comparison.
    """

    def __init__(self) -> None:
        self.ids: dict[tuple, int] = {}
        self.node: list[tuple] = []
        self.src: list = []
        self.dst: list = []
        self.paths: dict[int, Path] = {}
        self.succ: dict[int, list[tuple[RwRule, PathPosition, int]]] = {}
        self.stock = all(RHS[r] is f for r, f in _STOCK_RHS.items())

    def _make(self, key: tuple, src, dst) -> int:
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.node)
            self.node.append(key)
            self.src.append(src)
            self.dst.append(dst)
        return i

    def rho(self, term) -> int:
        return self._make((_RHO, term, None), term, term)

    def sigma(self, c: int) -> int:
        return self._make((_SIGMA, c, None), self.dst[c], self.src[c])

    def tau(self, a: int, b: int) -> int:
        return self._make((_TAU, a, b), self.src[a], self.dst[b])

    def of_path(self, p: Path) -> int:
        kind = type(p)
        if kind is Tau:
            return self.tau(self.of_path(p.first), self.of_path(p.second))
        if kind is Sigma:
            return self.sigma(self.of_path(p.inner))
        if kind is Rho:
            return self.rho(p.at)
        return self._make((_ATOM, p, None), p.src, p.dst)

    def to_path(self, i: int) -> Path:
        p = self.paths.get(i)
        if p is None:
            kind, a, b = self.node[i]
            if kind == _TAU:
                p = Tau(self.to_path(a), self.to_path(b))
            elif kind == _SIGMA:
                p = Sigma(self.to_path(a))
            elif kind == _RHO:
                p = Rho(a)
            else:
                p = a
            self.paths[i] = p
        return p

    def _root(self, i: int) -> list[tuple[RwRule, int]]:
        kind, a, b = self.node[i]
        out = []
        if kind == _SIGMA:
            ka, x, _ = self.node[a]
            if ka == _RHO:
                out.append((RwRule.SR, a))
            elif ka == _SIGMA:
                out.append((RwRule.SS, x))
        elif kind == _TAU:
            ka, a1, a2 = self.node[a]
            kb, b1, _ = self.node[b]
            if kb == _SIGMA and b1 == a:
                out.append((RwRule.TR, self.rho(self.src[a])))
            if ka == _SIGMA and a1 == b:
                out.append((RwRule.TSR, self.rho(self.dst[b])))
            if kb == _RHO:
                out.append((RwRule.TRR, a))
            if ka == _RHO:
                out.append((RwRule.TLR, b))
            if ka == _TAU:
                out.append((RwRule.TT, self.tau(a1, self.tau(a2, b))))
        if not self.stock:
            p = self.to_path(i)
            out = [(rule, self.of_path(RHS[rule](p))) for rule, _ in out]
        return out

    def successors(self, i: int) -> list[tuple[RwRule, PathPosition, int]]:
        found = self.succ.get(i)
        if found is not None:
            return found
        out = [(rule, (), j) for rule, j in self._root(i)]
        kind, a, b = self.node[i]
        if kind == _SIGMA:
            sigma = self.sigma
            out += [(r, (INNER,) + at, sigma(x)) for r, at, x in self.successors(a)]
        elif kind == _TAU:
            tau = self.tau
            out += [(r, (FIRST,) + at, tau(x, b)) for r, at, x in self.successors(a)]
            out += [(r, (SECOND,) + at, tau(a, x)) for r, at, x in self.successors(b)]
        self.succ[i] = out
        return out


_STOCK_RHS = dict(RHS)


def rewrite_graph(p: Path, cap: int = 1000) -> RewriteGraph:
    """Every path reachable from ``p`` by forward rw-contraction.

    Raises :class:`CapExceeded` once more than ``cap`` nodes turn up.
    """
    table = _Interner()
    root = table.of_path(p)
    index = {root: 0}
    order = [root]
    edges = []
    for i in itertools.count():
        if i == len(order):
            break
        for rule, at, nxt in table.successors(order[i]):
            j = index.get(nxt)
            if j is None:
                if len(order) >= cap:
                    raise CapExceeded(f"rewrite graph exceeds {cap} nodes")
                j = index[nxt] = len(order)
                order.append(nxt)
            edges.append((i, rule, at, j))
    nodes = [table.to_path(x) for x in order]
    nodes[0] = p
    return RewriteGraph(nodes, edges)


# ------------------------------------------------------------------ tracing


def path_digest(p: Path) -> str:
    return hashlib.sha256(canonical_text(p).encode("utf-8")).hexdigest()[:12]


def format_step(step: RwStep) -> str:
    rule = str(step.rule) if step.forward else f"{step.rule}^-1"
    return (f"{rule} @ {format_path_position(step.at)} : "
            f"{path_digest(step.before)} -> {path_digest(step.after)}")


def format_trace(seq: RwSequence) -> str:
    return "\n".join(format_step(s) for s in seq.steps)
