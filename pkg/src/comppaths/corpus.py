"""Seeded random generation of lambda terms, paths and 2-cells.

Base terms are built by expanding a random normal term with identity,
discarding and eta redexes, so every base term normalizes.  Its reduction
sequence gives a chain of objects ``t0 -> t1 -> ... -> tn`` and paths are
random rho/sigma/tau trees over that chain.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .paths import Atomic, Path, Rho, Sigma, Tau
from .rewrite import (
    RwRule,
    RwSequence,
    RwStep,
    _walk,
    replace_subpath,
    rw_redexes,
    rw_step,
)
from .rewrite2 import TwoCell
from .terms import (
    Abs,
    App,
    Free,
    Term,
    Var,
    _walk as _term_walk,
    next_redex,
    reduction_sequence,
    replace_at,
    shift,
    subterm,
)

FREE_NAMES = ("a", "b", "c", "v", "z")
BINDERS = ("x", "y", "w", "u")


# ------------------------------------------------------------------ terms


def _atom(rng: random.Random, env: int) -> Term:
    if env and rng.random() < 0.6:
        return Var(rng.randrange(env), "x")
    return Free(rng.choice(FREE_NAMES))


def random_normal_term(rng: random.Random, size: int, env: int = 0) -> Term:
    """A random beta-normal term with about ``size`` nodes."""
    if size <= 1:
        return _atom(rng, env)
    if rng.random() < 0.35:
        return Abs(rng.choice(BINDERS), random_normal_term(rng, size - 1, env + 1))
    return _neutral(rng, size, env)


def _neutral(rng: random.Random, size: int, env: int) -> Term:
    if size <= 2:
        return _atom(rng, env)
    left = rng.randint(1, size - 2)
    return App(_neutral(rng, left, env), random_normal_term(rng, size - 1 - left, env))


def expand(rng: random.Random, t: Term) -> Term:
    """Plant one new redex somewhere in ``t``.  The redex is an identity
    application, a discarding application, or an eta-expansion."""
    positions = [pos for pos, _ in _term_walk(t)]
    pos = rng.choice(positions)
    u = subterm(t, pos)
    kind = rng.random()
    if kind < 0.4:
        new = App(Abs(rng.choice(BINDERS), Var(0, "x")), u)
    elif kind < 0.7:
        junk = Free(rng.choice(FREE_NAMES))
        new = App(Abs(rng.choice(BINDERS), shift(u, 1)), junk)
    else:
        new = Abs(rng.choice(BINDERS), App(shift(u, 1), Var(0, "x")))
    return replace_at(t, pos, new)


def random_chain(rng: random.Random, max_steps: int = 4) -> list[Term]:
    """Objects ``t0 .. tn`` with one contraction between neighbours."""
    while True:
        t = random_normal_term(rng, rng.randint(1, 4))
        for _ in range(rng.randint(1, max_steps)):
            t = expand(rng, t)
        seq = reduction_sequence(t, max_steps * 4)
        if next_redex(seq[-1][0]) is None and len(seq) >= 2:
            return [entry[0] for entry in seq]


@dataclass
class Chain:
    terms: list[Term]
    atoms: list[Atomic]

    @classmethod
    def of(cls, terms: list[Term]) -> Chain:
        atoms = []
        for t, u in zip(terms, terms[1:]):
            seq = reduction_sequence(t, 1)
            atoms.append(Atomic(t, seq[0][1], seq[0][2]))
            assert atoms[-1].dst == u
        return cls(terms, atoms)

    def __len__(self) -> int:
        return len(self.terms)


def random_chain_obj(rng: random.Random, max_steps: int = 4) -> Chain:
    return Chain.of(random_chain(rng, max_steps))


# ------------------------------------------------------------------ paths


@lru_cache(maxsize=None)
def _need(i: int, j: int) -> int:
    """Least constructor depth of a path from chain point i to j."""
    if i == j:
        return 1
    if j == i + 1:
        return 1
    if j == i - 1:
        return 2
    mid = (i + j) // 2
    return 1 + max(_need(i, mid), _need(mid, j))


def _direct(chain: Chain, i: int, j: int) -> Path:
    if i == j:
        return Rho(chain.terms[i])
    if j == i + 1:
        return chain.atoms[i]
    if j == i - 1:
        return Sigma(chain.atoms[j])
    mid = (i + j) // 2
    return Tau(_direct(chain, i, mid), _direct(chain, mid, j))


def random_path(
    rng: random.Random,
    chain: Chain,
    i: int,
    j: int,
    depth_cap: int = 8,
    leaf: float = 0.45,
    sym: float = 0.15,
) -> Path:
    """Random well-formed path from ``chain.terms[i]`` to ``chain.terms[j]``
    of constructor depth at most ``depth_cap``."""
    n = len(chain)
    if _need(i, j) > depth_cap:
        raise ValueError("depth cap too small for this chain")

    def go(i: int, j: int, budget: int) -> Path:
        r = rng.random()
        if budget <= 1 or r < leaf:
            return _direct(chain, i, j)
        if r < leaf + sym and _need(j, i) <= budget - 1:
            return Sigma(go(j, i, budget - 1))
        splits = [k for k in range(n) if _need(i, k) <= budget - 1 and _need(k, j) <= budget - 1]
        if not splits:
            return _direct(chain, i, j)
        k = rng.choice(splits)
        return Tau(go(i, k, budget - 1), go(k, j, budget - 1))

    return go(i, j, depth_cap)


def gen_corpus(seed: int, size: int, depth_cap: int = 8) -> Iterator[Path]:
    """``size`` random well-formed paths, reproducible from ``seed``."""
    if size <= 0 or depth_cap <= 0:
        raise ValueError("size and depth cap must be positive")
    rng = random.Random(seed)
    for _ in range(size):
        chain = random_chain_obj(rng)
        n = len(chain)
        i, j = rng.randrange(n), rng.randrange(n)
        while _need(i, j) > depth_cap:
            i, j = rng.randrange(n), rng.randrange(n)
        yield random_path(rng, chain, i, j, depth_cap)


def composable_paths(rng: random.Random, count: int, depth_cap: int = 4) -> list[Path]:
    """``count`` paths forming a chain ``a -> b -> c -> ...``."""
    chain = random_chain_obj(rng)
    points = [rng.randrange(len(chain))]
    while len(points) <= count:
        nxt = rng.randrange(len(chain))
        if _need(points[-1], nxt) <= depth_cap:
            points.append(nxt)
    return [random_path(rng, chain, x, y, depth_cap) for x, y in zip(points, points[1:])]


# ------------------------------------------------------------------ 2-cells


def rw_expansions(p: Path) -> list[RwStep]:
    """Reversed rw-steps out of ``p`` that need no invented subpath."""
    out = []
    for at, sub in _walk(p):
        redexes: list[tuple[RwRule, Path]] = [
            (RwRule.SS, Sigma(Sigma(sub))),
            (RwRule.TRR, Tau(sub, Rho(sub.dst))),
            (RwRule.TLR, Tau(Rho(sub.src), sub)),
        ]
        if isinstance(sub, Rho):
            redexes.append((RwRule.SR, Sigma(sub)))
            redexes.append((RwRule.TR, Tau(sub, Sigma(sub))))
            redexes.append((RwRule.TSR, Tau(Sigma(sub), sub)))
        if isinstance(sub, Tau) and isinstance(sub.second, Tau):
            redexes.append((RwRule.TT, Tau(Tau(sub.first, sub.second.first), sub.second.second)))
        for rule, redex in redexes:
            out.append(RwStep(p, replace_subpath(p, at, redex), rule, at, False))
    return out


def random_walk(rng: random.Random, start: Path, length: int, grow: float = 0.3) -> RwSequence:
    """Random rw-sequence of ``length`` steps from ``start``; each step is
    a contraction, or with probability ``grow`` (or when no rule applies)
    a reversed contraction."""
    cur = start
    steps = []
    for _ in range(length):
        redexes = rw_redexes(cur)
        if redexes and rng.random() >= grow:
            step = rw_step(cur, *rng.choice(redexes))
        else:
            step = rng.choice(rw_expansions(cur))
        steps.append(step)
        cur = step.after
    return RwSequence(start, tuple(steps))


def random_cell(rng: random.Random, start: Path, max_len: int = 4) -> TwoCell:
    return TwoCell(random_walk(rng, start, rng.randint(0, max_len)))


def random_cells(rng: random.Random, start: Path, count: int, max_len: int = 4) -> list[TwoCell]:
    """``count`` vertically composable cells starting at ``start``."""
    cells = []
    cur = start
    for _ in range(count):
        c = random_cell(rng, cur, max_len)
        cells.append(c)
        cur = c.target
    return cells


# -------------------------------------------------------------- law instances


def groupoid_instances(seed: int, count: int, depth_cap: int = 4) -> Iterator[tuple[Path, Path, Path]]:
    rng = random.Random(seed)
    for _ in range(count):
        p, q, r = composable_paths(rng, 3, depth_cap)
        yield p, q, r


def vertical_instances(seed: int, count: int, depth_cap: int = 4) -> Iterator[tuple[TwoCell, ...]]:
    rng = random.Random(seed)
    for _ in range(count):
        (start,) = composable_paths(rng, 1, depth_cap)
        yield tuple(random_cells(rng, start, 3))


def interchange_instances(seed: int, count: int, depth_cap: int = 4) -> Iterator[tuple[TwoCell, ...]]:
    """``(alpha, chi, theta, phi)`` with ``alpha; chi`` over the left path
    and ``theta; phi`` over the right one."""
    rng = random.Random(seed)
    for _ in range(count):
        left, right = composable_paths(rng, 2, depth_cap)
        alpha, chi = random_cells(rng, left, 2)
        theta, phi = random_cells(rng, right, 2)
        yield alpha, chi, theta, phi


def chain_instances(seed: int, count: int, length: int, depth_cap: int = 3) -> Iterator[tuple[Path, ...]]:
    rng = random.Random(seed)
    for _ in range(count):
        yield tuple(composable_paths(rng, length, depth_cap))


def cell_instances(seed: int, count: int, depth_cap: int = 4) -> Iterator[TwoCell]:
    rng = random.Random(seed)
    for _ in range(count):
        (start,) = composable_paths(rng, 1, depth_cap)
        yield random_cell(rng, start, 6)
