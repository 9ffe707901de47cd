"""Computational paths: proof terms for beta-eta equalities between lambda terms.

A path is an atomic contraction, ``rho`` (reflexivity), ``sigma``
(symmetry) or ``tau`` (transitivity).  Every node caches its endpoints.

Composition convention: for ``p: a -> b`` and ``q: b -> c``,
``compose(p, q) = Tau(p, q)``; in categorical notation ``q . p`` is
``Tau(p, q)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .terms import (
    Conversion,
    InvalidPosition,
    NotARedex,
    Position,
    Scanner,
    StepKind,
    Term,
    contract,
    find_redexes,
    format_position,
    print_term,
    read_term,
    subterm,
)


class EndpointMismatch(ValueError):
    pass


class BrokenChain(ValueError):
    pass


@dataclass(frozen=True)
class Atomic:
    source: Term
    pos: Position
    kind: StepKind
    src: Term = field(init=False, repr=False, compare=False)
    dst: Term | None = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "src", self.source)
        try:
            dst = contract(self.source, self.pos, self.kind)
        except (NotARedex, InvalidPosition):
            dst = None  # ill-formed; reported by well_formed
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "_hash", hash(("atomic", self.source, self.pos, self.kind)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class Rho:
    at: Term
    src: Term = field(init=False, repr=False, compare=False)
    dst: Term = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", self.at)
        object.__setattr__(self, "dst", self.at)
        object.__setattr__(self, "_hash", hash(("rho", self.at)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class Sigma:
    inner: Path
    src: Term = field(init=False, repr=False, compare=False)
    dst: Term = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", self.inner.dst)
        object.__setattr__(self, "dst", self.inner.src)
        object.__setattr__(self, "_hash", hash(("sigma", self.inner)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class Tau:
    first: Path
    second: Path
    src: Term = field(init=False, repr=False, compare=False)
    dst: Term = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", self.first.src)
        object.__setattr__(self, "dst", self.second.dst)
        object.__setattr__(self, "_hash", hash(("tau", self.first, self.second)))

    def __hash__(self) -> int:
        return self._hash


Path = Union[Atomic, Rho, Sigma, Tau]


def endpoints(p: Path) -> tuple[Term, Term]:
    return p.src, p.dst


def recompute_endpoints(p: Path) -> tuple[Term, Term | None]:
    """Endpoints derived from scratch, ignoring every cached value."""
    match p:
        case Atomic(t, pos, kind):
            try:
                return t, contract(t, pos, kind)
            except (NotARedex, InvalidPosition):
                return t, None
        case Rho(a):
            return a, a
        case Sigma(inner):
            s, d = recompute_endpoints(inner)
            return d, s
        case Tau(first, second):
            return recompute_endpoints(first)[0], recompute_endpoints(second)[1]
    raise TypeError(p)


def well_formed(p: Path) -> bool:
    """Every atom is a genuine contraction, every ``tau`` meets in the
    middle, and the cached endpoints match a fresh computation."""
    if (p.src, p.dst) != recompute_endpoints(p):
        return False
    match p:
        case Atomic():
            return p.dst is not None
        case Rho():
            return True
        case Sigma(inner):
            return well_formed(inner)
        case Tau(first, second):
            return first.dst == second.src and well_formed(first) and well_formed(second)
    return False


def mk_atomic(t: Term, pos: Position, kind: StepKind) -> Atomic:
    contract(t, pos, kind)  # raises NotARedex / InvalidPosition
    return Atomic(t, tuple(pos), kind)


def mk_rho(a: Term) -> Rho:
    return Rho(a)


def mk_sigma(p: Path) -> Sigma:
    return Sigma(p)


def mk_tau(p: Path, q: Path) -> Tau:
    if p.dst != q.src:
        raise EndpointMismatch(
            f"cannot compose: {print_term(p.dst)} is not {print_term(q.src)}"
        )
    return Tau(p, q)


compose = mk_tau


def size(p: Path) -> int:
    match p:
        case Sigma(inner):
            return 1 + size(inner)
        case Tau(first, second):
            return 1 + size(first) + size(second)
    return 1


def depth(p: Path) -> int:
    match p:
        case Sigma(inner):
            return 1 + depth(inner)
        case Tau(first, second):
            return 1 + max(depth(first), depth(second))
    return 1


def path_of_conversion(conv: Conversion) -> Path:
    """Left-nested ``tau`` of the conversion's steps; reversed steps become
    ``sigma`` of the contraction.  The empty conversion is ``rho``."""
    cur = conv.source
    result: Path | None = None
    for step in conv.steps:
        atom = Atomic(step.term, step.pos, step.kind)
        if atom.dst is None:
            raise BrokenChain(f"not a {step.kind}-redex at {format_position(step.pos) or 'root'}")
        piece = atom if step.forward else Sigma(atom)
        if piece.src != cur:
            raise BrokenChain(f"step does not start at {print_term(cur)}")
        result = piece if result is None else Tau(result, piece)
        cur = piece.dst
    return Rho(conv.source) if result is None else result


# ---------------------------------------------------------------- printing

_GREEK = {"rho": "ρ", "sigma": "σ", "tau": "τ", "beta": "β", "eta": "η",
          "nu": "ν", "mu": "μ", "xi": "ξ"}
_WRAPPER = {"fn": "nu", "arg": "mu", "body": "xi"}


def print_path(p: Path, style: str = "compact", ascii: bool = False) -> str:
    """Render a path.

    ``compact``: ``tau(beta@fn.body(<term>),rho(<term>))`` -- the machine
    syntax read back by :func:`parse_path`.

    ``paper``: atoms as ``β(M,N)`` with both endpoints, as in the textbook
    notation for a chain of rewrites.  Also readable by :func:`parse_path`;
    when several positions yield the same contractum the first one in
    leftmost-outermost order is chosen.

    ``congruence``: like ``paper`` but every atom below the root is wrapped
    in the congruence rules it passes through (``ν`` for the function side
    of an application, ``μ`` for the argument, ``ξ`` under a binder) and
    shows only the redex and contractum.  Display only.
    """
    if style == "compact":
        return _compact(p)
    if style not in ("paper", "congruence"):
        raise ValueError(f"unknown style {style!r}")
    name = (lambda s: s) if ascii else _GREEK.__getitem__
    lam = "\\" if ascii else "λ"

    def go(p: Path) -> str:
        match p:
            case Rho(a):
                return f"{name('rho')}({print_term(a, lam)})"
            case Sigma(inner):
                return f"{name('sigma')}({go(inner)})"
            case Tau(first, second):
                return f"{name('tau')}({go(first)},{go(second)})"
            case Atomic(t, pos, kind):
                if style == "paper":
                    return f"{name(kind.value)}({print_term(t, lam)},{print_term(p.dst, lam)})"
                redex = subterm(t, pos)
                inner = contract(redex, (), kind)
                s = f"{name(kind.value)}({print_term(redex, lam)},{print_term(inner, lam)})"
                for tag in reversed(pos):
                    s = f"{name(_WRAPPER[tag])}({s})"
                return s
        raise TypeError(p)

    return go(p)


def _compact(p: Path, canonical: bool = False) -> str:
    match p:
        case Rho(a):
            return f"rho({print_term(a, canonical=canonical)})"
        case Sigma(inner):
            return f"sigma({_compact(inner, canonical)})"
        case Tau(first, second):
            return f"tau({_compact(first, canonical)},{_compact(second, canonical)})"
        case Atomic(t, pos, kind):
            return f"{kind.value}@{format_position(pos)}({print_term(t, canonical=canonical)})"
    raise TypeError(p)


def canonical_text(p: Path) -> str:
    """Compact form with binder names fixed, so equal paths give equal text."""
    return _compact(p, canonical=True)


def skeleton(p: Path, ascii: bool = False) -> str:
    """Constructor shape with atom contents elided, e.g. ``τ(η(…),β(…))``."""
    name = (lambda s: s) if ascii else _GREEK.__getitem__
    dots = "..." if ascii else "…"
    match p:
        case Rho():
            return f"{name('rho')}({dots})"
        case Sigma(inner):
            return f"{name('sigma')}({skeleton(inner, ascii)})"
        case Tau(first, second):
            return f"{name('tau')}({skeleton(first, ascii)},{skeleton(second, ascii)})"
        case Atomic(_, _, kind):
            return f"{name(kind.value)}({dots})"
    raise TypeError(p)


# ----------------------------------------------------------------- reading

_KEYWORDS = {
    "rho": "rho", "ρ": "rho", "sigma": "sigma", "σ": "sigma", "tau": "tau",
    "τ": "tau", "beta": "beta", "β": "beta", "eta": "eta", "η": "eta",
}


def _keyword(sc: Scanner) -> str:
    c = sc.peek()
    if c in _KEYWORDS:
        sc.pos += 1
        return _KEYWORDS[c]
    start = sc.pos
    word = sc.ident() if sc.at_ident() else ""
    if word not in _KEYWORDS:
        raise sc.error("expected rho, sigma, tau, beta or eta", start)
    return _KEYWORDS[word]


def _read_position(sc: Scanner) -> Position:
    tags = []
    if sc.peek() == "(":
        return ()
    while True:
        start = sc.pos
        tag = sc.ident()
        if tag not in ("body", "fn", "arg"):
            raise sc.error(f"unknown position tag {tag!r}", start)
        tags.append(tag)
        if sc.peek() != ".":
            return tuple(tags)
        sc.pos += 1


def read_path(sc: Scanner) -> Path:
    start = sc.pos
    kw = _keyword(sc)
    if kw in ("beta", "eta"):
        kind = StepKind(kw)
        if sc.peek() == "@":
            sc.pos += 1
            pos = _read_position(sc)
            sc.expect("(")
            t = read_term(sc)
            sc.expect(")")
            atom = Atomic(t, pos, kind)
            if atom.dst is None:
                raise sc.error(f"no {kw}-redex at {format_position(pos) or 'root'}", start)
            return atom
        sc.expect("(")
        t = read_term(sc)
        sc.expect(",")
        u = read_term(sc)
        sc.expect(")")
        for pos, k in find_redexes(t):
            if k is kind and contract(t, pos, k) == u:
                return Atomic(t, pos, kind)
        raise sc.error(f"no single {kw}-contraction between the given terms", start)
    sc.expect("(")
    if kw == "rho":
        result: Path = Rho(read_term(sc))
    elif kw == "sigma":
        result = Sigma(read_path(sc))
    else:
        first = read_path(sc)
        sc.expect(",")
        result = Tau(first, read_path(sc))
    sc.expect(")")
    return result


def parse_path(text: str) -> Path:
    """Read a path in compact or paper style.

    The result is not checked for well-formedness; a ``tau`` whose arms do
    not meet is returned as is, so callers can report it.
    """
    sc = Scanner(text)
    p = read_path(sc)
    if not sc.at_end():
        raise sc.error(f"unexpected {sc.peek()!r}")
    return p
