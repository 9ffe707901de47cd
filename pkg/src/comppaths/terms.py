"""Untyped lambda terms with de Bruijn indices.

Bound variables are ``Var`` nodes carrying a binder index; globally free
variables are ``Free`` nodes compared by name.  Binder and variable names
are kept for printing only, so structural equality of two terms *is*
alpha-equivalence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

__all__ = [
    "Var", "Free", "Abs", "App", "Term", "StepKind", "Position",
    "BODY", "FN", "ARG", "ParseError", "UnboundIdentifier",
    "InvalidPosition", "NotARedex", "parse_term", "print_term", "alpha_eq",
    "free_vars", "shift", "substitute", "subterm", "replace_at", "contract",
    "is_redex", "find_redexes", "format_position", "parse_position", "size",
    "ConversionStep", "Conversion", "next_redex", "reduction_sequence",
    "conversion_search", "Scanner", "read_term",
]


@dataclass(frozen=True)
class Var:
    index: int
    name: str = field(default="x", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("var", self.index)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class Free:
    name: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("free", self.name)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class Abs:
    name: str = field(compare=False)
    body: Term

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("abs", self.body)))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True)
class App:
    fn: Term
    arg: Term

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("app", self.fn, self.arg)))

    def __hash__(self) -> int:
        return self._hash


Term = Union[Var, Free, Abs, App]


class StepKind(enum.Enum):
    BETA = "beta"
    ETA = "eta"

    def __str__(self) -> str:
        return self.value


# Position tags: descend into an abstraction body, an application's
# function part, or its argument.
BODY, FN, ARG = "body", "fn", "arg"
_TAGS = (BODY, FN, ARG)

Position = tuple  # tuple[str, ...]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnboundIdentifier(ParseError):
    pass


class InvalidPosition(LookupError):
    pass


class NotARedex(ValueError):
    def __init__(self, kind: StepKind, pos: Position = ()):
        super().__init__(f"no {kind.value}-redex at {format_position(pos) or 'root'}")
        self.kind = kind
        self.pos = pos


# ---------------------------------------------------------------- parsing


class Scanner:
    """Character cursor shared by the term and path readers."""

    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def offset(self, pos: int | None = None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, self.offset(pos))

    def expect(self, token: str) -> None:
        if self.peek() != token:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {token!r}, found {found}")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        text = self.text
        if start >= len(text) or not (text[start].isascii() and text[start].isalpha()):
            raise self.error("expected identifier")
        end = start + 1
        while end < len(text) and text[end].isascii() and text[end].isalnum():
            end += 1
        self.pos = end
        return text[start:end]

    def at_ident(self) -> bool:
        c = self.peek()
        return c != "" and c.isascii() and c.isalpha()


_LAMBDAS = ("\\", "λ")


def read_term(
    sc: Scanner,
    free: Iterable[str] | None = None,
    strict: bool = False,
) -> Term:
    """Parse one term starting at the scanner's cursor, leaving the cursor
    just after it.  Stops at the first character the grammar cannot use."""
    allowed = frozenset(free) if free is not None else frozenset()

    def term(env: list[str]) -> Term:
        if sc.peek() in _LAMBDAS:
            sc.pos += 1
            name = sc.ident()
            sc.expect(".")
            return Abs(name, term(env + [name]))
        result = atom(env)
        while sc.at_ident() or sc.peek() == "(" or sc.peek() in _LAMBDAS:
            if sc.peek() in _LAMBDAS:
                # trailing abstraction extends to the right: `f \x.x`
                result = App(result, term(env))
                break
            result = App(result, atom(env))
        return result

    def atom(env: list[str]) -> Term:
        if sc.peek() == "(":
            sc.pos += 1
            inner = term(env)
            sc.expect(")")
            return inner
        start = sc.pos
        name = sc.ident()
        for depth, bound in enumerate(reversed(env)):
            if bound == name:
                return Var(depth, name)
        if strict and name not in allowed:
            raise UnboundIdentifier(f"unbound identifier {name!r}", sc.offset(start))
        return Free(name)

    if sc.at_end():
        raise sc.error("expected term, found end of input")
    return term([])


def parse_term(text: str, free: Iterable[str] | None = None, strict: bool = False) -> Term:
    """Parse surface syntax ``\\x.body`` / application by juxtaposition.

    With ``strict`` set, every free identifier must appear in ``free``.
    """
    sc = Scanner(text)
    t = read_term(sc, free, strict)
    if not sc.at_end():
        raise sc.error(f"unexpected {sc.peek()!r}")
    return t


# --------------------------------------------------------------- printing


def free_names(t: Term) -> set[str]:
    match t:
        case Free(name):
            return {name}
        case Var():
            return set()
        case Abs(_, body):
            return free_names(body)
        case App(f, a):
            return free_names(f) | free_names(a)
    raise TypeError(t)


def _fresh(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    stem = base.rstrip("0123456789") or "x"
    n = 1
    while f"{stem}{n}" in taken:
        n += 1
    return f"{stem}{n}"


def print_term(t: Term, lam: str = "\\", canonical: bool = False) -> str:
    """Render ``t`` so that :func:`parse_term` gives back an alpha-equal term.

    Binders are renamed when their display name would shadow an enclosing
    binder or capture a free variable.  With ``canonical`` set every binder
    starts from ``x``, so alpha-equal terms print identically.  Dangling indices (subterms cut out
    of a larger term) print as ``_<n>``, which does not re-parse.
    """
    avoid = free_names(t)

    def go(t: Term, env: list[str], ctx: str) -> str:
        match t:
            case Free(name):
                return name
            case Var(i):
                return env[-1 - i] if i < len(env) else f"_{i - len(env)}"
            case Abs(name, body):
                fresh = _fresh("x" if canonical else name, avoid | set(env))
                s = f"{lam}{fresh}.{go(body, env + [fresh], 'top')}"
                return s if ctx == "top" else f"({s})"
            case App(f, a):
                s = f"{go(f, env, 'fn')} {go(a, env, 'arg')}"
                return f"({s})" if ctx == "arg" else s
        raise TypeError(t)

    return go(t, [], "top")


def alpha_eq(a: Term, b: Term) -> bool:
    return a == b


def size(t: Term) -> int:
    match t:
        case Abs(_, body):
            return 1 + size(body)
        case App(f, a):
            return 1 + size(f) + size(a)
    return 1


# ---------------------------------------------------- indices and substitution


def free_vars(t: Term) -> set[str]:
    """Names of the globally free variables of ``t``."""
    return free_names(t)


def _occurs(t: Term, index: int) -> bool:
    match t:
        case Var(i):
            return i == index
        case Free():
            return False
        case Abs(_, body):
            return _occurs(body, index + 1)
        case App(f, a):
            return _occurs(f, index) or _occurs(a, index)
    raise TypeError(t)


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every index of ``t`` that is at least ``cutoff``."""
    if by == 0:
        return t
    match t:
        case Var(i, name):
            return Var(i + by, name) if i >= cutoff else t
        case Free():
            return t
        case Abs(name, body):
            return Abs(name, shift(body, by, cutoff + 1))
        case App(f, a):
            return App(shift(f, by, cutoff), shift(a, by, cutoff))
    raise TypeError(t)


def substitute(body: Term, arg: Term) -> Term:
    """``[arg/x]body`` where ``x`` is binder index 0 of ``body``.

    Indices of ``body`` above 0 drop by one since the binder disappears.
    """

    def go(t: Term, depth: int) -> Term:
        match t:
            case Var(i, name):
                if i == depth:
                    return shift(arg, depth)
                return Var(i - 1, name) if i > depth else t
            case Free():
                return t
            case Abs(name, b):
                return Abs(name, go(b, depth + 1))
            case App(f, a):
                return App(go(f, depth), go(a, depth))
        raise TypeError(t)

    return go(body, 0)


# ----------------------------------------------------------------- positions


def format_position(pos: Position) -> str:
    return ".".join(pos)


def parse_position(text: str) -> Position:
    text = text.strip()
    if not text:
        return ()
    tags = tuple(part.strip() for part in text.split("."))
    for tag in tags:
        if tag not in _TAGS:
            raise ValueError(f"unknown position tag {tag!r}")
    return tags


def subterm(t: Term, pos: Position) -> Term:
    for tag in pos:
        match tag, t:
            case "body", Abs(_, body):
                t = body
            case "fn", App(f, _):
                t = f
            case "arg", App(_, a):
                t = a
            case _:
                raise InvalidPosition(f"position {format_position(pos)!r} leaves the term")
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    tag, rest = pos[0], pos[1:]
    match tag, t:
        case "body", Abs(name, body):
            return Abs(name, replace_at(body, rest, new))
        case "fn", App(f, a):
            return App(replace_at(f, rest, new), a)
        case "arg", App(f, a):
            return App(f, replace_at(a, rest, new))
    raise InvalidPosition(f"position {format_position(pos)!r} leaves the term")


# ----------------------------------------------------------------- contraction


def is_redex(t: Term, kind: StepKind) -> bool:
    if kind is StepKind.BETA:
        return isinstance(t, App) and isinstance(t.fn, Abs)
    return (
        isinstance(t, Abs)
        and isinstance(t.body, App)
        and t.body.arg == Var(0)
        and not _occurs(t.body.fn, 0)
    )


def _contract_here(t: Term, kind: StepKind) -> Term:
    if kind is StepKind.BETA:
        return substitute(t.fn.body, t.arg)
    return shift(t.body.fn, -1)


def contract(t: Term, pos: Position, kind: StepKind) -> Term:
    """Contract the ``kind``-redex found at ``pos`` in ``t``."""
    redex = subterm(t, pos)
    if not is_redex(redex, kind):
        raise NotARedex(kind, pos)
    return replace_at(t, pos, _contract_here(redex, kind))


def _walk(t: Term, pos: Position = ()) -> Iterator[tuple[Position, Term]]:
    yield pos, t
    match t:
        case Abs(_, body):
            yield from _walk(body, pos + (BODY,))
        case App(f, a):
            yield from _walk(f, pos + (FN,))
            yield from _walk(a, pos + (ARG,))


def find_redexes(t: Term) -> list[tuple[Position, StepKind]]:
    """All redexes of ``t`` in leftmost-outermost (pre-order) order."""
    found = []
    for pos, sub in _walk(t):
        for kind in StepKind:
            if is_redex(sub, kind):
                found.append((pos, kind))
    return found


# ------------------------------------------------------------ conversion search


@dataclass(frozen=True)
class ConversionStep:
    """One contraction of ``term`` at ``pos``.

    A forward step walks from ``term`` to its contractum; a reversed step
    walks from the contractum back to ``term``.
    """

    term: Term
    pos: Position
    kind: StepKind
    forward: bool = True

    @property
    def contractum(self) -> Term:
        return contract(self.term, self.pos, self.kind)

    @property
    def src(self) -> Term:
        return self.term if self.forward else self.contractum

    @property
    def dst(self) -> Term:
        return self.contractum if self.forward else self.term


@dataclass(frozen=True)
class Conversion:
    """A zig-zag ``source ->* common *<- target``."""

    source: Term
    target: Term
    steps: tuple[ConversionStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def replay(self) -> Term:
        """Walk the steps from ``source``; raises if they do not chain."""
        cur = self.source
        for step in self.steps:
            if step.src != cur:
                raise ValueError("conversion steps do not chain")
            cur = step.dst
        return cur


def next_redex(t: Term) -> tuple[Position, StepKind] | None:
    """The redex contracted by the search strategy: the leftmost-outermost
    eta-redex if there is one, otherwise the leftmost-outermost beta-redex."""
    redexes = find_redexes(t)
    for pos, kind in redexes:
        if kind is StepKind.ETA:
            return pos, kind
    return redexes[0] if redexes else None


def reduction_sequence(t: Term, fuel: int) -> list[tuple[Term, Position | None, StepKind | None]]:
    """``[(t0, p0, k0), (t1, p1, k1), ..., (tn, None, None)]`` with at most
    ``fuel`` contractions; the last entry carries no step."""
    seq = []
    for _ in range(fuel):
        nxt = next_redex(t)
        if nxt is None:
            break
        seq.append((t, nxt[0], nxt[1]))
        t = contract(t, *nxt)
    seq.append((t, None, None))
    return seq


def conversion_search(m: Term, n: Term, fuel: int) -> Conversion | None:
    """Look for a common reduct of ``m`` and ``n`` within ``fuel`` steps on
    each side.  ``None`` means nothing was found, not that m and n differ."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    left = reduction_sequence(m, fuel)
    right = reduction_sequence(n, fuel)
    first_seen: dict[Term, int] = {}
    for j, (t, _, _) in enumerate(right):
        first_seen.setdefault(t, j)
    best = None
    for i, (t, _, _) in enumerate(left):
        j = first_seen.get(t)
        if j is not None and (best is None or i + j < best[0] + best[1]):
            best = (i, j)
    if best is None:
        return None
    i, j = best
    steps = [ConversionStep(t, p, k, True) for t, p, k in left[:i]]
    steps += [ConversionStep(t, p, k, False) for t, p, k in reversed(right[:j])]
    return Conversion(m, n, tuple(steps))
