from __future__ import annotations

import sys
from pathlib import Path as FsPath

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(FsPath(__file__).parent))

from comppaths import corpus  # noqa: E402
from comppaths.terms import Abs, App, Free, Var  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

EXAMPLE_M = "(\\x.(\\y.y x)(\\w.z w)) v"
EXAMPLE_N = "z v"

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def terms(draw, env: int = 0, budget: int = 6):
    """Random terms, possibly with redexes, all indices bound."""
    choices = ["free"] + (["var"] if env else []) + (["abs", "app"] if budget > 0 else [])
    kind = draw(st.sampled_from(choices))
    if kind == "free":
        return Free(draw(st.sampled_from(corpus.FREE_NAMES)))
    if kind == "var":
        return Var(draw(st.integers(0, env - 1)))
    if kind == "abs":
        return Abs(draw(st.sampled_from(corpus.BINDERS)), draw(terms(env + 1, budget - 1)))
    return App(draw(terms(env, budget - 1)), draw(terms(env, budget - 1)))


@st.composite
def corpus_paths(draw, depth_cap: int = 6):
    return next(corpus.gen_corpus(draw(seeds), 1, depth_cap))


@st.composite
def cells(draw, max_len: int = 6):
    import random

    rng = random.Random(draw(seeds))
    (start,) = corpus.composable_paths(rng, 1, 4)
    return corpus.random_cell(rng, start, max_len)


_ACCEPTANCE: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
