from __future__ import annotations

import pytest
from hypothesis import given

import oracle
from conftest import EXAMPLE_M, EXAMPLE_N, terms
from comppaths.terms import (
    Abs,
    App,
    Free,
    InvalidPosition,
    NotARedex,
    ParseError,
    StepKind,
    UnboundIdentifier,
    Var,
    alpha_eq,
    contract,
    conversion_search,
    find_redexes,
    format_position,
    parse_position,
    parse_term,
    print_term,
    reduction_sequence,
    replace_at,
    shift,
    subterm,
    substitute,
)

BETA, ETA = StepKind.BETA, StepKind.ETA


def test_parse_builds_indices():
    t = parse_term("\\x.\\y.x y z")
    assert t == Abs("x", Abs("y", App(App(Var(1), Var(0)), Free("z"))))


def test_names_do_not_affect_equality():
    assert parse_term("\\x.x") == parse_term("\\y.y")
    assert alpha_eq(parse_term("λa.λb.b a"), parse_term("\\u.\\w.w u"))
    assert parse_term("\\x.x") != parse_term("\\x.z")


def test_application_is_left_associative():
    assert parse_term("a b c") == App(App(Free("a"), Free("b")), Free("c"))
    assert parse_term("a (b c)") == App(Free("a"), App(Free("b"), Free("c")))


def test_parse_error_reports_offset():
    with pytest.raises(ParseError) as err:
        parse_term("(\\x.")
    assert err.value.offset == 4
    with pytest.raises(ParseError):
        parse_term("a b)")


def test_strict_mode_rejects_unknown_free_names():
    with pytest.raises(UnboundIdentifier):
        parse_term("\\x.x q", free=["z"], strict=True)
    assert parse_term("\\x.x z", free=["z"], strict=True) == Abs("x", App(Var(0), Free("z")))


def test_offset_counts_bytes():
    with pytest.raises(ParseError) as err:
        parse_term("λx.)")
    assert err.value.offset == 4  # λ is two bytes


def test_printer_avoids_shadowing_and_capture():
    assert print_term(parse_term("\\x.\\x.x")) == "\\x.\\x1.x1"
    assert print_term(parse_term("\\x.\\x.x"), lam="λ") == "λx.λx1.x1"
    assert print_term(Abs("z", App(Var(0), Free("z")))) == "\\z1.z1 z"


@given(terms())
def test_print_parse_round_trip(t):
    assert parse_term(print_term(t)) == t
    assert parse_term(print_term(t, lam="λ")) == t


def test_shift_and_substitute():
    assert shift(Var(0), 2) == Var(2)
    assert shift(Abs("x", Var(0)), 5) == Abs("x", Var(0))
    # (\x.\y.x) applied to a free variable inside a binder keeps it pointing outward
    body = Abs("y", Var(1))
    assert substitute(body, Var(3)) == Abs("y", Var(4))


def test_beta_avoids_capture():
    # (\x.\y.x) y  with y bound outside: \y0.\y.y0
    t = parse_term("\\y.(\\x.\\y.x) y")
    out = contract(t, ("body",), BETA)
    assert out == parse_term("\\a.\\b.a")


def test_eta_side_condition():
    assert contract(parse_term("\\x.f x"), (), ETA) == Free("f")
    with pytest.raises(NotARedex):
        contract(parse_term("\\x.x x"), (), ETA)
    with pytest.raises(NotARedex):
        contract(parse_term("\\x.f x x"), (), ETA)


def test_positions():
    t = parse_term("(\\x.x) a")
    assert subterm(t, ("fn", "body")) == Var(0)
    assert format_position(("fn", "body")) == "fn.body"
    assert parse_position("fn.body") == ("fn", "body")
    assert parse_position("") == ()
    with pytest.raises(InvalidPosition):
        subterm(t, ("body",))
    assert replace_at(t, ("arg",), Free("b")) == parse_term("(\\x.x) b")


@given(terms())
def test_redexes_agree_with_named_oracle(t):
    named = oracle.to_named(t)
    found = set(find_redexes(t))
    for pos, kind in found:
        expected = oracle.contract_named(named, pos, kind.value)
        assert expected is not None
        assert oracle.alpha_equal(oracle.to_named(contract(t, pos, kind)), expected)
    # nothing missed: every position the oracle can contract is listed
    from comppaths.terms import _walk

    for pos, _ in _walk(t):
        for kind in (BETA, ETA):
            if oracle.contract_named(named, pos, kind.value) is not None:
                assert (pos, kind) in found


@given(terms())
def test_redexes_listed_outermost_leftmost(t):
    positions = [pos for pos, _ in find_redexes(t)]
    from comppaths.terms import _walk

    order = {pos: i for i, (pos, _) in enumerate(_walk(t))}
    assert [order[p] for p in positions] == sorted(order[p] for p in positions)


def test_example_conversion_sequence():
    # the sequence M, (λx.(λy.yx)z)v, (λy.yv)z, zv
    m, n = parse_term(EXAMPLE_M), parse_term(EXAMPLE_N)
    conv = conversion_search(m, n, 50)
    assert conv is not None and len(conv) == 3
    assert [s.kind for s in conv] == [ETA, BETA, BETA]
    assert [s.pos for s in conv] == [("fn", "body", "arg"), (), ()]
    middle = [print_term(s.dst) for s in conv]
    assert middle == ["(\\x.(\\y.y x) z) v", "(\\y.y v) z", "z v"]
    assert conv.replay() == n


def test_alpha_equal_terms_need_no_steps():
    conv = conversion_search(parse_term("\\x.x"), parse_term("\\y.y"), 10)
    assert conv is not None and len(conv) == 0


def test_divergent_term_has_no_conversion_within_fuel():
    omega = parse_term("(\\x.x x)(\\x.x x)")
    assert conversion_search(omega, parse_term("v"), 50) is None


def test_conversion_meets_in_the_middle():
    m = parse_term("(\\x.x) a")
    n = parse_term("(\\y.a) b")
    conv = conversion_search(m, n, 10)
    assert [s.forward for s in conv] == [True, False]
    assert conv.replay() == n


def test_reduction_sequence_respects_fuel():
    seq = reduction_sequence(parse_term("(\\x.x x)(\\x.x x)"), 5)
    assert len(seq) == 6 and seq[-1][1] is None
    with pytest.raises(ValueError):
        conversion_search(Free("a"), Free("a"), 0)
