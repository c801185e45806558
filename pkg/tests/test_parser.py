from __future__ import annotations

import pytest

from rclcheck import (
    Atom,
    Dynamic,
    Obligation,
    Permission,
    Prohibition,
    canonicalize,
    directed,
    parse,
    parse_or_raise,
    performer,
    render,
    render_formula,
)
from rclcheck.formula import GLOBAL
from rclcheck.generator import generate
from rclcheck.parser import RclSyntaxError


def canonical_clauses(spec):
    return tuple(canonicalize(c) for c in spec.clauses)


def test_minimal_contract():
    spec = parse_or_raise("O(a);")
    assert spec.clauses == (Obligation(GLOBAL, Atom("a")),)
    assert spec.conflicts.is_empty
    assert spec.individuals == frozenset()
    assert spec.actions == {"a"}


def test_directed_prohibition_with_reparation():
    spec = parse_or_raise("{j,i}F(c) _/{j}O(d)/_ ;")
    clause = spec.clauses[0]
    assert clause == Prohibition(
        directed("j", "i"), Atom("c"), Obligation(performer("j"), Atom("d"))
    )


def test_example_file(simple_example_text):
    spec = parse_or_raise(simple_example_text)
    assert len(spec.clauses) == 2
    assert spec.individuals == {"i", "j", "k"}
    assert spec.actions == {"a", "b", "c", "d", "e", "f", "h"}
    pairs = {tuple(sorted(p)) for p in spec.conflicts.global_pairs}
    assert pairs == {("a", "b"), ("c", "d")}
    pairs = {tuple(sorted(p)) for p in spec.conflicts.relativized_pairs}
    assert pairs == {("e", "f"), ("a", "e")}
    # first clause: a global trigger guarding a three-way conjunction
    first = spec.clauses[0]
    assert isinstance(first, Dynamic) and first.rel.is_global


def test_conflict_header_is_optional():
    assert parse("O(a);").ok
    assert parse("conflict { global { (a, b) }; }; O(a);").ok


def test_header_pairs_are_unordered():
    left = parse_or_raise("conflict { global { (a, b) }; }; O(a);")
    right = parse_or_raise("conflict { global { (b, a) }; }; O(a);")
    assert left.conflicts == right.conflicts


def test_comments_and_whitespace_are_insignificant():
    spec = parse_or_raise("O(a);  // trailing note\n   // a whole line\n\tP( b );")
    assert len(spec.clauses) == 2


def test_precedence_conjunction_over_choice():
    spec = parse_or_raise("O(a) ^ O(b) (+) O(c);")
    clause = spec.clauses[0]
    # (+) binds loosest: (O(a) ^ O(b)) (+) O(c)
    assert type(clause).__name__ == "XChoice"
    assert len(clause.children) == 2


def test_action_precedence():
    spec = parse_or_raise("O(a&b.c+d);")
    rendered = render_formula(spec.clauses[0])
    assert rendered == "O(a&b.c+d);"[:-1]
    reparsed = parse_or_raise(rendered + ";")
    assert reparsed.clauses == spec.clauses


def test_special_actions_and_trigger_operators():
    spec = parse_or_raise("[!a*](F(b)) ^ [1](P(c)) ^ [0](O(d));")
    assert parse(render(spec)).ok


def test_roundtrip_random_specs():
    for seed in range(200):
        spec = generate(individuals=3, actions=4, clauses=2, max_depth=3, seed=seed)
        result = parse(render(spec))
        assert result.ok, (seed, [str(d) for d in result.errors])
        assert canonical_clauses(result.spec) == canonical_clauses(spec)
        assert result.spec.conflicts == spec.conflicts
        assert result.spec.individuals == spec.individuals
        assert result.spec.actions == spec.actions


def test_render_omits_empty_header():
    spec = parse_or_raise("O(a);")
    assert render(spec) == "O(a);\n"


def test_diagnostic_position_accuracy():
    # a lone '$' is not a token; the diagnostic must point at it
    text = "O(a) $ P(b);"
    offset = text.index("$") + 1
    result = parse(text)
    assert not result.ok
    diag = result.errors[0]
    assert diag.line == 1
    assert abs(diag.column - offset) <= 1


@pytest.mark.parametrize(
    "text",
    [
        "O(a;",                      # unbalanced parens
        "{i,j,k}O(a);",              # too many individuals
        "O(a) (+) F(b);",            # prohibition in a clause choice
        "O(a) (+) P(b);",            # mixed families
        "[a](O(b)) (+) O(c);",       # dynamic operand in a clause choice
        "O(!a);",                    # negation outside a trigger
        "O(a*);",                    # iteration outside a trigger
        "[!(a.b)](P(c));",           # negation of a compound action
        "P(a) _/O(b)/_ ;",           # permission with a reparation
        "",                          # no clauses
        "O(a) ^^ P(b);",             # stray operator
    ],
)
def test_errors(text):
    result = parse(text)
    assert not result.ok
    assert result.errors


def test_error_recovery_reports_multiple_clauses():
    result = parse("O(a;\nP(b;\nO(c);")
    assert not result.ok
    assert len(result.errors) >= 2


def test_identifiers_are_ascii_only():
    result = parse("O(café);")
    assert not result.ok
    assert "unknown token" in result.errors[0].message


def test_self_directed_relativization_warns_but_parses():
    result = parse("{i,i}O(a);")
    assert result.ok
    assert result.warnings
    assert result.warnings[0].severity == "warning"


def test_parse_or_raise():
    with pytest.raises(RclSyntaxError):
        parse_or_raise("O(a")
