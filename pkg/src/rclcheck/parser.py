"""Text format for RCL contracts.

A contract file is an optional pre-defined conflict header followed by
clauses, each terminated by ``;``::

    conflict {
        global { (a, b), (c, d) };
        relativized { (e, f), (e, a) };
    };
    [e]({j,k}O(f) ^ P(a) ^ {k}[a.b]({i,j}O(e&f)));
    {j,i}F(c) _/{j}O(d)/_ ^ P(b);

Operators: ``^`` conjunction, ``(+)`` clause choice, ``&`` concurrency,
``.`` sequence, ``+`` action choice, ``!a`` negation and ``b*`` iteration
(triggers only), ``0``/``1`` special actions, ``_/ ... /_`` reparation,
``{i}``/``{i,j}`` relativizations, ``//`` line comments.  Whitespace is
insignificant outside identifiers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    GLOBAL,
    TOP,
    BOTTOM,
    ActionExpr,
    And,
    Atom,
    Choice,
    Concurrent,
    ConflictRelations,
    ContractSpec,
    Dynamic,
    Formula,
    Negation,
    Obligation,
    ONE,
    OneAction,
    Permission,
    Prohibition,
    Relativization,
    Sequence,
    Star,
    Top,
    Bottom,
    XChoice,
    ZERO,
    ZeroAction,
    conj,
    xchoice,
)

KEYWORDS = frozenset({"conflict", "global", "relativized", "O", "P", "F", "true", "false"})


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" or "warning"
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass
class ParseResult:
    spec: ContractSpec | None
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.spec is not None

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def warnings(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "warning"]


class RclSyntaxError(Exception):
    """Raised by ``parse_or_raise`` when the input has errors."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


# ---------------------------------------------------------------------------
# Tokenizer


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    col: int


_PUNCT = {"{", "}", "(", ")", "[", "]", ",", ";", "^", "&", ".", "+", "!", "*"}
_IDENT_START = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz")
_IDENT_CONT = _IDENT_START | frozenset("0123456789_")


def _tokenize(text: str, diagnostics: list[ParseDiagnostic]) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        start_col = col
        if text.startswith("(+)", i):
            tokens.append(_Token("(+)", "(+)", line, start_col))
            i, col = i + 3, col + 3
            continue
        if text.startswith("_/", i):
            tokens.append(_Token("_/", "_/", line, start_col))
            i, col = i + 2, col + 2
            continue
        if text.startswith("/_", i):
            tokens.append(_Token("/_", "/_", line, start_col))
            i, col = i + 2, col + 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, line, start_col))
            i, col = i + 1, col + 1
            continue
        if ch in "01":
            tokens.append(_Token(ch, ch, line, start_col))
            i, col = i + 1, col + 1
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            word = text[i:j]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(_Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        diagnostics.append(
            ParseDiagnostic("error", line, start_col, f"unknown token {ch!r}")
        )
        i, col = i + 1, col + 1
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _ParseAbort(Exception):
    """Internal: unwinds to the clause loop for resynchronization."""


class _Parser:
    def __init__(self, tokens: list[_Token], diagnostics: list[ParseDiagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> _Token | None:
        if self.peek().kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, what: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {what or kind!r}, found {tok.value or 'end of input'!r}", tok)
        return self.advance()

    def error(self, message: str, tok: _Token | None = None) -> None:
        tok = tok or self.peek()
        self.diagnostics.append(ParseDiagnostic("error", tok.line, tok.col, message))
        raise _ParseAbort

    def warn(self, message: str, tok: _Token) -> None:
        self.diagnostics.append(ParseDiagnostic("warning", tok.line, tok.col, message))

    def resync(self) -> None:
        # Skip to just past the next clause terminator.
        while self.peek().kind not in (";", "eof"):
            self.advance()
        self.accept(";")

    # -- file structure ----------------------------------------------------

    def parse_file(self) -> ContractSpec | None:
        conflicts = ConflictRelations()
        if self.peek().kind == "conflict":
            try:
                conflicts = self.parse_conflict_header()
            except _ParseAbort:
                self.resync()
        clauses: list[Formula] = []
        while self.peek().kind != "eof":
            try:
                clauses.append(self.parse_clause())
            except _ParseAbort:
                self.resync()
        if not clauses and not self.diagnostics:
            self.diagnostics.append(
                ParseDiagnostic("error", 1, 1, "contract has no clauses")
            )
        if any(d.severity == "error" for d in self.diagnostics):
            return None
        return ContractSpec.from_clauses(clauses, conflicts)

    def parse_conflict_header(self) -> ConflictRelations:
        self.expect("conflict")
        self.expect("{")
        global_pairs: list[tuple[str, str]] = []
        relativized_pairs: list[tuple[str, str]] = []
        seen: set[str] = set()
        while self.peek().kind in ("global", "relativized"):
            section = self.advance()
            if section.kind in seen:
                self.error(f"duplicate {section.kind!r} section", section)
            seen.add(section.kind)
            target = global_pairs if section.kind == "global" else relativized_pairs
            self.expect("{")
            if self.peek().kind != "}":
                target.append(self.parse_pair())
                while self.accept(","):
                    target.append(self.parse_pair())
            self.expect("}")
            self.expect(";")
        self.expect("}")
        self.expect(";")
        return ConflictRelations.make(global_pairs, relativized_pairs)

    def parse_pair(self) -> tuple[str, str]:
        self.expect("(")
        a = self.expect("ident", "an action name").value
        self.expect(",")
        b = self.expect("ident", "an action name").value
        self.expect(")")
        return (a, b)

    def parse_clause(self) -> Formula:
        formula = self.parse_formula()
        self.expect(";", "';' after a clause")
        return formula

    # -- formulas ------------------------------------------------------------

    def parse_formula(self) -> Formula:
        first = self.parse_conjunction()
        if self.peek().kind != "(+)":
            return first
        branches = [first]
        while True:
            tok = self.accept("(+)")
            if tok is None:
                break
            branches.append(self.parse_conjunction())
            self.check_choice_operand(branches[-2], tok)
            self.check_choice_operand(branches[-1], tok)
        families = {self.choice_family(b) for b in branches}
        if len(families) > 1:
            self.error("clause choice cannot mix obligations and permissions",
                       self.tokens[self.pos - 1])
        return xchoice(*branches)

    def check_choice_operand(self, branch: Formula, tok: _Token) -> None:
        if self.choice_family(branch) is None:
            self.diagnostics.append(ParseDiagnostic(
                "error", tok.line, tok.col,
                "clause choice applies only to obligation or permission clauses",
            ))
            raise _ParseAbort

    def choice_family(self, branch: Formula) -> str | None:
        """'O' or 'P' when every deontic leaf matches; None otherwise."""
        ops: set[str] = set()
        stack = [branch]
        while stack:
            f = stack.pop()
            if isinstance(f, Obligation):
                ops.add("O")
            elif isinstance(f, Permission):
                ops.add("P")
            elif isinstance(f, (And, XChoice)):
                stack.extend(f.children)
            else:
                return None
        if len(ops) == 1:
            return ops.pop()
        return None

    def parse_conjunction(self) -> Formula:
        parts = [self.parse_primary()]
        while self.accept("^"):
            parts.append(self.parse_primary())
        return conj(*parts)

    def parse_primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "true":
            self.advance()
            return TOP
        if tok.kind == "false":
            self.advance()
            return BOTTOM
        if tok.kind == "(":
            self.advance()
            inner = self.parse_formula()
            self.expect(")")
            return inner
        rel = GLOBAL
        if tok.kind == "{":
            rel = self.parse_relativization()
            tok = self.peek()
        if tok.kind in ("O", "P", "F"):
            return self.parse_deontic(rel)
        if tok.kind == "[":
            return self.parse_dynamic(rel)
        self.error(f"expected a clause, found {tok.value or 'end of input'!r}", tok)
        raise AssertionError("unreachable")

    def parse_relativization(self) -> Relativization:
        open_tok = self.expect("{")
        names = [self.expect("ident", "an individual").value]
        while self.accept(","):
            names.append(self.expect("ident", "an individual").value)
        self.expect("}")
        if len(names) > 2:
            self.error("a relativization names at most two individuals", open_tok)
        if len(names) == 2 and names[0] == names[1]:
            self.warn(f"self-directed relativization {{{names[0]},{names[1]}}}", open_tok)
        return Relativization(*names)

    def parse_deontic(self, rel: Relativization) -> Formula:
        op = self.advance()
        self.expect("(")
        action = self.parse_action(trigger=False)
        self.expect(")")
        reparation: Formula | None = None
        rep_tok = self.accept("_/")
        if rep_tok is not None:
            reparation = self.parse_formula()
            self.expect("/_", "'/_' closing the reparation")
        if op.kind == "O":
            return Obligation(rel, action, reparation)
        if op.kind == "F":
            return Prohibition(rel, action, reparation)
        if reparation is not None:
            self.error("permissions cannot carry a reparation", rep_tok)
        return Permission(rel, action)

    def parse_dynamic(self, rel: Relativization) -> Formula:
        self.expect("[")
        trigger = self.parse_action(trigger=True)
        self.expect("]")
        body = self.parse_primary()
        return Dynamic(rel, trigger, body)

    # -- action expressions --------------------------------------------------

    def parse_action(self, trigger: bool) -> ActionExpr:
        left = self.parse_action_seq(trigger)
        while self.accept("+"):
            left = Choice(left, self.parse_action_seq(trigger))
        return left

    def parse_action_seq(self, trigger: bool) -> ActionExpr:
        left = self.parse_action_conc(trigger)
        while self.accept("."):
            left = Sequence(left, self.parse_action_conc(trigger))
        return left

    def parse_action_conc(self, trigger: bool) -> ActionExpr:
        left = self.parse_action_unary(trigger)
        while self.accept("&"):
            left = Concurrent(left, self.parse_action_unary(trigger))
        return left

    def parse_action_unary(self, trigger: bool) -> ActionExpr:
        tok = self.peek()
        if tok.kind == "!":
            self.advance()
            if not trigger:
                self.error("negation is allowed only in dynamic triggers", tok)
            inner = self.parse_action_atom(trigger)
            if not isinstance(inner, (Atom, ZeroAction, OneAction)):
                self.error("negation applies to a single action", tok)
            expr: ActionExpr = Negation(inner)
        else:
            expr = self.parse_action_atom(trigger)
        while self.peek().kind == "*":
            star_tok = self.advance()
            if not trigger:
                self.error("iteration is allowed only in dynamic triggers", star_tok)
            expr = Star(expr)
        return expr

    def parse_action_atom(self, trigger: bool) -> ActionExpr:
        tok = self.peek()
        if tok.kind == "ident":
            self.advance()
            return Atom(tok.value)
        if tok.kind == "0":
            self.advance()
            return ZERO
        if tok.kind == "1":
            self.advance()
            return ONE
        if tok.kind == "(":
            self.advance()
            inner = self.parse_action(trigger)
            self.expect(")")
            return inner
        self.error(f"expected an action, found {tok.value or 'end of input'!r}", tok)
        raise AssertionError("unreachable")


def parse(text: str) -> ParseResult:
    """Parse contract text; errors leave ``spec`` unset in the result."""
    diagnostics: list[ParseDiagnostic] = []
    tokens = _tokenize(text, diagnostics)
    spec = _Parser(tokens, diagnostics).parse_file()
    if any(d.severity == "error" for d in diagnostics):
        spec = None
    return ParseResult(spec, diagnostics)


def parse_or_raise(text: str) -> ContractSpec:
    result = parse(text)
    if result.spec is None:
        raise RclSyntaxError(result.errors)
    return result.spec


# ---------------------------------------------------------------------------
# Rendering

_CHOICE_PREC, _SEQ_PREC, _CONC_PREC, _UNARY_PREC = 0, 1, 2, 3


def render_action(expr: ActionExpr, _parent: int = 0) -> str:
    if isinstance(expr, Atom):
        return expr.name
    if isinstance(expr, ZeroAction):
        return "0"
    if isinstance(expr, OneAction):
        return "1"
    if isinstance(expr, Negation):
        return "!" + render_action(expr.inner, _UNARY_PREC)
    if isinstance(expr, Star):
        return render_action(expr.inner, _UNARY_PREC) + "*"
    ops = {Choice: ("+", _CHOICE_PREC), Sequence: (".", _SEQ_PREC), Concurrent: ("&", _CONC_PREC)}
    op, prec = ops[type(expr)]
    text = f"{render_action(expr.left, prec)}{op}{render_action(expr.right, prec + 1)}"
    if prec < _parent:
        return f"({text})"
    return text


def _render_rel(rel: Relativization) -> str:
    if rel.is_global:
        return ""
    if rel.is_performer:
        return "{%s}" % rel.sender
    return "{%s,%s}" % (rel.sender, rel.receiver)


_XCH_PREC, _AND_PREC, _PRIMARY_PREC = 0, 1, 2


def render_formula(formula: Formula, _parent: int = 0) -> str:
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Bottom):
        return "false"
    if isinstance(formula, (Obligation, Permission, Prohibition)):
        op = {Obligation: "O", Permission: "P", Prohibition: "F"}[type(formula)]
        text = f"{_render_rel(formula.rel)}{op}({render_action(formula.action)})"
        if not isinstance(formula, Permission) and formula.reparation is not None:
            text += f" _/{render_formula(formula.reparation)}/_"
        return text
    if isinstance(formula, Dynamic):
        body = render_formula(formula.body)
        return f"{_render_rel(formula.rel)}[{render_action(formula.trigger)}]({body})"
    if isinstance(formula, And):
        text = " ^ ".join(render_formula(c, _PRIMARY_PREC) for c in formula.children)
        return f"({text})" if _parent > _AND_PREC else text
    if isinstance(formula, XChoice):
        text = " (+) ".join(render_formula(c, _AND_PREC) for c in formula.children)
        return f"({text})" if _parent > _XCH_PREC else text
    raise TypeError(f"not a formula: {formula!r}")


def render(spec: ContractSpec) -> str:
    """Canonical text for a contract; ``parse`` maps it back to an equal spec."""
    lines: list[str] = []
    conflicts = spec.conflicts
    if not conflicts.is_empty:
        lines.append("conflict {")
        for name, pairs in (("global", conflicts.global_pairs),
                            ("relativized", conflicts.relativized_pairs)):
            if not pairs:
                continue
            rendered = sorted("(%s, %s)" % (min(p), max(p)) for p in pairs)
            lines.append(f"    {name} {{ {', '.join(rendered)} }};")
        lines.append("};")
    for clause in spec.clauses:
        lines.append(render_formula(clause) + ";")
    return "\n".join(lines) + "\n"
