"""Core data model for RCL contracts.

A contract is an immutable formula tree built from deontic operators
(obligation, permission, prohibition), dynamic modalities, conjunction and
clause choice, over an action algebra with concurrency, sequence and choice.
Every node carries a cached structural key, so formulas hash and compare in
near-constant time; the automaton construction relies on that for state
deduplication.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

Individual = str
ActionName = str

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def is_identifier(name: str) -> bool:
    """True if ``name`` is a legal individual or action identifier."""
    return bool(_IDENT_RE.match(name))


class _Keyed:
    """Mixin giving AST nodes a cached structural key.

    The key is a nested tuple unique to the node's shape; hashing, equality
    and deterministic ordering all go through it.  Caches live in the
    instance ``__dict__`` so frozen dataclasses can still fill them lazily.
    """

    def _build_key(self) -> tuple:
        raise NotImplementedError

    def key(self) -> tuple:
        k = self.__dict__.get("_k")
        if k is None:
            k = self._build_key()
            object.__setattr__(self, "_k", k)
        return k

    def sort_key(self) -> str:
        s = self.__dict__.get("_sk")
        if s is None:
            s = repr(self.key())
            object.__setattr__(self, "_sk", s)
        return s

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash(self.key())
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, _Keyed):
            return NotImplemented
        return self.key() == other.key()

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.key()[1:]!r}"


# ---------------------------------------------------------------------------
# Relativizations


@dataclass(frozen=True)
class Relativization:
    """Binding of an operator to parties: global, performer, or directed.

    ``Relativization()`` is the global form (all individuals), a sender
    alone is a performer form, sender plus receiver is the directed form.
    """

    sender: Individual | None = None
    receiver: Individual | None = None

    def __post_init__(self) -> None:
        if self.receiver is not None and self.sender is None:
            raise ValueError("a receiver requires a sender")

    @property
    def is_global(self) -> bool:
        return self.sender is None

    @property
    def is_performer(self) -> bool:
        return self.sender is not None and self.receiver is None

    @property
    def is_directed(self) -> bool:
        return self.receiver is not None

    def individuals(self) -> frozenset[Individual]:
        return frozenset(x for x in (self.sender, self.receiver) if x is not None)

    def key(self) -> tuple[str, str]:
        return (self.sender or "", self.receiver or "")

    def __repr__(self) -> str:
        if self.is_global:
            return "GLOBAL"
        if self.is_performer:
            return f"performer({self.sender!r})"
        return f"directed({self.sender!r}, {self.receiver!r})"


GLOBAL = Relativization()


def performer(sender: Individual) -> Relativization:
    return Relativization(sender)


def directed(sender: Individual, receiver: Individual) -> Relativization:
    return Relativization(sender, receiver)


# ---------------------------------------------------------------------------
# Action expressions


class ActionExpr(_Keyed):
    """Base class of the action algebra."""

    __hash__ = _Keyed.__hash__


@dataclass(frozen=True, eq=False, repr=False)
class Atom(ActionExpr):
    name: ActionName

    def _build_key(self) -> tuple:
        return ("atom", self.name)


@dataclass(frozen=True, eq=False, repr=False)
class ZeroAction(ActionExpr):
    """The impossible action: it never happens."""

    def _build_key(self) -> tuple:
        return ("zero",)


@dataclass(frozen=True, eq=False, repr=False)
class OneAction(ActionExpr):
    """The wildcard action: any nonempty step performs it."""

    def _build_key(self) -> tuple:
        return ("one",)


ZERO = ZeroAction()
ONE = OneAction()


@dataclass(frozen=True, eq=False, repr=False)
class Concurrent(ActionExpr):
    left: ActionExpr
    right: ActionExpr

    def _build_key(self) -> tuple:
        return ("conc", self.left.key(), self.right.key())


@dataclass(frozen=True, eq=False, repr=False)
class Sequence(ActionExpr):
    left: ActionExpr
    right: ActionExpr

    def _build_key(self) -> tuple:
        return ("seq", self.left.key(), self.right.key())


@dataclass(frozen=True, eq=False, repr=False)
class Choice(ActionExpr):
    left: ActionExpr
    right: ActionExpr

    def _build_key(self) -> tuple:
        return ("alt", self.left.key(), self.right.key())


@dataclass(frozen=True, eq=False, repr=False)
class Negation(ActionExpr):
    """Trigger-only: matches when the negated action is not performed."""

    inner: ActionExpr

    def _build_key(self) -> tuple:
        return ("neg", self.inner.key())


@dataclass(frozen=True, eq=False, repr=False)
class Star(ActionExpr):
    """Trigger-only iteration."""

    inner: ActionExpr

    def _build_key(self) -> tuple:
        return ("star", self.inner.key())


def action_atoms(expr: ActionExpr) -> Iterator[ActionName]:
    """Yield every basic-action name occurring in ``expr``."""
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, Atom):
            yield e.name
        elif isinstance(e, (Concurrent, Sequence, Choice)):
            stack.append(e.left)
            stack.append(e.right)
        elif isinstance(e, (Negation, Star)):
            stack.append(e.inner)


def uses_trigger_operators(expr: ActionExpr) -> bool:
    """True if ``expr`` contains negation or iteration."""
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, (Negation, Star)):
            return True
        if isinstance(e, (Concurrent, Sequence, Choice)):
            stack.append(e.left)
            stack.append(e.right)
    return False


# ---------------------------------------------------------------------------
# Contract formulas


class Formula(_Keyed):
    """Base class of contract formulas."""

    __hash__ = _Keyed.__hash__


@dataclass(frozen=True, eq=False, repr=False)
class Top(Formula):
    """The satisfied contract."""

    def _build_key(self) -> tuple:
        return ("top",)


@dataclass(frozen=True, eq=False, repr=False)
class Bottom(Formula):
    """The breached contract."""

    def _build_key(self) -> tuple:
        return ("bot",)


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True, eq=False, repr=False)
class Obligation(Formula):
    rel: Relativization
    action: ActionExpr
    reparation: Formula | None = None

    def _build_key(self) -> tuple:
        rep = self.reparation.key() if self.reparation is not None else None
        return ("ob", self.rel.key(), self.action.key(), rep)


@dataclass(frozen=True, eq=False, repr=False)
class Permission(Formula):
    rel: Relativization
    action: ActionExpr

    def _build_key(self) -> tuple:
        return ("perm", self.rel.key(), self.action.key())


@dataclass(frozen=True, eq=False, repr=False)
class Prohibition(Formula):
    rel: Relativization
    action: ActionExpr
    reparation: Formula | None = None

    def _build_key(self) -> tuple:
        rep = self.reparation.key() if self.reparation is not None else None
        return ("proh", self.rel.key(), self.action.key(), rep)


@dataclass(frozen=True, eq=False, repr=False)
class Dynamic(Formula):
    """Dynamic modality: once the trigger is performed, the body applies."""

    rel: Relativization
    trigger: ActionExpr
    body: Formula

    def _build_key(self) -> tuple:
        return ("dyn", self.rel.key(), self.trigger.key(), self.body.key())


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    children: tuple[Formula, ...]

    def _build_key(self) -> tuple:
        return ("and",) + tuple(c.key() for c in self.children)


@dataclass(frozen=True, eq=False, repr=False)
class XChoice(Formula):
    """Clause choice between obligation or permission alternatives.

    Read inclusively: the formula holds when at least one branch holds.
    """

    children: tuple[Formula, ...]

    def _build_key(self) -> tuple:
        return ("xch",) + tuple(c.key() for c in self.children)


def conj(*children: Formula) -> Formula:
    """n-ary conjunction; empty is TOP, singleton collapses."""
    if not children:
        return TOP
    if len(children) == 1:
        return children[0]
    return And(tuple(children))


def xchoice(*children: Formula) -> Formula:
    """n-ary clause choice; empty is BOTTOM, singleton collapses."""
    if not children:
        return BOTTOM
    if len(children) == 1:
        return children[0]
    return XChoice(tuple(children))


def conjuncts(formula: Formula) -> tuple[Formula, ...]:
    """Top-level conjuncts of a formula (itself if not a conjunction)."""
    if isinstance(formula, And):
        return formula.children
    return (formula,)


# ---------------------------------------------------------------------------
# Canonical form


def canonicalize(formula: Formula) -> Formula:
    """Normal form used for state comparison.

    Conjunctions and choices are flattened into sorted, duplicate-free
    n-ary nodes; neutral and absorbing constants are folded away
    (``TOP ^ C -> C``, ``BOTTOM ^ C -> BOTTOM``, ``TOP (+) C -> TOP``,
    ``BOTTOM (+) C -> C``).  Idempotent, and alphabet-preserving.
    """
    if isinstance(formula, (Top, Bottom, Permission)):
        return formula
    if isinstance(formula, (Obligation, Prohibition)):
        if formula.reparation is None:
            return formula
        rep = canonicalize(formula.reparation)
        if rep is formula.reparation:
            return formula
        return type(formula)(formula.rel, formula.action, rep)
    if isinstance(formula, Dynamic):
        body = canonicalize(formula.body)
        if body is formula.body:
            return formula
        return Dynamic(formula.rel, formula.trigger, body)
    if isinstance(formula, And):
        parts: list[Formula] = []
        seen: set[Formula] = set()
        for child in formula.children:
            c = canonicalize(child)
            if isinstance(c, Top):
                continue
            if isinstance(c, Bottom):
                return BOTTOM
            grand = c.children if isinstance(c, And) else (c,)
            for g in grand:
                if g not in seen:
                    seen.add(g)
                    parts.append(g)
        parts.sort(key=Formula.sort_key)
        return conj(*parts)
    if isinstance(formula, XChoice):
        parts = []
        seen = set()
        for child in formula.children:
            c = canonicalize(child)
            if isinstance(c, Top):
                return TOP
            if isinstance(c, Bottom):
                continue
            grand = c.children if isinstance(c, XChoice) else (c,)
            for g in grand:
                if g not in seen:
                    seen.add(g)
                    parts.append(g)
        parts.sort(key=Formula.sort_key)
        return xchoice(*parts)
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Alphabet extraction and atomicity


def extract_alphabet(
    clauses: Iterable[Formula],
) -> tuple[frozenset[Individual], frozenset[ActionName]]:
    """Every individual and basic action syntactically occurring anywhere."""
    individuals: set[Individual] = set()
    actions: set[ActionName] = set()
    stack: list[Formula] = list(clauses)
    while stack:
        f = stack.pop()
        if isinstance(f, (Top, Bottom)):
            continue
        if isinstance(f, (And, XChoice)):
            stack.extend(f.children)
            continue
        individuals.update(f.rel.individuals())
        if isinstance(f, Dynamic):
            actions.update(action_atoms(f.trigger))
            stack.append(f.body)
        else:
            actions.update(action_atoms(f.action))
            if not isinstance(f, Permission) and f.reparation is not None:
                stack.append(f.reparation)
    return frozenset(individuals), frozenset(actions)


def is_atomic(formula: Formula) -> bool:
    """True iff no operator in the formula carries a compound action.

    Compound means concurrency, sequence, choice, negation or iteration;
    the special actions behave as leaves.
    """
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, (Top, Bottom)):
            continue
        if isinstance(f, (And, XChoice)):
            stack.extend(f.children)
            continue
        if isinstance(f, Dynamic):
            if not isinstance(f.trigger, (Atom, ZeroAction, OneAction)):
                return False
            stack.append(f.body)
            continue
        if not isinstance(f.action, (Atom, ZeroAction, OneAction)):
            return False
        if not isinstance(f, Permission) and f.reparation is not None:
            stack.append(f.reparation)
    return True


# ---------------------------------------------------------------------------
# Pre-defined conflict relations and contract specifications


def _norm_pairs(pairs: Iterable[tuple[ActionName, ActionName]]) -> frozenset[frozenset[ActionName]]:
    return frozenset(frozenset(p) for p in pairs)


@dataclass(frozen=True)
class ConflictRelations:
    """Declared pairs of basic actions that must not co-occur.

    Global pairs clash whoever performs them; relativized pairs clash only
    when performed by the same individual.  Pairs are stored unordered, so
    the relation is symmetric by construction.
    """

    global_pairs: frozenset[frozenset[ActionName]] = frozenset()
    relativized_pairs: frozenset[frozenset[ActionName]] = frozenset()

    @staticmethod
    def make(
        global_pairs: Iterable[tuple[ActionName, ActionName]] = (),
        relativized_pairs: Iterable[tuple[ActionName, ActionName]] = (),
    ) -> "ConflictRelations":
        return ConflictRelations(_norm_pairs(global_pairs), _norm_pairs(relativized_pairs))

    def globally_conflicting(self, a: ActionName, b: ActionName) -> bool:
        return frozenset((a, b)) in self.global_pairs

    def relativized_conflicting(self, a: ActionName, b: ActionName) -> bool:
        return frozenset((a, b)) in self.relativized_pairs

    def partners(self, action: ActionName) -> frozenset[ActionName]:
        """Actions paired with ``action`` in either relation."""
        out: set[ActionName] = set()
        for pair in self.global_pairs | self.relativized_pairs:
            if action in pair:
                out.update(pair)
        out.discard(action)
        if frozenset((action,)) in self.global_pairs | self.relativized_pairs:
            out.add(action)
        return frozenset(out)

    def actions(self) -> frozenset[ActionName]:
        out: set[ActionName] = set()
        for pair in self.global_pairs | self.relativized_pairs:
            out.update(pair)
        return frozenset(out)

    @property
    def is_empty(self) -> bool:
        return not self.global_pairs and not self.relativized_pairs


NO_CONFLICTS = ConflictRelations()


@dataclass(frozen=True)
class ContractSpec:
    """A parsed contract: alphabet, pre-defined conflicts, and clauses.

    The alphabet is inferred, never declared: individuals and actions are
    exactly those mentioned in the clauses plus any actions mentioned in
    the conflict declarations.
    """

    individuals: frozenset[Individual]
    actions: frozenset[ActionName]
    conflicts: ConflictRelations
    clauses: tuple[Formula, ...]

    @staticmethod
    def from_clauses(
        clauses: Iterable[Formula],
        conflicts: ConflictRelations = NO_CONFLICTS,
    ) -> "ContractSpec":
        clauses = tuple(clauses)
        if not clauses:
            raise ValueError("a contract needs at least one clause")
        individuals, actions = extract_alphabet(clauses)
        return ContractSpec(individuals, actions | conflicts.actions(), conflicts, clauses)

    def root(self) -> Formula:
        """The whole contract as one conjunction, in clause order."""
        return conj(*self.clauses)

    @property
    def effective_individuals(self) -> frozenset[Individual]:
        # A contract that names actions but no parties still needs one
        # performer for the global operators to quantify over.
        if self.individuals:
            return self.individuals
        return frozenset({"i"})


# ---------------------------------------------------------------------------
# Symbol renaming (used by invariance checks)


def rename_action_expr(
    expr: ActionExpr, act_map: Mapping[ActionName, ActionName]
) -> ActionExpr:
    if isinstance(expr, Atom):
        return Atom(act_map.get(expr.name, expr.name))
    if isinstance(expr, (ZeroAction, OneAction)):
        return expr
    if isinstance(expr, (Concurrent, Sequence, Choice)):
        return type(expr)(
            rename_action_expr(expr.left, act_map),
            rename_action_expr(expr.right, act_map),
        )
    if isinstance(expr, (Negation, Star)):
        return type(expr)(rename_action_expr(expr.inner, act_map))
    raise TypeError(f"not an action expression: {expr!r}")


def rename_symbols(
    formula: Formula,
    ind_map: Mapping[Individual, Individual],
    act_map: Mapping[ActionName, ActionName],
) -> Formula:
    """Apply injective renamings of individuals and actions to a formula."""

    def rel(r: Relativization) -> Relativization:
        if r.is_global:
            return r
        sender = ind_map.get(r.sender, r.sender)
        receiver = None if r.receiver is None else ind_map.get(r.receiver, r.receiver)
        return Relativization(sender, receiver)

    if isinstance(formula, (Top, Bottom)):
        return formula
    if isinstance(formula, (And, XChoice)):
        return type(formula)(
            tuple(rename_symbols(c, ind_map, act_map) for c in formula.children)
        )
    if isinstance(formula, Dynamic):
        return Dynamic(
            rel(formula.rel),
            rename_action_expr(formula.trigger, act_map),
            rename_symbols(formula.body, ind_map, act_map),
        )
    if isinstance(formula, Permission):
        return Permission(rel(formula.rel), rename_action_expr(formula.action, act_map))
    rep = None
    if formula.reparation is not None:
        rep = rename_symbols(formula.reparation, ind_map, act_map)
    return type(formula)(rel(formula.rel), rename_action_expr(formula.action, act_map), rep)


def rename_spec(
    spec: ContractSpec,
    ind_map: Mapping[Individual, Individual],
    act_map: Mapping[ActionName, ActionName],
) -> ContractSpec:
    def pair_map(pairs: frozenset[frozenset[ActionName]]) -> Iterator[tuple[ActionName, ActionName]]:
        for pair in pairs:
            items = sorted(pair)
            a = act_map.get(items[0], items[0])
            b = act_map.get(items[-1], items[-1])
            yield (a, b)

    conflicts = ConflictRelations.make(
        pair_map(spec.conflicts.global_pairs),
        pair_map(spec.conflicts.relativized_pairs),
    )
    clauses = tuple(rename_symbols(c, ind_map, act_map) for c in spec.clauses)
    return ContractSpec.from_clauses(clauses, conflicts)
