"""Deontic conflict detection.

Two tags clash when they demand and forbid the same action for overlapping
performers, or when a pre-defined conflict relation links their actions.
States are searched group-against-group; the alternatives of a clause
choice count as blocked only if every one of them clashes.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .automaton import (
    BudgetExceeded,
    BuildOptions,
    ContractAutomaton,
    TraceStep,
    construct,
    trace_to,
)
from .decompose import DeonticGroup, DeonticOp, DeonticTag, GroupKind
from .formula import (
    Atom,
    ConflictRelations,
    ContractSpec,
    Formula,
    GLOBAL,
    Individual,
    Obligation,
    Permission,
    Prohibition,
    Relativization,
)


class ConflictKind(Enum):
    OBLIGATION_VS_PROHIBITION = "obligation vs prohibition"
    PROHIBITION_VS_PERMISSION = "prohibition vs permission"
    OBLIGATION_VS_OBLIGATION_PREDEF = "obligations over pre-defined conflicting actions"
    PERMISSION_VS_OBLIGATION_PREDEF = "permission and obligation over pre-defined conflicting actions"


def _performers_overlap(r1: Relativization, r2: Relativization) -> bool:
    # A global operator overlaps everyone.  Directed operators pin the
    # exact sender-receiver pair, so two directed forms overlap only when
    # both components agree; a bare performer overlaps on the sender.
    if r1.is_global or r2.is_global:
        return True
    if r1.is_directed and r2.is_directed:
        return r1.sender == r2.sender and r1.receiver == r2.receiver
    return r1.sender == r2.sender


def _senders_overlap(r1: Relativization, r2: Relativization) -> bool:
    if r1.is_global or r2.is_global:
        return True
    return r1.sender == r2.sender


def tags_conflict(
    d1: DeonticTag, d2: DeonticTag, rels: ConflictRelations
) -> ConflictKind | None:
    """The conflict scenario two tags fall under, if any.  Symmetric."""
    ops = {d1.op, d2.op}
    if d1.action == d2.action:
        if ops == {DeonticOp.OBLIGATION, DeonticOp.PROHIBITION}:
            if _performers_overlap(d1.rel, d2.rel):
                return ConflictKind.OBLIGATION_VS_PROHIBITION
        if ops == {DeonticOp.PROHIBITION, DeonticOp.PERMISSION}:
            if _performers_overlap(d1.rel, d2.rel):
                return ConflictKind.PROHIBITION_VS_PERMISSION
    if ops == {DeonticOp.OBLIGATION}:
        if rels.globally_conflicting(d1.action, d2.action):
            return ConflictKind.OBLIGATION_VS_OBLIGATION_PREDEF
        if rels.relativized_conflicting(d1.action, d2.action):
            if _senders_overlap(d1.rel, d2.rel):
                return ConflictKind.OBLIGATION_VS_OBLIGATION_PREDEF
    if ops == {DeonticOp.PERMISSION, DeonticOp.OBLIGATION}:
        if rels.globally_conflicting(d1.action, d2.action):
            return ConflictKind.PERMISSION_VS_OBLIGATION_PREDEF
        if rels.relativized_conflicting(d1.action, d2.action):
            if _senders_overlap(d1.rel, d2.rel):
                return ConflictKind.PERMISSION_VS_OBLIGATION_PREDEF
    return None


def conflicting_tags(
    tag: DeonticTag,
    rels: ConflictRelations,
    individuals: frozenset[Individual],
) -> frozenset:
    """Every tag over the given individuals that clashes with ``tag``.

    Only the tag's own action and its pre-defined partners can clash, so
    the candidate universe stays finite and small.
    """
    candidate_actions = {tag.action} | set(rels.partners(tag.action))
    candidate_rels = [GLOBAL]
    for i in sorted(individuals):
        candidate_rels.append(Relativization(i))
        for j in sorted(individuals):
            candidate_rels.append(Relativization(i, j))
    out = set()
    for action in candidate_actions:
        for rel in candidate_rels:
            for op in DeonticOp:
                other = DeonticTag(rel, op, action)
                if tags_conflict(tag, other, rels) is not None:
                    out.add(other)
    return frozenset(out)


Clash = tuple[DeonticTag, DeonticTag, ConflictKind]


def _pair_clash(a: DeonticGroup, b: DeonticGroup, rels: ConflictRelations) -> Clash | None:
    def first_clash(tags1, tags2) -> Clash | None:
        for d1 in sorted(tags1, key=DeonticTag.sort_key):
            for d2 in sorted(tags2, key=DeonticTag.sort_key):
                kind = tags_conflict(d1, d2, rels)
                if kind is not None:
                    return (d1, d2, kind)
        return None

    def all_blocked(choice_tags, other_tags) -> bool:
        return all(
            any(tags_conflict(d, d2, rels) is not None for d2 in other_tags)
            for d in choice_tags
        )

    if a.kind is GroupKind.CONJUNCT and b.kind is GroupKind.CONJUNCT:
        return first_clash(a.tags, b.tags)
    # A choice group conflicts only when every alternative is blocked.
    if a.kind is GroupKind.OBLIGATION_CHOICE and all_blocked(a.tags, b.tags):
        return first_clash(a.tags, b.tags)
    if b.kind is GroupKind.OBLIGATION_CHOICE and all_blocked(b.tags, a.tags):
        return first_clash(a.tags, b.tags)
    return None


def iter_group_conflicts(groups: frozenset, rels: ConflictRelations):
    """All clashes between distinct groups, in deterministic order."""
    ordered = sorted(groups, key=DeonticGroup.sort_key)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            clash = _pair_clash(a, b, rels)
            if clash is not None:
                yield clash


def search_conflicts(groups: frozenset, rels: ConflictRelations) -> Clash | None:
    """First clash between the deontic groups of one state, if any."""
    return next(iter_group_conflicts(groups, rels), None)


# ---------------------------------------------------------------------------
# Whole-contract verdicts


class VerdictKind(Enum):
    CONFLICT_FREE = "conflict-free"
    CONFLICTS = "conflicts"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConflictReport:
    state: int
    kind: ConflictKind
    left: DeonticTag
    right: DeonticTag
    trace: tuple[TraceStep, ...]
    left_clause: str
    right_clause: str


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reports: tuple[ConflictReport, ...] = ()
    reason: str = ""

    @property
    def is_conflict_free(self) -> bool:
        return self.kind is VerdictKind.CONFLICT_FREE

    @property
    def has_conflicts(self) -> bool:
        return self.kind is VerdictKind.CONFLICTS


@dataclass(frozen=True)
class CheckOutcome:
    """A verdict together with the automaton that produced it."""

    verdict: Verdict
    automaton: ContractAutomaton


def render_tag(tag: DeonticTag) -> str:
    from .parser import render_formula

    ctor = {
        DeonticOp.OBLIGATION: Obligation,
        DeonticOp.PERMISSION: Permission,
        DeonticOp.PROHIBITION: Prohibition,
    }[tag.op]
    if ctor is Permission:
        return render_formula(Permission(tag.rel, Atom(tag.action)))
    return render_formula(ctor(tag.rel, Atom(tag.action)))


def run_check(spec: ContractSpec, options: BuildOptions = BuildOptions()) -> CheckOutcome:
    """Build the automaton while searching every state for conflicts.

    By default the construction stops at the first conflicting state;
    under ``options.complete`` the whole reachable space is explored and
    every conflicting state is reported, ordered by trace length and state
    id.  Exhausted budgets yield an inconclusive verdict over the partial
    automaton.
    """
    flagged: list[Clash] = []
    states: list[int] = []

    def on_state(sid: int, formula: Formula, groups: frozenset) -> bool:
        clash = search_conflicts(groups, spec.conflicts)
        if clash is None:
            return False
        flagged.append(clash)
        states.append(sid)
        return True

    exhausted: str | None = None
    try:
        automaton = construct(spec, options, on_state)
    except BudgetExceeded as exc:
        automaton = exc.automaton
        exhausted = exc.reason

    reports = []
    for sid, (left, right, kind) in zip(states, flagged):
        reports.append(
            ConflictReport(
                state=sid,
                kind=kind,
                left=left,
                right=right,
                trace=trace_to(automaton, sid),
                left_clause=render_tag(left),
                right_clause=render_tag(right),
            )
        )
    reports.sort(key=lambda r: (len(r.trace), r.state))

    if exhausted is not None:
        verdict = Verdict(VerdictKind.INCONCLUSIVE, tuple(reports), exhausted)
    elif reports:
        verdict = Verdict(VerdictKind.CONFLICTS, tuple(reports))
    else:
        verdict = Verdict(VerdictKind.CONFLICT_FREE)
    return CheckOutcome(verdict, automaton)


def check(spec: ContractSpec, options: BuildOptions = BuildOptions()) -> Verdict:
    return run_check(spec, options).verdict
