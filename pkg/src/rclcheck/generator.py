"""Seeded random contract generation for testing and benchmarks.

Contracts are drawn by recursive descent over the clause grammar; the same
seed always yields the same spec, so failures replay exactly.
"""
from __future__ import annotations

import random

from .formula import (
    Atom,
    Choice,
    Concurrent,
    ConflictRelations,
    ContractSpec,
    Dynamic,
    Formula,
    GLOBAL,
    Negation,
    Obligation,
    ONE,
    Permission,
    Prohibition,
    Relativization,
    Sequence,
    Star,
    TOP,
    ZERO,
    conj,
    xchoice,
)

_REPARATION_PROB = 0.25
_PREDEF_PROB = 0.25


class _Draw:
    def __init__(self, rng: random.Random, individuals: list[str], actions: list[str]):
        self.rng = rng
        self.individuals = individuals
        self.actions = actions

    def relativization(self) -> Relativization:
        shape = self.rng.choice(("global", "performer", "directed"))
        if shape == "global":
            return GLOBAL
        if shape == "performer":
            return Relativization(self.rng.choice(self.individuals))
        sender = self.rng.choice(self.individuals)
        receiver = self.rng.choice(self.individuals)
        return Relativization(sender, receiver)

    def action_expr(self, depth: int, trigger: bool):
        roll = self.rng.random()
        if depth <= 1 or roll < 0.62:
            special = self.rng.random()
            if special < 0.02:
                return ZERO
            if special < 0.04:
                return ONE
            atom = Atom(self.rng.choice(self.actions))
            if trigger and self.rng.random() < 0.10:
                atom = Negation(atom)
            return atom
        if trigger and roll < 0.70:
            return Star(self.action_expr(depth - 1, trigger))
        ctor = self.rng.choice((Concurrent, Sequence, Choice))
        return ctor(self.action_expr(depth - 1, trigger), self.action_expr(depth - 1, trigger))

    def reparation(self, depth: int) -> Formula | None:
        if self.rng.random() < _REPARATION_PROB:
            return self.formula(max(depth - 1, 1))
        return None

    def deontic(self, depth: int, op: str | None = None) -> Formula:
        op = op or self.rng.choice(("O", "O", "F", "F", "P"))
        rel = self.relativization()
        action = self.action_expr(depth, trigger=False)
        if op == "O":
            return Obligation(rel, action, self.reparation(depth))
        if op == "F":
            return Prohibition(rel, action, self.reparation(depth))
        return Permission(rel, action)

    def formula(self, depth: int) -> Formula:
        roll = self.rng.random()
        if depth <= 1 or roll < 0.40:
            return self.deontic(depth)
        if roll < 0.70:
            body = self.formula(depth - 1)
            return Dynamic(self.relativization(), self.action_expr(depth - 1, trigger=True), body)
        if roll < 0.90:
            return conj(self.formula(depth - 1), self.formula(depth - 1))
        if roll < 0.98:
            family = self.rng.choice(("O", "P"))
            branches = [
                self.deontic(depth - 1, family)
                for _ in range(self.rng.choice((2, 2, 3)))
            ]
            return xchoice(*branches)
        return TOP


def generate(
    *,
    individuals: int,
    actions: int,
    clauses: int,
    max_depth: int,
    seed: int,
) -> ContractSpec:
    """Draw a random contract over pools of the given sizes.

    Identical parameters and seed always produce the same spec; the
    extracted alphabet is a subset of the pools.
    """
    if min(individuals, actions, clauses, max_depth) < 1:
        raise ValueError("all generation parameters must be at least 1")
    rng = random.Random(seed)
    ind_pool = [f"i{k}" for k in range(1, individuals + 1)]
    act_pool = [f"a{k}" for k in range(1, actions + 1)]
    draw = _Draw(rng, ind_pool, act_pool)

    conflicts = ConflictRelations()
    if rng.random() < _PREDEF_PROB:
        def pick_pairs() -> list[tuple[str, str]]:
            count = rng.choice((0, 1, 1, 2))
            out = []
            for _ in range(count):
                a, b = rng.choice(act_pool), rng.choice(act_pool)
                if a != b:
                    out.append((a, b))
            return out

        conflicts = ConflictRelations.make(pick_pairs(), pick_pairs())

    clause_list = [draw.formula(max_depth) for _ in range(clauses)]
    return ContractSpec.from_clauses(clause_list, conflicts)
