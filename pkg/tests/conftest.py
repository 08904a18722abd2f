"""Shared deterministic generators for the test suite."""

from __future__ import annotations

import random

from assemblage.assembly import Assembly, Disj, Letter, Neg, Rel, tau_bind
from assemblage.expander import (
    AndE,
    CoupleE,
    EmptyE,
    EnumE,
    EqE,
    ExistsE,
    Expression,
    ForallE,
    IffE,
    ImpliesE,
    InE,
    LetterE,
    NeqE,
    NotE,
    NotInE,
    NumeralE,
    OrE,
    SetOfE,
    SingletonE,
    SubsetE,
    SubstE,
    SuccE,
    UnionE,
)
from assemblage.hf import HfSet, graph_from_pairs, make_set, powerset
from assemblage.ordinals import FiniteOrder, numeral

LETTERS = ("x", "y", "z", "t", "u", "v")


def random_assembly(rng: random.Random, depth: int = 4) -> Assembly:
    """A closed assembly; tau nodes arise by binding a letter."""

    def go(d: int) -> Assembly:
        if d <= 0 or rng.random() < 0.3:
            return Letter(rng.choice(LETTERS))
        kind = rng.randrange(5)
        if kind == 0:
            return Neg(go(d - 1))
        if kind == 1:
            return Disj(go(d - 1), go(d - 1))
        if kind == 2:
            return Rel("eq", go(d - 1), go(d - 1))
        if kind == 3:
            return Rel("elem", go(d - 1), go(d - 1))
        return tau_bind(rng.choice(LETTERS), go(d - 1))

    return go(depth)


def random_term(rng: random.Random, depth: int) -> Expression:
    if depth <= 0 or rng.random() < 0.45:
        return rng.choice(
            [
                LetterE(rng.choice(LETTERS)),
                EmptyE(),
                NumeralE(rng.randrange(2)),
            ]
        )
    kind = rng.randrange(7)
    if kind == 0:
        return EnumE(
            tuple(random_term(rng, depth - 1) for _ in range(rng.randrange(1, 4)))
        )
    if kind == 1:
        return SingletonE(random_term(rng, depth - 1))
    if kind == 2:
        return CoupleE(random_term(rng, depth - 1), random_term(rng, depth - 1))
    if kind == 3:
        return UnionE(random_term(rng, depth - 1), random_term(rng, depth - 1))
    if kind == 4:
        return SuccE(random_term(rng, depth - 1))
    if kind == 5:
        return SetOfE(rng.choice(LETTERS), random_relation(rng, depth - 1))
    return SubstE(
        random_term(rng, depth - 1),
        rng.choice(LETTERS),
        random_term(rng, depth - 1),
    )


def random_relation(rng: random.Random, depth: int) -> Expression:
    if depth <= 0 or rng.random() < 0.35:
        atoms = [EqE, InE, NotInE, NeqE]
        cls = rng.choice(atoms)
        return cls(
            LetterE(rng.choice(LETTERS)), LetterE(rng.choice(LETTERS))
        )
    kind = rng.randrange(8)
    if kind == 0:
        return NotE(random_relation(rng, depth - 1))
    if kind in (1, 2):
        cls = rng.choice([OrE, AndE, ImpliesE, IffE])
        return cls(random_relation(rng, depth - 1), random_relation(rng, depth - 1))
    if kind == 3:
        return SubsetE(random_term(rng, depth - 1), random_term(rng, depth - 1))
    if kind in (4, 5):
        cls = rng.choice([ForallE, ExistsE])
        return cls(rng.choice(LETTERS), random_relation(rng, depth - 1))
    cls = rng.choice([EqE, InE])
    return cls(random_term(rng, depth - 1), random_term(rng, depth - 1))


def random_expression(rng: random.Random, depth: int = 3) -> Expression:
    if rng.random() < 0.5:
        return random_term(rng, depth)
    return random_relation(rng, depth)


def subset_order(carrier: HfSet) -> FiniteOrder:
    """The inclusion order on a set of sets."""
    elems = carrier.elements
    pairs = [(a, b) for a in elems for b in elems if a.issubset(b)]
    return FiniteOrder(carrier, graph_from_pairs(pairs))


def powerset_order(base: HfSet) -> FiniteOrder:
    return subset_order(powerset(base))


def chain_order(length: int) -> FiniteOrder:
    """The numerals 0..length-1 under their usual order."""
    elems = [numeral(k) for k in range(length)]
    pairs = [
        (a, b)
        for a in elems
        for b in elems
        if a.cardinality <= b.cardinality
    ]
    return FiniteOrder(make_set(elems), graph_from_pairs(pairs))


def random_hf(rng: random.Random, rank: int = 2, width: int = 3) -> HfSet:
    if rank <= 0 or rng.random() < 0.3:
        return make_set(())
    return make_set(
        random_hf(rng, rank - 1, width) for _ in range(rng.randrange(width + 1))
    )
