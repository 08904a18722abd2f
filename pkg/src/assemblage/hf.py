"""Hereditarily finite sets with extensional equality, couples and graphs.

Sets are stored in a canonical form: duplicate-free element tuples,
totally ordered by (rank, cardinality, lexicographic on the ordered
elements).  Equal canonical forms coincide with extensional equality, so
``==`` and hashing are structural and order-insensitive.

On top of the sets sit Kuratowski couples, cartesian products, graphs
(sets of couples), correspondences, and the equivalence-graph calculus:
the two characterizations via composition and inversion, transitive
closure to the least equivalence graph, and quotients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Iterator, Mapping, Optional

__all__ = [
    "HfSet",
    "EMPTY",
    "make_set",
    "singleton",
    "pair",
    "couple",
    "decouple",
    "is_couple",
    "product",
    "powerset",
    "union_all",
    "diagonal",
    "graph_pairs",
    "graph_from_pairs",
    "graph_inverse",
    "graph_compose",
    "graph_image",
    "graph_preimage",
    "pr1_set",
    "pr2_set",
    "is_functional",
    "apply_graph",
    "Correspondence",
    "EquivalenceReport",
    "is_equivalence_graph",
    "equivalence_check",
    "equivalence_closure",
    "quotient",
    "parse_hf",
    "CoupleShapeError",
    "GraphShapeError",
    "ApplyDomainError",
    "EquivalenceError",
    "HfSyntaxError",
]


class CoupleShapeError(ValueError):
    """The set does not have the Kuratowski couple shape."""


class GraphShapeError(ValueError):
    """A graph argument contains an element that is not a couple."""


class ApplyDomainError(ValueError):
    """Functional application outside the graph's set of definition."""


class EquivalenceError(ValueError):
    """An operation required an equivalence graph and did not get one."""


class HfSyntaxError(ValueError):
    """A set literal failed to parse."""


class HfSet:
    """A hereditarily finite set in canonical form."""

    __slots__ = ("elements", "rank", "_hash")

    elements: tuple["HfSet", ...]
    rank: int

    def __init__(self, elements: Iterable["HfSet"] = ()):
        elems = list(elements)
        for e in elems:
            if not isinstance(e, HfSet):
                raise TypeError(f"elements must be HfSet, got {type(e).__name__}")
        elems.sort(key=_CANONICAL_KEY)
        canonical: list[HfSet] = []
        for e in elems:
            if not canonical or _cmp(canonical[-1], e) != 0:
                canonical.append(e)
        self.elements = tuple(canonical)
        self.rank = 1 + max((e.rank for e in canonical), default=-1)
        self._hash = hash((self.rank, tuple(e._hash for e in canonical)))

    @property
    def cardinality(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator["HfSet"]:
        return iter(self.elements)

    def __bool__(self) -> bool:
        return bool(self.elements)

    def __contains__(self, item: "HfSet") -> bool:
        return any(_cmp(item, e) == 0 for e in self.elements)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, HfSet):
            return NotImplemented
        return self._hash == other._hash and _cmp(self, other) == 0

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "HfSet") -> bool:
        return _cmp(self, other) < 0

    def __le__(self, other: "HfSet") -> bool:
        return _cmp(self, other) <= 0

    def __gt__(self, other: "HfSet") -> bool:
        return _cmp(self, other) > 0

    def __ge__(self, other: "HfSet") -> bool:
        return _cmp(self, other) >= 0

    def issubset(self, other: "HfSet") -> bool:
        return all(e in other for e in self.elements)

    def union(self, other: "HfSet") -> "HfSet":
        return HfSet(self.elements + other.elements)

    def intersection(self, other: "HfSet") -> "HfSet":
        return HfSet(e for e in self.elements if e in other)

    def difference(self, other: "HfSet") -> "HfSet":
        return HfSet(e for e in self.elements if e not in other)

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"

    def __repr__(self) -> str:
        return f"HfSet({self})"


def _cmp(a: HfSet, b: HfSet) -> int:
    """The canonical total order: rank, then cardinality, then elements."""
    if a is b:
        return 0
    if a.rank != b.rank:
        return -1 if a.rank < b.rank else 1
    if len(a.elements) != len(b.elements):
        return -1 if len(a.elements) < len(b.elements) else 1
    for x, y in zip(a.elements, b.elements):
        c = _cmp(x, y)
        if c:
            return c
    return 0


_CANONICAL_KEY = cmp_to_key(_cmp)

EMPTY = HfSet()


def make_set(elements: Iterable[HfSet]) -> HfSet:
    """The set of the given elements; order and duplicates are immaterial."""
    return HfSet(elements)


def singleton(x: HfSet) -> HfSet:
    return HfSet((x,))


def pair(x: HfSet, y: HfSet) -> HfSet:
    return HfSet((x, y))


def union_all(sets: Iterable[HfSet]) -> HfSet:
    out: list[HfSet] = []
    for s in sets:
        out.extend(s.elements)
    return HfSet(out)


def powerset(x: HfSet) -> HfSet:
    subsets = [EMPTY]
    for e in x.elements:
        subsets.extend(HfSet(s.elements + (e,)) for s in list(subsets))
    return HfSet(subsets)


def couple(x: HfSet, y: HfSet) -> HfSet:
    """The Kuratowski couple {{x},{x,y}}."""
    return pair(singleton(x), pair(x, y))


def decouple(z: HfSet) -> tuple[HfSet, HfSet]:
    """Inverse of :func:`couple`; rejects sets of any other shape."""
    elems = z.elements
    if len(elems) == 1:
        inner = elems[0]
        if len(inner) == 1:
            return inner.elements[0], inner.elements[0]
        raise CoupleShapeError(f"not a couple: {z}")
    if len(elems) == 2:
        first, second = elems
        # Canonical order puts the singleton {x} before the pair {x,y}.
        if len(first) == 1 and len(second) == 2:
            x = first.elements[0]
            a, b = second.elements
            if a == x:
                return x, b
            if b == x:
                return x, a
    raise CoupleShapeError(f"not a couple: {z}")


def is_couple(z: HfSet) -> bool:
    try:
        decouple(z)
        return True
    except CoupleShapeError:
        return False


def product(a: HfSet, b: HfSet) -> HfSet:
    """The cartesian product as a set of couples."""
    return HfSet(couple(x, y) for x in a for y in b)


def diagonal(e: HfSet) -> HfSet:
    return HfSet(couple(x, x) for x in e)


def graph_pairs(g: HfSet) -> tuple[tuple[HfSet, HfSet], ...]:
    """Decouple every element; the shape error names the offender."""
    pairs = []
    for z in g.elements:
        try:
            pairs.append(decouple(z))
        except CoupleShapeError:
            raise GraphShapeError(f"graph element is not a couple: {z}")
    return tuple(pairs)


def graph_from_pairs(pairs: Iterable[tuple[HfSet, HfSet]]) -> HfSet:
    return HfSet(couple(x, y) for x, y in pairs)


def graph_inverse(g: HfSet) -> HfSet:
    return graph_from_pairs((y, x) for x, y in graph_pairs(g))


def graph_compose(h: HfSet, g: HfSet) -> HfSet:
    """The graph of g followed by h: pairs (x, z) with x g y and y h z."""
    hp = graph_pairs(h)
    out = []
    for x, y in graph_pairs(g):
        for y2, z in hp:
            if y == y2:
                out.append((x, z))
    return graph_from_pairs(out)


def graph_image(g: HfSet, x: HfSet) -> HfSet:
    return HfSet(b for a, b in graph_pairs(g) if a in x)


def graph_preimage(g: HfSet, y: HfSet) -> HfSet:
    return HfSet(a for a, b in graph_pairs(g) if b in y)


def pr1_set(g: HfSet) -> HfSet:
    return HfSet(a for a, _ in graph_pairs(g))


def pr2_set(g: HfSet) -> HfSet:
    return HfSet(b for _, b in graph_pairs(g))


def is_functional(g: HfSet) -> bool:
    """At most one partner per first coordinate."""
    seen: dict[HfSet, HfSet] = {}
    for a, b in graph_pairs(g):
        if a in seen and seen[a] != b:
            return False
        seen[a] = b
    return True


def apply_graph(g: HfSet, x: HfSet) -> HfSet:
    """The unique partner of ``x`` in a functional graph."""
    if not is_functional(g):
        raise ApplyDomainError("graph is not functional")
    for a, b in graph_pairs(g):
        if a == x:
            return b
    raise ApplyDomainError(f"{x} is outside the set of definition")


@dataclass(frozen=True)
class Correspondence:
    """A graph packaged with its source and target sets."""

    graph: HfSet
    source: HfSet
    target: HfSet

    def __post_init__(self) -> None:
        if not pr1_set(self.graph).issubset(self.source):
            raise GraphShapeError("first projection escapes the source")
        if not pr2_set(self.graph).issubset(self.target):
            raise GraphShapeError("second projection escapes the target")

    def image(self, x: HfSet) -> HfSet:
        return graph_image(self.graph, x)

    @property
    def domain(self) -> HfSet:
        return pr1_set(self.graph)

    @property
    def values(self) -> HfSet:
        return pr2_set(self.graph)


# Equivalence calculus.  Internally graphs become frozensets of pairs so
# the exhaustive checks over all relations on a small set stay cheap.


def _pairs_of(g: HfSet) -> frozenset:
    return frozenset(graph_pairs(g))


def _compose_pairs(h: frozenset, g: frozenset) -> frozenset:
    by_first: dict[HfSet, list[HfSet]] = {}
    for y, z in h:
        by_first.setdefault(y, []).append(z)
    out = set()
    for x, y in g:
        for z in by_first.get(y, ()):
            out.add((x, z))
    return frozenset(out)


def _inverse_pairs(g: frozenset) -> frozenset:
    return frozenset((y, x) for x, y in g)


@dataclass(frozen=True)
class EquivalenceReport:
    """Both characterizations of an equivalence graph, plus the verdict.

    Condition (a) is: both projections inside the carrier, the diagonal
    contained in the graph, the graph closed under composition with
    itself, and equal to its inverse.  Condition (b) replaces the last
    two by G o G^-1 o G contained in G.  ``verdict`` is the direct
    definitional check; all three always agree.
    """

    projections_in_carrier: bool
    contains_diagonal: bool
    compose_contained: bool
    inverse_equal: bool
    double_compose_contained: bool
    condition_a: bool
    condition_b: bool
    verdict: bool

    @property
    def agree(self) -> bool:
        return self.condition_a == self.condition_b == self.verdict


def equivalence_check(e: HfSet, g: HfSet) -> EquivalenceReport:
    """Evaluate both equivalence-graph criteria over the carrier ``e``."""
    pairs = _pairs_of(g)
    carrier = set(e.elements)
    proj_ok = all(x in carrier and y in carrier for x, y in pairs)
    diag = frozenset((x, x) for x in carrier)
    refl = diag <= pairs
    composed = _compose_pairs(pairs, pairs)
    comp_in = composed <= pairs
    inv = _inverse_pairs(pairs)
    sym = inv == pairs
    double = _compose_pairs(pairs, _compose_pairs(inv, pairs))
    double_in = double <= pairs
    condition_a = proj_ok and refl and comp_in and sym
    condition_b = proj_ok and refl and double_in
    verdict = (
        proj_ok
        and refl
        and inv == pairs
        and all((x, z) in pairs for x, y in pairs for y2, z in pairs if y == y2)
    )
    return EquivalenceReport(
        projections_in_carrier=proj_ok,
        contains_diagonal=refl,
        compose_contained=comp_in,
        inverse_equal=sym,
        double_compose_contained=double_in,
        condition_a=condition_a,
        condition_b=condition_b,
        verdict=verdict,
    )


def is_equivalence_graph(e: HfSet, g: HfSet) -> bool:
    return equivalence_check(e, g).verdict


def equivalence_closure(e: HfSet, g: HfSet) -> HfSet:
    """Least equivalence graph on ``e`` containing the given graph.

    Saturates the union of the graph, its inverse and the diagonal under
    composition; the fixed point arrives within |e| rounds.
    """
    pairs = _pairs_of(g)
    carrier = set(e.elements)
    if not all(x in carrier and y in carrier for x, y in pairs):
        raise GraphShapeError("graph is not contained in the carrier square")
    current = pairs | _inverse_pairs(pairs) | frozenset((x, x) for x in carrier)
    while True:
        grown = current | _compose_pairs(current, current)
        if grown == current:
            return graph_from_pairs(current)
        current = grown


def quotient(e: HfSet, g: HfSet) -> HfSet:
    """The set of equivalence classes; the class of x is the cut g<{x}>."""
    if not is_equivalence_graph(e, g):
        raise EquivalenceError("quotient requires an equivalence graph")
    pairs = graph_pairs(g)
    classes = []
    for x in e.elements:
        classes.append(HfSet(b for a, b in pairs if a == x))
    return HfSet(classes)


def parse_hf(text: str, env: Optional[Mapping[str, HfSet]] = None) -> HfSet:
    """Parse a set literal like ``{{},{{}}}``; names resolve via ``env``."""
    value, rest = _parse_hf_prefix(text.strip(), env or {})
    if rest.strip():
        raise HfSyntaxError(f"trailing input after set literal: {rest.strip()!r}")
    return value


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _parse_hf_prefix(
    text: str, env: Mapping[str, HfSet]
) -> tuple[HfSet, str]:
    text = text.lstrip()
    if not text:
        raise HfSyntaxError("empty set literal")
    if text[0] == "{":
        rest = text[1:].lstrip()
        elements = []
        if rest.startswith("}"):
            return HfSet(), rest[1:]
        while True:
            value, rest = _parse_hf_prefix(rest, env)
            elements.append(value)
            rest = rest.lstrip()
            if rest.startswith(","):
                rest = rest[1:]
                continue
            if rest.startswith("}"):
                return HfSet(elements), rest[1:]
            raise HfSyntaxError(f"expected ',' or '}}' in set literal at {rest[:12]!r}")
    m = _NAME_RE.match(text)
    if m:
        name = m.group(0)
        if name not in env:
            raise HfSyntaxError(f"unknown name in set literal: {name!r}")
        return env[name], text[m.end():]
    raise HfSyntaxError(f"unexpected character in set literal: {text[0]!r}")
