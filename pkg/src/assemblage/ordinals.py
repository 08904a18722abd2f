"""Von Neumann ordinals, finite well-orders, order types and recursion.

An ordinal is a transitive set whose transitive proper subsets are all
elements; over hereditarily finite sets these are exactly the numerals
0 = {} and n+ = n union {n}.  The module provides the transitive/decent
predicates, the fast characterization of ordinals (transitive with all
elements ordinals) alongside the literal definition as a cross-checking
oracle, successors, suprema, membership trichotomy, order types of
finite well-orders, cardinals as least equipotent ordinals, recursion
along a well-order, arithmetic defined by that recursion, and finite
lexicographic products.
"""

from __future__ import annotations

from enum import Enum
from itertools import product as iter_product
from typing import Callable, Optional, Sequence

from .hf import (
    EMPTY,
    HfSet,
    apply_graph,
    graph_from_pairs,
    graph_pairs,
    make_set,
    singleton,
)

__all__ = [
    "Comparison",
    "FiniteOrder",
    "OrdinalError",
    "OrderError",
    "TransfiniteRecursionError",
    "is_transitive_set",
    "is_decent",
    "is_ordinal",
    "is_ordinal_by_definition",
    "successor",
    "numeral",
    "numeral_value",
    "ordinal_compare",
    "sup_ordinals",
    "epsilon_order",
    "is_order",
    "is_total_order",
    "is_well_order",
    "least_of",
    "segment",
    "order_type",
    "cardinal_of",
    "transfinite_recurse",
    "nat_arith",
    "lex_product",
    "tuple_graph",
    "tuple_values",
]


class OrdinalError(ValueError):
    """An argument expected to be an ordinal is not one."""


class OrderError(ValueError):
    """An argument expected to be a (well-)order is not one."""


class TransfiniteRecursionError(ValueError):
    """The step function failed on some initial segment."""

    def __init__(self, position: HfSet, segment: tuple, message: str):
        super().__init__(message)
        self.position = position
        self.segment = segment


class Comparison(Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def __str__(self) -> str:  # pragma: no cover - display convenience
        return self.value


def is_transitive_set(x: HfSet) -> bool:
    """Every element is also a subset."""
    return all(e.issubset(x) for e in x)


def is_decent(x: HfSet) -> bool:
    """No element of x contains itself."""
    return all(e not in e for e in x)


def is_ordinal(x: HfSet) -> bool:
    """Transitive with every element an ordinal (the fast characterization)."""
    memo: dict[HfSet, bool] = {}

    def go(s: HfSet) -> bool:
        got = memo.get(s)
        if got is None:
            got = is_transitive_set(s) and all(go(e) for e in s)
            memo[s] = got
        return got

    return go(x)


def _proper_subsets(x: HfSet):
    elems = x.elements
    n = len(elems)
    for mask in range((1 << n) - 1):
        yield make_set(elems[i] for i in range(n) if mask >> i & 1)


def is_ordinal_by_definition(x: HfSet) -> bool:
    """The literal definition: every transitive proper subset is an element.

    Enumerates all proper subsets, so it only suits small sets; it exists
    as an independent oracle for :func:`is_ordinal`.
    """
    return all(
        s in x for s in _proper_subsets(x) if is_transitive_set(s)
    )


def successor(x: HfSet) -> HfSet:
    """x union {x}; differs from x whenever x is decent."""
    return x.union(singleton(x))


# Cache writes are idempotent (extensionally equal values per key), so
# concurrent callers can only ever race to store the same set.
_NUMERALS: dict[int, HfSet] = {0: EMPTY}


def numeral(n: int) -> HfSet:
    """The von Neumann numeral n = {0, ..., n-1}."""
    if n < 0:
        raise OrdinalError("numerals are naturals")
    got = _NUMERALS.get(n)
    if got is None:
        got = successor(numeral(n - 1))
        _NUMERALS[n] = got
    return got


def numeral_value(x: HfSet) -> int:
    """The natural a finite ordinal denotes."""
    if not is_ordinal(x):
        raise OrdinalError(f"not an ordinal: {x}")
    return x.cardinality


def ordinal_compare(a: HfSet, b: HfSet) -> Comparison:
    """Trichotomy: Less means membership, equivalently strict inclusion."""
    for arg in (a, b):
        if not is_ordinal(arg):
            raise OrdinalError(f"not an ordinal: {arg}")
    if a == b:
        return Comparison.EQUAL
    return Comparison.LESS if a in b else Comparison.GREATER


def sup_ordinals(e: HfSet) -> HfSet:
    """The union, i.e. the least upper bound under inclusion."""
    out: list[HfSet] = []
    for a in e:
        if not is_ordinal(a):
            raise OrdinalError(f"not an ordinal: {a}")
        out.extend(a.elements)
    return make_set(out)


class FiniteOrder:
    """A carrier set with a relation graph asserted to order it."""

    __slots__ = ("carrier", "relation", "_pairs")

    def __init__(self, carrier: HfSet, relation: HfSet):
        pairs = graph_pairs(relation)
        members = set(carrier.elements)
        for a, b in pairs:
            if a not in members or b not in members:
                raise OrderError(f"relation pair ({a}, {b}) escapes the carrier")
        self.carrier = carrier
        self.relation = relation
        self._pairs = frozenset(pairs)

    def leq(self, a: HfSet, b: HfSet) -> bool:
        return (a, b) in self._pairs

    def lt(self, a: HfSet, b: HfSet) -> bool:
        return a != b and (a, b) in self._pairs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteOrder):
            return NotImplemented
        return self.carrier == other.carrier and self.relation == other.relation

    def __hash__(self) -> int:
        return hash((self.carrier, self.relation))

    def __repr__(self) -> str:
        return f"FiniteOrder({self.carrier}, {self.relation})"


def is_order(o: FiniteOrder) -> bool:
    """Reflexive on the carrier, antisymmetric, transitive."""
    elems = o.carrier.elements
    if not all(o.leq(x, x) for x in elems):
        return False
    for x, y in o._pairs:
        if x != y and (y, x) in o._pairs:
            return False
    for x, y in o._pairs:
        for y2, z in o._pairs:
            if y == y2 and (x, z) not in o._pairs:
                return False
    return True


def is_total_order(o: FiniteOrder) -> bool:
    elems = o.carrier.elements
    return is_order(o) and all(
        o.leq(x, y) or o.leq(y, x) for x in elems for y in elems
    )


def least_of(o: FiniteOrder, subset: Sequence[HfSet]) -> Optional[HfSet]:
    """The least element of a subset, or None when there is none."""
    for candidate in subset:
        if all(o.leq(candidate, other) for other in subset):
            return candidate
    return None


_EXHAUSTIVE_WELL_ORDER_CAP = 12


def is_well_order(o: FiniteOrder) -> bool:
    """Every nonempty subset has a least element.

    Up to 12 carrier elements this enumerates all subsets literally;
    beyond that it checks totality, which is equivalent on finite
    carriers (an incomparable pair is itself a subset without a least,
    and any nonempty subset of a finite total order has one).
    """
    if not is_order(o):
        raise OrderError("relation is not an order on the carrier")
    elems = o.carrier.elements
    n = len(elems)
    if n > _EXHAUSTIVE_WELL_ORDER_CAP:
        return is_total_order(o)
    for mask in range(1, 1 << n):
        subset = [elems[i] for i in range(n) if mask >> i & 1]
        if least_of(o, subset) is None:
            return False
    return True


def segment(o: FiniteOrder, x: HfSet) -> HfSet:
    """The initial segment {y | y < x}."""
    if x not in o.carrier:
        raise OrderError(f"{x} is not in the carrier")
    return make_set(y for y in o.carrier if o.lt(y, x))


def _ascending(o: FiniteOrder) -> list[HfSet]:
    """Carrier elements in increasing order, by repeated least extraction."""
    if not is_order(o):
        raise OrderError("relation is not an order on the carrier")
    remaining = list(o.carrier.elements)
    out: list[HfSet] = []
    while remaining:
        least = least_of(o, remaining)
        if least is None:
            raise OrderError("not a well-order: a subset has no least element")
        out.append(least)
        remaining = [y for y in remaining if y != least]
    return out


def transfinite_recurse(
    o: FiniteOrder, phi: Callable[[dict], object]
) -> dict[HfSet, object]:
    """The unique f with f(x) = phi(f restricted to the segment below x).

    Evaluates in increasing order, memoizing values; phi receives the
    restriction as a fresh dict keyed by carrier elements.
    """
    values: dict[HfSet, object] = {}
    for x in _ascending(o):
        restriction = {y: values[y] for y in values if o.lt(y, x)}
        try:
            values[x] = phi(restriction)
        except Exception as exc:
            raise TransfiniteRecursionError(
                x,
                tuple(restriction),
                f"step function failed at {x}: {exc}",
            ) from exc
    return values


def epsilon_order(alpha: HfSet) -> FiniteOrder:
    """The inclusion order on an ordinal; a well-order with segments S_x = x."""
    if not is_ordinal(alpha):
        raise OrdinalError(f"not an ordinal: {alpha}")
    pairs = [
        (x, y) for x in alpha for y in alpha if x == y or x in y
    ]
    return FiniteOrder(alpha, graph_from_pairs(pairs))


def order_type(o: FiniteOrder) -> HfSet:
    """The unique ordinal isomorphic to a finite well-order.

    Computed by recursion: each element maps to the set of values below
    it, and the type is the set of all values.
    """
    if not is_well_order(o):
        raise OrderError("order type needs a well-order")
    values = transfinite_recurse(o, lambda seg: make_set(seg.values()))
    return make_set(values.values())


def cardinal_of(x: HfSet) -> HfSet:
    """The least ordinal equipotent to x: the numeral of its cardinality."""
    return numeral(x.cardinality)


def _nat_recurse(n: int, base: object, step: Callable[[object], object]) -> object:
    """u_0 = base, u_{k+1} = step(u_k), run along the numeral (n+1)."""
    o = epsilon_order(numeral(n + 1))

    def phi(seg: dict) -> object:
        if not seg:
            return base
        predecessor = max(seg, key=lambda s: s.cardinality)
        return step(seg[predecessor])

    return transfinite_recurse(o, phi)[numeral(n)]


def nat_arith(op: str, m: int, n: int) -> int:
    """Addition, multiplication and exponentiation by recursion.

    Each operation is one recursion along the numeral well-order: the
    step for addition is the successor, for multiplication the addition
    of m, for exponentiation the multiplication by m.  Values stay
    native naturals; materializing them as von Neumann sets would make
    even modest powers intractable.
    """
    if m < 0 or n < 0:
        raise OrdinalError("naturals only")
    if op == "add":
        return _nat_recurse(n, m, lambda u: u + 1)
    if op == "mul":
        return _nat_recurse(n, 0, lambda u: u + m)
    if op == "pow":
        return _nat_recurse(n, 1, lambda u: u * m)
    raise ValueError(f"unknown operation: {op!r}")


def tuple_graph(values: Sequence[HfSet]) -> HfSet:
    """A finite sequence as a functional graph on numeral indices."""
    return graph_from_pairs((numeral(i), v) for i, v in enumerate(values))


def tuple_values(t: HfSet, length: int) -> list[HfSet]:
    """Recover the coordinates of a sequence graph of the given length."""
    if t.cardinality != length:
        raise OrderError(f"expected a sequence of length {length}: {t}")
    return [apply_graph(t, numeral(i)) for i in range(length)]


def lex_product(factors: Sequence[FiniteOrder]) -> FiniteOrder:
    """The lexicographic order on the product of the factor carriers.

    Product elements are functional graphs on the numeral indices; with
    no factors the carrier is the one-point set {{}} (the empty
    function).  Two distinct tuples compare by strict comparison at the
    least index where they differ; the result is always an order, and is
    a well-order exactly when every factor is.
    """
    for factor in factors:
        if not is_order(factor):
            raise OrderError("every lexicographic factor must be an order")
    k = len(factors)
    columns = [list(f.carrier.elements) for f in factors]
    tuples = [list(combo) for combo in iter_product(*columns)] if k else [[]]
    graphs = [tuple_graph(combo) for combo in tuples]
    carrier = make_set(graphs)

    def lex_leq(xs: Sequence[HfSet], ys: Sequence[HfSet]) -> bool:
        for i in range(k):
            if xs[i] != ys[i]:
                return factors[i].lt(xs[i], ys[i])
        return True

    pairs = []
    for xs, xg in zip(tuples, graphs):
        for ys, yg in zip(tuples, graphs):
            if lex_leq(xs, ys):
                pairs.append((xg, yg))
    return FiniteOrder(carrier, graph_from_pairs(pairs))
