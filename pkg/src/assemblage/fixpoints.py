"""Fixed points on finite ordered sets and the classical constructions.

Covers the two-sided fixed-point extrema of a monotone self-map (the
infimum of the deflationary points and the supremum of the inflationary
ones), the lattice of all fixed points with its complete-lattice
structure, the constructive Cantor-Bernstein bijection through the least
fixed point of X -> E - g<F - f<X>>, Cantor's diagonal witness, and the
uncovered tuple behind Koenig's strict inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .hf import HfSet, graph_from_pairs, make_set
from .ordinals import FiniteOrder, OrderError, is_order, tuple_graph, tuple_values

__all__ = [
    "MonotoneMap",
    "MonotoneError",
    "BoundMissingError",
    "InjectionError",
    "InjectionPair",
    "CantorBernsteinWitness",
    "FixedPointReport",
    "KoenigWitness",
    "glb_of",
    "lub_of",
    "is_lattice",
    "tarski_extrema",
    "fixed_point_lattice",
    "cantor_bernstein",
    "cantor_diagonal",
    "koenig_uncovered",
]


class MonotoneError(ValueError):
    """The table is not a monotone total self-map of the carrier."""


class BoundMissingError(ValueError):
    """A required infimum or supremum does not exist; names the bound."""


class InjectionError(ValueError):
    """The maps of an injection pair are not total injections."""


def glb_of(o: FiniteOrder, subset: Sequence[HfSet]) -> Optional[HfSet]:
    """Greatest lower bound within the whole carrier, or None."""
    lower = [
        c for c in o.carrier if all(o.leq(c, s) for s in subset)
    ]
    for c in lower:
        if all(o.leq(other, c) for other in lower):
            return c
    return None


def lub_of(o: FiniteOrder, subset: Sequence[HfSet]) -> Optional[HfSet]:
    """Least upper bound within the whole carrier, or None."""
    upper = [
        c for c in o.carrier if all(o.leq(s, c) for s in subset)
    ]
    for c in upper:
        if all(o.leq(c, other) for other in upper):
            return c
    return None


def is_lattice(o: FiniteOrder) -> bool:
    """Every pair of carrier elements has a sup and an inf."""
    if not is_order(o):
        return False
    elems = o.carrier.elements
    for x in elems:
        for y in elems:
            if lub_of(o, (x, y)) is None or glb_of(o, (x, y)) is None:
                return False
    return True


class MonotoneMap:
    """A monotone self-map of a finite ordered set; checked on construction."""

    __slots__ = ("domain", "table")

    def __init__(self, domain: FiniteOrder, table: Mapping[HfSet, HfSet]):
        if not is_order(domain):
            raise MonotoneError("domain relation is not an order")
        carrier = set(domain.carrier.elements)
        if set(table) != carrier or not all(v in carrier for v in table.values()):
            raise MonotoneError("table is not a total self-map of the carrier")
        for x in carrier:
            for y in carrier:
                if domain.leq(x, y) and not domain.leq(table[x], table[y]):
                    raise MonotoneError(
                        f"not monotone: {x} <= {y} but images are not ordered"
                    )
        self.domain = domain
        self.table = dict(table)

    def __call__(self, x: HfSet) -> HfSet:
        return self.table[x]

    def fixed_points(self) -> list[HfSet]:
        return [x for x in self.domain.carrier if self.table[x] == x]


def tarski_extrema(m: MonotoneMap) -> tuple[HfSet, HfSet]:
    """The least and greatest fixed points of a monotone self-map.

    The least one is the infimum of the deflationary points {z | f(z) <= z},
    the greatest the supremum of the inflationary ones; on orders where
    one of the two bounds does not exist, the error says which.
    """
    o = m.domain
    deflating = [z for z in o.carrier if o.leq(m(z), z)]
    inflating = [z for z in o.carrier if o.leq(z, m(z))]
    v = glb_of(o, deflating)
    if v is None:
        raise BoundMissingError("the infimum of {z | f(z) <= z} does not exist")
    w = lub_of(o, inflating)
    if w is None:
        raise BoundMissingError("the supremum of {z | z <= f(z)} does not exist")
    if m(v) != v or m(w) != w:
        raise AssertionError("extrema are not fixed; monotonicity was violated")
    return v, w


def _restricted(m: MonotoneMap, members: Sequence[HfSet]) -> MonotoneMap:
    carrier = make_set(members)
    pairs = [
        (x, y) for x in members for y in members if m.domain.leq(x, y)
    ]
    order = FiniteOrder(carrier, graph_from_pairs(pairs))
    return MonotoneMap(order, {x: m.table[x] for x in members})


@dataclass
class FixedPointReport:
    """The fixed-point set of a monotone map and its lattice structure.

    ``suprema_verified``/``infima_verified`` count the nonempty subsets Y
    of P whose bounds within P were computed both by brute force and by
    the interval construction (the least fixed point of the restriction
    to [sup Y, top], dually for infima) with matching results.
    """

    fixed_points: list[HfSet]
    nonempty: bool
    complete_lattice: bool
    suprema_verified: int = 0
    infima_verified: int = 0
    failure: Optional[str] = None


_FULL_SUBSET_CAP = 10


def fixed_point_lattice(m: MonotoneMap) -> FixedPointReport:
    """Enumerate the fixed points and verify they form a complete lattice.

    Subsets of the fixed-point set are checked exhaustively up to a
    small cardinality and through binary bounds plus folding beyond it,
    which is equivalent on finite sets.
    """
    o = m.domain
    if not is_lattice(o):
        raise OrderError("fixed_point_lattice needs a finite lattice domain")
    points = m.fixed_points()
    report = FixedPointReport(points, bool(points), False)
    if not points:
        report.failure = "no fixed points"
        return report

    top = lub_of(o, list(o.carrier.elements))
    bottom = glb_of(o, list(o.carrier.elements))

    def sup_in_p(subset: Sequence[HfSet]) -> Optional[HfSet]:
        upper = [p for p in points if all(o.leq(y, p) for y in subset)]
        for candidate in upper:
            if all(o.leq(candidate, other) for other in upper):
                return candidate
        return None

    def inf_in_p(subset: Sequence[HfSet]) -> Optional[HfSet]:
        lower = [p for p in points if all(o.leq(p, y) for y in subset)]
        for candidate in lower:
            if all(o.leq(other, candidate) for other in lower):
                return candidate
        return None

    def sup_by_interval(subset: Sequence[HfSet]) -> HfSet:
        # Least fixed point of f restricted to [sup subset, top].
        base = lub_of(o, subset)
        members = [c for c in o.carrier if o.leq(base, c) and o.leq(c, top)]
        v, _ = tarski_extrema(_restricted(m, members))
        return v

    def inf_by_interval(subset: Sequence[HfSet]) -> HfSet:
        base = glb_of(o, subset)
        members = [c for c in o.carrier if o.leq(bottom, c) and o.leq(c, base)]
        _, w = tarski_extrema(_restricted(m, members))
        return w

    if len(points) <= _FULL_SUBSET_CAP:
        subsets = []
        n = len(points)
        for mask in range(1, 1 << n):
            subsets.append([points[i] for i in range(n) if mask >> i & 1])
    else:
        subsets = [[x, y] for x in points for y in points]
        subsets.append(list(points))

    for subset in subsets:
        sup_direct = sup_in_p(subset)
        inf_direct = inf_in_p(subset)
        if sup_direct is None or inf_direct is None:
            report.failure = "a subset of the fixed points lacks a bound"
            return report
        if sup_by_interval(subset) != sup_direct:
            report.failure = "interval construction disagrees on a supremum"
            return report
        if inf_by_interval(subset) != inf_direct:
            report.failure = "interval construction disagrees on an infimum"
            return report
        report.suprema_verified += 1
        report.infima_verified += 1

    report.complete_lattice = True
    return report


def _check_injection(
    name: str, mapping: Mapping[HfSet, HfSet], source: HfSet, target: HfSet
) -> None:
    if set(mapping) != set(source.elements):
        raise InjectionError(f"{name} is not total on its source")
    values = list(mapping.values())
    for v in values:
        if v not in target:
            raise InjectionError(f"{name} maps outside its target")
    if len(set(values)) != len(values):
        raise InjectionError(f"{name} is not injective")


@dataclass(frozen=True)
class InjectionPair:
    """Two injections f: E -> F and g: F -> E, as finite tables."""

    source: HfSet
    target: HfSet
    forward: Mapping[HfSet, HfSet]
    backward: Mapping[HfSet, HfSet]

    def __post_init__(self) -> None:
        _check_injection("f", self.forward, self.source, self.target)
        _check_injection("g", self.backward, self.target, self.source)


@dataclass
class CantorBernsteinWitness:
    """The bijection assembled from f on A and the inverse of g off A."""

    fixed_set: HfSet
    bijection: dict


def _image(mapping: Mapping[HfSet, HfSet], xs: HfSet) -> HfSet:
    return make_set(mapping[x] for x in xs if x in mapping)


def cantor_bernstein(p: InjectionPair) -> CantorBernsteinWitness:
    """A bijection between the sources of two opposite injections.

    Iterates X -> E - g<F - f<X>> upward from the empty set; the limit A
    satisfies E - A = g<F - f<A>> exactly, and the assembled map (f on A,
    g inverse elsewhere) is verified to be a bijection before returning.
    """
    e, f_map, g_map = p.source, p.forward, p.backward
    f_target = p.target

    def step(x: HfSet) -> HfSet:
        return e.difference(_image(g_map, f_target.difference(_image(f_map, x))))

    a = make_set(())
    for _ in range(e.cardinality + 1):
        nxt = step(a)
        if nxt == a:
            break
        a = nxt
    if step(a) != a:
        raise AssertionError("iteration failed to reach the least fixed point")

    g_inverse = {v: k for k, v in g_map.items()}
    bijection = {}
    for x in e:
        if x in a:
            bijection[x] = f_map[x]
        else:
            bijection[x] = g_inverse[x]

    # Verification: totality, injectivity, and surjectivity onto the target.
    if set(bijection) != set(e.elements):
        raise AssertionError("assembled map is not total")
    values = list(bijection.values())
    if len(set(values)) != len(values) or set(values) != set(f_target.elements):
        raise AssertionError("assembled map is not a bijection onto the target")
    return CantorBernsteinWitness(fixed_set=a, bijection=bijection)


def cantor_diagonal(e: HfSet, f: Mapping[HfSet, HfSet]) -> HfSet:
    """The diagonal set {x in E | x not in f(x)}, never a value of f."""
    if set(f) != set(e.elements):
        raise ValueError("f must be total on E")
    for x in e:
        if not f[x].issubset(e):
            raise ValueError(f"f({x}) is not a subset of E")
    diag = make_set(x for x in e if x not in f[x])
    if any(f[x] == diag for x in e):
        raise AssertionError("diagonal set appeared in the image")
    return diag


@dataclass
class KoenigWitness:
    """An uncovered tuple plus the sum and product sizes it separates."""

    tuple_graph: HfSet
    coordinates: list[HfSet]
    sum_size: int
    product_size: int

    @property
    def strict(self) -> bool:
        return self.sum_size < self.product_size


def koenig_uncovered(
    b_sets: Sequence[HfSet], a_sets: Sequence[HfSet]
) -> KoenigWitness:
    """A tuple of the product of the B_i avoiding every A_i.

    Each A_i is a set of product tuples with fewer elements than B_i;
    the witness takes, at every index, the least element (in canonical
    order) of B_i minus the i-th projection of A_i.  The report also
    carries the sum of the |A_i| against the product of the |B_i|.
    """
    if len(b_sets) != len(a_sets):
        raise ValueError("index lists of B and A differ in length")
    k = len(b_sets)
    for i, (b, a) in enumerate(zip(b_sets, a_sets)):
        if a.cardinality >= b.cardinality:
            raise ValueError(f"|A_{i}| must be strictly below |B_{i}|")
    coords_of: dict[HfSet, list[HfSet]] = {}
    for i, a in enumerate(a_sets):
        for t in a:
            if t not in coords_of:
                coords_of[t] = tuple_values(t, k)
            for j, c in enumerate(coords_of[t]):
                if c not in b_sets[j]:
                    raise ValueError(
                        f"a tuple of A_{i} leaves the product at index {j}"
                    )

    coordinates = []
    for i, b in enumerate(b_sets):
        projected = make_set(coords_of[t][i] for t in a_sets[i])
        available = b.difference(projected)
        coordinates.append(available.elements[0])
    witness = tuple_graph(coordinates)

    for a in a_sets:
        if witness in a:
            raise AssertionError("witness tuple lies in a covering set")

    product_size = 1
    for b in b_sets:
        product_size *= b.cardinality
    sum_size = sum(a.cardinality for a in a_sets)
    return KoenigWitness(
        tuple_graph=witness,
        coordinates=coordinates,
        sum_size=sum_size,
        product_size=product_size,
    )
