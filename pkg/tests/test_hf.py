"""Hereditarily finite sets, graphs, and the equivalence calculus."""

import random
from itertools import combinations

import pytest

from assemblage.hf import (
    EMPTY,
    ApplyDomainError,
    Correspondence,
    CoupleShapeError,
    EquivalenceError,
    GraphShapeError,
    HfSet,
    HfSyntaxError,
    apply_graph,
    couple,
    decouple,
    diagonal,
    equivalence_check,
    equivalence_closure,
    graph_compose,
    graph_from_pairs,
    graph_image,
    graph_inverse,
    graph_preimage,
    is_couple,
    is_equivalence_graph,
    is_functional,
    make_set,
    pair,
    parse_hf,
    powerset,
    pr1_set,
    pr2_set,
    product,
    quotient,
    singleton,
    union_all,
)
from assemblage.ordinals import numeral
from conftest import random_hf

N = [numeral(k) for k in range(10)]


def test_make_set_deduplicates():
    assert make_set([EMPTY, EMPTY]) == singleton(EMPTY) == N[1]


def test_make_set_is_order_insensitive():
    rng = random.Random(79)
    for _ in range(100):
        elems = [random_hf(rng) for _ in range(rng.randrange(6))]
        shuffled = list(elems)
        rng.shuffle(shuffled)
        assert make_set(elems) == make_set(shuffled + shuffled)


def test_extensional_equality_and_hash():
    a = make_set([N[1], EMPTY])
    b = make_set([EMPTY, N[1]])
    assert a == b == N[2]
    assert hash(a) == hash(b)
    assert len({a, b}) == 1


def test_canonical_string_forms():
    assert str(EMPTY) == "{}"
    assert str(N[2]) == "{{},{{}}}"
    assert parse_hf("{{},{{}}}") == N[2]
    assert parse_hf(" { { } , { { } } } ") == N[2]
    with pytest.raises(HfSyntaxError):
        parse_hf("{{}")
    with pytest.raises(HfSyntaxError):
        parse_hf("{a}")


def test_couple_degenerate():
    assert couple(N[1], N[1]) == singleton(singleton(N[1]))
    assert decouple(couple(N[1], N[1])) == (N[1], N[1])


def test_couple_injective_over_random_values():
    rng = random.Random(83)
    values = [random_hf(rng) for _ in range(12)]
    for x in values:
        for y in values:
            cx = couple(x, y)
            assert decouple(cx) == (x, y)
            for x2 in values:
                for y2 in values:
                    if couple(x2, y2) == cx:
                        assert x2 == x and y2 == y


def test_decouple_rejects_non_couples():
    bad = pair(N[3], N[4])  # two non-singletons
    with pytest.raises(CoupleShapeError):
        decouple(bad)
    assert not is_couple(bad)
    with pytest.raises(CoupleShapeError):
        decouple(EMPTY)


def test_product_sizes_and_empty():
    assert product(EMPTY, N[3]) == EMPTY
    assert product(N[3], EMPTY) == EMPTY
    assert product(N[1], singleton(N[4])) == singleton(couple(EMPTY, N[4]))
    assert product(N[2], N[3]).cardinality == 6


def test_graph_image_examples():
    g = graph_from_pairs([(N[1], N[2]), (N[1], N[3]), (N[2], N[4])])
    assert graph_image(g, EMPTY) == EMPTY
    assert graph_image(g, singleton(N[1])) == pair(N[2], N[3])
    assert graph_image(g, pr1_set(g)) == pr2_set(g)


def test_compose_with_empty_graph():
    g = graph_from_pairs([(N[1], N[2])])
    assert graph_compose(EMPTY, g) == EMPTY
    assert graph_compose(g, EMPTY) == EMPTY
    assert graph_inverse(EMPTY) == EMPTY


def test_inverse_is_involutive():
    rng = random.Random(89)
    pool = [random_hf(rng) for _ in range(5)]
    for _ in range(50):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(8))
        )
        assert graph_inverse(graph_inverse(g)) == g


def test_graph_shape_error_names_offender():
    g = make_set([couple(N[1], N[2]), N[3]])
    with pytest.raises(GraphShapeError):
        pr1_set(g)


def test_image_monotone():
    rng = random.Random(97)
    pool = [numeral(k) for k in range(5)]
    for _ in range(60):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(10))
        )
        xs = make_set(e for e in pool if rng.random() < 0.5)
        ys = xs.union(make_set(e for e in pool if rng.random() < 0.5))
        assert graph_image(g, xs).issubset(graph_image(g, ys))


def test_functional_graphs_and_apply():
    f = graph_from_pairs([(N[1], N[2]), (N[3], N[4])])
    assert is_functional(f)
    assert apply_graph(f, N[1]) == N[2]
    with pytest.raises(ApplyDomainError):
        apply_graph(f, N[5])
    g = graph_from_pairs([(N[1], N[2]), (N[1], N[3])])
    assert not is_functional(g)
    with pytest.raises(ApplyDomainError):
        apply_graph(g, N[1])


def test_functional_criterion_via_images():
    # Functional iff G<G^-1<X>> is contained in X for every X over pr2.
    rng = random.Random(101)
    pool = [numeral(k) for k in range(4)]
    for _ in range(40):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(7))
        )
        target = pr2_set(g).elements
        holds = all(
            graph_image(g, graph_preimage(g, make_set(sub))).issubset(make_set(sub))
            for r in range(len(target) + 1)
            for sub in combinations(target, r)
        )
        assert holds == is_functional(g)


def test_projection_inclusion_criterion():
    # H inside H o G^-1 o G exactly when pr1 H is inside pr1 G.
    rng = random.Random(103)
    pool = [numeral(k) for k in range(4)]
    for _ in range(60):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(7))
        )
        h = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(7))
        )
        lhs = h.issubset(graph_compose(h, graph_compose(graph_inverse(g), g)))
        rhs = pr1_set(h).issubset(pr1_set(g))
        assert lhs == rhs


def test_double_inverse_projection_equivalence():
    # When G o G^-1 o G = G, the graph G^-1 o G is an equivalence on pr1 G.
    rng = random.Random(107)
    pool = [numeral(k) for k in range(4)]
    found = 0
    for _ in range(200):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(7))
        )
        triple = graph_compose(g, graph_compose(graph_inverse(g), g))
        if triple == g and g != EMPTY:
            found += 1
            derived = graph_compose(graph_inverse(g), g)
            assert is_equivalence_graph(pr1_set(g), derived)
    assert found > 5


def partition_graph(blocks) -> HfSet:
    pairs = []
    for block in blocks:
        for x in block:
            for y in block:
                pairs.append((x, y))
    return graph_from_pairs(pairs)


def test_diagonal_is_an_equivalence():
    e = make_set(N[:4])
    report = equivalence_check(e, diagonal(e))
    assert report.verdict and report.agree


def test_union_of_two_partitions_fails():
    e = make_set([N[1], N[2], N[3]])
    g = partition_graph([[N[1], N[2]], [N[3]]])
    h = partition_graph([[N[1]], [N[2], N[3]]])
    assert is_equivalence_graph(e, g)
    assert is_equivalence_graph(e, h)
    union = g.union(h)
    report = equivalence_check(e, union)
    assert not report.verdict
    assert report.agree
    # (1,3) witnesses the failure: reachable in two steps, absent in one.
    assert couple(N[1], N[3]) in graph_compose(union, union)
    assert couple(N[1], N[3]) not in union


def random_partition(rng, elems):
    blocks: dict[int, list] = {}
    count = rng.randrange(1, len(elems) + 1)
    for e in elems:
        blocks.setdefault(rng.randrange(count), []).append(e)
    return [b for b in blocks.values() if b]


def test_partition_graphs_satisfy_both_criteria():
    rng = random.Random(109)
    for _ in range(100):
        size = rng.randrange(1, 7)
        elems = [numeral(k) for k in range(size)]
        g = partition_graph(random_partition(rng, elems))
        report = equivalence_check(make_set(elems), g)
        assert report.verdict
        assert report.agree


def test_criteria_agree_on_arbitrary_graphs():
    rng = random.Random(113)
    pool = [numeral(k) for k in range(3)]
    e = make_set(pool)
    for _ in range(200):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(9))
        )
        assert equivalence_check(e, g).agree


def test_closure_of_empty_is_diagonal():
    e = make_set(N[:4])
    assert equivalence_closure(e, EMPTY) == diagonal(e)


def test_closure_of_the_union_counterexample_is_total():
    e = make_set([N[1], N[2], N[3]])
    g = partition_graph([[N[1], N[2]], [N[3]]])
    h = partition_graph([[N[1]], [N[2], N[3]]])
    assert equivalence_closure(e, g.union(h)) == product(e, e)


def test_closure_is_idempotent_and_minimal():
    rng = random.Random(127)
    pool = [numeral(k) for k in range(5)]
    e = make_set(pool)
    for _ in range(60):
        g = graph_from_pairs(
            (rng.choice(pool), rng.choice(pool)) for _ in range(rng.randrange(8))
        )
        closed = equivalence_closure(e, g)
        assert is_equivalence_graph(e, closed)
        assert equivalence_closure(e, closed) == closed
        assert g.issubset(closed)


def test_quotient_examples():
    e = make_set([N[1], N[2], N[3]])
    assert quotient(e, diagonal(e)) == make_set(
        [singleton(N[1]), singleton(N[2]), singleton(N[3])]
    )
    g = partition_graph([[N[1], N[2]], [N[3]]])
    assert quotient(e, g) == make_set([pair(N[1], N[2]), singleton(N[3])])
    with pytest.raises(EquivalenceError):
        quotient(e, graph_from_pairs([(N[1], N[2])]))


def test_quotients_partition_the_carrier():
    rng = random.Random(131)
    for _ in range(200):
        size = rng.randrange(1, 7)
        elems = [numeral(k) for k in range(size)]
        e = make_set(elems)
        classes = quotient(e, partition_graph(random_partition(rng, elems)))
        assert union_all(classes.elements) == e
        seen = []
        for c in classes:
            assert c != EMPTY
            for other in seen:
                assert c.intersection(other) == EMPTY
            seen.append(c)


def test_correspondence_validation():
    g = graph_from_pairs([(N[1], N[2])])
    c = Correspondence(g, make_set([N[1], N[5]]), make_set([N[2]]))
    assert c.domain == singleton(N[1])
    assert c.image(singleton(N[1])) == singleton(N[2])
    with pytest.raises(GraphShapeError):
        Correspondence(g, singleton(N[5]), singleton(N[2]))


def test_powerset_not_contained_in_its_set():
    # There is always a subset of E that is not an element of E.
    rng = random.Random(137)
    for _ in range(40):
        e = random_hf(rng, rank=3)
        assert not powerset(e).issubset(e)
        witness = next(s for s in powerset(e) if s not in e)
        assert witness.issubset(e) and witness not in e
