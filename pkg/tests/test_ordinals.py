"""Ordinals, well-orders, order types, cardinals and recursion."""

import random
from itertools import combinations, product as iproduct

import pytest

from assemblage.hf import (
    EMPTY,
    graph_from_pairs,
    make_set,
    pair,
    product,
    singleton,
)
from assemblage.ordinals import (
    Comparison,
    FiniteOrder,
    OrderError,
    OrdinalError,
    TransfiniteRecursionError,
    cardinal_of,
    epsilon_order,
    is_decent,
    is_ordinal,
    is_ordinal_by_definition,
    is_total_order,
    is_transitive_set,
    is_well_order,
    lex_product,
    nat_arith,
    numeral,
    numeral_value,
    order_type,
    ordinal_compare,
    segment,
    successor,
    sup_ordinals,
    transfinite_recurse,
    tuple_graph,
    tuple_values,
)
from conftest import chain_order, random_hf

N = [numeral(k) for k in range(12)]


def test_empty_set_is_an_ordinal():
    assert is_ordinal(EMPTY)
    assert is_transitive_set(EMPTY) and is_decent(EMPTY)


def test_non_transitive_singleton_is_not_an_ordinal():
    x = singleton(singleton(EMPTY))  # {{{}}} contains {{}} but not {}
    assert not is_transitive_set(x)
    assert not is_ordinal(x)


def test_numerals_are_ordinals():
    for n in N:
        assert is_ordinal(n)
        assert is_transitive_set(n) and is_decent(n)


def test_characterization_matches_literal_definition():
    rng = random.Random(139)
    checked_true = 0
    for _ in range(300):
        x = random_hf(rng, rank=3)
        if x.cardinality > 6:
            continue
        assert is_ordinal(x) == is_ordinal_by_definition(x)
        checked_true += is_ordinal(x)
    assert checked_true >= 3
    for n in N[:7]:
        assert is_ordinal_by_definition(n)


def test_successor_examples():
    assert successor(EMPTY) == N[1]
    assert successor(N[2]) == N[3]
    for n in N[:7]:
        assert is_ordinal(successor(n))
        assert successor(n) != n


def test_successor_injective():
    for a in N[:8]:
        for b in N[:8]:
            if successor(a) == successor(b):
                assert a == b


def test_trichotomy_and_membership_vs_inclusion():
    for a in N[:8]:
        for b in N[:8]:
            cmp = ordinal_compare(a, b)
            if a == b:
                assert cmp == Comparison.EQUAL
            else:
                assert (cmp == Comparison.LESS) == (a in b)
                assert (a in b) == (a.issubset(b) and a != b)
    with pytest.raises(OrdinalError):
        ordinal_compare(singleton(N[1]), N[1])


def test_sup_examples():
    assert sup_ordinals(EMPTY) == EMPTY
    assert sup_ordinals(make_set([N[1], N[3]])) == N[3]
    rng = random.Random(149)
    for _ in range(60):
        subset = make_set(rng.choice(N) for _ in range(rng.randrange(5)))
        assert is_ordinal(sup_ordinals(subset))


def test_total_finite_orders_are_well_orders():
    for k in range(5):
        assert is_well_order(chain_order(k))


def test_divisibility_on_two_and_three_is_not_well_ordered():
    two, three = N[2], N[3]
    carrier = pair(two, three)
    relation = graph_from_pairs([(two, two), (three, three)])
    o = FiniteOrder(carrier, relation)
    assert not is_total_order(o)
    assert not is_well_order(o)


def test_is_well_order_requires_an_order():
    carrier = pair(N[1], N[2])
    relation = graph_from_pairs([(N[1], N[2])])  # not reflexive
    with pytest.raises(OrderError):
        is_well_order(FiniteOrder(carrier, relation))


def test_segments_of_an_ordinal_are_its_elements():
    for n in N[:8]:
        o = epsilon_order(n)
        for x in n:
            assert segment(o, x) == x


def test_order_type_of_an_ordinal_is_itself():
    for n in N[:8]:
        assert order_type(epsilon_order(n)) == n


def test_order_type_of_arbitrary_finite_chains():
    carrier = make_set([N[3], N[5], N[9]])
    relation = graph_from_pairs(
        (a, b)
        for a in carrier
        for b in carrier
        if a.cardinality <= b.cardinality
    )
    assert order_type(FiniteOrder(carrier, relation)) == N[3]
    assert order_type(chain_order(0)) == EMPTY


def test_order_type_is_isomorphism_invariant():
    rng = random.Random(151)
    pool = [random_hf(rng, rank=2) for _ in range(20)]
    for _ in range(40):
        size = rng.randrange(6)
        chosen = []
        for v in rng.sample(pool, size):
            if v not in chosen:
                chosen.append(v)
        rng.shuffle(chosen)  # an arbitrary total order on the carrier
        carrier = make_set(chosen)
        pairs = []
        for i, a in enumerate(chosen):
            for b in chosen[i:]:
                pairs.append((a, b))
        o = FiniteOrder(carrier, graph_from_pairs(pairs))
        assert order_type(o) == numeral(carrier.cardinality)


def test_order_type_needs_well_order():
    two, three = N[2], N[3]
    o = FiniteOrder(
        pair(two, three), graph_from_pairs([(two, two), (three, three)])
    )
    with pytest.raises(OrderError):
        order_type(o)


def test_cardinal_examples():
    for n in N[:9]:
        assert cardinal_of(n) == n
    a, b = N[4], N[7]
    assert cardinal_of(pair(a, b)) == N[2]
    rng = random.Random(157)
    for _ in range(30):
        xs = make_set(rng.choice(N) for _ in range(rng.randrange(5)))
        ys = make_set(rng.choice(N) for _ in range(rng.randrange(5)))
        assert cardinal_of(product(xs, ys)) == numeral(
            xs.cardinality * ys.cardinality
        )


def test_cardinal_is_least_equipotent_ordinal():
    # No smaller ordinal is equipotent, checked exhaustively for small sets.
    rng = random.Random(163)
    for _ in range(40):
        x = random_hf(rng, rank=3)
        card = cardinal_of(x)
        assert card.cardinality == x.cardinality
        for smaller in card:
            assert smaller.cardinality != x.cardinality


def test_transfinite_recursion_constant():
    o = chain_order(5)
    values = transfinite_recurse(o, lambda seg: EMPTY)
    assert set(values.values()) == {EMPTY}


def test_transfinite_recursion_iteration():
    # u_0 = a, u_{n+1} = g(u_n): along the numerals this is iteration.
    o = chain_order(6)

    def phi(seg):
        if not seg:
            return 1
        prev = seg[max(seg, key=lambda s: s.cardinality)]
        return prev * 3

    values = transfinite_recurse(o, phi)
    assert values[numeral(5)] == 3**5


def test_transfinite_recursion_reconstructs_order_isomorphism():
    # phi picks the least unused element of the target ordinal.
    beta = N[4]
    o = chain_order(4)
    eps = epsilon_order(beta)

    def phi(seg):
        used = set(seg.values())
        for candidate in beta:
            if candidate not in used:
                return candidate
        raise ValueError("target exhausted")

    values = transfinite_recurse(o, phi)
    listing = [values[numeral(k)] for k in range(4)]
    assert listing == list(beta.elements)
    for a, b in zip(listing, listing[1:]):
        assert eps.lt(a, b)


def test_transfinite_recursion_extensionality():
    o = chain_order(5)

    def phi_a(seg):
        return numeral(len(seg))

    def phi_b(seg):
        return numeral(sum(1 for _ in seg))

    assert transfinite_recurse(o, phi_a) == transfinite_recurse(o, phi_b)


def worklist_recurse(o, phi):
    """Second construction: fire any element whose predecessors are done."""
    pending = list(o.carrier.elements)
    values = {}
    while pending:
        for x in pending:
            below = [y for y in o.carrier if o.lt(y, x)]
            if all(y in values for y in below):
                values[x] = phi({y: values[y] for y in below})
                pending.remove(x)
                break
        else:
            raise AssertionError("stuck worklist; not a well-order")
    return values


def test_transfinite_recursion_matches_worklist_construction():
    rng = random.Random(197)
    for _ in range(30):
        o = chain_order(rng.randrange(7))

        def phi(seg):
            return make_set(seg.values())

        assert transfinite_recurse(o, phi) == worklist_recurse(o, phi)


def brute_force_isomorphic(o, alpha) -> bool:
    """Search all bijections onto the ordinal for an order isomorphism."""
    from itertools import permutations

    source = list(o.carrier.elements)
    targets = list(alpha.elements)
    if len(source) != len(targets):
        return False
    eps = epsilon_order(alpha) if alpha != EMPTY else None
    for image in permutations(targets):
        table = dict(zip(source, image))
        if all(
            o.leq(a, b) == (table[a] == table[b] or table[a] in table[b])
            for a in source
            for b in source
        ):
            return True
    return len(source) == 0


def test_order_type_against_brute_force_isomorphism():
    rng = random.Random(211)
    for _ in range(20):
        size = rng.randrange(6)
        chosen = rng.sample(N, size)
        rng.shuffle(chosen)
        carrier = make_set(chosen)
        pairs = [(a, b) for i, a in enumerate(chosen) for b in chosen[i:]]
        o = FiniteOrder(carrier, graph_from_pairs(pairs))
        alpha = order_type(o)
        assert brute_force_isomorphic(o, alpha)
        # and no smaller ordinal is isomorphic
        for beta in alpha:
            assert not brute_force_isomorphic(o, beta)


def test_transfinite_recursion_wraps_step_failures():
    o = chain_order(3)

    def phi(seg):
        if len(seg) == 2:
            raise KeyError("missing")
        return EMPTY

    with pytest.raises(TransfiniteRecursionError) as err:
        transfinite_recurse(o, phi)
    assert err.value.position == numeral(2)


def test_nat_arith_small_table():
    assert nat_arith("add", 2, 2) == 4
    assert nat_arith("mul", 2, 2) == 4
    assert nat_arith("pow", 2, 3) == 8
    assert nat_arith("add", 0, 0) == 0
    assert nat_arith("mul", 7, 0) == 0
    assert nat_arith("pow", 7, 0) == 1
    assert nat_arith("pow", 0, 0) == 1


def test_nat_arith_matches_native():
    native = {"add": lambda a, b: a + b, "mul": lambda a, b: a * b, "pow": pow}
    for op, fn in native.items():
        for m in range(9):
            for n in range(9):
                assert nat_arith(op, m, n) == fn(m, n)
    assert nat_arith("mul", 12, 12) == 144
    assert nat_arith("pow", 12, 5) == 12**5


def test_numeral_value_roundtrip():
    for k in range(10):
        assert numeral_value(numeral(k)) == k
    with pytest.raises(OrdinalError):
        numeral_value(singleton(N[2]))


def test_tuple_graph_roundtrip():
    values = [N[3], EMPTY, N[1]]
    t = tuple_graph(values)
    assert tuple_values(t, 3) == values
    assert tuple_graph([]) == EMPTY


def test_lex_product_of_chains():
    o = lex_product([chain_order(2), chain_order(3)])
    assert o.carrier.cardinality == 6
    assert is_well_order(o)
    assert order_type(o) == N[6]


def test_lex_product_empty_index():
    o = lex_product([])
    assert o.carrier == singleton(EMPTY)
    assert is_well_order(o)
    assert order_type(o) == N[1]


def test_lex_product_order_and_wellness_match_factors():
    # Factor pool: chains (well-ordered) and a two-point antichain (not).
    chains = {1: chain_order(1), 2: chain_order(2), 3: chain_order(3)}
    two, three = N[2], N[3]
    antichain = FiniteOrder(
        pair(two, three), graph_from_pairs([(two, two), (three, three)])
    )
    pool = [chains[1], chains[2], chains[3], antichain]
    for size in range(4):
        for combo in iproduct(pool, repeat=size):
            o = lex_product(list(combo))
            from assemblage.ordinals import is_order

            assert is_order(o)
            expected = all(f is not antichain for f in combo)
            assert is_well_order(o) == expected


def test_finite_set_stability_of_the_cyclic_successor():
    # On the numeral n, the cycle k -> k+1, n-1 -> 0 leaves no nonempty
    # proper subset stable.
    for n in range(1, 9):
        carrier = [numeral(k) for k in range(n)]
        step = {
            numeral(k): numeral((k + 1) % n) for k in range(n)
        }
        for r in range(1, n):
            for subset in combinations(carrier, r):
                assert not all(step[x] in make_set(subset) for x in subset)


def test_no_numeral_is_equipotent_to_a_proper_subset():
    for n in range(7):
        base = numeral(n)
        for r in range(n):
            for subset in combinations(base.elements, r):
                assert len(subset) != base.cardinality
