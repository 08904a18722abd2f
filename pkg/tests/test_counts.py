"""Exact counting: materialized against symbolic, and the numeral table."""

import random

import pytest

from assemblage.assembly import Letter, substitute, tau_bind
from assemblage.counts import (
    BudgetExceededError,
    CountAlgebra,
    CountVector,
    count_materialized,
    count_symbolic,
    growth_table,
    numeral_counts,
)
from assemblage.expander import (
    EmptyE,
    ExpansionSession,
    LetterE,
    numeral_expr,
    expand,
)
from conftest import LETTERS, random_assembly, random_expression

GOLDEN = {0: (12, 3), 1: (513, 134), 2: (7527, 1968)}


def test_count_materialized_examples():
    cv = count_materialized(expand(EmptyE()))
    assert (cv.signs, cv.links, cv.occ) == (12, 3, {})
    cv = count_materialized(Letter("x"))
    assert (cv.signs, cv.links, cv.occ) == (1, 0, {"x": 1})


def test_numeral_golden_counts():
    for n, (signs, links) in GOLDEN.items():
        cv = numeral_counts(n)
        assert (cv.signs, cv.links) == (signs, links)
        assert cv.occ == {}


def test_symbolic_equals_materialized_on_numerals():
    for n in range(4):
        materialized = count_materialized(expand(numeral_expr(n)))
        symbolic = count_symbolic(numeral_expr(n))
        assert (materialized.signs, materialized.links) == (
            symbolic.signs,
            symbolic.links,
        )
        assert materialized.occ == symbolic.occ == {}


def test_symbolic_equals_materialized_on_random_expressions():
    rng = random.Random(61)
    checked = 0
    while checked < 200:
        e = random_expression(rng)
        symbolic = count_symbolic(e)
        if symbolic.signs > 300_000:
            continue
        materialized = count_materialized(expand(e))
        assert materialized == symbolic
        checked += 1


def test_substitution_count_law_directly():
    rng = random.Random(67)
    for _ in range(150):
        a = random_assembly(rng)
        t = random_assembly(rng, depth=3)
        name = rng.choice(LETTERS)
        out = substitute(a, {name: t})
        cv_a = count_materialized(a)
        cv_t = count_materialized(t)
        cv_out = count_materialized(out)
        occ = cv_a.occurrences(name)
        assert cv_out.signs == cv_a.signs - occ + occ * cv_t.signs
        assert cv_out.links == cv_a.links + occ * cv_t.links
        for letter_name in set(cv_a.occ) | set(cv_t.occ):
            expected = (
                cv_a.occurrences(letter_name) if letter_name != name else 0
            ) + occ * cv_t.occurrences(letter_name)
            assert cv_out.occurrences(letter_name) == expected


def test_tau_count_law_directly():
    rng = random.Random(71)
    for _ in range(150):
        a = random_assembly(rng)
        name = rng.choice(LETTERS)
        bound = tau_bind(name, a)
        cv_a = count_materialized(a)
        cv_b = count_materialized(bound)
        assert cv_b.signs == cv_a.signs + 1
        assert cv_b.links == cv_a.links + cv_a.occurrences(name)
        assert cv_b.occurrences(name) == 0


def test_count_algebra_substitution_is_simultaneous():
    alg = CountAlgebra()
    a = alg.rel("eq", alg.letter("x"), alg.letter("y"))
    out = alg.subst(a, {"x": alg.letter("y"), "y": alg.letter("x")})
    assert out.occ == {"x": 1, "y": 1}


def test_growth_table_prefix_and_monotonicity():
    rows = growth_table(6)
    assert rows[0] == (0, 12, 3)
    assert rows[1] == (1, 513, 134)
    assert rows[2] == (2, 7527, 1968)
    for (n0, s0, l0), (n1, s1, l1) in zip(rows, rows[1:]):
        assert n1 == n0 + 1
        assert s1 > s0
        assert l1 > l0


def naive_numeral_counts(n_max: int) -> list[tuple[int, int, int]]:
    """An independent recurrence built from the template arithmetic.

    For k slots (k >= 2) the enumeration template has
    6k+13 + (2k+2)(8k+14) signs, (2k+2)^2 + (4k+6) links and 4k+6
    occurrences per slot; numeral 1 fills the two-slot template with the
    empty set in both slots.
    """
    signs = {0: 12}
    links = {0: 3}
    for n in range(1, n_max + 1):
        k = max(n, 2)
        template_signs = 6 * k + 13 + (2 * k + 2) * (8 * k + 14)
        template_links = (2 * k + 2) ** 2 + (4 * k + 6)
        per_slot = 4 * k + 6
        if n == 1:
            fillers = [0, 0]
        else:
            fillers = list(range(n))
        signs[n] = (
            template_signs
            - per_slot * len(fillers)
            + per_slot * sum(signs[i] for i in fillers)
        )
        links[n] = template_links + per_slot * sum(links[i] for i in fillers)
    return [(n, signs[n], links[n]) for n in range(n_max + 1)]


def test_growth_table_against_independent_recurrence():
    assert growth_table(5) == naive_numeral_counts(5)


def test_budget_error_advises_symbolic():
    big = expand(numeral_expr(2))
    with pytest.raises(BudgetExceededError) as err:
        count_materialized(big, budget=100)
    assert "count_symbolic" in str(err.value)


def test_count_vector_drops_zero_entries():
    cv = CountVector(3, 0, {"x": 0, "y": 2})
    assert cv.occ == {"y": 2}
    with pytest.raises(ValueError):
        CountVector(-1, 0, {})


def test_occ_never_mentions_reserved_letters():
    rng = random.Random(73)
    for _ in range(60):
        cv = count_symbolic(random_expression(rng))
        assert all(not name.startswith("_") for name in cv.occ)


def test_json_counts_are_decimal_strings():
    obj = numeral_counts(2).to_json_obj()
    assert obj["signs"] == "7527"
    assert obj["links"] == "1968"


def test_letter_occurrence_counts_flow_through_substitution():
    session = ExpansionSession(CountAlgebra())
    cv = session.expand(LetterE("x"))
    assert cv == CountVector(1, 0, {"x": 1})
