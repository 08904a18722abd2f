"""Exact sign, link and occurrence counting, materialized and symbolic.

The symbolic side never builds a tree: it runs the expansion rules over
an algebra whose values are count vectors, using the substitution laws

    signs' = signs(A) + sum_x occ_x(A) * (signs(T_x) - 1)
    links' = links(A) + sum_x occ_x(A) * links(T_x)
    occ'_y = occ_y(A) [y unmapped] + sum_x occ_x(A) * occ_y(T_x)

and, for binding a letter x over A, signs+1, links+occ_x(A), occ_x -> 0.
Counts are plain Python integers, hence arbitrary precision throughout.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .assembly import Assembly, KEYWORD_TOKENS, linearize
from .expander import Expression, ExpansionSession, NumeralE

__all__ = [
    "CountVector",
    "CountAlgebra",
    "BudgetExceededError",
    "DEFAULT_SIGN_BUDGET",
    "count_materialized",
    "count_symbolic",
    "numeral_counts",
    "growth_table",
]

DEFAULT_SIGN_BUDGET = 50_000_000


class BudgetExceededError(ValueError):
    """Materialization would exceed the sign budget."""


@dataclass(frozen=True)
class CountVector:
    """Sign count, link count, and free occurrences per letter.

    ``occ`` holds only letters with nonzero counts.
    """

    signs: int
    links: int
    occ: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.signs < 0 or self.links < 0 or any(
            c < 0 for c in self.occ.values()
        ):
            raise ValueError("counts are nonnegative")
        cleaned = {k: v for k, v in self.occ.items() if v}
        object.__setattr__(self, "occ", cleaned)

    def occurrences(self, name: str) -> int:
        return self.occ.get(name, 0)

    def to_json_obj(self) -> dict:
        """Decimal strings, so consumers never truncate the big counts."""
        return {
            "signs": str(self.signs),
            "links": str(self.links),
            "occurrences": {k: str(v) for k, v in sorted(self.occ.items())},
        }


def _merge(a: Mapping[str, int], b: Mapping[str, int]) -> dict[str, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


class CountAlgebra:
    """The counting algebra: expansion over it yields exact CountVectors."""

    def letter(self, name: str) -> CountVector:
        return CountVector(1, 0, {name: 1})

    def neg(self, a: CountVector) -> CountVector:
        return CountVector(a.signs + 1, a.links, a.occ)

    def disj(self, a: CountVector, b: CountVector) -> CountVector:
        return CountVector(
            a.signs + b.signs + 1, a.links + b.links, _merge(a.occ, b.occ)
        )

    def rel(self, kind: str, a: CountVector, b: CountVector) -> CountVector:
        if kind not in ("eq", "elem"):
            raise ValueError(f"relational sign must be 'eq' or 'elem': {kind!r}")
        return CountVector(
            a.signs + b.signs + 1, a.links + b.links, _merge(a.occ, b.occ)
        )

    def tau(self, name: str, a: CountVector) -> CountVector:
        bound = a.occ.get(name, 0)
        occ = {k: v for k, v in a.occ.items() if k != name}
        return CountVector(a.signs + 1, a.links + bound, occ)

    def subst(
        self, a: CountVector, bindings: Mapping[str, CountVector]
    ) -> CountVector:
        signs = a.signs
        links = a.links
        occ: dict[str, int] = {k: v for k, v in a.occ.items() if k not in bindings}
        for name, image in bindings.items():
            count = a.occ.get(name, 0)
            if not count:
                continue
            signs += count * (image.signs - 1)
            links += count * image.links
            for other, c in image.occ.items():
                occ[other] = occ.get(other, 0) + count * c
        return CountVector(signs, links, occ)


def count_materialized(
    node: Assembly, budget: int = DEFAULT_SIGN_BUDGET
) -> CountVector:
    """Counts read off the actual linearization.

    Refuses assemblies above the sign budget; count_symbolic handles
    those without materializing.
    """
    if node.size > budget:
        raise BudgetExceededError(
            f"{node.size} signs exceed the materialization budget of {budget};"
            " use count_symbolic instead"
        )
    lin = linearize(node)
    occ = Counter(tok for tok in lin.tokens if tok not in KEYWORD_TOKENS)
    return CountVector(len(lin.tokens), len(lin.links), dict(occ))


def count_symbolic(e: Expression) -> CountVector:
    """Counts of the expansion of ``e``, computed without materializing."""
    return ExpansionSession(CountAlgebra()).expand(e)


def numeral_counts(n: int) -> CountVector:
    """Signs and links of the von Neumann numeral, memoized over 0..n."""
    return count_symbolic(NumeralE(n))


def growth_table(n_max: int) -> list[tuple[int, int, int]]:
    """Rows (n, signs, links) for the numerals 0..n_max."""
    session: ExpansionSession[CountVector] = ExpansionSession(CountAlgebra())
    rows = []
    for n in range(n_max + 1):
        cv = session.expand(NumeralE(n))
        rows.append((n, cv.signs, cv.links))
    return rows
