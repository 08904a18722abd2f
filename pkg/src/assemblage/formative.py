"""Formative constructions: rule-by-rule verification and canonical builders.

A formative construction is a sequence of assemblies in which every
element is justified by one of five rules: it is a letter (rule a), the
negation of an earlier relational element (b), the disjunction of two
earlier relational elements (c), a tau binding of a letter in an earlier
relational element (d), or a relational sign over two earlier elements of
term shape (e).  Shape here is the species of the leading sign: letters
and tau nodes head terms, the other signs head relations.  In a theory
with no relational signs this forces every element to be a letter, which
is why rules b-d insist on relational antecedents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .assembly import (
    Assembly,
    LinearAssembly,
    LinearParseError,
    _DISJ,
    _LETTER,
    _NEG,
    _REF,
    _REL,
    _TAU,
    _open,
    delinearize,
    is_letter_name,
    linearize,
    tau_bind,
)

__all__ = [
    "Justification",
    "FormativeReport",
    "verify_formative",
    "formative_construction",
]

RULE_LETTER = "a"
RULE_NEG = "b"
RULE_DISJ = "c"
RULE_TAU = "d"
RULE_REL = "e"


def _is_relation_shaped(a: Assembly) -> bool:
    return a.tag in (_NEG, _DISJ, _REL)


def _is_term_shaped(a: Assembly) -> bool:
    return a.tag in (_LETTER, _TAU)


@dataclass(frozen=True)
class Justification:
    """Why one element of the sequence is admissible.

    ``antecedents`` are the 1-based indices of the earlier elements used;
    ``binder`` is the bound letter for rule d.
    """

    index: int
    rule: str
    antecedents: tuple[int, ...] = ()
    binder: Optional[str] = None

    def describe(self) -> str:
        parts = [f"{self.index}: rule {self.rule}"]
        if self.antecedents:
            parts.append("from " + " ".join(str(i) for i in self.antecedents))
        if self.binder is not None:
            parts.append(f"binding {self.binder}")
        return " ".join(parts)


@dataclass
class FormativeReport:
    """Outcome of verifying a candidate formative construction."""

    steps: list[Justification] = field(default_factory=list)
    failure_index: Optional[int] = None
    failure_reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failure_index is None

    def describe(self) -> str:
        lines = [step.describe() for step in self.steps]
        if self.ok:
            lines.append("valid")
        else:
            lines.append(f"invalid at {self.failure_index}: {self.failure_reason}")
        return "\n".join(lines)


def _fresh_letter(avoid: frozenset) -> str:
    k = 0
    while f"_u{k}" in avoid:
        k += 1
    return f"_u{k}"


def _find_antecedent(target: Assembly, prior: Sequence[Assembly]) -> Optional[int]:
    for pos, earlier in enumerate(prior, start=1):
        if earlier == target:
            return pos
    return None


def _justify(
    index: int, a: Assembly, prior: Sequence[Assembly]
) -> tuple[Optional[Justification], str]:
    tag = a.tag
    if tag == _LETTER:
        return Justification(index, RULE_LETTER), ""
    if tag == _REF:
        return None, "a bare box is never an element of a construction"
    if tag == _NEG:
        pos = _find_antecedent(a.body, prior)
        if pos is not None and _is_relation_shaped(a.body):
            return Justification(index, RULE_NEG, (pos,)), ""
        return None, "negation of an assembly that is not an earlier relation"
    if tag == _DISJ:
        lp = _find_antecedent(a.left, prior)
        rp = _find_antecedent(a.right, prior)
        if (
            lp is not None
            and rp is not None
            and _is_relation_shaped(a.left)
            and _is_relation_shaped(a.right)
        ):
            return Justification(index, RULE_DISJ, (lp, rp)), ""
        return None, "disjunction of assemblies that are not earlier relations"
    if tag == _REL:
        lp = _find_antecedent(a.left, prior)
        rp = _find_antecedent(a.right, prior)
        if (
            lp is not None
            and rp is not None
            and _is_term_shaped(a.left)
            and _is_term_shaped(a.right)
        ):
            return Justification(index, RULE_REL, (lp, rp)), ""
        return None, "relational sign over assemblies that are not earlier terms"
    # Tau: look for an earlier relation and a letter whose binding gives a.
    for pos, earlier in enumerate(prior, start=1):
        if not _is_relation_shaped(earlier):
            continue
        candidates = sorted(earlier.letters)
        candidates.append(_fresh_letter(earlier.letters | a.letters))
        for name in candidates:
            if tau_bind(name, earlier) == a:
                return Justification(index, RULE_TAU, (pos,), name), ""
    return None, "tau binding of no earlier relation"


def verify_formative(sequence: Sequence[LinearAssembly]) -> FormativeReport:
    """Check each element against the five rules, stopping at the first gap."""
    report = FormativeReport()
    accepted: list[Assembly] = []
    for index, lin in enumerate(sequence, start=1):
        try:
            a = delinearize(lin)
        except LinearParseError as exc:
            report.failure_index = index
            report.failure_reason = f"not a well-formed assembly ({exc})"
            return report
        justification, reason = _justify(index, a, accepted)
        if justification is None:
            report.failure_index = index
            report.failure_reason = reason
            return report
        report.steps.append(justification)
        accepted.append(a)
    return report


def formative_construction(target: Assembly) -> list[Assembly]:
    """A canonical formative construction ending in ``target``.

    Elements appear in dependency order, deduplicated; each tau node is
    preceded by its body opened with a fresh letter.  The sequence passes
    :func:`verify_formative` whenever the target is well sorted.
    """
    out: list[Assembly] = []
    seen: set[Assembly] = set()
    counter = 0

    def fresh(avoid: frozenset) -> str:
        nonlocal counter
        while True:
            name = f"_w{counter}"
            counter += 1
            if name not in avoid and is_letter_name(name):
                return name

    def emit(a: Assembly) -> None:
        if a in seen:
            return
        tag = a.tag
        if tag == _NEG:
            emit(a.body)
        elif tag in (_DISJ, _REL):
            emit(a.left)
            emit(a.right)
        elif tag == _TAU:
            opened = _open(a.body, fresh(a.letters | target.letters))
            emit(opened)
        elif tag == _REF:
            raise ValueError("cannot build a construction for an open assembly")
        seen.add(a)
        out.append(a)

    emit(target)
    return out


def formative_construction_linear(target: Assembly) -> list[LinearAssembly]:
    """The canonical construction, already linearized element by element."""
    return [linearize(a) for a in formative_construction(target)]
