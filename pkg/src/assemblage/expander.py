"""Surface expressions with abbreviations, and their expansion to raw signs.

The abbreviation layer knows implication, conjunction, equivalence, the
quantifiers, subset, set-builders, enumerated sets, couples, the empty
set, binary union, successor and the von Neumann numerals.  Expansion
eliminates every abbreviation:

    A implies B   becomes   or not A B
    A and B       becomes   not or not A not B
    A iff B       becomes   (A implies B) and (B implies A)
    exists x R    becomes   (tau_x R | x) R
    forall x R    becomes   not not (tau_x not R | x) R
    {x | R}       becomes   tau_t forall x ((x in t) iff R)     t fresh
    {T, U}        becomes   {z | z = T or z = U}                z fresh
    {T}           becomes   {T, T}
    (T, U)        becomes   {{T}, {T, U}}
    empty         becomes   tau_X forall x (not (x in X))       X, x fresh
    union T U     becomes   {x | x in T or x in U}              x fresh
    succ T        becomes   union T {T}
    numeral 0     becomes   empty
    numeral n     becomes   {numeral 0, ..., numeral n-1}

An n-element enumeration builds the right-associated chain of equalities
``z = T1 or (z = T2 or ...)``; a one-element enumeration duplicates its
element, since a singleton is the two-element set with equal slots.

Expansion is phrased against an algebra of six primitive constructors,
so the same rules drive both materialization (producing assemblies) and
exact symbolic counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Generic, Mapping, Protocol, Sequence, TypeVar

from . import assembly as asm
from .assembly import Assembly, is_letter_name

__all__ = [
    "Expression",
    "LetterE",
    "NotE",
    "OrE",
    "AndE",
    "ImpliesE",
    "IffE",
    "EqE",
    "InE",
    "NotInE",
    "NeqE",
    "SubsetE",
    "ForallE",
    "ExistsE",
    "TauE",
    "CollE",
    "SetOfE",
    "EnumE",
    "SingletonE",
    "CoupleE",
    "EmptyE",
    "UnionE",
    "SuccE",
    "NumeralE",
    "SubstE",
    "ExpressionError",
    "ReservedLetterError",
    "SortError",
    "ExpressionSyntaxError",
    "expression_sort",
    "numeral_expr",
    "parse_expression",
    "print_expression",
    "AssemblyAlgebra",
    "TreeAlgebra",
    "ExpansionSession",
    "expand",
]

V = TypeVar("V")

RESERVED_PREFIX = "_"


class ExpressionError(ValueError):
    """Base class for errors in the abbreviation layer."""


class ReservedLetterError(ExpressionError):
    """A user expression mentions a letter from the reserved namespace."""


class SortError(ExpressionError):
    """An abbreviation was applied to operands of the wrong sort."""


class ExpressionSyntaxError(ExpressionError):
    """Surface text failed to parse; carries line and column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class Expression:
    """Base class of surface expression nodes."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"<Expression {print_expression(self)}>"


@dataclass(frozen=True, repr=False)
class LetterE(Expression):
    name: str


@dataclass(frozen=True, repr=False)
class NotE(Expression):
    body: Expression


@dataclass(frozen=True, repr=False)
class OrE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class AndE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class ImpliesE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class IffE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class EqE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class InE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class NotInE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class NeqE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class SubsetE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class ForallE(Expression):
    binder: str
    body: Expression


@dataclass(frozen=True, repr=False)
class ExistsE(Expression):
    binder: str
    body: Expression


@dataclass(frozen=True, repr=False)
class TauE(Expression):
    binder: str
    body: Expression


@dataclass(frozen=True, repr=False)
class CollE(Expression):
    """The statement that the body is collectivizing in its binder."""

    binder: str
    body: Expression


@dataclass(frozen=True, repr=False)
class SetOfE(Expression):
    """The set-builder {binder | body}."""

    binder: str
    body: Expression


@dataclass(frozen=True, repr=False)
class EnumE(Expression):
    items: tuple[Expression, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise ExpressionError("enumerated sets need at least one element")


@dataclass(frozen=True, repr=False)
class SingletonE(Expression):
    item: Expression


@dataclass(frozen=True, repr=False)
class CoupleE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class EmptyE(Expression):
    pass


@dataclass(frozen=True, repr=False)
class UnionE(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True, repr=False)
class SuccE(Expression):
    item: Expression


@dataclass(frozen=True, repr=False)
class NumeralE(Expression):
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or self.value < 0:
            raise ExpressionError(f"numerals are naturals, got {self.value!r}")


@dataclass(frozen=True, repr=False)
class SubstE(Expression):
    """Substitution of a term for a letter inside another expression."""

    body: Expression
    name: str
    value: Expression


TERM = "term"
RELATION = "relation"

_TERM_HEADS = (
    LetterE,
    TauE,
    SetOfE,
    EnumE,
    SingletonE,
    CoupleE,
    EmptyE,
    UnionE,
    SuccE,
    NumeralE,
)
_RELATION_HEADS = (
    NotE,
    OrE,
    AndE,
    ImpliesE,
    IffE,
    EqE,
    InE,
    NotInE,
    NeqE,
    SubsetE,
    ForallE,
    ExistsE,
    CollE,
)


def expression_sort(e: Expression) -> str:
    """Which sort the abbreviation table assigns: 'term' or 'relation'."""
    if isinstance(e, SubstE):
        return expression_sort(e.body)
    if isinstance(e, _TERM_HEADS):
        return TERM
    if isinstance(e, _RELATION_HEADS):
        return RELATION
    raise ExpressionError(f"not an expression: {e!r}")


def numeral_expr(n: int) -> Expression:
    """Numeral 0 is the empty set; numeral n enumerates 0 .. n-1."""
    if n < 0:
        raise ExpressionError("numerals are naturals")
    if n == 0:
        return EmptyE()
    return EnumE(tuple(NumeralE(k) for k in range(n)))


def _check_user_letter(name: str) -> str:
    if not is_letter_name(name):
        raise ExpressionError(f"invalid letter name: {name!r}")
    if name.startswith(RESERVED_PREFIX):
        raise ReservedLetterError(
            f"letter {name!r} lies in the reserved template namespace"
        )
    return name


class AssemblyAlgebra(Protocol[V]):
    """The six primitive constructors expansion is written against."""

    def letter(self, name: str) -> V: ...

    def neg(self, a: V) -> V: ...

    def disj(self, a: V, b: V) -> V: ...

    def rel(self, kind: str, a: V, b: V) -> V: ...

    def tau(self, name: str, a: V) -> V: ...

    def subst(self, a: V, bindings: Mapping[str, V]) -> V: ...


class TreeAlgebra:
    """The materializing algebra: values are assemblies."""

    def letter(self, name: str) -> Assembly:
        return asm.Letter(name)

    def neg(self, a: Assembly) -> Assembly:
        return asm.Neg(a)

    def disj(self, a: Assembly, b: Assembly) -> Assembly:
        return asm.Disj(a, b)

    def rel(self, kind: str, a: Assembly, b: Assembly) -> Assembly:
        return asm.Rel(kind, a, b)

    def tau(self, name: str, a: Assembly) -> Assembly:
        return asm.tau_bind(name, a)

    def subst(self, a: Assembly, bindings: Mapping[str, Assembly]) -> Assembly:
        return asm.substitute(a, bindings)


class ExpansionSession(Generic[V]):
    """One deterministic expansion run over a chosen algebra.

    Fresh template letters are drawn from the reserved underscore
    namespace with a session counter, and numeral expansions are
    memoized so shared subnumerals are built once.
    """

    def __init__(self, algebra: AssemblyAlgebra[V]):
        self.algebra = algebra
        self._fresh_counter = 0
        self._numerals: dict[int, V] = {}

    def fresh(self, stem: str) -> str:
        name = f"_{stem}{self._fresh_counter}"
        self._fresh_counter += 1
        return name

    # Helper templates over already-expanded values.

    def _implies(self, a: V, b: V) -> V:
        alg = self.algebra
        return alg.disj(alg.neg(a), b)

    def _and(self, a: V, b: V) -> V:
        alg = self.algebra
        return alg.neg(alg.disj(alg.neg(a), alg.neg(b)))

    def _iff(self, a: V, b: V) -> V:
        return self._and(self._implies(a, b), self._implies(b, a))

    def _exists(self, name: str, body: V) -> V:
        alg = self.algebra
        witness = alg.tau(name, body)
        return alg.subst(body, {name: witness})

    def _forall(self, name: str, body: V) -> V:
        alg = self.algebra
        witness = alg.tau(name, alg.neg(body))
        return alg.neg(alg.neg(alg.subst(body, {name: witness})))

    def _setof(self, name: str, body: V) -> V:
        alg = self.algebra
        holder = self.fresh("t")
        membership = alg.rel("elem", alg.letter(name), alg.letter(holder))
        return alg.tau(holder, self._forall(name, self._iff(membership, body)))

    def _enum(self, values: Sequence[V]) -> V:
        alg = self.algebra
        if len(values) == 1:
            values = [values[0], values[0]]
        z = self.fresh("z")
        chain = alg.rel("eq", alg.letter(z), values[-1])
        for value in reversed(values[:-1]):
            chain = alg.disj(alg.rel("eq", alg.letter(z), value), chain)
        return self._setof(z, chain)

    def _union(self, a: V, b: V) -> V:
        alg = self.algebra
        x = self.fresh("x")
        member = alg.letter(x)
        body = alg.disj(alg.rel("elem", member, a), alg.rel("elem", member, b))
        return self._setof(x, body)

    def _empty(self) -> V:
        alg = self.algebra
        x = self.fresh("x")
        holder = self.fresh("X")
        absent = alg.neg(alg.rel("elem", alg.letter(x), alg.letter(holder)))
        return alg.tau(holder, self._forall(x, absent))

    def _numeral(self, n: int) -> V:
        got = self._numerals.get(n)
        if got is None:
            if n == 0:
                got = self._empty()
            else:
                got = self._enum([self._numeral(k) for k in range(n)])
            self._numerals[n] = got
        return got

    def _want(self, e: Expression, sort: str, context: str) -> V:
        if expression_sort(e) != sort:
            raise SortError(f"{context} needs a {sort}, got {print_expression(e)!r}")
        return self.expand(e)

    def expand(self, e: Expression) -> V:
        alg = self.algebra
        match e:
            case LetterE(name):
                return alg.letter(_check_user_letter(name))
            case NotE(body):
                return alg.neg(self._want(body, RELATION, "not"))
            case OrE(a, b):
                return alg.disj(
                    self._want(a, RELATION, "or"), self._want(b, RELATION, "or")
                )
            case AndE(a, b):
                return self._and(
                    self._want(a, RELATION, "and"), self._want(b, RELATION, "and")
                )
            case ImpliesE(a, b):
                return self._implies(
                    self._want(a, RELATION, "implies"),
                    self._want(b, RELATION, "implies"),
                )
            case IffE(a, b):
                return self._iff(
                    self._want(a, RELATION, "iff"), self._want(b, RELATION, "iff")
                )
            case EqE(a, b):
                return alg.rel(
                    "eq", self._want(a, TERM, "eq"), self._want(b, TERM, "eq")
                )
            case InE(a, b):
                return alg.rel(
                    "elem", self._want(a, TERM, "in"), self._want(b, TERM, "in")
                )
            case NotInE(a, b):
                return alg.neg(
                    alg.rel(
                        "elem",
                        self._want(a, TERM, "notin"),
                        self._want(b, TERM, "notin"),
                    )
                )
            case NeqE(a, b):
                return alg.neg(
                    alg.rel(
                        "eq", self._want(a, TERM, "neq"), self._want(b, TERM, "neq")
                    )
                )
            case SubsetE(a, b):
                left = self._want(a, TERM, "subset")
                right = self._want(b, TERM, "subset")
                z = self.fresh("z")
                member = alg.letter(z)
                body = self._implies(
                    alg.rel("elem", member, left), alg.rel("elem", member, right)
                )
                return self._forall(z, body)
            case ForallE(binder, body):
                _check_user_letter(binder)
                return self._forall(binder, self._want(body, RELATION, "forall"))
            case ExistsE(binder, body):
                _check_user_letter(binder)
                return self._exists(binder, self._want(body, RELATION, "exists"))
            case TauE(binder, body):
                _check_user_letter(binder)
                return alg.tau(binder, self._want(body, RELATION, "tau"))
            case CollE(binder, body):
                _check_user_letter(binder)
                relation = self._want(body, RELATION, "coll")
                holder = self.fresh("t")
                membership = alg.rel(
                    "elem", alg.letter(binder), alg.letter(holder)
                )
                statement = self._forall(binder, self._iff(membership, relation))
                return self._exists(holder, statement)
            case SetOfE(binder, body):
                _check_user_letter(binder)
                return self._setof(binder, self._want(body, RELATION, "setof"))
            case EnumE(items):
                return self._enum([self._want(it, TERM, "enum") for it in items])
            case SingletonE(item):
                value = self._want(item, TERM, "singleton")
                return self._enum([value, value])
            case CoupleE(a, b):
                left = self._want(a, TERM, "couple")
                right = self._want(b, TERM, "couple")
                return self._enum([self._enum([left, left]), self._enum([left, right])])
            case EmptyE():
                return self._empty()
            case UnionE(a, b):
                return self._union(
                    self._want(a, TERM, "union"), self._want(b, TERM, "union")
                )
            case SuccE(item):
                value = self._want(item, TERM, "succ")
                return self._union(value, self._enum([value, value]))
            case NumeralE(n):
                return self._numeral(n)
            case SubstE(body, name, value):
                _check_user_letter(name)
                return alg.subst(
                    self.expand(body), {name: self._want(value, TERM, "subst")}
                )
        raise ExpressionError(f"not an expression: {e!r}")


def expand(e: Expression) -> Assembly:
    """Expand one expression into a raw assembly."""
    return ExpansionSession(TreeAlgebra()).expand(e)


# Surface grammar: parenthesized prefix terms over letters and keywords.

_BINDER_HEADS = {
    "forall": ForallE,
    "exists": ExistsE,
    "tau": TauE,
    "coll": CollE,
    "setof": SetOfE,
}
_UNARY_HEADS = {"not": NotE, "singleton": SingletonE, "succ": SuccE}
_BINARY_HEADS = {
    "or": OrE,
    "and": AndE,
    "implies": ImpliesE,
    "iff": IffE,
    "eq": EqE,
    "in": InE,
    "notin": NotInE,
    "neq": NeqE,
    "subset": SubsetE,
    "couple": CoupleE,
    "union": UnionE,
}
_KEYWORDS = (
    set(_BINDER_HEADS)
    | set(_UNARY_HEADS)
    | set(_BINARY_HEADS)
    | {"enum", "empty", "numeral", "subst"}
)


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1
    column = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            column = 1
            i += 1
        elif ch.isspace():
            column += 1
            i += 1
        elif ch in "()":
            tokens.append(_Token(ch, line, column))
            column += 1
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            word = text[i:j]
            tokens.append(_Token(word, line, column))
            column += j - i
            i = j
    return tokens


def parse_expression(text: str) -> Expression:
    """Parse one surface expression; errors carry line and column."""
    tokens = _tokenize(text)
    pos = 0

    def error(tok: _Token | None, message: str) -> ExpressionSyntaxError:
        if tok is None:
            last = tokens[-1] if tokens else _Token("", 1, 1)
            return ExpressionSyntaxError(last.line, last.column, message)
        return ExpressionSyntaxError(tok.line, tok.column, message)

    def peek() -> _Token | None:
        return tokens[pos] if pos < len(tokens) else None

    def take() -> _Token:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise error(None, "unexpected end of input")
        pos += 1
        return tok

    def take_letter(context: str) -> str:
        tok = take()
        if tok.text in "()" or tok.text in _KEYWORDS or not is_letter_name(tok.text):
            raise error(tok, f"{context} needs a letter, got {tok.text!r}")
        if tok.text.startswith(RESERVED_PREFIX):
            raise error(tok, f"letter {tok.text!r} is reserved for templates")
        return tok.text

    def expect_close() -> None:
        tok = take()
        if tok.text != ")":
            raise error(tok, f"expected ')', got {tok.text!r}")

    def parse() -> Expression:
        tok = take()
        if tok.text == ")":
            raise error(tok, "unexpected ')'")
        if tok.text != "(":
            if tok.text == "empty":
                return EmptyE()
            if tok.text in _KEYWORDS:
                raise error(tok, f"keyword {tok.text!r} needs parentheses")
            if not is_letter_name(tok.text):
                raise error(tok, f"not a letter or keyword: {tok.text!r}")
            if tok.text.startswith(RESERVED_PREFIX):
                raise error(tok, f"letter {tok.text!r} is reserved for templates")
            return LetterE(tok.text)
        head = take()
        name = head.text
        if name == "empty":
            expect_close()
            return EmptyE()
        if name == "numeral":
            number = take()
            if not number.text.isdigit():
                raise error(number, f"numeral needs a decimal count, got {number.text!r}")
            expect_close()
            return NumeralE(int(number.text))
        if name in _UNARY_HEADS:
            body = parse()
            expect_close()
            return _UNARY_HEADS[name](body)
        if name in _BINARY_HEADS:
            left = parse()
            right = parse()
            expect_close()
            return _BINARY_HEADS[name](left, right)
        if name in _BINDER_HEADS:
            binder = take_letter(name)
            body = parse()
            expect_close()
            return _BINDER_HEADS[name](binder, body)
        if name == "enum":
            items = [parse()]
            while peek() is not None and peek().text != ")":
                items.append(parse())
            expect_close()
            return EnumE(tuple(items))
        if name == "subst":
            body = parse()
            target = take_letter("subst")
            value = parse()
            expect_close()
            return SubstE(body, target, value)
        raise error(head, f"unknown abbreviation name: {name!r}")

    result = parse()
    extra = peek()
    if extra is not None:
        raise error(extra, f"trailing input after expression: {extra.text!r}")
    return result


def print_expression(e: Expression) -> str:
    """Canonical surface form; parsing it back yields an equal expression."""
    match e:
        case LetterE(name):
            return name
        case EmptyE():
            return "empty"
        case NumeralE(n):
            return f"(numeral {n})"
        case NotE(body):
            return f"(not {print_expression(body)})"
        case SingletonE(item):
            return f"(singleton {print_expression(item)})"
        case SuccE(item):
            return f"(succ {print_expression(item)})"
        case EnumE(items):
            inner = " ".join(print_expression(it) for it in items)
            return f"(enum {inner})"
        case SubstE(body, name, value):
            return f"(subst {print_expression(body)} {name} {print_expression(value)})"
        case ForallE(binder, body):
            return f"(forall {binder} {print_expression(body)})"
        case ExistsE(binder, body):
            return f"(exists {binder} {print_expression(body)})"
        case TauE(binder, body):
            return f"(tau {binder} {print_expression(body)})"
        case CollE(binder, body):
            return f"(coll {binder} {print_expression(body)})"
        case SetOfE(binder, body):
            return f"(setof {binder} {print_expression(body)})"
    for keyword, cls in _BINARY_HEADS.items():
        if isinstance(e, cls):
            return (
                f"({keyword} {print_expression(e.left)} {print_expression(e.right)})"
            )
    raise ExpressionError(f"not an expression: {e!r}")
