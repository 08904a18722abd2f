"""Sign assemblies: trees over tau, box, not, or, eq, in and letters.

An assembly is a finite tree whose leaves are letters or boxes and whose
internal nodes carry the logical signs.  Binding is nameless: a ``Tau``
node binds the boxes below it, each box recording how many tau nodes it
must climb to reach its binder.  Two assemblies are equal exactly when
their linearizations (sign sequences plus tau-box links) are identical,
so renaming a bound letter never changes the value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Sign",
    "Assembly",
    "Letter",
    "BoundRef",
    "Neg",
    "Disj",
    "Rel",
    "Tau",
    "Classification",
    "LinearAssembly",
    "ArityError",
    "BindingError",
    "LinearFormatError",
    "LinearParseError",
    "build",
    "letter",
    "neg",
    "disj",
    "eq",
    "elem",
    "tau_bind",
    "substitute",
    "occurrences",
    "linearize",
    "delinearize",
    "classify",
    "is_balanced",
    "concatenate",
    "is_letter_name",
]

# Serialized tokens for the six fixed signs; anything else is a letter.
TOKEN_TAU = "tau"
TOKEN_BOX = "box"
TOKEN_NOT = "not"
TOKEN_OR = "or"
TOKEN_EQ = "eq"
TOKEN_IN = "in"

KEYWORD_TOKENS = frozenset(
    {TOKEN_TAU, TOKEN_BOX, TOKEN_NOT, TOKEN_OR, TOKEN_EQ, TOKEN_IN}
)

_LETTER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_KIND_TO_TOKEN = {
    "tau": TOKEN_TAU,
    "box": TOKEN_BOX,
    "neg": TOKEN_NOT,
    "disj": TOKEN_OR,
    "eq": TOKEN_EQ,
    "elem": TOKEN_IN,
}
_TOKEN_TO_KIND = {v: k for k, v in _KIND_TO_TOKEN.items()}

_ARITY_BY_TOKEN = {
    TOKEN_TAU: 1,
    TOKEN_NOT: 1,
    TOKEN_OR: 2,
    TOKEN_EQ: 2,
    TOKEN_IN: 2,
}


def is_letter_name(name: str) -> bool:
    """True for identifiers usable as letters (keywords are excluded)."""
    return bool(_LETTER_RE.match(name)) and name not in KEYWORD_TOKENS


def _check_letter(name: str) -> str:
    if not isinstance(name, str) or not is_letter_name(name):
        raise ArityError(f"invalid letter name: {name!r}")
    return name


class ArityError(ValueError):
    """A constructor received the wrong number or kind of arguments."""


class BindingError(ValueError):
    """An operation met a box reference without an enclosing binder."""


class LinearFormatError(ValueError):
    """A serialized sign sequence or link list is malformed."""


class LinearParseError(ValueError):
    """A sign sequence does not parse back into a single assembly.

    ``index`` is the 1-based position of the first offending sign.
    """

    def __init__(self, index: int, message: str):
        super().__init__(f"at sign {index}: {message}")
        self.index = index


@dataclass(frozen=True)
class Sign:
    """One sign of a linearized assembly: a fixed kind plus letter name."""

    kind: str
    name: str = ""

    def __post_init__(self) -> None:
        if self.kind == "letter":
            if not is_letter_name(self.name):
                raise ArityError(f"invalid letter name: {self.name!r}")
        elif self.kind in _KIND_TO_TOKEN:
            if self.name:
                raise ArityError(f"sign kind {self.kind!r} carries no name")
        else:
            raise ArityError(f"unknown sign kind: {self.kind!r}")

    @property
    def token(self) -> str:
        return self.name if self.kind == "letter" else _KIND_TO_TOKEN[self.kind]

    @staticmethod
    def from_token(token: str) -> "Sign":
        if token in _TOKEN_TO_KIND:
            return Sign(_TOKEN_TO_KIND[token])
        return Sign("letter", token)


class Classification(Enum):
    TERM = "Term"
    RELATION = "Relation"
    NEITHER = "Neither"

    def __str__(self) -> str:  # pragma: no cover - display convenience
        return self.value


# Node tags; kept as plain ints for fast dispatch in the traversal loops.
_LETTER, _REF, _NEG, _DISJ, _REL, _TAU = range(6)

_EMPTY_LETTERS: frozenset = frozenset()


class Assembly:
    """Base class of assembly nodes.

    Nodes are immutable and cache their sign count (``size``), box count
    (``boxes``), deepest dangling box depth (``max_ref``, 0 when the
    assembly is closed), the set of letters occurring (``letters``) and a
    structural hash, so the derived quantities cost O(1) per construction
    even on heavily shared trees.
    """

    __slots__ = ("size", "boxes", "max_ref", "letters", "_hash")
    tag = -1

    size: int
    boxes: int
    max_ref: int
    letters: frozenset

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Assembly):
            return NotImplemented
        return _equal(self, other)

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.size <= 48 and self.max_ref == 0:
            return f"<Assembly {' '.join(linearize(self).tokens)}>"
        return f"<Assembly of {self.size} signs, {self.boxes} links>"


class Letter(Assembly):
    __slots__ = ("name",)
    __match_args__ = ("name",)
    tag = _LETTER

    def __init__(self, name: str):
        _check_letter(name)
        self.name = name
        self.size = 1
        self.boxes = 0
        self.max_ref = 0
        self.letters = frozenset((name,))
        self._hash = hash((_LETTER, name))


class BoundRef(Assembly):
    """A box, pointing ``depth`` tau binders upward (innermost is 1)."""

    __slots__ = ("depth",)
    __match_args__ = ("depth",)
    tag = _REF

    def __init__(self, depth: int):
        if not isinstance(depth, int) or depth < 1:
            raise ArityError(f"box depth must be a positive integer: {depth!r}")
        self.depth = depth
        self.size = 1
        self.boxes = 1
        self.max_ref = depth
        self.letters = _EMPTY_LETTERS
        self._hash = hash((_REF, depth))


class Neg(Assembly):
    __slots__ = ("body",)
    __match_args__ = ("body",)
    tag = _NEG

    def __init__(self, body: Assembly):
        _check_node(body)
        self.body = body
        self.size = body.size + 1
        self.boxes = body.boxes
        self.max_ref = body.max_ref
        self.letters = body.letters
        self._hash = hash((_NEG, body._hash))


class Disj(Assembly):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")
    tag = _DISJ

    def __init__(self, left: Assembly, right: Assembly):
        _check_node(left)
        _check_node(right)
        self.left = left
        self.right = right
        self.size = left.size + right.size + 1
        self.boxes = left.boxes + right.boxes
        self.max_ref = max(left.max_ref, right.max_ref)
        self.letters = left.letters | right.letters
        self._hash = hash((_DISJ, left._hash, right._hash))


class Rel(Assembly):
    """A relational sign (``eq`` or ``elem``) over two subassemblies."""

    __slots__ = ("rel", "left", "right")
    __match_args__ = ("rel", "left", "right")
    tag = _REL

    def __init__(self, rel: str, left: Assembly, right: Assembly):
        if rel not in ("eq", "elem"):
            raise ArityError(f"relational sign must be 'eq' or 'elem': {rel!r}")
        _check_node(left)
        _check_node(right)
        self.rel = rel
        self.left = left
        self.right = right
        self.size = left.size + right.size + 1
        self.boxes = left.boxes + right.boxes
        self.max_ref = max(left.max_ref, right.max_ref)
        self.letters = left.letters | right.letters
        self._hash = hash((_REL, rel, left._hash, right._hash))


class Tau(Assembly):
    """A tau binder; boxes below it at matching depth are its links."""

    __slots__ = ("body",)
    __match_args__ = ("body",)
    tag = _TAU

    def __init__(self, body: Assembly):
        _check_node(body)
        self.body = body
        self.size = body.size + 1
        self.boxes = body.boxes
        self.max_ref = max(0, body.max_ref - 1)
        self.letters = body.letters
        self._hash = hash((_TAU, body._hash))


def _check_node(node: object) -> None:
    if not isinstance(node, Assembly):
        raise ArityError(f"expected an assembly, got {type(node).__name__}")


def _equal(a: Assembly, b: Assembly) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if x._hash != y._hash or x.tag != y.tag or x.size != y.size:
            return False
        t = x.tag
        if t == _LETTER:
            if x.name != y.name:
                return False
        elif t == _REF:
            if x.depth != y.depth:
                return False
        elif t == _NEG or t == _TAU:
            stack.append((x.body, y.body))
        elif t == _DISJ:
            stack.append((x.left, y.left))
            stack.append((x.right, y.right))
        else:
            if x.rel != y.rel:
                return False
            stack.append((x.left, y.left))
            stack.append((x.right, y.right))
    return True


def letter(name: str) -> Letter:
    return Letter(name)


def neg(body: Assembly) -> Neg:
    return Neg(body)


def disj(left: Assembly, right: Assembly) -> Disj:
    return Disj(left, right)


def eq(left: Assembly, right: Assembly) -> Rel:
    return Rel("eq", left, right)


def elem(left: Assembly, right: Assembly) -> Rel:
    return Rel("elem", left, right)


def build(kind: str, *children) -> Assembly:
    """Construct a node by kind name, checking arity.

    ``build('letter', name)`` takes the letter name; the sign kinds
    ``neg``, ``disj``, ``eq``, ``elem`` take 1, 2, 2, 2 subassemblies.
    Tau nodes are introduced through :func:`tau_bind`, never directly.
    """
    if kind == "letter":
        if len(children) != 1:
            raise ArityError("letter takes exactly one name")
        return Letter(children[0])
    if kind == "neg":
        if len(children) != 1:
            raise ArityError("neg takes exactly one assembly")
        return Neg(children[0])
    if kind in ("disj", "eq", "elem"):
        if len(children) != 2:
            raise ArityError(f"{kind} takes exactly two assemblies")
        if kind == "disj":
            return Disj(children[0], children[1])
        return Rel(kind, children[0], children[1])
    raise ArityError(f"unknown constructor kind: {kind!r}")


def tau_bind(name: str, body: Assembly) -> Tau:
    """Bind every free occurrence of ``name`` in ``body`` under a new tau.

    When the letter does not occur the result is a bare tau over the
    unchanged body (zero new links).  Adds one sign and as many links as
    there were occurrences.
    """
    _check_letter(name)
    _check_node(body)
    if body.max_ref:
        raise BindingError("tau_bind body has a dangling box reference")
    return Tau(_close(body, name, 1))


def _close(node: Assembly, name: str, depth: int) -> Assembly:
    if name not in node.letters:
        return node
    t = node.tag
    if t == _LETTER:
        return BoundRef(depth)
    if t == _NEG:
        return Neg(_close(node.body, name, depth))
    if t == _TAU:
        return Tau(_close(node.body, name, depth + 1))
    if t == _DISJ:
        return Disj(_close(node.left, name, depth), _close(node.right, name, depth))
    return Rel(
        node.rel, _close(node.left, name, depth), _close(node.right, name, depth)
    )


def _open(node: Assembly, name: str, depth: int = 1) -> Assembly:
    """Inverse of binding: replace boxes bound at ``depth`` by a letter."""
    if node.boxes == 0 and node.max_ref == 0:
        return node
    t = node.tag
    if t == _REF:
        if node.depth == depth:
            return Letter(name)
        if node.depth > depth:
            raise BindingError("box reference escapes the assembly being opened")
        return node
    if t == _LETTER:
        return node
    if t == _NEG:
        return Neg(_open(node.body, name, depth))
    if t == _TAU:
        return Tau(_open(node.body, name, depth + 1))
    if t == _DISJ:
        return Disj(_open(node.left, name, depth), _open(node.right, name, depth))
    return Rel(node.rel, _open(node.left, name, depth), _open(node.right, name, depth))


def substitute(node: Assembly, bindings: Mapping[str, Assembly]) -> Assembly:
    """Replace every free occurrence of each mapped letter, simultaneously.

    Images are inserted as shared references and are never re-scanned, so
    the usual count laws hold exactly.  Boxes are inert: substitution can
    never capture, binders being nameless.
    """
    _check_node(node)
    images = {}
    for name, image in bindings.items():
        _check_letter(name)
        _check_node(image)
        if image.max_ref:
            raise BindingError(f"substitution image for {name!r} has a dangling box")
        images[name] = image
    if not images:
        return node
    keys = frozenset(images)

    def go(t: Assembly) -> Assembly:
        if keys.isdisjoint(t.letters):
            return t
        k = t.tag
        if k == _LETTER:
            return images.get(t.name, t)
        if k == _NEG:
            return Neg(go(t.body))
        if k == _TAU:
            return Tau(go(t.body))
        if k == _DISJ:
            return Disj(go(t.left), go(t.right))
        return Rel(t.rel, go(t.left), go(t.right))

    return go(node)


def occurrences(name: str, node: Assembly) -> int:
    """Number of free occurrences of a letter, counted with multiplicity."""
    _check_letter(name)
    _check_node(node)
    memo: dict[int, int] = {}

    def go(t: Assembly) -> int:
        if name not in t.letters:
            return 0
        key = id(t)
        cached = memo.get(key)
        if cached is not None:
            return cached
        k = t.tag
        if k == _LETTER:
            n = 1
        elif k == _NEG or k == _TAU:
            n = go(t.body)
        else:
            n = go(t.left) + go(t.right)
        memo[key] = n
        return n

    return go(node)


class LinearAssembly:
    """An explicit sign sequence with its tau-box link pairs.

    ``tokens`` holds the serialized signs; ``links`` the (tau index,
    box index) pairs, 1-based and sorted by source then target.  The
    sequence need not be balanced (concatenations of assemblies are
    legitimate values here); :func:`delinearize` is where full
    well-formedness is enforced.
    """

    __slots__ = ("tokens", "links")

    def __init__(
        self,
        tokens: Iterable[str],
        links: Iterable[tuple[int, int]] = (),
    ):
        toks = tuple(tokens)
        for pos, tok in enumerate(toks, start=1):
            if tok not in KEYWORD_TOKENS and not is_letter_name(tok):
                raise LinearFormatError(f"invalid sign token at {pos}: {tok!r}")
        pairs = []
        n = len(toks)
        for pair in links:
            i, j = pair
            if not (isinstance(i, int) and isinstance(j, int)):
                raise LinearFormatError(f"link indices must be integers: {pair!r}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise LinearFormatError(f"link {pair!r} out of range 1..{n}")
            if i >= j:
                raise LinearFormatError(f"link {pair!r} must point forward")
            pairs.append((i, j))
        self.tokens = toks
        self.links = tuple(sorted(pairs))

    @classmethod
    def _trusted(
        cls, tokens: tuple[str, ...], links: tuple[tuple[int, int], ...]
    ) -> "LinearAssembly":
        self = cls.__new__(cls)
        self.tokens = tokens
        self.links = links
        return self

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearAssembly):
            return NotImplemented
        return self.tokens == other.tokens and self.links == other.links

    def __hash__(self) -> int:
        return hash((self.tokens, self.links))

    def __repr__(self) -> str:
        if len(self.tokens) <= 48:
            return f"<LinearAssembly {' '.join(self.tokens)} | {list(self.links)}>"
        return f"<LinearAssembly of {len(self.tokens)} signs, {len(self.links)} links>"

    def sign(self, index: int) -> Sign:
        """The sign at a 1-based position."""
        return Sign.from_token(self.tokens[index - 1])

    @property
    def signs(self) -> Iterator[Sign]:
        return (Sign.from_token(t) for t in self.tokens)

    def to_text(self) -> str:
        """Bit-exact two-line text form: a signs line and a links line."""
        head = "signs:" + "".join(" " + t for t in self.tokens)
        tail = "links:" + "".join(f" ({i} {j})" for i, j in self.links)
        return head + "\n" + tail + "\n"

    @staticmethod
    def from_text(text: str) -> "LinearAssembly":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 2:
            raise LinearFormatError("expected exactly a signs line and a links line")
        return _parse_two_lines(lines[0], lines[1])

    def to_json_obj(self) -> dict:
        """Canonical interchange form mirroring the two fields."""
        return {
            "signs": list(self.tokens),
            "links": [[i, j] for i, j in self.links],
        }

    @staticmethod
    def from_json_obj(obj: Mapping) -> "LinearAssembly":
        try:
            tokens = obj["signs"]
            links = [(int(i), int(j)) for i, j in obj["links"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise LinearFormatError(f"malformed linear assembly object: {exc}")
        return LinearAssembly(tokens, links)


def _parse_two_lines(signs_line: str, links_line: str) -> LinearAssembly:
    if not signs_line.startswith("signs:"):
        raise LinearFormatError("first line must start with 'signs:'")
    if not links_line.startswith("links:"):
        raise LinearFormatError("second line must start with 'links:'")
    tokens = signs_line[len("signs:") :].split()
    body = links_line[len("links:") :].strip()
    links = []
    if body:
        for piece in re.findall(r"\([^)]*\)|\S+", body):
            m = re.match(r"\(\s*(\d+)\s+(\d+)\s*\)\Z", piece)
            if not m:
                raise LinearFormatError(f"malformed link entry: {piece!r}")
            links.append((int(m.group(1)), int(m.group(2))))
    return LinearAssembly(tokens, links)


_POP_TAU = object()


def linearize(node: Assembly) -> LinearAssembly:
    """Prefix traversal emitting one sign per node and one link per box."""
    _check_node(node)
    if node.max_ref:
        raise BindingError("cannot linearize an assembly with dangling boxes")
    tokens: list[str] = []
    links: list[tuple[int, int]] = []
    taus: list[int] = []
    stack: list = [node]
    append_token = tokens.append
    push = stack.append
    while stack:
        item = stack.pop()
        if item is _POP_TAU:
            taus.pop()
            continue
        t = item.tag
        if t == _LETTER:
            append_token(item.name)
        elif t == _REF:
            index = len(tokens) + 1
            links.append((taus[-item.depth], index))
            append_token(TOKEN_BOX)
        elif t == _NEG:
            append_token(TOKEN_NOT)
            push(item.body)
        elif t == _DISJ:
            append_token(TOKEN_OR)
            push(item.right)
            push(item.left)
        elif t == _REL:
            append_token(TOKEN_EQ if item.rel == "eq" else TOKEN_IN)
            push(item.right)
            push(item.left)
        else:
            taus.append(len(tokens) + 1)
            append_token(TOKEN_TAU)
            push(_POP_TAU)
            push(item.body)
    links.sort()
    return LinearAssembly._trusted(tuple(tokens), tuple(links))


def delinearize(lin: LinearAssembly) -> Assembly:
    """Parse a linear assembly back into a tree, or reject it.

    Errors carry the 1-based index of the first offending sign: an
    unsatisfiable arity, a sign after the tree is complete, a box with
    no link or with several, a link whose source is not an enclosing
    tau, or link endpoints of the wrong kind.
    """
    tokens = lin.tokens
    if not tokens:
        raise LinearParseError(1, "empty sign sequence")
    binder_of: dict[int, int] = {}
    for i, j in lin.links:
        if tokens[i - 1] != TOKEN_TAU:
            raise LinearParseError(i, "link source is not a tau sign")
        if tokens[j - 1] != TOKEN_BOX:
            raise LinearParseError(j, "link targets a sign that is not a box")
        if j in binder_of:
            raise LinearParseError(j, "box is the target of more than one link")
        binder_of[j] = i

    # Frames: [token index, arity, children, is_tau]
    frames: list[list] = []
    taus: list[int] = []
    root: Assembly | None = None

    def finish(node: Assembly) -> Assembly | None:
        while frames:
            frame = frames[-1]
            frame[2].append(node)
            if len(frame[2]) < frame[1]:
                return None
            frames.pop()
            pos, _, children, _ = frame
            tok = tokens[pos - 1]
            if tok == TOKEN_NOT:
                node = Neg(children[0])
            elif tok == TOKEN_OR:
                node = Disj(children[0], children[1])
            elif tok == TOKEN_EQ:
                node = Rel("eq", children[0], children[1])
            elif tok == TOKEN_IN:
                node = Rel("elem", children[0], children[1])
            else:
                node = Tau(children[0])
                taus.pop()
        return node

    for index, tok in enumerate(tokens, start=1):
        if root is not None:
            raise LinearParseError(index, "sign after the assembly is complete")
        arity = _ARITY_BY_TOKEN.get(tok)
        if arity is not None:
            if tok == TOKEN_TAU:
                taus.append(index)
            frames.append([index, arity, [], tok == TOKEN_TAU])
            continue
        if tok == TOKEN_BOX:
            source = binder_of.get(index)
            if source is None:
                raise LinearParseError(index, "box has no link")
            if source not in taus:
                raise LinearParseError(
                    index, "link source tau does not enclose this box"
                )
            depth = len(taus) - taus.index(source)
            node: Assembly = BoundRef(depth)
        else:
            node = Letter(tok)
        root = finish(node)

    if root is None:
        raise LinearParseError(frames[-1][0], "signs exhausted before arity is met")
    return root


def is_balanced(lin: LinearAssembly) -> bool:
    """True when arity parsing consumes the signs as exactly one tree."""
    pending = 1
    for tok in lin.tokens:
        if pending == 0:
            return False
        pending += _ARITY_BY_TOKEN.get(tok, 0) - 1
    return pending == 0


def classify(value: "Assembly | LinearAssembly") -> Classification:
    """Sort an assembly: Term, Relation, or Neither.

    Letters, boxes and tau nodes are terms; not/or over relations and
    eq/in over terms are relations; everything else, including sign
    sequences that fail to parse, is Neither.
    """
    if isinstance(value, LinearAssembly):
        try:
            value = delinearize(value)
        except LinearParseError:
            return Classification.NEITHER
    _check_node(value)
    TERM, RELATION, NEITHER = (
        Classification.TERM,
        Classification.RELATION,
        Classification.NEITHER,
    )
    memo: dict[int, Classification] = {}

    def go(t: Assembly) -> Classification:
        key = id(t)
        got = memo.get(key)
        if got is not None:
            return got
        k = t.tag
        if k == _LETTER or k == _REF or k == _TAU:
            out = TERM
        elif k == _NEG:
            out = RELATION if go(t.body) is RELATION else NEITHER
        elif k == _DISJ:
            out = (
                RELATION
                if go(t.left) is RELATION and go(t.right) is RELATION
                else NEITHER
            )
        else:
            out = RELATION if go(t.left) is TERM and go(t.right) is TERM else NEITHER
        memo[key] = out
        return out

    return go(value)


def concatenate(*parts: "LinearAssembly") -> LinearAssembly:
    """Juxtapose linear assemblies, shifting the link indices of each part."""
    tokens: list[str] = []
    links: list[tuple[int, int]] = []
    for part in parts:
        offset = len(tokens)
        tokens.extend(part.tokens)
        links.extend((i + offset, j + offset) for i, j in part.links)
    links.sort()
    return LinearAssembly._trusted(tuple(tokens), tuple(links))
