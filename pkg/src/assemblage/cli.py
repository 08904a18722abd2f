"""Batch command line: expansion, counting, classification, verification,
hereditarily finite evaluation, and fixed-point witnesses.

Exit status is 0 on success, 1 on any domain error (unreadable input,
parse failure, violated precondition), 2 on usage errors.  Identical
invocations over identical input produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Mapping, Optional, Sequence

from . import hf as hfmod
from .assembly import (
    Assembly,
    LinearAssembly,
    _DISJ,
    _LETTER,
    _NEG,
    _REF,
    _REL,
    _TAU,
    classify,
    delinearize,
    linearize,
)
from .counts import (
    DEFAULT_SIGN_BUDGET,
    count_materialized,
    count_symbolic,
    growth_table,
    numeral_counts,
)
from .expander import expand, parse_expression
from .fixpoints import (
    InjectionPair,
    MonotoneMap,
    cantor_bernstein,
    koenig_uncovered,
    tarski_extrema,
)
from .formative import verify_formative
from .hf import (
    HfSet,
    graph_from_pairs,
    make_set,
    parse_hf,
)
from .ordinals import (
    FiniteOrder,
    cardinal_of,
    numeral,
    sup_ordinals,
    successor,
    tuple_graph,
)

__all__ = ["main", "run"]


def _dump_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _expression_from_args(args) -> "Assembly":
    if args.file is not None:
        text = _read_input(args.file)
    else:
        text = args.expr
    return expand(parse_expression(text))


# ----- expand -----


def _cmd_expand(args) -> int:
    lin = linearize(_expression_from_args(args))
    if args.json:
        print(_dump_json(lin.to_json_obj()))
    else:
        sys.stdout.write(lin.to_text())
    return 0


# ----- count -----


def _cmd_count(args) -> int:
    if args.numeral is not None:
        cv = numeral_counts(args.numeral)
        if args.json:
            print(
                _dump_json(
                    {
                        "n": str(args.numeral),
                        "signs": str(cv.signs),
                        "links": str(cv.links),
                    }
                )
            )
        else:
            print(f"n={args.numeral} signs={cv.signs} links={cv.links}")
        return 0
    text = _read_input(args.file) if args.file is not None else args.expr
    expression = parse_expression(text)
    if args.materialize:
        cv = count_materialized(expand(expression), budget=args.budget)
    else:
        cv = count_symbolic(expression)
    if args.json:
        print(_dump_json(cv.to_json_obj()))
    else:
        print(f"signs: {cv.signs}")
        print(f"links: {cv.links}")
        if cv.occ:
            listing = " ".join(f"{k}={v}" for k, v in sorted(cv.occ.items()))
            print(f"occurrences: {listing}")
    return 0


# ----- numeral -----


def _cmd_numeral(args) -> int:
    if args.table:
        rows = growth_table(args.n)
        if args.json:
            print(
                _dump_json(
                    [
                        {"n": str(n), "signs": str(s), "links": str(l)}
                        for n, s, l in rows
                    ]
                )
            )
        else:
            for n, s, l in rows:
                print(f"n={n} signs={s} links={l}")
        return 0
    cv = numeral_counts(args.n)
    if args.json:
        print(
            _dump_json(
                {"n": str(args.n), "signs": str(cv.signs), "links": str(cv.links)}
            )
        )
    else:
        print(f"n={args.n} signs={cv.signs} links={cv.links}")
    return 0


# ----- classify -----


def _cmd_classify(args) -> int:
    lin = LinearAssembly.from_text(_read_input(args.path))
    print(classify(lin).value)
    return 0


# ----- formative -----


def _split_linear_blocks(text: str) -> list[LinearAssembly]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) % 2:
        raise ValueError("sequence file needs a links line for every signs line")
    out = []
    for k in range(0, len(lines), 2):
        out.append(LinearAssembly.from_text(lines[k] + "\n" + lines[k + 1]))
    return out


def _cmd_formative(args) -> int:
    report = verify_formative(_split_linear_blocks(_read_input(args.path)))
    print(report.describe())
    return 0


# ----- hf evaluation -----

_HF_FUNCTIONS = {
    "union": 2,
    "inter": 2,
    "diff": 2,
    "powerset": 1,
    "product": 2,
    "couple": 2,
    "pr1": 1,
    "pr2": 1,
    "image": 2,
    "preimage": 2,
    "compose": 2,
    "inverse": 1,
    "diagonal": 1,
    "closure": 2,
    "quotient": 2,
    "succ": 1,
    "card": 1,
    "sup": 1,
    "numeral": 1,
}


class _HfScript:
    """let-bindings plus one expression per statement, ';'-separated."""

    def __init__(self, env: Optional[Mapping[str, HfSet]] = None):
        self.env: dict[str, HfSet] = dict(env or {})

    def evaluate(self, text: str) -> HfSet:
        value, rest = self._parse(text)
        if rest.strip():
            raise hfmod.HfSyntaxError(f"trailing input: {rest.strip()!r}")
        return value

    def run(self, script: str) -> list[HfSet]:
        results = []
        for statement in script.split(";"):
            statement = statement.strip()
            if not statement:
                continue
            m = re.match(r"let\s+([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.*)\Z", statement, re.S)
            if m:
                self.env[m.group(1)] = self.evaluate(m.group(2))
            else:
                results.append(self.evaluate(statement))
        return results

    def _parse(self, text: str) -> tuple[HfSet, str]:
        text = text.lstrip()
        if not text:
            raise hfmod.HfSyntaxError("empty expression")
        if text[0] == "{":
            return self._parse_braces(text)
        m = re.match(r"[A-Za-z][A-Za-z0-9_]*", text)
        if not m:
            raise hfmod.HfSyntaxError(f"unexpected character: {text[0]!r}")
        name = m.group(0)
        rest = text[m.end():].lstrip()
        if rest.startswith("("):
            return self._parse_call(name, rest[1:])
        if name in self.env:
            return self.env[name], text[m.end():]
        raise hfmod.HfSyntaxError(f"unknown name: {name!r}")

    def _parse_braces(self, text: str) -> tuple[HfSet, str]:
        rest = text[1:].lstrip()
        elements = []
        if rest.startswith("}"):
            return make_set(()), rest[1:]
        while True:
            value, rest = self._parse(rest)
            elements.append(value)
            rest = rest.lstrip()
            if rest.startswith(","):
                rest = rest[1:].lstrip()
                continue
            if rest.startswith("}"):
                return make_set(elements), rest[1:]
            raise hfmod.HfSyntaxError(f"expected ',' or '}}' at {rest[:12]!r}")

    def _parse_call(self, name: str, rest: str) -> tuple[HfSet, str]:
        if name == "numeral":
            m = re.match(r"\s*(\d+)\s*\)", rest)
            if not m:
                raise hfmod.HfSyntaxError("numeral needs a decimal argument")
            return numeral(int(m.group(1))), rest[m.end():]
        arity = _HF_FUNCTIONS.get(name)
        if arity is None:
            raise hfmod.HfSyntaxError(f"unknown function: {name!r}")
        arguments = []
        for k in range(arity):
            value, rest = self._parse(rest)
            arguments.append(value)
            rest = rest.lstrip()
            if k + 1 < arity:
                if not rest.startswith(","):
                    raise hfmod.HfSyntaxError(f"{name} expects {arity} arguments")
                rest = rest[1:]
        if not rest.startswith(")"):
            raise hfmod.HfSyntaxError(f"missing ')' after {name}")
        return self._apply(name, arguments), rest[1:]

    @staticmethod
    def _apply(name: str, a: list[HfSet]) -> HfSet:
        if name == "union":
            return a[0].union(a[1])
        if name == "inter":
            return a[0].intersection(a[1])
        if name == "diff":
            return a[0].difference(a[1])
        if name == "powerset":
            return hfmod.powerset(a[0])
        if name == "product":
            return hfmod.product(a[0], a[1])
        if name == "couple":
            return hfmod.couple(a[0], a[1])
        if name == "pr1":
            return hfmod.pr1_set(a[0])
        if name == "pr2":
            return hfmod.pr2_set(a[0])
        if name == "image":
            return hfmod.graph_image(a[0], a[1])
        if name == "preimage":
            return hfmod.graph_preimage(a[0], a[1])
        if name == "compose":
            return hfmod.graph_compose(a[0], a[1])
        if name == "inverse":
            return hfmod.graph_inverse(a[0])
        if name == "diagonal":
            return hfmod.diagonal(a[0])
        if name == "closure":
            return hfmod.equivalence_closure(a[0], a[1])
        if name == "quotient":
            return hfmod.quotient(a[0], a[1])
        if name == "succ":
            return successor(a[0])
        if name == "card":
            return cardinal_of(a[0])
        if name == "sup":
            return sup_ordinals(a[0])
        raise hfmod.HfSyntaxError(f"unknown function: {name!r}")


def _cmd_hf(args) -> int:
    script = _read_input(args.file) if args.file is not None else args.script
    for value in _HfScript().run(script):
        print(value)
    return 0


# ----- instance files -----


def _instance_lines(text: str) -> list[tuple[str, str]]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, body = line.partition(":")
        if not sep:
            raise ValueError(f"expected 'key: ...' line, got {line!r}")
        out.append((key.strip(), body.strip()))
    return out


def _split_literals(body: str) -> list[str]:
    """Split whitespace-separated set literals (no spaces inside literals)."""
    return body.split()


def _parse_arrow(body: str) -> tuple[HfSet, HfSet]:
    left, sep, right = body.partition("->")
    if not sep:
        raise ValueError(f"expected 'x -> y', got {body!r}")
    return parse_hf(left.strip()), parse_hf(right.strip())


def _parse_pair_list(body: str) -> list[tuple[HfSet, HfSet]]:
    pairs = []
    for piece in re.findall(r"\(([^()]*)\)", body):
        parts = piece.split()
        if len(parts) != 2:
            raise ValueError(f"expected '(a b)' pair, got ({piece})")
        pairs.append((parse_hf(parts[0]), parse_hf(parts[1])))
    return pairs


def _parse_tuples(body: str, length: int) -> list[HfSet]:
    tuples = []
    for piece in re.findall(r"\(([^()]*)\)", body):
        parts = [p.strip() for p in piece.split(",")]
        if len(parts) != length:
            raise ValueError(f"expected a {length}-tuple, got ({piece})")
        tuples.append(tuple_graph([parse_hf(p) for p in parts]))
    return tuples


def _load_order(pairs: list[tuple[str, str]]) -> tuple[FiniteOrder, dict]:
    carrier_elems: list[HfSet] = []
    relation_pairs: list[tuple[HfSet, HfSet]] = []
    table: dict[HfSet, HfSet] = {}
    for key, body in pairs:
        if key == "carrier":
            carrier_elems.extend(parse_hf(p) for p in _split_literals(body))
        elif key == "pairs":
            relation_pairs.extend(_parse_pair_list(body))
        elif key == "map":
            src, dst = _parse_arrow(body)
            table[src] = dst
        else:
            raise ValueError(f"unknown key in order instance: {key!r}")
    order = FiniteOrder(make_set(carrier_elems), graph_from_pairs(relation_pairs))
    return order, table


def _cmd_tarski(args) -> int:
    order, table = _load_order(_instance_lines(_read_input(args.path)))
    v, w = tarski_extrema(MonotoneMap(order, table))
    if args.json:
        print(_dump_json({"least": str(v), "greatest": str(w)}))
    else:
        print(f"least: {v}")
        print(f"greatest: {w}")
    return 0


def _cmd_cb(args) -> int:
    source: list[HfSet] = []
    target: list[HfSet] = []
    forward: dict[HfSet, HfSet] = {}
    backward: dict[HfSet, HfSet] = {}
    for key, body in _instance_lines(_read_input(args.path)):
        if key == "E":
            source.extend(parse_hf(p) for p in _split_literals(body))
        elif key == "F":
            target.extend(parse_hf(p) for p in _split_literals(body))
        elif key == "f":
            src, dst = _parse_arrow(body)
            forward[src] = dst
        elif key == "g":
            src, dst = _parse_arrow(body)
            backward[src] = dst
        else:
            raise ValueError(f"unknown key in injection instance: {key!r}")
    witness = cantor_bernstein(
        InjectionPair(make_set(source), make_set(target), forward, backward)
    )
    items = sorted(witness.bijection.items(), key=lambda kv: kv[0])
    if args.json:
        print(
            _dump_json(
                {
                    "fixed_set": str(witness.fixed_set),
                    "bijection": [[str(k), str(v)] for k, v in items],
                }
            )
        )
    else:
        print(f"A: {witness.fixed_set}")
        for k, v in items:
            print(f"{k} -> {v}")
    return 0


def _cmd_koenig(args) -> int:
    b_bodies: list[str] = []
    a_bodies: list[str] = []
    for key, body in _instance_lines(_read_input(args.path)):
        if key == "B":
            b_bodies.append(body)
        elif key == "A":
            a_bodies.append(body)
        else:
            raise ValueError(f"unknown key in koenig instance: {key!r}")
    if len(a_bodies) != len(b_bodies):
        raise ValueError("need as many A lines as B lines")
    length = len(b_bodies)
    b_sets = [make_set(parse_hf(p) for p in _split_literals(b)) for b in b_bodies]
    a_sets = [make_set(_parse_tuples(a, length)) for a in a_bodies]
    witness = koenig_uncovered(b_sets, a_sets)
    rendered = "(" + ", ".join(str(c) for c in witness.coordinates) + ")"
    if args.json:
        print(
            _dump_json(
                {
                    "tuple": [str(c) for c in witness.coordinates],
                    "sum": str(witness.sum_size),
                    "product": str(witness.product_size),
                    "strict": witness.strict,
                }
            )
        )
    else:
        print(f"tuple: {rendered}")
        print(f"sum: {witness.sum_size}")
        print(f"product: {witness.product_size}")
        print(f"strict: {'yes' if witness.strict else 'no'}")
    return 0


# ----- dot -----

_DOT_LABEL = {
    _NEG: "not",
    _DISJ: "or",
    _TAU: "tau",
    _REF: "box",
}


def _render_dot(root: Assembly) -> str:
    lines = ["digraph assembly {", "  node [shape=plaintext];"]
    edges: list[str] = []
    links: list[str] = []
    taus: list[int] = []
    counter = 0

    def walk(node: Assembly, parent: Optional[int]) -> None:
        nonlocal counter
        counter += 1
        index = counter
        tag = node.tag
        if tag == _LETTER:
            label = node.name
        elif tag == _REL:
            label = "eq" if node.rel == "eq" else "in"
        else:
            label = _DOT_LABEL[tag]
        lines.append(f'  n{index} [label="{label}"];')
        if parent is not None:
            edges.append(f"  n{parent} -> n{index};")
        if tag == _REF:
            links.append(
                f"  n{taus[-node.depth]} -> n{index} [style=dashed, constraint=false];"
            )
        elif tag in (_NEG,):
            walk(node.body, index)
        elif tag == _TAU:
            taus.append(index)
            walk(node.body, index)
            taus.pop()
        elif tag in (_DISJ, _REL):
            walk(node.left, index)
            walk(node.right, index)

    walk(root, None)
    return "\n".join(lines + edges + links + ["}"])


def _cmd_dot(args) -> int:
    if args.linear is not None:
        root = delinearize(LinearAssembly.from_text(_read_input(args.linear)))
    else:
        root = _expression_from_args(args)
    print(_render_dot(root))
    return 0


# ----- argument parsing -----


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assemblage",
        description="Sign assemblies, exact counts, and the finite set laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand an expression to its linear assembly")
    p.add_argument("expr", nargs="?", help="surface expression")
    p.add_argument("--file", help="read the expression from a file ('-' for stdin)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("count", help="sign/link/occurrence counts of an expression")
    p.add_argument("expr", nargs="?")
    p.add_argument("--file")
    p.add_argument("--numeral", type=int, metavar="N")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--symbolic", action="store_true", default=True)
    group.add_argument("--materialize", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_SIGN_BUDGET)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("numeral", help="count row of a von Neumann numeral")
    p.add_argument("n", type=int)
    p.add_argument("--table", action="store_true", help="all rows up to n")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_numeral)

    p = sub.add_parser("classify", help="Term, Relation, or Neither")
    p.add_argument("path", nargs="?", default="-")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("formative", help="verify a formative construction file")
    p.add_argument("path", nargs="?", default="-")
    p.set_defaults(func=_cmd_formative)

    p = sub.add_parser("hf", help="evaluate a finite-set script with let bindings")
    p.add_argument("script", nargs="?")
    p.add_argument("--file")
    p.set_defaults(func=_cmd_hf)

    p = sub.add_parser("tarski", help="fixed-point extrema of a monotone map")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_tarski)

    p = sub.add_parser("cb", help="constructive bijection from two injections")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cb)

    p = sub.add_parser("koenig", help="uncovered tuple of a product vs a sum")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_koenig)

    p = sub.add_parser("dot", help="render an assembly tree as graphviz dot")
    p.add_argument("expr", nargs="?")
    p.add_argument("--file", help="expression file")
    p.add_argument("--linear", help="linear assembly file instead of an expression")
    p.set_defaults(func=_cmd_dot)

    return parser


def run(argv: Sequence[str]) -> int:
    """Parse and execute one invocation, returning the exit status."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command in ("expand", "count", "dot"):
        has_source = args.expr is not None or args.file is not None
        if args.command == "count":
            has_source = has_source or args.numeral is not None
        if args.command == "dot":
            has_source = has_source or args.linear is not None
        if not has_source:
            parser.error(f"{args.command} needs an expression or --file")
    if args.command == "hf" and args.script is None and args.file is None:
        parser.error("hf needs a script or --file")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
