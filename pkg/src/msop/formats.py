"""Line-oriented instance files with explicit version headers.

Four formats, one record per line, ``#`` comments, rationals written as
``p/q`` or integer literals (decimals are rejected so everything stays
exact):

    msop mssc v1       elements n / cost v c / edge w v1 v2 ...
    msop orsched v1    job id p w / arc i j
    msop rof v1        var i p c / formula (and x1 (or x2 x3))
    msop xsearch v1    root r / vertex v p / edge u v c
"""

from __future__ import annotations

import io
import os
from fractions import Fraction

from .core import Rational
from .errors import ParseError, ValidationError
from .mssc import MsscInstance
from .orsched import OrDag
from .rof import Gate, Leaf, Node, ReadOnceFormula
from .xsearch import SearchGraph

Instance = MsscInstance | OrDag | ReadOnceFormula | SearchGraph

FILE_KINDS = ("mssc", "orsched", "rof", "xsearch")


def parse_rational(token: str, line: int, column: int = 1) -> Rational:
    if "." in token:
        raise ParseError(f"decimal literals are not accepted: {token!r}", line, column)
    num, slash, den = token.partition("/")
    try:
        if not slash:
            return int(num)
        value = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {token!r}", line, column) from None
    return value if value.denominator != 1 else int(value)


def format_rational(value: Rational) -> str:
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        yield lineno, line


def _int(token: str, line: int, what: str = "integer") -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an {what}, got {token!r}", line) from None


def parse_instance_text(text: str) -> Instance:
    records = list(_records(text))
    if not records:
        raise ParseError("empty instance file", 1)
    header_line, header = records[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "msop" or parts[2] != "v1":
        raise ParseError(f"bad header {header!r}; expected 'msop <kind> v1'", header_line)
    kind = parts[1]
    if kind not in FILE_KINDS:
        raise ParseError(f"unknown kind {kind!r}", header_line, len("msop ") + 1)
    body = records[1:]
    if kind == "mssc":
        return _parse_mssc(body)
    if kind == "orsched":
        return _parse_orsched(body)
    if kind == "rof":
        return _parse_rof(body)
    return _parse_xsearch(body)


def parse_instance(source) -> Instance:
    """Parse a path, an open text stream, or raw text."""
    if isinstance(source, io.TextIOBase):
        return parse_instance_text(source.read())
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if "\n" in path:
            return parse_instance_text(path)
        with open(path, "r", encoding="utf-8") as handle:
            return parse_instance_text(handle.read())
    raise ParseError(f"cannot read instance from {type(source).__name__}")


def _parse_mssc(body) -> MsscInstance:
    n = None
    costs: dict[int, Rational] = {}
    edges: list[tuple[Rational, frozenset[int]]] = []
    for lineno, line in body:
        tokens = line.split()
        word = tokens[0]
        if word == "elements":
            if len(tokens) != 2:
                raise ParseError("elements takes one count", lineno)
            n = _int(tokens[1], lineno)
        elif word == "cost":
            if len(tokens) != 3:
                raise ParseError("cost takes an element id and a value", lineno)
            costs[_int(tokens[1], lineno)] = parse_rational(tokens[2], lineno)
        elif word == "edge":
            if len(tokens) < 3:
                raise ParseError("edge takes a weight and at least one element", lineno)
            weight = parse_rational(tokens[1], lineno)
            members = frozenset(_int(t, lineno) for t in tokens[2:])
            edges.append((weight, members))
        else:
            raise ParseError(f"unknown record {word!r}", lineno, line.index(word) + 1)
    if n is None:
        raise ParseError("missing 'elements' record", 1)
    for v in costs:
        if not 0 <= v < n:
            raise ValidationError(f"cost record references unknown element {v}")
    return MsscInstance(n, tuple(costs.get(v, 1) for v in range(n)), tuple(edges))


def _parse_orsched(body) -> OrDag:
    jobs: list[int] = []
    times: list[Rational] = []
    weights: list[Rational] = []
    arcs: list[tuple[int, int]] = []
    for lineno, line in body:
        tokens = line.split()
        word = tokens[0]
        if word == "job":
            if len(tokens) != 4:
                raise ParseError("job takes id, processing time and weight", lineno)
            jobs.append(_int(tokens[1], lineno))
            times.append(parse_rational(tokens[2], lineno))
            weights.append(parse_rational(tokens[3], lineno))
        elif word == "arc":
            if len(tokens) != 3:
                raise ParseError("arc takes two job ids", lineno)
            arcs.append((_int(tokens[1], lineno), _int(tokens[2], lineno)))
        else:
            raise ParseError(f"unknown record {word!r}", lineno, line.index(word) + 1)
    if not jobs:
        raise ParseError("orsched file lists no jobs", 1)
    return OrDag(tuple(jobs), tuple(times), tuple(weights), tuple(arcs))


def _parse_formula(expr: str, lineno: int, offset: int) -> Node:
    pos = 0

    def error(msg: str, at: int):
        raise ParseError(msg, lineno, offset + at + 1)

    def skip_blank():
        nonlocal pos
        while pos < len(expr) and expr[pos].isspace():
            pos += 1

    def read_token() -> tuple[str, int]:
        nonlocal pos
        start = pos
        while pos < len(expr) and not expr[pos].isspace() and expr[pos] not in "()":
            pos += 1
        if start == pos:
            error("expected a token", start)
        return expr[start:pos], start

    def parse_node() -> Node:
        nonlocal pos
        skip_blank()
        if pos >= len(expr):
            error("unexpected end of formula", pos)
        if expr[pos] == "(":
            open_at = pos
            pos += 1
            skip_blank()
            op, op_at = read_token()
            if op not in ("and", "or"):
                error(f"unknown gate {op!r}", op_at)
            children = []
            while True:
                skip_blank()
                if pos >= len(expr):
                    error("missing ')'", open_at)
                if expr[pos] == ")":
                    pos += 1
                    break
                children.append(parse_node())
            if len(children) != 2:
                error(
                    f"gate has {len(children)} inputs; rewrite as nested binary "
                    "gates, e.g. (and x1 (and x2 x3))",
                    open_at,
                )
            return Gate(op, children[0], children[1])
        if expr[pos] == ")":
            error("unexpected ')'", pos)
        token, at = read_token()
        if not token.startswith("x") or not token[1:].isdigit():
            error(f"expected a variable like x3, got {token!r}", at)
        return Leaf(int(token[1:]))

    node = parse_node()
    skip_blank()
    if pos != len(expr):
        error("trailing text after formula", pos)
    return node


def _parse_rof(body) -> ReadOnceFormula:
    probs: dict[int, Fraction] = {}
    costs: dict[int, int] = {}
    root: Node | None = None
    for lineno, line in body:
        tokens = line.split(None, 1)
        word = tokens[0]
        if word == "var":
            parts = line.split()
            if len(parts) != 4:
                raise ParseError("var takes id, probability and cost", lineno)
            i = _int(parts[1], lineno)
            probs[i] = Fraction(parse_rational(parts[2], lineno))
            costs[i] = _int(parts[3], lineno, "integer cost")
        elif word == "formula":
            if root is not None:
                raise ParseError("only one formula line is allowed", lineno)
            if len(tokens) != 2:
                raise ParseError("formula line is empty", lineno)
            expr = tokens[1]
            root = _parse_formula(expr, lineno, line.index(expr))
        else:
            raise ParseError(f"unknown record {word!r}", lineno, line.index(word) + 1)
    if root is None:
        raise ParseError("missing formula line", 1)
    return ReadOnceFormula(root, probs, costs)


def _parse_xsearch(body) -> SearchGraph:
    root = None
    vertices: list[int] = []
    probs: dict[int, Rational] = {}
    edges: list[tuple[int, int, Rational]] = []
    for lineno, line in body:
        tokens = line.split()
        word = tokens[0]
        if word == "root":
            if len(tokens) != 2:
                raise ParseError("root takes one vertex id", lineno)
            root = _int(tokens[1], lineno)
        elif word == "vertex":
            if len(tokens) != 3:
                raise ParseError("vertex takes an id and a probability", lineno)
            v = _int(tokens[1], lineno)
            vertices.append(v)
            probs[v] = parse_rational(tokens[2], lineno)
        elif word == "edge":
            if len(tokens) != 4:
                raise ParseError("edge takes two endpoints and a cost", lineno)
            edges.append(
                (
                    _int(tokens[1], lineno),
                    _int(tokens[2], lineno),
                    parse_rational(tokens[3], lineno),
                )
            )
        else:
            raise ParseError(f"unknown record {word!r}", lineno, line.index(word) + 1)
    if root is None:
        raise ParseError("missing root record", 1)
    return SearchGraph(tuple(vertices), root, tuple(edges), probs)


def _serialize_formula(node: Node) -> str:
    if isinstance(node, Leaf):
        return f"x{node.var}"
    return f"({node.op} {_serialize_formula(node.left)} {_serialize_formula(node.right)})"


def serialize_instance(instance: Instance) -> str:
    lines: list[str]
    if isinstance(instance, MsscInstance):
        lines = ["msop mssc v1", f"elements {instance.n}"]
        for v, c in enumerate(instance.costs):
            lines.append(f"cost {v} {format_rational(c)}")
        for w, members in instance.edges:
            ids = " ".join(str(v) for v in sorted(members))
            lines.append(f"edge {format_rational(w)} {ids}")
    elif isinstance(instance, OrDag):
        lines = ["msop orsched v1"]
        for j, p, w in zip(instance.jobs, instance.times, instance.weights):
            lines.append(f"job {j} {format_rational(p)} {format_rational(w)}")
        for i, j in instance.arcs:
            lines.append(f"arc {i} {j}")
    elif isinstance(instance, ReadOnceFormula):
        lines = ["msop rof v1"]
        for v in instance.variables:
            lines.append(
                f"var {v} {format_rational(instance.probs[v])} {instance.costs[v]}"
            )
        lines.append(f"formula {_serialize_formula(instance.root)}")
    elif isinstance(instance, SearchGraph):
        lines = ["msop xsearch v1", f"root {instance.root}"]
        for v in instance.vertices:
            lines.append(f"vertex {v} {format_rational(instance.probs[v])}")
        for u, v, c in instance.edges:
            lines.append(f"edge {u} {v} {format_rational(c)}")
    else:
        raise ValidationError(f"cannot serialize {type(instance).__name__}")
    return "\n".join(lines) + "\n"


def file_kind(instance: Instance) -> str:
    if isinstance(instance, MsscInstance):
        return "mssc"
    if isinstance(instance, OrDag):
        return "orsched"
    if isinstance(instance, ReadOnceFormula):
        return "rof"
    return "xsearch"
