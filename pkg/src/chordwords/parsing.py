"""Text formats for words and graphs.

Words::

    word    := term+
    term    := "eps" | "e"INT | "E"INT | "inv(" word ")" | "omega(" VAR "->" pattern ")"
    pattern := "eps" | pletter+
    pletter := ("e"|"E") INT | ("e"|"E") "{" linear "}"      e.g. e{k+1}, E{2k-1}

Graphs, one declaration per line (``;`` also ends a line, ``#`` starts a
comment)::

    family <name> <params...>
    vertex <id> [@level <n>]
    edge <id> <u> <v> [@level <n>]
    base <id>
"""
from __future__ import annotations

import re
from collections import defaultdict

from .concrete import Cat, Empty, Expr, Inverse, Lit, OmegaCat, PatternLetter, finite_letters, _has_omega
from .graphs import GraphError, GraphLevels, builtin, finite_graph, validate_levels
from .words import Letter

MAX_INDEX = 2**31 - 1


class ParseError(ValueError):
    def __init__(self, msg: str, offset: int | None = None, line: int | None = None):
        where = f" at offset {offset}" if offset is not None else f" on line {line}" if line is not None else ""
        super().__init__(msg + where)
        self.offset = offset
        self.line = line


class _Words:
    _tok = re.compile(
        r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<arrow>->)|(?P<sym>[(){}+\-*]))"
    )

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = self._tok.match(text, pos)
            if m is None or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def number(self) -> int:
        _, val, off = self.take("num")
        n = int(val)
        if n > MAX_INDEX:
            raise ParseError(f"chord index {val} overflows", off)
        return n

    # word := term+
    def word(self, closing: str | None = None) -> Expr:
        parts = []
        while self.peek()[0] != "end" and self.peek()[1] != closing:
            parts.append(self.term())
        if not parts:
            raise ParseError("expected a word", self.peek()[2])
        return parts[0] if len(parts) == 1 else Cat(tuple(parts))

    def term(self) -> Expr:
        kind, val, off = self.peek()
        if kind != "name":
            raise ParseError(f"unexpected {val!r}", off)
        if val == "eps":
            self.i += 1
            return Empty()
        if val in ("inv", "omega"):
            self.i += 1
            self.take("sym", "(")
            if val == "inv":
                inner = self.word(")")
                self.take("sym", ")")
                return Inverse(inner)
            var = self.take("name")[1]
            self.take("arrow")
            pat = self.pattern(var)
            self.take("sym", ")")
            return OmegaCat(pat)
        m = re.fullmatch(r"([eE])(\d+)", val)
        if m is None:
            raise ParseError(f"unknown term {val!r}", off)
        self.i += 1
        n = int(m.group(2))
        if n > MAX_INDEX:
            raise ParseError(f"chord index {m.group(2)} overflows", off)
        return Lit(Letter(n, m.group(1) == "e"))

    def pattern(self, var: str) -> tuple[PatternLetter, ...]:
        out = []
        if self.peek()[1] == "eps":
            self.i += 1
            return ()
        while self.peek()[1] != ")":
            kind, val, off = self.take("name")
            if val in ("e", "E"):
                self.take("sym", "{")
                coef, offset = self.linear(var)
                self.take("sym", "}")
                out.append(PatternLetter(coef, offset, val == "e"))
                continue
            m = re.fullmatch(r"([eE])(\d+)", val)
            if m is None:
                raise ParseError(f"bad pattern letter {val!r}", off)
            out.append(PatternLetter(0, int(m.group(2)), m.group(1) == "e"))
        if not out:
            raise ParseError("empty pattern", self.peek()[2])
        return tuple(out)

    def linear(self, var: str) -> tuple[int, int]:
        coef = offset = 0
        sign = 1
        first = True
        while True:
            kind, val, off = self.peek()
            if val in ("+", "-"):
                self.i += 1
                sign = 1 if val == "+" else -1
            elif not first:
                break
            first = False
            kind, val, off = self.peek()
            if kind == "num":
                n = self.number()
                if self.peek()[1] == "*":
                    self.i += 1
                if self.peek()[1] == var:
                    self.i += 1
                    coef += sign * n
                else:
                    offset += sign * n
            elif kind == "name" and val == var:
                self.i += 1
                coef += sign
            else:
                raise ParseError(f"expected a term in {var!r}, found {val or 'end of input'!r}", off)
        if coef < 0:
            raise ParseError(f"negative coefficient of {var}", self.peek()[2])
        return coef, offset


def parse_expr(text: str) -> Expr:
    p = _Words(text)
    x = p.word()
    if p.peek()[0] != "end":
        raise ParseError(f"unexpected {p.peek()[1]!r}", p.peek()[2])
    return x


def parse_word(text: str) -> Expr | tuple[Letter, ...]:
    """A finite word as a letter tuple, anything with ``omega`` as an expression."""
    x = parse_expr(text)
    return x if _has_omega(x) else finite_letters(x)


# -- graphs -----------------------------------------------------------------------


def _atom(tok: str):
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def _split_level(args: list[str], lineno: int) -> tuple[list[str], int]:
    if "@level" in args:
        k = args.index("@level")
        if k + 2 != len(args):
            raise ParseError("@level must end the declaration", line=lineno)
        try:
            return args[:k], int(args[k + 1])
        except ValueError:
            raise ParseError(f"bad level {args[k + 1]!r}", line=lineno) from None
    return args, 0


def parse_graph(text: str, validate_depth: int | None = None) -> GraphLevels:
    family = None
    base = None
    vertices: dict[int, list] = defaultdict(list)
    edges: dict[int, list] = defaultdict(list)
    seen_edges = set()
    lines = [ln for chunk in text.splitlines() for ln in chunk.split(";")]
    for lineno, raw in enumerate(lines, 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        head, args = toks[0], toks[1:]
        if head == "family":
            if not args or family is not None:
                raise ParseError("family needs exactly one name", line=lineno)
            family = (args[0], tuple(_atom(a) for a in args[1:]))
        elif head == "base":
            if len(args) != 1:
                raise ParseError("base takes one vertex id", line=lineno)
            base = _atom(args[0])
        elif head == "vertex":
            rest, lvl = _split_level(args, lineno)
            if len(rest) != 1:
                raise ParseError("vertex takes one id", line=lineno)
            vertices[lvl].append(_atom(rest[0]))
        elif head == "edge":
            rest, lvl = _split_level(args, lineno)
            if len(rest) != 3:
                raise ParseError("edge takes an id and two endpoints", line=lineno)
            eid, u, v = map(_atom, rest)
            if eid in seen_edges:
                raise ParseError(f"duplicate edge id {eid}", line=lineno)
            if u == v:
                raise ParseError(f"edge {eid} is a loop", line=lineno)
            seen_edges.add(eid)
            edges[lvl].append((eid, u, v))
        else:
            raise ParseError(f"unknown declaration {head!r}", line=lineno)

    if family is not None and family[0] != "finite":
        if edges or vertices:
            raise ParseError("builtin families take no vertex or edge lines")
        try:
            g = builtin(family[0], *family[1])
        except GraphError as exc:
            raise ParseError(str(exc)) from None
    elif family is not None or (edges and max(edges) == 0 and not any(vertices)):
        flat = [e for lvl in sorted(edges) for e in edges[lvl]]
        try:
            g = finite_graph(flat, base=base)
        except GraphError as exc:
            raise ParseError(str(exc)) from None
    else:
        if not edges and not vertices:
            raise ParseError("empty graph spec")
        top = max([*edges, *vertices])
        if base is None:
            raise ParseError("graph spec needs a base vertex")
        g = GraphLevels(
            "spec",
            lambda n: ([base] * (n == 0) + vertices.get(n, []), edges.get(n, [])),
            base=base,
            final_level=top,
        )
    if validate_depth is not None:
        v = validate_levels(g, validate_depth)
        if v.kind == "ViolationAt":
            raise ParseError(f"graph fails validation at level {v.level}: {v.detail.get('reason')}")
    return g
