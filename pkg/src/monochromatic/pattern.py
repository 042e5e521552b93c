"""Arithmetic patterns over positive integers and colorings of [1..N].

A pattern is a list of +/* expressions in lowercase variables, e.g.
``"a, b, a*b, (a+1)*b"``.  Variables and constants range over the positive
integers, so every term evaluates to a positive integer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence, Union

DEFAULT_MAX_NODES = 64

PRESETS: dict[str, str] = {
    "schur": "a, b, a+b",
    "multiplicative-schur": "a, b, a*b",
    "moreira": "a, a*b, a+b",
    "sahasrabudhe": "a, b, b*(a+1)",
    "translated-product": "a, b, a*b, (a+1)*b",
}


class PatternSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariableError(KeyError):
    pass


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError(f"constants must be positive, got {self.value}")


@dataclass(frozen=True)
class Sum:
    children: tuple["Term", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Sum needs at least two children")


@dataclass(frozen=True)
class Product:
    children: tuple["Term", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Product needs at least two children")


Term = Union[Var, Const, Sum, Product]
Assignment = Mapping[str, int]


def term_variables(term: Term) -> list[str]:
    """Variables of ``term`` in first-occurrence (left-to-right) order."""
    seen: dict[str, None] = {}

    def walk(t: Term) -> None:
        if isinstance(t, Var):
            seen.setdefault(t.name)
        elif isinstance(t, (Sum, Product)):
            for child in t.children:
                walk(child)

    walk(term)
    return list(seen)


def node_count(term: Term) -> int:
    if isinstance(term, (Sum, Product)):
        return 1 + sum(node_count(c) for c in term.children)
    return 1


@dataclass(frozen=True)
class Pattern:
    terms: tuple[Term, ...]
    variables: tuple[str, ...]
    distinct_values: bool = False

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("a pattern needs at least one term")
        occurring: dict[str, None] = {}
        for t in self.terms:
            for v in term_variables(t):
                occurring.setdefault(v)
        if not occurring:
            raise ValueError("a pattern needs at least one variable")
        if set(self.variables) != set(occurring) or len(set(self.variables)) != len(self.variables):
            raise ValueError(
                f"declared variables {list(self.variables)} differ from occurring {list(occurring)}"
            )

    @classmethod
    def from_terms(cls, terms: Sequence[Term], distinct_values: bool = False) -> "Pattern":
        names: dict[str, None] = {}
        for t in terms:
            for v in term_variables(t):
                names.setdefault(v)
        return cls(tuple(terms), tuple(names), distinct_values)

    def with_distinct(self, distinct_values: bool = True) -> "Pattern":
        return Pattern(self.terms, self.variables, distinct_values)

    def __str__(self) -> str:
        return format_pattern(self)


# ---------------------------------------------------------------- parsing

_NAME = re.compile(r"[a-z][a-z0-9]*")
_INT = re.compile(r"[0-9]+")


@dataclass
class _Parser:
    text: str
    max_nodes: int
    tokens: list[tuple[str, str, int]] = field(default_factory=list)
    pos: int = 0
    nodes: int = 0

    def __post_init__(self) -> None:
        i, text = 0, self.text
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            m = _NAME.match(text, i) or _INT.match(text, i)
            if m:
                kind = "var" if m.re is _NAME else "int"
                self.tokens.append((kind, m.group(), i))
                i = m.end()
            elif ch in "+*(),":
                self.tokens.append((ch, ch, i))
                i += 1
            else:
                raise PatternSyntaxError(f"unexpected character {ch!r}", i)
        self.tokens.append(("end", "", len(text)))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PatternSyntaxError(f"expected {want}, found {got}", tok[2])
        self.pos += 1
        return tok

    def bump(self, position: int) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise PatternSyntaxError(f"term exceeds {self.max_nodes} nodes", position)

    def pattern(self) -> list[Term]:
        terms = [self.term()]
        while self.peek()[0] == ",":
            self.pos += 1
            terms.append(self.term())
        self.take("end")
        return terms

    def term(self) -> Term:
        self.nodes = 0
        return self.expr()

    def expr(self) -> Term:
        start = self.peek()[2]
        parts = [self.product()]
        while self.peek()[0] == "+":
            self.pos += 1
            parts.append(self.product())
        if len(parts) == 1:
            return parts[0]
        self.bump(start)
        return Sum(tuple(parts))

    def product(self) -> Term:
        start = self.peek()[2]
        parts = [self.atom()]
        while self.peek()[0] == "*":
            self.pos += 1
            parts.append(self.atom())
        if len(parts) == 1:
            return parts[0]
        self.bump(start)
        return Product(tuple(parts))

    def atom(self) -> Term:
        kind, text, position = self.peek()
        if kind == "var":
            self.pos += 1
            self.bump(position)
            return Var(text)
        if kind == "int":
            self.pos += 1
            if text[0] == "0":
                raise PatternSyntaxError(f"constant {text} is not a positive integer", position)
            self.bump(position)
            return Const(int(text))
        if kind == "(":
            self.pos += 1
            inner = self.expr()
            self.take(")")
            return inner
        got = "end of input" if kind == "end" else repr(text)
        raise PatternSyntaxError(f"expected variable, integer or '(', found {got}", position)


def parse_term(text: str, max_nodes: int = DEFAULT_MAX_NODES) -> Term:
    parser = _Parser(text, max_nodes)
    t = parser.term()
    parser.take("end")
    return t


def parse_pattern(text: str, max_nodes: int = DEFAULT_MAX_NODES) -> Pattern:
    """Parse ``text`` in the pattern DSL.

    Grammar: comma-separated terms built from lowercase variables, positive
    integer constants, ``+``, ``*`` and parentheses.  ``max_nodes`` bounds the
    size of each term.  Raises :class:`PatternSyntaxError` with the offending
    position.
    """
    return Pattern.from_terms(_Parser(text, max_nodes).pattern())


def resolve_pattern(text: str) -> Pattern:
    """Parse ``text``, or look it up in :data:`PRESETS` when written ``@name``."""
    if text.startswith("@"):
        try:
            text = PRESETS[text[1:]]
        except KeyError:
            raise PatternSyntaxError(
                f"unknown preset {text!r} (known: {', '.join(sorted(PRESETS))})", 0
            ) from None
    return parse_pattern(text)


def format_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Const):
        return str(term.value)
    if isinstance(term, Sum):
        return "+".join(f"({format_term(c)})" if isinstance(c, Sum) else format_term(c)
                        for c in term.children)
    return "*".join(f"({format_term(c)})" if isinstance(c, (Sum, Product)) else format_term(c)
                    for c in term.children)


def format_pattern(p: Pattern) -> str:
    return ", ".join(format_term(t) for t in p.terms)


# ------------------------------------------------------------- evaluation

def eval_term(term: Term, asg: Assignment) -> int:
    if isinstance(term, Var):
        try:
            return asg[term.name]
        except KeyError:
            raise UnboundVariableError(term.name) from None
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Sum):
        return sum(eval_term(c, asg) for c in term.children)
    value = 1
    for c in term.children:
        value *= eval_term(c, asg)
    return value


def compile_term(term: Term, variables: Sequence[str]) -> Callable[[Sequence[int]], int]:
    """Closure evaluating ``term`` on a tuple of values ordered like ``variables``."""
    if isinstance(term, Var):
        try:
            i = list(variables).index(term.name)
        except ValueError:
            raise UnboundVariableError(term.name) from None
        return lambda vals: vals[i]
    if isinstance(term, Const):
        k = term.value
        return lambda vals: k
    parts = [compile_term(c, variables) for c in term.children]
    if isinstance(term, Sum):
        return lambda vals: sum(f(vals) for f in parts)

    def product(vals: Sequence[int]) -> int:
        value = 1
        for f in parts:
            value *= f(vals)
        return value

    return product


def instantiate(p: Pattern, asg: Assignment) -> frozenset[int] | None:
    """Set of term values under ``asg``.

    Equal values collapse.  When ``p.distinct_values`` is set and two terms
    collide the instance is degenerate and ``None`` is returned.
    """
    values = [eval_term(t, asg) for t in p.terms]
    result = frozenset(values)
    if p.distinct_values and len(result) < len(values):
        return None
    return result


# ---------------------------------------------------------------- colorings

@dataclass(frozen=True)
class Coloring:
    """An r-coloring of [1..n]; ``colors[i]`` is the color of ``i + 1``."""

    n: int
    r: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.r < 1:
            raise ColoringError(f"need n >= 1 and r >= 1, got n={self.n}, r={self.r}")
        if len(self.colors) != self.n:
            raise ColoringError(f"expected {self.n} colors, got {len(self.colors)}")
        for i, c in enumerate(self.colors):
            if not 0 <= c < self.r:
                raise ColoringError(f"color {c} of {i + 1} is outside [0, {self.r})")

    @classmethod
    def of(cls, colors: Iterable[int], r: int | None = None) -> "Coloring":
        colors = tuple(colors)
        return cls(len(colors), r if r is not None else max(colors, default=0) + 1, colors)

    def color(self, m: int) -> int:
        if not 1 <= m <= self.n:
            raise ColoringError(f"value {m} outside [1, {self.n}]")
        return self.colors[m - 1]

    def restrict(self, n: int) -> "Coloring":
        return Coloring(n, self.r, self.colors[:n])

    def to_text(self, comments: Sequence[str] = ()) -> str:
        lines = [f"# {c}" for c in comments]
        lines.append(f"{self.n} {self.r}")
        lines.append(" ".join(map(str, self.colors)))
        return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> Coloring:
    """Read the text format: ``#`` comments, a ``"N r"`` header, then N colors."""
    fields: list[str] = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        fields.extend(line.split())
    if len(fields) < 2:
        raise ColoringError("missing 'N r' header")
    try:
        n, r, *colors = (int(f) for f in fields)
    except ValueError as exc:
        raise ColoringError(f"non-integer field: {exc}") from None
    return Coloring(n, r, tuple(colors))


def read_coloring(path: str | Path) -> Coloring:
    return parse_coloring(Path(path).read_text())


def is_monochromatic(c: Coloring, values: Iterable[int]) -> int | None:
    """Common color of ``values`` under ``c``, or ``None`` if they differ."""
    values = list(values)
    if not values:
        raise ValueError("empty value set")
    first = c.color(values[0])
    mono = True
    for v in values[1:]:
        if c.color(v) != first:
            mono = False
    return first if mono else None
