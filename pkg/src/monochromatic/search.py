"""Forcing numbers, avoiding colorings and monochromatic witnesses on [1..N].

Instances of a pattern in [1, n] are the value-sets of all assignments whose
term values stay ``<= n``.  A value-set with a single element is always
monochromatic, so it never constrains a coloring and is left out of the
search index and of every avoidance check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Union

from .pattern import Coloring, Pattern, compile_term, format_pattern, is_monochromatic

log = logging.getLogger(__name__)

MAX_VARIABLES = 4
MAX_INSTANCES = 5_000_000
INTERNAL = "internal-search"


class SearchGuardError(ValueError):
    pass


def iter_assignments(p: Pattern, n: int, max_variables: int = MAX_VARIABLES) -> Iterator[tuple[tuple[int, ...], list[int]]]:
    """Yield ``(values, term_values)`` for every assignment keeping all terms ``<= n``.

    Assignments come in lexicographic order (variable order, then value).
    Terms are monotone in every variable, so a branch is cut as soon as the
    partial assignment completed with 1s already overshoots ``n``.
    """
    k = len(p.variables)
    if k > max_variables:
        raise SearchGuardError(f"{k} variables exceed guard {max_variables}")
    terms = [compile_term(t, p.variables) for t in p.terms]
    vals = [1] * k

    def fits() -> bool:
        return all(f(vals) <= n for f in terms)

    def rec(i: int) -> Iterator[tuple[tuple[int, ...], list[int]]]:
        if i == k:
            yield tuple(vals), [f(vals) for f in terms]
            return
        v = 1
        while True:
            vals[i] = v
            if not fits():
                break
            yield from rec(i + 1)
            v += 1
        vals[i] = 1

    yield from rec(0)


@dataclass(frozen=True)
class InstanceTable:
    pattern: Pattern
    n: int
    instances: tuple[frozenset[int], ...]
    index: tuple[tuple[int, ...], ...]  # index[m]: constraining instances with max m

    def rests(self, m: int) -> list[tuple[int, ...]]:
        return [tuple(sorted(self.instances[i] - {m})) for i in self.index[m]]

    def constraining(self, n: int | None = None) -> list[frozenset[int]]:
        n = self.n if n is None else n
        return [self.instances[i] for m in range(1, n + 1) for i in self.index[m]]


def enumerate_instances(
    p: Pattern,
    n: int,
    max_variables: int = MAX_VARIABLES,
    max_instances: int = MAX_INSTANCES,
) -> InstanceTable:
    """All distinct value-sets of ``p`` inside [1, n], in first-found order."""
    if n < 1:
        raise ValueError(f"bound must be positive, got {n}")
    seen: dict[frozenset[int], None] = {}
    nterms = len(p.terms)
    for _, values in iter_assignments(p, n, max_variables):
        vs = frozenset(values)
        if p.distinct_values and len(vs) < nterms:
            continue
        if vs not in seen:
            seen[vs] = None
            if len(seen) > max_instances:
                raise SearchGuardError(f"more than {max_instances} instances at n={n}")
    instances = tuple(seen)
    buckets: list[list[int]] = [[] for _ in range(n + 1)]
    for i, vs in enumerate(instances):
        if len(vs) >= 2:
            buckets[max(vs)].append(i)
    return InstanceTable(p, n, instances, tuple(tuple(b) for b in buckets))


# ----------------------------------------------------------------- outcomes

@dataclass(frozen=True)
class Avoiding:
    coloring: Coloring
    nodes: int


@dataclass(frozen=True)
class Forced:
    n: int
    nodes: int
    method: str = INTERNAL


@dataclass(frozen=True)
class Unknown:
    nodes: int
    best_lower_bound: int
    budget_exhausted: bool = True


SearchOutcome = Union[Avoiding, Forced, Unknown]


def find_avoiding(
    p: Pattern,
    r: int,
    n: int,
    budget: int | None = None,
    table: InstanceTable | None = None,
) -> SearchOutcome:
    """Search for an r-coloring of [1, n] with no monochromatic instance of ``p``.

    Colors 1, 2, ..., n in order and checks every instance as soon as its
    largest element is colored.  Color 1 is fixed to 0 and color k is only
    opened after colors 0..k-1 have appeared.  ``budget`` bounds the number
    of (position, color) trials; exhausting it gives :class:`Unknown`, whose
    lower bound is one more than the longest avoiding prefix seen.

    ``table`` may be any instance table of ``p`` with bound ``>= n``.
    """
    if r < 1 or n < 1:
        raise ValueError(f"need r >= 1 and n >= 1, got r={r}, n={n}")
    if table is None:
        table = enumerate_instances(p, n)
    elif table.n < n or table.pattern != p:
        raise ValueError("instance table does not cover the requested search")
    rests = [table.rests(m) if m else [] for m in range(n + 1)]

    colors = [-1] * (n + 1)
    opened = [0] * (n + 2)  # opened[m]: number of colors used on 1..m-1
    nxt = [0] * (n + 2)
    nodes = 0
    deepest = 0
    m = 1
    while 1 <= m <= n:
        limit = 1 if m == 1 else min(r, opened[m] + 1)
        c = nxt[m]
        placed = False
        while c < limit:
            if budget is not None and nodes >= budget:
                return Unknown(nodes, deepest + 1)
            nodes += 1
            if all(any(colors[x] != c for x in rest) for rest in rests[m]):
                placed = True
                break
            c += 1
        if placed:
            colors[m] = c
            nxt[m] = c + 1
            opened[m + 1] = max(opened[m], c + 1)
            deepest = max(deepest, m)
            m += 1
            nxt[m] = 0
        else:
            colors[m] = -1
            nxt[m] = 0
            m -= 1
    if m == 0:
        return Forced(n, nodes)
    coloring = Coloring(n, r, tuple(colors[1:]))
    if not verify_avoidance(coloring, p, table):
        raise AssertionError("search produced a coloring that fails verification")
    return Avoiding(coloring, nodes)


@dataclass
class RadoResult:
    pattern: Pattern
    r: int
    forcing_n: int | None
    lower_bound: int
    avoiding_at_prev: Coloring | None
    nodes: int
    method: str = INTERNAL
    outcomes: list[SearchOutcome] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "pattern": format_pattern(self.pattern),
            "colors": self.r,
            "forcing_n": self.forcing_n,
            "lower_bound": self.lower_bound,
            "avoiding_coloring": list(self.avoiding_at_prev.colors) if self.avoiding_at_prev else None,
            "nodes": self.nodes,
            "method": self.method,
        }


def rado_number(p: Pattern, r: int, n_max: int, budget: int | None = None) -> RadoResult:
    """Least n at which every r-coloring of [1, n] has a monochromatic instance.

    Sweeps n = 1, 2, ...; ``budget`` is shared by the whole sweep.  The result
    carries the avoiding coloring found at ``forcing_n - 1``.  If the sweep
    reaches ``n_max`` or runs out of budget, ``forcing_n`` is ``None`` and
    ``lower_bound`` records what was proved.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    nodes = 0
    prev: Coloring | None = None
    outcomes: list[SearchOutcome] = []
    table: InstanceTable | None = None
    for n in range(1, n_max + 1):
        if table is None or table.n < n:
            table = enumerate_instances(p, min(n_max, max(16, 2 * n)))
        left = None if budget is None else budget - nodes
        outcome = find_avoiding(p, r, n, left, table)
        outcomes.append(outcome)
        nodes += outcome.nodes
        log.debug("n=%d %s", n, type(outcome).__name__)
        if isinstance(outcome, Forced):
            return RadoResult(p, r, n, n, prev, nodes, outcome.method, outcomes)
        if isinstance(outcome, Unknown):
            return RadoResult(p, r, None, n, prev, nodes, INTERNAL, outcomes)
        prev = outcome.coloring
    return RadoResult(p, r, None, n_max + 1, prev, nodes, INTERNAL, outcomes)


def find_witness(c: Coloring, p: Pattern) -> tuple[dict[str, int], int] | None:
    """Lexicographically least assignment whose instance is monochromatic in ``c``."""
    nterms = len(p.terms)
    for vals, values in iter_assignments(p, c.n):
        vs = set(values)
        if len(vs) < 2 or (p.distinct_values and len(vs) < nterms):
            continue
        color = is_monochromatic(c, vs)
        if color is not None:
            return dict(zip(p.variables, vals)), color
    return None


def verify_avoidance(c: Coloring, p: Pattern, table: InstanceTable | None = None) -> bool:
    """True iff no constraining instance of ``p`` in [1, c.n] is monochromatic."""
    if table is None or table.n < c.n:
        table = enumerate_instances(p, c.n)
    return all(is_monochromatic(c, vs) is None for vs in table.constraining(c.n))


def exponent_bijection(k: int) -> dict[frozenset[int], frozenset[int]]:
    """Map power-of-two instances of {a, b, ab} in [2, 2^k] to {a, b, a+b} in [1, k].

    Exponents start at 1 because the additive side lives in the positive
    integers.  Raises if the log2 map fails to be a bijection onto the
    additive instances.
    """
    from .pattern import PRESETS, parse_pattern

    mult = enumerate_instances(parse_pattern(PRESETS["multiplicative-schur"]), 2 ** k)
    add = enumerate_instances(parse_pattern(PRESETS["schur"]), k)
    powers = {1 << e: e for e in range(1, k + 1)}
    mapping: dict[frozenset[int], frozenset[int]] = {}
    for vs in mult.instances:
        if all(v in powers for v in vs):
            mapping[vs] = frozenset(powers[v] for v in vs)
    image = set(mapping.values())
    if len(image) != len(mapping):
        raise AssertionError("exponent map is not injective")
    if image != set(add.instances):
        raise AssertionError("exponent map does not hit exactly the additive instances")
    return mapping
