"""Brute-force reference implementations used only by the tests.

None of these import the search or FS code paths they check.
"""

from __future__ import annotations

from itertools import product

# presets written as plain Python functions of (a, b)
PRESET_FUNCTIONS = {
    "schur": lambda a, b: (a, b, a + b),
    "multiplicative-schur": lambda a, b: (a, b, a * b),
    "moreira": lambda a, b: (a, a * b, a + b),
    "sahasrabudhe": lambda a, b: (a, b, b * (a + 1)),
    "translated-product": lambda a, b: (a, b, a * b, (a + 1) * b),
}


def naive_instances(fn, n: int, arity: int = 2, keep_singletons: bool = False) -> set[frozenset[int]]:
    out = set()
    for vals in product(range(1, n + 1), repeat=arity):
        vs = frozenset(fn(*vals))
        if max(vs) <= n and (keep_singletons or len(vs) >= 2):
            out.add(vs)
    return out


def avoids(colors: tuple[int, ...], instances) -> bool:
    return all(len({colors[v - 1] for v in vs}) > 1 for vs in instances)


def brute_force_avoidable(fn, r: int, n: int) -> bool:
    """True iff some r-coloring of [1, n] avoids every instance."""
    inst = naive_instances(fn, n)
    return any(avoids(cs, inst) for cs in product(range(r), repeat=n))


def subset_sums(xs) -> dict[int, list[tuple[int, ...]]]:
    """Every nonempty subset (1-based indices) grouped by its sum."""
    out: dict[int, list[tuple[int, ...]]] = {}
    R = len(xs)
    for mask in range(1, 1 << R):
        h = tuple(i + 1 for i in range(R) if mask >> i & 1)
        out.setdefault(sum(xs[i - 1] for i in h), []).append(h)
    return out


def dpll(num_vars: int, clauses) -> dict[int, bool] | None:
    """Plain DPLL with unit propagation; returns a model or None."""
    clauses = [tuple(c) for c in clauses]

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = tuple(x for x in c if x != -lit)
                if not c:
                    return None
            out.append(c)
        return out

    def solve(cls, model):
        while True:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            model = {**model, abs(unit): unit > 0}
            cls = simplify(cls, unit)
            if cls is None:
                return None
        if not cls:
            return model
        lit = cls[0][0]
        for choice in (lit, -lit):
            nxt = simplify(cls, choice)
            if nxt is not None:
                res = solve(nxt, {**model, abs(choice): choice > 0})
                if res is not None:
                    return res
        return None

    model = solve(clauses, {})
    if model is None:
        return None
    return {v: model.get(v, False) for v in range(1, num_vars + 1)}


def satisfies(model: dict[int, bool], clauses) -> bool:
    return all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses)
