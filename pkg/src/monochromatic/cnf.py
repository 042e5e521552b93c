"""DIMACS export of the avoidance problem.

Variable ``(m - 1) * r + c + 1`` is true when integer m gets color c.  The
formula is satisfiable iff some r-coloring of [1, n] avoids every
constraining instance of the pattern.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .pattern import Pattern, format_pattern
from .search import MAX_INSTANCES, enumerate_instances


def var_index(m: int, c: int, r: int) -> int:
    return (m - 1) * r + c + 1


@dataclass
class CNF:
    num_vars: int
    clauses: list[tuple[int, ...]]
    comments: list[str] = field(default_factory=list)

    def to_dimacs(self) -> str:
        lines = [f"c {line}" for line in self.comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, cl)) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_dimacs())


def export_cnf(p: Pattern, r: int, n: int, max_instances: int = MAX_INSTANCES) -> CNF:
    if r < 1 or n < 1:
        raise ValueError(f"need r >= 1 and n >= 1, got r={r}, n={n}")
    table = enumerate_instances(p, n, max_instances=max_instances)
    clauses: list[tuple[int, ...]] = []
    for m in range(1, n + 1):
        clauses.append(tuple(var_index(m, c, r) for c in range(r)))
        for c1, c2 in combinations(range(r), 2):
            clauses.append((-var_index(m, c1, r), -var_index(m, c2, r)))
    instances = table.constraining()
    for vs in instances:
        members = sorted(vs)
        for c in range(r):
            clauses.append(tuple(-var_index(t, c, r) for t in members))
    comments = [
        f"pattern: {format_pattern(p)}",
        f"colors: {r}  interval: [1, {n}]  constraining instances: {len(instances)}",
        "variable (m-1)*r + c + 1 is true iff integer m has color c (c in 0..r-1)",
    ]
    return CNF(n * r, clauses, comments)


def parse_dimacs(text: str) -> CNF:
    num_vars = None
    clauses: list[tuple[int, ...]] = []
    comments: list[str] = []
    pending: list[int] = []
    declared = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            _, fmt, nv, nc = line.split()
            if fmt != "cnf":
                raise ValueError(f"unsupported format {fmt!r}")
            num_vars, declared = int(nv), int(nc)
            continue
        for lit in map(int, line.split()):
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    if pending:
        raise ValueError("last clause is not terminated by 0")
    if declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    return CNF(num_vars, clauses, comments)
