"""Finite run of the IP-set descent that yields a monochromatic {a, b, ab, (a+1)b}.

Stage 0 picks the first color class whose intersection with ``FS(seed)``
contains a sum-distinct FS copy of the requested length; that intersection
is ``D_0``.  Stage n takes ``y_n`` as the first generator of the previous
stage's FS copy and forms

    C_n = y_n^-1((-y_n + D_{n-1}) & D_{n-1}),    D_n = C_n & A_k

for the first color k where ``C_n & A_k`` contains an FS copy of the stage
length.  With r colors, r + 1 stages force a repeated color ``i_j = i_n``;
then ``a = x`` (least element of the stage-n copy) and
``b = y_n * ... * y_{j+1}`` give the monochromatic configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol, Sequence, Union

from .fs import (
    ExtractStatus,
    GeneratingSequence,
    dilate_preimage,
    extract_fs_subsequence,
    find_divisible,
    finite_sums,
    lemma3_split,
    shift_intersect,
)
from .pattern import PRESETS, Coloring, instantiate, is_monochromatic, parse_pattern, read_coloring
from .search import find_witness

TARGET = parse_pattern(PRESETS["translated-product"])
DEFAULT_EXPLICIT_LIMIT = 5000


class RuleCapError(ValueError):
    pass


class ColoringRule(Protocol):
    r: int
    cap: int | None

    def color(self, m: int) -> int: ...


@dataclass(frozen=True)
class ResidueRule:
    """Color ``m`` by ``mapping[m % modulus]``; defined on all positive integers."""

    modulus: int
    mapping: tuple[int, ...]
    r: int = 0
    cap = None

    def __post_init__(self) -> None:
        if self.modulus < 1 or len(self.mapping) != self.modulus:
            raise ValueError(f"mapping must list one color per residue mod {self.modulus}")
        if self.r == 0:
            object.__setattr__(self, "r", max(self.mapping) + 1)
        if any(not 0 <= c < self.r for c in self.mapping):
            raise ValueError(f"residue colors must lie in [0, {self.r})")

    def color(self, m: int) -> int:
        if m < 1:
            raise RuleCapError(f"{m} is not a positive integer")
        return self.mapping[m % self.modulus]


@dataclass(frozen=True)
class IntervalRule:
    """Color by blocks ``[starts[i], starts[i+1])``.

    Without ``ratio`` the last block ends at ``cap``.  With ``ratio`` q the
    starts must lie in [1, q) and the block layout is repeated on every
    [q^k, q^(k+1)), block i of level k taking
    ``colors[(i + k * len(starts)) % len(colors)]``.  For example
    ``starts=[1], colors=[0, 1], ratio=2`` is ``floor(log2 m) mod 2``.
    """

    starts: tuple[int, ...]
    colors: tuple[int, ...]
    ratio: int | None = None
    cap: int | None = None
    r: int = 0

    def __post_init__(self) -> None:
        if not self.starts or self.starts[0] != 1 or list(self.starts) != sorted(set(self.starts)):
            raise ValueError("starts must be strictly increasing and begin at 1")
        if self.ratio is None:
            if self.cap is None or len(self.colors) != len(self.starts):
                raise ValueError("an explicit interval rule needs a cap and one color per block")
            if self.cap < self.starts[-1]:
                raise ValueError("cap lies before the last block")
        else:
            if self.ratio < 2 or self.starts[-1] >= self.ratio or not self.colors:
                raise ValueError("multiplicative blocks need ratio >= 2 and starts below it")
        if self.r == 0:
            object.__setattr__(self, "r", max(self.colors) + 1)
        if any(not 0 <= c < self.r for c in self.colors):
            raise ValueError(f"block colors must lie in [0, {self.r})")

    def color(self, m: int) -> int:
        if m < 1 or (self.cap is not None and m > self.cap):
            raise RuleCapError(f"{m} outside the rule's range [1, {self.cap}]")
        if self.ratio is None:
            return self.colors[_block(self.starts, m)]
        level, scale = 0, 1
        while scale * self.ratio <= m:
            scale *= self.ratio
            level += 1
        i = 0
        while i + 1 < len(self.starts) and self.starts[i + 1] * scale <= m:
            i += 1
        return self.colors[(i + level * len(self.starts)) % len(self.colors)]


def _block(starts: Sequence[int], m: int) -> int:
    i = 0
    while i + 1 < len(starts) and starts[i + 1] <= m:
        i += 1
    return i


@dataclass(frozen=True)
class ExplicitRule:
    coloring: Coloring

    @property
    def r(self) -> int:
        return self.coloring.r

    @property
    def cap(self) -> int:
        return self.coloring.n

    def color(self, m: int) -> int:
        if not 1 <= m <= self.coloring.n:
            raise RuleCapError(f"{m} outside the explicit range [1, {self.coloring.n}]")
        return self.coloring.colors[m - 1]


def parity_rule() -> ResidueRule:
    """Even numbers get color 0, odd numbers color 1."""
    return ResidueRule(2, (0, 1))


def constant_rule() -> ResidueRule:
    return ResidueRule(1, (0,))


def rule_from_json(spec: dict[str, Any], base: Path | None = None) -> ColoringRule:
    kind = spec.get("kind")
    r = int(spec.get("colors", 0))
    if kind == "residue":
        return ResidueRule(int(spec["modulus"]), tuple(int(c) for c in spec["map"]), r)
    if kind == "interval":
        return IntervalRule(
            tuple(int(s) for s in spec["starts"]),
            tuple(int(c) for c in spec["block_colors"]),
            None if spec.get("ratio") is None else int(spec["ratio"]),
            None if spec.get("cap") is None else int(spec["cap"]),
            r,
        )
    if kind == "explicit":
        path = Path(spec["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        return ExplicitRule(read_coloring(path))
    raise ValueError(f"unknown rule kind {kind!r}")


def load_rule(path: str | Path) -> ColoringRule:
    path = Path(path)
    return rule_from_json(json.loads(path.read_text()), path.parent)


def induced_coloring(rule: ColoringRule, n: int) -> Coloring:
    if rule.cap is not None and n > rule.cap:
        raise RuleCapError(f"n={n} exceeds the rule cap {rule.cap}")
    return Coloring(n, rule.r, tuple(rule.color(m) for m in range(1, n + 1)))


def default_stage_lengths(r: int, first: int) -> list[int]:
    """Halving lengths ``[L, L/2, L/4, ...]`` for the r + 1 stages, floored at 1."""
    return [max(1, first >> i) for i in range(r + 1)]


# ------------------------------------------------------------------ traces

@dataclass
class Stage:
    n: int
    y: int | None
    color: int
    sequence: GeneratingSequence
    fs_size: int
    d_size: int
    # (indices into the previous stage sequence, value): an element of
    # (-y + D) & D divisible by y, built from the previous copy's tail
    divisible: tuple[tuple[int, ...], int] | None = None
    members: frozenset[int] = field(default=frozenset(), repr=False)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "y": None if self.y is None else str(self.y),
            "color": self.color,
            "sequence": [str(x) for x in self.sequence],
            "fs_size": self.fs_size,
            "d_size": self.d_size,
        }
        if self.divisible is not None:
            out["divisible"] = {"indices": list(self.divisible[0]), "value": str(self.divisible[1])}
        return out


@dataclass
class Witness:
    a: int
    b: int
    values: tuple[int, ...]
    color: int

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b),
                "values": [str(v) for v in self.values], "color": self.color}


@dataclass
class ProofTrace:
    seed: GeneratingSequence
    stage_lengths: tuple[int, ...]
    stages: list[Stage]
    pigeonhole: tuple[int, int, int]  # (j, n, k)
    witness: Witness
    chain: dict[str, bool]
    cross_check: bool | None
    verified: bool
    nodes: int
    seed_sums: frozenset[int] = field(default=frozenset(), repr=False)

    def to_json(self) -> dict:
        j, n, k = self.pigeonhole
        return {
            "seed": [str(x) for x in self.seed],
            "stage_lengths": list(self.stage_lengths),
            "stages": [s.to_json() for s in self.stages],
            "pigeonhole": {"j": j, "n": n, "k": k},
            "witness": self.witness.to_json(),
            "chain": self.chain,
            "cross_check": self.cross_check,
            "verified": self.verified,
            "nodes": self.nodes,
        }


@dataclass
class SimulationFailure:
    stage: int
    reason: str  # "no-fs-structure" | "budget-exhausted" | "no-repeat"
    detail: str
    stages: list[Stage]
    nodes: int

    verified = False

    def to_json(self) -> dict:
        return {"failure": {"stage": self.stage, "reason": self.reason, "detail": self.detail},
                "stages": [s.to_json() for s in self.stages], "nodes": self.nodes,
                "verified": False}


SimulationResult = Union[ProofTrace, SimulationFailure]


def stage_member(rule: ColoringRule, seed_sums: frozenset[int], stages: Sequence[Stage],
                 n: int, m: int) -> bool:
    """Membership in D_n, evaluated from the recursive definition alone."""
    if m < 1 or (rule.cap is not None and m > rule.cap) or rule.color(m) != stages[n].color:
        return False
    if n == 0:
        return m in seed_sums
    y = stages[n].y
    return (stage_member(rule, seed_sums, stages, n - 1, m * y)
            and stage_member(rule, seed_sums, stages, n - 1, m * y + y))


def simulate(
    rule: ColoringRule,
    seed: GeneratingSequence | Sequence[int],
    stage_lengths: Sequence[int],
    budget: int | None = None,
    explicit_limit: int = DEFAULT_EXPLICIT_LIMIT,
) -> SimulationResult:
    """Run the descent and return a verified trace or a failure report.

    ``budget`` caps the FS-extraction nodes over all stages.  When the
    witness values are at most ``explicit_limit`` the witness is also
    re-found by exhaustive search on the induced explicit coloring.
    """
    seed = seed if isinstance(seed, GeneratingSequence) else GeneratingSequence(tuple(seed))
    lengths = tuple(stage_lengths)
    if len(lengths) != rule.r + 1:
        raise ValueError(f"need {rule.r + 1} stage lengths for {rule.r} colors, got {len(lengths)}")
    if any(L < 1 for L in lengths):
        raise ValueError("stage lengths must be positive")
    seed_sums = finite_sums(seed).values
    if rule.cap is not None and max(seed_sums) > rule.cap:
        raise RuleCapError(f"FS(seed) reaches {max(seed_sums)}, beyond the rule cap {rule.cap}")

    stages: list[Stage] = []
    nodes = 0
    pool = seed_sums
    y: int | None = None
    divisible = None
    for n, length in enumerate(lengths):
        if n > 0:
            prev = stages[-1]
            y = prev.sequence[0]
            if len(prev.sequence) >= 2:
                split = lemma3_split(prev.sequence)
                hit = find_divisible(split.tail, y)
                divisible = None if hit is None else (tuple(i + 1 for i in hit[0]), hit[1])
            else:
                divisible = None
            pool = dilate_preimage(shift_intersect(prev.members, y), y)

        by_color: dict[int, set[int]] = {}
        for m in pool:
            by_color.setdefault(rule.color(m), set()).add(m)
        chosen: Stage | None = None
        tried = []
        for k in range(rule.r):
            members = frozenset(by_color.get(k, ()))
            left = None if budget is None else budget - nodes
            ext = extract_fs_subsequence(members, length, left)
            nodes += ext.nodes
            if ext.status is ExtractStatus.UNKNOWN:
                return SimulationFailure(n, "budget-exhausted",
                                         f"budget ran out on color {k}", stages, nodes)
            tried.append(f"color {k}: {len(members)} candidates")
            if ext.found:
                seq = ext.sequence
                chosen = Stage(n, y, k, seq, len(finite_sums(seq)), len(members), divisible, members)
                break
        if chosen is None:
            return SimulationFailure(n, "no-fs-structure",
                                     f"no FS copy of length {length}; " + ", ".join(tried),
                                     stages, nodes)
        stages.append(chosen)
        earlier = [s.n for s in stages[:-1] if s.color == chosen.color]
        if earlier:
            return _assemble(rule, seed, lengths, stages, earlier[0], n, nodes, seed_sums,
                             explicit_limit)
    return SimulationFailure(len(lengths), "no-repeat", "stage colors never repeated", stages, nodes)


def _assemble(rule: ColoringRule, seed: GeneratingSequence, lengths: tuple[int, ...],
              stages: list[Stage], j: int, n: int, nodes: int, seed_sums: frozenset[int],
              explicit_limit: int) -> ProofTrace:
    k = stages[n].color
    x = min(stages[n].sequence)
    ys = [stages[i].y for i in range(j + 1, n + 1)]
    b = math.prod(ys)
    lower = math.prod(ys[:-1])  # y_{n-1} ... y_{j+1}
    y_n = ys[-1]
    a = x

    def member(i: int, m: int) -> bool:
        return stage_member(rule, seed_sums, stages, i, m)

    chain = {
        "x_in_D_n": member(n, x),
        "x*y_n*...*y_j+1_in_D_j": member(j, x * b),
        "y_n*...*y_j+1_in_D_j": member(j, b),
        "(x*y_n+y_n)*y_n-1*...*y_j+1_in_D_j": member(j, (x * y_n + y_n) * lower),
    }
    values = tuple(sorted(instantiate(TARGET, {"a": a, "b": b})))
    colors = {rule.color(v) for v in values}
    mono = colors == {k}

    cross: bool | None = None
    if max(values) <= explicit_limit and (rule.cap is None or max(values) <= rule.cap):
        explicit = induced_coloring(rule, max(values))
        cross = is_monochromatic(explicit, values) == k and find_witness(explicit, TARGET) is not None

    verified = all(chain.values()) and mono and cross is not False
    return ProofTrace(seed, lengths, stages, (j, n, k), Witness(a, b, values, k), chain, cross,
                      verified, nodes, seed_sums)
