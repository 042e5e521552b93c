"""Finite sums of integer sequences: FS sets, shifts, dilation preimages.

An IP_R set is modelled by a :class:`GeneratingSequence` ``<x_1..x_R>`` together
with its :class:`FiniteSumSet`, the sums over all nonempty index subsets.
Indices in witnesses are 1-based.  All arithmetic uses Python integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

MAX_FS_LENGTH = 30
MAX_DIVISOR = 8
MAX_VALUE_BOUND = 12


class GuardError(ValueError):
    """An enumeration guard was exceeded."""


class CertificateError(AssertionError):
    """A constructive certificate failed its own re-check."""


@dataclass(frozen=True)
class GeneratingSequence:
    xs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.xs:
            raise ValueError("a generating sequence needs at least one entry")
        if any(x < 1 for x in self.xs):
            raise ValueError(f"entries must be positive: {self.xs}")

    @classmethod
    def of(cls, *xs: int) -> "GeneratingSequence":
        return cls(tuple(xs))

    def __len__(self) -> int:
        return len(self.xs)

    def __iter__(self):
        return iter(self.xs)

    def __getitem__(self, i: int) -> int:
        return self.xs[i]


def _as_sequence(g: GeneratingSequence | Sequence[int]) -> GeneratingSequence:
    return g if isinstance(g, GeneratingSequence) else GeneratingSequence(tuple(g))


@dataclass(frozen=True)
class FiniteSumSet:
    values: frozenset[int]
    witness: dict[int, tuple[int, ...]]
    source: GeneratingSequence

    def __contains__(self, v: int) -> bool:
        return v in self.values

    def __len__(self) -> int:
        return len(self.values)

    def sorted_values(self) -> list[int]:
        return sorted(self.values)

    def to_json(self) -> dict:
        return {
            "xs": [str(x) for x in self.source.xs],
            "values": [str(v) for v in self.sorted_values()],
            "witness": {str(v): list(self.witness[v]) for v in self.sorted_values()},
        }


def finite_sums(g: GeneratingSequence | Sequence[int], max_length: int = MAX_FS_LENGTH) -> FiniteSumSet:
    """All nonempty-subset sums of ``g``.

    Each value keeps the witness subset with the smallest index bitmask.
    Subsets are generated in increasing bitmask order and the first witness
    of each value is kept, which gives exactly that choice.
    """
    g = _as_sequence(g)
    if len(g) > max_length:
        raise GuardError(f"sequence length {len(g)} exceeds guard {max_length}")
    witness: dict[int, tuple[int, ...]] = {}
    for i, x in enumerate(g.xs, start=1):
        new = [(x, (i,))]
        new.extend((v + x, h + (i,)) for v, h in witness.items())
        for v, h in new:
            if v not in witness:
                witness[v] = h
    return FiniteSumSet(frozenset(witness), witness, g)


def shift_intersect(a: Iterable[int], y: int) -> frozenset[int]:
    """``(-y + A) & A``: the n in A with n + y also in A."""
    a = a if isinstance(a, (set, frozenset)) else frozenset(a)
    return frozenset(n for n in a if n + y in a)


def dilate_preimage(a: Iterable[int], y: int) -> frozenset[int]:
    """``y^-1 A``: the n >= 1 with n * y in A."""
    if y < 1:
        raise ValueError(f"dilation factor must be positive, got {y}")
    return frozenset(v // y for v in a if v % y == 0 and v >= y)


@dataclass(frozen=True)
class Lemma3Split:
    y: int
    tail: GeneratingSequence
    certificate: FiniteSumSet


def lemma3_split(g: GeneratingSequence | Sequence[int]) -> Lemma3Split:
    """Split off ``y = x_1``; the tail's finite sums land in ``(-y + FS(g)) & FS(g)``.

    Every tail sum s has s + x_1 as a sum with index set enlarged by 1, so the
    containment holds unconditionally; it is re-checked anyway.
    """
    g = _as_sequence(g)
    if len(g) < 2:
        raise ValueError("need at least two generators to split")
    y = g.xs[0]
    tail = GeneratingSequence(g.xs[1:])
    certificate = finite_sums(tail)
    target = shift_intersect(finite_sums(g).values, y)
    if not certificate.values <= target:
        missing = sorted(certificate.values - target)[:5]
        raise CertificateError(f"tail sums {missing} missing from (-{y} + FS) & FS")
    return Lemma3Split(y, tail, certificate)


def find_divisible(g: GeneratingSequence | Sequence[int], y: int) -> tuple[tuple[int, ...], int] | None:
    """Index subset H with ``y | sum(x_n for n in H)`` and that sum.

    With at least y generators two of the prefix sums s_0..s_R agree mod y and
    the block between them is returned.  Shorter sequences fall back to the
    smallest divisible finite sum, if any.
    """
    g = _as_sequence(g)
    if y < 1:
        raise ValueError(f"divisor must be positive, got {y}")
    if len(g) >= y:
        first_seen = {0: 0}
        s = 0
        for j, x in enumerate(g.xs, start=1):
            s += x
            i = first_seen.setdefault(s % y, j)
            if i != j:
                h = tuple(range(i + 1, j + 1))
                return h, sum(g.xs[k - 1] for k in h)
        raise AssertionError("prefix-sum pigeonhole failed")  # pragma: no cover
    fs = finite_sums(g)
    for v in fs.sorted_values():
        if v % y == 0:
            return fs.witness[v], v
    return None


def find_divisible_by_residues(g: GeneratingSequence | Sequence[int], y: int) -> tuple[int, ...] | None:
    """Residue-class route: y generators sharing a residue mod y sum to a multiple of y.

    Guaranteed to succeed once ``len(g) > (y - 1) * y``.
    """
    g = _as_sequence(g)
    classes: dict[int, list[int]] = {}
    for i, x in enumerate(g.xs, start=1):
        members = classes.setdefault(x % y, [])
        members.append(i)
        if len(members) == y:
            return tuple(members)
    return None


def minimal_ipr_for_divisibility(
    y: int,
    value_bound: int,
    max_y: int = MAX_DIVISOR,
    max_bound: int = MAX_VALUE_BOUND,
) -> int:
    """Least R such that every ``<x_1..x_R>`` with entries in [1, value_bound]
    has a finite sum divisible by y.

    Exhaustive, up to reordering and reduction mod y: whether some subset
    sum is divisible by y depends only on the multiset of residues.
    """
    if y < 1 or value_bound < 1:
        raise ValueError("y and value_bound must be positive")
    if y > max_y or value_bound > max_bound:
        raise GuardError(f"(y={y}, bound={value_bound}) exceeds guard ({max_y}, {max_bound})")
    residues = sorted({x % y for x in range(1, value_bound + 1)})
    full = (1 << y) - 1
    R = 1
    while True:
        if all(_has_zero_subset_sum(combo, y, full) for combo in
               itertools.combinations_with_replacement(residues, R)):
            return R
        R += 1


def _has_zero_subset_sum(residues: Sequence[int], y: int, full: int) -> bool:
    reach = 0  # bit k set: some nonempty subset sums to k mod y
    for t in residues:
        rotated = ((reach << t) | (reach >> (y - t))) & full if t else reach
        reach |= rotated | (1 << t)
    return bool(reach & 1)


class ExtractStatus(Enum):
    FOUND = "found"
    NONE = "none"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Extraction:
    status: ExtractStatus
    sequence: GeneratingSequence | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.status is ExtractStatus.FOUND


def extract_fs_subsequence(s: Iterable[int], length: int, budget: int | None = None) -> Extraction:
    """Find ``<x_1 < ... < x_L>`` whose finite sums are pairwise distinct and all lie in ``s``.

    Backtracking over the elements of ``s`` in increasing order, so the
    returned sequence is the lexicographically first one.  Distinct sums make
    the FS set a genuine copy of size 2^L - 1.  ``budget`` caps the number of
    candidate extensions tried; running out yields ``UNKNOWN``, while
    ``NONE`` means the search was exhaustive.
    """
    if length < 1:
        raise ValueError("length must be positive")
    pool = s if isinstance(s, (set, frozenset)) else frozenset(s)
    cands = sorted(pool)
    if not cands:
        return Extraction(ExtractStatus.NONE, None, 0)
    top = cands[-1]
    nodes = 0
    chosen: list[int] = []

    class _OutOfBudget(Exception):
        pass

    def extend(start: int, sums: frozenset[int], total: int) -> bool:
        nonlocal nodes
        left = length - len(chosen)
        if left == 0:
            return True
        for idx in range(start, len(cands)):
            x = cands[idx]
            # the remaining left entries are x, >x+1, ... and all add to the top sum
            if total + left * x + left * (left - 1) // 2 > top:
                break
            nodes += 1
            if budget is not None and nodes > budget:
                raise _OutOfBudget
            if x in sums:
                continue
            shifted = [v + x for v in sums]
            if any(v not in pool or v in sums for v in shifted):
                continue
            chosen.append(x)
            if extend(idx + 1, sums | {x} | frozenset(shifted), total + x):
                return True
            chosen.pop()
        return False

    try:
        ok = extend(0, frozenset(), 0)
    except _OutOfBudget:
        return Extraction(ExtractStatus.UNKNOWN, None, nodes - 1)
    if not ok:
        return Extraction(ExtractStatus.NONE, None, nodes)
    g = GeneratingSequence(tuple(chosen))
    if not finite_sums(g).values <= pool:
        raise CertificateError(f"extracted {g.xs} has sums outside the target set")
    return Extraction(ExtractStatus.FOUND, g, nodes)
