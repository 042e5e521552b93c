"""Exit criteria, one test per criterion, each timed against its limit."""

import random
import shutil
import subprocess
import time
from itertools import product

import pytest

from monochromatic.cnf import export_cnf
from monochromatic.fs import (
    find_divisible,
    finite_sums,
    lemma3_split,
    minimal_ipr_for_divisibility,
    shift_intersect,
)
from monochromatic.pattern import PRESETS, parse_pattern
from monochromatic.search import (
    Avoiding,
    Forced,
    exponent_bijection,
    find_avoiding,
    find_witness,
    rado_number,
    verify_avoidance,
)
from monochromatic.simulate import induced_coloring, parity_rule, simulate, stage_member
from oracles import PRESET_FUNCTIONS, avoids, brute_force_avoidable, dpll, naive_instances, subset_sums

# node budget documented for the r = 2 runs of the four-term and Sahasrabudhe patterns
R2_BUDGET = 1_000_000
EXTERNAL_SOLVERS = ("kissat", "cadical", "minisat", "glucose")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def report(criterion: str, ok: bool, elapsed: float, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion} ({elapsed:.2f}s) {detail}")


def certificate_pair(name: str, r: int, budget=None):
    """Run the sweep and check both halves of the certificate independently."""
    p = parse_pattern(PRESETS[name])
    res = rado_number(p, r, 200, budget)
    assert res.forcing_n is not None, f"no forcing number for {name}, r={r}"
    n = res.forcing_n
    prev = res.avoiding_at_prev
    assert prev.n == n - 1 and prev.r == r
    assert verify_avoidance(prev, p)
    assert avoids(prev.colors, naive_instances(PRESET_FUNCTIONS[name], n - 1))
    assert isinstance(res.outcomes[-1], Forced) and res.outcomes[-1].n == n
    return p, res


def dimacs_satisfiable(cnf) -> bool:
    """Decide the exported formula with an external solver if one is installed, else DPLL."""
    model = dpll(cnf.num_vars, cnf.clauses)
    for solver in EXTERNAL_SOLVERS:
        exe = shutil.which(solver)
        if exe:
            proc = subprocess.run([exe], input=cnf.to_dimacs(), capture_output=True, text=True)
            assert proc.returncode in (10, 20)
            assert (proc.returncode == 10) == (model is not None)
    return model is not None


def test_ac1_forcing_oracle_equivalence():
    with Timer() as t:
        checked = 0
        for name in PRESETS:
            p = parse_pattern(PRESETS[name])
            for r in (1, 2):
                for n in range(1, 13):
                    got = isinstance(find_avoiding(p, r, n), Avoiding)
                    assert got == brute_force_avoidable(PRESET_FUNCTIONS[name], r, n), (name, r, n)
                    checked += 1
    report("AC1 oracle equivalence", True, t.elapsed, f"{checked} cases")
    assert t.elapsed < 60


def test_ac2_schur_anchors():
    with Timer() as t2:
        p, res = certificate_pair("schur", 2)
    assert res.forcing_n == 5 and t2.elapsed < 1
    fn = PRESET_FUNCTIONS["schur"]
    assert brute_force_avoidable(fn, 2, 4) and not brute_force_avoidable(fn, 2, 5)

    with Timer() as t3:
        p, res = certificate_pair("schur", 3)
    assert res.forcing_n == 14 and t3.elapsed < 60
    # independent refutation at 14 and satisfiability at 13
    assert dimacs_satisfiable(export_cnf(p, 3, 13))
    assert not dimacs_satisfiable(export_cnf(p, 3, 14))
    report("AC2 Schur anchors", True, t2.elapsed + t3.elapsed, "r=2 -> 5, r=3 -> 14")


def test_ac3_multiplicative_schur_anchor():
    with Timer() as t:
        p, res = certificate_pair("multiplicative-schur", 2)
    assert res.forcing_n == 4
    fn = PRESET_FUNCTIONS["multiplicative-schur"]
    assert brute_force_avoidable(fn, 2, 3) and not brute_force_avoidable(fn, 2, 4)
    report("AC3 multiplicative Schur", True, t.elapsed, "r=2 -> 4")
    assert t.elapsed < 1


def test_ac4_target_pattern_finite_shadow():
    with Timer() as t:
        p, res1 = certificate_pair("translated-product", 1)
        assert res1.forcing_n == 2
        p, res = certificate_pair("translated-product", 2, R2_BUDGET)
        n = res.forcing_n
        assert res.nodes <= R2_BUDGET
        assert dimacs_satisfiable(export_cnf(p, 2, n - 1))
        assert not dimacs_satisfiable(export_cnf(p, 2, n))
    report("AC4 {a,b,ab,(a+1)b}", True, t.elapsed, f"r=2 -> {n} in {res.nodes} nodes")


def test_ac5_sahasrabudhe_refutation():
    with Timer() as t:
        p, res = certificate_pair("sahasrabudhe", 2, R2_BUDGET)
        n = res.forcing_n
        assert dimacs_satisfiable(export_cnf(p, 2, n - 1))
        assert not dimacs_satisfiable(export_cnf(p, 2, n))
    report("AC5 {a,b,b(a+1)}", True, t.elapsed, f"r=2 -> {n} in {res.nodes} nodes")


def test_ac6_lemma2_suite():
    with Timer() as t:
        for y in range(1, 7):
            for xs in product(range(1, 9), repeat=y):
                hit = find_divisible(xs, y)
                assert hit is not None
                h, value = hit
                assert value % y == 0 and sum(xs[i - 1] for i in h) == value
            if y > 1:
                assert find_divisible([1] * (y - 1), y) is None
            assert minimal_ipr_for_divisibility(y, 8) == y
    report("AC6 divisibility", True, t.elapsed)
    assert t.elapsed < 30


def test_ac7_lemma3_suite():
    rng = random.Random(20261014)
    with Timer() as t:
        for _ in range(10_000):
            xs = [rng.randint(1, 100) for _ in range(rng.randint(2, 10))]
            tail = finite_sums(xs[1:]).values
            assert tail <= shift_intersect(finite_sums(xs).values, xs[0])
            assert lemma3_split(xs).certificate.values == tail
    report("AC7 shift certificate", True, t.elapsed, "10000 sequences")
    assert t.elapsed < 10


def test_ac8_proof_simulator_end_to_end():
    rule = parity_rule()
    seed = [2 ** i for i in range(1, 11)]
    with Timer() as t:
        trace = simulate(rule, seed, [4, 3, 2])
        assert trace.verified
        j, n, k = trace.pigeonhole
        assert j < n and trace.stages[j].color == trace.stages[n].color == k
        seed_sums = finite_sums(seed).values
        member = lambda i, m: stage_member(rule, seed_sums, trace.stages, i, m)
        for s in trace.stages:
            assert all(member(s.n, v) for v in finite_sums(s.sequence).values)
        a, b = trace.witness.a, trace.witness.b
        ys = [trace.stages[i].y for i in range(j + 1, n + 1)]
        lower = 1
        for y in ys[:-1]:
            lower *= y
        assert member(j, a * b) and member(j, b) and member(j, (a * ys[-1] + ys[-1]) * lower)
        values = {a, b, a * b, (a + 1) * b}
        assert {rule.color(v) for v in values} == {k}
        explicit = induced_coloring(rule, max(values))
        hit = find_witness(explicit, parse_pattern(PRESETS["translated-product"]))
        assert hit is not None
    report("AC8 proof simulator", True, t.elapsed, f"a={a}, b={b}, color {k}")
    assert t.elapsed < 60


def test_ac9_fs_correctness():
    rng = random.Random(9)
    with Timer() as t:
        for _ in range(400):
            xs = [rng.randint(1, 200) for _ in range(rng.randint(1, 12))]
            fs = finite_sums(xs)
            brute = subset_sums(xs)
            assert fs.values == set(brute)
            assert all(sum(xs[i - 1] for i in h) == v for v, h in fs.witness.items())
    report("AC9 finite sums", True, t.elapsed, "400 sequences")
    assert t.elapsed < 10


def test_ac10_exponential_transfer():
    with Timer() as t:
        for k in range(1, 11):
            mapping = exponent_bijection(k)
            assert set(mapping.values()) == naive_instances(PRESET_FUNCTIONS["schur"], k)
            assert all({2 ** e for e in exps} == vs for vs, exps in mapping.items())
    report("AC10 exponential transfer", True, t.elapsed)
    assert t.elapsed < 5
