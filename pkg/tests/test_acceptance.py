"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute.  Every tolerance and runtime budget is pinned here.
"""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from sftlab.classes import (
    class_degree_at,
    class_maximal,
    class_multiplicities,
    class_partition,
)
from sftlab.codes import degree, identity_code
from sftlab.estimate import EstimatorConfig, estimate_diagonal_mass
from sftlab.fibers import (
    canonical_lift,
    degree_at,
    degree_joining,
    diagonal_mass,
    ergodic_lifts,
    fiber_points,
    joining_permutation_equivalence,
)
from sftlab.groupcodes import (
    BernoulliMeasure,
    difference_code,
    multiplicity_closed_form,
    sum_code,
)
from sftlab.shifts import full_shift

from helpers import (
    brute_force_fiber,
    brute_same_class,
    entropy_gap_code,
    golden_mean,
    random_finite_to_one_instance,
    random_infinite_to_one_instance,
)


class Criterion:
    def __init__(self, number, label, budget_seconds):
        self.number = number
        self.label = label
        self.budget = budget_seconds
        self.start = None

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"[{status}] criterion {self.number}: {self.label} ({elapsed:.2f}s)")
        if exc_type is None and self.budget is not None:
            assert elapsed < self.budget, (
                f"criterion {self.number} exceeded its {self.budget}s budget"
            )
        return False


def bern(*fracs):
    return BernoulliMeasure(tuple(Fraction(f) for f in fracs))


V6 = bern("1/4", "1/8", "1/8", "1/4", "1/8", "1/8")


def test_criterion_1_intro_example_closed_form():
    with Criterion(1, "mod-2 difference code closed form", 1.0):
        third = bern("2/3", "1/3")  # p = 1/3 for the symbol 1
        m, lifts = multiplicity_closed_form(third)
        assert m == 1
        assert len(lifts) == 2
        assert {lift.probs for lift in lifts} == {
            (Fraction(2, 3), Fraction(1, 3)),
            (Fraction(1, 3), Fraction(2, 3)),
        }
        half = bern("1/2", "1/2")
        m, lifts = multiplicity_closed_form(half)
        assert m == 2
        assert len(lifts) == 1
        assert lifts[0] == half


def test_criterion_2_sum_code_5_fixed_point():
    with Criterion(2, "sum-code-5 fiber over the fixed point", 1.0):
        code = sum_code(5)
        y = code.image_periodic_point(["0"])
        assert degree_at(code, y) == 5
        lifts = ergodic_lifts(code, y)
        assert len(lifts) == 3
        assert [e.multiplicity for e in lifts] == [1, 2, 2]
        assert class_degree_at(code, y) == 3
        mults = class_multiplicities(code, y)
        assert sum(m for _, m in mults) == 3
        mixture = canonical_lift(code, y)
        assert [w for w, _ in mixture.components] == [
            Fraction(1, 5),
            Fraction(2, 5),
            Fraction(2, 5),
        ]


def test_criterion_3_theorem_suite_randomized():
    with Criterion(3, "degree theorems on 200 random finite-to-one instances", 60.0):
        rng = random.Random(20240517)
        for _ in range(200):
            code, y = random_finite_to_one_instance(rng, max_symbols=6, max_period=4)
            points = fiber_points(code, y)
            assert points == brute_force_fiber(code, y)
            d = len(points)
            p = y.period
            lifts = ergodic_lifts(code, y)
            assert d == sum(e.multiplicity for e in lifts)
            assert d * p == sum(e.period for e in lifts)
            joining = degree_joining(code, y)
            assert joining.is_separating()
            for row in joining.cycle:
                assert len(set(row)) == d
            ordering = list(range(d))
            rng.shuffle(ordering)
            other = degree_joining(code, y, tuple(ordering))
            assert joining_permutation_equivalence(joining, other) is not None


def test_criterion_4_divisor_law():
    with Criterion(4, "divisor law for difference codes N=2..8", 5.0):
        rng = random.Random(97)
        for n in range(2, 9):
            for trial in range(50):
                if trial % 5 == 0:
                    # periodic vectors exercise nontrivial multiplicities
                    divisors = [d for d in range(1, n + 1) if n % d == 0]
                    period = rng.choice(divisors)
                    block = [rng.randint(1, 9) for _ in range(period)]
                    repeated = block * (n // period)
                    total = sum(repeated)
                    mu = BernoulliMeasure(
                        tuple(Fraction(b, total) for b in repeated)
                    )
                else:
                    block = [rng.randint(1, 9) for _ in range(n)]
                    total = sum(block)
                    mu = BernoulliMeasure(tuple(Fraction(b, total) for b in block))
                m, lifts = multiplicity_closed_form(mu)
                assert len(lifts) * m == n
                assert n % len(lifts) == 0


def test_criterion_5_class_suite():
    with Criterion(5, "class theorems on 100 infinite-to-one instances", 60.0):
        rng = random.Random(424242)
        for _ in range(100):
            code, y = random_infinite_to_one_instance(rng, max_symbols=5, max_period=2)
            part = class_partition(code, y)
            mults = class_multiplicities(code, y)
            assert sum(m for _, m in mults) == part.count
            preimages = brute_force_fiber(code, y, max_wraps=3)
            for i, x1 in enumerate(preimages):
                for x2 in preimages[i:]:
                    same = part.class_of_point(x1) == part.class_of_point(x2)
                    assert same == brute_same_class(code, y, x1, x2)
        # the entropy-gap instance: two classes, a unique global maximizer
        code = entropy_gap_code()
        y = code.image_periodic_point(["0"])
        assert class_degree_at(code, y) == 2
        report = class_maximal(code, y)
        assert len(report.maximizers) == 1


def test_criterion_6_diagonal_mass():
    with Criterion(6, "diagonal mass identities, exact and Monte Carlo", 30.0):
        # exact rational equality over periodic lifts
        code = sum_code(5)
        y = code.image_periodic_point(["0"])
        for entry in ergodic_lifts(code, y):
            assert diagonal_mass(code, y, entry) == Fraction(1, entry.multiplicity)
        code2 = difference_code(2)
        y2 = code2.image_periodic_point(["0", "1"])
        for entry in ergodic_lifts(code2, y2):
            assert diagonal_mass(code2, y2, entry) == Fraction(1, entry.multiplicity)
        rng = random.Random(6123)
        for _ in range(25):
            rcode, ry = random_finite_to_one_instance(rng, max_symbols=6, max_period=3)
            for entry in ergodic_lifts(rcode, ry):
                assert diagonal_mass(rcode, ry, entry) == Fraction(
                    1, entry.multiplicity
                )
        # Monte Carlo, fixed seeds: N=2 symmetric at window 10
        half = bern("1/2", "1/2")
        report = estimate_diagonal_mass(
            half, EstimatorConfig(window=10, samples=100_000, seed=7)
        )
        assert abs(report.estimate - 0.5) <= 3 * report.std_error
        assert report.implied_multiplicity == 2
        # N=6 with least period 3: multiplicity 2 witnessed numerically
        report6 = estimate_diagonal_mass(
            V6, EstimatorConfig(window=256, samples=100_000, seed=7)
        )
        assert abs(report6.estimate - 0.5) <= 3 * report6.std_error
        assert report6.implied_multiplicity == 2


def test_criterion_7_degree_certificates():
    with Criterion(7, "degree certificates for the code families", 10.0):
        for n in range(2, 9):
            for family in (difference_code, sum_code):
                code = family(n)
                cert = degree(code)
                assert cert.degree == n
                assert cert.converged
                for word in (["0"], ["0", "1"]):
                    y = code.image_periodic_point(word)
                    assert len(fiber_points(code, y)) >= cert.degree
        for sft in (golden_mean(), full_shift(["0", "1", "2"])):
            code = identity_code(sft)
            cert = degree(code)
            assert cert.degree == 1
            assert cert.converged
            y = code.image_periodic_point([sft.symbols[0]])
            assert len(fiber_points(code, y)) >= 1


def test_criterion_8_cli_determinism(tmp_path):
    with Criterion(8, "byte-identical CLI output across repeated runs", None):
        sum5 = tmp_path / "sum5.json"
        sum5.write_text('{"version": 1, "family": "sum", "N": 5}')
        diff2 = tmp_path / "diff2.json"
        diff2.write_text(
            '{"version": 1, "family": "difference", "N": 2,'
            ' "measure": {"bernoulli": ["1/2", "1/2"]}}'
        )
        invocations = [
            ["lifts", str(sum5), "--y", "0"],
            ["class-max", str(sum5), "--y", "0"],
            [
                "estimate",
                str(diff2),
                "--kind",
                "diagonal",
                "--window",
                "10",
                "--samples",
                "1000",
                "--seed",
                "7",
            ],
        ]
        for args in invocations:
            outputs = set()
            for run in range(3):
                env = dict(os.environ, PYTHONHASHSEED=str(run))
                proc = subprocess.run(
                    [sys.executable, "-m", "sftlab", *args],
                    capture_output=True,
                    text=True,
                    env=env,
                )
                assert proc.returncode == 0, proc.stderr
                outputs.add(proc.stdout)
            assert len(outputs) == 1
            json.loads(outputs.pop())  # structured output stays valid JSON
