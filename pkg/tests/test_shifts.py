import math
import random

import pytest

from sftlab.errors import EmptyShift, NotEssential
from sftlab.shifts import (
    PeriodicOrbitMeasure,
    PeriodicPoint,
    Sft,
    count_allowed_words,
    entropy,
    entropy_bounds,
    essentialize,
    full_shift,
    higher_block,
    is_allowed_word,
    is_irreducible,
    matrix_power_trace,
    orbit_sum_formula_holds,
    periodic_points,
)

from helpers import full_n_shift, golden_mean, random_essential_irreducible_sft

GOLDEN_ENTROPY = math.log((1 + math.sqrt(5)) / 2)


def test_sft_validation():
    with pytest.raises(EmptyShift):
        Sft([], [])
    with pytest.raises(ValueError):
        Sft(["a", "a"], [])
    with pytest.raises(ValueError):
        Sft(["a"], [("a", "b")])


def test_essentialize_full_shift_unchanged():
    f2 = full_n_shift(2)
    assert essentialize(f2) == f2


def test_essentialize_drops_dead_symbol():
    sft = Sft(["a", "b"], [("a", "a"), ("a", "b")])
    out = essentialize(sft)
    assert out.symbols == ("a",)
    assert out.edges == frozenset({("a", "a")})


def test_essentialize_golden_mean_unchanged():
    gm = golden_mean()
    assert essentialize(gm) == gm


def test_essentialize_empty():
    sft = Sft(["a", "b"], [("a", "b")])
    with pytest.raises(EmptyShift):
        essentialize(sft)


def test_essentialize_idempotent():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 6)
        symbols = [str(i) for i in range(n)]
        edges = [(a, b) for a in symbols for b in symbols if rng.random() < 0.4]
        try:
            once = essentialize(Sft(symbols, edges))
        except EmptyShift:
            continue
        assert essentialize(once) == once


def test_is_irreducible():
    assert is_irreducible(full_n_shift(3))
    assert is_irreducible(golden_mean())
    two_loops = Sft(["a", "b"], [("a", "a"), ("b", "b")])
    assert not is_irreducible(two_loops)
    with pytest.raises(NotEssential):
        is_irreducible(Sft(["a", "b"], [("a", "a"), ("a", "b")]))


@pytest.mark.parametrize(
    "sft,expected",
    [
        (full_shift(["0", "1"]), math.log(2)),
        (full_shift([str(i) for i in range(5)]), math.log(5)),
        (golden_mean(), GOLDEN_ENTROPY),
    ],
)
def test_entropy_known_values(sft, expected):
    assert entropy(sft) == pytest.approx(expected, abs=1e-9)
    lo, hi = entropy_bounds(sft)
    assert lo <= expected <= hi
    assert hi - lo <= 1e-9


def test_entropy_reducible_graph_takes_max():
    # one fixed loop next to a full 2-shift component
    sft = Sft(
        ["a", "b", "c"],
        [("a", "a"), ("b", "b"), ("b", "c"), ("c", "b"), ("c", "c")],
    )
    assert entropy(sft) == pytest.approx(math.log(2), abs=1e-9)


def test_periodic_points_full_2_shift():
    f2 = full_n_shift(2)
    assert [x.word for x in periodic_points(f2, 1)] == [("0",), ("1",)]
    assert [x.word for x in periodic_points(f2, 2)] == [("0", "1")]


def test_periodic_points_golden_mean():
    gm = golden_mean()
    assert [x.word for x in periodic_points(gm, 2)] == [("0", "1")]
    # no fixed point at 1 since 11 is forbidden
    assert [x.word for x in periodic_points(gm, 1)] == [("0",)]


def test_periodic_points_are_primitive_and_canonical():
    rng = random.Random(5)
    for _ in range(10):
        sft = random_essential_irreducible_sft(rng)
        for p in range(1, 5):
            for x in periodic_points(sft, p):
                assert x.period == p
                assert x.word == x.canonical_word


def test_orbit_count_matches_trace():
    rng = random.Random(17)
    cases = [golden_mean(), full_n_shift(2), full_n_shift(3)]
    cases += [random_essential_irreducible_sft(rng) for _ in range(5)]
    for sft in cases:
        for p in range(1, 6):
            assert orbit_sum_formula_holds(sft, p)


def test_trace_exact_big_integers():
    f8 = full_n_shift(8)
    assert matrix_power_trace(f8, 30) == 8**30


def test_higher_block_full_2_shift():
    f2 = full_n_shift(2)
    hb, table = higher_block(f2, 2)
    assert len(hb.symbols) == 4
    for u, v in hb.edges:
        assert u[1:] == v[:-1]
    assert set(table.values()) == set(hb.symbols)


def test_higher_block_golden_mean_excludes_11():
    hb, _ = higher_block(golden_mean(), 2)
    assert hb.symbols == (("0", "0"), ("0", "1"), ("1", "0"))


def test_higher_block_m1_isomorphic():
    gm = golden_mean()
    hb, table = higher_block(gm, 1)
    assert len(hb.symbols) == len(gm.symbols)
    assert {w[0] for w in hb.symbols} == set(gm.symbols)
    assert table == {w: w for w in hb.symbols}


def test_higher_block_preserves_entropy():
    for sft in (golden_mean(), full_n_shift(2), full_n_shift(3)):
        h = entropy(sft)
        for m in (2, 3):
            hb, _ = higher_block(sft, m)
            assert entropy(hb) == pytest.approx(h, abs=1e-9)


def test_higher_block_preserves_irreducibility():
    rng = random.Random(23)
    for _ in range(8):
        sft = random_essential_irreducible_sft(rng)
        hb, _ = higher_block(sft, 2)
        assert is_irreducible(hb) == is_irreducible(sft)


def test_higher_block_word_counts_are_conjugate():
    # words of length L in the m-block presentation = words of length
    # L + m - 1 in the original
    for sft in (golden_mean(), full_n_shift(3)):
        for m in (2, 3):
            hb, _ = higher_block(sft, m)
            for length in range(1, 5):
                assert count_allowed_words(hb, length) == count_allowed_words(
                    sft, length + m - 1
                )


def test_periodic_point_primitivity_enforced():
    f2 = full_n_shift(2)
    with pytest.raises(ValueError):
        PeriodicPoint(("0", "0"), f2.symbols)
    reduced = PeriodicPoint.from_cycle(("0", "0"), f2.symbols)
    assert reduced.word == ("0",)


def test_periodic_point_shift_and_canonical():
    f2 = full_n_shift(2)
    x = PeriodicPoint(("1", "0"), f2.symbols)
    assert x.shift(1).word == ("0", "1")
    assert x.canonical_word == ("0", "1")
    assert x.shift(2) == x


def test_orbit_measure_equality():
    f2 = full_n_shift(2)
    a = PeriodicOrbitMeasure(PeriodicPoint(("1", "0"), f2.symbols))
    b = PeriodicOrbitMeasure(PeriodicPoint(("0", "1"), f2.symbols))
    assert a == b
    assert hash(a) == hash(b)
    c = PeriodicOrbitMeasure(PeriodicPoint(("0",), f2.symbols))
    assert a != c


def test_is_allowed_word():
    gm = golden_mean()
    assert is_allowed_word(gm, ("0", "1", "0", "0"))
    assert not is_allowed_word(gm, ("1", "1"))
    assert is_allowed_word(gm, ())
