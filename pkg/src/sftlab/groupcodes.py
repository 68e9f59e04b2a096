"""Closed forms for the modular difference and sum codes on full shifts.

Both codes read two consecutive symbols of the full shift on Z_N and emit
their difference (resp. sum) mod N.  As 1-block codes they live on the
2-block presentation of the full N-shift: symbols are the N^2 pairs
``(a, b)``, written ``"ab"`` for N <= 10, with every overlap transition
allowed, labeled ``b - a`` or ``a + b`` mod N.  Both have degree N.

For the difference code the fiber structure is a group translation: the
preimages of the image of ``x`` are exactly the N symbol-wise translates
of ``x``, so the ergodic lifts of the image of a Bernoulli measure are the
rotations of its probability vector and everything (lift count,
multiplicity, diagonal mass) is a closed form in the least cyclic period
of that vector.  All probability arithmetic in this module is exact
rational; no floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .codes import BlockCode
from .errors import TwoIsAFactor
from .shifts import PeriodicOrbitMeasure, Sft


@dataclass(frozen=True)
class BernoulliMeasure:
    """A Bernoulli measure on the full shift over ``Z_N``."""

    probs: tuple  # of Fraction, nonnegative, summing to 1

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.probs)
        if not probs:
            raise ValueError("probability vector is empty")
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be nonnegative")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "probs", probs)

    @property
    def size(self):
        return len(self.probs)

    def marginal(self, word):
        """Exact probability of seeing ``word`` (a tuple over ``Z_N``)."""
        out = Fraction(1)
        for v in word:
            out *= self.probs[v % self.size]
        return out


def pair_symbol(a, b, n):
    return f"{a}{b}" if n <= 10 else f"{a}:{b}"


def _pair_shift(n):
    pairs = [(a, b) for a in range(n) for b in range(n)]
    symbols = [pair_symbol(a, b, n) for a, b in pairs]
    edges = [
        (pair_symbol(a, b, n), pair_symbol(b, c, n))
        for a, b in pairs
        for c in range(n)
    ]
    return Sft(symbols, edges), pairs


def difference_code(n):
    """The mod-``n`` difference code, an ``n``-to-1 map; requires n >= 2."""
    if n < 2:
        raise ValueError("the difference code needs an alphabet of size >= 2")
    sft, pairs = _pair_shift(n)
    return BlockCode(
        sft, {pair_symbol(a, b, n): str((b - a) % n) for a, b in pairs}
    )


def sum_code(n):
    """The mod-``n`` sum code, an ``n``-to-1 map; requires n >= 2.

    The lift analysis in :func:`sum_code_lifts` covers n = 5; other odd n
    are exposed as an experimental generalization.
    """
    if n < 2:
        raise ValueError("the sum code needs an alphabet of size >= 2")
    sft, pairs = _pair_shift(n)
    return BlockCode(
        sft, {pair_symbol(a, b, n): str((a + b) % n) for a, b in pairs}
    )


def least_period(vector):
    """Least ``L`` dividing ``N`` with ``vector[(i + L) % N] == vector[i]``."""
    vector = tuple(vector)
    n = len(vector)
    for period in range(1, n + 1):
        if n % period:
            continue
        if all(vector[(i + period) % n] == vector[i] for i in range(n)):
            return period
    return n


def s_map(mu, k):
    """Pushforward of ``mu`` under adding ``k`` to every symbol mod N."""
    n = mu.size
    return BernoulliMeasure(tuple(mu.probs[(i - k) % n] for i in range(n)))


def multiplicity_closed_form(mu, n=None):
    """Multiplicity of ``mu`` under the difference code, with its lift list.

    The multiplicity is ``N / L`` where ``L`` is the least cyclic period
    of the probability vector; the ergodic lifts of the image are the
    ``L`` distinct rotations of ``mu``.
    """
    if n is None:
        n = mu.size
    if n != mu.size:
        raise ValueError(f"measure lives on Z_{mu.size}, not Z_{n}")
    period = least_period(mu.probs)
    lifts = [s_map(mu, k) for k in range(period)]
    return n // period, lifts


def has_two_point_factor(measure):
    """Whether the two-point rotation is a factor of the measure.

    A periodic orbit measure factors onto the two-point rotation exactly
    when its least period is even; a Bernoulli measure is mixing and never
    does.
    """
    if isinstance(measure, PeriodicOrbitMeasure):
        return measure.period % 2 == 0
    if isinstance(measure, BernoulliMeasure):
        return False
    raise TypeError(f"unsupported measure type {type(measure)!r}")


@dataclass(frozen=True)
class LiftDescriptor:
    """An ergodic lift of the image of a Bernoulli measure under the sum
    code, described by its exact finite marginals.

    ``offset == 0`` is the Bernoulli measure itself; ``offset == j > 0``
    is the two-phase average of the alternating translates by ``+-j``:
    on a window ``w``,

        mu_j(w) = (1/2) [ prod_i a_{w_i - j(-1)^i} + prod_i a_{w_i + j(-1)^i} ].
    """

    base: BernoulliMeasure
    offset: int

    def marginal(self, word):
        n = self.base.size
        word = tuple(word)
        if self.offset == 0:
            return self.base.marginal(word)
        j = self.offset
        one = Fraction(1)
        first, second = one, one
        for i, v in enumerate(word):
            sign = -1 if i % 2 else 1
            first *= self.base.probs[(v - sign * j) % n]
            second *= self.base.probs[(v + sign * j) % n]
        return (first + second) / 2


@dataclass(frozen=True)
class SumCodeLiftReport:
    """Distinct lift descriptors with merged multiplicities.

    ``multiplicities`` sums to N.  Distinctness was decided by comparing
    exact marginals on all windows up to ``window``; the report records
    the window so the (finite) scope of the decision is explicit.
    """

    lifts: tuple  # of (LiftDescriptor, multiplicity)
    window: int

    @property
    def multiplicities(self):
        return tuple(m for _, m in self.lifts)


def _descriptors_equal(d1, d2, n, window):
    for length in range(1, window + 1):
        for word in product(range(n), repeat=length):
            if d1.marginal(word) != d2.marginal(word):
                return False
    return True


def sum_code_lifts(mu, window=6):
    """Ergodic lifts of the image of ``mu`` under the sum code on Z_5.

    Requires that two is not a factor of ``mu`` (automatic for Bernoulli).
    The candidate lifts are ``mu`` itself and the alternating averages at
    offsets 1..(N-1)/2, each offset j > 0 contributing multiplicity 2 and
    the base contributing 1.  Candidates whose marginals agree on every
    window up to ``window`` are merged, adding their multiplicities; when
    all are distinct the multiplicities are (1, 2, 2).

    The construction is stated for N = 5; other odd sizes run as an
    experimental generalization.
    """
    n = mu.size
    if n % 2 == 0:
        raise ValueError("the sum code lift analysis needs an odd alphabet size")
    if has_two_point_factor(mu):
        raise TwoIsAFactor("the measure factors onto the two-point rotation")
    candidates = [LiftDescriptor(base=mu, offset=j) for j in range((n + 1) // 2)]
    groups = []  # list of [descriptor, multiplicity]
    for j, cand in enumerate(candidates):
        weight = 1 if j == 0 else 2
        for group in groups:
            if _descriptors_equal(group[0], cand, n, window):
                group[1] += weight
                break
        else:
            groups.append([cand, weight])
    return SumCodeLiftReport(
        lifts=tuple((d, m) for d, m in groups), window=window
    )
