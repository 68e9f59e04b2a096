"""Seeded Monte Carlo estimates for Bernoulli images of the difference code.

For a Bernoulli measure the diagonal mass of the relatively independent
self-joining over the image equals one over the multiplicity, but the
disintegration is not directly samplable.  The surrogate used here samples
a window of the measure and weighs the N fiber candidates (the symbol-wise
translates) by their conditional likelihood on the window; the sum of
squared normalized weights converges to 1/m as the window grows, because
the weights concentrate uniformly on the m translates distributed like the
sampled measure.  This is an approximation with a finite-window bias that
vanishes as the window grows; reports carry a batch-means standard error.

Determinism contract: a report is a pure function of the configuration.
Each of the 100 batches draws from its own child stream of the seed, so
results do not depend on execution order or degree of parallelism.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groupcodes import s_map

_BATCHES = 100


@dataclass(frozen=True)
class EstimatorConfig:
    """Window length, sample count, seed, and code family."""

    window: int
    samples: int
    seed: int
    family: str = "difference"

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be positive")
        if self.samples < _BATCHES:
            raise ValueError(f"need at least {_BATCHES} samples for batch means")
        if self.family != "difference":
            raise ValueError("only the difference family is supported")


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    std_error: float
    samples: int
    window: int
    seed: int
    implied_multiplicity: int


@dataclass(frozen=True)
class GenericityRow:
    shift: int
    word: tuple
    empirical: float
    exact: float

    @property
    def deviation(self):
        return abs(self.empirical - self.exact)


@dataclass(frozen=True)
class GenericityReport:
    rows: tuple
    samples: int
    window: int
    seed: int

    @property
    def max_deviation(self):
        return max(row.deviation for row in self.rows)


def _batch_sizes(samples):
    base, extra = divmod(samples, _BATCHES)
    return [base + (1 if b < extra else 0) for b in range(_BATCHES)]


def _batch_rng(seed, batch):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(batch,))
    return np.random.Generator(np.random.PCG64(ss))


def _sample_windows(rng, probs, size, window):
    return rng.choice(len(probs), size=(size, window), p=probs)


def _float_probs(mu):
    probs = np.array([float(p) for p in mu.probs])
    return probs / probs.sum()


def implied_multiplicity(estimate, n):
    """The ``k`` in 1..N whose 1/k is nearest the estimate (ties to small k)."""
    return min(range(1, n + 1), key=lambda k: (abs(estimate - 1.0 / k), k))


def estimate_diagonal_mass(mu, cfg):
    """Finite-window estimate of the self-joining diagonal mass.

    Per sample: draw a window from ``mu``, weigh each of the N translate
    candidates by its likelihood of the window, and accumulate the sum of
    squared normalized weights.  Expectation tends to 1/m with the window.
    """
    n = mu.size
    probs = _float_probs(mu)
    with np.errstate(divide="ignore"):
        log_probs = np.log(probs)
    batch_means = np.empty(_BATCHES)
    total = 0.0
    for batch, size in enumerate(_batch_sizes(cfg.samples)):
        rng = _batch_rng(cfg.seed, batch)
        x = _sample_windows(rng, probs, size, cfg.window)
        # log likelihood of the window under each shifted candidate
        logs = np.stack(
            [log_probs[(x + k) % n].sum(axis=1) for k in range(n)], axis=0
        )
        logs -= logs.max(axis=0, keepdims=True)
        weights = np.exp(logs)
        weights /= weights.sum(axis=0, keepdims=True)
        values = (weights**2).sum(axis=0)
        batch_means[batch] = values.mean()
        total += values.sum()
    estimate = total / cfg.samples
    std_error = float(batch_means.std(ddof=1) / np.sqrt(_BATCHES))
    return EstimateReport(
        estimate=float(estimate),
        std_error=std_error,
        samples=cfg.samples,
        window=cfg.window,
        seed=cfg.seed,
        implied_multiplicity=implied_multiplicity(float(estimate), n),
    )


def empirical_genericity(mu, cfg, words):
    """Birkhoff frequencies along fiber companions versus exact marginals.

    Samples windows of ``mu``; for each translate ``k`` forms the
    companion window and averages the empirical frequency of each word,
    which is compared against the exact marginal of the rotated measure.
    Deviations shrink like the inverse square root of the window.
    """
    n = mu.size
    probs = _float_probs(mu)
    words = [tuple(int(v) for v in w) for w in words]
    for w in words:
        if not w:
            raise ValueError("words must be nonempty")
        if any(v < 0 or v >= n for v in w):
            raise ValueError(f"word {w!r} has symbols outside Z_{n}")
        if len(w) > cfg.window:
            raise ValueError(f"word {w!r} is longer than the window")
    sums = np.zeros((n, len(words)))
    for batch, size in enumerate(_batch_sizes(cfg.samples)):
        rng = _batch_rng(cfg.seed, batch)
        x = _sample_windows(rng, probs, size, cfg.window)
        for k in range(n):
            companion = (x + k) % n
            for wi, w in enumerate(words):
                span = cfg.window - len(w) + 1
                match = np.ones((size, span), dtype=bool)
                for t, v in enumerate(w):
                    match &= companion[:, t : t + span] == v
                sums[k, wi] += match.mean(axis=1).sum()
    rows = []
    for k in range(n):
        shifted = s_map(mu, k)
        for wi, w in enumerate(words):
            exact = float(Fraction(shifted.marginal(w)))
            rows.append(
                GenericityRow(
                    shift=k,
                    word=w,
                    empirical=float(sums[k, wi] / cfg.samples),
                    exact=exact,
                )
            )
    return GenericityReport(
        rows=tuple(rows), samples=cfg.samples, window=cfg.window, seed=cfg.seed
    )
