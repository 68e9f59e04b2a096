"""Transition classes, class degree, and class-maximal measures.

Over a periodic image point ``y`` the transition relation ("routing from
one preimage to another with the same image, infinitely often to the
right") reduces by pumping to reachability in the phase graph, and the
equivalence classes of periodic preimages correspond to the cycle-bearing
strongly connected components of that graph.  This reduction is a derived
characterization, validated in the test suite against a brute-force
bi-transition search on the domain graph; the class of a non-periodic
preimage is that of its right-tail component, and the component count is
certified here only for the periodic part of the fiber.

Phase convention: preimages are identified up to shifts by the period of
``y`` (such a shift of a preimage is again a preimage), so a class is a
property of the orbit of a preimage and routing is allowed to land on any
such shift of the target trajectory.  Equivalently, the bi-transition
windows compared are those carrying the same image word.  On a branchless
cycle the pointwise relation anchored at absolute coordinates would split
the cycle's phases into separate classes; the orbit-level convention used
throughout this module counts that cycle once, which is what makes the
class of an ergodic lift (an orbit measure) well defined.

Per-class entropy and pressure maximization is exact matrix work: each
class is an irreducible subgraph of the phase graph, and for a locally
constant potential the equilibrium measure on it is the Markov chain built
from the Perron data of the exponentiated weight matrix (the Parry measure
when the potential vanishes).  Since the orbit measure of ``y`` has zero
entropy, relative maximization over a class equals plain maximization on
the class subgraph.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ImageMismatch,
    LengthMismatch,
    NotALift,
    RepresentativeClassCollision,
)
from .fibers import LiftEntry, TupleOrbitJoining, fiber_graph, is_preimage_point
from .graphs import strongly_connected_components
from .shifts import PeriodicPoint, check_word, lcm
from .spectral import perron_root_bounds


def bi_transition_exists(code, u, u_prime):
    """Whether the two equal-image words admit a bi-transition.

    A bi-transition between ``u`` and ``u'`` (length ``L``, common image
    ``V``) is a pair of allowed domain words ``w, w'`` with image ``V``
    such that ``w`` starts like ``u`` and ends like ``u'`` while ``w'``
    starts like ``u'`` and ends like ``u``.  Decided by two
    label-constrained path searches in the domain graph.
    """
    u = check_word(code.domain, u)
    u_prime = check_word(code.domain, u_prime)
    if len(u) != len(u_prime):
        raise LengthMismatch(f"|u| = {len(u)} but |u'| = {len(u_prime)}")
    labels = code.label_word(u)
    if labels != code.label_word(u_prime):
        raise ImageMismatch("the two words have different images")
    return _crossing_path_exists(code, u, u_prime, labels) and _crossing_path_exists(
        code, u_prime, u, labels
    )


def _crossing_path_exists(code, u, u_prime, labels):
    """A domain word with image ``labels`` from ``u[0]`` to ``u_prime[-1]``."""
    current = {u[0]}
    for v in labels[1:]:
        current = {
            b
            for a in current
            for b in code.domain.successors(a)
            if code(b) == v
        }
        if not current:
            return False
    return u_prime[-1] in current


@dataclass(frozen=True)
class ClassPartition:
    """Transition classes over a periodic point.

    ``classes`` are the cycle-bearing strongly connected components of the
    essential phase graph, each a sorted tuple of nodes; ``class_of`` maps
    every node lying in some class to its class index.
    """

    fiber: object  # FiberGraph
    classes: tuple
    class_of: dict

    @property
    def count(self):
        return len(self.classes)

    def class_of_point(self, x):
        """Class index of a periodic preimage (all its nodes share one class)."""
        if not is_preimage_point(self.fiber.code, x, self.fiber.y):
            raise NotALift(f"{x!r} is not a preimage of {self.fiber.y!r}")
        node = self.fiber.node_of_point(x, 0)
        try:
            return self.class_of[node]
        except KeyError:
            raise NotALift(f"{x!r} does not lie on a cycle of the phase graph")

    def class_of_measure(self, measure):
        """Class index of an ergodic lift given as an orbit measure."""
        measure = measure.measure if isinstance(measure, LiftEntry) else measure
        for x in measure.support_points():
            if is_preimage_point(self.fiber.code, x, self.fiber.y):
                return self.class_of_point(x)
        raise NotALift(f"{measure!r} has no orbit point over {self.fiber.y!r}")


def class_partition(code, y):
    """Partition of the fiber over ``y`` into transition classes."""
    fg = fiber_graph(code, y)
    position = {node: i for i, node in enumerate(fg.nodes)}
    comps = strongly_connected_components(fg.nodes, fg.successors)
    classes = []
    for comp in comps:
        has_cycle = len(comp) > 1 or comp[0] in fg.successors(comp[0])
        if has_cycle:
            classes.append(tuple(sorted(comp, key=position.__getitem__)))
    classes.sort(key=lambda comp: position[comp[0]])
    class_of = {}
    for i, comp in enumerate(classes):
        for node in comp:
            class_of[node] = i
    return ClassPartition(fiber=fg, classes=tuple(classes), class_of=class_of)


def class_degree_at(code, y):
    """Number of transition classes over ``y``."""
    return class_partition(code, y).count


def class_representatives(code, y, partition=None):
    """One periodic preimage per class: the shortest cycle through the
    minimal phase-0 node of the class, ties broken lexicographically."""
    part = partition or class_partition(code, y)
    fg = part.fiber
    reps = []
    for comp in part.classes:
        comp_set = set(comp)
        start = next(node for node in comp if node[0] == 0)
        word = _lex_min_cycle(fg, start, comp_set)
        reps.append(PeriodicPoint.from_cycle(word, code.domain.symbols))
    return reps


def _lex_min_cycle(fg, start, allowed):
    """Shortest cycle word through ``start`` inside ``allowed`` nodes,
    lexicographically minimal among shortest (BFS with sorted neighbors)."""
    best_path = {}  # node -> path of symbols from start (excluding start symbol)
    frontier = [(start, (start[1],))]
    while frontier:
        nxt = []
        for node, path in frontier:
            for succ in fg.successors(node):
                if succ not in allowed:
                    continue
                if succ == start:
                    return path
                if succ not in best_path:
                    best_path[succ] = path + (succ[1],)
                    nxt.append((succ, best_path[succ]))
        frontier = nxt
    raise AssertionError("class contains no cycle through its phase-0 node")


def class_degree_joining(code, y, representatives=None):
    """Class degree joining over ``y``: the orbit of one representative per
    class, which is ergodic, class separating, and a relative joining over
    the orbit measure of ``y``."""
    part = class_partition(code, y)
    if representatives is None:
        representatives = class_representatives(code, y, part)
    reps = list(representatives)
    seen = {}
    for x in reps:
        c = part.class_of_point(x)
        if c in seen:
            raise RepresentativeClassCollision(
                f"{x!r} and {seen[c]!r} lie in the same transition class"
            )
        seen[c] = x
    return TupleOrbitJoining(code, y, reps)


def class_parallel(code, y, lift_a, lift_b):
    """Whether two ergodic lifts of the orbit measure of ``y`` are class
    parallel: their supports' cycles lie in the same transition class."""
    part = class_partition(code, y)
    return part.class_of_measure(lift_a) == part.class_of_measure(lift_b)


def class_multiplicities(code, y):
    """Class multiplicities computed from a class degree joining.

    For each class-parallel equivalence class of margins, counts the
    coordinates of the joining whose margin is parallel to it.  Returns a
    sorted list of ``(class index, multiplicity)``; the multiplicities sum
    to the class degree.
    """
    part = class_partition(code, y)
    joining = class_degree_joining(code, y)
    margin_classes = [
        part.class_of_measure(joining.margin(i)) for i in range(joining.arity)
    ]
    # Group coordinates by the class-parallel relation among their margins.
    groups = []
    for i in range(joining.arity):
        for group in groups:
            j = group[0]
            if margin_classes[i] == margin_classes[j]:
                group.append(i)
                break
        else:
            groups.append([i])
    result = [
        (min(margin_classes[i] for i in group), len(group)) for group in groups
    ]
    result.sort()
    return result


@dataclass(frozen=True)
class LocallyConstantPotential:
    """A potential depending on the symbol at the current coordinate."""

    weights: dict

    def __call__(self, symbol):
        return float(self.weights.get(symbol, 0.0))

    @classmethod
    def zero(cls):
        return cls(weights={})


@dataclass(frozen=True)
class ClassEquilibrium:
    """Equilibrium data of one class for a locally constant potential.

    ``value`` encloses ``h + integral of f`` (the log Perron root of the
    weighted matrix, certified bounds); ``entropy`` and ``potential_mean``
    split it using floating point eigenvectors.  ``transitions`` is the
    stochastic matrix of the equilibrium Markov chain on the class nodes
    and ``stationary`` its stationary vector.
    """

    class_index: int
    nodes: tuple
    value: tuple  # certified (lo, hi) of h + int f
    entropy: float
    potential_mean: float
    transitions: dict
    stationary: dict


@dataclass(frozen=True)
class ClassMaximalReport:
    per_class: tuple
    maximizers: tuple  # class indices attaining the global maximum

    @property
    def count(self):
        return len(self.per_class)


def class_maximal(code, y, potential=None):
    """Per-class equilibrium measures and the global maximizer set.

    For each transition class (an irreducible subgraph of the phase graph)
    the equilibrium measure of the potential restricted to the class is
    the Markov chain built from left/right Perron eigenvectors of the
    matrix with entries ``exp(f)`` on allowed edges; the zero potential
    yields the Parry measure, whose value is the class entropy.  Ties in
    the maximal value are reported as a maximizer set, decided on the
    certified enclosures, never broken arbitrarily.
    """
    if potential is None:
        potential = LocallyConstantPotential.zero()
    part = class_partition(code, y)
    per_class = []
    for ci, comp in enumerate(part.classes):
        per_class.append(_class_equilibrium(part.fiber, ci, comp, potential))
    max_lo = max(eq.value[0] for eq in per_class)
    maximizers = tuple(
        eq.class_index for eq in per_class if eq.value[1] >= max_lo
    )
    return ClassMaximalReport(per_class=tuple(per_class), maximizers=maximizers)


def _class_equilibrium(fg, class_index, comp, potential):
    nodes = tuple(comp)
    pos = {node: i for i, node in enumerate(nodes)}
    n = len(nodes)
    weights = np.array([potential(node[1]) for node in nodes])
    b = np.zeros((n, n))
    for node in nodes:
        for succ in fg.successors(node):
            if succ in pos:
                b[pos[node], pos[succ]] = math.exp(potential(node[1]))
    lo, hi = perron_root_bounds(b)
    beta = 0.5 * (lo + hi)

    right = _perron_vector(b)
    left = _perron_vector(b.T)
    stationary = left * right
    stationary = stationary / stationary.sum()
    transitions = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if b[i, j] > 0:
                transitions[i, j] = b[i, j] * right[j] / (beta * right[i])
    potential_mean = float(stationary @ weights)
    value = (math.log(lo), math.log(hi))
    entropy = 0.5 * (value[0] + value[1]) - potential_mean
    return ClassEquilibrium(
        class_index=class_index,
        nodes=nodes,
        value=value,
        entropy=entropy,
        potential_mean=potential_mean,
        transitions={
            (nodes[i], nodes[j]): float(transitions[i, j])
            for i in range(n)
            for j in range(n)
            if transitions[i, j] > 0
        },
        stationary={nodes[i]: float(stationary[i]) for i in range(n)},
    )


def _perron_vector(matrix):
    n = matrix.shape[0]
    if n == 1:
        return np.ones(1)
    eigvals, eigvecs = np.linalg.eig(matrix + np.eye(n))
    k = int(np.argmax(eigvals.real))
    v = np.abs(eigvecs[:, k].real)
    if not np.all(v > 0):
        # Fall back to power iteration; the matrix is primitive.
        v = np.ones(n)
        m = matrix + np.eye(n)
        for _ in range(10_000):
            w = m @ v
            w = w / w.sum()
            if np.max(np.abs(w - v)) < 1e-15:
                v = w
                break
            v = w
    return v / v.sum()


def verify_no_bitransition_tuple(code, points, window_bound=None):
    """Membership check for the bi-transition forbidding product.

    True iff no window of length at most ``window_bound`` admits a
    bi-transition between any two coordinates of the periodic tuple.  For
    a common period ``P`` the default bound ``P * (|symbols|^2 + 1)``
    suffices by pumping: longer windows revisit pair-graph states.  The
    search also stops early as soon as the propagated state repeats.
    """
    points = list(points)
    if not points:
        return True
    period = lcm([x.period for x in points])
    first = points[0]
    for x in points[1:]:
        for t in range(period):
            if code(x.symbol_at(t)) != code(first.symbol_at(t)):
                raise ImageMismatch("tuple coordinates do not share an image point")
    if window_bound is None:
        window_bound = period * (len(code.domain.symbols) ** 2 + 1)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if _windowed_bitransition(code, points[i], points[j], period, window_bound):
                return False
    return True


def _windowed_bitransition(code, x, x_prime, period, window_bound):
    """Some aligned window of length <= window_bound has a bi-transition."""
    for s in range(period):
        fwd = {x.symbol_at(s)}
        bwd = {x_prime.symbol_at(s)}
        hit_fwd = x_prime.symbol_at(s) in fwd
        hit_bwd = x.symbol_at(s) in bwd
        if hit_fwd and hit_bwd:
            return True
        seen = set()
        for t in range(1, window_bound):
            v = code(x.symbol_at(s + t))
            fwd = {
                b for a in fwd for b in code.domain.successors(a) if code(b) == v
            }
            bwd = {
                b for a in bwd for b in code.domain.successors(a) if code(b) == v
            }
            if not fwd or not bwd:
                break
            if x_prime.symbol_at(s + t) in fwd and x.symbol_at(s + t) in bwd:
                return True
            state = (t % period, frozenset(fwd), frozenset(bwd))
            if state in seen:
                break
            seen.add(state)
    return False
