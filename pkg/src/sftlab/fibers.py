"""Exact fiber analysis over a periodic image point.

Everything here is phrased over one periodic point ``y`` of the image
shift, where the measure-theoretic statements of degree theory become
finite combinatorics.  The central object is the phase graph ``G_y``:
nodes are pairs ``(phase, domain symbol)`` whose label matches ``y`` at
that phase, with edges advancing the phase.  Bi-infinite paths of ``G_y``
are exactly the preimages of ``y``.

The fiber is finite iff the essential phase graph is a disjoint union of
simple cycles; then every preimage is periodic, the fiber points are the
phase-0 crossings of the cycles, and orbit bookkeeping (multiplicities,
joinings, the canonical lift, diagonal masses) is exact rational
arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityMismatch, InfiniteFiber, NotALift, NotInImage
from .graphs import essential_nodes
from .shifts import PeriodicOrbitMeasure, PeriodicPoint, lcm


class FiberGraph:
    """Essential phase graph of the preimages of a periodic point."""

    __slots__ = ("code", "y", "nodes", "_succ", "_pred", "_node_set")

    def __init__(self, code, y):
        if tuple(y.alphabet) != tuple(code.image_alphabet):
            raise NotInImage("point is not over the code's image alphabet")
        p = y.period
        domain = code.domain
        raw_nodes = [
            (i, a)
            for i in range(p)
            for a in code.preimage_symbols(y.word[i])
        ]
        raw_set = set(raw_nodes)

        def succ(node):
            i, a = node
            j = (i + 1) % p
            return [
                (j, b)
                for b in domain.successors(a)
                if (j, b) in raw_set
            ]

        def pred(node):
            i, a = node
            j = (i - 1) % p
            return [
                (j, b)
                for b in domain.predecessors(a)
                if (j, b) in raw_set
            ]

        kept = essential_nodes(raw_nodes, succ, pred)
        if not kept:
            raise NotInImage(f"point {y!r} is not in the image shift")
        kept_set = set(kept)
        self.code = code
        self.y = y
        self.nodes = tuple(kept)
        self._node_set = kept_set
        self._succ = {
            node: tuple(t for t in succ(node) if t in kept_set) for node in kept
        }
        self._pred = {
            node: tuple(t for t in pred(node) if t in kept_set) for node in kept
        }

    @property
    def period(self):
        return self.y.period

    def successors(self, node):
        return self._succ[node]

    def predecessors(self, node):
        return self._pred[node]

    def has_node(self, node):
        return node in self._node_set

    def phase_nodes(self, phase):
        return [node for node in self.nodes if node[0] == phase]

    def branching_node(self):
        """A node with out-degree at least two, or None."""
        for node in self.nodes:
            if len(self._succ[node]) > 1:
                return node
        return None

    def is_union_of_cycles(self):
        return self.branching_node() is None

    def node_of_point(self, x, t=0):
        """The phase-graph node occupied by a preimage point at time ``t``."""
        return (t % self.period, x.symbol_at(t))

    def __repr__(self):
        return f"FiberGraph(y={'.'.join(map(str, self.y.word))}, {len(self.nodes)} nodes)"


def fiber_graph(code, y):
    """Essentialized phase graph; raises :class:`NotInImage` when empty."""
    return FiberGraph(code, y)


def point_in_image(code, y):
    try:
        FiberGraph(code, y)
        return True
    except NotInImage:
        return False


def is_preimage_point(code, x, y):
    """True iff the domain periodic point maps exactly to ``y`` (same phase)."""
    q = x.period
    span = lcm([q, y.period])
    return all(code(x.symbol_at(t)) == y.symbol_at(t) for t in range(span))


def _cycles_of_fiber(fg):
    """Cycle decomposition of a disjoint-union-of-cycles phase graph.

    Returns one domain word per cycle, read from that cycle's minimal
    phase-0 node; words have length (wrap count) * period.
    """
    witness = fg.branching_node()
    if witness is not None:
        raise InfiniteFiber(
            f"node {witness!r} branches; the fiber is uncountable", witness=witness
        )
    p = fg.period
    start_nodes = fg.phase_nodes(0)
    seen = set()
    words = []
    for start in start_nodes:
        if start in seen:
            continue
        node = start
        word = []
        while True:
            word.append(node[1])
            if node[0] == 0:
                seen.add(node)
            (node,) = fg.successors(node)
            if node == start:
                break
        words.append(tuple(word))
    return words


def fiber_points(code, y):
    """The finite fiber over ``y`` as a sorted list of periodic points.

    Raises :class:`InfiniteFiber` when the essential phase graph has a
    branching node, and :class:`NotInImage` when the fiber is empty.
    """
    fg = fiber_graph(code, y)
    points = []
    for word in _cycles_of_fiber(fg):
        base = PeriodicPoint.from_cycle(word, code.domain.symbols)
        if base.period != len(word) or base.period % fg.period:
            raise AssertionError("fiber cycle word is not primitive of full length")
        for j in range(base.period // fg.period):
            points.append(base.shift(j * fg.period))
    points.sort(key=PeriodicPoint.sort_key)
    return points


def degree_at(code, y):
    """Fiber cardinality over ``y``; the degree of the orbit measure of ``y``."""
    return len(fiber_points(code, y))


@dataclass(frozen=True)
class LiftEntry:
    """An ergodic lift of the orbit measure of ``y`` with its multiplicity.

    ``measure`` has least period ``period`` equal to ``multiplicity`` times
    the period of ``y``.
    """

    measure: PeriodicOrbitMeasure
    multiplicity: int

    @property
    def period(self):
        return self.measure.period

    def sort_key(self):
        return self.measure.sort_key()


def ergodic_lifts(code, y):
    """The ergodic preimage measures of the orbit measure of ``y``.

    Fiber points are grouped into shift orbits; each orbit of least period
    ``q`` contributes one entry of multiplicity ``q / p``.  The sum of the
    multiplicities is the fiber cardinality.
    """
    fg = fiber_graph(code, y)
    entries = []
    for word in _cycles_of_fiber(fg):
        point = PeriodicPoint.from_cycle(word, code.domain.symbols)
        q = point.period
        if q % fg.period:
            raise AssertionError("fiber point period is not a multiple of the base period")
        entries.append(LiftEntry(PeriodicOrbitMeasure(point), q // fg.period))
    entries.sort(key=LiftEntry.sort_key)
    return entries


class TupleOrbitJoining:
    """The orbit measure of a periodic point in a finite product shift.

    The point is stored as one fundamental tuple cycle: ``cycle[t][i]`` is
    the symbol of coordinate ``i`` at time ``t``.  All coordinates share
    the same image point at every time; margins are the orbit measures of
    the coordinates.
    """

    __slots__ = ("code", "y", "cycle", "coordinate_points")

    def __init__(self, code, y, coordinate_points):
        points = tuple(coordinate_points)
        if not points:
            raise ValueError("a joining needs at least one coordinate")
        for x in points:
            if not is_preimage_point(code, x, y):
                raise NotALift(f"coordinate {x!r} does not map to {y!r}")
        period = lcm([x.period for x in points] + [y.period])
        cycle = tuple(
            tuple(x.symbol_at(t) for x in points) for t in range(period)
        )
        self.code = code
        self.y = y
        self.cycle = cycle
        self.coordinate_points = points

    @property
    def arity(self):
        return len(self.coordinate_points)

    @property
    def period(self):
        return len(self.cycle)

    def margin(self, i):
        return PeriodicOrbitMeasure(self.coordinate_points[i])

    def margins(self):
        return [self.margin(i) for i in range(self.arity)]

    def margin_entries(self):
        p = self.y.period
        return [
            LiftEntry(PeriodicOrbitMeasure(x), x.period // p)
            for x in self.coordinate_points
        ]

    def is_separating(self):
        """True iff the coordinates are pairwise distinct at every time."""
        return all(len(set(row)) == len(row) for row in self.cycle)

    def canonical_cycle(self):
        """Lexicographically minimal rotation of the tuple cycle word."""
        index = {a: i for i, a in enumerate(self.code.domain.symbols)}

        def key(cyc):
            return tuple(tuple(index[a] for a in row) for row in cyc)

        rotations = [
            self.cycle[k:] + self.cycle[:k] for k in range(len(self.cycle))
        ]
        return min(rotations, key=key)

    def permute(self, perm):
        """The image joining under the coordinate map ``i -> perm[i]``."""
        points = tuple(self.coordinate_points[j] for j in perm)
        return TupleOrbitJoining(self.code, self.y, points)

    def __eq__(self, other):
        if not isinstance(other, TupleOrbitJoining):
            return NotImplemented
        return (
            self.y == other.y
            and self.arity == other.arity
            and self.canonical_cycle() == other.canonical_cycle()
        )

    def __hash__(self):
        return hash((self.y, self.arity, self.canonical_cycle()))

    def __repr__(self):
        return f"TupleOrbitJoining(arity={self.arity}, period={self.period})"


def degree_joining(code, y, ordering=None):
    """The degree joining over ``y``: the orbit of the full fiber tuple.

    Lists the fiber in the given ordering (a permutation of indices into
    the sorted fiber list; identity by default).  The result is ergodic
    (a single orbit), separating, and a relative joining over the orbit
    measure of ``y`` whose margins are the ergodic lifts, each appearing
    as many times as its multiplicity.
    """
    points = fiber_points(code, y)
    d = len(points)
    if ordering is None:
        ordering = tuple(range(d))
    ordering = tuple(ordering)
    if sorted(ordering) != list(range(d)):
        raise ValueError(f"ordering must be a permutation of 0..{d - 1}")
    joining = TupleOrbitJoining(code, y, [points[i] for i in ordering])
    if not joining.is_separating():
        raise AssertionError("fiber tuple is not separating; fiber computation is wrong")
    return joining


def joining_permutation_equivalence(j1, j2):
    """A coordinate permutation carrying one joining to the other.

    Returns a tuple ``perm`` with ``j1.permute(perm) == j2`` as orbit
    measures, or ``None`` when the joinings are not permutation
    equivalent.  Margins are matched first to prune the search; ties are
    resolved by lexicographic order of the permutation.
    """
    from itertools import permutations

    if j1.arity != j2.arity:
        raise ArityMismatch(f"arity {j1.arity} vs {j2.arity}")
    n = j1.arity
    m1 = j1.margins()
    m2 = j2.margins()
    target = j2.canonical_cycle()
    for perm in permutations(range(n)):
        if any(m1[perm[i]] != m2[i] for i in range(n)):
            continue
        if j1.permute(perm).canonical_cycle() == target:
            return perm
    return None


@dataclass(frozen=True)
class RationalMixture:
    """A finite convex combination of periodic orbit measures.

    Components are pairwise distinct, sorted by canonical cycle word, and
    the exact rational weights sum to one.
    """

    components: tuple  # of (Fraction, PeriodicOrbitMeasure)

    def __post_init__(self):
        total = sum((w for w, _ in self.components), Fraction(0))
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        measures = [m for _, m in self.components]
        if len(set(measures)) != len(measures):
            raise ValueError("mixture components must be pairwise distinct")

    def weights(self):
        return [w for w, _ in self.components]


def canonical_lift(code, y):
    """The unique lift whose fiber disintegration is uniform on the fiber.

    Its ergodic decomposition weights each lift by multiplicity over
    degree, as exact rationals.
    """
    entries = ergodic_lifts(code, y)
    d = sum(e.multiplicity for e in entries)
    components = tuple(
        (Fraction(e.multiplicity, d), e.measure) for e in entries
    )
    return RationalMixture(components)


def _orbit_points_over(code, measure, y_point):
    """Points of the orbit of ``measure`` that map exactly onto ``y_point``."""
    hits = []
    for x in measure.support_points():
        if is_preimage_point(code, x, y_point):
            hits.append(x)
    return hits


def diagonal_mass(code, y, lift):
    """Diagonal mass of the relatively independent self-joining, exact.

    For each point in the orbit of ``y`` the conditional measure of the
    lift is uniform on the orbit points sitting over it; the mass of the
    diagonal is the average over the orbit of ``y`` of the sum of squared
    conditional weights.  Equals ``1/multiplicity`` exactly.
    """
    measure = lift.measure if isinstance(lift, LiftEntry) else lift
    p = y.period
    total = Fraction(0)
    for j in range(p):
        yj = y.shift(j)
        count = len(_orbit_points_over(code, measure, yj))
        if count == 0:
            raise NotALift(f"{measure!r} has no orbit point over phase {j} of {y!r}")
        total += Fraction(1, count)
    return total / p
