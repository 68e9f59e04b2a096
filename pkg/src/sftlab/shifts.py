"""Shifts of finite type as directed graphs on symbols.

A 1-step SFT is stored as a vertex shift: a finite ordered symbol set
together with an allowed-transition relation, where an edge ``a -> b``
means the two-symbol word ``ab`` is allowed.  All values are immutable
after construction and all operations are pure functions, so everything
here is safe for concurrent use.

Symbol identifiers can be any hashable objects; every ordering used for
canonical forms is the position in ``Sft.symbols``, never the natural
ordering of the identifiers themselves.
"""

import math
from fractions import Fraction

import numpy as np

from .errors import EmptyShift, NotEssential
from .graphs import essential_nodes, is_strongly_connected
from .spectral import spectral_log_bounds

ENTROPY_TOL = 1e-9


class Sft:
    """A 1-step shift of finite type presented by its transition graph.

    Parameters
    ----------
    symbols : iterable of hashable
        Symbol identifiers; the iteration order fixes the canonical
        symbol ordering used everywhere else.
    edges : iterable of pairs ``(a, b)``
        Allowed transitions.
    """

    __slots__ = ("symbols", "edges", "_index", "_succ", "_pred")

    def __init__(self, symbols, edges):
        symbols = tuple(symbols)
        if not symbols:
            raise EmptyShift("symbol set is empty")
        if len(set(symbols)) != len(symbols):
            raise ValueError("symbol identifiers must be unique")
        index = {a: i for i, a in enumerate(symbols)}
        edge_set = set()
        for a, b in edges:
            if a not in index or b not in index:
                raise ValueError(f"edge ({a!r}, {b!r}) references unknown symbol")
            edge_set.add((a, b))
        succ = {a: [] for a in symbols}
        pred = {a: [] for a in symbols}
        for a in symbols:
            for b in symbols:
                if (a, b) in edge_set:
                    succ[a].append(b)
                    pred[b].append(a)
        self.symbols = symbols
        self.edges = frozenset(edge_set)
        self._index = index
        self._succ = {a: tuple(bs) for a, bs in succ.items()}
        self._pred = {a: tuple(bs) for a, bs in pred.items()}

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        if not isinstance(other, Sft):
            return NotImplemented
        return self.symbols == other.symbols and self.edges == other.edges

    def __hash__(self):
        return hash((self.symbols, self.edges))

    def __repr__(self):
        return f"Sft({len(self.symbols)} symbols, {len(self.edges)} edges)"

    def index(self, a):
        return self._index[a]

    def has_symbol(self, a):
        return a in self._index

    def has_edge(self, a, b):
        return (a, b) in self.edges

    def successors(self, a):
        return self._succ[a]

    def predecessors(self, a):
        return self._pred[a]

    @property
    def is_essential(self):
        return all(self._succ[a] and self._pred[a] for a in self.symbols)

    def subshift(self, keep):
        """Restriction to the symbols in ``keep``, preserving order."""
        keep = set(keep)
        symbols = [a for a in self.symbols if a in keep]
        edges = [(a, b) for (a, b) in self.edges if a in keep and b in keep]
        if not symbols:
            raise EmptyShift("no symbols remain")
        return Sft(symbols, edges)

    def adjacency_matrix(self):
        """Adjacency matrix over Python ints, rows/columns in symbol order."""
        n = len(self.symbols)
        mat = [[0] * n for _ in range(n)]
        for a, b in self.edges:
            mat[self._index[a]][self._index[b]] = 1
        return mat


def is_allowed_word(sft, word):
    """True iff every symbol is known and every adjacent pair is an edge."""
    word = tuple(word)
    if not word:
        return True
    if not all(sft.has_symbol(a) for a in word):
        return False
    return all(sft.has_edge(a, b) for a, b in zip(word, word[1:]))


def check_word(sft, word):
    word = tuple(word)
    if not is_allowed_word(sft, word):
        raise ValueError(f"word {word!r} is not allowed in the shift")
    return word


def essentialize(sft):
    """Maximal essential subgraph.

    Fixed point of repeatedly removing symbols with no outgoing or no
    incoming allowed edge.  Raises :class:`EmptyShift` if nothing remains.
    """
    kept = essential_nodes(sft.symbols, sft.successors, sft.predecessors)
    if not kept:
        raise EmptyShift("no essential part remains")
    if len(kept) == len(sft.symbols):
        return sft
    return sft.subshift(kept)


def _require_essential(sft):
    if not sft.is_essential:
        raise NotEssential("operation requires an essential graph")


def is_irreducible(sft):
    """True iff the transition graph is strongly connected."""
    _require_essential(sft)
    return is_strongly_connected(sft.symbols, sft.successors)


def entropy_bounds(sft, tol=ENTROPY_TOL):
    """Certified enclosure ``(lo, hi)`` of the topological entropy in nats.

    The entropy is the natural log of the spectral radius of the adjacency
    matrix; the enclosure width is at most ``tol``.
    """
    _require_essential(sft)
    lo, hi = spectral_log_bounds(np.array(sft.adjacency_matrix(), dtype=float), tol=tol * 1e-2)
    if hi - lo > tol:
        raise ArithmeticError("entropy enclosure did not reach requested accuracy")
    return (lo, hi)


def entropy(sft, tol=ENTROPY_TOL):
    """Topological entropy in nats, accurate to at least ``tol``."""
    lo, hi = entropy_bounds(sft, tol)
    return 0.5 * (lo + hi)


def entropy_enclosures_overlap(bounds_a, bounds_b, slack=ENTROPY_TOL):
    """Decide ``h(A) == h(B)`` robustly from two certified enclosures."""
    lo_a, hi_a = bounds_a
    lo_b, hi_b = bounds_b
    return lo_a <= hi_b + slack and lo_b <= hi_a + slack


def _primitive_root(word):
    """Shortest prefix whose cyclic repetition gives ``word``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d:
            continue
        if all(word[i] == word[i % d] for i in range(n)):
            return word[:d]
    return word


def _min_rotation(word, key):
    rotations = [word[i:] + word[:i] for i in range(len(word))]
    return min(rotations, key=lambda w: tuple(key(a) for a in w))


class PeriodicPoint:
    """A periodic point ``w^inf`` given by a primitive cycle word.

    The word is phase-significant: ``word[i]`` is the symbol at coordinate
    ``i``, so two rotations of the same cycle are different points of the
    same orbit.  ``alphabet`` fixes the ordering used for the canonical
    (lexicographically minimal) rotation.
    """

    __slots__ = ("word", "alphabet", "_key")

    def __init__(self, word, alphabet):
        word = tuple(word)
        alphabet = tuple(alphabet)
        if not word:
            raise ValueError("cycle word is empty")
        index = {a: i for i, a in enumerate(alphabet)}
        for a in word:
            if a not in index:
                raise ValueError(f"symbol {a!r} not in the alphabet")
        if len(_primitive_root(word)) != len(word):
            raise ValueError("cycle word is a proper power; not primitive")
        self.word = word
        self.alphabet = alphabet
        self._key = tuple(index[a] for a in word)

    @classmethod
    def from_cycle(cls, word, alphabet):
        """Build a point from any cycle word, reducing to the primitive root.

        The reduction keeps the prefix, so the phase of the point is
        unchanged.
        """
        return cls(_primitive_root(tuple(word)), alphabet)

    @classmethod
    def in_sft(cls, sft, word, reduce=True):
        """A validated periodic point of the given shift."""
        word = tuple(word)
        if not word:
            raise ValueError("cycle word is empty")
        for a, b in zip(word, word[1:] + word[:1]):
            if not (sft.has_symbol(a) and sft.has_symbol(b) and sft.has_edge(a, b)):
                raise ValueError(f"cyclic word {word!r} is not allowed")
        if reduce:
            return cls.from_cycle(word, sft.symbols)
        return cls(word, sft.symbols)

    @property
    def period(self):
        return len(self.word)

    def symbol_at(self, t):
        return self.word[t % len(self.word)]

    def shift(self, k=1):
        """The point moved ``k`` steps: coordinate ``i`` reads ``word[i+k]``."""
        k %= len(self.word)
        return PeriodicPoint(self.word[k:] + self.word[:k], self.alphabet)

    @property
    def index_word(self):
        return self._key

    @property
    def canonical_word(self):
        idx = {a: i for i, a in enumerate(self.alphabet)}
        return _min_rotation(self.word, idx.__getitem__)

    def canonical(self):
        return PeriodicPoint(self.canonical_word, self.alphabet)

    def sort_key(self):
        return (len(self.word), self._key)

    def __eq__(self, other):
        if not isinstance(other, PeriodicPoint):
            return NotImplemented
        return self.word == other.word and self.alphabet == other.alphabet

    def __hash__(self):
        return hash((self.word, self.alphabet))

    def __repr__(self):
        return f"PeriodicPoint({'.'.join(map(str, self.word))})"


class PeriodicOrbitMeasure:
    """Uniform probability measure on the shift orbit of a periodic point.

    Two orbit measures are equal iff the canonical rotations of their cycle
    words coincide, which makes measure equality decidable.
    """

    __slots__ = ("point",)

    def __init__(self, point):
        self.point = point.canonical()

    @property
    def period(self):
        return self.point.period

    @property
    def cycle_word(self):
        return self.point.word

    def support_points(self):
        """The ``period`` distinct points of the orbit."""
        return [self.point.shift(k) for k in range(self.point.period)]

    def sort_key(self):
        return self.point.sort_key()

    def __eq__(self, other):
        if not isinstance(other, PeriodicOrbitMeasure):
            return NotImplemented
        return self.point == other.point

    def __hash__(self):
        return hash(self.point)

    def __repr__(self):
        return f"PeriodicOrbitMeasure({'.'.join(map(str, self.point.word))})"


def periodic_points(sft, p):
    """All periodic points of least period exactly ``p``, one per orbit.

    Each orbit is represented by the lexicographically minimal rotation of
    its cycle word (under the symbol ordering of ``sft``).  Obtained by
    depth-first cycle enumeration anchored at the minimal symbol of the
    cycle.
    """
    _require_essential(sft)
    if p < 1:
        raise ValueError("period must be positive")
    found = set()
    symbols = sft.symbols
    index = sft.index
    for start_pos, start in enumerate(symbols):
        path = [start]

        def extend():
            if len(path) == p:
                if sft.has_edge(path[-1], start):
                    word = tuple(path)
                    if len(_primitive_root(word)) == p:
                        found.add(_min_rotation(word, index))
                return
            for b in sft.successors(path[-1]):
                if index(b) >= start_pos:
                    path.append(b)
                    extend()
                    path.pop()

        extend()
    points = [PeriodicPoint(w, symbols) for w in sorted(found, key=lambda w: tuple(index(a) for a in w))]
    return points


def count_periodic_orbits(sft, p):
    return len(periodic_points(sft, p))


def matrix_power_trace(sft, p):
    """Trace of the ``p``-th power of the adjacency matrix, exact."""
    n = len(sft.symbols)
    mat = sft.adjacency_matrix()
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [row[:] for row in mat]
    e = p
    while e:
        if e & 1:
            result = _int_matmul(result, base)
        e >>= 1
        if e:
            base = _int_matmul(base, base)
    return sum(result[i][i] for i in range(n))


def _int_matmul(a, b):
    n = len(a)
    m = len(b[0])
    k = len(b)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                for j in range(m):
                    oi[j] += v * bt[j]
    return out


def allowed_words(sft, length):
    """All allowed words of the given length, in lexicographic symbol order."""
    _require_essential(sft)
    if length == 0:
        return [()]
    words = [(a,) for a in sft.symbols]
    for _ in range(length - 1):
        words = [w + (b,) for w in words for b in sft.successors(w[-1])]
    return words


def count_allowed_words(sft, length):
    """Number of allowed words of the given length, exact."""
    n = len(sft.symbols)
    if length == 0:
        return 1
    vec = [1] * n
    mat = sft.adjacency_matrix()
    for _ in range(length - 1):
        vec = [sum(mat[i][j] * vec[j] for j in range(n)) for i in range(n)]
    return sum(vec)


def higher_block(sft, m):
    """The ``m``-th higher block presentation.

    Symbols of the new shift are the allowed ``m``-words (as tuples) and
    there is an edge ``u -> v`` iff ``u[1:] == v[:-1]``.  Returns the new
    shift together with the translation table mapping each new symbol to
    the ``m``-word of old symbols it stands for.  The new shift is
    conjugate to the original.
    """
    _require_essential(sft)
    if m < 1:
        raise ValueError("block length must be positive")
    words = allowed_words(sft, m)
    order = {w: i for i, w in enumerate(words)}
    edges = []
    for u in words:
        suffix = u[1:]
        for b in sft.successors(u[-1]):
            v = suffix + (b,)
            if v in order:
                edges.append((u, v))
    table = {w: w for w in words}
    return Sft(words, edges), table


def orbit_sum_formula_holds(sft, p):
    """Exact check: sum over divisors d|p of d * #orbits(d) == tr(A^p)."""
    total = 0
    for d in range(1, p + 1):
        if p % d == 0:
            total += d * count_periodic_orbits(sft, d)
    return total == matrix_power_trace(sft, p)


def full_shift(symbols):
    """The full shift over the given symbols (every transition allowed)."""
    symbols = tuple(symbols)
    return Sft(symbols, [(a, b) for a in symbols for b in symbols])


def rational_str(q):
    """Canonical string form of a Fraction, e.g. ``2/5`` or ``1``."""
    return str(Fraction(q))


def lcm(values):
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
