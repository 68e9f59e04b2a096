"""1-block factor codes and their degree theory.

A 1-block code is a total map from domain symbols to image symbols; the
image shift is the sofic shift of label sequences of allowed paths.  The
two central decision procedures are

* finite-to-one-ness, decided by diamond detection on the pair graph, and
* the degree ``d``, the common fiber size over doubly transitive image
  points, found by minimizing the number of distinct symbols seen at one
  coordinate across all preimages of an image word (a magic word search).

The word search runs over the forward and backward subset automata rather
than over raw words: the count of preimage symbols at coordinate ``i`` of
a word ``W`` equals ``|F /\\ B|`` where ``F`` is the forward subset reached
by the prefix ending at ``i`` and ``B`` the backward subset reached by the
suffix starting at ``i``, and every such pair with a common pivot symbol is
realized by an actual word.  Once both automata are explored to closure the
minimum over all word lengths has provably been attained, which is what the
certificate's ``converged`` flag reports.
"""

from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .errors import EmptyShift, NotFiniteToOne, NotIrreducible
from .graphs import reachable_from
from .shifts import PeriodicPoint, Sft, essentialize, higher_block, is_irreducible
from .spectral import spectral_log_bounds


class BlockCode:
    """A 1-block factor code given by a total symbol map.

    The image alphabet is exactly the range of the map, ordered by first
    occurrence along the domain symbol order.
    """

    __slots__ = ("domain", "symbol_map", "image_alphabet", "_image_index", "_preimages")

    def __init__(self, domain, symbol_map):
        missing = [a for a in domain.symbols if a not in symbol_map]
        if missing:
            raise ValueError(f"symbol map is not total; missing {missing!r}")
        extra = [a for a in symbol_map if not domain.has_symbol(a)]
        if extra:
            raise ValueError(f"symbol map mentions unknown symbols {extra!r}")
        image = []
        for a in domain.symbols:
            v = symbol_map[a]
            if v not in image:
                image.append(v)
        self.domain = domain
        self.symbol_map = dict(symbol_map)
        self.image_alphabet = tuple(image)
        self._image_index = {v: i for i, v in enumerate(image)}
        pre = {v: [] for v in image}
        for a in domain.symbols:
            pre[symbol_map[a]].append(a)
        self._preimages = {v: tuple(rest) for v, rest in pre.items()}

    def __call__(self, a):
        return self.symbol_map[a]

    def preimage_symbols(self, v):
        return self._preimages.get(v, ())

    def label_word(self, word):
        return tuple(self.symbol_map[a] for a in word)

    def image_point(self, x):
        """Push a domain periodic point forward to its image point."""
        return PeriodicPoint.from_cycle(self.label_word(x.word), self.image_alphabet)

    def image_periodic_point(self, word):
        """A validated periodic point of the image shift from a cycle word.

        Reduces to the primitive root; raises ``ValueError`` when a symbol
        is not an image symbol.  Membership in the image shift itself is
        checked by the fiber machinery.
        """
        word = tuple(word)
        for v in word:
            if v not in self._image_index:
                raise ValueError(f"{v!r} is not an image symbol")
        return PeriodicPoint.from_cycle(word, self.image_alphabet)

    def __repr__(self):
        return f"BlockCode({len(self.domain.symbols)} -> {len(self.image_alphabet)} symbols)"


def identity_code(sft):
    return BlockCode(sft, {a: a for a in sft.symbols})


def _pair_states(code):
    return [
        (a, b)
        for a in code.domain.symbols
        for b in code.domain.symbols
        if code(a) == code(b)
    ]


def _pair_successors(code, state):
    a, b = state
    out = []
    for a2 in code.domain.successors(a):
        for b2 in code.domain.successors(b):
            if code(a2) == code(b2):
                out.append((a2, b2))
    return out


def is_finite_to_one(code):
    """Diamond detection on the pair graph.

    A diamond is a pair of distinct equal-length domain words with equal
    image, equal first symbol and equal last symbol; the code is
    finite-to-one iff none exists, iff no path in the pair graph runs from
    a diagonal state through an off-diagonal state back to a diagonal
    state.
    """
    domain = code.domain
    if not domain.is_essential or not is_irreducible(domain):
        raise NotIrreducible("finite-to-one test requires an essential irreducible domain")
    states = _pair_states(code)
    state_set = set(states)
    diagonal = [(a, a) for a in domain.symbols]

    succ = {}
    pred = {s: [] for s in states}
    for s in states:
        nxt = [t for t in _pair_successors(code, s) if t in state_set]
        succ[s] = nxt
        for t in nxt:
            pred[t].append(s)

    from_diag = reachable_from(diagonal, lambda s: succ[s])
    to_diag = reachable_from(diagonal, lambda s: pred[s])
    for s in states:
        a, b = s
        if a != b and s in from_diag and s in to_diag:
            return False
    return True


@dataclass(frozen=True)
class DegreeCertificate:
    """Result of the degree minimization.

    ``degree`` distinct domain symbols occur at coordinate ``coordinate``
    among the preimages of the image word ``witness``; no word of length
    at most ``length_bound`` does better.  ``converged`` is True when the
    subset automata were explored to closure, so the value is the true
    degree and not only an upper bound.
    """

    degree: int
    witness: tuple
    coordinate: int
    length_bound: int
    converged: bool


def _subset_closure(code, forward):
    """BFS over the (forward or backward) subset automaton.

    States are bitmasks over domain symbols contained in the preimage of a
    single image symbol; returns ``{mask: shortest lexicographically
    minimal word reaching it}``.
    """
    domain = code.domain
    index = {a: i for i, a in enumerate(domain.symbols)}
    pre_mask = {}
    for v in code.image_alphabet:
        m = 0
        for a in code.preimage_symbols(v):
            m |= 1 << index[a]
        pre_mask[v] = m

    step_sets = domain.successors if forward else domain.predecessors
    step_mask = {}
    for a in domain.symbols:
        m = 0
        for b in step_sets(a):
            m |= 1 << index[b]
        step_mask[a] = m

    def advance(mask, v):
        out = 0
        i = 0
        rest = mask
        while rest:
            if rest & 1:
                out |= step_mask[domain.symbols[i]]
            rest >>= 1
            i += 1
        return out & pre_mask[v]

    image_order = {v: i for i, v in enumerate(code.image_alphabet)}

    def word_key(w):
        return tuple(image_order[v] for v in w)

    reached = {}
    level = []
    for v in code.image_alphabet:
        m = pre_mask[v]
        if m and m not in reached:
            reached[m] = (v,)
            level.append((m, (v,)))
    while level:
        level.sort(key=lambda item: word_key(item[1]))
        nxt = []
        for mask, word in level:
            for v in code.image_alphabet:
                m2 = advance(mask, v)
                if m2 and m2 not in reached:
                    w2 = word + (v,) if forward else (v,) + word
                    reached[m2] = w2
                    nxt.append((m2, w2))
        level = nxt
    return reached


def degree(code, length_cap=None):
    """Degree certificate via magic word search.

    The reported value is the minimum over image words ``W`` with
    ``|W| <= length_cap`` and coordinates ``i`` of the number of distinct
    domain symbols at coordinate ``i`` among the preimages of ``W``.  That
    minimum is non-increasing in word length and bounded below by the true
    degree, which it reaches once the search converges.
    """
    if not is_finite_to_one(code):
        raise NotFiniteToOne("degree is defined for finite-to-one codes only")
    if length_cap is None:
        length_cap = max(8, len(code.domain.symbols) ** 2)
    if length_cap < 1:
        raise ValueError("length cap must be positive")

    domain = code.domain
    index = {a: i for i, a in enumerate(domain.symbols)}
    fwd = _subset_closure(code, forward=True)
    bwd = _subset_closure(code, forward=False)

    image_order = {v: i for i, v in enumerate(code.image_alphabet)}

    by_pivot_f = {}
    for mask, word in fwd.items():
        by_pivot_f.setdefault(word[-1], []).append((mask, word))
    by_pivot_b = {}
    for mask, word in bwd.items():
        by_pivot_b.setdefault(word[0], []).append((mask, word))

    best = None  # (count, witness length, witness key, witness, coordinate)
    best_capped = None
    for v in code.image_alphabet:
        for fmask, fword in by_pivot_f.get(v, ()):
            for bmask, bword in by_pivot_b.get(v, ()):
                count = (fmask & bmask).bit_count()
                if count == 0:
                    continue
                witness = fword + bword[1:]
                entry = (
                    count,
                    len(witness),
                    tuple(image_order[s] for s in witness),
                    witness,
                    len(fword) - 1,
                )
                if best is None or entry[:3] < best[:3]:
                    best = entry
                if len(witness) <= length_cap and (
                    best_capped is None or entry[:3] < best_capped[:3]
                ):
                    best_capped = entry
    if best_capped is None:
        raise NotFiniteToOne("image language is empty within the length cap")
    converged = best_capped[0] == best[0]
    return DegreeCertificate(
        degree=best_capped[0],
        witness=best_capped[3],
        coordinate=best_capped[4],
        length_bound=length_cap,
        converged=converged,
    )


def image_word_check(code, word):
    """True iff some allowed domain word maps to the given image word.

    Propagates the set of possible domain symbols through the word; image
    symbols outside the alphabet simply yield False.
    """
    word = tuple(word)
    if not word:
        return True
    current = set(code.preimage_symbols(word[0]))
    for v in word[1:]:
        allowed = set(code.preimage_symbols(v))
        current = {b for a in current for b in code.domain.successors(a) if b in allowed}
        if not current:
            return False
    return bool(current)


def build_separated_product(code, n):
    """The shift of ``n``-tuples of distinct equal-label domain symbols.

    Symbols are ``n``-tuples of pairwise distinct domain symbols sharing
    one image symbol; transitions act componentwise.  Returns the
    essential part and raises :class:`EmptyShift` if it is empty.  For
    ``n`` equal to the degree of a finite-to-one code the induced label
    map onto the image shift is surjective.
    """
    if n < 1:
        raise ValueError("tuple arity must be positive")
    domain = code.domain
    symbols = []
    for v in code.image_alphabet:
        symbols.extend(permutations(code.preimage_symbols(v), n))
    if not symbols:
        raise EmptyShift("no tuples of distinct symbols share an image symbol")
    symbol_set = set(symbols)
    edges = []
    for s in symbols:
        for t in product(*(domain.successors(a) for a in s)):
            if t in symbol_set:
                edges.append((s, t))
    return essentialize(Sft(symbols, edges))


def separated_product_label_code(code, product_sft):
    """The induced 1-block code from a separated product onto the image."""
    return BlockCode(product_sft, {s: code(s[0]) for s in product_sft.symbols})


def higher_block_code(code, m):
    """Recoding of a code to the ``m``-th higher block presentation.

    The new domain's symbols are allowed ``m``-words; each maps to the
    label of its first symbol, so the induced factor code has the same
    image shift and the same degree.
    """
    new_domain, _ = higher_block(code.domain, m)
    return BlockCode(new_domain, {w: code(w[0]) for w in new_domain.symbols})


def image_entropy_bounds(code, tol=1e-9):
    """Certified enclosure of the image shift entropy.

    Builds the deterministic cover of the image by subset construction and
    measures word growth there: from the initial full-symbol state, words
    of the image language correspond bijectively to paths, so the log
    spectral radius of the cover's transition-count matrix is the image
    entropy.
    """
    domain = code.domain
    index = {a: i for i, a in enumerate(domain.symbols)}
    step_mask = {}
    for a in domain.symbols:
        m = 0
        for b in domain.successors(a):
            m |= 1 << index[b]
        step_mask[a] = m
    pre_mask = {}
    for v in code.image_alphabet:
        m = 0
        for a in code.preimage_symbols(v):
            m |= 1 << index[a]
        pre_mask[v] = m

    def advance(mask, v):
        out = 0
        i = 0
        rest = mask
        while rest:
            if rest & 1:
                out |= step_mask[domain.symbols[i]]
            rest >>= 1
            i += 1
        return out & pre_mask[v]

    full = (1 << len(domain.symbols)) - 1
    states = {full: 0}
    order = [full]
    frontier = [full]
    transitions = []
    while frontier:
        nxt = []
        for mask in frontier:
            for v in code.image_alphabet:
                m2 = advance(mask, v)
                if not m2:
                    continue
                if m2 not in states:
                    states[m2] = len(order)
                    order.append(m2)
                    nxt.append(m2)
                transitions.append((states[mask], states[m2]))
        frontier = nxt
    size = len(order)
    counts = np.zeros((size, size))
    for i, j in transitions:
        counts[i, j] += 1.0
    return spectral_log_bounds(counts, tol=tol * 1e-2)
