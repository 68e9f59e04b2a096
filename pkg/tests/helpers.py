"""Shared fixtures, random instance generators, and independent oracles.

The oracles here deliberately avoid the library code paths they check:
fiber enumeration walks the domain graph with label constraints instead of
building the phase graph, and the transition brute force propagates symbol
sets directly from the domain edges instead of using strongly connected
components.
"""

from sftlab.codes import BlockCode
from sftlab.errors import EmptyShift
from sftlab.graphs import strongly_connected_components
from sftlab.shifts import PeriodicPoint, Sft, essentialize, full_shift, is_irreducible, lcm


def golden_mean():
    return Sft(["0", "1"], [("0", "0"), ("0", "1"), ("1", "0")])


def full_n_shift(n):
    return full_shift([str(i) for i in range(n)])


def collapse_code_full3():
    sft = full_n_shift(3)
    return BlockCode(sft, {"0": "0", "1": "0", "2": "1"})


def two_loop_code():
    sft = Sft(
        ["a", "b", "c"],
        [("a", "a"), ("b", "b"), ("a", "c"), ("b", "c"), ("c", "a"), ("c", "b")],
    )
    return BlockCode(sft, {"a": "0", "b": "0", "c": "1"})


def entropy_gap_code():
    """Two transition classes over 0^inf with entropies ln 2 and 0."""
    sft = Sft(
        ["a1", "a2", "b", "c"],
        [
            ("a1", "a1"),
            ("a1", "a2"),
            ("a2", "a1"),
            ("a2", "a2"),
            ("b", "b"),
            ("a1", "c"),
            ("a2", "c"),
            ("b", "c"),
            ("c", "a1"),
            ("c", "a2"),
            ("c", "b"),
        ],
    )
    return BlockCode(sft, {"a1": "0", "a2": "0", "b": "0", "c": "1"})


# ---------------------------------------------------------------------------
# independent oracles


def brute_force_fiber(code, y, max_wraps=None):
    """Periodic preimages of ``y`` by label-constrained closed-walk search.

    Enumerates closed domain walks of length k * period(y) whose labels
    read ``y``, for k up to the number of domain symbols (a finite fiber
    cannot contain longer primitive cycles), and reduces each to a point.
    """
    domain = code.domain
    p = y.period
    if max_wraps is None:
        max_wraps = len(domain.symbols)
    points = set()
    for wraps in range(1, max_wraps + 1):
        length = wraps * p
        stack = []

        def extend():
            t = len(stack)
            if t == length:
                if domain.has_edge(stack[-1], stack[0]):
                    points.add(PeriodicPoint.from_cycle(tuple(stack), domain.symbols))
                return
            prev = stack[-1]
            for b in domain.successors(prev):
                if code(b) == y.symbol_at(t):
                    stack.append(b)
                    extend()
                    stack.pop()

        for a in code.preimage_symbols(y.word[0]):
            stack = [a]
            extend()
    return sorted(points, key=PeriodicPoint.sort_key)


def brute_transition_anchored(code, y, x_from, x_to):
    """Routing from ``x_from`` onto the exact trajectory of ``x_to``.

    True iff some preimage of ``y`` agrees with ``x_from`` into the past and
    coincides with ``x_to`` coordinate-for-coordinate from some time on.
    Propagates the set of symbols reachable from ``x_from`` along the label
    constraint and looks for ``x_to`` at an aligned time; stops exactly when
    the propagated state starts repeating.
    """
    p = y.period
    span = lcm([p, x_from.period, x_to.period])
    state_period = lcm([p, x_to.period])
    for s in range(span):
        current = frozenset([x_from.symbol_at(s)])
        t = 0
        visited = set()
        while True:
            if x_to.symbol_at(s + t) in current:
                return True
            state = ((s + t) % state_period, current)
            if state in visited:
                break
            visited.add(state)
            v = y.symbol_at(s + t + 1)
            current = frozenset(
                b
                for a in current
                for b in code.domain.successors(a)
                if code(b) == v
            )
            if not current:
                break
            t += 1
    return False


def brute_transition(code, y, x_from, x_to):
    """Routing up to phase: onto some period-of-y shift of ``x_to``.

    Shifting a preimage by a multiple of the period of ``y`` yields another
    preimage of ``y``; classes of preimages are taken between trajectories
    up to such shifts, matching windows that carry the same image word.
    """
    p = y.period
    assert x_to.period % p == 0
    for j in range(x_to.period // p):
        if brute_transition_anchored(code, y, x_from, x_to.shift(j * p)):
            return True
    return False


def brute_same_class(code, y, x1, x2):
    return brute_transition(code, y, x1, x2) and brute_transition(code, y, x2, x1)


def brute_separated_symbols(code, n):
    """Tuple symbols of the separated product by direct enumeration."""
    from itertools import permutations

    out = []
    for v in code.image_alphabet:
        out.extend(permutations(code.preimage_symbols(v), n))
    return out


# ---------------------------------------------------------------------------
# random instances


def random_essential_irreducible_sft(rng, max_symbols=6, min_symbols=2):
    letters = "abcdefgh"
    while True:
        n = rng.randint(min_symbols, max_symbols)
        symbols = list(letters[:n])
        density = rng.uniform(0.3, 0.75)
        edges = [
            (a, b) for a in symbols for b in symbols if rng.random() < density
        ]
        try:
            sft = essentialize(Sft(symbols, edges))
        except EmptyShift:
            continue
        comps = strongly_connected_components(sft.symbols, sft.successors)
        comp = max(comps, key=len)
        if len(comp) < min_symbols:
            continue
        sub = sft.subshift(comp)
        if sub.is_essential and is_irreducible(sub):
            return sub


def cyclic_cover_code(rng, max_symbols=6):
    """A skew-product extension of a small base shift by Z_k.

    Domain symbols are (base symbol, residue); an edge advances the residue
    by a random cocycle value, and the code forgets the residue.  Every
    fiber of the projection has exactly k points, so the code is
    finite-to-one with degree dividing k, often larger than 1.
    """
    from sftlab.graphs import strongly_connected_components as sccs

    while True:
        k = rng.choice([2, 2, 3])
        base = random_essential_irreducible_sft(rng, max_symbols=max(2, max_symbols // k))
        cocycle = {edge: rng.randrange(k) for edge in sorted(base.edges)}
        symbols = [f"{a}{i}" for a in base.symbols for i in range(k)]
        edges = []
        for (a, b), c in cocycle.items():
            for i in range(k):
                edges.append((f"{a}{i}", f"{b}{(i + c) % k}"))
        sft = Sft(symbols, edges)
        comps = sccs(sft.symbols, sft.successors)
        comp = max(comps, key=len)
        sub = sft.subshift(comp)
        if not (sub.is_essential and is_irreducible(sub)):
            continue
        return BlockCode(sub, {s: s[:-1] for s in sub.symbols})


def random_code(rng, sft, image_size):
    letters = [str(i) for i in range(image_size)]
    return BlockCode(sft, {a: rng.choice(letters) for a in sft.symbols})


def random_finite_to_one_code(rng, max_symbols=6, max_attempts=400):
    """A finite-to-one code on an essential irreducible domain.

    Mixes cyclic covers (degree > 1), filtered random collapses, and
    bijective relabelings so the suite sees a spread of degrees.
    """
    from sftlab.codes import is_finite_to_one

    for _ in range(max_attempts):
        style = rng.random()
        if style < 0.4:
            return cyclic_cover_code(rng, max_symbols)
        sft = random_essential_irreducible_sft(rng, max_symbols)
        if style < 0.55:
            order = list(range(len(sft.symbols)))
            rng.shuffle(order)
            return BlockCode(
                sft, {a: str(order[i]) for i, a in enumerate(sft.symbols)}
            )
        code = random_code(rng, sft, rng.randint(1, len(sft.symbols)))
        if is_finite_to_one(code):
            return code
    raise AssertionError("could not generate a finite-to-one instance")


def random_block_code(rng, max_attempts=100):
    """A collapse code whose label-0 subgraph splits into isolated blocks.

    Each block is strongly connected on label-0 edges and blocks only talk
    to each other through a connector symbol labeled 1, so the fiber over
    the all-zeros fixed point splits into one transition class per block.
    """
    from sftlab.codes import is_finite_to_one

    letters = "defg"
    for _ in range(max_attempts):
        block_count = rng.choice([2, 2, 3])
        sizes = [rng.choice([1, 2]) for _ in range(block_count)]
        if sum(sizes) + 1 > 6:
            continue
        symbols = []
        blocks = []
        for bi, size in enumerate(sizes):
            block = [f"{letters[bi]}{j}" for j in range(size)]
            blocks.append(block)
            symbols.extend(block)
        symbols.append("z")
        edges = []
        for block in blocks:
            if len(block) == 1:
                edges.append((block[0], block[0]))
            else:
                a, b = block
                edges += [(a, b), (b, a)]
                for s in block:
                    if rng.random() < 0.6:
                        edges.append((s, s))
            for s in block:
                edges.append((s, "z"))
                edges.append(("z", s))
        if rng.random() < 0.5:
            edges.append(("z", "z"))
        sft = Sft(symbols, edges)
        mapping = {s: "0" for s in symbols[:-1]}
        mapping["z"] = "1"
        code = BlockCode(sft, mapping)
        if not is_finite_to_one(code):
            return code
    return None


def random_infinite_to_one_code(rng, max_symbols=5, max_attempts=400):
    from sftlab.codes import is_finite_to_one

    for _ in range(max_attempts):
        if rng.random() < 0.5:
            code = random_block_code(rng)
            if code is not None:
                return code
            continue
        sft = random_essential_irreducible_sft(rng, max_symbols)
        code = random_code(rng, sft, rng.randint(1, max(1, len(sft.symbols) - 1)))
        if not is_finite_to_one(code):
            return code
    raise AssertionError("could not generate an infinite-to-one instance")


def random_image_periodic_point(rng, code, max_period):
    """A random periodic image point of period <= max_period, or None."""
    from sftlab.shifts import periodic_points

    periods = list(range(1, max_period + 1))
    rng.shuffle(periods)
    for p in periods:
        candidates = periodic_points(code.domain, p)
        if candidates:
            return code.image_point(rng.choice(candidates))
    return None


def random_finite_to_one_instance(rng, max_symbols=6, max_period=4):
    """A finite-to-one code together with a periodic image point."""
    while True:
        code = random_finite_to_one_code(rng, max_symbols)
        y = random_image_periodic_point(rng, code, max_period)
        if y is not None:
            return code, y


def random_infinite_to_one_instance(rng, max_symbols=5, max_period=2):
    from sftlab.fibers import point_in_image

    while True:
        code = random_infinite_to_one_code(rng, max_symbols)
        if rng.random() < 0.6:
            # bias toward the all-zeros fixed point, where block-structured
            # codes have several transition classes
            try:
                y = code.image_periodic_point([code.image_alphabet[0]])
            except ValueError:
                y = None
            if y is not None and point_in_image(code, y):
                return code, y
        y = random_image_periodic_point(rng, code, max_period)
        if y is not None:
            return code, y
