"""Deterministic digraph primitives shared across the package.

All functions take an ordered node sequence plus a successor function and
produce results whose order depends only on that input order, never on
hash seeds, so reports built on top of them are reproducible.
"""


def essential_nodes(nodes, successors, predecessors):
    """Nodes lying on bi-infinite paths.

    Repeatedly removes nodes with no successor or no predecessor and
    returns the survivors as a list in the original order.
    """
    alive = set(nodes)
    changed = True
    while changed:
        changed = False
        for q in list(alive):
            if not any(r in alive for r in successors(q)) or not any(
                r in alive for r in predecessors(q)
            ):
                alive.discard(q)
                changed = True
    return [q for q in nodes if q in alive]


def strongly_connected_components(nodes, successors):
    """Tarjan's algorithm, iterative.

    Returns a list of components, each a list of nodes in input order.
    Components are ordered by their smallest node position, so the output
    is deterministic.
    """
    position = {q: i for i, q in enumerate(nodes)}
    index = {}
    low = {}
    on_stack = set()
    stack = []
    components = []
    counter = [0]

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = counter[0]
                    counter[0] += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(successors(succ))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    q = stack.pop()
                    on_stack.discard(q)
                    comp.append(q)
                    if q == node:
                        break
                comp.sort(key=position.__getitem__)
                components.append(comp)

    components.sort(key=lambda comp: position[comp[0]])
    return components


def is_strongly_connected(nodes, successors):
    comps = strongly_connected_components(nodes, successors)
    return len(comps) == 1


def reachable_from(seeds, successors):
    """Forward closure of ``seeds`` (including the seeds)."""
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        node = frontier.pop()
        for succ in successors(node):
            if succ not in seen:
                seen.add(succ)
                frontier.append(succ)
    return seen
