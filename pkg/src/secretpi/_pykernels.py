"""Pure-Python reference implementation of the graph kernels.

Graphs are given as parallel integer sequences ``src, lab, dst`` over states
``0..n-1``; label ``tau`` marks silent edges.
"""


def tau_closure(n, src, lab, dst, tau):
    """For every state, the sorted list of states reachable by silent edges."""
    succ = [[] for _ in range(n)]
    for s, a, d in zip(src, lab, dst):
        if a == tau:
            succ[s].append(d)
    closure = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        closure.append(sorted(seen))
    return closure


def saturate(n, src, lab, dst, tau):
    """Weak edges: ``s =tau=> t`` for t in the silent closure, and
    ``s =a=> t`` whenever ``s tau* -a-> tau* t``.  Sorted, without duplicates."""
    closure = tau_closure(n, src, lab, dst, tau)
    visible = [[] for _ in range(n)]
    for s, a, d in zip(src, lab, dst):
        if a != tau:
            visible[s].append((a, d))
    weak = set()
    for s in range(n):
        for t in closure[s]:
            weak.add((s, tau, t))
            for a, u in visible[t]:
                for v in closure[u]:
                    weak.add((s, a, v))
    out = sorted(weak)
    return [e[0] for e in out], [e[1] for e in out], [e[2] for e in out]


def refine(n, src, lab, dst):
    """Signature-based partition refinement, starting from one block.

    Returns the block assignment after every round; the last one is stable.
    A state's signature is its current block together with the set of
    ``(label, target block)`` pairs it can reach, so partitions only split.
    """
    out = [[] for _ in range(n)]
    for s, a, d in zip(src, lab, dst):
        out[s].append((a, d))
    block = [0] * n
    rounds = [block]
    count = 1 if n else 0
    while True:
        ids = {}
        new = []
        for s in range(n):
            sig = (block[s], tuple(sorted({(a, block[d]) for a, d in out[s]})))
            new.append(ids.setdefault(sig, len(ids)))
        if len(ids) == count:
            return rounds
        count = len(ids)
        block = new
        rounds.append(block)
