"""Independent brute-force references used to cross-check the library.

Nothing here imports the package's algorithms; only plain edge sets and
itertools are used.
"""

from __future__ import annotations

import itertools


def reach_matrix(n: int, edges) -> list[int]:
    """Warshall transitive closure (reflexive); row ``i`` is a bitmask."""
    r = [1 << i for i in range(n)]
    for u, v in edges:
        r[u] |= 1 << v
    for k in range(n):
        bit, row_k = 1 << k, r[k]
        for i in range(n):
            if r[i] & bit:
                r[i] |= row_k
    return r


def scc_partition(n: int, edges, keep=None) -> list[frozenset]:
    """Strong components by mutual reachability, restricted to ``keep``."""
    keep = sorted(range(n) if keep is None else keep)
    idx = {v: i for i, v in enumerate(keep)}
    sub = [(idx[u], idx[v]) for u, v in edges if u in idx and v in idx]
    r = reach_matrix(len(keep), sub)
    seen, out = set(), []
    for i in range(len(keep)):
        if i in seen:
            continue
        comp = {j for j in range(len(keep)) if r[i] >> j & 1 and r[j] >> i & 1}
        seen |= comp
        out.append(frozenset(keep[j] for j in comp))
    return out


def has_hamilton_path(n: int, edges) -> bool:
    es = set(edges)
    return any(all((a, b) in es for a, b in zip(p, p[1:])) for p in itertools.permutations(range(n)))


def has_hamilton_cycle(n: int, edges) -> bool:
    if n < 2:
        return False
    es = set(edges)
    for p in itertools.permutations(range(1, n)):
        c = (0,) + p
        if all((c[i], c[(i + 1) % n]) in es for i in range(n)):
            return True
    return False


def dfs_tree_edges(n: int, edges, root: int) -> set:
    """Recursive DFS with ascending neighbour order."""
    out = {u: sorted(v for a, v in edges if a == u) for u in range(n)}
    seen = {root}
    tree = set()

    def go(u):
        for v in out[u]:
            if v not in seen:
                seen.add(v)
                tree.add((u, v))
                go(v)

    go(root)
    return tree


def rotations_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        i = list(b).index(a[0])
    except ValueError:
        return False
    b = list(b)
    return list(a) == b[i:] + b[:i]
