"""Arborescences, normal assistants, normal orders and the finite
Rédei/Camion constructions."""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .core_digraph import (
    DigraphError,
    FiniteDigraph,
    FiniteTournament,
    is_strongly_connected,
    reachable_from,
    strong_components,
)


class Unreachable(DigraphError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex!r} is not reachable from the root")
        self.vertex = vertex


class NotSpanning(DigraphError):
    pass


class NotNormal(DigraphError):
    pass


class NotTotal(DigraphError):
    pass


class NotInsertable(DigraphError):
    pass


class NotStronglyConnected(DigraphError):
    pass


class TooSmall(DigraphError):
    pass


@dataclass(frozen=True)
class Arborescence:
    root: int
    parent: Mapping[int, int]
    children: Mapping[int, tuple[int, ...]]
    # discovery/finish orders are only meaningful for trees built by DFS
    preorder: tuple[int, ...] = ()
    postorder: tuple[int, ...] = ()
    _depth: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_parent(cls, root: int, parent: Mapping[int, int]) -> "Arborescence":
        children: dict[int, list[int]] = {root: []}
        for v in sorted(parent):
            children.setdefault(v, [])
            children.setdefault(parent[v], []).append(v)
        t = cls(root, dict(parent), {v: tuple(c) for v, c in children.items()})
        t._check()
        return t

    def _check(self) -> None:
        if self.root in self.parent:
            raise DigraphError("root must not have a parent")
        for v in self.parent:
            seen = {v}
            w = v
            while w != self.root:
                if w not in self.parent:
                    raise DigraphError(f"vertex {v} does not lead back to the root")
                w = self.parent[w]
                if w in seen:
                    raise DigraphError(f"cycle through {v}")
                seen.add(w)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.children)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((p, v) for v, p in self.parent.items())

    def depth(self, v: int) -> int:
        d = self._depth.get(v)
        if d is None:
            d = 0 if v == self.root else self.depth(self.parent[v]) + 1
            self._depth[v] = d
        return d

    def down_closure(self, v: int) -> list[int]:
        """``v`` and all its ancestors, root first."""
        out = [v]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def up_closure(self, v: int) -> list[int]:
        out = []
        todo = [v]
        while todo:
            w = todo.pop()
            out.append(w)
            todo.extend(self.children.get(w, ()))
        return sorted(out)

    def leq(self, u: int, v: int) -> bool:
        """Tree order: ``u`` lies on the root path of ``v``."""
        du, dv = self.depth(u), self.depth(v)
        if du > dv:
            return False
        while dv > du:
            v = self.parent[v]
            dv -= 1
        return u == v

    def comparable(self, u: int, v: int) -> bool:
        return self.leq(u, v) or self.leq(v, u)


@dataclass(frozen=True)
class NormalOrder:
    seq: tuple[int, ...]
    rank: Mapping[int, int]

    @classmethod
    def from_seq(cls, seq: Sequence[int]) -> "NormalOrder":
        return cls(tuple(seq), {v: i for i, v in enumerate(seq)})


def dfs_arborescence(d: FiniteDigraph, root: int) -> Arborescence:
    """Depth-first search tree; unvisited out-neighbours explored in ascending order."""
    parent: dict[int, int] = {}
    children: dict[int, list[int]] = {root: []}
    pre = [root]
    post: list[int] = []
    work = [(root, iter(d.out_neighbors(root)))]
    while work:
        v, it = work[-1]
        for w in it:
            if w not in children:
                parent[w] = v
                children[v].append(w)
                children[w] = []
                pre.append(w)
                work.append((w, iter(d.out_neighbors(w))))
                break
        else:
            work.pop()
            post.append(v)
    if len(children) != d.n:
        missing = min(set(range(d.n)) - set(children))
        raise Unreachable(missing)
    return Arborescence(
        root,
        parent,
        {v: tuple(c) for v, c in children.items()},
        tuple(pre),
        tuple(post),
    )


def _check_spans(d: FiniteDigraph, t: Arborescence) -> None:
    if sorted(t.children) != list(range(d.n)):
        raise NotSpanning(f"arborescence covers {len(t.children)} of {d.n} vertices")
    for p, v in t.edges():
        if not d.has_edge(p, v):
            raise NotSpanning(f"tree edge ({p},{v}) is not an edge of the digraph")


def normal_assistant(d: FiniteDigraph, t: Arborescence) -> FiniteDigraph:
    """Tree edges plus ``(v, w)`` for incomparable ``v, w`` whenever some edge
    runs from the up-closure of ``v`` to the up-closure of ``w``."""
    _check_spans(d, t)
    extra = set(t.edges())
    paths = {v: t.down_closure(v) for v in range(d.n)}
    for x, y in d.edges:
        px, py = paths[x], paths[y]
        # below the last common ancestor the two root paths are incomparable
        k = 0
        while k < len(px) and k < len(py) and px[k] == py[k]:
            k += 1
        if k == len(px) or k == len(py):
            continue
        for v in px[k:]:
            for w in py[k:]:
                extra.add((v, w))
    return FiniteDigraph(d.n, frozenset(extra))


def _topological(h: FiniteDigraph) -> Optional[list[int]]:
    indeg = [len(h.in_neighbors(v)) for v in range(h.n)]
    heap = [v for v in range(h.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in h.out_neighbors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == h.n else None


def is_normal(d: FiniteDigraph, t: Arborescence) -> bool:
    return _topological(normal_assistant(d, t)) is not None


def normal_order(d: FiniteDigraph, t: Arborescence, require_total: bool = True) -> NormalOrder:
    """Linear order given by the transitive closure of the normal assistant.

    With ``require_total`` the closure must be a total order; that holds
    exactly when the topological order is unique, i.e. when consecutive
    entries are joined by an assistant edge.
    """
    h = normal_assistant(d, t)
    order = _topological(h)
    if order is None:
        raise NotNormal("normal assistant has a directed cycle")
    if require_total:
        for a, b in zip(order, order[1:]):
            if not h.has_edge(a, b):
                raise NotTotal(f"vertices {a} and {b} are incomparable in the normal order")
    return NormalOrder.from_seq(order)


def reverse_postorder(t: Arborescence) -> list[int]:
    if not t.postorder:
        raise DigraphError("arborescence carries no DFS finishing order")
    return list(reversed(t.postorder))


def default_start(t: FiniteDigraph) -> int:
    """Smallest vertex of the source strong component."""
    return strong_components(t).classes[0][0]


def redei_path(t: FiniteTournament, start: Optional[int] = None) -> list[int]:
    """Hamilton path of a finite tournament as the reverse post-order of a DFS."""
    if t.n == 0:
        return []
    if start is None:
        start = default_start(t)
    tree = dfs_arborescence(t, start)
    return reverse_postorder(tree)


def insert_vertex(
    d: FiniteDigraph, seq: Sequence[int], v: int, cyclic: bool = False
) -> list[int]:
    """Insert ``v`` into a directed path (or cycle) keeping the old order."""
    seq = list(seq)
    if v in seq:
        raise NotInsertable(f"{v} already on the path")
    if not seq:
        return [v]
    if cyclic:
        if len(seq) == 1:
            if d.has_edge(seq[0], v) and d.has_edge(v, seq[0]):
                return [seq[0], v]
            raise NotInsertable(f"{v} cannot close a 2-cycle with {seq[0]}")
        k = len(seq)
        for i in range(k):
            if d.has_edge(seq[i], v) and d.has_edge(v, seq[(i + 1) % k]):
                return seq[: i + 1] + [v] + seq[i + 1 :]
        raise NotInsertable(f"{v} has no in/out neighbour pair on the cycle")
    if d.has_edge(v, seq[0]):
        return [v] + seq
    if d.has_edge(seq[-1], v):
        return seq + [v]
    for i in range(len(seq) - 1):
        if d.has_edge(seq[i], v) and d.has_edge(v, seq[i + 1]):
            return seq[: i + 1] + [v] + seq[i + 1 :]
    raise NotInsertable(f"{v} cannot be inserted into the path")


def _first_triangle(t: FiniteTournament) -> list[int]:
    for a, b, c in itertools.combinations(range(t.n), 3):
        if t.beats(a, b) and t.beats(b, c) and t.beats(c, a):
            return [a, b, c]
        if t.beats(a, c) and t.beats(c, b) and t.beats(b, a):
            return [a, c, b]
    raise NotStronglyConnected("tournament has no 3-cycle")


def camion_cycle(t: FiniteTournament) -> list[int]:
    """Hamilton cycle of a strongly connected tournament, grown from the
    lexicographically first 3-cycle by repeated insertion."""
    if t.n < 3:
        raise TooSmall(f"n={t.n}")
    if not is_strongly_connected(t):
        raise NotStronglyConnected("tournament is not strongly connected")
    cycle = _first_triangle(t)
    rest = [v for v in range(t.n) if v not in cycle]
    while rest:
        on = set(cycle)
        for v in rest:
            if any(t.beats(c, v) for c in on) and any(t.beats(v, c) for c in on):
                cycle = insert_vertex(t, cycle, v, cyclic=True)
                rest.remove(v)
                break
        else:
            # every leftover vertex beats the whole cycle or loses to all of it;
            # strong connectivity gives a dominated b with an edge to a dominating a
            b, a = next(
                (b, a)
                for b in rest
                for a in rest
                if t.beats(b, a) and t.beats(a, cycle[0]) and t.beats(cycle[0], b)
            )
            cycle = [cycle[0], b, a] + cycle[1:]
            rest.remove(a)
            rest.remove(b)
    return cycle


def tree_path_closure(t: Arborescence, vertices) -> bool:
    """True iff ``vertices`` is down-closed in the tree order."""
    vs = set(vertices)
    return all(v == t.root or t.parent[v] in vs for v in vs)


def reaches_all(d: FiniteDigraph, root: int) -> bool:
    return len(reachable_from(d, root)) == d.n
