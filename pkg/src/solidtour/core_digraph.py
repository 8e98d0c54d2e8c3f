"""Finite digraphs and tournaments on dense integer vertex ids.

Everything here is immutable once built.  The brute-force Hamiltonicity
searches are exhaustive and only meant as ground truth for small inputs.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Sequence

DEFAULT_BRUTE_FORCE_BOUND = 10


class DigraphError(ValueError):
    pass


class InvalidTournament(DigraphError):
    pass


class BoundExceeded(DigraphError):
    def __init__(self, n: int, bound: int):
        super().__init__(f"brute force refused: n={n} exceeds bound {bound}")
        self.n = n
        self.bound = bound


@dataclass(frozen=True)
class FiniteDigraph:
    """A simple digraph on vertices ``0..n-1`` (no loops, no parallel edges)."""

    n: int
    edges: frozenset

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DigraphError(f"negative vertex count {self.n}")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise DigraphError(f"loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DigraphError(f"edge ({u},{v}) out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "FiniteDigraph":
        edges = list(edges)
        if len(set(edges)) != len(edges):
            raise DigraphError("duplicate edge")
        return cls(n, frozenset(edges))

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            out[u].append(v)
        return tuple(tuple(sorted(o)) for o in out)

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            inn[v].append(u)
        return tuple(tuple(sorted(i)) for i in inn)

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in ws) for ws in self._out)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def reverse(self) -> "FiniteDigraph":
        return FiniteDigraph(self.n, frozenset((v, u) for u, v in self.edges))

    def induced(self, vertices: Sequence[int]) -> "FiniteDigraph":
        """Induced subdigraph, relabelled so that ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = frozenset(
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        if isinstance(self, FiniteTournament):
            return FiniteTournament(len(vertices), edges)
        return FiniteDigraph(len(vertices), edges)

    def is_path(self, seq: Sequence[int]) -> bool:
        return len(set(seq)) == len(seq) and all(
            self.has_edge(a, b) for a, b in zip(seq, seq[1:])
        )

    def is_hamilton_path(self, seq: Sequence[int]) -> bool:
        return len(seq) == self.n and sorted(seq) == list(range(self.n)) and self.is_path(seq)

    def is_hamilton_cycle(self, seq: Sequence[int]) -> bool:
        return (
            self.n >= 2
            and self.is_hamilton_path(seq)
            and self.has_edge(seq[-1], seq[0])
        )


class FiniteTournament(FiniteDigraph):
    """Exactly one directed edge between every two distinct vertices."""

    def __post_init__(self) -> None:
        super().__post_init__()
        for u, v in self.edges:
            if (v, u) in self.edges:
                raise InvalidTournament(f"both ({u},{v}) and ({v},{u}) present")
        expected = self.n * (self.n - 1) // 2
        if len(self.edges) != expected:
            raise InvalidTournament(
                f"{len(self.edges)} edges, a tournament on {self.n} vertices needs {expected}"
            )

    @classmethod
    def from_orient(cls, n: int, beats: Callable[[int, int], bool]) -> "FiniteTournament":
        """``beats(u, v)`` for ``u < v`` says whether the edge runs ``u -> v``."""
        edges = set()
        for u, v in itertools.combinations(range(n), 2):
            edges.add((u, v) if beats(u, v) else (v, u))
        return cls(n, frozenset(edges))

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "FiniteTournament":
        """Bit ``i`` (over pairs ``u < v`` in lexicographic order) set means ``v -> u``."""
        edges = set()
        for i, (u, v) in enumerate(itertools.combinations(range(n), 2)):
            edges.add((v, u) if bits >> i & 1 else (u, v))
        return cls(n, frozenset(edges))

    def orient(self, u: int, v: int) -> tuple[int, int]:
        if u == v:
            raise DigraphError("orient needs two distinct vertices")
        return (u, v) if (u, v) in self.edges else (v, u)

    def beats(self, u: int, v: int) -> bool:
        return (u, v) in self.edges


def transitive_tournament(n: int) -> FiniteTournament:
    return FiniteTournament.from_orient(n, lambda u, v: True)


def cyclic_triangle() -> FiniteTournament:
    return FiniteTournament(3, frozenset({(0, 1), (1, 2), (2, 0)}))


def all_tournaments(n: int) -> Iterator[FiniteTournament]:
    m = n * (n - 1) // 2
    for bits in range(1 << m):
        yield FiniteTournament.from_bits(n, bits)


# ---------------------------------------------------------------- components


@dataclass(frozen=True)
class Condensation:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    class_edges: frozenset

    def __len__(self) -> int:
        return len(self.classes)


def _tarjan(d: FiniteDigraph) -> list[list[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    found: list[list[int]] = []
    counter = itertools.count()

    for root in range(d.n):
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(d.out_neighbors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(d.out_neighbors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                found.append(sorted(comp))
    return found


def strong_components(d: FiniteDigraph) -> Condensation:
    """Strong components in topological order, sources first.

    Ties between classes that are free to swap are broken by the smallest
    vertex id of each class, so the result is deterministic.
    """
    comps = _tarjan(d)
    comp_of = [0] * d.n
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    succ: dict[int, set[int]] = {i: set() for i in range(len(comps))}
    indeg = [0] * len(comps)
    for u, v in d.edges:
        a, b = comp_of[u], comp_of[v]
        if a != b and b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    heap = [(comps[i][0], i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (comps[j][0], j))
    rank = {old: new for new, old in enumerate(order)}
    classes = tuple(tuple(comps[i]) for i in order)
    class_of = tuple(rank[comp_of[v]] for v in range(d.n))
    class_edges = frozenset((rank[a], rank[b]) for a in succ for b in succ[a])
    return Condensation(classes, class_of, class_edges)


def condensation_is_total(c: Condensation) -> bool:
    """True iff every two classes are comparable by reachability."""
    k = len(c.classes)
    reach = [1 << i for i in range(k)]
    # classes are topologically sorted, so sweep from sinks backwards
    succ: dict[int, list[int]] = {}
    for a, b in c.class_edges:
        succ.setdefault(a, []).append(b)
    for i in reversed(range(k)):
        for j in succ.get(i, ()):
            reach[i] |= reach[j]
    for i in range(k):
        for j in range(i + 1, k):
            if not (reach[i] >> j & 1 or reach[j] >> i & 1):
                return False
    return True


def is_strongly_connected(d: FiniteDigraph) -> bool:
    return d.n > 0 and len(strong_components(d).classes) == 1


def reachable_from(d: FiniteDigraph, source: int, avoid: Iterable[int] = ()) -> set[int]:
    blocked = set(avoid)
    if source in blocked:
        return set()
    seen = {source}
    todo = [source]
    while todo:
        v = todo.pop()
        for w in d.out_neighbors(v):
            if w not in seen and w not in blocked:
                seen.add(w)
                todo.append(w)
    return seen


# ---------------------------------------------------------------- brute force


def _check_bound(d: FiniteDigraph, bound: int) -> None:
    if d.n > bound:
        raise BoundExceeded(d.n, bound)


def _extend(masks: Sequence[int], path: list[int], used: int, full: int, close_to: Optional[int]):
    if used == full:
        if close_to is None or masks[path[-1]] >> close_to & 1:
            return list(path)
        return None
    free = masks[path[-1]] & ~used
    while free:
        low = free & -free
        w = low.bit_length() - 1
        free ^= low
        path.append(w)
        found = _extend(masks, path, used | low, full, close_to)
        if found is not None:
            return found
        path.pop()
    return None


def brute_force_hamilton_path(
    d: FiniteDigraph, start: Optional[int] = None, bound: int = DEFAULT_BRUTE_FORCE_BOUND
) -> Optional[list[int]]:
    """Exhaustive search; returns the lexicographically first Hamilton path."""
    _check_bound(d, bound)
    if d.n == 0:
        return []
    full = (1 << d.n) - 1
    starts = [start] if start is not None else range(d.n)
    for s in starts:
        found = _extend(d.out_masks, [s], 1 << s, full, None)
        if found is not None:
            return found
    return None


def brute_force_hamilton_cycle(
    d: FiniteDigraph, bound: int = DEFAULT_BRUTE_FORCE_BOUND
) -> Optional[list[int]]:
    """Exhaustive search for a Hamilton cycle, reported starting at vertex 0."""
    _check_bound(d, bound)
    if d.n < 2:
        return None
    full = (1 << d.n) - 1
    return _extend(d.out_masks, [0], 1, full, 0)


# ---------------------------------------------------------------- text format


def parse_digraph(text: str, tournament: bool = False) -> FiniteDigraph:
    """Read ``n`` on the first line and one ``u v`` edge per following line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise DigraphError("empty digraph file")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
    except ValueError as exc:
        raise DigraphError(f"malformed digraph text: {exc}") from None
    if len(set(edges)) != len(edges):
        raise DigraphError("duplicate edge")
    cls = FiniteTournament if tournament else FiniteDigraph
    return cls(n, frozenset(edges))


def format_digraph(d: FiniteDigraph) -> str:
    rows = [str(d.n)] + [f"{u} {v}" for u, v in d.sorted_edges()]
    return "\n".join(rows) + "\n"
