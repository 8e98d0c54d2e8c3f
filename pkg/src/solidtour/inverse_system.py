"""Finite contraction minors D/P_n and the bonding maps between them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core_digraph import FiniteDigraph
from .oracle import OracleInconsistent, Part, TournamentOracle, ValidationReport

# Edge ids: ("e", u, v) for a concrete edge of D, ("q", p1, p2) for the single
# quotient edge standing for an infinite bundle.  Vertex ids are parts.


class LevelMissing(ValueError):
    pass


def is_edge_id(x) -> bool:
    return x[0] in ("e", "q")


@dataclass(frozen=True)
class QuotientDigraph:
    n: int
    vertices: tuple[Part, ...]
    edges: tuple[tuple, ...]
    keys: tuple[str, ...]  # display name per vertex
    owner: dict = field(default_factory=dict, repr=False)  # endpoint of a concrete edge -> part
    _pos: dict = field(default_factory=dict, compare=False, repr=False)
    _between: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._pos.update({p: i for i, p in enumerate(self.vertices)})
        for e in self.edges:
            a, b = self.endpoints(e)
            self._between.setdefault((a, b), []).append(e)

    def endpoints(self, e) -> tuple[Part, Part]:
        if e[0] == "q":
            return e[1], e[2]
        return self.owner[e[1]], self.owner[e[2]]

    def position(self, p: Part) -> int:
        return self._pos[p]

    def edges_between(self, a: Part, b: Part) -> list:
        return self._between.get((a, b), [])

    def simple(self) -> FiniteDigraph:
        """Underlying simple digraph on vertex positions."""
        return FiniteDigraph(
            len(self.vertices),
            frozenset((self._pos[a], self._pos[b]) for a, b in self._between),
        )

    def key(self, p: Part) -> str:
        return self.keys[self._pos[p]]


def build_level(o: TournamentOracle, n: int) -> QuotientDigraph:
    cache = o.__dict__.setdefault("_quotients", {})
    if n not in cache:
        cache[n] = _build_level(o, n)
    return cache[n]


def _build_level(o: TournamentOracle, n: int) -> QuotientDigraph:
    desc = o.level(n)
    parts = desc.parts()
    owner = {}
    edges = []
    pos = {p: i for i, p in enumerate(parts)}
    present = sorted(
        ((pos[a], pos[b]), a, b, bnd) for (a, b), bnd in desc.bundles.items() if bnd
    )
    for _, a, b, bnd in present:
        if bnd.kind == "infinite":
            edges.append(("q", a, b))
        else:
            for u, v in bnd.witnesses:
                owner[u], owner[v] = a, b
                edges.append(("e", u, v))
    joined = {(i, j) if i < j else (j, i) for (i, j), _, _, _ in present}
    if len(joined) < len(parts) * (len(parts) - 1) // 2:
        for a, b in itertools.combinations(parts, 2):
            if (pos[a], pos[b]) not in joined:
                raise OracleInconsistent(f"level {n}: no edge between {a} and {b}")
    for (i, j), a, b, _ in present:
        if i < j and a[0] == "c" and b[0] == "c" and desc.bundle(b, a):
            raise OracleInconsistent(f"level {n}: classes {a} and {b} joined both ways")
    keys = tuple(
        str(o.vertex(p[1])) if p[0] == "v" else desc.classes[p[1]].key for p in parts
    )
    return QuotientDigraph(n, tuple(parts), tuple(edges), keys, owner)


@dataclass(frozen=True)
class BondingMap:
    n: int
    m: int
    vertex_map: dict
    edge_action: Callable[[tuple], tuple] = field(repr=False)

    def __call__(self, x):
        return self.edge_action(x) if is_edge_id(x) else self.vertex_map[x]


def bonding(o: TournamentOracle, n: int, m: int) -> BondingMap:
    """Containment map from D/P_n to D/P_m, with edges sent to edges or vertices."""
    if m > n:
        raise LevelMissing(f"bonding needs m <= n, got n={n}, m={m}")
    cache = o.__dict__.setdefault("_bondings", {})
    if (n, m) not in cache:
        cache[(n, m)] = _bonding(o, n, m)
    return cache[(n, m)]


def _bonding(o: TournamentOracle, n: int, m: int) -> BondingMap:
    hi, lo = o.level(n), o.level(m)
    vmap = {p: lo.part_of(hi.probes(p)[0]) for p in hi.parts()}

    def act(e):
        if e[0] == "q":
            a, b = vmap[e[1]], vmap[e[2]]
            if a == b:
                return a
            if lo.bundle(a, b).kind != "infinite":
                raise OracleInconsistent(f"quotient edge {e} lands on a non-infinite bundle at level {m}")
            return ("q", a, b)
        u, v = e[1], e[2]
        a, b = lo.part_of(u), lo.part_of(v)
        if a == b:
            return a
        bnd = lo.bundle(a, b)
        if bnd.kind == "infinite":
            return ("q", a, b)
        if (u, v) in bnd.witnesses:
            return e
        raise OracleInconsistent(f"edge {(u, v)} is not witnessed between {a} and {b} at level {m}")

    return BondingMap(n, m, vmap, act)


def validate_system(
    o: TournamentOracle,
    depth: int,
    bond: Callable[[TournamentOracle, int, int], BondingMap] = bonding,
) -> ValidationReport:
    """Well-definedness, functoriality, surjectivity and the union property
    of the bonding maps for all ``k <= m <= n <= depth``."""
    report = ValidationReport()
    top = depth if o.size is None else min(depth, o.size)
    maps = {(n, m): bond(o, n, m) for n in range(top + 1) for m in range(n + 1)}
    for n, m in maps:
        f = maps[(n, m)]
        hi, lo = o.level(n), o.level(m)
        for p in hi.parts():
            homes = {lo.part_of(x) for x in hi.probes(p)}
            report.record("well_defined", homes == {f.vertex_map[p]}, n=n, m=m, vertex=list(p))
        report.record("surjective", set(f.vertex_map.values()) == set(lo.parts()), n=n, m=m,
                      missing=sorted(map(list, set(lo.parts()) - set(f.vertex_map.values()))))
        for p in lo.parts():
            for x in lo.probes(p):
                report.record("union", f.vertex_map[hi.part_of(x)] == p, n=n, m=m,
                              vertex=list(p), member=x)
        if n == m:
            report.record("identity", all(f.vertex_map[p] == p for p in hi.parts()), n=n, m=m)
    for n in range(top + 1):
        for m in range(n + 1):
            for k in range(m + 1):
                f, g, h = maps[(n, m)], maps[(m, k)], maps[(n, k)]
                bad = [p for p in f.vertex_map if g.vertex_map[f.vertex_map[p]] != h.vertex_map[p]]
                report.record("functorial", not bad, n=n, m=m, k=k,
                              vertex=list(bad[0]) if bad else None)
    return report


def to_dot(q: QuotientDigraph, highlight: Optional[list] = None) -> str:
    """Graphviz rendering: classes as boxes, quotient edges dashed."""
    chosen = set(highlight or ())
    lines = [f'digraph "level{q.n}" {{']
    for i, p in enumerate(q.vertices):
        shape = "box" if p[0] == "c" else "ellipse"
        lines.append(f'  p{i} [label="{q.keys[i]}", shape={shape}];')
    for e in q.edges:
        a, b = q.endpoints(e)
        attrs = ["style=dashed"] if e[0] == "q" else []
        if e in chosen:
            attrs.append("penwidth=3")
        tail = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  p{q.position(a)} -> p{q.position(b)}{tail};")
    lines.append("}")
    return "\n".join(lines) + "\n"
