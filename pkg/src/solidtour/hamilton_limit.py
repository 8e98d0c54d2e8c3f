"""Compatible families of Hamilton paths and circles of the contraction minors.

A topological Hamilton path of a solid tournament is represented by its
shadows ``W_n`` in the finite minors ``D/P_n``: for each level the normal
order of the induced arborescence, a chosen edge for every step, and a
nested family of parameter intervals.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arborescence import (
    Arborescence,
    NotNormal,
    camion_cycle,
    normal_order,
)
from .core_digraph import DigraphError, FiniteDigraph, reachable_from, strong_components
from .endspace import (
    EndThread,
    LimitEdgeWitness,
    detect_limit_edge,
    end_threads,
    extremal_ends,
)
from .inverse_system import QuotientDigraph, bonding, build_level, is_edge_id
from .oracle import BinaryTreeOracle, OracleInconsistent, Part, TournamentOracle, truncate
from .arborescence import redei_path


class NotDownClosable(ValueError):
    pass


class NoCompatibleChoice(RuntimeError):
    def __init__(self, level: int, step: int):
        super().__init__(f"no edge for step {step} of the top level {level} maps consistently to all lower levels")
        self.level = level
        self.step = step


class IncompatibleLevels(RuntimeError):
    pass


class SpineFailure(RuntimeError):
    def __init__(self, message: str, vertex=None, level: Optional[int] = None):
        super().__init__(message)
        self.vertex = vertex
        self.level = level


class LinkFailure(RuntimeError):
    def __init__(self, pair):
        super().__init__(f"cannot link {pair[0]} to {pair[1]}")
        self.pair = pair


class CircleFailure(RuntimeError):
    pass


class NotStronglyConnected(DigraphError):
    pass


# ---------------------------------------------------------------- levels


def down_closed_exhaustion(o: TournamentOracle, depth: int) -> list[int]:
    """Levels ``1 <= n <= depth`` whose prefix ``X_n`` is down-closed in the
    declared arborescence."""
    top = depth if o.size is None else min(depth, o.size)
    root = o.tree_root
    out = []
    for n in range(1, top + 1):
        if root >= n:
            continue
        if all(v == root or o.tree_parent(v) < n for v in range(n)):
            out.append(n)
    if not out:
        raise NotDownClosable(f"no prefix up to {depth} is down-closed")
    # later levels must keep growing towards the whole enumeration
    if o.size is not None and out[-1] != o.size and depth >= o.size:
        raise NotDownClosable("the full vertex set is not reached")
    return out


@dataclass(frozen=True)
class InducedTree:
    n: int
    quotient: QuotientDigraph
    tree: Arborescence  # over vertex positions of the quotient
    tree_edges: dict  # child part -> edge id
    order: tuple  # normal order as vertex positions


def induced_arborescence(o: TournamentOracle, n: int) -> InducedTree:
    """The declared arborescence restricted to ``X_n`` plus one entry edge per class."""
    q = build_level(o, n)
    desc = o.level(n)
    root = o.tree_root
    if root >= n:
        raise NotDownClosable(f"root not in X_{n}")
    parent: dict[int, int] = {}
    chosen = {}

    def link(p_part: Part, c_part: Part, u: int, v: int):
        bnd = desc.bundle(p_part, c_part)
        if bnd.kind == "infinite":
            e = ("q", p_part, c_part)
        elif (u, v) in bnd.witnesses:
            e = ("e", u, v)
        else:
            raise NotNormal(f"tree edge ({u},{v}) missing from the level-{n} bundle")
        parent[q.position(c_part)] = q.position(p_part)
        chosen[c_part] = e

    for v in range(n):
        if v == root:
            continue
        p = o.tree_parent(v)
        if p is None or p >= n:
            raise NotDownClosable(f"X_{n} is not down-closed at {o.vertex(v)}")
        link(("v", p), ("v", v), p, v)
    for j, c in enumerate(desc.classes):
        if len(c.entries) != 1:
            raise NotNormal(f"class {c.key} at level {n} has {len(c.entries)} tree entry points")
        e = c.entries[0]
        p = o.tree_parent(e)
        if p is None:
            raise NotNormal(f"class {c.key} at level {n} contains the root")
        link(desc.part_of(p), ("c", j), p, e)
    tree = Arborescence.from_parent(q.position(("v", root)), parent)
    try:
        order = normal_order(q.simple(), tree).seq
    except NotNormal:
        raise NotNormal(f"induced arborescence at level {n} is not normal") from None
    return InducedTree(n, q, tree, chosen, order)


def level_hamilton_path(o: TournamentOracle, n: int) -> list[Part]:
    """Normal order of the induced arborescence; a Hamilton path of D/P_n."""
    it = induced_arborescence(o, n)
    q = it.quotient
    seq = [q.vertices[i] for i in it.order]
    for a, b in zip(seq, seq[1:]):
        if not q.edges_between(a, b):
            raise OracleInconsistent(f"level {n}: no edge from {a} to {b}")
    return seq


def collapse(seq, vmap, cyclic: bool = False) -> list:
    out = []
    for x in seq:
        y = vmap[x]
        if not out or out[-1] != y:
            out.append(y)
    if cyclic and len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


# ---------------------------------------------------------------- path approximants


@dataclass
class PathApproximant:
    levels: tuple[int, ...]
    sequences: dict  # n -> tuple of parts
    edges: dict  # n -> tuple of edge ids, one per step
    root: int
    quotients: dict = field(default_factory=dict, repr=False)
    certificates: dict = field(default_factory=dict)

    @property
    def top(self) -> int:
        return self.levels[-1]


def reconcile_edge_choices(o: TournamentOracle, levels, sequences: dict) -> PathApproximant:
    """Choose an edge for every step of the top level so that its image at
    every lower level is an edge of that level joining the right items, and
    read off the lower choices as images."""
    levels = tuple(sorted(levels))
    top = levels[-1]
    quotients = {n: build_level(o, n) for n in levels}
    maps = {m: bonding(o, top, m) for m in levels}
    W = list(sequences[top])
    step_index = {}
    for m in levels:
        got = collapse(W, maps[m].vertex_map)
        if got != list(sequences[m]):
            raise IncompatibleLevels(f"level {top} does not collapse onto level {m}")
        j = -1
        idx = []
        for a, b in zip(W, W[1:]):
            if maps[m].vertex_map[a] != maps[m].vertex_map[b]:
                j += 1
                idx.append(j)
            else:
                idx.append(None)
        step_index[m] = idx
    chosen_top = []
    for i, (a, b) in enumerate(zip(W, W[1:])):
        for e in quotients[top].edges_between(a, b):
            if all(_maps_well(maps[m], quotients[m], sequences[m], step_index[m][i], e) for m in levels):
                chosen_top.append(e)
                break
        else:
            raise NoCompatibleChoice(top, i)
    edges = {}
    for m in levels:
        edges[m] = tuple(
            maps[m].edge_action(e) for i, e in enumerate(chosen_top) if step_index[m][i] is not None
        )
    return PathApproximant(
        levels, {n: tuple(sequences[n]) for n in levels}, edges, o.tree_root, quotients
    )


def _maps_well(f, q: QuotientDigraph, seq, j: Optional[int], e) -> bool:
    try:
        img = f.edge_action(e)
    except OracleInconsistent:
        return False
    if j is None:
        return not is_edge_id(img)
    return is_edge_id(img) and img in q.edges_between(seq[j], seq[j + 1])


# ---------------------------------------------------------------- parameterization


@dataclass
class Parameterization:
    levels: tuple[int, ...]
    intervals: dict  # n -> list of (item, lo, hi, kind)

    def as_dict(self) -> dict:
        return {
            str(n): [[kind, str(lo), str(hi)] for _, lo, hi, kind in self.intervals[n]]
            for n in self.levels
        }


def _items(seq, edges) -> list:
    out = [seq[0]]
    for e, v in zip(edges, seq[1:]):
        out.extend([e, v])
    return out


def _kind(x) -> str:
    if is_edge_id(x):
        return "open"
    return "point" if x[0] == "v" else "closed"


def parameterize(o: TournamentOracle, p: PathApproximant) -> Parameterization:
    """Nested interval layout of every level on [0, 1].

    Each class interval is refined at the next level by laying out the
    block of items that collapse onto it; classes get an equal share capped
    at ``1/l`` (``l`` the last level at which the class survives unsplit) or
    zero if it later turns into a single vertex, and edges share the rest.
    """
    levels = p.levels
    items = {n: _items(p.sequences[n], p.edges[n]) for n in levels}
    blocks = {}
    for a, b in zip(levels, levels[1:]):
        f = bonding(o, b, a)
        blocks[a] = _blocks(items[b], f)

    def cap(i: int, part: Part) -> Fraction:
        n = levels[i]
        while i + 1 < len(levels):
            blk = blocks[n][part]
            if len(blk) != 1:
                return Fraction(1, n)
            nxt = blk[0]
            if nxt[0] == "v":
                return Fraction(0)
            i += 1
            n, part = levels[i], nxt
        return Fraction(1, n)

    def lay(seq_items, lo, hi, i) -> list:
        if len(seq_items) == 1:
            x = seq_items[0]
            if _kind(x) == "point" and lo != hi:
                raise OracleInconsistent(f"vertex {x} would fill a positive interval")
            return [(x, lo, hi, _kind(x))]
        caps = {x: cap(i, x) for x in seq_items if _kind(x) == "closed"}
        wide = [x for x in seq_items if _kind(x) == "open" or (x in caps and caps[x] > 0)]
        share = (hi - lo) / len(wide)
        sizes = {x: min(caps[x], share) for x in caps}
        n_edges = sum(1 for x in seq_items if _kind(x) == "open")
        edge_len = (hi - lo - sum(sizes.values())) / n_edges
        out, at = [], lo
        for x in seq_items:
            k = _kind(x)
            size = 0 if k == "point" else edge_len if k == "open" else sizes[x]
            out.append((x, at, at + size, k))
            at += size
        assert at == hi
        return out

    if items[levels[0]] == [p.sequences[levels[0]][0]] and _kind(items[levels[0]][0]) == "point":
        # a single vertex: the path is constant
        x = items[levels[0]][0]
        return Parameterization(levels, {n: [(x, Fraction(0), Fraction(1), "constant")] for n in levels})
    intervals = {levels[0]: lay(items[levels[0]], Fraction(0), Fraction(1), 0)}
    for i in range(1, len(levels)):
        prev, n = levels[i - 1], levels[i]
        out = []
        for x, lo, hi, k in intervals[prev]:
            blk = blocks[prev][x]
            if k == "open":
                out.append((blk[0], lo, hi, "open"))
            else:
                out.extend(lay(blk, lo, hi, i))
        intervals[n] = out
    return Parameterization(levels, intervals)


def _blocks(hi_items, f) -> dict:
    """Group the items of a finer level by their image at the coarser level."""
    out: dict = {}
    for x in hi_items:
        img = f(x)
        out.setdefault(img, []).append(x)
    return out


def check_parameterization(o: TournamentOracle, p: PathApproximant, par: Parameterization) -> list:
    failures = []
    for n in par.levels:
        ivs = par.intervals[n]
        bound = Fraction(1, n)
        if ivs[0][1] != 0 or ivs[-1][2] != 1:
            failures.append({"level": n, "check": "covers_unit_interval"})
        for (x, lo, hi, k), nxt in itertools.zip_longest(ivs, ivs[1:]):
            if k == "constant" and len(ivs) != 1:
                failures.append({"level": n, "check": "shape", "item": repr(x)})
            if hi < lo or (k == "point" and lo != hi) or (k == "open" and not lo < hi):
                failures.append({"level": n, "check": "shape", "item": repr(x)})
            if k == "closed" and hi - lo > bound:
                failures.append({"level": n, "check": "class_length", "item": repr(x)})
            if nxt is not None and nxt[1] != hi:
                failures.append({"level": n, "check": "adjacent", "item": repr(x)})
    for a, b in zip(par.levels, par.levels[1:]):
        f = bonding(o, b, a)
        spans = {x: (lo, hi) for x, lo, hi, _ in par.intervals[a]}
        for x, lo, hi, _ in par.intervals[b]:
            plo, phi = spans[f(x)]
            if not (plo <= lo and hi <= phi):
                failures.append({"level": b, "check": "nesting", "item": repr(x)})
    return failures


# ---------------------------------------------------------------- pipeline


def tree_restriction(o: TournamentOracle, n: int) -> Arborescence:
    root = o.tree_root
    return Arborescence.from_parent(root, {v: o.tree_parent(v) for v in range(n) if v != root})


def order_certificate(o: TournamentOracle, p: PathApproximant) -> dict:
    """Compare the top level's vertex order with the normal order of the
    declared arborescence on the truncation to ``X_N``."""
    n = p.top
    got = [x[1] for x in p.sequences[n] if x[0] == "v"]
    want = list(normal_order(truncate(o, n), tree_restriction(o, n)).seq)
    return {"level": n, "ok": got == want, "path_order": got, "normal_order": want}


def binary_tree_closed_form(n: int) -> list[str]:
    """Expected top-level keys for the binary tree: each vertex, then its
    right subtree, then its left subtree; missing vertices become classes."""
    from .oracle import _bt_index

    out = []

    def visit(w: str):
        if _bt_index(w) < n:
            out.append(w)
            visit(w + "1")
            visit(w + "0")
        else:
            out.append("↑" + (w or "ε"))

    visit("")
    return out


def validate_path_approximant(o: TournamentOracle, p: PathApproximant) -> list:
    """Per-level Hamiltonicity, edge endpoints and bonding compatibility."""
    failures = []
    for n in p.levels:
        q = p.quotients.get(n) or build_level(o, n)
        seq, es = list(p.sequences[n]), list(p.edges[n])
        if sorted(seq) != sorted(q.vertices) or len(set(seq)) != len(seq):
            failures.append({"level": n, "check": "hamiltonian"})
        if len(es) != len(seq) - 1:
            failures.append({"level": n, "check": "edge_count"})
        for i, (a, b) in enumerate(zip(seq, seq[1:])):
            if i < len(es) and es[i] not in q.edges_between(a, b):
                failures.append({"level": n, "check": "edge", "step": i})
    for a, b in itertools.combinations(p.levels, 2):
        f = bonding(o, b, a)
        if collapse(p.sequences[b], f.vertex_map) != list(p.sequences[a]):
            failures.append({"level": b, "onto": a, "check": "compatible"})
        imgs = [f(e) for e in p.edges[b]]
        if [x for x in imgs if is_edge_id(x)] != list(p.edges[a]):
            failures.append({"level": b, "onto": a, "check": "edge_images"})
    return failures


def _root_reaches(o: TournamentOracle, n: int) -> bool:
    h = n if o.size is not None else max(2 * n + 2, 8)
    t = truncate(o, h)
    return set(range(min(n, t.n))) <= reachable_from(t, o.tree_root)


def hamilton_path_approximants(o: TournamentOracle, depth: int) -> PathApproximant:
    """Exhaustion, induced arborescences, level paths, edge reconciliation
    and parameterization, with an order certificate for the top level."""
    levels = down_closed_exhaustion(o, depth)
    if not _root_reaches(o, levels[-1]):
        raise DigraphError("root does not reach every vertex of the truncation")
    seqs = {n: level_hamilton_path(o, n) for n in levels}
    p = reconcile_edge_choices(o, levels, seqs)
    par = parameterize(o, p)
    p.certificates["parameterization"] = par
    p.certificates["parameterization_failures"] = check_parameterization(o, p, par)
    p.certificates["order"] = order_certificate(o, p)
    if isinstance(o, BinaryTreeOracle):
        q = p.quotients[p.top]
        keys = [q.key(x) for x in p.sequences[p.top]]
        p.certificates["closed_form"] = {"ok": keys == binary_tree_closed_form(p.top)}
    return p


# ---------------------------------------------------------------- circles


@dataclass
class CircleApproximant:
    levels: tuple[int, ...]
    sequences: dict  # n -> cyclic tuple of parts, root first
    edges: dict  # n -> tuple; edge i joins item i to item i+1 (cyclically)
    placeholders: dict  # "source->target" -> LimitEdgeWitness
    case: str
    certificates: dict = field(default_factory=dict)


@dataclass
class DoubleRaySpine:
    center: tuple[int, ...]
    horizon: int
    least: EndThread
    greatest: EndThread
    forward_cert: dict  # n -> first index of the tail inside the least end's class
    backward_cert: dict  # n -> last index of the head inside the greatest end's class
    inserted: tuple  # (vertex, position) in insertion order
    remaining: tuple[int, ...]


def _horizon(o: TournamentOracle, depth: int) -> int:
    return max(3 * depth, depth + 12)


def _require_strong(o: TournamentOracle) -> None:
    if not o.strongly_connected:
        raise NotStronglyConnected("tournament is not strongly connected")


def double_ray_spine(o: TournamentOracle, depth: int, insert: bool = True) -> DoubleRaySpine:
    """A two-way path through a truncation whose head lies in the greatest
    end's class and whose tail lies in the least end's class, with leftover
    vertices inserted between consecutive spine vertices where possible."""
    _require_strong(o)
    if o.size is not None or len(end_threads(o, depth)) < 2:
        raise SpineFailure("a double ray spine needs at least two ends")
    least, greatest = extremal_ends(o, depth)
    h = _horizon(o, depth)
    d = truncate(o, h)
    top = o.level(depth)

    def members(thread):
        return [v for v in range(depth, h) if top.part_of(v) == thread.parts[depth]]

    fwd_end = max(members(least))
    forward = tree_restriction_path(o, fwd_end)
    back_start = max(members(greatest))
    backward = _bfs_path(d, back_start, forward[0], avoid=set(forward[1:]))
    if backward is None:
        raise SpineFailure("no path back from the greatest end", vertex=back_start)
    center = backward[:-1] + forward
    inserted = []
    progress = insert
    while progress:
        progress = False
        on = set(center)
        for v in range(h):
            if v in on:
                continue
            for i in range(len(center) - 1):
                if d.has_edge(center[i], v) and d.has_edge(v, center[i + 1]):
                    center.insert(i + 1, v)
                    inserted.append((v, i + 1))
                    on.add(v)
                    progress = True
                    break
    fwd_cert, back_cert = {}, {}
    for n in range(depth + 1):
        desc = o.level(n)
        parts = [desc.part_of(v) for v in center]
        i = len(parts)
        while i > 0 and parts[i - 1] == least.parts[n]:
            i -= 1
        if i == len(parts):
            raise SpineFailure("spine tail leaves the least end", vertex=center[-1], level=n)
        j = -1
        while j + 1 < len(parts) and parts[j + 1] == greatest.parts[n]:
            j += 1
        if j < 0:
            raise SpineFailure("spine head leaves the greatest end", vertex=center[0], level=n)
        fwd_cert[n], back_cert[n] = i, j
    remaining = tuple(v for v in range(h) if v not in set(center))
    return DoubleRaySpine(tuple(center), h, least, greatest, fwd_cert, back_cert,
                          tuple(inserted), remaining)


def tree_restriction_path(o: TournamentOracle, v: int) -> list[int]:
    path = [v]
    while path[-1] != o.tree_root:
        path.append(o.tree_parent(path[-1]))
    return path[::-1]


def _bfs_path(d: FiniteDigraph, s: int, t: int, avoid=frozenset()) -> Optional[list[int]]:
    prev = {s: None}
    todo = deque([s])
    while todo:
        v = todo.popleft()
        if v == t:
            out = [v]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        for w in d.out_neighbors(v):
            if w not in prev and w not in avoid:
                prev[w] = v
                todo.append(w)
    return None


@dataclass
class ComponentLinks:
    components: tuple  # each a Hamilton path (vertex indices) of one component
    links: tuple  # LimitEdgeWitness or concrete edge per hookup, in order

    @property
    def empty(self) -> bool:
        return not self.components


def link_components_path(o: TournamentOracle, spine: DoubleRaySpine, depth: int) -> ComponentLinks:
    """Hamilton paths of the components left over by the spine, linked in
    their condensation order from the least end to the greatest."""
    d = truncate(o, spine.horizon)
    rest = list(spine.remaining)
    if not rest:
        w = detect_limit_edge(o, spine.least, spine.greatest, depth)
        if not w.witnessed:
            raise LinkFailure((spine.least.label, spine.greatest.label))
        return ComponentLinks((), (w,))
    sub = d.induced(rest)
    comps = []
    for cls in strong_components(sub).classes:
        verts = [rest[i] for i in cls]
        inner = d.induced(verts)
        comps.append(tuple(verts[i] for i in redei_path(inner)))
    links = []
    first = detect_limit_edge(o, spine.least, comps[0][0], depth)
    if not first.witnessed:
        raise LinkFailure((spine.least.label, o.vertex(comps[0][0])))
    links.append(first)
    for a, b in zip(comps, comps[1:]):
        if not d.has_edge(a[-1], b[0]):
            raise LinkFailure((o.vertex(a[-1]), o.vertex(b[0])))
        links.append((a[-1], b[0]))
    last = detect_limit_edge(o, comps[-1][-1], spine.greatest, depth)
    if not last.witnessed:
        raise LinkFailure((o.vertex(comps[-1][-1]), spine.greatest.label))
    links.append(last)
    return ComponentLinks(tuple(comps), tuple(links))


def _spine_shadow(o: TournamentOracle, spine: DoubleRaySpine, links: ComponentLinks, depth: int):
    """Cyclic orders induced on each level by the spine and the linked
    components; returns the first level where the shadow is not Hamilton."""
    order = list(spine.center) + [v for c in links.components for v in c]
    for n in range(1, depth + 1):
        desc = o.level(n)
        vmap = {v: desc.part_of(v) for v in order}
        shadow = collapse(order, vmap, cyclic=True)
        if len(set(shadow)) != len(shadow) or set(shadow) != set(desc.parts()):
            return n
    return None


SEARCH_LIMIT = 200_000


def _cycle_edges(o: TournamentOracle, levels, cycle, quotients, maps) -> Optional[dict]:
    """Edge choice for a top-level cyclic sequence whose images are edges of
    every lower level's collapsed cycle; ``None`` if some step has none."""
    top = levels[-1]
    k = len(cycle)
    steps = [(cycle[i], cycle[(i + 1) % k]) for i in range(k)]
    shadows, index = {}, {}
    for m in levels:
        vmap = maps[m].vertex_map
        # start where the image changes so that no class wraps around
        r = next((i for i in range(k) if vmap[cycle[i]] != vmap[cycle[i - 1]]), 0)
        shadows[m] = collapse([cycle[(r + t) % k] for t in range(k)], vmap)
        pos, j = {}, 0
        for t in range(k):
            i = (r + t) % k
            a, b = steps[i]
            if vmap[a] != vmap[b]:
                pos[i] = j
                j += 1
        index[m] = pos
    chosen = []
    for i, (a, b) in enumerate(steps):
        for e in quotients[top].edges_between(a, b):
            ok = True
            for m in levels:
                j = index[m].get(i)
                sh = shadows[m]
                seq = (sh[j], sh[(j + 1) % len(sh)]) if j is not None else None
                if not _maps_well(maps[m], quotients[m], seq, 0 if seq else None, e):
                    ok = False
                    break
            if ok:
                chosen.append(e)
                break
        else:
            return None
    out = {}
    for m in levels:
        imgs = {index[m][i]: maps[m].edge_action(e) for i, e in enumerate(chosen) if i in index[m]}
        out[m] = tuple(imgs[j] for j in range(len(imgs)))
    return {"edges": out, "shadows": shadows}


def _placeholders(o: TournamentOracle, levels, cycle, edges, depth: int) -> Optional[dict]:
    """Limit-edge witnesses for every top-level quotient edge leaving a class
    that holds a single end; ``None`` if one of them is refuted."""
    top = levels[-1]
    desc = o.level(top)
    threads = {t.parts[top]: t for t in end_threads(o, top)}
    out = {}
    k = len(cycle)
    for i, e in enumerate(edges[top]):
        a, b = cycle[i], cycle[(i + 1) % k]
        if e[0] != "q" or a not in threads:
            continue
        target = threads.get(b) if b[0] == "c" else b[1]
        if target is None:
            continue
        w = detect_limit_edge(o, threads[a], target, top)
        if not w.witnessed:
            return None
        out[f"{w.source}->{w.target}"] = (i, w)
    return out


def _rotate_to(seq, first):
    i = seq.index(first)
    return list(seq[i:]) + list(seq[:i])


def _try_cycle(o, levels, cycle, quotients, maps, depth):
    got = _cycle_edges(o, levels, cycle, quotients, maps)
    if got is None:
        return None
    for m in levels:
        if sorted(got["shadows"][m]) != sorted(quotients[m].vertices):
            return None
    ph = _placeholders(o, levels, cycle, got["edges"], depth)
    if ph is None:
        return None
    root = ("v", o.tree_root)
    seqs = {m: tuple(_rotate_to(got["shadows"][m], maps[m].vertex_map[root])) for m in levels}
    edges = {}
    for m in levels:
        sh = got["shadows"][m]
        r = sh.index(seqs[m][0])
        es = list(got["edges"][m])
        edges[m] = tuple(es[r:] + es[:r])
    return seqs, edges, ph


def _search_cycles(o, levels, quotients, maps):
    """Top-level Hamilton cycles from the root whose partial collapses never
    revisit a part at any lower level, in lexicographic part order."""
    top = levels[-1]
    q = quotients[top]
    root = ("v", o.tree_root)
    parts = sorted(q.vertices)
    lows = [m for m in levels if m != top]
    budget = [SEARCH_LIMIT]

    def extend(seq, seen, shadows):
        budget[0] -= 1
        if budget[0] < 0:
            raise CircleFailure("cycle search limit reached")
        if len(seq) == len(parts):
            if q.edges_between(seq[-1], root):
                yield list(seq)
            return
        for x in parts:
            if x in seen or not q.edges_between(seq[-1], x):
                continue
            new = []
            ok = True
            for m, sh in zip(lows, shadows):
                y = maps[m].vertex_map[x]
                if y != sh[-1]:
                    if y in sh:
                        ok = False
                        break
                    new.append(sh + [y])
                else:
                    new.append(sh)
            if not ok:
                continue
            seq.append(x)
            seen.add(x)
            yield from extend(seq, seen, new)
            seq.pop()
            seen.discard(x)

    start = [[maps[m].vertex_map[root]] for m in lows]
    yield from extend([root], {root}, start)


def hamilton_circle_approximants(o: TournamentOracle, depth: int) -> CircleApproximant:
    """Hamilton circle shadows of a strongly connected solid tournament.

    Finite tournaments get a Camion cycle.  With ends, the level Hamilton
    paths are closed back to the root when every level allows it; otherwise
    a top-level Hamilton cycle is searched whose collapse is a Hamilton cycle
    at every lower level.  Quotient edges leaving a class with a single end
    carry limit-edge witnesses, which must all hold.
    """
    _require_strong(o)
    if o.size is not None:
        t = o.t
        cyc = camion_cycle(t)
        seq = tuple(("v", o.index(v)) for v in cyc)
        edges = tuple(("e", seq[i][1], seq[(i + 1) % len(seq)][1]) for i in range(len(seq)))
        return CircleApproximant((t.n,), {t.n: seq}, {t.n: edges}, {}, "finite")
    ends = end_threads(o, depth)
    certs: dict = {}
    if len(ends) == 1:
        flags = [o.degree_flags(v) for v in range(depth)]
        case = "one_end_finite_degree" if any(a or b for a, b in flags) else "one_end"
    else:
        case = "multi_end"
        if o.end_count is not None:
            try:
                spine = double_ray_spine(o, depth)
                links = link_components_path(o, spine, depth)
                certs.update(spine=spine, links=links,
                             spine_shadow_rejected_at=_spine_shadow(o, spine, links, depth))
            except (SpineFailure, LinkFailure) as exc:
                certs["spine_error"] = str(exc)
    p = hamilton_path_approximants(o, depth)
    levels = p.levels
    quotients = p.quotients
    maps = {m: bonding(o, p.top, m) for m in levels}
    got = _try_cycle(o, levels, list(p.sequences[p.top]), quotients, maps, depth)
    certs["construction"] = "closed_path"
    if got is None:
        certs["construction"] = "search"
        for cyc in _search_cycles(o, levels, quotients, maps):
            got = _try_cycle(o, levels, cyc, quotients, maps, depth)
            if got is not None:
                break
    if got is None:
        raise CircleFailure("no compatible Hamilton cycle family")
    seqs, edges, ph = got
    c = CircleApproximant(levels, seqs, edges, {k: w for k, (_, w) in ph.items()}, case, certs)
    c.certificates["limit_steps"] = {k: i for k, (i, _) in ph.items()}
    return c


def validate_circle_approximant(o: TournamentOracle, c: CircleApproximant) -> list:
    """Per-level Hamiltonicity, edges, cyclic compatibility, and witnessed
    placeholders for every quotient edge leaving a single-end class."""
    failures = []
    for n in c.levels:
        q = build_level(o, n)
        seq, es = list(c.sequences[n]), list(c.edges[n])
        if sorted(seq) != sorted(q.vertices) or len(set(seq)) != len(seq):
            failures.append({"level": n, "check": "hamiltonian"})
        if len(es) != len(seq):
            failures.append({"level": n, "check": "edge_count"})
            continue
        for i, e in enumerate(es):
            a, b = seq[i], seq[(i + 1) % len(seq)]
            if o.size is not None and len(c.levels) == 1:
                ok = e == ("e", a[1], b[1]) and o.beats(a[1], b[1])
            else:
                ok = e in q.edges_between(a, b)
            if not ok:
                failures.append({"level": n, "check": "edge", "step": i})
    for w in c.placeholders.values():
        if not w.witnessed:
            failures.append({"check": "placeholder", "limit_edge": f"{w.source}->{w.target}"})
    if c.case != "finite":
        top = c.levels[-1]
        threads = {t.parts[top]: t.label for t in end_threads(o, top)}
        seq = c.sequences[top]
        names = {(w.source, w.target) for w in c.placeholders.values()}
        for i, e in enumerate(c.edges[top]):
            a, b = seq[i], seq[(i + 1) % len(seq)]
            if e[0] == "q" and a in threads:
                tgt = threads.get(b) if b[0] == "c" else str(o.vertex(b[1]))
                if tgt is not None and (threads[a], tgt) not in names:
                    failures.append({"check": "placeholder_missing", "step": i})
    for a, b in itertools.combinations(c.levels, 2):
        f = bonding(o, b, a)
        got = collapse(c.sequences[b], f.vertex_map, cyclic=True)
        want = list(c.sequences[a])
        if not got or _rotate_to(got, want[0]) != want:
            failures.append({"level": b, "onto": a, "check": "cyclic_compatible"})
        imgs = [f(e) for e in c.edges[b]]
        imgs = [x for x in imgs if is_edge_id(x)]
        if sorted(imgs) != sorted(c.edges[a]):
            failures.append({"level": b, "onto": a, "check": "edge_images"})
    return failures


# ---------------------------------------------------------------- output


def _edge_name(o: TournamentOracle, q: Optional[QuotientDigraph], e) -> str:
    if e[0] == "e":
        return f"{o.vertex(e[1])}->{o.vertex(e[2])}"
    if e[0] == "q":
        return f"{q.key(e[1])}=>{q.key(e[2])}"
    return f"{e[1]}~>{o.vertex(e[2])}"


def approximant_json(o: TournamentOracle, p) -> dict:
    levels = []
    for n in p.levels:
        q = build_level(o, n)
        levels.append({
            "n": n,
            "sequence": [q.key(x) for x in p.sequences[n]],
            "edges": [_edge_name(o, q, e) for e in p.edges[n]],
        })
    certs = {}
    for k, v in p.certificates.items():
        if isinstance(v, Parameterization):
            certs[k] = v.as_dict()
        elif isinstance(v, (PathApproximant, DoubleRaySpine, ComponentLinks)):
            certs[k] = _describe(o, v)
        else:
            certs[k] = v
    out = {"root": str(o.vertex(getattr(p, "root", 0))) if hasattr(p, "root") else None,
           "levels": levels, "certificates": certs}
    if isinstance(p, CircleApproximant):
        out.pop("root")
        out["case"] = p.case
        out["placeholders"] = {k: w.as_dict(o) for k, w in p.placeholders.items()}
    return out


def _describe(o: TournamentOracle, v) -> object:
    if isinstance(v, PathApproximant):
        return {"levels": list(v.levels)}
    if isinstance(v, DoubleRaySpine):
        return {
            "center": [str(o.vertex(x)) for x in v.center],
            "least": v.least.label,
            "greatest": v.greatest.label,
            "inserted": [str(o.vertex(x)) for x, _ in v.inserted],
            "remaining": [str(o.vertex(x)) for x in v.remaining],
        }
    return {
        "components": [[str(o.vertex(x)) for x in c] for c in v.components],
        "links": [w.status if isinstance(w, LimitEdgeWitness) else "edge" for w in v.links],
    }


def approximant_dot(o: TournamentOracle, p, n: int) -> str:
    from .inverse_system import to_dot

    return to_dot(build_level(o, n), highlight=[e for e in p.edges[n] if e[0] != "limit"])
