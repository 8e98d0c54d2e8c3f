"""Lazy countable tournaments.

An oracle enumerates vertices (internally by their enumeration index),
orients every pair, and describes for each ``n`` the partition of the
remainder ``D - X_n`` into strong components, where ``X_n`` is the set of
the first ``n`` vertices.  The built-in generators compute that partition
exactly from their closed-form structure.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .core_digraph import (
    FiniteDigraph,
    FiniteTournament,
    is_strongly_connected,
    parse_digraph,
    reachable_from,
    strong_components,
)
from .arborescence import dfs_arborescence, default_start

PROBE_SIZE = 6

Part = tuple  # ("v", index) for a singleton of X_n, ("c", j) for the j-th class


class BadSpec(ValueError):
    pass


class OracleInconsistent(RuntimeError):
    pass


@dataclass(frozen=True)
class Bundle:
    """Edges from one part to another.

    ``finite`` bundles list every concrete edge; ``infinite`` ones keep a
    single sample edge as evidence.
    """

    kind: str
    witnesses: tuple = ()
    sample: Optional[tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.kind != "none"


NO_BUNDLE = Bundle("none")


@dataclass(frozen=True)
class ClassInfo:
    key: str
    probes: tuple[int, ...]
    infinite: bool
    ends: tuple[str, ...]
    entries: tuple[int, ...]
    contains: Callable[[int], bool] = field(compare=False, repr=False)
    members: Optional[frozenset] = None  # set only for finite classes


@dataclass(frozen=True)
class LevelDescriptor:
    n: int
    classes: tuple[ClassInfo, ...]  # condensation order, sources first
    bundles: Mapping[tuple[Part, Part], Bundle] = field(repr=False)
    lookup: Optional[dict] = field(default=None, compare=False, repr=False)  # vertex -> part, finite levels


    @property
    def singletons(self) -> range:
        return range(self.n)

    def parts(self) -> list[Part]:
        return [("v", k) for k in range(self.n)] + [("c", j) for j in range(len(self.classes))]

    def part_of(self, v: int) -> Part:
        if v < self.n:
            return ("v", v)
        if self.lookup is not None and v in self.lookup:
            return self.lookup[v]
        for j, c in enumerate(self.classes):
            if c.contains(v):
                return ("c", j)
        raise OracleInconsistent(f"vertex {v} lies in no class at level {self.n}")

    def bundle(self, a: Part, b: Part) -> Bundle:
        return self.bundles.get((a, b), NO_BUNDLE)

    def class_info(self, part: Part) -> ClassInfo:
        return self.classes[part[1]]

    def probes(self, part: Part) -> tuple[int, ...]:
        return (part[1],) if part[0] == "v" else self.classes[part[1]].probes


class TournamentOracle:
    """Base class; subclasses fill in orientation and level structure."""

    name = "oracle"
    end_count: Optional[int] = None
    strongly_connected = False
    size: Optional[int] = None  # finite oracles only

    def __init__(self) -> None:
        self._levels: dict[int, LevelDescriptor] = {}

    # -- enumeration
    def vertex(self, k: int) -> Hashable:
        raise NotImplementedError

    def index(self, label: Hashable) -> int:
        raise NotImplementedError

    def beats(self, u: int, v: int) -> bool:
        raise NotImplementedError

    def orient(self, u: int, v: int) -> tuple[int, int]:
        if u == v:
            raise ValueError("orient needs distinct vertices")
        return (u, v) if self.beats(u, v) else (v, u)

    def degree_flags(self, v: int) -> tuple[bool, bool]:
        raise NotImplementedError

    def class_bound(self, n: int) -> int:
        raise NotImplementedError

    # -- declared normal spanning arborescence
    tree_root = 0

    def tree_parent(self, v: int) -> Optional[int]:
        raise NotImplementedError

    def level(self, n: int) -> LevelDescriptor:
        if n < 0:
            raise ValueError("level index must be non-negative")
        if self.size is not None:
            n = min(n, self.size)
        got = self._levels.get(n)
        if got is None:
            got = self._build_level(n)
            self._levels[n] = got
        return got

    def _build_level(self, n: int) -> LevelDescriptor:
        raise NotImplementedError

    def spec(self) -> dict:
        return {"generator": self.name, "params": {}}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {json.dumps(self.spec()['params'], sort_keys=True)}>"


def _finish_bundles(raw: dict) -> dict:
    out = {}
    for key, (edges, infinite, sample) in raw.items():
        if infinite:
            out[key] = Bundle("infinite", (), sample)
        elif edges:
            edges = tuple(sorted(edges))
            out[key] = Bundle("finite", edges, edges[0])
    return out


# ---------------------------------------------------------------- branched


class BranchedOracle(TournamentOracle):
    """Finitely many rays ("branches") with backward chords, glued by a
    cross rule between branches, plus finitely many orientation exceptions.

    Vertex ``k`` is level ``k // B`` of branch ``k % B``.  Inside a branch,
    ``r_k -> r_{k+1}`` and ``r_{k+j} -> r_k`` for ``j >= 2``.  Across
    branches ``i`` beats ``j`` when ``cross(i, j)``.  ``flips`` is a set of
    unordered index pairs whose default orientation is reversed; every flip
    must sit inside the first ``flip_depth`` levels.
    """

    def __init__(
        self,
        name: str,
        prefixes: Sequence[str],
        end_names: Sequence[str],
        cross: Callable[[int, int], bool],
        parent: Callable[[int, int], Optional[tuple[int, int]]],
        root: int,
        flips: Iterable[frozenset] = (),
        flip_depth: int = 0,
        params: Optional[dict] = None,
    ):
        super().__init__()
        self.name = name
        self.prefixes = tuple(prefixes)
        self.end_names = tuple(end_names)
        self.B = len(prefixes)
        self._cross = cross
        self._parent = parent
        self.tree_root = root
        self.flips = frozenset(frozenset(p) for p in flips)
        self.flip_depth = flip_depth
        self.params = params or {}
        for pair in self.flips:
            for v in pair:
                if v // self.B >= flip_depth:
                    raise BadSpec(f"flip {sorted(pair)} lies below the flip depth")
        self.end_count = self.B
        self.strongly_connected = len(self.level(0).classes) == 1

    def spec(self) -> dict:
        return {"generator": self.name, "params": dict(self.params)}

    def branch(self, v: int) -> int:
        return v % self.B

    def height(self, v: int) -> int:
        return v // self.B

    def at(self, b: int, k: int) -> int:
        return k * self.B + b

    def vertex(self, k: int) -> str:
        return f"{self.prefixes[k % self.B]}{k // self.B}"

    def index(self, label: Hashable) -> int:
        label = str(label)
        for b in sorted(range(self.B), key=lambda i: -len(self.prefixes[i])):
            p = self.prefixes[b]
            if label.startswith(p) and label[len(p):].isdigit():
                return self.at(b, int(label[len(p):]))
        raise KeyError(label)

    def _default_beats(self, u: int, v: int) -> bool:
        bu, bv = self.branch(u), self.branch(v)
        if bu != bv:
            return self._cross(bu, bv)
        hu, hv = self.height(u), self.height(v)
        return hv == hu + 1 or hu >= hv + 2

    def beats(self, u: int, v: int) -> bool:
        if u == v:
            raise ValueError("no loops")
        d = self._default_beats(u, v)
        if frozenset((u, v)) in self.flips:
            return not d
        return d

    def degree_flags(self, v: int) -> tuple[bool, bool]:
        b = self.branch(v)
        others = [c for c in range(self.B) if c != b]
        # chords from the own branch always arrive
        in_finite = False
        out_finite = not any(self._cross(b, c) for c in others)
        return in_finite, out_finite

    def class_bound(self, n: int) -> int:
        cut = self._cutoff(n)
        return self.B + sum(max(0, cut - c) for c in self._cleared(n))

    def tree_parent(self, v: int) -> Optional[int]:
        got = self._parent(self.branch(v), self.height(v))
        return None if got is None else self.at(*got)

    # -- level structure

    def _cleared(self, n: int) -> list[int]:
        """Per branch, how many of its vertices lie in X_n."""
        return [max(0, (n - b + self.B - 1) // self.B) for b in range(self.B)]

    def _cutoff(self, n: int) -> int:
        return max([self.flip_depth] + self._cleared(n)) + 2

    def _build_level(self, n: int) -> LevelDescriptor:
        B = self.B
        cleared = self._cleared(n)
        L = self._cutoff(n)
        near = [self.at(b, k) for b in range(B) for k in range(cleared[b], L)]
        near.sort()
        tails = [("t", b) for b in range(B)]
        nodes = near + tails
        pos = {x: i for i, x in enumerate(nodes)}

        def near_tail(x: int, b: int) -> tuple[list, bool, bool]:
            """Edges between vertex x and tail b: (finite x->tail edges, x->tail infinite, tail->x infinite)."""
            bx = self.branch(x)
            if bx != b:
                out = self._cross(bx, b)
                return [], out, not out
            finite = [(x, self.at(b, L))] if self.height(x) + 1 == L else []
            return finite, False, True

        edges = set()
        for x, y in itertools.permutations(near, 2):
            if self.beats(x, y):
                edges.add((pos[x], pos[y]))
        for x in near:
            for b in range(B):
                fin, out_inf, in_inf = near_tail(x, b)
                if fin or out_inf:
                    edges.add((pos[x], pos[("t", b)]))
                if in_inf:
                    edges.add((pos[("t", b)], pos[x]))
        for a, b in itertools.permutations(range(B), 2):
            if self._cross(a, b):
                edges.add((pos[("t", a)], pos[("t", b)]))
        skeleton = FiniteDigraph(len(nodes), frozenset(edges))
        cond = strong_components(skeleton)

        classes = []
        for comp in cond.classes:
            members = [nodes[i] for i in comp]
            near_m = frozenset(m for m in members if not isinstance(m, tuple))
            tail_b = tuple(sorted(m[1] for m in members if isinstance(m, tuple)))
            classes.append(self._make_class(n, L, near_m, tail_b))

        # bundles
        def expand(part):
            if part[0] == "v":
                return [part[1]], ()
            c = classes[part[1]]
            return sorted(c._near), c._tails

        parts = [("v", k) for k in range(n)] + [("c", j) for j in range(len(classes))]
        raw = {}
        for p, q in itertools.permutations(parts, 2):
            pv, pt = expand(p)
            qv, qt = expand(q)
            fin = []
            infinite = False
            sample = None
            for x in pv:
                for y in qv:
                    if self.beats(x, y):
                        fin.append((x, y))
                for b in qt:
                    f, out_inf, _ = near_tail(x, b)
                    fin.extend(f)
                    if out_inf:
                        infinite = True
                        sample = sample or self._sample(x, b, L, outgoing=True)
            for a in pt:
                for y in qv:
                    _, _, in_inf = near_tail(y, a)
                    if in_inf:
                        infinite = True
                        sample = sample or self._sample(y, a, L, outgoing=False)
                for b in qt:
                    if self._cross(a, b):
                        infinite = True
                        sample = sample or (self.at(a, L), self.at(b, L))
            raw[(p, q)] = (fin, infinite, sample)
        return LevelDescriptor(n, tuple(classes), _finish_bundles(raw))

    def _sample(self, x: int, b: int, L: int, outgoing: bool) -> tuple[int, int]:
        for k in range(L, L + 4):
            y = self.at(b, k)
            if outgoing and self.beats(x, y):
                return (x, y)
            if not outgoing and self.beats(y, x):
                return (y, x)
        raise OracleInconsistent(f"no sample edge between {x} and tail {b}")

    def _make_class(self, n: int, L: int, near: frozenset, tails: tuple) -> ClassInfo:
        B = self.B

        def contains(v: int, near=near, tails=tails) -> bool:
            return v in near or (self.height(v) >= L and self.branch(v) in tails)

        probes = sorted(near)
        for k in itertools.count(L):
            if len(probes) >= PROBE_SIZE or not tails:
                break
            probes.extend(self.at(b, k) for b in tails)
        probes = tuple(sorted(probes)[:PROBE_SIZE]) if tails else tuple(probes)
        candidates = sorted(near) + [self.at(b, L) for b in tails]
        entries = tuple(
            v for v in candidates
            if self.tree_parent(v) is None or not contains(self.tree_parent(v))
        )
        info = ClassInfo(
            key=self._class_key(near, tails, L),
            probes=probes,
            infinite=bool(tails),
            ends=tuple(self.end_names[b] for b in tails),
            entries=entries,
            contains=contains,
            members=None if tails else near,
        )
        object.__setattr__(info, "_near", near)
        object.__setattr__(info, "_tails", tails)
        return info

    def _class_key(self, near: frozenset, tails: tuple, L: int) -> str:
        pieces = []
        for b in range(self.B):
            hs = sorted(self.height(v) for v in near if self.branch(v) == b)
            if b in tails:
                start = L
                while hs and hs[-1] == start - 1:
                    start = hs.pop()
                pieces.extend(f"{self.prefixes[b]}{h}" for h in hs)
                pieces.append(f"{self.prefixes[b]}{start}+")
            else:
                pieces.extend(f"{self.prefixes[b]}{h}" for h in hs)
        return "{" + ",".join(pieces) + "}"


def three_ray() -> BranchedOracle:
    def parent(b, k):
        if k > 0:
            return (b, k - 1)
        return None if b == 0 else (b - 1, 0)

    return BranchedOracle(
        "three_ray", ["r1_", "r2_", "r3_"], ["ω_1", "ω_2", "ω_3"],
        cross=lambda i, j: i < j, parent=parent, root=0,
    )


def ladder() -> BranchedOracle:
    # branch 0 = a, branch 1 = b; the tree is rooted at b0 and enters the
    # a-ray at a0 and the rest of the b-ray at b1 (hung below a0)
    def parent(b, k):
        if b == 0:
            return (1, 0) if k == 0 else (0, k - 1)
        if k == 0:
            return None
        return (0, 0) if k == 1 else (1, k - 1)

    return BranchedOracle(
        "ladder", ["a", "b"], ["ω_A", "ω_B"],
        cross=lambda i, j: i < j, parent=parent, root=1,
        flips=[frozenset((0, 1))], flip_depth=1,
    )


def one_ended() -> BranchedOracle:
    return BranchedOracle(
        "one_ended", ["u"], ["ω"],
        cross=lambda i, j: False,
        parent=lambda b, k: None if k == 0 else (0, k - 1),
        root=0,
    )


def _coin(seed: int, *key: int) -> float:
    h = hashlib.sha256(json.dumps([seed, *key]).encode()).digest()
    return int.from_bytes(h[:8], "big") / 2**64


def random_solid(seed: int, branches: int = 3, perturb_depth: int = 2, flip_rate: float = 0.35) -> BranchedOracle:
    """Seeded branched tournament.

    The cross order between branches is a seeded permutation.  Flips are
    drawn (by counter-based hashing of the seed) only among pairs that keep
    the declared spine arborescence normal: non-tree chords inside a
    branch, and edges from a later branch into the first vertex of an
    earlier one.
    """
    if not 1 <= branches <= 5:
        raise BadSpec("random_solid supports 1..5 branches")
    if perturb_depth < 0:
        raise BadSpec("perturb_depth must be non-negative")
    B = branches
    order = sorted(range(B), key=lambda b: _coin(seed, 0, b))
    pos = {b: i for i, b in enumerate(order)}

    def parent(b, k):
        if k > 0:
            return (b, k - 1)
        return None if pos[b] == 0 else (order[pos[b] - 1], 0)

    def at(b, k):
        return k * B + b

    flips = []
    for u, v in itertools.combinations(range(B * perturb_depth), 2):
        bu, bv, hu, hv = u % B, v % B, u // B, v // B
        if bu == bv:
            allowed = abs(hu - hv) >= 2
        else:
            # later branch vertex -> first vertex of an earlier branch
            lo, hi = (u, v) if pos[bu] < pos[bv] else (v, u)
            allowed = (
                lo // B == 0
                and not (hi // B == 0 and pos[hi % B] == pos[lo % B] + 1)
            )
        if allowed and _coin(seed, 1, u, v) < flip_rate:
            flips.append(frozenset((u, v)))
    names = [f"r{b + 1}_" for b in range(B)]
    return BranchedOracle(
        "random_solid", names, [f"ω_{b + 1}" for b in range(B)],
        cross=lambda i, j: pos[i] < pos[j], parent=parent, root=order[0],
        flips=flips, flip_depth=perturb_depth,
        params={"seed": seed, "branches": B, "perturb_depth": perturb_depth},
    )


# ---------------------------------------------------------------- binary tree


def _bt_label(k: int) -> str:
    return bin(k + 1)[3:]


def _bt_index(s: str) -> int:
    return int("1" + s, 2) - 1


def _bt_beats(u: str, v: str) -> bool:
    if v.startswith(u):
        return len(v) == len(u) + 1
    if u.startswith(v):
        return len(u) != len(v) + 1
    i = next(i for i, (a, b) in enumerate(zip(u, v)) if a != b)
    return u[i] == "1"


class BinaryTreeOracle(TournamentOracle):
    """Vertices are binary strings in BFS order; the infinite binary tree
    is a normal spanning arborescence.  Incomparable pairs run from the
    right (bit 1) side to the left, comparable non-tree pairs run from
    descendant to ancestor, so every hanging subtree is strongly connected."""

    name = "binary_tree"
    end_count = None
    strongly_connected = True

    def vertex(self, k: int) -> str:
        return _bt_label(k)

    def index(self, label: Hashable) -> int:
        return _bt_index(str(label))

    def beats(self, u: int, v: int) -> bool:
        if u == v:
            raise ValueError("no loops")
        return _bt_beats(_bt_label(u), _bt_label(v))

    def degree_flags(self, v: int) -> tuple[bool, bool]:
        return False, "1" not in _bt_label(v)

    def class_bound(self, n: int) -> int:
        return n + 1

    def tree_parent(self, v: int) -> Optional[int]:
        return None if v == 0 else (v - 1) // 2

    def _build_level(self, n: int) -> LevelDescriptor:
        boundary = [0] if n == 0 else list(range(n, 2 * n + 1))
        words = [_bt_label(k) for k in boundary]
        # condensation order: at the split, the bit-1 side is the source
        words.sort(key=lambda w: w.translate(str.maketrans("01", "10")))
        classes = []
        for w in words:
            def contains(v: int, w=w) -> bool:
                return _bt_label(v).startswith(w)
            root = _bt_index(w)
            probes = []
            frontier = [w]
            while len(probes) < PROBE_SIZE:
                probes.extend(_bt_index(x) for x in frontier)
                frontier = [x + c for x in frontier for c in "01"]
            classes.append(ClassInfo(
                key="↑" + (w or "ε"),
                probes=tuple(sorted(probes)[:PROBE_SIZE]),
                infinite=True,
                ends=(),
                entries=(root,),
                contains=contains,
            ))
        raw = {}
        for x, y in itertools.permutations(range(n), 2):
            if self.beats(x, y):
                raw[(("v", x), ("v", y))] = ([(x, y)], False, None)
        for j, w in enumerate(words):
            c = ("c", j)
            wi = _bt_index(w)
            for x in range(n):
                s = _bt_label(x)
                if w.startswith(s):
                    # ancestor: all descendants except a tree child send back
                    deep = _bt_index(w + "0")
                    raw[(c, ("v", x))] = ([], True, (deep, x))
                    if len(w) == len(s) + 1:
                        raw[(("v", x), c)] = ([(x, wi)], False, None)
                elif self.beats(x, wi):
                    raw[(("v", x), c)] = ([], True, (x, wi))
                else:
                    raw[(c, ("v", x))] = ([], True, (wi, x))
            for k, w2 in enumerate(words):
                if j < k:
                    raw[(c, ("c", k))] = ([], True, (wi, _bt_index(w2)))
        return LevelDescriptor(n, tuple(classes), _finish_bundles(raw))


# ---------------------------------------------------------------- finite


class FiniteOracle(TournamentOracle):
    """A finite tournament viewed as an oracle without ends.

    Vertices are enumerated in the preorder of the DFS arborescence from
    ``start`` so that every prefix is down-closed in that arborescence.
    """

    name = "finite_embed"
    end_count = 0

    def __init__(self, t: FiniteTournament, start: Optional[int] = None):
        super().__init__()
        self.t = t
        self.size = t.n
        if t.n:
            start = default_start(t) if start is None else start
            tree = dfs_arborescence(t, start)
            self.order = list(tree.preorder)
            self._tree = tree
        else:
            self.order = []
            self._tree = None
        self._pos = {v: k for k, v in enumerate(self.order)}
        # adjacency and tree parents in enumeration positions
        self._out = [frozenset(self._pos[w] for w in t.out_neighbors(v)) for v in self.order]
        self._parent = [
            None if self._tree.parent.get(v) is None else self._pos[self._tree.parent[v]]
            for v in self.order
        ]
        self.strongly_connected = is_strongly_connected(t)

    def spec(self) -> dict:
        return {
            "generator": self.name,
            "params": {"n": self.t.n, "edges": [list(e) for e in self.t.sorted_edges()]},
        }

    def vertex(self, k: int) -> int:
        return self.order[k]

    def index(self, label: Hashable) -> int:
        return self._pos[int(label)]

    def beats(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def degree_flags(self, v: int) -> tuple[bool, bool]:
        return True, True

    def class_bound(self, n: int) -> int:
        return max(0, self.size - n)

    @property
    def tree_root(self) -> int:
        return 0

    def tree_parent(self, v: int) -> Optional[int]:
        return self._parent[v]

    def _build_level(self, n: int) -> LevelDescriptor:
        out = self._out
        sub = FiniteDigraph(
            self.size - n,
            frozenset((u - n, v - n) for u in range(n, self.size) for v in out[u] if v >= n),
        )
        classes = []
        for comp in strong_components(sub).classes:
            members = frozenset(i + n for i in comp)
            entries = tuple(sorted(
                v for v in members
                if self.tree_parent(v) is None or self.tree_parent(v) not in members
            ))
            classes.append(ClassInfo(
                key="{" + ",".join(str(self.order[v]) for v in sorted(members)) + "}",
                probes=tuple(sorted(members)[:PROBE_SIZE]),
                infinite=False,
                ends=(),
                entries=entries,
                contains=members.__contains__,
                members=members,
            ))
        part = {k: ("v", k) for k in range(n)}
        for j, c in enumerate(classes):
            for v in c.members:
                part[v] = ("c", j)
        raw: dict = {}
        for x in range(self.size):
            for y in sorted(out[x]):
                p, q = part[x], part[y]
                if p != q:
                    raw.setdefault((p, q), ([], False, None))[0].append((x, y))
        return LevelDescriptor(n, tuple(classes), _finish_bundles(raw), part)


# ---------------------------------------------------------------- patching


class PatchedOracle(TournamentOracle):
    """Delegates to ``base`` but rewrites some level descriptors.

    Used for fault injection: ``patch(n, descriptor)`` returns the
    descriptor to report for level ``n``.
    """

    def __init__(self, base: TournamentOracle, patch: Callable[[int, LevelDescriptor], LevelDescriptor]):
        super().__init__()
        self.base = base
        self.patch = patch
        self.name = base.name
        self.end_count = base.end_count
        self.strongly_connected = base.strongly_connected
        self.size = base.size
        self.tree_root = base.tree_root

    def vertex(self, k):
        return self.base.vertex(k)

    def index(self, label):
        return self.base.index(label)

    def beats(self, u, v):
        return self.base.beats(u, v)

    def degree_flags(self, v):
        return self.base.degree_flags(v)

    def class_bound(self, n):
        return self.base.class_bound(n)

    def tree_parent(self, v):
        return self.base.tree_parent(v)

    def _build_level(self, n):
        return self.patch(n, self.base.level(n))

    def spec(self):
        return self.base.spec()


def flip_bundle(o: TournamentOracle, n: int, a: Part, b: Part) -> PatchedOracle:
    """Swap the bundles between parts ``a`` and ``b`` at level ``n``."""

    def patch(m, desc):
        if m != n:
            return desc
        bundles = dict(desc.bundles)
        ab, ba = bundles.pop((a, b), None), bundles.pop((b, a), None)
        if ab is not None:
            bundles[(b, a)] = Bundle(ab.kind, tuple((y, x) for x, y in ab.witnesses),
                                     ab.sample and ab.sample[::-1])
        if ba is not None:
            bundles[(a, b)] = Bundle(ba.kind, tuple((y, x) for x, y in ba.witnesses),
                                     ba.sample and ba.sample[::-1])
        return LevelDescriptor(desc.n, desc.classes, bundles)

    return PatchedOracle(o, patch)


def drop_witness(o: TournamentOracle, n: int, a: Part, b: Part, edge: tuple[int, int]) -> PatchedOracle:
    """Delete one concrete edge from a finite bundle at level ``n``."""

    def patch(m, desc):
        if m != n:
            return desc
        bundles = dict(desc.bundles)
        old = bundles[(a, b)]
        kept = tuple(e for e in old.witnesses if e != edge)
        if kept:
            bundles[(a, b)] = Bundle("finite", kept, kept[0])
        else:
            del bundles[(a, b)]
        return LevelDescriptor(desc.n, desc.classes, bundles)

    return PatchedOracle(o, patch)


# ---------------------------------------------------------------- generators


GENERATORS = ("binary_tree", "three_ray", "ladder", "one_ended", "finite_embed", "random_solid")


def make_generator(spec: Mapping) -> TournamentOracle:
    """Build an oracle from ``{"generator": name, "params": {...}}``."""
    if not isinstance(spec, Mapping) or "generator" not in spec:
        raise BadSpec("generator spec needs a 'generator' field")
    name = spec["generator"]
    params = dict(spec.get("params") or {})
    try:
        if name == "binary_tree":
            return BinaryTreeOracle()
        if name == "three_ray":
            return three_ray()
        if name == "ladder":
            return ladder()
        if name == "one_ended":
            return one_ended()
        if name == "finite_embed":
            if "text" in params:
                t = parse_digraph(params["text"], tournament=True)
            else:
                t = FiniteTournament(int(params["n"]), frozenset(tuple(e) for e in params["edges"]))
            return FiniteOracle(t, params.get("start"))
        if name == "random_solid":
            return random_solid(
                int(params.get("seed", 0)),
                int(params.get("branches", 3)),
                int(params.get("perturb_depth", 2)),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise BadSpec(f"bad parameters for {name}: {exc}") from None
    raise BadSpec(f"unknown generator {name!r}")


def load_spec(path: str) -> TournamentOracle:
    with open(path) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadSpec(f"{path}: {exc}") from None
    return make_generator(spec)


def truncate(o: TournamentOracle, k: int) -> FiniteTournament:
    """Induced tournament on the first ``k`` enumerated vertices (relabelled 0..k-1)."""
    if k < 1:
        raise ValueError("truncation needs k >= 1")
    if o.size is not None:
        k = min(k, o.size)
    return FiniteTournament.from_orient(k, o.beats)


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, **detail) -> None:
        self.checks.append((name, passed))
        if not passed:
            self.failures.append({"check": name, **detail})

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": len(self.checks), "failures": self.failures}


def _horizon(o: TournamentOracle, desc: LevelDescriptor) -> int:
    top = max([desc.n] + [max(c.probes) for c in desc.classes if c.probes])
    h = 2 * top + 16
    return h if o.size is None else o.size


def validate_oracle(o: TournamentOracle, depth: int, samples: int = 64) -> ValidationReport:
    """Falsification checks for levels ``0..depth``: class counts, refinement,
    strong connectivity of classes on their probe sets, and bundle
    directions against sampled edges."""
    report = ValidationReport()
    for n in range(depth + 1):
        desc = o.level(n)
        report.record("class_bound", len(desc.classes) <= o.class_bound(n),
                      level=n, count=len(desc.classes))
        if n > 0:
            prev = o.level(n - 1)
            for j, c in enumerate(desc.classes):
                homes = {prev.part_of(p) for p in c.probes}
                report.record("refinement", len(homes) == 1 and next(iter(homes))[0] == "c",
                              level=n, part=["c", j], parents=sorted(map(list, homes)))
        h = _horizon(o, desc)
        trunc = truncate(o, h)
        blocked = range(desc.n)
        for j, c in enumerate(desc.classes):
            if not c.probes:
                report.record("nonempty", False, level=n, part=["c", j])
                continue
            for p in c.probes:
                report.record("membership", c.contains(p) and desc.part_of(p) == ("c", j),
                              level=n, part=["c", j], vertex=o.vertex(p))
            head = c.probes[0]
            reach = reachable_from(trunc, head, blocked)
            back = {p for p in c.probes if head in reachable_from(trunc, p, blocked)}
            report.record("strongly_connected", set(c.probes) <= reach and back == set(c.probes),
                          level=n, part=["c", j])
        for j, k in itertools.combinations(range(len(desc.classes)), 2):
            a, b = desc.classes[j].probes[0], desc.classes[k].probes[0]
            merged = b in reachable_from(trunc, a, blocked) and a in reachable_from(trunc, b, blocked)
            report.record("distinct_classes", not merged, level=n, pair=[["c", j], ["c", k]])
            both = bool(desc.bundle(("c", j), ("c", k))) and bool(desc.bundle(("c", k), ("c", j)))
            report.record("one_direction", not both, level=n, pair=[["c", j], ["c", k]])
        parts = desc.parts()
        pairs = [(p, q) for p, q in itertools.combinations(parts, 2)]
        budget = samples
        for p, q in pairs:
            for x in desc.probes(p)[:2]:
                for y in desc.probes(q)[:2]:
                    if budget <= 0:
                        break
                    budget -= 1
                    e = o.orient(x, y)
                    src, dst = (p, q) if e == (x, y) else (q, p)
                    bnd = desc.bundle(src, dst)
                    ok = bool(bnd) and (bnd.kind == "infinite" or e in bnd.witnesses)
                    report.record("bundle_direction", ok, level=n,
                                  pair=[list(src), list(dst)],
                                  edge=[o.vertex(e[0]), o.vertex(e[1])])
    return report
