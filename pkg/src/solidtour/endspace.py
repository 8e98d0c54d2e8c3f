"""Ends as threads of classes, limit edges, and the order on ends."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Union

from .oracle import Part, TournamentOracle


class NotSeparated(ValueError):
    def __init__(self, depth: int):
        super().__init__(f"threads not separated within depth {depth}")
        self.depth = depth


class DirectionFlip(RuntimeError):
    def __init__(self, level: int):
        super().__init__(f"bundle direction between the ends changes at level {level}")
        self.level = level


class Inconsistent(RuntimeError):
    def __init__(self, level: int, what: str = "extremal classes"):
        super().__init__(f"{what} do not form a thread at level {level}")
        self.level = level


@dataclass(frozen=True)
class EndThread:
    label: str
    parts: tuple[Part, ...]  # class of the end at levels 0..depth
    keys: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.parts) - 1

    def as_dict(self) -> dict:
        return {"label": self.label, "classes": list(self.keys)}


@dataclass(frozen=True)
class LimitEdgeWitness:
    kind: str  # "end-end", "vertex-end", "end-vertex"
    source: str
    target: str
    levels: tuple  # (n, witness edge or None)
    depth: int

    @property
    def refuted_at(self) -> Optional[int]:
        return next((n for n, w in self.levels if w is None), None)

    @property
    def status(self) -> str:
        r = self.refuted_at
        return f"refuted({r})" if r is not None else f"witnessed({self.depth})"

    @property
    def witnessed(self) -> bool:
        return self.refuted_at is None

    def as_dict(self, o: Optional[TournamentOracle] = None) -> dict:
        def show(e):
            if e is None or o is None:
                return e and list(e)
            return [o.vertex(e[0]), o.vertex(e[1])]

        return {
            "kind": self.kind,
            "source": self.source,
            "target": self.target,
            "status": self.status,
            "levels": [{"n": n, "witness": show(w)} for n, w in self.levels],
        }


def _thread_from(o: TournamentOracle, probe: int, depth: int) -> tuple:
    parts, keys = [], []
    for n in range(depth + 1):
        desc = o.level(n)
        p = desc.part_of(probe)
        if p[0] != "c":
            raise Inconsistent(n, "thread")
        parts.append(p)
        keys.append(desc.classes[p[1]].key)
    return tuple(parts), tuple(keys)


def end_threads(o: TournamentOracle, depth: int) -> list[EndThread]:
    """One thread per infinite class at level ``depth``, traced down to level 0."""
    if o.size is not None:
        return []
    top = o.level(depth)
    out = []
    for c in top.classes:
        if not c.infinite:
            continue
        parts, keys = _thread_from(o, c.probes[0], depth)
        label = c.ends[0] if len(c.ends) == 1 else f"ω[{c.key}]"
        out.append(EndThread(label, parts, keys))
    return out


def thread_by_label(threads: list[EndThread], label: str) -> EndThread:
    for t in threads:
        if t.label == label:
            return t
    raise KeyError(label)


def separating_level(t1: EndThread, t2: EndThread) -> int:
    depth = min(t1.depth, t2.depth)
    for n in range(depth + 1):
        if t1.parts[n] != t2.parts[n]:
            return n
    raise NotSeparated(depth)


Endpoint = Union[EndThread, int]


def _name(o: TournamentOracle, x: Endpoint) -> str:
    return x.label if isinstance(x, EndThread) else str(o.vertex(x))


def _witness(o: TournamentOracle, n: int, src: Endpoint, dst: Endpoint) -> Optional[tuple]:
    """Evidence of an edge from the source side to the target side at level n."""
    desc = o.level(n)

    def side(x):
        return x.parts[n] if isinstance(x, EndThread) else desc.part_of(x)

    a, b = side(src), side(dst)
    bnd = desc.bundle(a, b)
    if not bnd:
        return None
    # a vertex inside a class needs its own edge, not just its class's
    for x, other in ((src, b), (dst, a)):
        if isinstance(x, int) and x >= desc.n:
            y = desc.probes(other)[0]
            e = o.orient(x, y)
            want = (x, y) if x is src else (y, x)
            return e if e == want else None
    return bnd.sample


def detect_limit_edge(o: TournamentOracle, source: Endpoint, target: Endpoint, depth: int) -> LimitEdgeWitness:
    """Check at every applicable level up to ``depth`` that some edge runs from
    the source part to the target part.  Stops at the first refutation."""
    if not isinstance(source, EndThread) and not isinstance(target, EndThread):
        raise ValueError("at least one side of a limit edge must be an end")
    if isinstance(source, EndThread) and isinstance(target, EndThread):
        kind = "end-end"
    elif isinstance(source, EndThread):
        kind = "end-vertex"
    else:
        kind = "vertex-end"
    levels = []
    for n in range(depth + 1):
        desc = o.level(n)
        if kind == "end-end":
            applicable = source.parts[n] != target.parts[n]
        else:
            end, v = (source, target) if kind == "end-vertex" else (target, source)
            applicable = desc.part_of(v) != end.parts[n]
        if not applicable:
            continue
        w = _witness(o, n, source, target)
        levels.append((n, w))
        if w is None:
            break
    return LimitEdgeWitness(kind, _name(o, source), _name(o, target), tuple(levels), depth)


def end_order_compare(o: TournamentOracle, t1: EndThread, t2: EndThread, depth: int) -> str:
    """"Less" when the bundles run from ``t1``'s classes to ``t2``'s."""
    start = separating_level(t1, t2)
    verdict = None
    for n in range(start, min(depth, t1.depth, t2.depth) + 1):
        desc = o.level(n)
        fwd = bool(desc.bundle(t1.parts[n], t2.parts[n]))
        back = bool(desc.bundle(t2.parts[n], t1.parts[n]))
        if fwd == back:
            raise DirectionFlip(n)
        here = "Less" if fwd else "Greater"
        if verdict is not None and here != verdict:
            raise DirectionFlip(n)
        verdict = here
    return verdict


def sort_ends(o: TournamentOracle, threads: list[EndThread], depth: int) -> list[EndThread]:
    def cmp(a, b):
        return -1 if end_order_compare(o, a, b, depth) == "Less" else 1

    return sorted(threads, key=functools.cmp_to_key(cmp))


def extremal_ends(o: TournamentOracle, depth: int) -> tuple[EndThread, EndThread]:
    """Threads through the least and the greatest infinite class at every level."""
    threads = end_threads(o, depth)
    if not threads:
        raise ValueError("no ends")
    picks = []
    for which in (0, -1):
        prev = None
        for n in range(depth + 1):
            desc = o.level(n)
            inf = [("c", j) for j, c in enumerate(desc.classes) if c.infinite]
            here = inf[which]
            if prev is not None:
                below = o.level(n - 1).part_of(desc.probes(here)[0])
                if below != prev:
                    raise Inconsistent(n)
            prev = here
        picks.append(next(t for t in threads if t.parts[depth] == prev))
    return picks[0], picks[1]


def end_report(o: TournamentOracle, depth: int) -> dict:
    threads = end_threads(o, depth)
    matrix = []
    for a in threads:
        for b in threads:
            if a is not b:
                matrix.append(detect_limit_edge(o, a, b, depth).as_dict(o))
    report = {
        "depth": depth,
        "threads": [t.as_dict() for t in threads],
        "limit_edges": matrix,
        "order": [t.label for t in sort_ends(o, threads, depth)],
    }
    if threads:
        lo, hi = extremal_ends(o, depth)
        report["extremal"] = {"least": lo.label, "greatest": hi.label}
    return report
