from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import has_hamilton_cycle, has_hamilton_path, scc_partition
from solidtour.core_digraph import (
    BoundExceeded,
    DigraphError,
    FiniteDigraph,
    FiniteTournament,
    InvalidTournament,
    all_tournaments,
    brute_force_hamilton_cycle,
    brute_force_hamilton_path,
    condensation_is_total,
    cyclic_triangle,
    format_digraph,
    is_strongly_connected,
    parse_digraph,
    reachable_from,
    strong_components,
    transitive_tournament,
)
from solidtour.oracle import make_generator, truncate


def tournaments(max_n=7):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(0, (1 << (n * (n - 1) // 2)) - 1).map(
            lambda bits: FiniteTournament.from_bits(n, bits)
        )
    )


def digraphs(max_n=7):
    def build(n):
        pairs = list(itertools.permutations(range(n), 2))
        return st.sets(st.sampled_from(pairs) if pairs else st.nothing()).map(
            lambda es: FiniteDigraph(n, frozenset(es))
        )

    return st.integers(1, max_n).flatmap(build)


# ---------------------------------------------------------------- construction


def test_tournament_rejects_missing_pair():
    with pytest.raises(InvalidTournament):
        FiniteTournament(3, frozenset({(0, 1), (1, 2)}))


def test_tournament_rejects_both_directions():
    with pytest.raises(InvalidTournament):
        FiniteTournament(2, frozenset({(0, 1), (1, 0)}))


def test_digraph_rejects_loop_and_range():
    with pytest.raises(DigraphError):
        FiniteDigraph(2, frozenset({(0, 0)}))
    with pytest.raises(DigraphError):
        FiniteDigraph(2, frozenset({(0, 2)}))


def test_parse_roundtrip():
    t = cyclic_triangle()
    assert parse_digraph(format_digraph(t), tournament=True) == t


def test_parse_rejects_duplicates_and_garbage():
    with pytest.raises(DigraphError):
        parse_digraph("2\n0 1\n0 1\n")
    with pytest.raises(DigraphError):
        parse_digraph("2\n0\n")
    with pytest.raises(DigraphError):
        parse_digraph("")


def test_all_tournaments_count():
    assert sum(1 for _ in all_tournaments(4)) == 64


# ---------------------------------------------------------------- components


def test_scc_three_cycle():
    assert strong_components(cyclic_triangle()).classes == ((0, 1, 2),)


def test_scc_transitive_order():
    assert strong_components(transitive_tournament(3)).classes == ((0,), (1,), (2,))


def _three_ray_tail_classes(levels: int):
    o = make_generator({"generator": "three_ray"})
    t = truncate(o, 3 * (levels + 1))
    rest = list(range(1, t.n))
    sub = t.induced(rest)
    comps = [frozenset(rest[i] for i in c) for c in strong_components(sub).classes]
    return o, t, rest, comps


def test_scc_three_ray_minus_root_one_class_per_branch():
    # truncation through level 3 of every branch, root r1_0 removed
    o, t, rest, comps = _three_ray_tail_classes(3)
    assert len(comps) == 3
    assert [sorted({o.vertex(v)[:2] for v in c}) for c in comps] == [["r1"], ["r2"], ["r3"]]
    assert set(comps) == set(scc_partition(t.n, t.edges, keep=rest))


def test_scc_three_ray_two_levels_splits_branch_one():
    # through level 2 only r1_1 -> r1_2 is left of branch 1, which is not strong
    o, t, rest, comps = _three_ray_tail_classes(2)
    assert len(comps) == 4
    assert set(comps) == set(scc_partition(t.n, t.edges, keep=rest))


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_scc_matches_reachability(d):
    got = strong_components(d)
    assert {frozenset(c) for c in got.classes} == set(scc_partition(d.n, d.edges))
    # sources first: no edge from a later class to an earlier one
    for u, v in d.edges:
        assert got.class_of[u] <= got.class_of[v]


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_scc_idempotent_after_contraction(d):
    c = strong_components(d)
    q = FiniteDigraph(len(c.classes), c.class_edges)
    assert all(len(k) == 1 for k in strong_components(q).classes)


@settings(max_examples=200, deadline=None)
@given(tournaments())
def test_tournament_condensation_total_and_one_way(t):
    c = strong_components(t)
    assert condensation_is_total(c)
    for u, v in t.edges:
        assert c.class_of[u] <= c.class_of[v]


def test_condensation_total_examples():
    assert not condensation_is_total(strong_components(FiniteDigraph(2, frozenset())))
    assert condensation_is_total(strong_components(transitive_tournament(3)))


def test_reachable_from_with_avoid():
    t = transitive_tournament(4)
    assert reachable_from(t, 0) == {0, 1, 2, 3}
    assert reachable_from(t, 1, avoid=[2]) == {1, 3}
    assert reachable_from(t, 1, avoid=[1]) == set()


# ---------------------------------------------------------------- brute force


def test_brute_path_examples():
    assert brute_force_hamilton_path(transitive_tournament(3)) == [0, 1, 2]
    assert brute_force_hamilton_path(cyclic_triangle()) == [0, 1, 2]
    assert brute_force_hamilton_path(FiniteDigraph(2, frozenset())) is None


def test_brute_cycle_examples():
    assert brute_force_hamilton_cycle(cyclic_triangle()) == [0, 1, 2]
    assert brute_force_hamilton_cycle(transitive_tournament(3)) is None


def test_brute_cycle_every_strong_four_tournament():
    strong = [t for t in all_tournaments(4) if is_strongly_connected(t)]
    assert len(strong) == 24  # frozen: 64 labelled 4-tournaments, 24 strong
    for t in strong:
        c = brute_force_hamilton_cycle(t)
        assert c is not None and t.is_hamilton_cycle(c)


def test_brute_bound():
    with pytest.raises(BoundExceeded):
        brute_force_hamilton_path(transitive_tournament(11))
    assert brute_force_hamilton_path(transitive_tournament(11), bound=11) == list(range(11))


@settings(max_examples=150, deadline=None)
@given(digraphs(6))
def test_brute_force_agrees_with_permutations(d):
    p = brute_force_hamilton_path(d)
    assert (p is not None) == has_hamilton_path(d.n, d.edges)
    if p is not None:
        assert d.is_hamilton_path(p)
    c = brute_force_hamilton_cycle(d)
    assert (c is not None) == has_hamilton_cycle(d.n, d.edges)


@pytest.mark.parametrize("n", range(1, 6))
def test_every_small_tournament_has_hamilton_path(n):
    for t in all_tournaments(n):
        assert brute_force_hamilton_path(t) is not None
