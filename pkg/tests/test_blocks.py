import itertools

import numpy as np
import pytest

from oracles import naive_collision, width_maximal_run_blocks
from tbwz.blocks import (CollisionGraph, CollisionKind, build_collision_graph, classify_collision,
                         compute_run_blocks, compute_runs, critical_pairs, is_run_block, is_self_colliding,
                         make_block)
from tbwz.bwt import bwt, from_string, lf_mapping
from tbwz.errors import InvalidInputError


def setup(L):
    lf = lf_mapping(L)
    runs = compute_runs(L)
    return lf, runs, compute_run_blocks(lf, runs)


def test_runs():
    runs = compute_runs(from_string("yeep$yaass"))
    assert runs.starts.tolist() == [0, 1, 3, 4, 5, 6, 8]
    assert runs.heights.tolist() == [1, 2, 1, 1, 1, 2, 2]
    assert runs.count_taller_than(1) == 3
    assert runs.run_of([0, 2, 9]).tolist() == [0, 1, 6]
    assert list(runs)[1] == (1, 2, ord("e") + 1)


def test_running_example_unique_block():
    L = from_string("yeep$yaass")
    lf, runs, blocks = setup(L)
    assert [b.key for b in blocks] == [(2, 8, 9)]   # 2-[9,10] one-based
    b = blocks[0]
    assert b.tops.tolist() == [8, 6, 1] and b.width == 3 and b.height == 2
    assert b.positions() == {8, 9, 6, 7, 1, 2}
    assert is_run_block(b, L)


def test_run_block_examples_from_running_example():
    L = from_string("yeep$yaass")
    lf = lf_mapping(L)
    assert is_run_block(make_block(0, 1, 2, lf, L), L)       # 0-[2,3]
    assert is_run_block(make_block(1, 6, 7, lf, L), L)       # 1-[7,8]
    assert not is_run_block(make_block(2, 8, 8, lf, L), L)   # 2-[9,9]: L[9] == L[10]


def test_collision_examples_from_running_example():
    L = from_string("yeep$yaass")
    lf = lf_mapping(L)
    b299 = make_block(2, 8, 8, lf, L)
    assert classify_collision(b299, make_block(0, 6, 7, lf, L)).kind is CollisionKind.COMPENSABLE
    assert classify_collision(b299, make_block(1, 6, 7, lf, L)).kind is CollisionKind.CRITICAL
    assert classify_collision(b299, make_block(0, 3, 3, lf, L)).kind is CollisionKind.NONE


def test_self_collision():
    L = from_string("aaaa$")
    lf = lf_mapping(L)
    blk = make_block(1, 1, 2, lf, L)
    assert is_self_colliding(blk)
    assert classify_collision(blk, blk).kind is CollisionKind.CRITICAL
    assert compute_run_blocks(lf, compute_runs(L)) == []


def test_make_block_validation():
    L = from_string("yeep$yaass")
    lf = lf_mapping(L)
    with pytest.raises(InvalidInputError):
        make_block(1, 0, 1, lf, L)     # column 0 holds y and e
    with pytest.raises(InvalidInputError):
        make_block(0, 3, 2, lf)


def test_run_blocks_against_brute_force_exhaustive():
    for n in range(1, 10):
        for tup in itertools.product(b"ab", repeat=n):
            L = bwt(bytes(tup))
            lf, runs, blocks = setup(L)
            assert sorted(b.key for b in blocks) == width_maximal_run_blocks(L.tolist(), lf.tolist()), tup


def test_run_blocks_against_brute_force_random():
    rng = np.random.default_rng(7)
    for _ in range(150):
        sigma = int(rng.choice([2, 3, 4]))
        n = int(rng.integers(1, 40))
        if rng.random() < 0.5:
            seed = rng.integers(0, sigma, int(rng.integers(1, 8)))
            data = np.tile(seed, n // seed.size + 1)[:n]
            data[rng.integers(0, n, 2)] = rng.integers(0, sigma, 2)
        else:
            data = rng.integers(0, sigma, n)
        L = bwt((data + 97).astype(np.uint8).tobytes())
        lf, runs, blocks = setup(L)
        assert sorted(b.key for b in blocks) == width_maximal_run_blocks(L.tolist(), lf.tolist())
        for b in blocks:
            assert is_run_block(b, L) and b.height > 1 and b.width > 1
            assert not is_self_colliding(b)


def periodic_bwts(count, seed):
    """BWTs of mutated periodic texts, which are rich in colliding run-blocks."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        period = rng.integers(0, int(rng.choice([2, 4])), int(rng.integers(3, 40)))
        data = np.tile(period, int(rng.integers(5, 40)))
        m = int(rng.integers(1, 6))
        data[rng.integers(0, data.size, m)] = rng.integers(0, 4, m)
        yield bwt((data + 97).astype(np.uint8).tobytes())


def test_classification_against_definition():
    seen = {k: 0 for k in ("none", "compensable", "critical")}
    for L in periodic_bwts(150, 8):
        lf, runs, blocks = setup(L)
        lfl = lf.tolist()
        for a, b in itertools.combinations(blocks, 2):
            want = naive_collision(a.key, b.key, lfl)
            seen[want] += 1
            assert classify_collision(a, b).kind.value == want
    assert seen["compensable"] > 0 and seen["critical"] > 0


def test_shared_entries_against_pairwise_scan():
    from tbwz.blocks import _shared_entries
    for L in periodic_bwts(60, 9):
        blocks = setup(L)[2]
        want = {}
        for a, b in itertools.combinations_with_replacement(range(len(blocks)), 2):
            for xa, xb in itertools.product(range(blocks[a].width), range(blocks[b].width)):
                if a == b and xa >= xb:
                    continue
                (lo1, hi1), (lo2, hi2) = blocks[a].column(xa), blocks[b].column(xb)
                if max(lo1, lo2) <= min(hi1, hi2):
                    want.setdefault((a, b), set()).add((xa, xb, max(lo1, lo2), min(hi1, hi2)))
        got = _shared_entries(blocks)
        assert list(got) == sorted(got)
        # a block meeting itself may list a column pair in either order
        norm = {k: {(min(e[0], e[1]), max(e[0], e[1]), *e[2:]) if k[0] == k[1] else e for e in v}
                for k, v in got.items()}
        assert norm == want
        assert sum(map(len, got.values())) == sum(map(len, want.values()))


def test_critical_run_block_pair_becomes_conflict():
    L = bwt(b"aababbaababb")
    lf, runs, blocks = setup(L)
    keys = sorted(b.key for b in blocks)
    assert (5, 0, 1) in keys and (1, 5, 8) in keys
    a = next(b for b in blocks if b.key == (5, 0, 1))
    b = next(b for b in blocks if b.key == (1, 5, 8))
    assert classify_collision(a, b).kind is CollisionKind.CRITICAL
    assert naive_collision(a.key, b.key, lf.tolist()) == "critical"
    g = build_collision_graph(blocks)
    ia, ib = blocks.index(a), blocks.index(b)
    assert (min(ia, ib), max(ia, ib)) in g.conflicts
    assert critical_pairs(blocks) == [(min(ia, ib), max(ia, ib))]


def test_collision_graph_orientation_and_removal():
    L = from_string("yeep$yaass")
    lf = lf_mapping(L)
    outer = make_block(2, 8, 8, lf, L)
    inner = make_block(0, 6, 7, lf, L)
    g = build_collision_graph([outer, inner])
    assert g.edges == [(1, 0)] and g.collisions == 1
    assert g.outer[1] == {0} and g.inner[0] == {1}
    g.remove(0)
    assert g.outer[1] == set() and g.inner[0] == set()


def test_overlaid_collision_is_dropped():
    found = 0
    for L in periodic_bwts(300, 9):
        lf, runs, blocks = setup(L)
        g = build_collision_graph(blocks)
        linked = {frozenset(e) for e in g.edges} | {frozenset(c) for c in g.conflicts}
        for a, b in itertools.combinations(range(len(blocks)), 2):
            if classify_collision(blocks[a], blocks[b]).kind is CollisionKind.NONE or frozenset((a, b)) in linked:
                continue
            # an unlinked colliding pair is covered by a third block on its whole shared area
            shared = blocks[a].positions() & blocks[b].positions()
            assert any(shared <= blocks[c].positions() for c in range(len(blocks)) if c not in (a, b))
            found += 1
    assert found > 0


def test_graph_dataclass_direct():
    bl = [object(), object(), object()]
    g = CollisionGraph(bl, [(0, 1), (2, 1)], 2)
    assert g.inner[1] == {0, 2} and g.outer[0] == {1}
