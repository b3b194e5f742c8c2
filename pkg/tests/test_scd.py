import random
from collections import Counter

import pytest
from grammars import (
    GRAMMAR_A,
    GRAMMAR_B,
    chain,
    fibonacci,
    random_slp,
    small_random_slp,
    suite,
)
from hypothesis import given, settings
from hypothesis import strategies as st

from slpenc.scd import flog, non_sc_edges_on_path, path_counts, renumber, sc_decompose
from slpenc.slp import expand


def occurrence_counts(slp):
    """Root-to-node path counts by walking the whole derivation tree."""
    seen = Counter()
    stack = [slp.start]
    while stack:
        x = stack.pop()
        seen[x] += 1
        if x <= slp.n:
            stack.extend(slp.rules[x - 1])
    return seen


def test_grammar_b_decomposition():
    dec = sc_decompose(GRAMMAR_B)
    assert dec.paths == [[1, 2], [3, 4]]
    assert dec.n_prime == 2
    assert dec.node_path[3] == (2, 1)


def test_grammar_a_has_no_sc_edges():
    dec = sc_decompose(GRAMMAR_A)
    assert dec.paths == [[1], [2]]


def test_flog_exact_on_large_values():
    assert flog(1) == 0
    assert flog((1 << 63) - 1) == 62
    assert flog(1 << 63) == 63


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_path_counts_match_tree_walk(seed):
    g = small_random_slp(random.Random(seed), 200)
    counts = path_counts(g)
    occ = occurrence_counts(g)
    for x in range(1, g.n + g.sigma + 1):
        assert counts.in_paths[x] == occ.get(x, 0)
        if x <= g.n:
            assert counts.out_paths[x] == len(expand(g, x))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 300), st.integers(1, 8))
def test_sc_edges_are_exactly_equal_pair_edges(seed, n, sigma):
    g = random_slp(random.Random(seed), n, sigma)
    counts = path_counts(g)
    dec = sc_decompose(g, counts)
    covered = sorted(v for p in dec.paths for v in p)
    assert covered == list(range(1, g.n + 1))
    for u in range(1, g.n + 1):
        for v in set(g.rules[u - 1]):
            same = counts.pair(u) == counts.pair(v)
            assert dec.is_sc_edge(u, v) == same
    for path in dec.paths:
        for a, b in zip(path, path[1:]):
            assert b in g.rules[a - 1]


@pytest.mark.parametrize("g", [GRAMMAR_A, GRAMMAR_B, chain(300), chain(300, left=False), fibonacci(25)])
def test_non_sc_bound_fixed_grammars(g):
    dec = sc_decompose(g)
    N = g.N
    rng = random.Random(1)
    positions = range(1, N + 1) if N <= 4096 else [rng.randint(1, N) for _ in range(3000)]
    for p in positions:
        assert (1 << non_sc_edges_on_path(g, dec, p)) <= N * N


def test_non_sc_bound_random_suite():
    rng = random.Random(7)
    for g in suite(40, seed=11, max_n=1500):
        dec = sc_decompose(g)
        N = g.N
        for _ in range(100):
            assert (1 << non_sc_edges_on_path(g, dec, rng.randint(1, N))) <= N * N


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 120))
def test_renumber_keeps_text_and_makes_blocks(seed, n):
    rng = random.Random(seed)
    g = random_slp(rng, n, rng.randint(1, 4), cap=1 << 12)
    dec = sc_decompose(g)
    order = list(range(1, dec.n_prime + 1))
    rng.shuffle(order)
    g2, d2 = renumber(g, dec, order)
    assert expand(g2, g2.start) == expand(g, g.start)
    nid = 0
    for k, path in enumerate(d2.paths):
        assert path == list(range(nid + 1, nid + len(path) + 1))
        assert len(path) == len(dec.paths[order[k] - 1])
        nid += len(path)
    # the SC structure of the renumbered grammar is the relabelled original
    d3 = sc_decompose(g2)
    assert sorted(map(tuple, d3.paths)) == sorted(map(tuple, d2.paths))


def test_renumber_rejects_non_permutation():
    dec = sc_decompose(GRAMMAR_B)
    with pytest.raises(ValueError):
        renumber(GRAMMAR_B, dec, [1, 1])
