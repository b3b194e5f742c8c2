"""Compacted binary tries over prefix sums, searched by interval.

Given ``0 = g_0 < g_1 < ... < g_m``, an interval search for ``p`` in
``(0..g_m]`` returns the ``k`` with ``p`` in ``(g_k..g_{k+1}]``.  The trie
over the fixed-width codes of ``g_1..g_m`` has one internal node per
boundary ``g_k`` (the LCA of leaves ``k`` and ``k+1``), and a wide interval
sits close to the root, so the search costs
``O(1 + lg g_m - lg(g_{k+1} - g_k))`` node visits.

Codes are ``g_i - 1`` written in ``ceil(lg g_m)`` bits; the shift by one
lets ``g_m`` itself fit when it is a power of two.
"""

from __future__ import annotations

from bisect import bisect_left

from .succinct import BitVec, PostOrderTree, StructureError


def ceil_lg(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def trie_width(gm: int) -> int:
    """Code width for a trie whose largest value is ``gm``; at least 1."""
    return max(1, ceil_lg(gm))


def _check(A) -> list:
    A = [int(a) for a in A]
    if not A:
        raise ValueError("need at least one prefix sum")
    prev = 0
    for i, a in enumerate(A, 1):
        if a <= prev:
            raise ValueError(f"prefix sums must be strictly increasing and positive (g_{i}={a})")
        prev = a
    return A


def _walk(A):
    """Yield ('leaf', i) / ('node', k, depth) in post-order."""
    keys = [a - 1 for a in A]
    out = []
    # explicit stack: (lo, hi, depth, state)
    stack = [(0, len(keys), 0, None)]
    while stack:
        lo, hi, depth, split = stack.pop()
        if split is not None:
            out.append(("node", split, depth))
            continue
        if hi - lo == 1:
            out.append(("leaf", lo + 1))
            continue
        beta = (keys[lo] ^ keys[hi - 1]).bit_length() - 1
        mid = bisect_left(keys, (keys[hi - 1] >> beta) << beta, lo, hi)
        stack.append((lo, hi, depth, mid))
        stack.append((mid, hi, depth + 1, None))
        stack.append((lo, mid, depth + 1, None))
    return out


def build_trie_bits(A) -> str:
    """Post-order bits (leaf 0, internal 1) of the compacted trie over ``A``."""
    return "".join("0" if e[0] == "leaf" else "1" for e in _walk(_check(A)))


def build_trie(A, **kw) -> PostOrderTree:
    return PostOrderTree(BitVec(build_trie_bits(A), **kw))


def internal_nodes(A) -> list[tuple[int, int]]:
    """``(k, depth)`` for every internal node, where the node separates
    leaves ``k`` and ``k+1`` (i.e. is assigned interval ``(g_k..g_{k+1}]``)."""
    return [(e[1], e[2]) for e in _walk(_check(A)) if e[0] == "node"]


def interval_search(tree: PostOrderTree, g, p: int, stats=None) -> int:
    """Return ``k`` with ``p`` in ``(g(k)..g(k+1)]``.

    ``g`` is a 1-based getter (a callable) or a sequence holding
    ``g_1..g_m`` at indices ``0..m-1``.  If ``stats`` is given, its
    ``trie_nodes`` attribute is incremented once per internal node visited.
    """
    if not callable(g):
        seq = g
        g = lambda i: seq[i - 1]  # noqa: E731
    m = tree.leaves
    gm = g(m)
    if not 1 <= p <= gm:
        raise ValueError(f"position {p} outside (0..{gm}]")
    if p <= g(1):
        return 0
    u = tree.root
    visited = 0
    while True:
        if tree.isleaf(u):
            raise StructureError("interval search reached a leaf: corrupt trie or prefix sums")
        visited += 1
        lc = tree.lchild(u)
        i = tree.leafrank(tree.rmleaf(lc))
        if p <= g(i):
            u = lc
            continue
        if p <= g(i + 1):
            if stats is not None:
                stats.trie_nodes += visited
            return i
        u = u - 1
