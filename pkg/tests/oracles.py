"""Independent oracles: brute-force encoding I, bit scans, pointer trees.

For encoding I, path counts come from walking the derivation tree, SC-paths
from comparing floor-log pairs directly, and tries from a recursive binary
split of the fixed-width codes.
"""

from __future__ import annotations

from collections import Counter


def _occurrences(slp):
    seen = Counter()
    stack = [slp.start]
    while stack:
        x = stack.pop()
        seen[x] += 1
        if x <= slp.n:
            stack.extend(slp.rules[x - 1])
    return seen


def _lengths(slp):
    memo = {}

    def ln(x):
        if x > slp.n:
            return 1
        if x not in memo:
            a, b = slp.rules[x - 1]
            memo[x] = ln(a) + ln(b)
        return memo[x]

    return ln


def _lg(x):
    k = 0
    while (1 << (k + 1)) <= x:
        k += 1
    return k


def _trie_bits(keys, width):
    def rec(ks, bit):
        if len(ks) == 1:
            return "0"
        while True:
            zero = [k for k in ks if not (k >> bit) & 1]
            one = [k for k in ks if (k >> bit) & 1]
            if zero and one:
                return rec(zero, bit - 1) + rec(one, bit - 1) + "1"
            bit -= 1

    return rec(keys, width - 1)


def brute_encoding_i(slp):
    """Return P, D, R1, R2, G, B (bit strings and plain value lists)."""
    occ = _occurrences(slp)
    ln = _lengths(slp)
    n = slp.n

    def pair(x):
        return (_lg(occ[x]), _lg(ln(x)))

    sc_next = {}
    has_parent = set()
    for u in range(1, n + 1):
        for v in set(slp.rules[u - 1]):
            if v <= n and pair(u) == pair(v):
                sc_next[u] = v
                has_parent.add(v)
    paths = []
    for u in range(1, n + 1):
        if u in has_parent:
            continue
        path = [u]
        while path[-1] in sc_next:
            path.append(sc_next[path[-1]])
        paths.append(path)
    new = {}
    for path in paths:
        for v in path:
            new[v] = len(new) + 1

    def rn(x):
        return new[x] if x <= n else x

    P, D, R1, R2, G, B = "", "", [], [], [], ""
    for path in paths:
        P += "0" * (len(path) - 1) + "1"
        left_pieces, right_pieces = [], []
        for u, nxt in zip(path, path[1:]):
            a, b = slp.rules[u - 1]
            if a == nxt:
                D += "1"
                R1.append(rn(b))
                right_pieces.append(ln(b))
            else:
                D += "0"
                R1.append(rn(a))
                left_pieces.append(ln(a))
        um = path[-1]
        R2.extend(rn(c) for c in slp.rules[um - 1])
        pieces = left_pieces + [ln(um)] + right_pieces[::-1]
        acc, g = 0, []
        for piece in pieces:
            acc += piece
            g.append(acc)
        G.extend(g)
        B += _trie_bits([x - 1 for x in g], max(1, (g[-1] - 1).bit_length()))
    return {"P": P, "D": D, "R1": R1, "R2": R2, "G": G, "B": B}


# ---- bit vectors and trees -------------------------------------------------


def scan_rank(bits, b, i):
    i = max(0, min(i, len(bits)))
    return sum(1 for x in bits[:i] if x == b)


def scan_select(bits, b, j):
    if j <= 0:
        return 0
    seen = 0
    for k, x in enumerate(bits, 1):
        if x == b:
            seen += 1
            if seen == j:
                return k
    return len(bits) + 1


def scan_bwd(bits, i, d):
    # largest j < i with excess(j) - excess(i) == d, excess counting 0 as +1
    exc = [0]
    for x in bits:
        exc.append(exc[-1] + (1 if x == 0 else -1))
    for j in range(i - 1, -1, -1):
        if exc[j] - exc[i] == d:
            return j
    return -1


def all_shapes(internal):
    """Every full binary tree with ``internal`` internal nodes (nested tuples)."""
    if internal == 0:
        return [None]
    out = []
    for k in range(internal):
        for left in all_shapes(k):
            for right in all_shapes(internal - 1 - k):
                out.append((left, right))
    return out


def pointer_tree(shape):
    """Post-order numbering with explicit pointers: per node (kind, left, right)."""
    nodes = []

    def walk(t):
        if t is None:
            nodes.append(("leaf", None, None))
            return len(nodes)
        lt = walk(t[0])
        rt = walk(t[1])
        nodes.append(("node", lt, rt))
        return len(nodes)

    walk(shape)
    return nodes


def oracle_queries(nodes):
    leaves = [k for k, nd in enumerate(nodes, 1) if nd[0] == "leaf"]

    def rmleaf(v):
        while nodes[v - 1][0] == "node":
            v = nodes[v - 1][2]
        return v

    return leaves, rmleaf
