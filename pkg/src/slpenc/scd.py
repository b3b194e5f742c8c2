"""Symmetric centroid decomposition of the grammar DAG.

Every node ``v`` gets the pair ``(floor(lg in(v)), floor(lg out(v)))`` where
``in(v)`` counts root-to-``v`` paths and ``out(v)`` counts ``v``-to-leaf paths
(``out(v) == |<v>|``).  An edge whose endpoints carry equal pairs is an
SC-edge; SC-edges chain into vertex-disjoint SC-paths.
"""

from __future__ import annotations

from dataclasses import dataclass

from .slp import MAX_LENGTH, Slp


def flog(x: int) -> int:
    """floor(lg x) for x >= 1, exact for arbitrarily large integers."""
    return x.bit_length() - 1


@dataclass(frozen=True)
class PathCounts:
    in_paths: list  # index = symbol id, 0 unused
    out_paths: list

    def pair(self, v: int) -> tuple[int, int]:
        return flog(self.in_paths[v]), flog(self.out_paths[v])


def path_counts(slp: Slp) -> PathCounts:
    n = slp.n
    size = n + slp.sigma + 1
    inp = [0] * size
    inp[slp.start] = 1
    order = slp.topological_order()
    for x in order:
        c = inp[x]
        a, b = slp.rules[x - 1]
        inp[a] += c
        inp[b] += c
    for x in range(1, size):
        if inp[x] >= MAX_LENGTH:
            raise OverflowError(f"path count into symbol {x} exceeds 64 bits")
    outp = list(slp.lengths)
    return PathCounts(inp, outp)


@dataclass(frozen=True)
class ScDecomposition:
    """SC-paths of the variables, each listed topmost node first.

    ``node_path[v] = (r, i)`` places variable ``v`` at position ``i`` of path
    ``r`` (both 1-based).  ``renumber[v]`` maps the ids of the grammar this
    decomposition was derived from to the ids of the grammar it describes
    (identity unless produced by :func:`renumber`).
    """

    paths: list
    node_path: list
    sc_child: list  # sc_child[v] = SC-successor of variable v, 0 if last
    renumber: list

    @property
    def n_prime(self) -> int:
        return len(self.paths)

    def path_of(self, v: int) -> list:
        return self.paths[self.node_path[v][0] - 1]

    def is_sc_edge(self, u: int, v: int) -> bool:
        return u < len(self.sc_child) and self.sc_child[u] == v


def sc_decompose(slp: Slp, counts: PathCounts | None = None) -> ScDecomposition:
    if counts is None:
        counts = path_counts(slp)
    n = slp.n
    pair = [None] * (n + slp.sigma + 1)
    for v in range(1, n + slp.sigma + 1):
        if counts.in_paths[v]:
            pair[v] = counts.pair(v)
    sc_child = [0] * (n + 1)
    has_parent = [False] * (n + 1)
    for u in range(1, n + 1):
        a, b = slp.rules[u - 1]
        hits = [v for v in ((a, b) if a != b else (a,)) if pair[v] == pair[u]]
        if len(hits) > 1:
            raise AssertionError(f"variable {u} has two outgoing SC-edges")
        if hits:
            v = hits[0]
            if v > n:
                raise AssertionError(f"SC-edge from {u} targets terminal {v}")
            if has_parent[v]:
                raise AssertionError(f"variable {v} has two incoming SC-edges")
            has_parent[v] = True
            sc_child[u] = v
    paths = []
    node_path = [None] * (n + 1)
    for u in range(1, n + 1):
        if has_parent[u]:
            continue
        path = [u]
        while sc_child[path[-1]]:
            path.append(sc_child[path[-1]])
        paths.append(path)
        r = len(paths)
        for i, v in enumerate(path, 1):
            node_path[v] = (r, i)
    return ScDecomposition(paths, node_path, sc_child, list(range(n + slp.sigma + 1)))


def renumber(slp: Slp, dec: ScDecomposition, order) -> tuple[Slp, ScDecomposition]:
    """Relabel variables so path ``order[k]`` takes the k-th block of ids.

    ``order`` lists 1-based path indices of ``dec``; terminals keep their ids.
    """
    order = list(order)
    if sorted(order) != list(range(1, dec.n_prime + 1)):
        raise ValueError("order must be a permutation of the path indices")
    n = slp.n
    new = list(range(n + slp.sigma + 1))
    nid = 0
    for r in order:
        for v in dec.paths[r - 1]:
            nid += 1
            new[v] = nid
    rules = [None] * n
    for v in range(1, n + 1):
        a, b = slp.rules[v - 1]
        rules[new[v] - 1] = (new[a], new[b])
    out = Slp(n=n, sigma=slp.sigma, start=new[slp.start], rules=rules, alphabet=slp.alphabet)
    paths = [[new[v] for v in dec.paths[r - 1]] for r in order]
    node_path = [None] * (n + 1)
    sc_child = [0] * (n + 1)
    for r, path in enumerate(paths, 1):
        for i, v in enumerate(path, 1):
            node_path[v] = (r, i)
            if i < len(path):
                sc_child[v] = path[i]
    return out, ScDecomposition(paths, node_path, sc_child, new)


def non_sc_edges_on_path(slp: Slp, dec: ScDecomposition, p: int) -> int:
    """Non-SC edges on the derivation-tree path from the root to leaf ``p``."""
    lens = slp.lengths
    x = slp.start
    count = 0
    n = slp.n
    while x <= n:
        a, b = slp.rules[x - 1]
        if p <= lens[a]:
            y = a
        else:
            p -= lens[a]
            y = b
        if dec.sc_child[x] != y:
            count += 1
        x = y
    return count
