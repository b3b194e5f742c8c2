"""Encoding III: the left child of every path's last node is left implicit.

Terminals take ids ``1..sigma`` and variables ``sigma+1..sigma+n``.  Paths
are ordered so that the chosen endpoints form a non-decreasing sequence,
which is stored in unary (``0`` per unit of difference, ``1`` as separator)
in S; every other endpoint goes to R_X in list order.
"""

from __future__ import annotations

from ..scd import ScDecomposition, renumber, sc_decompose
from ..slp import Slp, check
from ..succinct import BitVec
from .common import CorruptEncoding, Encoding, common_components, path_layout, sym_array


class NoMonotoneOrder(RuntimeError):
    """No path order making the chosen endpoints non-decreasing was found."""


class EncodingIII(Encoding):
    scheme = 3
    terminals_first = True
    extra_components = ("R_X", "S")

    def expected_sizes(self) -> dict:
        sizes = super().expected_sizes()
        sizes["R_X"] = self.n * self.sym_width
        return sizes

    def check_structure(self) -> None:
        super().check_structure()
        if self.R_X.width != self.sym_width:
            raise CorruptEncoding("R_X width does not match ceil(lg(n + sigma))")
        S = self.S
        if S.ones != self.n_prime or len(S) > self.s_bound or (len(S) and not S.access(len(S))):
            raise CorruptEncoding("S must hold n' unary values ending in a separator")

    @property
    def s_bound(self) -> int:
        return self.n + self.n_prime + self.sigma

    def chosen(self, r: int) -> int:
        return self.S.select1(r) - r

    def endpoint(self, path, i: int) -> int:
        r, u0, t = path[0], path[1], path[4]
        if i == t + 1:
            return self.S.select1(r) - r
        return int(self.R_X.get(u0 + i - (2 if i > t + 1 else 1))) + 1

    def _side_endpoint(self, r, u0, d0, i, right):
        return int(self.R_X.get(u0 + i - (2 if right else 1))) + 1

    def directory_bits(self) -> int:
        return super().directory_bits() + self.S.directory_bits()

    def formula_bits(self) -> int:
        n, n1 = self.n, self.n_prime
        return n * self.len_width + n * self.sym_width + 5 * n - n1 + self.sigma

    def formula_check(self, comps) -> bool:
        # S is reported at its actual length; the closed form uses its bound
        s = comps["S"]
        return s <= self.s_bound and sum(comps.values()) - s + self.s_bound == self.formula_bits()


def _chosen_keys(slp: Slp, dec: ScDecomposition):
    """Per path: ('t', terminal rank) or ('v', path of target, position)."""
    out = []
    for path in dec.paths:
        c = slp.rules[path[-1] - 1][0]
        if c > slp.n:
            out.append(("t", c - slp.n))
        else:
            out.append(("v",) + tuple(dec.node_path[c]))
    return out


def bfs_seed(slp: Slp, dec: ScDecomposition) -> list:
    """A path order whose chosen-endpoint sequence is non-decreasing.

    Each path points at the path holding its chosen endpoint; these pointers
    form a forest whose roots choose terminals.  Listing roots by terminal
    and then children of each listed path by position gives the order.
    """
    keys = _chosen_keys(slp, dec)
    roots = sorted((k[1], pi) for pi, k in enumerate(keys, 1) if k[0] == "t")
    kids = {}
    for pi, k in enumerate(keys, 1):
        if k[0] == "v":
            kids.setdefault(k[1], []).append((k[2], pi))
    order = [pi for _, pi in roots]
    i = 0
    while i < len(order):
        order.extend(pi for _, pi in sorted(kids.get(order[i], ())))
        i += 1
    if len(order) != dec.n_prime:
        raise NoMonotoneOrder("chosen-endpoint pointers contain a cycle")
    return order


def monotone_order(slp: Slp, dec: ScDecomposition, seed=None, max_rounds=None) -> tuple[list, int]:
    """Iterate 'renumber, then stable-sort paths by chosen id' to a fixed point.

    Returns ``(order, rounds)`` where the last round changed nothing.  The
    default seed is :func:`bfs_seed`, which is already a fixed point.
    """
    keys = _chosen_keys(slp, dec)
    sigma = slp.sigma
    order = list(bfs_seed(slp, dec) if seed is None else seed)
    if max_rounds is None:
        max_rounds = max(2, 2 * dec.n_prime)
    seen = set()

    def key_fn(offsets):
        def key(pi):
            k = keys[pi - 1]
            return k[1] if k[0] == "t" else sigma + offsets[k[1]] + k[2]
        return key

    for rnd in range(1, max_rounds + 1):
        offsets, acc = {}, 0
        for pi in order:
            offsets[pi] = acc
            acc += len(dec.paths[pi - 1])
        key = key_fn(offsets)
        new = sorted(order, key=key)
        if new == order:
            return order, rnd
        state = tuple(order)
        if state in seen:
            break
        seen.add(state)
        order = new
    offsets, acc = {}, 0
    for pi in order:
        offsets[pi] = acc
        acc += len(dec.paths[pi - 1])
    key = key_fn(offsets)
    bad = [(order[i], order[i + 1]) for i in range(len(order) - 1) if key(order[i]) > key(order[i + 1])]
    raise NoMonotoneOrder(
        f"no fixed point after {max_rounds} rounds; adjacent decreasing path pairs: {bad[:10]}"
    )


def build_encoding_III(slp: Slp, dec: ScDecomposition | None = None, seed=None, max_rounds=None, backend=None) -> EncodingIII:
    check(slp)
    if dec is None:
        dec = sc_decompose(slp)
    order, rounds = monotone_order(slp, dec, seed, max_rounds)
    g, d = renumber(slp, dec, order)
    layouts = [path_layout(g, p) for p in d.paths]
    comps = common_components(g, d.paths, layouts, backend)
    n, sigma = g.n, g.sigma

    def native(v):
        return v - n if v > n else v + sigma

    rx, chosen = [], []
    for lay in layouts:
        t = lay["t"]
        for slot, v in enumerate(lay["endpoints"], 1):
            if slot == t + 1:
                chosen.append(native(v))
            else:
                rx.append(native(v))
    sbits, prev = [], 0
    for c in chosen:
        if c < prev:
            raise NoMonotoneOrder("chosen endpoints are not non-decreasing")
        sbits.extend([0] * (c - prev) + [1])
        prev = c
    enc = EncodingIII(
        start=native(g.start),
        R_X=sym_array(rx, n, sigma, backend),
        S=BitVec(sbits, backend=backend),
        **comps,
    )
    enc.source = g
    enc.rounds = rounds
    return enc
