"""Encoding II: one incoming non-SC edge per non-root SC-path is left
implicit.

The chosen edges form a tree T_E over the SC-paths, rooted at the path of the
start symbol; paths are laid out in breadth-first order of T_E so a chosen
endpoint is recovered as the topmost node of the k-th child path.  ``M_E``
marks chosen slots in the conceptual endpoint list L; ``R_E`` stores the
others.
"""

from __future__ import annotations

from collections import deque

from ..scd import ScDecomposition, renumber, sc_decompose
from ..slp import Slp, check
from ..succinct import BitVec, Louds
from .common import CorruptEncoding, Encoding, common_components, path_layout, sym_array


class EncodingII(Encoding):
    scheme = 2
    extra_components = ("R_E", "M_E", "T_E")

    def expected_sizes(self) -> dict:
        sizes = super().expected_sizes()
        sizes["R_E"] = (self.n + 1) * self.sym_width
        sizes["M_E"] = self.n + self.n_prime
        sizes["T_E"] = 2 * self.n_prime
        return sizes

    def check_structure(self) -> None:
        super().check_structure()
        if self.R_E.width != self.sym_width:
            raise CorruptEncoding("R_E width does not match ceil(lg(n + sigma))")
        if self.M_E.ones != self.n_prime - 1:
            raise CorruptEncoding("M_E must mark n' - 1 chosen endpoints")
        if self.T_E.nodes != self.n_prime:
            raise CorruptEncoding("T_E must have one node per SC-path")
        if self.start != 1:
            raise CorruptEncoding("the start symbol must head the first path")

    def endpoint(self, path, i: int) -> int:
        r, u0 = path[0], path[1]
        idx = u0 + r - 1 + i
        M = self.M_E
        if M.access(idx):
            k = M.rank1(idx) - M.rank1(u0 + r - 1)
            return self.P.select1(self.T_E.child(r, k) - 1) + 1
        return int(self.R_E.get(M.rank0(idx) - 1)) + 1

    def _side_endpoint(self, r, u0, d0, i, right):
        return self.endpoint((r, u0), i)

    def directory_bits(self) -> int:
        return super().directory_bits() + self.M_E.directory_bits() + self.T_E.stored.directory_bits()

    def formula_bits(self) -> int:
        """Closed form counting n entries for R_E."""
        n, n1 = self.n, self.n_prime
        return n * self.len_width + n * self.sym_width + 5 * n + n1

    def formula_check(self, comps) -> bool:
        # R_E holds n + 1 entries; the closed form counts n of them
        return sum(comps.values()) == self.formula_bits() + self.sym_width

    def space_report(self) -> dict:
        rep = super().space_report()
        rep["formula_exact_bits"] = self.formula_bits() + self.sym_width
        return rep


def choose_tree_edges(slp: Slp, dec: ScDecomposition) -> dict:
    """For every non-root path Q pick one incoming non-SC edge into its top.

    Returns ``{Q: (P, slot)}``: the edge leaves path P as its ``slot``-th
    endpoint.  Among candidates the smallest (P, source position in P,
    left-before-right) wins.
    """
    root = dec.node_path[slp.start][0]
    best = {}
    for pi, path in enumerate(dec.paths, 1):
        lay = path_layout(slp, path)
        for slot, (v, (src, side)) in enumerate(zip(lay["endpoints"], lay["sources"]), 1):
            if v > slp.n:
                continue
            q, pos = dec.node_path[v]
            if pos != 1 or q == root:
                continue
            key = (pi, dec.node_path[src][1], side)
            if q not in best or key < best[q][0]:
                best[q] = (key, pi, slot)
    missing = [q for q in range(1, dec.n_prime + 1) if q != root and q not in best]
    if missing:
        raise AssertionError(f"paths {missing[:5]} have no incoming non-SC edge")
    return {q: (pi, slot) for q, (_, pi, slot) in best.items()}


def build_encoding_II(slp: Slp, dec: ScDecomposition | None = None, backend=None) -> EncodingII:
    check(slp)
    if dec is None:
        dec = sc_decompose(slp)
    root = dec.node_path[slp.start][0]
    chosen = choose_tree_edges(slp, dec)
    kids = {}
    for q, (pi, slot) in chosen.items():
        kids.setdefault(pi, []).append((slot, q))
    order, degrees = [], []
    queue = deque([root])
    while queue:
        pi = queue.popleft()
        order.append(pi)
        ch = sorted(kids.get(pi, ()))
        degrees.append(len(ch))
        queue.extend(q for _, q in ch)
    if len(order) != dec.n_prime:
        raise AssertionError("chosen edges do not span all SC-paths")
    rank = {pi: r for r, pi in enumerate(order, 1)}

    g, d = renumber(slp, dec, order)
    layouts = [path_layout(g, p) for p in d.paths]
    comps = common_components(g, d.paths, layouts, backend)
    marked = {(rank[pi], slot) for pi, slot in chosen.values()}
    mbits, re = [], []
    for r, lay in enumerate(layouts, 1):
        for slot, v in enumerate(lay["endpoints"], 1):
            if (r, slot) in marked:
                mbits.append(1)
            else:
                mbits.append(0)
                re.append(v)
    for q, (pi, slot) in chosen.items():
        top = d.paths[rank[q] - 1][0]
        if layouts[rank[pi] - 1]["endpoints"][slot - 1] != top:
            raise AssertionError("chosen endpoint is not the top of its child path")
    enc = EncodingII(
        start=g.start,
        R_E=sym_array(re, g.n, g.sigma, backend),
        M_E=BitVec(mbits, backend=backend),
        T_E=Louds.from_degrees(degrees, backend=backend),
        **comps,
    )
    enc.source = g
    return enc
