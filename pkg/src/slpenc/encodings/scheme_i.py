"""Encoding I: endpoints stored explicitly in R1 (one per non-last node) and
R2 (both children of every last node)."""

from __future__ import annotations

from ..scd import ScDecomposition, renumber, sc_decompose
from ..slp import Slp, check
from .common import CorruptEncoding, Encoding, common_components, path_layout, sym_array


class EncodingI(Encoding):
    scheme = 1
    extra_components = ("R1", "R2")

    def expected_sizes(self) -> dict:
        sizes = super().expected_sizes()
        w = self.sym_width
        sizes["R1"] = (self.n - self.n_prime) * w
        sizes["R2"] = 2 * self.n_prime * w
        return sizes

    def check_structure(self) -> None:
        super().check_structure()
        if self.R1.width != self.sym_width or self.R2.width != self.sym_width:
            raise CorruptEncoding("R1/R2 width does not match ceil(lg(n + sigma))")

    def endpoint(self, path, i: int) -> int:
        r, u0, m, d0, t = path
        D = self.D
        if i <= t:
            return int(self.R1.get(D.select0(D.rank0(d0) + i) - 1)) + 1
        if i <= t + 2:
            return int(self.R2.get(2 * (r - 1) + i - t - 1)) + 1
        return int(self.R1.get(D.select1(D.rank1(d0) + m + 2 - i) - 1)) + 1

    def children(self, u: int) -> tuple[int, int]:
        if not 1 <= u <= self.n:
            raise IndexError(f"variable {u} outside [1..{self.n}]")
        P = self.P
        k = P.rank1(u)
        if P.access(u):
            get = self.R2.get
            return int(get(2 * k - 2)) + 1, int(get(2 * k - 1)) + 1
        j = u - k
        v = int(self.R1.get(j - 1)) + 1
        if self.D.access(j):
            return u + 1, v
        return v, u + 1

    def formula_bits(self) -> int:
        n, n1 = self.n, self.n_prime
        return n * self.len_width + (n + n1) * self.sym_width + 4 * n - 2 * n1


def build_encoding_I(slp: Slp, dec: ScDecomposition | None = None, order=None, backend=None) -> EncodingI:
    """Encode ``slp``; paths are laid out in ``order`` (default: decomposition order)."""
    check(slp)
    if dec is None:
        dec = sc_decompose(slp)
    if order is None:
        order = range(1, dec.n_prime + 1)
    g, d = renumber(slp, dec, order)
    layouts = [path_layout(g, p) for p in d.paths]
    comps = common_components(g, d.paths, layouts, backend)
    r1, r2 = [], []
    for path in d.paths:
        for u in path[:-1]:
            a, b = g.rules[u - 1]
            r1.append(b if a == u + 1 else a)
        r2.extend(g.rules[path[-1] - 1])
    enc = EncodingI(
        start=g.start,
        R1=sym_array(r1, g.n, g.sigma, backend),
        R2=sym_array(r2, g.n, g.sigma, backend),
        **comps,
    )
    enc.source = g
    return enc
