"""Shared layout of the three encodings: P, D, G, B and SC-path geometry.

Variables are renumbered so every SC-path occupies a block of consecutive
ids, topmost node first.  For SC-path ``r`` with nodes ``u_1..u_m``
(``u_i = u_0 + i``):

* ``P[u] = 1`` iff ``u`` ends its path;
* ``D[rank0(P, u)]`` is 0 iff the non-SC child of a non-last node is its
  left child;
* the ``m + 1`` non-SC endpoints ``v_1..v_{m+1}`` are listed in left-to-right
  preorder, so ``<u_1> = <v_1> ... <v_{m+1}>``; the first ``t`` of them hang
  to the left of the path, ``v_{t+1}, v_{t+2}`` are the children of ``u_m``;
* ``G[u_1..u_m]`` holds prefix sums over the ``m`` pieces
  ``<v_1>, ..., <v_t>, <u_m>, <v_{t+3}>, ..., <v_{m+1}>``;
* ``B`` concatenates the post-order bits of one compacted trie per path.

Integer arrays store ``value - 1`` in ``ceil(lg max)`` bits.
"""

from __future__ import annotations

from itertools import accumulate

from ..slp import Slp
from ..succinct import BitVec, IntArray, PostOrderTree, StructureError
from ..trie import build_trie_bits, ceil_lg, interval_search


class CorruptEncoding(StructureError):
    """Encoded components are inconsistent with each other."""


def bit_size(c) -> int:
    return c.nbits if isinstance(c, IntArray) else len(c)


class Encoding:
    """Random-access encoding of an SLP; subclasses supply endpoint storage.

    Symbol ids returned by accessors are in the encoding's own numbering:
    schemes I and II use variables ``1..n`` and terminals ``n+1..n+sigma``;
    scheme III uses terminals ``1..sigma`` and variables ``sigma+1..sigma+n``.
    Methods taking a variable ``u`` always use the plain index ``1..n``.
    """

    scheme = 0
    # components serialized between D and G, in order
    extra_components: tuple = ()

    def __init__(self, *, n, n_prime, sigma, N, start, alphabet, P, D, G, B, **extra):
        self.n = n
        self.n_prime = n_prime
        self.sigma = sigma
        self.N = N
        self.start = start
        self.alphabet = bytes(alphabet)
        self.P = P
        self.D = D
        self.G = G
        self.B = B
        for name in self.extra_components:
            setattr(self, name, extra.pop(name))
        if extra:
            raise TypeError(f"unexpected components {sorted(extra)}")
        self.sym_width = ceil_lg(n + sigma)
        self.len_width = ceil_lg(N)
        self._voff = sigma if self.terminals_first else 0
        self._toff = 0 if self.terminals_first else n
        self._gget = G.get
        self.check_structure()

    terminals_first = False

    # ---- symbol conventions -------------------------------------------------

    def is_terminal(self, sym: int) -> bool:
        if self.terminals_first:
            return sym <= self.sigma
        return sym > self.n

    def var_of(self, sym: int) -> int:
        return sym - self._voff

    def var_sym(self, u: int) -> int:
        return u + self._voff

    def char(self, sym: int) -> int:
        return self.alphabet[sym - self._toff - 1]

    @property
    def start_var(self) -> int:
        return self.start - self._voff

    # ---- path geometry ------------------------------------------------------

    def path(self, r: int) -> tuple:
        """``(r, u_0, m, d_0, t)`` for SC-path ``r``."""
        P = self.P
        u0 = P.select1(r - 1)
        m = P.select1(r) - u0
        d0 = u0 - r + 1
        D = self.D
        t = D.rank0(d0 + m - 1) - D.rank0(d0)
        return (r, u0, m, d0, t)

    def sc_path_of(self, u: int) -> tuple[int, int, int]:
        """``(r, u_1, u_m)`` for the SC-path holding variable ``u``."""
        if not 1 <= u <= self.n:
            raise IndexError(f"variable {u} outside [1..{self.n}]")
        P = self.P
        r = P.rank1(u - 1) + 1
        return r, P.select1(r - 1) + 1, P.select1(r)

    def g(self, path, i: int) -> int:
        """``g_i`` of the path (``g_0 = 0``)."""
        if i == 0:
            return 0
        return int(self._gget(path[1] + i - 1)) + 1

    def trie(self, path) -> PostOrderTree:
        r, u0, m = path[0], path[1], path[2]
        return PostOrderTree(self.B, 2 * u0 + 1 - r, 2 * m - 1)

    # ---- endpoints and lengths ----------------------------------------------

    def endpoint(self, path, i: int) -> int:
        raise NotImplementedError

    def branch_endpoint(self, r: int, i: int) -> int:
        """``v_i`` of SC-path ``r``, ``1 <= i <= m + 1``."""
        path = self.path(r)
        if not 1 <= i <= path[2] + 1:
            raise IndexError(f"endpoint index {i} outside [1..{path[2] + 1}]")
        return self.endpoint(path, i)

    def children(self, u: int) -> tuple[int, int]:
        """Children ``R(u)`` of variable ``u`` as native symbol ids."""
        if not 1 <= u <= self.n:
            raise IndexError(f"variable {u} outside [1..{self.n}]")
        P, D = self.P, self.D
        if P.access(u):
            path = self.path(P.rank1(u))
            t = path[4]
            return self.endpoint(path, t + 1), self.endpoint(path, t + 2)
        r = P.rank1(u) + 1
        u0 = P.select1(r - 1)
        d0 = u0 - r + 1
        j = u - r + 1  # rank0(P, u)
        nxt = u + 1 + self._voff
        if D.access(j) == 0:
            return self._side_endpoint(r, u0, d0, D.rank0(j) - D.rank0(d0), False), nxt
        m = P.select1(r) - u0
        return nxt, self._side_endpoint(r, u0, d0, m + 2 - (D.rank1(j) - D.rank1(d0)), True)

    def _side_endpoint(self, r: int, u0: int, d0: int, i: int, right: bool) -> int:
        """``v_i`` known to hang off a non-last node (``i <= t`` or ``i > t + 2``)."""
        return self.endpoint(self.path(r), i)

    def var_length(self, u: int) -> int:
        """``|<u>|`` from the path's prefix sums."""
        if not 1 <= u <= self.n:
            raise IndexError(f"variable {u} outside [1..{self.n}]")
        r = self.P.rank1(u - 1) + 1
        return self._var_length(self.path(r), u)

    def _var_length(self, path, u: int) -> int:
        D = self.D
        u0, m, d0 = path[1], path[2], path[3]
        k = d0 + u - u0 - 1
        i1 = m - (D.rank1(k) - D.rank1(d0))
        i2 = D.rank0(k) - D.rank0(d0)
        return self.g(path, i1) - self.g(path, i2)

    def sym_length(self, sym: int) -> int:
        if self.is_terminal(sym):
            return 1
        return self.var_length(sym - self._voff)

    def prefix_sum(self, r: int, i: int) -> int:
        """``|<v_1>| + ... + |<v_i>|`` on SC-path ``r``."""
        return self._prefix_sum(self.path(r), i)

    def _prefix_sum(self, path, i: int) -> int:
        t = path[4]
        if i <= t:
            return self.g(path, i)
        if i == t + 1:
            return self.g(path, t) + self.sym_length(self.endpoint(path, t + 1))
        return self.g(path, i - 1)

    # ---- search steps -------------------------------------------------------

    def entry_offset(self, r: int, u: int, p: int) -> int:
        """Position in ``<u_1>`` of position ``p`` of ``<u>``, ``u`` on path ``r``."""
        return self._entry_offset(self.path(r), u, p)

    def _entry_offset(self, path, u: int, p: int) -> int:
        D = self.D
        d0 = path[3]
        tp = D.rank0(d0 + u - path[1] - 1) - D.rank0(d0)
        if tp > 0:
            return p + self.g(path, tp)
        return p

    def biased_locate(self, r: int, pp: int, stats=None) -> tuple[int, int]:
        """Endpoint index ``s`` holding position ``pp`` of ``<u_1>``, and the
        offset of that position inside ``<v_s>``."""
        return self._locate(self.path(r), pp, stats)

    def _locate(self, path, pp: int, stats=None) -> tuple[int, int]:
        t = path[4]
        gget = self._gget
        base = path[1]
        k = interval_search(self.trie(path), lambda i: int(gget(base + i - 1)) + 1, pp, stats)
        j = k + 1
        if j <= t:
            return j, pp - self.g(path, j - 1)
        if j == t + 1:
            gt = self.g(path, t)
            lv = self.sym_length(self.endpoint(path, t + 1))
            if pp - gt <= lv:
                return t + 1, pp - gt
            return t + 2, pp - gt - lv
        return j + 1, pp - self.g(path, j - 1)

    def subtree_last(self, path, u: int) -> int:
        """Index of the last endpoint inside the subtree of path node ``u``."""
        D = self.D
        d0 = path[3]
        return path[2] + 1 - (D.rank1(d0 + u - path[1] - 1) - D.rank1(d0))

    def subtree_first(self, path, u: int) -> int:
        D = self.D
        d0 = path[3]
        return D.rank0(d0 + u - path[1] - 1) - D.rank0(d0) + 1

    # ---- validation ---------------------------------------------------------

    def expected_sizes(self) -> dict:
        n, n1 = self.n, self.n_prime
        return {"P": n, "D": n - n1, "G": n * self.len_width, "B": 2 * n - n1}

    def check_structure(self) -> None:
        """Cheap shape checks; raises CorruptEncoding."""
        n, n1 = self.n, self.n_prime
        if not (1 <= n1 <= n) or self.sigma < 1 or len(self.alphabet) != self.sigma:
            raise CorruptEncoding("header fields are inconsistent")
        if self.N < 2:
            raise CorruptEncoding(f"N={self.N} is below 2")
        for name, want in self.expected_sizes().items():
            got = bit_size(self.component(name))
            if got != want:
                raise CorruptEncoding(f"component {name} has {got} bits, expected {want}")
        if self.G.width != self.len_width:
            raise CorruptEncoding("G width does not match ceil(lg N)")
        if self.P.ones != n1 or (n and not self.P.access(n)):
            raise CorruptEncoding("P does not mark n' path ends")
        if self.B.zeros != n:
            raise CorruptEncoding("B does not hold one leaf per variable")
        su = self.start_var
        if not 1 <= su <= n or (su > 1 and not self.P.access(su - 1)):
            raise CorruptEncoding("start symbol is not the topmost node of a path")

    def check_tries(self) -> None:
        """Every path's slice of B must be a full binary tree with m leaves."""
        for r in range(1, self.n_prime + 1):
            self.trie(self.path(r)).validate()

    def check_grammar(self) -> None:
        """Full consistency pass: every rule must reproduce the stored lengths.

        ``|<u>| = |<left>| + |<right>|`` for all variables forces acyclicity and
        ties G, the trie keys and the endpoint arrays together.  O(n) queries.
        """
        self.check_tries()
        n = self.n
        top = n + self.sigma
        for r in range(1, self.n_prime + 1):
            path = self.path(r)
            prev = 0
            for i in range(1, path[2] + 1):
                gi = self.g(path, i)
                if gi <= prev:
                    raise CorruptEncoding(f"prefix sums of path {r} are not increasing")
                prev = gi
        lens = [0] * (n + 1)
        for u in range(1, n + 1):
            lens[u] = self.var_length(u)
            if lens[u] < 2:
                raise CorruptEncoding(f"variable {u} has length {lens[u]}")
        for u in range(1, n + 1):
            total = 0
            for c in self.children(u):
                if not 1 <= c <= top:
                    raise CorruptEncoding(f"variable {u} has out-of-range child {c}")
                total += 1 if self.is_terminal(c) else lens[c - self._voff]
            if total != lens[u]:
                raise CorruptEncoding(f"length of variable {u} disagrees with its children")
        if lens[self.start_var] != self.N:
            raise CorruptEncoding("length of the start symbol differs from N")

    # ---- space --------------------------------------------------------------

    def component(self, name):
        return getattr(self, name)

    def component_names(self) -> list[str]:
        return ["P", "D", *self.extra_components, "G", "B"]

    def component_bits(self) -> dict:
        return {name: bit_size(self.component(name)) for name in self.component_names()}

    def directory_bits(self) -> int:
        total = self.P.directory_bits() + self.D.directory_bits()
        total += self.B.directory_bits() + self.B.excess_directory_bits()
        return total

    def formula_bits(self) -> int:
        raise NotImplementedError

    def space_report(self) -> dict:
        comps = self.component_bits()
        core = sum(comps.values())
        return {
            "scheme": self.scheme_name,
            "N": self.N,
            "n": self.n,
            "n_prime": self.n_prime,
            "sigma": self.sigma,
            "components": comps,
            "core_bits": core,
            "formula_bits": self.formula_bits(),
            "formula_check": self.formula_check(comps),
            "overhead_bits": self.directory_bits(),
        }

    def formula_check(self, comps) -> bool:
        return sum(comps.values()) == self.formula_bits()

    @property
    def scheme_name(self) -> str:
        return "I" * self.scheme


# ---- builders ---------------------------------------------------------------


def path_layout(slp: Slp, path: list) -> dict:
    """Endpoints, directions and prefix sums of one SC-path (ids of ``slp``).

    ``sources[i-1] = (node, side)`` records which path node and which side
    (0 left, 1 right) endpoint ``v_i`` hangs from.
    """
    rules = slp.rules
    lens = slp.lengths
    lefts, rights, dbits = [], [], []
    for j in range(len(path) - 1):
        u, nxt = path[j], path[j + 1]
        a, b = rules[u - 1]
        if a == nxt:
            dbits.append(1)
            rights.append((b, u, 1))
        else:
            if b != nxt:
                raise AssertionError(f"path node {u} does not lead to {nxt}")
            dbits.append(0)
            lefts.append((a, u, 0))
    um = path[-1]
    a, b = rules[um - 1]
    ends = lefts + [(a, um, 0), (b, um, 1)] + rights[::-1]
    pieces = [lens[v] for v, _, _ in lefts] + [lens[um]] + [lens[v] for v, _, _ in rights[::-1]]
    return {
        "endpoints": [v for v, _, _ in ends],
        "sources": [(u, side) for _, u, side in ends],
        "dbits": dbits,
        "t": len(lefts),
        "g": list(accumulate(pieces)),
    }


def common_components(slp: Slp, paths: list, layouts: list, backend=None) -> dict:
    """P, D, G, B for a grammar whose paths are consecutive id blocks."""
    pbits, dbits, gvals, bbits = [], [], [], []
    for path, lay in zip(paths, layouts):
        pbits.extend([0] * (len(path) - 1) + [1])
        dbits.extend(lay["dbits"])
        gvals.extend(lay["g"])
        bbits.append(build_trie_bits(lay["g"]))
    N = slp.N
    kw = {"backend": backend}
    return {
        "n": slp.n,
        "n_prime": len(paths),
        "sigma": slp.sigma,
        "N": N,
        "alphabet": slp.alphabet,
        "P": BitVec(pbits, **kw),
        "D": BitVec(dbits, **kw),
        "G": IntArray([g - 1 for g in gvals], ceil_lg(N), **kw),
        "B": BitVec("".join(bbits), **kw),
    }


def sym_array(values, n: int, sigma: int, backend=None) -> IntArray:
    return IntArray([v - 1 for v in values], ceil_lg(n + sigma), backend=backend)
