"""Straight-line programs in normal form: model, validation and naive oracles.

Symbol ids follow one convention everywhere outside the encodings: variables
are ``1..n`` and terminals are ``n+1..n+sigma``; terminal ``n + k`` stands for
the byte ``alphabet[k - 1]``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property

MAX_LENGTH = 1 << 64


class InvalidGrammar(ValueError):
    """Raised when an Slp violates a structural invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, eq=True)
class Slp:
    n: int
    sigma: int
    start: int
    rules: tuple = field(repr=False)
    alphabet: bytes = b""

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple((int(a), int(b)) for a, b in self.rules))
        object.__setattr__(self, "alphabet", bytes(self.alphabet))

    def is_var(self, x: int) -> bool:
        return 1 <= x <= self.n

    def is_terminal(self, x: int) -> bool:
        return self.n < x <= self.n + self.sigma

    def char(self, x: int) -> int:
        """Byte value of terminal ``x``."""
        return self.alphabet[x - self.n - 1]

    def children(self, x: int) -> tuple[int, int]:
        return self.rules[x - 1]

    @cached_property
    def lengths(self) -> list[int]:
        """``lengths[x] = |<x>|`` for every symbol id; index 0 unused."""
        n = self.n
        out = [0] * (n + self.sigma + 1)
        for x in range(n + 1, n + self.sigma + 1):
            out[x] = 1
        for x in self.topological_order()[::-1]:
            a, b = self.rules[x - 1]
            out[x] = out[a] + out[b]
        return out

    @property
    def N(self) -> int:
        return self.lengths[self.start]

    def topological_order(self) -> list[int]:
        """Variables reachable from ``start``, every parent before its children.

        Raises InvalidGrammar on a cycle.
        """
        order = _postorder(self, [self.start])
        order.reverse()
        return order


def _postorder(slp: Slp, roots) -> list[int]:
    n = slp.n
    rules = slp.rules
    state = [0] * (n + 1)  # 0 new, 1 on stack, 2 done
    out = []
    for root in roots:
        if not 1 <= root <= n or state[root]:
            continue
        stack = [(root, 0)]
        state[root] = 1
        while stack:
            x, k = stack[-1]
            if k == 2:
                stack.pop()
                state[x] = 2
                out.append(x)
                continue
            stack[-1] = (x, k + 1)
            y = rules[x - 1][k]
            if 1 <= y <= n:
                if state[y] == 1:
                    raise InvalidGrammar([f"cycle at variable {y}"])
                if state[y] == 0:
                    state[y] = 1
                    stack.append((y, 0))
    return out


def validate(slp: Slp) -> list[str]:
    """Return the list of invariant violations; empty means the grammar is valid."""
    out = []
    n, sigma = slp.n, slp.sigma
    if n < 1:
        out.append(f"need at least one variable, got n={n}")
    if sigma < 1:
        out.append(f"need at least one terminal, got sigma={sigma}")
    if len(slp.alphabet) != sigma:
        out.append(f"alphabet has {len(slp.alphabet)} entries, sigma is {sigma}")
    if len(slp.rules) != n:
        out.append(f"{len(slp.rules)} rules given for n={n} variables")
    if not 1 <= slp.start <= n:
        out.append(f"start symbol {slp.start} is not a variable id in [1..{n}]")
    top = n + sigma
    for x, (a, b) in enumerate(slp.rules, 1):
        for y in (a, b):
            if not 1 <= y <= top:
                out.append(f"rule of variable {x} uses out-of-range symbol id {y}")
    if out:
        return out
    try:
        _postorder(slp, range(1, n + 1))
    except InvalidGrammar as exc:
        return exc.violations
    reach = set(_postorder(slp, [slp.start]))
    for x in range(1, n + 1):
        if x not in reach:
            out.append(f"variable {x} is unreachable from start {slp.start}")
    if out:
        return out
    N = slp.N
    if N < 2:
        out.append(f"derived length N={N} is below 2")
    if N >= MAX_LENGTH:
        out.append(f"derived length N={N} does not fit in 64 bits")
    return out


def check(slp: Slp) -> Slp:
    """Return ``slp`` unchanged or raise InvalidGrammar."""
    v = validate(slp)
    if v:
        raise InvalidGrammar(v)
    return slp


def expansion_length(slp: Slp, x: int) -> int:
    return slp.lengths[x]


def expand(slp: Slp, x: int) -> bytes:
    """``<x>`` by an explicit-stack left-to-right traversal."""
    n = slp.n
    rules = slp.rules
    alpha = slp.alphabet
    out = bytearray()
    stack = [x]
    while stack:
        y = stack.pop()
        if y > n:
            out.append(alpha[y - n - 1])
        else:
            a, b = rules[y - 1]
            stack.append(b)
            stack.append(a)
    return bytes(out)


def naive_access(slp: Slp, p: int, visits: list | None = None) -> int:
    """``T[p]`` by descending from the start symbol; O(height) node visits.

    If ``visits`` is a list, the number of visited nodes is appended to it.
    """
    lens = slp.lengths
    if not 1 <= p <= lens[slp.start]:
        raise IndexError(f"position {p} outside [1..{lens[slp.start]}]")
    n = slp.n
    x = slp.start
    count = 1
    while x <= n:
        a, b = slp.rules[x - 1]
        if p <= lens[a]:
            x = a
        else:
            p -= lens[a]
            x = b
        count += 1
    if visits is not None:
        visits.append(count)
    return slp.char(x)


def naive_extract(slp: Slp, p: int, q: int) -> bytes:
    """``T[p..q]`` (1-based, inclusive) by full expansion."""
    N = slp.N
    if not 1 <= p <= q <= N:
        raise IndexError(f"range [{p}..{q}] outside [1..{N}]")
    return expand(slp, slp.start)[p - 1 : q]


def height(slp: Slp) -> int:
    """Edges on the longest root-to-leaf path of the derivation tree."""
    n = slp.n
    h = [0] * (n + slp.sigma + 1)
    for x in slp.topological_order()[::-1]:
        a, b = slp.rules[x - 1]
        h[x] = 1 + max(h[a], h[b])
    return h[slp.start]


def compress(text: bytes) -> Slp:
    """Build a normal-form SLP deriving ``text``.

    Repeatedly replaces the most frequent adjacent pair (ties: smallest pair of
    ids) while some pair occurs at least twice, then merges the remaining
    sequence pairwise into a balanced tree.  Deterministic.
    """
    text = bytes(text)
    if len(text) < 2:
        raise ValueError("text must have at least 2 bytes")
    alphabet = sorted(set(text))
    sigma = len(alphabet)
    code = {b: i for i, b in enumerate(alphabet)}
    seq = [code[b] for b in text]
    L = len(seq)
    nxt = list(range(1, L + 1))
    nxt[-1] = -1
    prv = list(range(-1, L - 1))

    occ: dict[tuple[int, int], set[int]] = {}
    for i in range(L - 1):
        occ.setdefault((seq[i], seq[i + 1]), set()).add(i)
    heap = [(-len(s), pr) for pr, s in occ.items()]
    heapq.heapify(heap)

    def dec(pr, i):
        s = occ.get(pr)
        if s is not None and i in s:
            s.discard(i)
            if s:
                heapq.heappush(heap, (-len(s), pr))
            else:
                del occ[pr]

    def inc(pr, i):
        s = occ.setdefault(pr, set())
        s.add(i)
        heapq.heappush(heap, (-len(s), pr))

    rules: list[tuple[int, int]] = []
    while heap:
        negc, pr = heapq.heappop(heap)
        s = occ.get(pr)
        if s is None or len(s) != -negc:
            continue
        if -negc < 2:
            break
        z = sigma + len(rules)
        rules.append(pr)
        a, b = pr
        for i in sorted(occ.pop(pr)):
            if seq[i] != a:
                continue
            j = nxt[i]
            if j == -1 or seq[j] != b:
                continue
            h, k = prv[i], nxt[j]
            if h != -1:
                dec((seq[h], a), h)
            if k != -1:
                dec((b, seq[k]), j)
            seq[i] = z
            seq[j] = -1
            nxt[i] = k
            if k != -1:
                prv[k] = i
            if h != -1:
                inc((seq[h], z), h)
            if k != -1:
                inc((z, seq[k]), i)

    cur = []
    i = 0
    while i != -1:
        cur.append(seq[i])
        i = nxt[i]
    known = {pr: sigma + k for k, pr in enumerate(rules)}
    while len(cur) > 1:
        merged = []
        for k in range(0, len(cur) - 1, 2):
            pr = (cur[k], cur[k + 1])
            z = known.get(pr)
            if z is None:
                z = sigma + len(rules)
                rules.append(pr)
                known[pr] = z
            merged.append(z)
        if len(cur) % 2:
            merged.append(cur[-1])
        cur = merged

    n = len(rules)

    def sym(c):
        return c - sigma + 1 if c >= sigma else n + 1 + c

    return Slp(
        n=n,
        sigma=sigma,
        start=sym(cur[0]),
        rules=[(sym(a), sym(b)) for a, b in rules],
        alphabet=bytes(alphabet),
    )


class FormatError(ValueError):
    """Malformed text SLP file."""


def format_slp(slp: Slp) -> str:
    lines = [f"SLP {slp.n} {slp.sigma} {slp.start}"]
    lines.append(" ".join(["ALPHABET"] + [str(b) for b in slp.alphabet]))
    lines.extend(f"{a} {b}" for a, b in slp.rules)
    return "\n".join(lines) + "\n"


def _int(tok: str, what: str) -> int:
    if not tok.isascii() or not tok.isdigit():
        raise FormatError(f"{what}: expected a decimal integer, got {tok!r}")
    return int(tok)


def parse_slp(text: str) -> Slp:
    """Parse the line-oriented text format; the result is not validated."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise FormatError("expected a header line and an ALPHABET line")
    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != "SLP":
        raise FormatError(f"line 1: expected 'SLP <n> <sigma> <start>', got {lines[0]!r}")
    n, sigma, start = (_int(t, "line 1") for t in head[1:])
    alpha = lines[1].split(" ")
    if alpha[0] != "ALPHABET" or len(alpha) != sigma + 1:
        raise FormatError(f"line 2: expected 'ALPHABET' and {sigma} byte values")
    alphabet = []
    for t in alpha[1:]:
        v = _int(t, "line 2")
        if v > 255:
            raise FormatError(f"line 2: byte value {v} exceeds 255")
        alphabet.append(v)
    if len(lines) != n + 2:
        raise FormatError(f"expected {n} rule lines, found {len(lines) - 2}")
    rules = []
    for k, line in enumerate(lines[2:], 3):
        toks = line.split(" ")
        if len(toks) != 2:
            raise FormatError(f"line {k}: expected '<left> <right>', got {line!r}")
        rules.append((_int(toks[0], f"line {k}"), _int(toks[1], f"line {k}")))
    return Slp(n=n, sigma=sigma, start=start, rules=rules, alphabet=bytes(alphabet))


def load_slp(path) -> Slp:
    with open(path, encoding="utf-8") as fh:
        return parse_slp(fh.read())


def dump_slp(slp: Slp, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_slp(slp))
