"""Random access and substring extraction on an encoding.

A query walks from the start symbol down SC-paths.  On each path the entry
node ``x`` and the position inside ``<x>`` are translated to a position in
``<u_1>``, the path's trie picks the non-SC endpoint holding it, and the walk
hops to that endpoint.  Each hop crosses one non-SC edge.

Extraction keeps one frame ``(path, s, z)`` per visited path: ``s`` is the
endpoint currently being emitted and ``z`` the last endpoint inside the
entry node's subtree.  When ``<v_s>`` is exhausted the frame advances to
``v_{s+1}``; once ``s == z`` it is popped.  The first endpoint that is
longer than what is still needed holds the right end of the range; it is
finished by one more walk down to that position.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class QueryStats:
    non_sc_hops: int = 0
    trie_nodes: int = 0
    expanded_symbols: int = 0
    stack_max: int = 0
    trace: list | None = field(default=None, repr=False)

    def work(self) -> int:
        return self.non_sc_hops + self.trie_nodes + self.expanded_symbols

    def as_dict(self) -> dict:
        return {
            "non_sc_hops": self.non_sc_hops,
            "trie_nodes": self.trie_nodes,
            "expanded_symbols": self.expanded_symbols,
            "stack_max": self.stack_max,
        }


def _hop(enc, x: int, pos: int, stats: QueryStats):
    """One path step from variable ``x`` at position ``pos`` of ``<x>``.

    Returns ``(path, s, z, v, offset)``: the endpoint ``v = v_s`` holds the
    position at ``offset`` and ``z`` bounds the endpoints under ``x``.
    """
    r, _, _ = enc.sc_path_of(x)
    path = enc.path(r)
    pp = enc._entry_offset(path, x, pos)
    s, off = enc._locate(path, pp, stats)
    stats.non_sc_hops += 1
    return path, s, enc.subtree_last(path, x), enc.endpoint(path, s), off


def access(enc, p: int, stats: QueryStats | None = None) -> tuple[int, QueryStats]:
    """``T[p]`` as a byte value, 1-based."""
    if not 1 <= p <= enc.N:
        raise IndexError(f"position {p} outside [1..{enc.N}]")
    if stats is None:
        stats = QueryStats()
    x, pos = enc.start_var, p
    while True:
        _, _, _, v, pos = _hop(enc, x, pos, stats)
        if enc.is_terminal(v):
            return enc.char(v), stats
        x = enc.var_of(v)


def extract(enc, p: int, q: int, *, trace: bool = False) -> tuple[bytes, QueryStats]:
    """``T[p..q]``, 1-based and inclusive."""
    if not 1 <= p <= q <= enc.N:
        raise IndexError(f"range [{p}..{q}] outside [1..{enc.N}]")
    stats = QueryStats(trace=[] if trace else None)
    log = stats.trace
    out = bytearray()
    want = q - p + 1
    stack = []  # frames: [path, s, z, frame id]
    ids = iter(range(1 << 62))

    def descend(x: int, pos: int) -> None:
        # push frames down to the terminal holding position ``pos`` of ``<x>``
        while True:
            path, s, z, v, pos = _hop(enc, x, pos, stats)
            fid = next(ids)
            stack.append([path, s, z, fid])
            if log is not None:
                log.append(("push", fid, path[0], len(out)))
            if len(stack) > stats.stack_max:
                stats.stack_max = len(stack)
            if enc.is_terminal(v):
                out.append(enc.char(v))
                return
            x = enc.var_of(v)

    children = enc.children
    alpha = enc.alphabet
    # native ids: terminals are (lo, hi] and map to alpha[y - lo - 1]
    if enc.terminals_first:
        t_lo, t_hi, voff = 0, enc.sigma, enc.sigma
    else:
        t_lo, t_hi, voff = enc.n, enc.n + enc.sigma, 0

    def expand(v: int) -> None:
        # whole <v>, left to right; caller guarantees it fits
        todo = [v]
        pop, push, emit = todo.pop, todo.append, out.append
        count = 0
        while todo:
            y = pop()
            count += 1
            if t_lo < y <= t_hi:
                emit(alpha[y - t_lo - 1])
            else:
                a, b = children(y - voff)
                push(b)
                push(a)
        stats.expanded_symbols += count

    def emit_prefix(v: int, k: int) -> None:
        # first k < |<v>| bytes of <v>: follow the path to position k once,
        # expanding every endpoint left of it inside the entry node's subtree
        x, pos = enc.var_of(v), k
        while True:
            path, s, _, w, pos = _hop(enc, x, pos, stats)
            for i in range(enc.subtree_first(path, x), s):
                expand(enc.endpoint(path, i))
            if enc.is_terminal(w):
                stats.expanded_symbols += 1
                out.append(enc.char(w))
                return
            x = enc.var_of(w)

    descend(enc.start_var, p)
    while len(out) < want:
        frame = stack[-1]
        path, s, z = frame[0], frame[1], frame[2]
        if s == z:
            stack.pop()
            if log is not None:
                log.append(("pop", frame[3], path[0], len(out)))
            continue
        frame[1] = s = s + 1
        v = enc.endpoint(path, s)
        if enc.is_terminal(v):
            stats.expanded_symbols += 1
            out.append(enc.char(v))
        elif enc.sym_length(v) <= want - len(out):
            expand(v)
        else:
            emit_prefix(v, want - len(out))
    return bytes(out), stats
