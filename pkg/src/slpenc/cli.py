"""Command-line interface: ``slpenc compress|encode|extract|verify|stats``.

Exit codes: 0 ok, 1 verification mismatch or corrupt encoding, 2 invalid
input, 3 no monotone path order for scheme III.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .access import access, extract
from .container import ContainerError, load, save
from .encodings import SCHEMES, NoMonotoneOrder, build
from .slp import (
    FormatError,
    InvalidGrammar,
    check,
    compress,
    dump_slp,
    expand,
    height,
    load_slp,
    naive_access,
)
from .succinct import StructureError

OK, MISMATCH, INVALID, NO_ORDER = 0, 1, 2, 3

# texts longer than this are checked position by position instead of expanded
_EXPAND_LIMIT = 1 << 24


def _err(msg: str) -> None:
    print(f"slpenc: {msg}", file=sys.stderr)


def _json(obj, stream=None) -> None:
    print(json.dumps(obj, sort_keys=True), file=stream or sys.stdout)


def _load_grammar(path):
    slp = load_slp(path)
    check(slp)
    return slp


def hop_bound_ok(hops: int, N: int) -> bool:
    """``hops <= 2 lg N`` in exact integer arithmetic."""
    return (1 << hops) <= N * N


def cmd_compress(args) -> int:
    with open(args.input, "rb") as fh:
        text = fh.read()
    if len(text) < 2:
        _err(f"input has {len(text)} bytes; at least 2 are needed")
        return INVALID
    slp = compress(text)
    dump_slp(slp, args.output)
    _json({"n": slp.n, "N": slp.N})
    return OK


def cmd_encode(args) -> int:
    slp = _load_grammar(args.input)
    try:
        enc = build(slp, args.scheme)
    except NoMonotoneOrder as exc:
        _err(f"scheme III: {exc}")
        return NO_ORDER
    save(enc, args.output)
    _json(enc.space_report())
    return OK


def cmd_extract(args) -> int:
    enc = load(args.input)
    p, ln = args.pos, args.len
    if p < 1 or ln < 1 or p + ln - 1 > enc.N:
        _err(f"range pos={p} len={ln} outside [1..{enc.N}]")
        return INVALID
    out, stats = extract(enc, p, p + ln - 1)
    sys.stdout.buffer.write(out)
    sys.stdout.buffer.flush()
    if args.stats:
        _json(stats.as_dict(), sys.stderr)
    return OK


class _Oracle:
    def __init__(self, slp):
        self.slp = slp
        self.text = expand(slp, slp.start) if slp.N <= _EXPAND_LIMIT else None

    def __call__(self, p, q) -> bytes:
        if self.text is not None:
            return self.text[p - 1 : q]
        return bytes(naive_access(self.slp, i) for i in range(p, q + 1))


def verify(enc, slp, *, samples=None, full=False, seed=0, report=print) -> int:
    """Check ``enc`` against ``slp``; returns the number of problems found."""
    problems = 0

    def bad(msg):
        nonlocal problems
        problems += 1
        if problems <= 20:
            report(msg)

    if (enc.N, enc.n, enc.sigma, enc.alphabet) != (slp.N, slp.n, slp.sigma, slp.alphabet):
        bad("header (N, n, sigma, alphabet) differs from the grammar")
        return problems
    try:
        enc.check_grammar()
    except StructureError as exc:
        bad(f"inconsistent encoding: {exc}")
        return problems
    if not enc.formula_check(enc.component_bits()):
        bad("space formula check failed")
    N = enc.N
    oracle = _Oracle(slp)
    rng = random.Random(seed)
    if full:
        positions = range(1, N + 1)
        ranges = [(1, N)]
    else:
        positions = [rng.randint(1, N) for _ in range(samples)]
        ranges = []
        for _ in range(samples):
            p = rng.randint(1, N)
            ranges.append((p, min(N, p + rng.randint(0, 255))))
    expected = oracle(1, N) if full and oracle.text is not None else None
    for p in positions:
        try:
            b, st = access(enc, p)
        except (StructureError, IndexError) as exc:
            bad(f"access({p}) failed: {exc}")
            continue
        want = expected[p - 1] if expected is not None else oracle(p, p)[0]
        if b != want:
            bad(f"access({p}) = {b}, expected {want}")
        if not hop_bound_ok(st.non_sc_hops, N):
            bad(f"access({p}) crossed {st.non_sc_hops} non-SC edges, above 2 lg N")
    for p, q in ranges:
        try:
            got, _ = extract(enc, p, q)
        except (StructureError, IndexError) as exc:
            bad(f"extract({p}, {q}) failed: {exc}")
            continue
        want = oracle(p, q)
        if got != want:
            k = next((i for i, (x, y) in enumerate(zip(got, want)) if x != y), min(len(got), len(want)))
            bad(f"extract({p}, {q}) differs first at position {p + k}")
    return problems


def cmd_verify(args) -> int:
    slp = _load_grammar(args.against)
    try:
        enc = load(args.input)
    except ContainerError:
        # malformed file: invalid input, handled in main
        raise
    except (StructureError, ValueError) as exc:
        print(f"corrupt encoding: {exc}")
        return MISMATCH
    problems = verify(enc, slp, samples=args.samples, full=args.full, seed=args.seed)
    if problems:
        print(f"FAIL: {problems} problem(s)")
        return MISMATCH
    print("OK")
    return OK


def cmd_stats(args) -> int:
    enc = load(args.input)
    rep = enc.space_report()
    if args.against:
        rep["height"] = height(_load_grammar(args.against))
    _json(rep)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slpenc", description="Succinct SLP encodings with random access.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("compress", help="build an SLP from a file")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.set_defaults(func=cmd_compress)

    sp = sub.add_parser("encode", help="encode an SLP text file")
    sp.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    sp.add_argument("input")
    sp.add_argument("output")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("extract", help="print T[pos..pos+len-1]")
    sp.add_argument("input")
    sp.add_argument("--pos", type=int, required=True)
    sp.add_argument("--len", type=int, required=True)
    sp.add_argument("--stats", action="store_true", help="query counters as JSON on stderr")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("verify", help="compare an encoding with its grammar")
    sp.add_argument("input")
    sp.add_argument("--against", required=True)
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--samples", type=int, metavar="K")
    mode.add_argument("--full", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("stats", help="space report as JSON")
    sp.add_argument("input")
    sp.add_argument("--against")
    sp.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, FormatError, InvalidGrammar, ContainerError, StructureError) as exc:
        _err(str(exc))
        return INVALID
    except OverflowError as exc:
        _err(str(exc))
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
