"""Compare the pure-Python and Cython kernels.

    python benchmarks/bench_kernels.py [--bits 1000000] [--queries 200000]

Times rank/select/bwdsearch on a random bit vector and end-to-end access on
a repetitive text, once per available backend.
"""

from __future__ import annotations

import argparse
import random
import time

from slpenc import available_backends
from slpenc.access import access
from slpenc.encodings import build_encoding_I
from slpenc.slp import compress
from slpenc.succinct import BitVec


def _time(fn, reps):
    t = time.perf_counter()
    fn()
    return (time.perf_counter() - t) / reps * 1e9


def bench_backend(name, bits, queries, text, rng_seed=7):
    rng = random.Random(rng_seed)
    bv = BitVec(bits, backend=name)
    n = len(bv)
    pos = [rng.randint(0, n) for _ in range(queries)]
    ones = [rng.randint(1, bv.ones) for _ in range(queries)]
    zeros = [rng.randint(1, bv.zeros) for _ in range(queries)]
    starts = [rng.randint(1, n) for _ in range(queries)]
    rank1, select1, select0, bwd = bv.rank1, bv.select1, bv.select0, bv.bwdsearch
    row = {
        "rank1": _time(lambda: [rank1(i) for i in pos], queries),
        "select1": _time(lambda: [select1(j) for j in ones], queries),
        "select0": _time(lambda: [select0(j) for j in zeros], queries),
        "bwdsearch": _time(lambda: [bwd(i, -1) for i in starts], queries),
    }
    slp = compress(text)
    enc = build_encoding_I(slp, backend=name)
    ps = [rng.randint(1, enc.N) for _ in range(queries // 20)]
    row["access"] = _time(lambda: [access(enc, p) for p in ps], len(ps))
    return row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bits", type=int, default=1_000_000)
    ap.add_argument("--queries", type=int, default=200_000)
    args = ap.parse_args(argv)
    rng = random.Random(1)
    # balanced-ish bits keep bwdsearch answers at moderate distance
    bits = [1 if rng.random() < 0.5 else 0 for _ in range(args.bits)]
    block = bytes(rng.choice(b"acgt") for _ in range(2000))
    text = b"".join(block[: rng.randint(1000, 2000)] for _ in range(200))
    rows = {name: bench_backend(name, bits, args.queries, text) for name in available_backends()}
    ops = list(next(iter(rows.values())))
    print(f"{'op':<10}" + "".join(f"{name:>14}" for name in rows) + "   (ns per query)")
    for op in ops:
        print(f"{op:<10}" + "".join(f"{rows[name][op]:>14.0f}" for name in rows))
    if "cython" in rows and "python" in rows:
        print()
        for op in ops:
            print(f"{op:<10} speedup x{rows['python'][op] / rows['cython'][op]:.1f}")


if __name__ == "__main__":
    main()
