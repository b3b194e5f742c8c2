"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the terminal
summary repeats the verdicts.
"""

import gc
import math
import random
import statistics
import struct
import time

import pytest
from grammars import (
    GRAMMAR_A,
    GRAMMAR_B,
    chain,
    doubling,
    fibonacci,
    random_slp,
    small_random_slp,
    suite,
)
from oracles import all_shapes, brute_encoding_i, oracle_queries, pointer_tree, scan_bwd

from slpenc import cli
from slpenc.access import access, extract
from slpenc.container import deserialize, serialize
from slpenc.encodings import NoMonotoneOrder, build, build_encoding_III
from slpenc.scd import sc_decompose
from slpenc.slp import dump_slp, expand, naive_access
from slpenc.succinct import BitVec, PostOrderTree
from slpenc.trie import build_trie, interval_search, trie_width

SCHEMES = (1, 2, 3)
CHAIN_N = 100_000


def hop_ok(hops, N):
    # hops <= 2 lg N, exactly
    return (1 << hops) <= N * N


@pytest.fixture(scope="module")
def random_suite():
    return suite(200, seed=2024, max_n=1 << 12)


@pytest.fixture(scope="module")
def long_chain():
    return chain(CHAIN_N)


@pytest.fixture(scope="module")
def built(random_suite, long_chain):
    """Encodings of the criterion-1 grammars, timed."""
    grammars = [GRAMMAR_A, GRAMMAR_B, chain(1000), chain(1000, left=False), long_chain] + random_suite
    t = time.perf_counter()
    encs = {s: [build(g, s) for g in grammars] for s in SCHEMES}
    return grammars, encs, time.perf_counter() - t


def test_criterion_01_space_formulas(built, acceptance):
    grammars, encs, build_time = built
    t = time.perf_counter()
    bad = []
    for s in SCHEMES:
        for g, enc in zip(grammars, encs[s]):
            comps = enc.component_bits()
            if not enc.formula_check(comps):
                bad.append((s, g.n, sum(comps.values()), enc.formula_bits()))
            if s == 3 and comps["S"] > g.n + enc.n_prime + g.sigma:
                bad.append((s, g.n, "S above its bound"))
    elapsed = build_time + time.perf_counter() - t
    ok = not bad and elapsed < 60 and len(grammars) >= 203
    acceptance(
        1,
        ok,
        f"{len(grammars)} grammars x 3 schemes, {len(bad)} formula mismatches, {elapsed:.1f}s (limit 60s)",
    )


def exhaustive_grammars():
    rng = random.Random(31)
    out = [GRAMMAR_A, GRAMMAR_B, fibonacci(6), chain(20), doubling(3)]
    while len(out) < 9:
        g = small_random_slp(rng, 256)
        if g.N >= 40:
            out.append(g)
    big = None
    while big is None:
        g = small_random_slp(rng, 256)
        big = g if g.N >= 180 else None
    return out + [big]


def test_criterion_02_oracle_equality(random_suite, acceptance):
    mismatches = 0
    pairs = 0
    small = exhaustive_grammars()
    for g in small:
        text = expand(g, g.start)
        for s in SCHEMES:
            enc = build(g, s)
            for p in range(1, g.N + 1):
                for q in range(p, g.N + 1):
                    pairs += 1
                    mismatches += extract(enc, p, q)[0] != text[p - 1 : q]
    larger = [g for g in random_suite if g.N > 256][:6] + [fibonacci(25), doubling(14)]
    rng = random.Random(5)
    sampled = 0
    for g in larger:
        text = expand(g, g.start)
        encs = [build(g, s) for s in SCHEMES]
        for _ in range(1000):
            p = rng.randint(1, g.N)
            q = min(g.N, p + int(2 ** rng.uniform(0, 10)) - 1)
            for enc in encs:
                sampled += 1
                mismatches += extract(enc, p, q)[0] != text[p - 1 : q]
    acceptance(
        2,
        mismatches == 0,
        f"{pairs} exhaustive pairs on {len(small)} grammars (N <= 256), "
        f"{sampled} sampled pairs on {len(larger)} larger grammars, {mismatches} mismatches",
    )


def test_criterion_03_non_sc_hop_bound(built, acceptance):
    grammars, encs, _ = built
    rng = random.Random(9)
    queries = violations = worst = 0
    extra = [fibonacci(30), doubling(20)]
    for s in SCHEMES:
        pool = list(zip(grammars, encs[s])) + [(g, build(g, s)) for g in extra]
        for g, enc in pool:
            N = g.N
            positions = range(1, N + 1) if N <= 64 else [rng.randint(1, N) for _ in range(40)]
            for p in positions:
                hops = access(enc, p)[1].non_sc_hops
                queries += 1
                worst = max(worst, hops / (2 * math.log2(N)))
                violations += not hop_ok(hops, N)
    acceptance(3, violations == 0, f"{queries} access queries, {violations} above 2 lg N, worst hops/(2 lg N) = {worst:.2f}")


def test_criterion_04_chain_access(built, long_chain, acceptance):
    grammars, encs, _ = built
    k = grammars.index(long_chain)
    N = long_chain.N
    budget = 6 * math.log2(N) + 32
    worst = over = queries = 0
    rng = random.Random(4)
    for s in SCHEMES:
        enc = encs[s][k]
        positions = range(1, N + 1) if s == 1 else sorted(rng.sample(range(1, N + 1), 10_000))
        for p in positions:
            b, st = access(enc, p)
            cost = st.trie_nodes + st.non_sc_hops
            queries += 1
            worst = max(worst, cost)
            over += cost > budget or b != ord("a")
    visits = []
    naive_access(long_chain, 1, visits)
    acceptance(
        4,
        over == 0,
        f"chain n={CHAIN_N}: {queries} queries, max trie_nodes + non_sc_hops = {worst} "
        f"(budget {budget:.1f}), naive oracle visits {visits[0]} nodes at p=1",
    )


def large_grammars():
    rng = random.Random(77)
    g = None
    while g is None or g.N < 10**6:
        g = random_slp(rng, 3000, 6, cap=1 << 24)
    return [doubling(20), fibonacci(30), g]


def test_criterion_05_extraction_linearity(acceptance):
    rng = random.Random(12)
    over = queries = 0
    fits = []
    for g in large_grammars():
        N = g.N
        budget_log = 6 * math.log2(N) + 32
        for s in SCHEMES:
            enc = build(g, s)
            for _ in range(25):
                ln = rng.randint(0, 10**4)
                p = rng.randint(1, N - ln)
                out, st = extract(enc, p, p + ln)
                queries += 1
                over += st.work() > budget_log + 8 * (ln + 1)
                if s == 1 and queries % 5 == 0:
                    over += out != bytes(naive_access(g, i) for i in range(p, p + ln + 1))
        # wall time against length on scheme I: fit t = a + b * len over the
        # same start positions; linear scaling keeps every point near the line
        enc = build(g, 1)
        lengths = [1000, 2500, 4000, 5500, 7000, 8500, 10000]
        starts = [rng.randint(1, N - lengths[-1]) for _ in range(9)]
        # lengths are interleaved in shuffled rounds and the per-length
        # minimum is kept, so drifting machine load affects all points alike
        best = dict.fromkeys(lengths, float("inf"))
        gc.disable()
        try:
            for _ in range(7):
                for ln in rng.sample(lengths, len(lengths)):
                    t = time.perf_counter()
                    for p in starts:
                        extract(enc, p, p + ln - 1)
                    best[ln] = min(best[ln], time.perf_counter() - t)
        finally:
            gc.enable()
        times = [best[ln] for ln in lengths]
        fit = statistics.linear_regression(lengths, times)
        worst = max(abs(t / (fit.intercept + fit.slope * ln) - 1) for ln, t in zip(lengths, times))
        fits.append((fit.slope > 0 and worst <= 0.3, worst))
    linear = all(ok for ok, _ in fits)
    acceptance(
        5,
        over == 0 and linear,
        f"{queries} extractions with q-p <= 1e4 on N >= 1e6, {over} over work budget; "
        f"time vs length: worst deviation from linear fit {[round(w, 3) for _, w in fits]} (limit 0.3)",
    )


def encoded_tries(enc):
    """Per path: the trie as stored in B and a 1-based getter for its g values."""
    for r in range(1, enc.n_prime + 1):
        path = enc.path(r)
        yield enc.trie(path), (lambda i, path=path: enc.g(path, i)), path[2]


def depth_violations(tree, g, m):
    """Walk the stored trie; check 2^(W - depth) > g_{k+1} - g_k at every internal node."""
    if m == 1:
        return 0, 0
    W = trie_width(g(m))
    bad = nodes = 0
    stack = [(tree.root, 0)]
    while stack:
        u, depth = stack.pop()
        if tree.isleaf(u):
            continue
        nodes += 1
        lc = tree.lchild(u)
        k = tree.leafrank(tree.rmleaf(lc))
        bad += (1 << max(0, W - depth)) <= g(k + 1) - g(k) or depth > W
        stack.append((lc, depth + 1))
        stack.append((tree.rchild(u), depth + 1))
    return bad, nodes


def test_criterion_06_trie_depth_and_search(built, acceptance):
    grammars, encs, _ = built
    bad = nodes = tries = 0
    for s in SCHEMES:
        for enc in encs[s]:
            if enc.n > 20_000:
                continue
            for tree, g, m in encoded_tries(enc):
                b, k = depth_violations(tree, g, m)
                bad += b
                nodes += k
                tries += 1
    # interval search against a linear scan
    mism = searches = 0
    sequences = []
    for gm in range(1, 13):
        for mask in range(1 << (gm - 1)):
            sequences.append([i for i in range(1, gm) if mask >> (i - 1) & 1] + [gm])
    rng = random.Random(6)
    for _ in range(150):
        gm = rng.randint(13, 1 << 12)
        k = rng.randint(1, min(gm, 200))
        sequences.append(sorted(set(rng.sample(range(1, gm), k - 1)) | {gm}) if k > 1 else [gm])
    for A in sequences:
        tree = build_trie(A)
        b, k = depth_violations(tree, lambda i: A[i - 1], len(A))
        bad += b
        nodes += k
        j = 0
        for p in range(1, A[-1] + 1):
            while A[j] < p:
                j += 1
            searches += 1
            mism += interval_search(tree, A, p) != j
    acceptance(
        6,
        bad == 0 and mism == 0,
        f"{nodes} internal nodes in {tries} encoded tries + {len(sequences)} test tries, "
        f"{bad} depth violations; {searches} searches, {mism} differ from linear scan",
    )


def test_criterion_07_tree_operations(acceptance):
    from slpenc import available_backends

    shapes = wrong = checks = 0
    counts = {}
    for backend in sorted(available_backends()):
        for internal in range(0, 8 + 1):
            for shape in all_shapes(internal):
                nodes = pointer_tree(shape)
                bits = "".join("0" if nd[0] == "leaf" else "1" for nd in nodes)
                bv = BitVec(bits, backend=backend)
                tree = PostOrderTree(bv)
                leaves, rmleaf = oracle_queries(nodes)
                shapes += 1
                counts[len(nodes)] = counts.get(len(nodes), 0) + 1
                for v, (kind, lt, rt) in enumerate(nodes, 1):
                    checks += 1
                    ok = tree.isleaf(v) == (kind == "leaf") and tree.rmleaf(v) == rmleaf(v)
                    if kind == "node":
                        ok = ok and tree.lchild(v) == lt and tree.rchild(v) == rt
                    else:
                        ok = ok and tree.leafrank(v) == leaves.index(v) + 1
                    wrong += not ok
                blist = [int(c) for c in bits]
                for i in range(len(bits) + 1):
                    for d in (-1, -2, -3):
                        checks += 1
                        wrong += bv.bwdsearch(i, d) != scan_bwd(blist, i, d)
    per_backend = shapes // len(available_backends())
    acceptance(
        7,
        wrong == 0 and counts.get(15, 0) // len(available_backends()) == 429,
        f"{per_backend} shapes per backend (up to 17 nodes; {counts[17] // len(available_backends())} at 17 nodes), "
        f"{checks} queries, {wrong} disagree with the pointer-tree oracle",
    )


def test_criterion_08_worked_fixture(acceptance):
    want = brute_encoding_i(GRAMMAR_B)
    expected = {"P": "0101", "D": "11", "R1": [5, 5], "R2": [3, 5, 5, 5], "G": [4, 5, 2, 3], "B": "001001"}
    enc = build(GRAMMAR_B, 1)
    got = {
        "P": str(enc.P),
        "D": str(enc.D),
        "R1": [v + 1 for v in enc.R1],
        "R2": [v + 1 for v in enc.R2],
        "G": [v + 1 for v in enc.G],
        "B": str(enc.B),
    }
    acceptance(8, want == expected == got, f"brute force {want == expected}, packed encoding {got == expected}: {got}")


def test_criterion_09_scheme_iii_fixed_point(built, tmp_path, monkeypatch, acceptance):
    grammars, encs, _ = built
    b_rounds = build_encoding_III(GRAMMAR_B).rounds
    fast = total = malformed = 0
    for g, enc in zip(grammars, encs[3]):
        total += 1
        fast += enc.rounds <= 2
        chosen = [enc.chosen(r) for r in range(1, enc.n_prime + 1)]
        src = enc.source
        dec = sc_decompose(src)
        truth = []
        for path in dec.paths:
            c = src.rules[path[-1] - 1][0]
            truth.append(c - src.n if c > src.n else c + src.sigma)
        malformed += chosen != sorted(chosen) or chosen != truth
    # a forced failure: a reversed seed with a single round cannot settle
    g = random_slp(random.Random(8), 300, 3)
    dec = sc_decompose(g)
    try:
        build_encoding_III(g, seed=list(range(dec.n_prime, 0, -1)), max_rounds=1)
        diagnosed = False
    except NoMonotoneOrder as exc:
        diagnosed = "rounds" in str(exc)
    src = tmp_path / "g.slp"
    dump_slp(g, src)
    real = cli.build
    monkeypatch.setattr(cli, "build", lambda slp, scheme: build_encoding_III(slp, seed=list(range(dec.n_prime, 0, -1)), max_rounds=1) if scheme == "III" else real(slp, scheme))
    code = cli.main(["encode", "--scheme", "III", str(src), str(tmp_path / "g.slpx")])
    ok = b_rounds <= 2 and fast >= 0.95 * total and malformed == 0 and diagnosed and code == 3
    acceptance(
        9,
        ok,
        f"Grammar B: {b_rounds} round(s); {fast}/{total} grammars within 2 rounds; "
        f"{malformed} malformed S; forced non-convergence exit code {code}",
    )


def payload_bit_offsets(data: bytes, sigma: int):
    pos = 4 + 1 + 1 + 5 * 8 + sigma
    out = []
    while pos < len(data):
        (nbits,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        out.extend(pos * 8 + k for k in range(nbits))
        pos += (nbits + 7) // 8
    return out


def test_criterion_10_serialization(built, tmp_path, capsys, acceptance):
    grammars, encs, _ = built
    differ = 0
    for s in SCHEMES:
        for enc in encs[s]:
            data = serialize(enc)
            differ += serialize(deserialize(data)) != data
    undetected = flips = 0
    for name, g in (("A", GRAMMAR_A), ("B", GRAMMAR_B)):
        src = tmp_path / f"{name}.slp"
        dump_slp(g, src)
        for s in SCHEMES:
            data = serialize(build(g, s))
            for bit in payload_bit_offsets(data, g.sigma):
                bad = bytearray(data)
                bad[bit // 8] ^= 1 << (bit % 8)
                f = tmp_path / "flip.slpx"
                f.write_bytes(bytes(bad))
                flips += 1
                undetected += cli.main(["verify", str(f), "--against", str(src), "--full"]) != 1
            capsys.readouterr()
    acceptance(
        10,
        differ == 0 and undetected == 0,
        f"{sum(len(v) for v in encs.values())} round trips, {differ} not bit-identical; "
        f"{flips} single-bit flips on fixtures, {undetected} missed by verify",
    )
