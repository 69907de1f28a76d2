"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from genset import bounds, codes, construct, erasure, gf2, verify
from genset.errors import BudgetError
from conftest import fixture_codes, random_codes, record, witness_sets

LIMIT = 60.0


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


# ------------------------------------------------------------------ 1

EXACT_CASES = [("good", k, 1, k) for k in range(1, 7)] + [
    ("good", 3, 2, 6), ("good", 4, 3, 14), ("good", 3, 3, 7), ("good", 4, 4, 15),
    ("generic", 2, 2, 2), ("generic", 3, 2, 3),
]


def brute_F(r, s):
    """Smallest generic set by plain subset enumeration (matrix characterization)."""
    nz = list(range(1, 1 << r))
    mats = list(gf2.full_rank_columns(r, s))
    for size in range(1, len(nz) + 1):
        for A in itertools.combinations(nz, size):
            if all(any(verify._syndrome(cols, a).bit_count() == 1 for a in A) for cols in mats):
                return size


def test_criterion_1_exact_values():
    bad = []
    for kind, r, s, want in EXACT_CASES:
        out, dt = timed(construct.exact_minimum, r, s, kind)
        if not (out.optimal and out.size == want and dt < LIMIT):
            bad.append(f"{kind}({r},{s})={out.size} optimal={out.optimal} {dt:.1f}s")
    for r, s in [(2, 2), (3, 2)]:
        got = brute_F(r, s)
        if got != construct.exact_minimum(r, s, "generic").size:
            bad.append(f"brute F({r},{s})={got}")
    # the printed binomial sum gives r-1 at s=2, below F(2,2)=2
    rep = bounds.bounds_F(2, 2, exact=2)
    if rep.get("upper.binomial-sum").status != "flagged":
        bad.append("binomial sum not flagged at (2,2)")
    record(1, not bad, "; ".join(bad) or f"{len(EXACT_CASES)} exact values, F(2,2)=2, F(3,2)=3 by brute force")
    assert not bad


# ------------------------------------------------------------------ 2

def closed_form_at_least(N, k, s):
    """N <= ((k-s+1)s+2) / -log2(1-2^-s), decided in integers."""
    C = (k - s + 1) * s + 2
    return 2 ** (s * N) <= 2 ** C * (2 ** s - 1) ** N


def test_criterion_2_sandwich():
    bad, checked = [], 0
    for k in range(1, 6):
        for s in range(1, k + 1):
            out = construct.exact_minimum(k, s, "good")
            if not out.optimal:
                continue
            g = out.size
            checked += 1
            rep = bounds.bounds_G1(k, s)
            lows = [rep.get("lower.doubling").value]
            if 2 <= s <= k - 1:
                lows.append(rep.get("lower.min-weight-split").value)
            if any(lo > g for lo in lows):
                bad.append(f"lower {lows} > {g} at ({k},{s})")
            if 2 <= s < k:
                N = bounds.threshold_N("good", k, s)
                if g > N:
                    bad.append(f"exact {g} > threshold {N} at ({k},{s})")
                if not closed_form_at_least(N, k, s):
                    bad.append(f"threshold {N} above closed form at ({k},{s})")
    g42 = construct.exact_minimum(4, 2, "good").size
    cf = bounds.bounds_G1(4, 2).get("upper.flat-threshold-closed[log2]").as_int
    if not (9 <= g42 <= 19 and cf == 19):
        bad.append(f"(4,2): exact {g42}, closed form {cf}")
    record(2, not bad, "; ".join(bad) or f"{checked} cells, 9 <= G1(4,2)={g42} <= 19")
    assert not bad


# ------------------------------------------------------------------ 3

def test_criterion_3_verifier_agreement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240)
    cases = []
    for _ in range(500):
        r = int(rng.integers(1, 5))
        size = int(rng.integers(1, (1 << r)))
        A = tuple(int(x) for x in rng.choice(np.arange(1, 1 << r), size=size, replace=False))
        cases.append((r, A))
    cases += [(r, tuple(A)) for _, r, _, A in witness_sets() if r <= 4]
    disagreements = 0
    for r, A in cases:
        vs = verify.VectorSet(r, A)
        for s in range(1, min(r, 3) + 1):
            g = {verify.is_good_set(vs, s, method=m).ok for m in ("definition", "flats")}
            h = {verify.is_generic_set(vs, s, method=m).ok for m in ("matrices", "cosets", "hyperplanes")}
            disagreements += (len(g) != 1) + (len(h) != 1)
    dt = time.perf_counter() - t0
    ok = disagreements == 0 and dt < 300
    record(3, ok, f"{len(cases)} sets, {disagreements} disagreements, {dt:.1f}s")
    assert ok


# ------------------------------------------------------------------ 4

def test_criterion_4_prop5():
    rng = np.random.default_rng(55)
    failures = 0
    for _ in range(200):
        r = int(rng.integers(2, 6))
        s = int(rng.integers(2, r + 1))
        size = int(rng.integers(1, (1 << r)))
        A = tuple(int(x) for x in rng.choice(np.arange(1, 1 << r), size=size, replace=False))
        failures += not verify.prop5_roundtrip(verify.VectorSet(r, A), s)
    record(4, failures == 0, f"200 instances, {failures} failures")
    assert failures == 0


# ------------------------------------------------------------------ 5

GREEDY_CELLS = [(r, s) for r in range(1, 11) for s in range(1, min(r, 4) + 1)]
UNION_CELLS = [(r, s) for r in range(2, 11) for s in range(1, min(r - 1, 4) + 1)]


@pytest.mark.parametrize("kind", ["good", "generic"])
@pytest.mark.parametrize("r,s", GREEDY_CELLS)
def test_criterion_5_greedy_sets(kind, r, s):
    fn = construct.greedy_good_set if kind == "good" else construct.greedy_generic_set
    out, dt = timed(fn, r, s)
    closed = construct.greedy_size_bound(kind, r, s)
    ok = out.size <= closed and out.size <= out.extra["covering_bound"] and dt < LIMIT
    record(5, ok, "" if ok else f"{kind}({r},{s}) size {out.size} bound {closed:.2f} {dt:.1f}s")
    assert ok


@pytest.mark.parametrize("r,s", UNION_CELLS)
def test_criterion_5_subspace_union(r, s):
    try:
        out, dt = timed(construct.greedy_subspace_union, r, s)
    except BudgetError as e:
        record(5, False, f"union({r},{s}) not computable within budget: {e}")
        raise
    ok = out.extra["count"] < bounds.subspace_union_count_bound(r, s) and dt < LIMIT
    record(5, ok, "" if ok else f"union({r},{s}) count {out.extra['count']} {dt:.1f}s")
    assert ok


def test_criterion_5_parity_checks():
    bad = []
    for C in fixture_codes(16):
        if C.k < 1 or C.r < 1:
            continue
        out, dt = timed(construct.greedy_parity_check, C)
        d = out.extra["d"]
        limit = bounds.row_greedy_bound(C.n, C.k, d) if d >= 2 else C.r
        if not (out.size <= limit and dt < LIMIT):
            bad.append(f"{C.name}: {out.size} rows > {limit:.2f}")
    record(5, not bad, "; ".join(bad))
    assert not bad


# ------------------------------------------------------------------ 6

def generic_witnesses():
    out = []
    for r, s in [(3, 3), (4, 2), (4, 3)]:
        A = construct.exact_minimum(r, s, "generic").set
        assert verify.is_generic_set(A, s)
        out.append((r, s, A))
    return out


def test_criterion_6_generic_sets_decode():
    rng = np.random.default_rng(66)
    failures, checked = 0, 0
    for r, s, A in generic_witnesses():
        Am = A.matrix()
        for trial in range(50):
            n = int(rng.integers(r, 13))
            H = codes.random_parity_check(n, r, 6000 + 100 * r + 10 * s + trial)
            rows = gf2.pack_rows(erasure.apply_generic_set(Am, H))
            cols = erasure.columns_bits(H)
            for size in range(1, s + 1):
                for E in itertools.combinations(range(n), size):
                    e = sum(1 << i for i in E)
                    if erasure.correctable_by_rank(cols, e):
                        checked += 1
                        if not erasure.peel_succeeds(rows, e):
                            failures += 1
    record(6, failures == 0, f"{checked} correctable patterns, {failures} peeling failures")
    assert failures == 0


# ------------------------------------------------------------------ 7

def brute_stopping_distance(H):
    rows = gf2.pack_rows(H)
    n = H.shape[1]
    return min(bin(E).count("1") for E in range(1, 1 << n)
               if all(bin(r & E).count("1") != 1 for r in rows))


def test_criterion_7_stopping_redundancy():
    bad = []
    ham, dt1 = timed(construct.greedy_parity_check, codes.make_code("hamming", m=3))
    H = ham.set
    if not (gf2.rank(H) == 3 and brute_stopping_distance(H) == 3 and ham.size <= 9 and dt1 < LIMIT):
        bad.append(f"hamming: rank {gf2.rank(H)} rows {ham.size}")
    ext, dt2 = timed(construct.greedy_parity_check, codes.make_code("extended-hamming", m=3))
    limit = bounds.row_greedy_bound(8, 4, 4)
    if not (brute_stopping_distance(ext.set) == 4 and ext.size <= limit and dt2 < LIMIT):
        bad.append(f"extended hamming: rows {ext.size} bound {limit:.2f}")
    record(7, not bad, "; ".join(bad) or f"[7,4,3]: {ham.size} rows, s=3; [8,4,4]: {ext.size} rows, s=4")
    assert not bad


# ------------------------------------------------------------------ 8

def test_criterion_8_bose_burton():
    t0 = time.perf_counter()
    nz = range(1, 16)
    six = any(verify.is_subspace_blocking(verify.VectorSet(4, A), 2) for A in itertools.combinations(nz, 6))
    threes = [verify.is_subspace_blocking(verify.VectorSet(4, tuple(x for x in U.members() if x)), 2).ok
              for U in gf2.enumerate_subspaces(4, 3)]
    best = construct.exact_blocking_minimum(4, 2)
    dt = time.perf_counter() - t0
    want = bounds.blocking_lower(2, 4, 2)
    ok = (not six and all(threes) and best.optimal and best.size == want == 7 and dt < LIMIT)
    record(8, ok, f"minimum {best.size}, no 6-subset blocks, all {len(threes)} 3-subspaces block, {dt:.1f}s")
    assert ok


# ------------------------------------------------------------------ 9

def test_criterion_9_thresholds():
    bad, ties = [], 0
    for kind in ("good", "generic"):
        for k in range(1, 9):
            for s in range(1, min(k, 4) + 1):
                t = bounds.threshold_details(kind, k, s)
                N = t.N
                at = bounds.threshold_product_exact(kind, k, s, N) < 1
                before = N == 0 or bounds.threshold_product_exact(kind, k, s, N - 1) >= 1
                float_at = bounds.threshold_decision(kind, k, s, N)
                float_before = N == 0 or not bounds.threshold_decision(kind, k, s, N - 1)
                ties += len(t.rechecked)
                if not (at and before and t.float_exact_agree and float_at == at and float_before == before):
                    bad.append(f"{kind}({k},{s}) N={N}")
    record(9, not bad, "; ".join(bad) or f"all k <= 8, s <= 4, both kinds; {ties} exact ties settled in rationals")
    assert not bad


# ------------------------------------------------------------------ 10

def test_criterion_10_decoder_oracles():
    mismatches, soundness, total = 0, 0, 0
    for C in fixture_codes(10) + random_codes(100):
        if C.r == 0:
            continue
        cols = erasure.columns_bits(C.parity_check)
        words = C.codewords_bits()
        rows = C.parity_bits()
        for E in range(1 << C.n):
            total += 1
            ml = erasure.correctable_by_rank(cols, E)
            mismatches += ml != erasure.correctable_by_codewords(words, E)
            soundness += erasure.peel_succeeds(rows, E) and not ml
    ok = mismatches == 0 and soundness == 0
    record(10, ok, f"{total} patterns, {mismatches} oracle mismatches, {soundness} peel-without-ML")
    assert ok
