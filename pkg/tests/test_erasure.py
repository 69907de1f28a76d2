import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genset import codes, erasure, gf2
from genset.errors import BudgetError, DataError, ParameterError

HAMMING_H = codes.hamming_parity_check(3)


def brute_stopping_distance(rows, n):
    best = None
    for E in range(1, 1 << n):
        if all(bin(r & E).count("1") != 1 for r in rows):
            size = bin(E).count("1")
            best = size if best is None else min(best, size)
    return best


def test_stopping_set_examples():
    assert erasure.is_stopping_set([[1, 1, 1]], [0, 1])
    assert not erasure.is_stopping_set([[1, 1, 1]], [0])
    # columns 100, 010, 110 of the standard Hamming check matrix sit at positions 0, 1, 2
    assert erasure.is_stopping_set(HAMMING_H, [0, 1, 2])
    with pytest.raises(ParameterError):
        erasure.is_stopping_set([[1, 1, 1]], [])
    with pytest.raises(ParameterError):
        erasure.is_stopping_set([[1, 1, 1]], [3])
    with pytest.raises(ParameterError):
        erasure.is_stopping_set([[1, 1, 1]], [1, 1])


def test_peel_examples():
    res = erasure.peel_decode([[1, 1, 1]], [1])
    assert res.resolved == [1] and res.residual == [] and res.success
    assert erasure.peel_decode([[1, 1, 1]], [0, 1]).residual == [0, 1]


def test_peel_full_dual_hamming():
    C = codes.make_code("hamming", m=3)
    dual = gf2.unpack_rows([x for x in C.dual_codewords_bits() if x], 7)
    assert dual.shape[0] == 7
    for E in itertools.combinations(range(7), 3):
        if erasure.is_correctable(C.parity_check, E):
            assert erasure.peel_decode(dual, E).success


def test_peel_trace_is_lowest_row_first():
    H = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]
    res = erasure.peel_decode(H, [1, 2, 3])
    assert res.success
    # row 0 resolves 1, then row 1 resolves 2, then row 2 resolves 3
    assert res.resolved == [1, 2, 3] and res.used_rows == [0, 1, 2]


def test_stopping_distance_examples():
    assert erasure.stopping_distance([[1, 1, 1]]) == 2
    assert erasure.stopping_distance(np.eye(2, dtype=np.uint8)) is None
    assert erasure.stopping_distance(HAMMING_H) == 3 == brute_stopping_distance(gf2.pack_rows(HAMMING_H), 7)
    with pytest.raises(BudgetError):
        erasure.stopping_distance(np.ones((1, 30), dtype=np.uint8))
    assert erasure.stopping_distance(np.ones((1, 30), dtype=np.uint8), max_size=2) == 2


@given(st.integers(1, 8).flatmap(lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=1, max_size=6).map(lambda R: (n, R))))
@settings(max_examples=300, deadline=None)
def test_stopping_distance_matches_brute_force(case):
    n, R = case
    rows = gf2.unpack_rows(R, n)
    assert erasure.stopping_distance(rows) == brute_stopping_distance(R, n)


def test_is_correctable_examples():
    C = codes.make_code("hamming", m=3)
    H = C.parity_check
    assert erasure.is_correctable(H, [])
    for c in C.codewords_bits():
        if bin(c).count("1") == 3:
            assert not erasure.is_correctable(H, gf2.support(c))
    pats = [E for k in (1, 2) for E in itertools.combinations(range(7), k)]
    assert len(pats) == 28 and all(erasure.is_correctable(H, E) for E in pats)
    with pytest.raises(ParameterError):
        erasure.is_correctable([[1, 1, 0], [1, 1, 0]], [0])


def test_ml_decode_examples():
    H = [[1, 1, 1]]
    w = np.array([1, 1, 0], dtype=np.uint8)
    assert (erasure.ml_erasure_decode(H, w, []) == w).all()
    word, erased = erasure.parse_received("1?0")
    assert gf2.to_string(gf2.pack(erasure.ml_erasure_decode(H, word, erased)), 3) == "110"
    C = codes.make_code("hamming", m=3)
    c3 = next(c for c in C.codewords_bits() if bin(c).count("1") == 3)
    assert erasure.ml_erasure_decode(C.parity_check, np.zeros(7, np.uint8), gf2.support(c3)) is None
    with pytest.raises(DataError):
        erasure.ml_erasure_decode(H, [1, 0, 0], [])


def test_ml_decode_recovers_codewords(small_codes):
    rng = np.random.default_rng(5)
    for C in small_codes[:60]:
        if C.r == 0:
            continue
        words = C.codewords_bits()
        for _ in range(10):
            c = words[int(rng.integers(len(words)))]
            E = [i for i in range(C.n) if rng.random() < 0.4]
            got = erasure.ml_erasure_decode(C.parity_check, gf2.unpack(c, C.n), E)
            if erasure.is_correctable(C.parity_check, E):
                assert gf2.pack(got) == c
            else:
                assert got is None


def test_min_max_distance_examples():
    assert erasure.min_max_distance(codes.make_code("repetition", n=3)) == (3, 3)
    assert erasure.min_max_distance(codes.make_code("hamming", m=3)) == (3, 7)
    assert erasure.min_max_distance(codes.make_code("simplex", k=3)) == (4, 4)


def test_lemma1_examples():
    S = codes.make_code("simplex", k=3)
    v = S.codewords_bits()[1]
    CI, Cstar, CIbar = erasure.lemma1_decompose(S, v)
    assert (CI.n, CI.k) == (4, 3) and (CIbar.n, CIbar.k) == (3, 2) and (Cstar.n, Cstar.k) == (4, 2)
    R = codes.make_code("repetition", n=4)
    CI, Cstar, CIbar = erasure.lemma1_decompose(R, 0b1111)
    assert (CIbar.n, CIbar.k) == (0, 0) and Cstar.k == 0
    with pytest.raises(ParameterError):
        erasure.lemma1_decompose(R, 0)
    with pytest.raises(ParameterError):
        erasure.lemma1_decompose(R, 0b0011)


def test_lemma1_dimensions_on_intersecting_codes():
    # in an s-wise intersecting code every nonzero codeword meets every other,
    # so restricting to a support keeps the dimension and the complement loses one
    for C in (codes.make_code("simplex", k=3), codes.make_code("simplex", k=4),
              codes.make_code("punctured-simplex", k=4)):
        for v in C.codewords_bits():
            if not v:
                continue
            CI, Cstar, CIbar = erasure.lemma1_decompose(C, v)
            w = bin(v).count("1")
            assert (CI.n, CI.k) == (w, C.k)
            assert (Cstar.n, Cstar.k) == (w, C.k - 1)
            assert (CIbar.n, CIbar.k) == (C.n - w, C.k - 1)
            assert Cstar.contains(0) and all(CI.contains(x) for x in Cstar.codewords_bits())


def test_lemma1_ranks_on_hamming():
    C = codes.make_code("hamming", m=3)
    for v in C.codewords_bits():
        if bin(v).count("1") == 3:
            CI, Cstar, CIbar = erasure.lemma1_decompose(C, v)
            I = gf2.support(v)
            assert CI.n == 3 and CI.k == gf2.rank(C.generator[:, I])
            assert Cstar.k == CI.k - 1
            Ibar = [i for i in range(7) if i not in I]
            assert CIbar.k == gf2.rank(C.generator[:, Ibar])


def test_apply_generic_set():
    H = codes.hamming_parity_check(3)
    assert (erasure.apply_generic_set(np.eye(3, dtype=np.uint8), H) == H).all()
    A = gf2.unpack_rows(range(1, 8), 3)
    rows = set(gf2.pack_rows(erasure.apply_generic_set(A, H)))
    C = codes.make_code("hamming", m=3)
    assert rows == set(C.dual_codewords_bits()) - {0}
    one = erasure.apply_generic_set([[1, 0, 1]], H)
    assert one.shape == (1, 7) and (one[0] == H[0] ^ H[2]).all()
    with pytest.raises(ParameterError):
        erasure.apply_generic_set(A, np.vstack([H[:2], H[:1]]))


def test_decoder_oracles(small_codes):
    for C in small_codes:
        if C.r == 0:
            continue
        H = C.parity_check
        cols = erasure.columns_bits(H)
        words = C.codewords_bits()
        R = C.parity_bits()
        sd = erasure.stopping_distance(H)
        for E in range(1 << C.n):
            ok = erasure.correctable_by_rank(cols, E)
            assert ok == erasure.correctable_by_codewords(words, E)
            if erasure.peel_succeeds(R, E):
                assert ok
            _, residual, _ = erasure.peel_bits(R, E)
            if residual:
                assert erasure.stopping_bits(R, residual)
            if sd is not None and bin(E).count("1") < sd:
                assert erasure.peel_succeeds(R, E)
        if C.k:
            assert sd is None or sd <= erasure.minimum_distance(C)


def test_is_correctable_methods_agree():
    C = codes.make_code("hamming", m=3)
    for E in range(1 << 7):
        pos = gf2.support(E)
        assert erasure.is_correctable(C.parity_check, pos) == erasure.is_correctable(C.parity_check, pos, method="codewords")


def test_simulation():
    C = codes.make_code("hamming", m=3)
    full = gf2.unpack_rows([x for x in C.dual_codewords_bits() if x], 7)
    rep0 = erasure.bec_simulate([C.parity_check], C, 0.0, 100, seed=1)
    assert rep0.ml_failures == 0 and rep0.per_strategy[0]["peel_failures"] == 0
    rep1 = erasure.bec_simulate([C.parity_check], C, 1.0, 50, seed=1)
    assert rep1.ml_failures == 50 and rep1.per_strategy[0]["peel_failures"] == 50
    rep = erasure.bec_simulate([full, C.parity_check], C, 0.3, 100_000, seed=7, names=["full", "standard"])
    f_full, f_std = (s["peel_failures"] for s in rep.per_strategy)
    assert rep.ml_failures <= f_full <= f_std
    again = erasure.bec_simulate([full, C.parity_check], C, 0.3, 100_000, seed=7, names=["full", "standard"])
    assert again.to_dict() == rep.to_dict()
    assert rep.to_csv().splitlines()[0] == "code,p,trials,seed,name,peel_failures,rate,ml_failures"
    with pytest.raises(DataError):
        erasure.bec_simulate([[[1, 0, 0, 0, 0, 0, 0]]], C, 0.1, 10, seed=0)


def test_patterns_are_chunk_independent():
    a = erasure.erasure_patterns(9, 0.4, 200, seed=3)
    b = erasure.erasure_patterns(9, 0.4, 50, seed=3)
    assert (a[:50] == b).all()
