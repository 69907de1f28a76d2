"""Compiled inner loops over all (r-s)-subspaces of F_2^r.

Every (r-s)-subspace U is represented by the RREF rows of its check matrix H
(an s x r matrix with U = ker H), packed into one uint64, in the order of
``gf2.enumerate_subspaces(r, s)``.  The coset of x modulo U is identified by
its syndrome H x, an integer in [0, 2^s).  Per-subspace state is the bitmask of
syndromes already hit by the chosen vectors.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numba as nb
import numpy as np

from . import gf2

def _slot_tables(r: int, s: int):
    combos = list(itertools.combinations(range(r), s))
    C = len(combos)
    F = s * (r - s)
    piv = np.zeros((C, max(s, 1)), np.int64)
    srow = np.zeros((C, max(F, 1)), np.int64)
    scol = np.zeros((C, max(F, 1)), np.int64)
    nslot = np.zeros(C, np.int64)
    offs = np.zeros(C + 1, np.int64)
    for ci, p in enumerate(combos):
        pset = set(p)
        slots = [(i, c) for i, pc in enumerate(p) for c in range(pc + 1, r) if c not in pset]
        piv[ci, :s] = p
        for j, (i, c) in enumerate(slots):
            srow[ci, j] = i
            scol[ci, j] = c
        nslot[ci] = len(slots)
        offs[ci + 1] = offs[ci] + (1 << len(slots))
    return piv, srow, scol, nslot, offs


@nb.njit(cache=True)
def _fill_rref(s, piv, srow, scol, nslot, offs, out):
    for ci in range(piv.shape[0]):
        f = nslot[ci]
        base = offs[ci]
        lead = np.uint64(0)
        for i in range(s):
            lead |= np.uint64(1) << np.uint64(16 * i + piv[ci, i])
        for code in range(1 << f):
            w = lead
            for j in range(f):
                if (code >> (f - 1 - j)) & 1:
                    w |= np.uint64(1) << np.uint64(16 * srow[ci, j] + scol[ci, j])
            out[base + code] = w


@lru_cache(maxsize=2)
def check_rows(r: int, s: int) -> np.ndarray:
    """RREF check matrices of every s-subspace of F_2^r in documented order.

    Returned as uint64 words: row i of the matrix occupies bits 16i..16i+15.
    """
    if r > 16 or s > 4:
        raise ValueError("kernels support r <= 16 and s <= 4")
    piv, srow, scol, nslot, offs = _slot_tables(r, s)
    out = np.zeros(int(offs[-1]), dtype=np.uint64)
    if s:
        _fill_rref(s, piv, srow, scol, nslot, offs, out)
    return out


def unpack_word(w: int, s: int) -> list[int]:
    return [(int(w) >> (16 * i)) & 0xFFFF for i in range(s)]


@nb.njit(cache=True, inline="always")
def _syndrome(h, xb):
    # xb is x copied into all four 16-bit lanes
    v = h & xb
    v ^= v >> np.uint64(8)
    v ^= v >> np.uint64(4)
    v ^= v >> np.uint64(2)
    v ^= v >> np.uint64(1)
    return np.int64((v & np.uint64(1)) | ((v >> np.uint64(15)) & np.uint64(2))
                    | ((v >> np.uint64(30)) & np.uint64(4)) | ((v >> np.uint64(45)) & np.uint64(8)))


@nb.njit(cache=True, inline="always")
def _lanes(x):
    return np.uint64(x) * np.uint64(0x0001000100010001)


@nb.njit(cache=True)
def first_failure(H, A, ok):
    """Index of the first subspace whose syndrome mask over A is not ``ok``; -1 if none."""
    xs = np.empty(A.shape[0], np.uint64)
    for j in range(A.shape[0]):
        xs[j] = _lanes(A[j])
    for u in range(H.shape[0]):
        h = H[u]
        mask = 0
        for xb in xs:
            mask |= 1 << _syndrome(h, xb)
            if ok[mask]:
                break
        if not ok[mask]:
            return u
    return -1


@nb.njit(cache=True)
def syndrome_masks(H, A):
    out = np.zeros(H.shape[0], np.int64)
    for u in range(H.shape[0]):
        mask = 0
        for a in A:
            mask |= 1 << _syndrome(H[u], _lanes(a))
        out[u] = mask
    return out


@nb.njit(cache=True)
def _wht(v):
    n = v.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                a = v[j]
                b = v[j + h]
                v[j] = a + b
                v[j + h] = a - b
        h *= 2


@nb.njit(cache=True, inline="always")
def _scatter(acc, h, s, tab, rnew, rold, z):
    # acc[sum_i y_i H_i] += tab[rnew, y] - tab[rold, y] for every y in F_2^s
    if s == 4:
        h0 = np.int64(h & np.uint64(0xFFFF))
        h1 = np.int64((h >> np.uint64(16)) & np.uint64(0xFFFF))
        h2 = np.int64((h >> np.uint64(32)) & np.uint64(0xFFFF))
        h3 = np.int64(h >> np.uint64(48))
        a = h0 ^ h1
        c = h2 ^ h3
        t = tab[rnew]
        o = tab[rold]
        acc[0] += t[0] - o[0]
        acc[h0] += t[1] - o[1]
        acc[h1] += t[2] - o[2]
        acc[a] += t[3] - o[3]
        acc[h2] += t[4] - o[4]
        acc[h0 ^ h2] += t[5] - o[5]
        acc[h1 ^ h2] += t[6] - o[6]
        acc[a ^ h2] += t[7] - o[7]
        acc[h3] += t[8] - o[8]
        acc[h0 ^ h3] += t[9] - o[9]
        acc[h1 ^ h3] += t[10] - o[10]
        acc[a ^ h3] += t[11] - o[11]
        acc[c] += t[12] - o[12]
        acc[h0 ^ c] += t[13] - o[13]
        acc[h1 ^ c] += t[14] - o[14]
        acc[a ^ c] += t[15] - o[15]
        return
    z[0] = 0
    n = 1
    for i in range(s):
        hi = np.int64((h >> np.uint64(16 * i)) & np.uint64(0xFFFF))
        for y in range(n):
            z[n + y] = z[y] ^ hi
        n *= 2
    for y in range(n):
        acc[z[y]] += tab[rnew, y] - tab[rold, y]


@nb.njit(cache=True)
def greedy_cover(H, r, s, fhat, done, order, max_picks, linear):
    """Greedy vertex cover over syndrome-mask state.

    ``fhat[S]`` is the Walsh-Hadamard transform of the per-subspace gain
    function for covered mask S; ``done[S]`` marks masks with zero gain.  The
    gain of vertex x is 2^-s * WHT(acc)[x].  ``order`` lists candidate
    vertices in tie-break order.  When ``linear`` is set the change of fhat
    on adding syndrome b does not depend on the mask and is read from
    ``fhat[2^b] - fhat[0]``.  The all-ones mask must have zero gain.  Returns (picks, gains-at-pick).
    """
    q = 1 << s
    z = np.zeros(q, np.int64)
    Hc = H.copy()
    S = np.zeros(Hc.shape[0], np.uint16)
    nact = Hc.shape[0]
    acc = np.zeros(1 << r, np.int64)
    full = (1 << q) - 1
    delta = np.zeros((q, q), np.int64)
    for b in range(1, q):
        for y in range(q):
            delta[b, y] = fhat[1 << b, y] - fhat[0, y]
    if done[0]:
        nact = 0
    for u in range(nact):
        _scatter(acc, Hc[u], s, fhat, 0, full, z)
    picks = np.zeros(max_picks, np.int64)
    gains = np.zeros(max_picks, np.int64)
    npick = 0
    gain = np.zeros(1 << r, np.int64)
    while nact > 0 and npick < max_picks:
        gain[:] = acc
        _wht(gain)
        best = -1
        bestg = 0
        for x in order:
            g = gain[x] >> s
            if g > bestg:
                bestg = g
                best = x
        if best < 0:
            break
        picks[npick] = best
        gains[npick] = bestg
        npick += 1
        xb = _lanes(best)
        keep = 0
        for u in range(nact):
            h = Hc[u]
            old = np.int64(S[u])
            b = _syndrome(h, xb)
            new = old | (1 << b)
            if b != 0 and new != old:
                if linear:
                    _scatter(acc, h, s, delta, b, 0, z)
                else:
                    _scatter(acc, h, s, fhat, new, old, z)
            else:
                new = old
            if not done[new]:
                Hc[keep] = h
                S[keep] = new
                keep += 1
        nact = keep
    return picks[:npick], gains[:npick]


# --------------------------------------------------------------------------
# per-mask tables (s <= 4)

def bases_masks(s: int) -> list[int]:
    """Unordered bases of F_2^s as bitmasks over the 2^s syndromes."""
    out = []
    vecs = sorted(range(1, 1 << s), key=lambda x: gf2.lex_key(x, s))
    for combo in itertools.combinations(vecs, s):
        if gf2.is_independent(combo):
            m = 0
            for b in combo:
                m |= 1 << b
            out.append(m)
    return out


def basis_tuples(s: int) -> list[tuple[int, ...]]:
    vecs = sorted(range(1, 1 << s), key=lambda x: gf2.lex_key(x, s))
    return [c for c in itertools.combinations(vecs, s) if gf2.is_independent(c)]


@lru_cache(maxsize=None)
def mask_tables(s: int, kind: str):
    """(ok, gain, fhat) tables indexed by covered-syndrome mask.

    good:    an edge is a nonzero syndrome b; mask ok iff it holds every one.
    generic: an edge is an unordered basis of F_2^s; ok iff every basis meets it.
    gain[S, b] counts edges hit by b and not by S.
    """
    if s > 4:
        raise ValueError("mask tables need s <= 4")
    q = 1 << s
    nmask = 1 << q
    masks = np.arange(nmask, dtype=np.int64)
    if kind == "good":
        edges = np.array([1 << b for b in range(1, q)], dtype=np.int64)
    elif kind == "generic":
        edges = np.array(bases_masks(s), dtype=np.int64)
    else:
        raise ValueError(kind)
    member = ((edges[:, None] >> np.arange(q)[None, :]) & 1).astype(np.float32)
    gain = np.zeros((nmask, q), np.int32)
    ok = np.zeros(nmask, bool)
    step = 4096
    for lo in range(0, nmask, step):
        blk = masks[lo:lo + step]
        open_ = ((blk[:, None] & edges[None, :]) == 0).astype(np.float32)
        ok[lo:lo + step] = ~open_.any(axis=1)
        gain[lo:lo + step] = np.rint(open_ @ member).astype(np.int32)
    had = np.array([[(-1) ** bin(y & b).count("1") for b in range(q)] for y in range(q)], np.int64)
    fhat = (gain.astype(np.int64) @ had.T).astype(np.int32)
    return ok, gain, fhat


# --------------------------------------------------------------------------
# greedy union of s-subspaces covering all (r-s)-subspaces by complements

def rank_tables(r: int, k: int):
    """(combo index by pivot bitmask, offsets) for ranking k-subspaces in documented order."""
    combos = list(itertools.combinations(range(r), k))
    index = np.full(1 << r, -1, np.int64)
    for ci, p in enumerate(combos):
        m = 0
        for c in p:
            m |= 1 << c
        index[m] = ci
    _, _, _, _, offs = _slot_tables(r, k)
    return index, offs


@nb.njit(cache=True)
def _rref_small(rows, k, r):
    # in-place RREF of k independent packed rows, ordered by pivot
    for i in range(k):
        best = i
        bp = 99
        for j in range(i, k):
            x = rows[j]
            p = 0
            while not (x >> p) & 1:
                p += 1
            if p < bp:
                bp = p
                best = j
        t = rows[i]
        rows[i] = rows[best]
        rows[best] = t
        for j in range(k):
            if j != i and (rows[j] >> bp) & 1:
                rows[j] ^= rows[i]


@nb.njit(cache=True)
def _rank_of(rows, k, r, index, offs):
    pivmask = 0
    pivs = np.empty(k, np.int64)
    for i in range(k):
        x = rows[i]
        p = 0
        while not (x >> p) & 1:
            p += 1
        pivs[i] = p
        pivmask |= 1 << p
    code = 0
    for i in range(k):
        for c in range(pivs[i] + 1, r):
            if not (pivmask >> c) & 1:
                code = (code << 1) | ((rows[i] >> c) & 1)
    return offs[index[pivmask]] + code


@nb.njit(cache=True)
def _complements(basis, k, r, index_c, offs_c, out):
    """Ranks of all 2^{k(r-k)} complements of the k-subspace with RREF ``basis``."""
    pivmask = 0
    for i in range(k):
        x = basis[i]
        p = 0
        while not (x >> p) & 1:
            p += 1
        pivmask |= 1 << p
    free = np.empty(r - k, np.int64)
    nf = 0
    for c in range(r):
        if not (pivmask >> c) & 1:
            free[nf] = c
            nf += 1
    m = r - k
    rows = np.empty(m, np.int64)
    nbits = k * m
    for code in range(1 << nbits):
        for j in range(m):
            v = np.int64(1) << free[j]
            for i in range(k):
                if (code >> (j * k + i)) & 1:
                    v ^= basis[i]
            rows[j] = v
        _rref_small(rows, m, r)
        out[code] = _rank_of(rows, m, r, index_c, offs_c)


@nb.njit(cache=True)
def _unrank_fill(H, s, out):
    for u in range(H.shape[0]):
        h = H[u]
        for i in range(s):
            out[u, i] = np.int64((h >> np.uint64(16 * i)) & np.uint64(0xFFFF))


@nb.njit(cache=True)
def subspace_union_greedy(Ub, Vb, r, s, index_u, offs_u, index_v, offs_v, max_picks):
    """Greedy choice of s-subspaces (rows of Ub) until every (r-s)-subspace
    (rows of Vb) has a chosen complement.  Ties go to the lowest index."""
    NU = Ub.shape[0]
    NV = Vb.shape[0]
    deg = 1 << (s * (r - s))
    gain = np.full(NU, deg, np.int64)
    covered = np.zeros(NV, np.bool_)
    ncov = 0
    buf_v = np.empty(deg, np.int64)
    buf_u = np.empty(deg, np.int64)
    picks = np.zeros(max_picks, np.int64)
    gains = np.zeros(max_picks, np.int64)
    npick = 0
    while ncov < NV and npick < max_picks:
        best = 0
        for u in range(1, NU):
            if gain[u] > gain[best]:
                best = u
        picks[npick] = best
        gains[npick] = gain[best]
        npick += 1
        _complements(Ub[best], s, r, index_v, offs_v, buf_v)
        for t in range(deg):
            v = buf_v[t]
            if covered[v]:
                continue
            covered[v] = True
            ncov += 1
            _complements(Vb[v], r - s, r, index_u, offs_u, buf_u)
            for w in range(deg):
                gain[buf_u[w]] -= 1
    return picks[:npick], gains[:npick]


@nb.njit(cache=True)
def count_complements(basis, k, Vb, r):
    """Number of rows of Vb (subspaces of dimension r-k) meeting span(basis) only in 0."""
    span = np.zeros(1 << k, np.int64)
    for y in range(1, 1 << k):
        low = y & -y
        i = 0
        while (low >> i) != 1:
            i += 1
        span[y] = span[y ^ low] ^ basis[i]
    m = r - k
    cnt = 0
    red = np.empty(m, np.int64)
    piv = np.empty(m, np.int64)
    for v in range(Vb.shape[0]):
        for j in range(m):
            x = Vb[v, j]
            p = 0
            while not (x >> p) & 1:
                p += 1
            piv[j] = p
        ok = True
        for y in range(1, 1 << k):
            x = span[y]
            for j in range(m):
                if (x >> piv[j]) & 1:
                    x ^= Vb[v, j]
            if x == 0:
                ok = False
                break
        if ok:
            cnt += 1
    return cnt


@nb.njit(cache=True)
def _fill_rows(k, piv, srow, scol, nslot, offs, out):
    for ci in range(piv.shape[0]):
        f = nslot[ci]
        base = offs[ci]
        for code in range(1 << f):
            for i in range(k):
                out[base + code, i] = np.int64(1) << piv[ci, i]
            for j in range(f):
                if (code >> (f - 1 - j)) & 1:
                    out[base + code, srow[ci, j]] |= np.int64(1) << scol[ci, j]


def subspace_rows(r: int, k: int) -> np.ndarray:
    """int64 array (count, k): RREF bases of all k-subspaces of F_2^r, documented order."""
    piv, srow, scol, nslot, offs = _slot_tables(r, k)
    out = np.zeros((int(offs[-1]), k), dtype=np.int64)
    if k:
        _fill_rows(k, piv, srow, scol, nslot, offs, out)
    return out


# --------------------------------------------------------------------------
# the same greedy through Moebius inversion on the subspace lattice:
#   #{uncovered V : V & U = 0} = sum_{T <= U} mu(T) N(T),
#   mu(T) = (-1)^t 2^{t(t-1)/2},  N(T) = #{uncovered V containing T}

TRAILING = np.array([0] + [((i & -i).bit_length() - 1) for i in range(1, 1 << 16)], dtype=np.int64)


@nb.njit(cache=True, inline="always")
def _tz(x):
    for k in range(4):
        lo = (x >> (16 * k)) & 0xFFFF
        if lo:
            return 16 * k + TRAILING[lo]
    return 64


def _pext_table():
    tab = np.zeros((256, 256), np.uint16)
    for m in range(256):
        bits = [i for i in range(8) if m >> i & 1]
        for v in range(256):
            tab[m, v] = sum(((v >> b) & 1) << j for j, b in enumerate(bits))
    return tab


PEXT8 = _pext_table()
POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


@nb.njit(cache=True, inline="always")
def _pext16(v, m):
    lo = m & 0xFF
    return np.int64(PEXT8[lo, v & 0xFF]) | (np.int64(PEXT8[(m >> 8) & 0xFF, (v >> 8) & 0xFF]) << POP8[lo])


@nb.njit(cache=True, inline="always")
def _pop16(m):
    return POP8[m & 0xFF] + POP8[(m >> 8) & 0xFF]


RAW_KEY_BITS = 22


@nb.njit(cache=True, inline="always")
def _slot(rows, t, r, full, idx_t):
    # counter slot of the t-subspace with RREF rows within its dimension block:
    # the rows themselves when short enough, else the pivot set followed by
    # every row restricted to the non-pivot columns
    if t * r <= RAW_KEY_BITS:
        code = np.int64(0)
        for i in range(t):
            code = (code << r) | rows[i]
        return code
    pivmask = np.int64(0)
    for i in range(t):
        pivmask |= rows[i] & -rows[i]
    mk = full & ~pivmask
    w = r - t
    code = idx_t[pivmask]
    for i in range(t):
        code = (code << w) | _pext16(rows[i], mk)
    return code


def _block_size(r: int, t: int) -> int:
    if t * r <= RAW_KEY_BITS:
        return 1 << (t * r)
    return math.comb(r, t) << (t * (r - t))


@nb.njit(cache=True)
def subspace_union_mobius(Ub, r, s, coefU, coefU_dim, coefV, coefV_dim, idx, nbase,
                          n_init, idx_v, offs_v, NV, max_picks):
    """Greedy cover of all (r-s)-subspaces by complements, gains via Moebius inversion.

    Ub: RREF bases of the s-subspaces.  coefU/coefV list the RREF bases of
    every subspace of dimension 1..s of F_2^s and F_2^{r-s} (as coefficient
    rows over a basis), with their dimensions.  idx[t] numbers the pivot
    sets of size t (see ``_slot``); nbase[t] is the offset of dimension t in the
    flat counter array and n_init[t] the initial count.
    idx_v/offs_v rank (r-s)-subspaces.  Ties go to the lowest index.
    """
    NU = Ub.shape[0]
    m = r - s
    deg = 1 << (s * m)
    full = (np.int64(1) << r) - 1
    N = np.zeros(nbase[s + 1], np.int32)
    for t in range(1, s + 1):
        N[nbase[t]:nbase[t + 1]] = n_init[t]
    n0 = NV
    mu = np.zeros(s + 1, np.int64)
    for t in range(s + 1):
        mu[t] = (-1) ** t * (1 << (t * (t - 1) // 2))
    nsub = coefU.shape[0]
    nsv = coefV.shape[0]
    sub = np.empty((NU, nsub), np.int32)
    musub = np.empty(nsub, np.int64)
    for q in range(nsub):
        musub[q] = mu[coefU_dim[q]]
    rows = np.empty(max(s, m), np.int64)
    for u in range(NU):
        span = Ub[u]
        for q in range(nsub):
            t = coefU_dim[q]
            for i in range(t):
                v = np.int64(0)
                c = coefU[q, i]
                while c:
                    v ^= span[_tz(c)]
                    c &= c - 1
                rows[i] = v
            # combinations of RREF rows by RREF coefficients stay in RREF
            sub[u, q] = nbase[t] + _slot(rows, t, r, full, idx[t])
    covered = np.zeros(NV, np.bool_)
    cbuf = np.empty(deg, np.int64)
    vrows = np.empty(m, np.int64)
    vspan = np.empty(1 << m, np.int64)
    keys = np.empty(nsv, np.int64)
    picks = np.zeros(max_picks, np.int64)
    gains = np.zeros(max_picks, np.int64)
    npick = 0
    while n0 > 0 and npick < max_picks:
        best = -1
        bestg = -1
        for u in range(NU):
            g = n0
            for q in range(nsub):
                g += musub[q] * N[sub[u, q]]
            if g > bestg:
                bestg = g
                best = u
        picks[npick] = best
        gains[npick] = bestg
        npick += 1
        _complements(Ub[best], s, r, idx_v, offs_v, cbuf)
        for w in range(deg):
            v = cbuf[w]
            if covered[v]:
                continue
            covered[v] = True
            n0 -= 1
            _complement_basis(Ub[best], s, r, w, vrows)
            _rref_small(vrows, m, r)
            vspan[0] = 0
            for y in range(1, 1 << m):
                low = y & -y
                vspan[y] = vspan[y ^ low] ^ vrows[_tz(low)]
            for q in range(nsv):
                t = coefV_dim[q]
                for i in range(t):
                    rows[i] = vspan[coefV[q, i]]
                keys[q] = nbase[t] + _slot(rows, t, r, full, idx[t])
            for q in range(nsv):
                N[keys[q]] -= 1
    return picks[:npick], gains[:npick]


@nb.njit(cache=True)
def _complement_basis(basis, k, r, code, out):
    # the code-th complement of span(basis) in the order used by _complements
    pivmask = 0
    for i in range(k):
        pivmask |= basis[i] & -basis[i]
    m = r - k
    j = 0
    for c in range(r):
        if not (pivmask >> c) & 1:
            v = np.int64(1) << c
            for i in range(k):
                if (code >> (j * k + i)) & 1:
                    v ^= basis[i]
            out[j] = v
            j += 1


def mobius_tables(r: int, s: int):
    """Arguments for ``subspace_union_mobius`` after ``Ub`` (up to ``NV``)."""
    idx = np.full((s + 1, 1 << r), -1, np.int64)
    nbase = np.zeros(s + 2, np.int64)
    n_init = np.zeros(s + 1, np.int64)
    for t in range(1, s + 1):
        for ci, p in enumerate(itertools.combinations(range(r), t)):
            idx[t, sum(1 << c for c in p)] = ci
        nbase[t + 1] = nbase[t] + _block_size(r, t)
        n_init[t] = gf2.gaussian_coefficient(r - t, r - s - t) if t <= r - s else 0

    def coef(dim):
        rows, dims = [], []
        for t in range(1, min(s, dim) + 1):
            sub = subspace_rows(dim, t)
            pad = np.zeros((len(sub), s), np.int64)
            pad[:, :t] = sub
            rows.append(pad)
            dims.append(np.full(len(sub), t, np.int64))
        return np.concatenate(rows), np.concatenate(dims)

    cu, du = coef(s)
    cv, dv = coef(r - s)
    iv, ov = rank_tables(r, r - s)
    return cu, du, cv, dv, idx, nbase, n_init, iv, ov


# --------------------------------------------------------------------------
# minimum hitting set over at most 63 vertices (edges as int64 bitmasks)

@nb.njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56 & 0xFF


@nb.njit(cache=True)
def hitting_set_bb(edges, nv, start, best, budget):
    """Depth-first branch and bound for a hitting set smaller than ``best``.

    Every solution contains ``start``.  A node branches on the uncovered edge
    with fewest admissible vertices, trying them by coverage (descending) and
    index; the i-th child excludes the first i-1.  Nodes are pruned with
    max(uncovered / max coverage, disjoint-edge packing).  Returns
    (best size, best mask or -1, nodes explored, search completed).
    """
    ne = edges.shape[0]
    full = (np.int64(1) << nv) - 1
    cap = nv * nv + nv + 4
    stack_c = np.empty(cap, np.int64)
    stack_x = np.empty(cap, np.int64)
    sp = 0
    stack_c[0] = start
    stack_x[0] = 0
    sp = 1
    unc = np.empty(ne, np.int64)
    gains = np.zeros(nv, np.int64)
    cand = np.empty(nv, np.int64)
    best_mask = np.int64(-1)
    nodes = 0
    while sp > 0:
        sp -= 1
        c = stack_c[sp]
        x = stack_x[sp]
        nodes += 1
        if nodes > budget:
            return best, best_mask, nodes - 1, False
        size = _popcount(c)
        nunc = 0
        for e in range(ne):
            if edges[e] & c == 0:
                unc[nunc] = e
                nunc += 1
        if nunc == 0:
            if size < best:
                best = size
                best_mask = c
            continue
        if size + 1 >= best:
            continue
        allowed = full & ~c & ~x
        gains[:] = 0
        emin = -1
        kmin = 99
        for i in range(nunc):
            m = edges[unc[i]] & allowed
            k = _popcount(m)
            if k < kmin:
                kmin = k
                emin = unc[i]
            while m:
                low = m & -m
                gains[_tz(low)] += 1
                m ^= low
        if kmin == 0:
            continue
        maxg = 0
        for v in range(nv):
            if gains[v] > maxg:
                maxg = gains[v]
        lb = (nunc + maxg - 1) // maxg
        used = np.int64(0)
        pack = 0
        for i in range(nunc):
            m = edges[unc[i]] & allowed
            if m & used == 0:
                used |= m
                pack += 1
        if pack > lb:
            lb = pack
        if size + lb >= best:
            continue
        m = edges[emin] & allowed
        nc = 0
        while m:
            low = m & -m
            cand[nc] = _tz(low)
            nc += 1
            m ^= low
        # insertion sort: coverage descending, index ascending
        for i in range(1, nc):
            v = cand[i]
            j = i - 1
            while j >= 0 and gains[cand[j]] < gains[v]:
                cand[j + 1] = cand[j]
                j -= 1
            cand[j + 1] = v
        excl = x
        for i in range(nc):
            excl |= np.int64(1) << cand[i]
        # push in reverse so the first candidate is explored first
        for i in range(nc - 1, -1, -1):
            excl ^= np.int64(1) << cand[i]
            stack_c[sp] = c | (np.int64(1) << cand[i])
            stack_x[sp] = excl
            sp += 1
    return best, best_mask, nodes, True


# --------------------------------------------------------------------------
# greedy choice of dual codewords covering coordinate sets K (|K| < d)

@nb.njit(cache=True)
def parity_greedy(words, sets, max_picks, budget):
    """A word u covers K iff |u & K| = 1.  ``words`` in tie-break order;
    returns indices of the picks, their gains and whether ``budget`` word-set
    tests sufficed."""
    nw = words.shape[0]
    live = sets.copy()
    left = live.shape[0]
    picks = np.zeros(max_picks, np.int64)
    gains = np.zeros(max_picks, np.int64)
    npick = 0
    work = 0
    while left > 0 and npick < max_picks:
        work += nw * left
        if work > budget:
            return picks[:npick], gains[:npick], False
        best = -1
        bestg = 0
        for w in range(nw):
            u = words[w]
            g = 0
            for k in range(left):
                if _popcount(u & live[k]) == 1:
                    g += 1
            if g > bestg:
                bestg = g
                best = w
        if best < 0:
            break
        picks[npick] = best
        gains[npick] = bestg
        npick += 1
        u = words[best]
        j = 0
        for k in range(left):
            if _popcount(u & live[k]) != 1:
                live[j] = live[k]
                j += 1
        left = j
    return picks[:npick], gains[:npick], True
