"""Decision procedures with replayable failure certificates.

Properties of a set A of distinct nonzero vectors of F_2^r:

* good (r,s)-set: for every s independent vectors v_1..v_s some a in A has
  a.v_j = 1 for all j; equivalently A meets every flat {x : Hx = b} with H an
  s x r check matrix of full rank and b != 0.
* generic (r,s)-set: for every full-rank r x s matrix M some a in A has
  wt(aM) = 1; equivalently A meets the union of every family of s cosets of
  an (r-s)-subspace whose syndromes are independent; equivalently every image
  {aM} contains an affine hyperplane of F_2^s missing the origin.
* subspace blocking: A meets every (r-s)-subspace.

Enumerations run in documented order and the first violation found becomes
the certificate.  Fast paths for r <= 16, s <= 4 use compiled kernels over
check matrices; everything else runs in pure Python.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, gf2
from .errors import BudgetError, ParameterError

DEFAULT_BUDGET = 200_000_000
MATRIX_BUDGET = 1_000_000

CERTIFICATE_KINDS = (
    "missed_flat",
    "bad_matrix",
    "bad_coset_family",
    "bad_tuple",
    "missed_subspace",
    "missing_pattern",
)


# --------------------------------------------------------------------------
# vector sets

@dataclass(frozen=True)
class VectorSet:
    """Ordered distinct nonzero vectors of F_2^r, stored packed."""

    r: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ParameterError("ambient dimension must be >= 1")
        seen = set()
        for x in self.members:
            if not 0 < x < (1 << self.r):
                raise ParameterError("vector sets hold nonzero vectors of the ambient space")
            if x in seen:
                raise ParameterError(f"duplicate vector {gf2.to_string(x, self.r)}")
            seen.add(x)

    @classmethod
    def from_rows(cls, rows, r: int | None = None) -> "VectorSet":
        M = gf2.as_matrix(rows, r)
        if M.shape[1] < 1:
            raise ParameterError("vector sets need r >= 1")
        return cls(M.shape[1], tuple(gf2.pack_rows(M)))

    def matrix(self) -> np.ndarray:
        return gf2.unpack_rows(self.members, self.r)

    def strings(self) -> list[str]:
        return [gf2.to_string(x, self.r) for x in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def as_vector_set(A, r: int | None = None) -> VectorSet:
    if isinstance(A, VectorSet):
        if r is not None and r != A.r:
            raise ParameterError("dimension mismatch")
        return A
    if isinstance(A, (list, tuple)) and A and all(isinstance(x, (int, np.integer)) for x in A):
        if r is None:
            raise ParameterError("packed members need an explicit dimension")
        return VectorSet(r, tuple(int(x) for x in A))
    if isinstance(A, (list, tuple)) and not A:
        if r is None:
            raise ParameterError("empty set needs an explicit dimension")
        return VectorSet(r, ())
    return VectorSet.from_rows(A, r)


# --------------------------------------------------------------------------
# verdicts and certificates

@dataclass(frozen=True)
class Certificate:
    """Witness of a failed property check.

    ``witness`` is a JSON-friendly dict of bit strings; ``replay`` re-checks
    that the witness still defeats the given input.
    """

    kind: str
    prop: str
    s: int
    witness: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "property": self.prop, "s": self.s, "witness": self.witness}

    def replay(self, A, **kw) -> bool:
        """True iff this witness shows that ``A`` (set, generator or array) fails."""
        return _REPLAY[self.kind](self, A, **kw)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    certificate: Certificate | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


def _fail(kind: str, prop: str, s: int, **witness) -> Verdict:
    return Verdict(False, Certificate(kind, prop, s, witness))


def _check_s(s: int, r: int, lo: int = 1, hi: int | None = None) -> None:
    hi = r if hi is None else hi
    if not lo <= s <= hi:
        raise ParameterError(f"need {lo} <= s <= {hi}, got s={s}")


def _bits(strings: Sequence[str]) -> list[int]:
    return [gf2.from_string(t) for t in strings]


def _strs(xs: Iterable[int], m: int) -> list[str]:
    return [gf2.to_string(int(x), m) for x in xs]


def _syndrome(H: Sequence[int], x: int) -> int:
    b = 0
    for i, h in enumerate(H):
        b |= ((h & x).bit_count() & 1) << i
    return b


def _nonzero_lex(m: int) -> list[int]:
    return sorted(range(1, 1 << m), key=lambda x: gf2.lex_key(x, m))


def _use_kernel(r: int, s: int) -> bool:
    return r <= 16 and 1 <= s <= 4


def _subspace_budget(r: int, s: int, budget: int | None, per: int = 1) -> None:
    total = gf2.gaussian_coefficient(r, s) * per
    cap = DEFAULT_BUDGET if budget is None else budget
    if total > cap:
        raise BudgetError(f"{total} enumeration steps exceed budget {cap}")


def _first_bad_subspace(A: VectorSet, s: int, kind: str) -> tuple[int, ...] | None:
    """Check matrix (packed rows) of the first subspace whose syndrome mask is not ok."""
    r = A.r
    ok, _, _ = _kernels.mask_tables(s, kind)
    if _use_kernel(r, s):
        H = _kernels.check_rows(r, s)
        u = _kernels.first_failure(H, np.array(A.members, dtype=np.int64), ok)
        return None if u < 0 else tuple(_kernels.unpack_word(H[u], s))
    for H in gf2.rref_bases(r, s):
        mask = 0
        for a in A.members:
            mask |= 1 << _syndrome(H, a)
        if not ok[mask]:
            return H
    return None


def _syndrome_mask(H: Sequence[int], A: Iterable[int]) -> int:
    mask = 0
    for a in A:
        mask |= 1 << _syndrome(H, a)
    return mask


def _python_masks(r: int, s: int, A: VectorSet):
    for H in gf2.rref_bases(r, s):
        yield H, _syndrome_mask(H, A.members)


def _flat_of(H: Sequence[int], b: int, r: int) -> gf2.Flat:
    U = gf2.nullspace_bits(list(H), r)
    x = gf2.solve(gf2.unpack_rows(H, r), gf2.unpack(b, len(H)))
    return gf2.Flat.from_generators(r, U, gf2.pack(x))


# --------------------------------------------------------------------------
# good sets

def is_good_set(A, s: int, method: str = "flats", budget: int | None = None) -> Verdict:
    """Decide whether A is an (r,s)-set.

    ``definition`` enumerates unordered independent s-tuples of vectors;
    ``flats`` enumerates (r-s)-subspaces and their nonzero-syndrome cosets.
    """
    A = as_vector_set(A)
    r = A.r
    _check_s(s, r)
    if method == "definition":
        return _good_definition(A, s, budget)
    if method != "flats":
        raise ParameterError(f"unknown method {method!r}")
    _subspace_budget(r, s, budget)
    if s <= 4:
        H = _first_bad_subspace(A, s, "good")
        if H is None:
            return PASS
        mask = _syndrome_mask(H, A.members)
    else:
        for H, mask in _python_masks(r, s, A):
            if mask | 1 != (1 << (1 << s)) - 1:
                break
        else:
            return PASS
    b = next(b for b in range(1, 1 << s) if not (mask >> b) & 1)
    flat = _flat_of(H, b, r)
    return _fail("missed_flat", "good", s, basis=_strs(flat.basis_bits, r),
                 rep=gf2.to_string(flat.rep_bits, r))


def _good_definition(A: VectorSet, s: int, budget: int | None) -> Verdict:
    r = A.r
    total = math.comb((1 << r) - 1, s) * max(len(A), 1)
    cap = DEFAULT_BUDGET if budget is None else budget
    if total > cap:
        raise BudgetError(f"{total} tuple checks exceed budget {cap}")
    for vs in itertools.combinations(_nonzero_lex(r), s):
        if not gf2.is_independent(vs):
            continue
        if not any(all((a & v).bit_count() & 1 for v in vs) for a in A.members):
            return _fail("bad_tuple", "good", s, vectors=_strs(vs, r))
    return PASS


# --------------------------------------------------------------------------
# generic sets

def is_generic_set(A, s: int, method: str = "cosets", budget: int | None = None) -> Verdict:
    """Decide whether A is a generic (r,s)-set by one of three characterizations."""
    A = as_vector_set(A)
    r = A.r
    _check_s(s, r)
    if method in ("matrices", "hyperplanes"):
        cap = MATRIX_BUDGET if budget is None else budget
        if gf2.count_full_rank(r, s) > cap:
            raise BudgetError(f"{gf2.count_full_rank(r, s)} matrices exceed budget {cap}")
        check = _wt_one if method == "matrices" else _has_hyperplane
        for cols in gf2.full_rank_columns(r, s):
            if not check(A.members, cols, s):
                M = gf2.unpack_rows(cols, r).T
                return _fail("bad_matrix", "generic", s, method=method,
                             matrix=[gf2.to_string(gf2.pack(row), s) for row in M])
        return PASS
    if method != "cosets":
        raise ParameterError(f"unknown method {method!r}")
    _subspace_budget(r, s, budget)
    if s <= 4:
        H = _first_bad_subspace(A, s, "generic")
        if H is None:
            return PASS
        mask = _syndrome_mask(H, A.members)
    else:
        for H, mask in _python_masks(r, s, A):
            missed = [b for b in range(1, 1 << s) if not (mask >> b) & 1]
            if gf2.rank_bits(missed) == s:
                break
        else:
            return PASS
    fam = next(B for B in _kernels.basis_tuples(s) if not any((mask >> b) & 1 for b in B))
    return _fail("bad_coset_family", "generic", s, check=_strs(H, r), syndromes=_strs(fam, s))


def _image(A: Iterable[int], cols: Sequence[int]) -> set[int]:
    return {_syndrome(cols, a) for a in A}


def _wt_one(A: Iterable[int], cols: Sequence[int], s: int) -> bool:
    return any(_syndrome(cols, a).bit_count() == 1 for a in A)


def _has_hyperplane(A: Iterable[int], cols: Sequence[int], s: int) -> bool:
    img = _image(A, cols)
    for u in range(1, 1 << s):
        if all(x in img for x in range(1 << s) if (u & x).bit_count() & 1):
            return True
    return False


# --------------------------------------------------------------------------
# codes, covering arrays, blocking sets

def is_swise_intersecting(G, s: int, budget: int | None = None) -> Verdict:
    """Every s independent codewords of rowspace(G) share a support coordinate."""
    G = gf2.as_matrix(G)
    k, n = G.shape
    if gf2.rank(G) != k:
        raise ParameterError("generator must have full row rank")
    _check_s(s, k, lo=1)
    total = math.comb((1 << k) - 1, s)
    cap = DEFAULT_BUDGET if budget is None else budget
    if total > cap:
        raise BudgetError(f"{total} codeword tuples exceed budget {cap}")
    words = sorted((w for w in gf2.span_bits(gf2.pack_rows(G)) if w), key=lambda x: gf2.lex_key(x, n))
    for ws in itertools.combinations(words, s):
        common = ws[0]
        for w in ws[1:]:
            common &= w
        if not common and gf2.is_independent(ws):
            return _fail("bad_tuple", "intersecting", s, codewords=_strs(ws, n))
    return PASS


def prop5_roundtrip(A, s: int) -> Verdict:
    """A is an (r,s)-set iff the code generated by A transposed is s-wise intersecting.

    ``ok`` is true when both sides agree; the two verdicts are kept in ``details``.
    """
    A = as_vector_set(A)
    good = is_good_set(A, s)
    G = A.matrix().T
    if len(A) == 0 or gf2.rank(G) < A.r:
        # a non-spanning set misses a whole hyperplane, and its code is degenerate
        inter = Verdict(False, None, {"reason": "rank-deficient generator"})
    else:
        inter = is_swise_intersecting(G, s)
    return Verdict(good.ok == inter.ok, None, {"good": good, "intersecting": inter})


def is_covering_array(M, t: int) -> Verdict:
    """Every t rows of the k x N array M show all 2^t column patterns."""
    M = gf2.as_matrix(M)
    k, N = M.shape
    _check_s(t, k)
    cols = [gf2.pack(col) for col in M.T]
    for rows in itertools.combinations(range(k), t):
        seen = set()
        for c in cols:
            p = 0
            for i in rows:
                p = (p << 1) | ((c >> i) & 1)
            seen.add(p)
        if len(seen) < (1 << t):
            miss = next(p for p in range(1 << t) if p not in seen)
            return _fail("missing_pattern", "covering-array", t, rows=list(rows),
                         pattern=format(miss, f"0{t}b"))
    return PASS


def is_subspace_blocking(A, s: int, budget: int | None = None) -> Verdict:
    """A meets every (r-s)-subspace of F_2^r."""
    A = as_vector_set(A)
    r = A.r
    _check_s(s, r, lo=1, hi=r - 1)
    _subspace_budget(r, s, budget)
    if _use_kernel(r, s):
        ok = np.zeros(1 << (1 << s), bool)
        ok[1::2] = True
        Hs = _kernels.check_rows(r, s)
        u = _kernels.first_failure(Hs, np.array(A.members, dtype=np.int64), ok)
        if u < 0:
            return PASS
        H = _kernels.unpack_word(Hs[u], s)
    else:
        for H, mask in _python_masks(r, s, A):
            if not mask & 1:
                break
        else:
            return PASS
    U = gf2.nullspace_bits(list(H), r)
    return _fail("missed_subspace", "blocking", s, basis=_strs(U, r))


def generic_column_property(A, s: int, trials: int, seed: int) -> Verdict:
    """Check that every s columns of A N contain s-1 columns showing all patterns.

    N runs over ``trials`` random invertible matrices; trial i uses the i-th
    output of a SplitMix64 stream seeded with ``seed`` as its own seed.
    """
    A = as_vector_set(A)
    r = A.r
    _check_s(s, r)
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if s == 1:
        return PASS
    rng = gf2.SplitMix64(seed)
    Am = A.matrix()
    for _ in range(trials):
        Nrows = gf2.random_invertible_bits(r, rng.next())
        B = gf2.matmul(Am, gf2.unpack_rows(Nrows, r))
        cols = [gf2.pack(B[:, j]) for j in range(r)]
        for S in itertools.combinations(range(r), s):
            if not any(_shows_all(cols, T) for T in itertools.combinations(S, s - 1)):
                return _fail("bad_matrix", "generic-columns", s, matrix=_strs(Nrows, r),
                             columns=list(S))
    return PASS


def _shows_all(cols: Sequence[int], T: Sequence[int]) -> bool:
    """Rows restricted to columns T realise all 2^|T| patterns (cols packed over rows)."""
    n = max((c.bit_length() for c in cols), default=0)
    patterns = set()
    for i in range(n):
        p = 0
        for j in T:
            p = (p << 1) | ((cols[j] >> i) & 1)
        patterns.add(p)
    return len(patterns) == 1 << len(T)


# --------------------------------------------------------------------------
# replay

def _replay_flat(c: Certificate, A, **kw) -> bool:
    A = as_vector_set(A)
    flat = gf2.Flat.from_generators(A.r, _bits(c.witness["basis"]), gf2.from_string(c.witness["rep"]))
    return flat.rep_bits != 0 and flat.dim == A.r - c.s and not any(flat.contains(a) for a in A)


def _replay_subspace(c: Certificate, A, **kw) -> bool:
    A = as_vector_set(A)
    U = gf2.Flat.from_generators(A.r, _bits(c.witness["basis"]))
    return U.dim == A.r - c.s and not any(U.contains(a) for a in A)


def _replay_matrix(c: Certificate, A, **kw) -> bool:
    A = as_vector_set(A)
    if c.prop == "generic-columns":
        Nrows = _bits(c.witness["matrix"])
        if gf2.rank_bits(Nrows) != A.r:
            return False
        B = gf2.matmul(A.matrix(), gf2.unpack_rows(Nrows, A.r))
        cols = [gf2.pack(B[:, j]) for j in range(A.r)]
        S = c.witness["columns"]
        return not any(_shows_all(cols, T) for T in itertools.combinations(S, c.s - 1))
    rows = _bits(c.witness["matrix"])
    M = gf2.unpack_rows(rows, c.s)
    cols = gf2.pack_rows(M.T)
    if gf2.rank_bits(cols) != c.s:
        return False
    if c.witness.get("method") == "hyperplanes":
        return not _has_hyperplane(A.members, cols, c.s)
    return not _wt_one(A.members, cols, c.s)


def _replay_cosets(c: Certificate, A, **kw) -> bool:
    A = as_vector_set(A)
    H = _bits(c.witness["check"])
    fam = _bits(c.witness["syndromes"])
    if gf2.rank_bits(H) != c.s or gf2.rank_bits(fam) != c.s:
        return False
    return not any(_syndrome(H, a) in fam for a in A)


def _replay_tuple(c: Certificate, A, **kw) -> bool:
    if c.prop == "intersecting":
        G = gf2.as_matrix(A)
        ws = _bits(c.witness["codewords"])
        words = set(gf2.span_bits(gf2.pack_rows(G)))
        common = ws[0]
        for w in ws[1:]:
            common &= w
        return all(w in words for w in ws) and gf2.is_independent(ws) and not common
    A = as_vector_set(A)
    vs = _bits(c.witness["vectors"])
    return gf2.is_independent(vs) and not any(all((a & v).bit_count() & 1 for v in vs) for a in A)


def _replay_pattern(c: Certificate, A, **kw) -> bool:
    M = gf2.as_matrix(A)
    rows = c.witness["rows"]
    want = tuple(int(ch) for ch in c.witness["pattern"])
    return all(tuple(int(M[i, j]) for i in rows) != want for j in range(M.shape[1]))


_REPLAY = {
    "missed_flat": _replay_flat,
    "missed_subspace": _replay_subspace,
    "bad_matrix": _replay_matrix,
    "bad_coset_family": _replay_cosets,
    "bad_tuple": _replay_tuple,
    "missing_pattern": _replay_pattern,
}
