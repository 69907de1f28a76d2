"""Exact linear algebra over GF(2) and canonical enumeration of subspaces and flats.

Conventions used throughout the package:

* A vector of F_2^m is a 1-D ``uint8`` array of zeros and ones; a matrix is a
  2-D ``uint8`` array.  Indices are 0-based in the Python API.
* Packed form: coordinate ``i`` (0-based) is bit ``i`` of a Python int, so the
  leftmost character of the text format is the least-significant bit.
* "Lexicographic" always means lexicographic on the text form (coordinate 0
  compared first).  For packed ints that is integer order of the bit-reversed
  word, see :func:`lex_key`.
* Pivots of a reduced row-echelon form are the leftmost (lowest-index) nonzero
  columns.  Reducing a vector by such a basis clears every pivot coordinate and
  yields the lexicographically least member of its coset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetError, ParameterError

MASK64 = (1 << 64) - 1


# --------------------------------------------------------------------------
# seeded 64-bit mixer

def splitmix64(x: int) -> int:
    """One SplitMix64 finalisation step of ``x`` (mod 2^64)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream: ``state += golden``; output = mix(state)."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def splitmix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`splitmix64` over a ``uint64`` array."""
    with np.errstate(over="ignore"):
        z = x.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


# --------------------------------------------------------------------------
# packing

def as_matrix(M, cols: int | None = None) -> np.ndarray:
    """Return ``M`` as a 2-D uint8 0/1 array (validating entries)."""
    A = np.asarray(M)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else A.reshape(0, cols or 0)
    if A.ndim != 2:
        raise ParameterError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size and not np.isin(A, (0, 1)).all():
        raise ParameterError("matrix entries must be 0 or 1")
    A = A.astype(np.uint8)
    if cols is not None and A.shape[1] != cols:
        raise ParameterError(f"expected {cols} columns, got {A.shape[1]}")
    return A


def as_vector(v, dim: int | None = None) -> np.ndarray:
    a = np.asarray(v)
    if a.ndim != 1:
        raise ParameterError(f"expected a 1-D vector, got shape {a.shape}")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ParameterError("vector entries must be 0 or 1")
    if dim is not None and a.size != dim:
        raise ParameterError(f"expected dimension {dim}, got {a.size}")
    return a.astype(np.uint8)


def pack(v) -> int:
    """Pack a 0/1 vector into an int, coordinate 0 -> bit 0."""
    x = 0
    for i in np.flatnonzero(np.asarray(v)):
        x |= 1 << int(i)
    return x


def unpack(x: int, m: int) -> np.ndarray:
    return np.array([(x >> i) & 1 for i in range(m)], dtype=np.uint8)


def pack_rows(M) -> list[int]:
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[1] == 0:
        return [0] * (A.shape[0] if A.ndim == 2 else 0)
    if A.shape[1] <= 62:
        shifts = np.arange(A.shape[1], dtype=np.int64)
        return [int(x) for x in (A.astype(np.int64) << shifts).sum(axis=1)]
    weights = np.array([1 << i for i in range(A.shape[1])], dtype=object)
    return [int(x) for x in (A.astype(object) * weights).sum(axis=1)]


def unpack_rows(rows: Iterable[int], m: int) -> np.ndarray:
    rows = list(rows)
    out = np.zeros((len(rows), m), dtype=np.uint8)
    for i, x in enumerate(rows):
        for j in range(m):
            out[i, j] = (x >> j) & 1
    return out


def lex_key(x: int, m: int) -> int:
    """Sort key putting packed vectors in lexicographic (text) order."""
    return int(format(x, f"0{m}b")[::-1], 2) if m else 0


def to_string(x: int, m: int) -> str:
    return format(x, f"0{m}b")[::-1] if m else ""


def from_string(s: str) -> int:
    return int(s[::-1], 2) if s else 0


def weight(v) -> int:
    if isinstance(v, (int, np.integer)):
        return int(v).bit_count()
    return int(np.count_nonzero(np.asarray(v)))


def support(v) -> list[int]:
    if isinstance(v, (int, np.integer)):
        x = int(v)
        return [i for i in range(x.bit_length()) if (x >> i) & 1]
    return [int(i) for i in np.flatnonzero(np.asarray(v))]


# --------------------------------------------------------------------------
# elimination on packed rows

def rref_bits(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form of packed rows; returns (nonzero rows, pivots)."""
    work = [r for r in rows if r]
    out: list[int] = []
    pivots: list[int] = []
    for c in range(ncols):
        bit = 1 << c
        for i, r in enumerate(work):
            if r & bit:
                p = work.pop(i)
                break
        else:
            continue
        work = [r ^ p if r & bit else r for r in work]
        out = [r ^ p if r & bit else r for r in out]
        out.append(p)
        pivots.append(c)
        if not work:
            break
    return out, pivots


def reduce_bits(x: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    """Clear the pivot coordinates of ``x`` using an RREF basis."""
    for r, p in zip(basis, pivots):
        if (x >> p) & 1:
            x ^= r
    return x


def rank_bits(rows: Sequence[int], ncols: int | None = None) -> int:
    """Rank of packed rows (XOR basis insertion, no RREF bookkeeping)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            if low in basis:
                r ^= basis[low]
            else:
                basis[low] = r
                break
    return len(basis)


def pivot_of(x: int) -> int:
    return (x & -x).bit_length() - 1


def span_bits(basis: Sequence[int]) -> list[int]:
    """All 2^len(basis) combinations of ``basis``; index bit j selects basis[j]."""
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


def is_independent(rows: Sequence[int]) -> bool:
    return rank_bits(rows) == len(rows)


# --------------------------------------------------------------------------
# matrix-level operations

def rank_rref(M) -> tuple[int, np.ndarray, list[int]]:
    """Rank, unique RREF and pivot columns of a binary matrix."""
    A = as_matrix(M)
    if A.size == 0 and A.shape[0] == 0:
        raise ParameterError("matrix must be nonempty")
    m = A.shape[1]
    rows, pivots = rref_bits(pack_rows(A), m)
    R = np.zeros_like(A)
    if rows:
        R[: len(rows)] = unpack_rows(rows, m)
    return len(rows), R, pivots


def rank(M) -> int:
    A = as_matrix(M)
    return rank_bits(pack_rows(A)) if A.size else 0


def nullspace(M) -> np.ndarray:
    """RREF basis of ``{x : M x^T = 0}``; zero rows if M has full column rank."""
    A = as_matrix(M)
    n = A.shape[1]
    if n < 1:
        raise ParameterError("matrix must have at least one column")
    return unpack_rows(nullspace_bits(pack_rows(A), n), n)


def nullspace_bits(rows: Sequence[int], n: int) -> list[int]:
    basis, pivots = rref_bits(rows, n)
    pivset = set(pivots)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        x = 1 << f
        for r, p in zip(basis, pivots):
            if (r >> f) & 1:
                x |= 1 << p
        vecs.append(x)
    return rref_bits(vecs, n)[0]


def solve(M, b):
    """Lexicographically least ``x`` with ``M x^T = b^T``, or ``None`` if inconsistent."""
    A = as_matrix(M)
    rows, n = A.shape
    bv = as_vector(b, rows)
    # eliminate on the augmented matrix; column n carries the right-hand side
    aug = [r | (int(bv[i]) << n) for i, r in enumerate(pack_rows(A))]
    red, pivots = rref_bits(aug, n + 1)
    if n in pivots:
        return None
    x = 0
    for r, p in zip(red, pivots):
        if (r >> n) & 1:
            x |= 1 << p
    ker = nullspace_bits(pack_rows(A), n)
    x = reduce_bits(x, ker, [pivot_of(k) for k in ker])
    return unpack(x, n)


def matmul(A, B) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64) % 2).astype(np.uint8)


# --------------------------------------------------------------------------
# counting

def gaussian_coefficient(m: int, k: int, q: int = 2) -> int:
    """Number of k-dimensional subspaces of F_q^m (exact integer)."""
    if k < 0 or k > m:
        raise ParameterError(f"need 0 <= k <= m, got m={m}, k={k}")
    if q < 2:
        raise ParameterError("q must be a prime power >= 2")
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def count_full_rank(r: int, s: int) -> int:
    return math.prod((1 << r) - (1 << i) for i in range(s))


def count_bases(s: int) -> int:
    """Number of unordered bases of F_2^s."""
    return count_full_rank(s, s) // math.factorial(s)


# --------------------------------------------------------------------------
# flats

@dataclass(frozen=True)
class Flat:
    """Coset ``rep + rowspace(basis)`` in canonical form.

    ``basis_bits`` is the RREF basis (packed rows, ordered by pivot) and
    ``rep_bits`` the lexicographically least member of the coset.
    """

    ambient_dim: int
    basis_bits: tuple[int, ...]
    rep_bits: int = 0

    @classmethod
    def from_generators(cls, m: int, generators: Iterable[int], point: int = 0) -> "Flat":
        basis, pivots = rref_bits(list(generators), m)
        return cls(m, tuple(basis), reduce_bits(point, basis, pivots))

    @property
    def dim(self) -> int:
        return len(self.basis_bits)

    @property
    def pivots(self) -> list[int]:
        return [pivot_of(r) for r in self.basis_bits]

    @property
    def basis(self) -> np.ndarray:
        return unpack_rows(self.basis_bits, self.ambient_dim)

    @property
    def rep(self) -> np.ndarray:
        return unpack(self.rep_bits, self.ambient_dim)

    @property
    def is_subspace(self) -> bool:
        return self.rep_bits == 0

    def reduce(self, x: int) -> int:
        return reduce_bits(x, self.basis_bits, self.pivots)

    def contains(self, x) -> bool:
        if not isinstance(x, (int, np.integer)):
            x = pack(x)
        return self.reduce(int(x) ^ self.rep_bits) == 0

    def members(self) -> list[int]:
        return [self.rep_bits ^ u for u in span_bits(self.basis_bits)]

    def recanonicalize(self, member: int) -> "Flat":
        return Flat.from_generators(self.ambient_dim, self.basis_bits, member)

    def check_matrix_bits(self) -> list[int]:
        """RREF basis of the orthogonal complement of the direction space."""
        return nullspace_bits(list(self.basis_bits), self.ambient_dim) if self.ambient_dim else []

    def __str__(self) -> str:
        rows = ",".join(to_string(r, self.ambient_dim) for r in self.basis_bits)
        return f"{to_string(self.rep_bits, self.ambient_dim)}+<{rows}>"


def rref_bases(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """Packed RREF bases of all k-subspaces of F_2^m in documented order.

    Pivot sets in lexicographic order; within a pivot set, the free entries
    (row-major, increasing column) count up with the first one most significant.
    """
    if k < 0 or k > m:
        raise ParameterError(f"need 0 <= k <= m, got m={m}, k={k}")
    for piv in itertools.combinations(range(m), k):
        pivset = set(piv)
        slots = [(i, c) for i, p in enumerate(piv) for c in range(p + 1, m) if c not in pivset]
        f = len(slots)
        base = [1 << p for p in piv]
        for code in range(1 << f):
            rows = list(base)
            for j, (i, c) in enumerate(slots):
                if (code >> (f - 1 - j)) & 1:
                    rows[i] |= 1 << c
            yield tuple(rows)


def enumerate_subspaces(m: int, k: int) -> Iterator[Flat]:
    for basis in rref_bases(m, k):
        yield Flat(m, basis, 0)


def coset_reps(m: int, pivots: Sequence[int]) -> list[int]:
    """Canonical coset representatives (zero on pivots), in lexicographic order."""
    free = [c for c in range(m) if c not in set(pivots)]
    reps = []
    for code in range(1 << len(free)):
        x = 0
        for j, c in enumerate(free):
            if (code >> (len(free) - 1 - j)) & 1:
                x |= 1 << c
        reps.append(x)
    return reps


def enumerate_flats(m: int, k: int) -> Iterator[Flat]:
    """Every coset of every k-subspace once, subspace order then rep order."""
    for basis in rref_bases(m, k):
        for rep in coset_reps(m, [pivot_of(r) for r in basis]):
            yield Flat(m, basis, rep)


def enumerate_full_rank(r: int, s: int, cap: int | None = None) -> Iterator[np.ndarray]:
    """All r x s binary matrices of rank s (columns chosen in lexicographic order)."""
    if not 1 <= s <= r:
        raise ParameterError(f"need 1 <= s <= r, got r={r}, s={s}")
    total = count_full_rank(r, s)
    if cap is not None and total > cap:
        raise BudgetError(f"{total} full-rank {r}x{s} matrices exceed cap {cap}")
    for cols in full_rank_columns(r, s):
        yield unpack_rows(cols, r).T.copy()


def full_rank_columns(r: int, s: int) -> Iterator[tuple[int, ...]]:
    """Ordered s-tuples of independent packed vectors of F_2^r."""
    order = sorted(range(1, 1 << r), key=lambda x: lex_key(x, r))

    def rec(prefix: list[int], span: set[int]):
        if len(prefix) == s:
            yield tuple(prefix)
            return
        for x in order:
            if x in span:
                continue
            prefix.append(x)
            yield from rec(prefix, span | {y ^ x for y in span})
            prefix.pop()

    yield from rec([], {0})


def random_invertible(m: int, seed: int) -> np.ndarray:
    """Invertible m x m matrix drawn from a SplitMix64 stream seeded with ``seed``.

    Rows are successive stream outputs masked to m bits; a row is kept only if
    it is independent of the rows kept so far.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    return unpack_rows(random_invertible_bits(m, seed), m)


def random_invertible_bits(m: int, seed: int) -> list[int]:
    rng = SplitMix64(seed)
    mask = (1 << m) - 1
    rows: list[int] = []
    while len(rows) < m:
        x = rng.next() & mask
        if x and rank_bits(rows + [x]) == len(rows) + 1:
            rows.append(x)
    return rows


# --------------------------------------------------------------------------
# text format

def parse_matrix(text: str) -> np.ndarray:
    """Parse rows of {0,1} strings; '#' lines are comments, blanks ignored."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise ParameterError(f"line {lineno}: expected a {{0,1}} string, got {line!r}")
        rows.append([int(ch) for ch in line])
    if not rows:
        return np.zeros((0, 0), dtype=np.uint8)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParameterError(f"rows have differing lengths {sorted(widths)}")
    return np.array(rows, dtype=np.uint8)


def format_matrix(M, comments: Sequence[str] = ()) -> str:
    A = as_matrix(M)
    lines = [f"# {c}" for c in comments]
    lines += ["".join(str(int(b)) for b in row) for row in A]
    return "\n".join(lines) + "\n"


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, M, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_matrix(M, comments))
