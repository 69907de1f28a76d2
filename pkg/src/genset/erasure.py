"""Peeling decoder, stopping sets, ML correctability and a BEC simulator.

Erasure patterns are iterables of 0-based coordinate indices; internally they
are packed into int bitmasks.  Check-row collections are binary matrices whose
rows need not be independent.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .codes import LinearCode
from .errors import BudgetError, DataError, ParameterError

SCAN_CAP = 24


def pattern_bits(E: Iterable[int], n: int) -> int:
    """Validate an erasure pattern and pack it."""
    x = 0
    for i in E:
        i = int(i)
        if not 0 <= i < n:
            raise ParameterError(f"position {i} outside [0, {n})")
        if (x >> i) & 1:
            raise ParameterError(f"duplicate position {i}")
        x |= 1 << i
    return x


def _rows(rows) -> tuple[list[int], int]:
    A = gf2.as_matrix(rows)
    return gf2.pack_rows(A), A.shape[1]


def stopping_bits(rows: Sequence[int], E: int) -> bool:
    return all((r & E).bit_count() != 1 for r in rows)


def is_stopping_set(rows, E: Iterable[int]) -> bool:
    """True iff no row restricted to ``E`` has weight exactly one."""
    R, n = _rows(rows)
    e = pattern_bits(E, n)
    if not e:
        raise ParameterError("stopping sets are nonempty")
    return stopping_bits(R, e)


@dataclass
class PeelResult:
    resolved: list[int]
    residual: list[int]
    used_rows: list[int]

    @property
    def success(self) -> bool:
        return not self.residual


def peel_bits(rows: Sequence[int], E: int) -> tuple[list[int], int, list[int]]:
    resolved, used = [], []
    erased = E
    progress = True
    while erased and progress:
        progress = False
        for i, r in enumerate(rows):
            x = r & erased
            if x and not x & (x - 1):
                pos = x.bit_length() - 1
                resolved.append(pos)
                used.append(i)
                erased ^= x
                progress = True
                break
    return resolved, erased, used


def peel_succeeds(rows: Sequence[int], E: int) -> bool:
    """Fast success test; peeling is confluent so scan order does not matter."""
    erased = E
    while erased:
        hit = 0
        for r in rows:
            x = r & erased
            if x and not x & (x - 1):
                hit |= x
        if not hit:
            return False
        erased &= ~hit
    return True


def peel_decode(rows, E: Iterable[int]) -> PeelResult:
    """Iterative erasure decoding with the lowest-index qualifying row each step."""
    R, n = _rows(rows)
    resolved, residual, used = peel_bits(R, pattern_bits(E, n))
    return PeelResult(resolved, gf2.support(residual), used)


def stopping_distance(rows, max_size: int | None = None, cap: int = SCAN_CAP) -> int | None:
    """Size of the smallest nonempty stopping set, or None if there is none.

    Sizes are scanned upward.  If ``max_size`` is given the scan stops there
    (returning None when nothing smaller was found); otherwise lengths above
    ``cap`` raise :class:`BudgetError`.
    """
    R, n = _rows(rows)
    if not R:
        raise ParameterError("rows must be nonempty")
    if max_size is None:
        if n > cap:
            raise BudgetError(f"exhaustive stopping-set scan over n={n} > {cap}")
        max_size = n
    return _stopping_distance_bits(R, n, max_size)


def _stopping_distance_bits(R: Sequence[int], n: int, max_size: int) -> int | None:
    # a coordinate outside every row's support is itself a stopping set
    covered = 0
    for r in R:
        covered |= r
    if covered != (1 << n) - 1:
        return 1
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(n), size):
            e = 0
            for i in combo:
                e |= 1 << i
            if stopping_bits(R, e):
                return size
    return None


def smallest_stopping_set(rows, cap: int = SCAN_CAP) -> list[int] | None:
    R, n = _rows(rows)
    if n > cap:
        raise BudgetError(f"exhaustive stopping-set scan over n={n} > {cap}")
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            if stopping_bits(R, sum(1 << i for i in combo)):
                return list(combo)
    return None


def _check_full_rank(H) -> tuple[list[int], int]:
    R, n = _rows(H)
    if gf2.rank_bits(R) != len(R):
        raise ParameterError("parity-check matrix must have full row rank")
    return R, n


def columns_bits(H) -> list[int]:
    """Columns of H packed as ints (row i -> bit i)."""
    A = gf2.as_matrix(H)
    return gf2.pack_rows(A.T)


def correctable_by_rank(cols: Sequence[int], E: int) -> bool:
    chosen = [cols[i] for i in gf2.support(E)]
    return gf2.rank_bits(chosen) == len(chosen)


def correctable_by_codewords(codewords: Sequence[int], E: int) -> bool:
    return not any(c and c & ~E == 0 for c in codewords)


def is_correctable(H, E: Iterable[int], method: str = "rank") -> bool:
    """True iff the erased columns of H are independent (no codeword support inside E).

    ``method="codewords"`` evaluates the definition by enumerating the code;
    it is exponential in the dimension and meant as a cross-check.
    """
    R, n = _check_full_rank(H)
    e = pattern_bits(E, n)
    if method == "rank":
        return correctable_by_rank(columns_bits(H), e)
    if method == "codewords":
        k = n - len(R)
        if k > SCAN_CAP:
            raise BudgetError(f"codeword enumeration of dimension {k} > {SCAN_CAP}")
        return correctable_by_codewords(gf2.span_bits(gf2.nullspace_bits(R, n)), e)
    raise ParameterError(f"unknown method {method!r}")


def ml_erasure_decode(H, word, erased: Iterable[int]):
    """Complete the erased coordinates of ``word``; None when the completion is ambiguous.

    Raises :class:`DataError` if the unerased coordinates fit no codeword.
    """
    H = gf2.as_matrix(H)
    r, n = H.shape
    w = gf2.as_vector(word, n).copy()
    e = sorted(gf2.support(pattern_bits(erased, n)))
    if not e:
        if gf2.matmul(H, w.reshape(-1, 1)).any():
            raise DataError("received word is not a codeword")
        return w
    known = [i for i in range(n) if i not in set(e)]
    syndrome = gf2.matmul(H[:, known], w[known].reshape(-1, 1)).ravel() if known else np.zeros(r, np.uint8)
    sub = H[:, e]
    x = gf2.solve(sub, syndrome)
    if x is None:
        raise DataError("unerased coordinates are inconsistent with the code")
    if gf2.rank(sub) < len(e):
        return None
    w[e] = x
    return w


def parse_received(text: str) -> tuple[np.ndarray, list[int]]:
    """'1?0' -> (word with erased bits zeroed, erased positions)."""
    word = np.array([0 if ch == "?" else int(ch) for ch in text], dtype=np.uint8)
    return word, [i for i, ch in enumerate(text) if ch == "?"]


def min_max_distance(C: LinearCode, cap: int = SCAN_CAP) -> tuple[int, int]:
    """Minimum and maximum nonzero codeword weight by enumeration."""
    if C.k < 1:
        raise ParameterError("code must have dimension >= 1")
    if C.k > cap:
        raise BudgetError(f"enumerating 2^{C.k} codewords exceeds cap 2^{cap}")
    weights = [c.bit_count() for c in C.codewords_bits() if c]
    return min(weights), max(weights)


def minimum_distance(C: LinearCode, cap: int = SCAN_CAP) -> int:
    return min_max_distance(C, cap)[0]


def _restrict(rows: Sequence[int], coords: Sequence[int]) -> list[int]:
    out = []
    for r in rows:
        x = 0
        for j, c in enumerate(coords):
            if (r >> c) & 1:
                x |= 1 << j
        out.append(x)
    return out


def restrict_code(C: LinearCode, coords: Sequence[int]) -> LinearCode:
    """Code obtained by deleting every coordinate outside ``coords``."""
    coords = list(coords)
    rows = _restrict(C.generator_bits(), coords)
    G = gf2.unpack_rows(rows, len(coords))
    if not coords:
        return LinearCode(np.zeros((0, 0), np.uint8), np.zeros((0, 0), np.uint8))
    return LinearCode.from_generator(G)


def lemma1_decompose(C: LinearCode, v) -> tuple[LinearCode, LinearCode, LinearCode]:
    """Split C along the support I of a nonzero codeword v.

    Returns (C restricted to I, the code spanned by a completion of v|_I to a
    basis of C(I) with v|_I removed, C restricted to the complement of I).
    The completion takes RREF rows of C(I) in order, skipping dependent ones.
    """
    x = gf2.pack(v) if not isinstance(v, (int, np.integer)) else int(v)
    if x == 0:
        raise ParameterError("v must be nonzero")
    if x >= 1 << C.n or not C.contains(x):
        raise ParameterError("v is not a codeword")
    I = gf2.support(x)
    Ibar = [i for i in range(C.n) if not (x >> i) & 1]
    w = len(I)
    C_I = restrict_code(C, I)
    vI = (1 << w) - 1
    chosen = [vI]
    for row in C_I.generator_bits():
        if gf2.rank_bits(chosen + [row]) == len(chosen) + 1:
            chosen.append(row)
    star = chosen[1:]
    if star:
        C_star = LinearCode(gf2.unpack_rows(star, w), gf2.unpack_rows(gf2.nullspace_bits(star, w), w))
    else:
        C_star = LinearCode(np.zeros((0, w), np.uint8), np.eye(w, dtype=np.uint8))
    C_Ibar = restrict_code(C, Ibar)
    return C_I, C_star, C_Ibar


def apply_generic_set(A, H) -> np.ndarray:
    """Rows ``a H`` for each a in A (A's order kept)."""
    A = gf2.as_matrix(A)
    H = gf2.as_matrix(H)
    if A.shape[1] != H.shape[0]:
        raise ParameterError("vectors of A must have dimension rows(H)")
    if gf2.rank(H) < H.shape[0]:
        raise ParameterError("H must have full row rank")
    return gf2.matmul(A, H)


# --------------------------------------------------------------------------
# BEC simulation

@dataclass
class SimulationReport:
    code: str
    p: float
    trials: int
    seed: int
    per_strategy: list[dict] = field(default_factory=list)
    ml_failures: int = 0

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "per_strategy": self.per_strategy,
            "ml_failures": self.ml_failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["code", "p", "trials", "seed", "name", "peel_failures", "rate", "ml_failures"])
        for s in self.per_strategy:
            w.writerow([self.code, self.p, self.trials, self.seed, s["name"],
                        s["peel_failures"], s["rate"], self.ml_failures])
        return buf.getvalue()


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def erasure_patterns(n: int, p: float, trials: int, seed: int) -> np.ndarray:
    """Packed erasure patterns, one per trial.

    Trial t uses the SplitMix64 stream seeded with splitmix64(seed ^ t);
    coordinate j is erased iff the stream's (j+1)-th output, scaled to [0, 1)
    with 53 bits, is below p.
    """
    t = np.arange(trials, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = gf2.splitmix64_array(np.uint64(seed & gf2.MASK64) ^ t)
        out = np.zeros(trials, dtype=np.int64)
        for j in range(n):
            u = (gf2.splitmix64_array(state + np.uint64(j) * _GOLDEN) >> np.uint64(11)).astype(np.float64)
            erased = u * 2.0 ** -53 < p
            out |= erased.astype(np.int64) << j
    return out


def bec_simulate(strategies, code: LinearCode, p: float, trials: int, seed: int,
                 names: Sequence[str] | None = None) -> SimulationReport:
    """Peeling failure counts per check-row strategy, with the ML failure baseline."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError("p must lie in [0, 1]")
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if code.n > 62:
        raise ParameterError("simulation supports n <= 62")
    strategies = [gf2.as_matrix(S, code.n) for S in strategies]
    names = list(names) if names is not None else [f"strategy{i}" for i in range(len(strategies))]
    packed = []
    for name, S in zip(names, strategies):
        rows = gf2.pack_rows(S)
        bad = [i for i, r in enumerate(rows) if not code.in_dual(r)]
        if bad:
            raise DataError(f"{name}: rows {bad} are not in the dual code")
        packed.append(rows)

    patterns = erasure_patterns(code.n, p, trials, seed)
    uniq, counts = np.unique(patterns, return_counts=True)
    cols = columns_bits(code.parity_check)
    ml_fail = 0
    peel_fail = [0] * len(packed)
    for e, c in zip(uniq.tolist(), counts.tolist()):
        if not correctable_by_rank(cols, e):
            ml_fail += c
        for i, rows in enumerate(packed):
            if not peel_succeeds(rows, e):
                peel_fail[i] += c
    per = [{"name": nm, "peel_failures": f, "rate": f / trials} for nm, f in zip(names, peel_fail)]
    label = code.name or f"[{code.n},{code.k}]"
    return SimulationReport(label, p, trials, seed, per, ml_fail)
