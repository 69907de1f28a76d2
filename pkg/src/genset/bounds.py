"""Closed-form and threshold bounds on minimum set sizes and stopping redundancy.

Quantities:

* F(r,s): minimum size of a generic (r,s)-set.
* G1(r,s): minimum size of an (r,s)-set (equal to the minimum length of an
  s-wise intersecting code of dimension r).
* rho(C): minimum number of parity-check rows with stopping distance d(C).

Every bound is a ``BoundValue`` with a descriptive id.  Integral formulas are
evaluated in integers; real formulas as floats with the log base in the id
(``log2`` or ``ln``).  Strict real upper bounds ``X < v`` are also reported as
the implied integer ``ceil(v) - 1``; non-strict ones as ``floor(v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from . import gf2
from .errors import ParameterError

LOG_MARGIN = 2.0 ** -30

STATUSES = ("printed", "corrected-variant", "verified-consistent", "flagged")


@dataclass(frozen=True)
class BoundValue:
    name: str
    kind: str  # lower | upper | exact | constant
    value: int | float
    applicability: str = ""
    status: str = "printed"
    integer: int | None = None
    strict: bool = False

    def __post_init__(self):
        if self.kind not in ("lower", "upper", "exact", "constant"):
            raise ValueError(self.kind)
        if self.status not in STATUSES:
            raise ValueError(self.status)

    @property
    def as_int(self) -> int | None:
        """Integer consequence for the minimum size (None for constants)."""
        if self.integer is not None:
            return self.integer
        if isinstance(self.value, int):
            return self.value
        return None

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind, "value": self.value,
             "applicability": self.applicability, "status": self.status}
        if self.integer is not None and not isinstance(self.value, int):
            d["integer"] = self.integer
        if self.strict:
            d["strict"] = True
        return d


@dataclass
class BoundReport:
    parameters: dict
    values: list[BoundValue] = field(default_factory=list)
    consistency_notes: list[str] = field(default_factory=list)

    def get(self, name: str) -> BoundValue:
        for v in self.values:
            if v.name == name:
                return v
        raise KeyError(name)

    def names(self) -> list[str]:
        return [v.name for v in self.values]

    def lowers(self, include_flagged: bool = False) -> list[BoundValue]:
        return [v for v in self.values if v.kind == "lower" and (include_flagged or v.status != "flagged")]

    def uppers(self, include_flagged: bool = False) -> list[BoundValue]:
        return [v for v in self.values if v.kind == "upper" and (include_flagged or v.status != "flagged")]

    def best_lower(self) -> int | None:
        xs = [v.as_int for v in self.lowers() if v.as_int is not None]
        xs += [v.as_int for v in self.values if v.kind == "exact"]
        return max(xs) if xs else None

    def best_upper(self) -> int | None:
        xs = [v.as_int for v in self.uppers() if v.as_int is not None]
        xs += [v.as_int for v in self.values if v.kind == "exact"]
        return min(xs) if xs else None

    def to_dict(self) -> dict:
        return {"parameters": self.parameters, "values": [v.to_dict() for v in self.values],
                "consistency_notes": list(self.consistency_notes),
                "best_lower": self.best_lower(), "best_upper": self.best_upper()}


def _real_upper(name: str, v: float, app: str, strict: bool) -> BoundValue:
    n = math.ceil(v) - 1 if strict else math.floor(v)
    return BoundValue(name, "upper", float(v), app, integer=n, strict=strict)


def _real_lower(name: str, v: float, app: str) -> BoundValue:
    return BoundValue(name, "lower", float(v), app, integer=math.ceil(v))


def _check_rs(r: int, s: int) -> None:
    if not 1 <= s <= r:
        raise ParameterError(f"need 1 <= s <= r, got r={r}, s={s}")


# --------------------------------------------------------------------------
# thresholds

def _threshold_terms(kind: str, k: int, s: int) -> tuple[int, int]:
    """(c, M): the product is M * prod_{j=1}^N (1 - c / (2^k - j))."""
    if kind == "good":
        return 1 << (k - s), ((1 << s) - 1) * gf2.gaussian_coefficient(k, s)
    if kind == "generic":
        return s << (k - s), gf2.count_bases(s) * gf2.gaussian_coefficient(k, s)
    raise ParameterError(f"unknown kind {kind!r}")


def threshold_product_exact(kind: str, k: int, s: int, N: int) -> Fraction:
    """The threshold product at N, in exact rational arithmetic."""
    c, M = _threshold_terms(kind, k, s)
    num, den = M, 1
    for j in range(1, N + 1):
        num *= (1 << k) - j - c
        den *= (1 << k) - j
    return Fraction(num, den)


def threshold_log_product(kind: str, k: int, s: int, N: int) -> float:
    """Natural log of the threshold product at N (-inf once a factor vanishes)."""
    c, M = _threshold_terms(kind, k, s)
    acc = math.log(M)
    for j in range(1, N + 1):
        f = (1 << k) - j - c
        if f <= 0:
            return -math.inf if f == 0 else math.nan
        acc += math.log1p(-c / ((1 << k) - j))
    return acc


@dataclass(frozen=True)
class ThresholdResult:
    kind: str
    k: int
    s: int
    N: int
    holds_at_N: bool
    fails_at_N_minus_1: bool
    float_exact_agree: bool
    rechecked: tuple[int, ...] = ()


def _guarded(acc: float, M: int) -> bool | None:
    """Log-space verdict on ``product < 1``, or None inside the safety margin."""
    if acc == -math.inf:
        return True
    if abs(acc) <= LOG_MARGIN * max(1.0, abs(math.log(M))):
        return None
    return acc < 0


def threshold_decision(kind: str, k: int, s: int, N: int) -> bool:
    """Decide ``product(N) < 1`` under the float policy (exact inside the margin)."""
    _, M = _threshold_terms(kind, k, s)
    verdict = _guarded(threshold_log_product(kind, k, s, N), M)
    return threshold_product_exact(kind, k, s, N) < 1 if verdict is None else verdict


def threshold_details(kind: str, k: int, s: int) -> ThresholdResult:
    """Minimal N with product < 1, decided in log space with exact re-checks.

    A log-space value within ``LOG_MARGIN`` (relative) of zero is undecided and
    is settled in rational arithmetic; the final N and N-1 are always re-checked
    exactly and compared with the guarded float decision.
    """
    _check_rs(k, s)
    c, M = _threshold_terms(kind, k, s)
    universe = (1 << k) - 1
    acc = math.log(M)
    rechecked = []
    found = None
    for N in range(0, universe + 1):
        if N:
            f = (1 << k) - N - c
            if f < 0:
                break
            acc = -math.inf if f == 0 else acc + math.log1p(-c / ((1 << k) - N))
        verdict = _guarded(acc, M)
        if verdict is None:
            rechecked.append(N)
            verdict = threshold_product_exact(kind, k, s, N) < 1
        if verdict:
            found = N
            break
    if found is None:
        raise ParameterError("threshold undefined at these parameters")
    at_n = threshold_product_exact(kind, k, s, found) < 1
    before = found == 0 or not threshold_product_exact(kind, k, s, found - 1) < 1
    agree = threshold_decision(kind, k, s, found) == at_n and (
        found == 0 or threshold_decision(kind, k, s, found - 1) == (not before))
    return ThresholdResult(kind, k, s, found, at_n, before, agree, tuple(rechecked))


@lru_cache(maxsize=None)
def threshold_N(kind: str, k: int, s: int) -> int:
    """Smallest N for which the random N-subset counting argument succeeds.

    good:    prod_{j<=N} (1 - 2^{k-s}/(2^k-j)) * (2^s-1) [k s] < 1
    generic: prod_{j<=N} (1 - s 2^{k-s}/(2^k-j)) * #bases(F_2^s) [k s] < 1
    """
    return threshold_details(kind, k, s).N


# --------------------------------------------------------------------------
# F(r, s)

def _binomial_sum(n: int, lo: int, hi: int) -> int:
    return sum(math.comb(n, i) for i in range(lo, hi + 1))


def bounds_F(r: int, s: int, exact: int | None = None) -> BoundReport:
    """All bounds on the minimum generic (r,s)-set size."""
    _check_rs(r, s)
    rep = BoundReport({"r": r, "s": s, "quantity": "F"})
    V = rep.values
    V.append(BoundValue("lower.spanning", "lower", r, "1 <= s <= r"))
    V.append(BoundValue("lower.column-patterns", "lower", (1 << (s - 1)) + r - s, "1 <= s <= r"))
    V.append(_real_upper("upper.random-subset[log2]",
                         r * s / -math.log2(1 - s * 2.0 ** -s) if s * 2 ** -s < 1 else math.inf,
                         "1 <= s <= r", strict=False))
    if s >= 2:
        V.append(BoundValue("upper.binomial-sum", "upper", _binomial_sum(r - 1, 1, s - 1),
                            "2 <= s <= r, sum from i=1"))
        V.append(BoundValue("upper.binomial-sum-from-zero", "upper", _binomial_sum(r - 1, 0, s - 1),
                            "2 <= s <= r, sum from i=0", status="corrected-variant"))
    if 4 <= s <= r - 1:
        V.append(BoundValue("lower.half-split", "lower",
                            max((1 << (s - 1)) + r - s, (1 << (s // 2 - 1)) * (r - s + 2)),
                            "4 <= s <= r-1"))
    if s == 4 and r >= 5:
        V.append(BoundValue("lower.half-split-s4", "lower", 3 * (r - 3), "s = 4, r >= 5"))
    if 2 <= s < r:
        V.append(BoundValue("upper.generic-threshold", "upper", threshold_N("generic", r, s), "2 <= s < r"))
        V.append(_real_upper("upper.generic-threshold-closed[log2]",
                             (s * r - math.log2(math.factorial(s))) / -math.log2(1 - s / 2 ** s),
                             "2 <= s < r", strict=True))
    V.append(_real_upper("upper.generic-greedy-cover[ln]",
                         (1 << s) * (r * math.log(2) - math.log(s)), "1 <= s <= r", strict=True))
    if exact is not None:
        V.append(BoundValue("exact.search", "exact", int(exact), "exhaustive search", "verified-consistent"))
    _reconcile(rep)
    return rep


# --------------------------------------------------------------------------
# G1(k, s)

def good_lower_doubling(k: int, s: int) -> int:
    return (1 << (s - 1)) * (k - s + 2) - 1


def good_lower_min_weight(k: int, s: int) -> int:
    """Valid for 2 <= s <= k-1; always integral."""
    return 3 * (1 << s) * (k - s) // 4 + 5 * (1 << s) // 4 - 2


def bounds_G1(k: int, s: int, exact: int | None = None) -> BoundReport:
    """All bounds on the minimum (k,s)-set size."""
    _check_rs(k, s)
    rep = BoundReport({"k": k, "s": s, "quantity": "G1"})
    V = rep.values
    V.append(BoundValue("lower.doubling", "lower", good_lower_doubling(k, s), "1 <= s <= k"))
    V.append(_real_upper("upper.random-subset-good[log2]",
                         (k * s - math.log2(math.factorial(s))) / -math.log2(1 - 2.0 ** -s),
                         "1 <= s <= k", strict=False))
    if 2 <= s <= k - 1:
        V.append(BoundValue("lower.min-weight-split", "lower", good_lower_min_weight(k, s), "2 <= s <= k-1"))
    if 2 <= s < k:
        V.append(BoundValue("upper.flat-threshold", "upper", threshold_N("good", k, s), "2 <= s < k"))
        V.append(_real_upper("upper.flat-threshold-closed[log2]",
                             ((k - s + 1) * s + 2) / -math.log2(1 - 2.0 ** -s), "2 <= s < k", strict=True))
    if s >= 2:
        V.append(_real_upper("upper.flat-greedy-cover[ln]",
                             (1 << s) * (s * (k - s) * math.log(2) + 2 * math.log(2) + 1),
                             "2 <= s <= k", strict=True))
    if s == 2:
        c2 = 2 / (2 - math.log2(3))
        V.append(_real_upper("upper.intersecting-pairs[log2]", c2 * k - 2, "s = 2", strict=True))
        V.append(BoundValue("constant.intersecting-pairs-lower-slope", "constant", 3.53,
                            "s = 2, asymptotic (1+o(1)) k factor"))
        V.append(BoundValue("constant.intersecting-pairs-upper-slope[log2]", "constant", c2, "s = 2"))
    if s == 1:
        V.append(BoundValue("exact.unit-vectors", "exact", k, "s = 1"))
    if s == k:
        V.append(BoundValue("exact.all-nonzero", "exact", (1 << k) - 1, "s = k"))
    if s == k - 1 and k >= 2:
        V.append(BoundValue("exact.all-but-one", "exact", (1 << k) - 2, "s = k-1"))
    if exact is not None:
        V.append(BoundValue("exact.search", "exact", int(exact), "exhaustive search", "verified-consistent"))
    _reconcile(rep)
    return rep


def subspace_union_count_bound(k: int, s: int) -> float:
    """Strict upper bound on the number of s-subspaces in the greedy union."""
    return 4 * (s * (k - s) * math.log(2) + 1)


def covering_bound(n_vertices: int, edge_degree_min: int, vertex_degree_max: int) -> float:
    """Greedy vertex cover size bound |V| / d_E * (1 + ln D_V)."""
    return n_vertices / edge_degree_min * (1 + math.log(vertex_degree_max))


# --------------------------------------------------------------------------
# stopping redundancy

def _log2_sum_binom(n: int, hi: int) -> float:
    return math.log2(_binomial_sum(n, 1, hi))


def _min_t(n: int, d: int) -> int:
    """Smallest t with sum_{i=1}^{d-1} C(n,i) (1 - i/2^i)^t < 1 (exact check near the edge)."""
    terms = [(math.comb(n, i), Fraction((1 << i) - i, 1 << i)) for i in range(1, d)]

    def exact(t):
        return sum(c * q ** t for c, q in terms) < 1

    t = 0
    while True:
        val = sum(c * float(q) ** t for c, q in terms)
        if abs(val - 1) <= 1e-9:
            ok = exact(t)
        else:
            ok = val < 1
        if ok:
            return t
        t += 1


def stopping_redundancy_bounds(n: int, k: int, d: int) -> BoundReport:
    """Upper bounds on the stopping redundancy of an [n,k,d] code."""
    r = n - k
    if not (1 <= d <= r + 1 and r + 1 <= n):
        raise ParameterError("need 1 <= d <= n-k+1 <= n")
    rep = BoundReport({"n": n, "k": k, "d": d, "quantity": "rho"})
    V = rep.values
    V.append(BoundValue("lower.rank", "lower", r, "rows must span the dual code"))
    V.append(BoundValue("upper.binomial-sum", "upper", _binomial_sum(r - 1, 1, d - 2) if r >= 1 else 0,
                        "sum from i=1 to d-2"))
    V.append(BoundValue("upper.binomial-sum-from-zero", "upper",
                        _binomial_sum(r - 1, 0, d - 2) if r >= 1 else 0,
                        "sum from i=0 to d-2", status="corrected-variant"))
    if d >= 3:
        V.append(BoundValue("upper.random-rows", "upper", _min_t(n, d) + r - d + 1, "d >= 3"))
        V.append(_real_upper("upper.random-rows-closed[log2]",
                             _log2_sum_binom(n, d - 1) / -math.log2(1 - (d - 1) / 2 ** (d - 1)) + r - d + 1,
                             "d >= 3", strict=False))
        V.append(_real_upper("upper.row-greedy-cover[ln]", row_greedy_bound(n, k, d), "d >= 3", strict=True))
    else:
        rep.consistency_notes.append("random-rows bounds inapplicable for d <= 2 (degenerate logs)")
    _reconcile(rep)
    return rep


def row_greedy_bound(n: int, k: int, d: int) -> float:
    """2^{d-1}/(d-1) (1 + ln sum_{i=1}^{d-1} C(n,i)) + n - k - d + 1."""
    return 2 ** (d - 1) / (d - 1) * (1 + math.log(_binomial_sum(n, 1, d - 1))) + n - k - d + 1


# --------------------------------------------------------------------------
# rates and predicates

THRESHOLD_RATE_CONSTANTS = {2: 0.28, 3: 0.108, 4: 0.046, 5: 0.021, 6: 0.0099}


def random_code_rate(s: int) -> float:
    """R(s) = 1 - log2(2^s - 1) / s."""
    return 1 - math.log2(2 ** s - 1) / s


def rate_bounds(s: int, k: int | None = None) -> BoundReport:
    if s < 2:
        raise ParameterError("need s >= 2")
    rep = BoundReport({"s": s, "k": k, "quantity": "rate"})
    V = rep.values
    concat = (2.0 ** (1 - s) - 1 / (2 ** (2 * s + 1) - 1)) * (2 * s + 1) / (2 ** (2 * s) - 1)
    V.append(BoundValue("rate.concatenated", "lower", concat, "constructive family"))
    V.append(BoundValue("rate.random[log2]", "lower", random_code_rate(s), "existence, n -> infinity"))
    if k is not None:
        if not 2 <= s < k:
            raise ParameterError("rate for given k needs 2 <= s < k")
        V.append(BoundValue("rate.flat-threshold[log2]", "lower", k / (k - s + 2) * random_code_rate(s),
                            "2 <= s < k"))
    if s in THRESHOLD_RATE_CONSTANTS:
        V.append(BoundValue("rate.upper-constant", "constant", THRESHOLD_RATE_CONSTANTS[s],
                            "asymptotic upper bound on rate"))
    return rep


def distance_ratio_predicate(s: int, d: int, D: int) -> bool:
    """Sufficient condition d > D (1 - 2^{1-s}) for s-wise intersection."""
    if s < 2 or d > D:
        raise ParameterError("need s >= 2 and d <= D")
    return Fraction(d) > D * (1 - Fraction(2, 1 << s))


def bias_predicate(s: int, eps) -> bool:
    """Sufficient condition eps < 1 / (2^{s+1} - 2) for an eps-biased code."""
    if s < 2:
        raise ParameterError("need s >= 2")
    e = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10 ** 12)
    return e < Fraction(1, (1 << (s + 1)) - 2)


def blocking_lower(q: int, k: int, s: int) -> int:
    """Minimum number of nonzero points meeting every (k-s)-subspace of F_q^k.

    Equals the number of points of an (s+1)-subspace, (q^{s+1} - 1)/(q - 1),
    counting projective points (one per 1-subspace) when q > 2.
    """
    if q < 2 or not _prime_power(q):
        raise ParameterError("q must be a prime power")
    if not 1 <= s < k:
        raise ParameterError("need 1 <= s < k")
    return (q ** (s + 1) - 1) // (q - 1)


def _prime_power(q: int) -> bool:
    p = next(p for p in range(2, q + 1) if q % p == 0)
    while q % p == 0:
        q //= p
    return q == 1


# --------------------------------------------------------------------------
# consistency

def _reconcile(rep: BoundReport) -> None:
    """Flag conflicts between lowers, uppers and exact values.

    A bound contradicting an exact value is flagged.  When a lower and an
    upper conflict with no exact value to decide, a bound that has a
    corrected variant in the report is flagged; otherwise both are.
    """
    exacts = [v for v in rep.values if v.kind == "exact"]
    has_variant = {v.name[: -len("-from-zero")] for v in rep.values if v.name.endswith("-from-zero")}
    flags: set[str] = set()
    for e in exacts:
        for v in rep.values:
            n = v.as_int
            if n is None or v.kind in ("exact", "constant"):
                continue
            if (v.kind == "lower" and n > e.value) or (v.kind == "upper" and n < e.value):
                flags.add(v.name)
                rep.consistency_notes.append(
                    f"{v.name} = {n} contradicts {e.name} = {e.value}")
    for lo in rep.values:
        if lo.kind != "lower" or lo.as_int is None or lo.name in flags:
            continue
        for up in rep.values:
            if up.kind != "upper" or up.as_int is None or up.name in flags:
                continue
            if lo.as_int > up.as_int:
                culprits = [b.name for b in (lo, up) if b.name in has_variant] or [lo.name, up.name]
                flags.update(culprits)
                rep.consistency_notes.append(
                    f"{lo.name} = {lo.as_int} exceeds {up.name} = {up.as_int}; flagged {', '.join(culprits)}")
    for i, v in enumerate(rep.values):
        if v.name in flags:
            rep.values[i] = replace(v, status="flagged")
        elif exacts and v.kind in ("lower", "upper") and v.status == "printed" and v.as_int is not None:
            rep.values[i] = replace(v, status="verified-consistent")


def known_exact(kind: str, r: int, s: int, budget: int | None = None) -> int | None:
    """Exact minimum when trivially known or found by exhaustive search at tiny sizes."""
    if kind == "good":
        if s == 1:
            return r
        if s == r:
            return (1 << r) - 1
        if s == r - 1:
            return (1 << r) - 2
    if kind == "generic" and s == 1:
        return r
    if r > 4:
        return None
    return _searched_exact(kind, r, s, budget)


@lru_cache(maxsize=None)
def _searched_exact(kind: str, r: int, s: int, budget: int | None) -> int | None:
    from .construct import exact_minimum

    out = exact_minimum(r, s, kind, budget=budget)
    return out.size if out.optimal else None


@dataclass
class TableRow:
    k: int
    s: int
    F: BoundReport
    G1: BoundReport
    exact_F: int | None
    exact_G1: int | None
    recurrence_lower: int | None
    flags: list[str]

    def to_dict(self) -> dict:
        return {"k": self.k, "s": self.s, "exact_F": self.exact_F, "exact_G1": self.exact_G1,
                "recurrence_lower": self.recurrence_lower, "flags": self.flags,
                "F": self.F.to_dict(), "G1": self.G1.to_dict()}


def consistency_table(k_max: int, s_max: int, with_exact: bool = True,
                      exact_k_max: int = 4) -> list[TableRow]:
    """Bounds for 1 <= s <= min(k, s_max), k <= k_max, cross-checked.

    The doubling recurrence G1(k,s) >= 2 G1(k-1,s-1) + 2 (s < k) is propagated
    from the best lower bounds of the previous row and compared with exact
    values when available.
    """
    rows: list[TableRow] = []
    best_lower: dict[tuple[int, int], int] = {}
    for k in range(1, k_max + 1):
        for s in range(1, min(k, s_max) + 1):
            eF = known_exact("generic", k, s) if with_exact and k <= exact_k_max else (
                k if s == 1 else None)
            eG = known_exact("good", k, s) if with_exact and k <= exact_k_max else (
                known_exact("good", k, s) if s in (1, k - 1, k) else None)
            F = bounds_F(k, s, eF)
            G = bounds_G1(k, s, eG)
            flags = [f"F {v.name}" for v in F.values if v.status == "flagged"]
            flags += [f"G1 {v.name}" for v in G.values if v.status == "flagged"]
            rec = None
            if 2 <= s < k and (k - 1, s - 1) in best_lower:
                rec = 2 * best_lower[(k - 1, s - 1)] + 2
                G.values.append(BoundValue("lower.doubling-recurrence", "lower", rec, "2 <= s < k"))
                if eG is not None and rec > eG:
                    flags.append(f"G1 lower.doubling-recurrence {rec} > exact {eG}")
                    G.consistency_notes.append(f"recurrence lower {rec} exceeds exact {eG}")
                ub = G.best_upper()
                if ub is not None and rec > ub:
                    flags.append(f"G1 lower.doubling-recurrence {rec} > upper {ub}")
            bl = G.best_lower()
            best_lower[(k, s)] = max(x for x in (bl, rec) if x is not None)
            rows.append(TableRow(k, s, F, G, eF, eG, rec, flags))
    return rows


def format_table(rows: list[TableRow]) -> str:
    head = f"{'k':>3} {'s':>2} {'F lo':>6} {'F exact':>7} {'F up':>6} {'G1 lo':>6} {'G1 exact':>8} {'G1 up':>6}  flags"
    out = [head]
    for t in rows:
        def fmt(x):
            return "-" if x is None else str(x)
        out.append(f"{t.k:>3} {t.s:>2} {fmt(t.F.best_lower()):>6} {fmt(t.exact_F):>7} "
                   f"{fmt(t.F.best_upper()):>6} {fmt(t.G1.best_lower()):>6} {fmt(t.exact_G1):>8} "
                   f"{fmt(t.G1.best_upper()):>6}  {'; '.join(t.flags)}")
    return "\n".join(out)
