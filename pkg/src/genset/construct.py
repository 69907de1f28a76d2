"""Constructors for good sets, generic sets, subspace unions and redundant
parity-check matrices.

Greedy constructors are vertex covers of explicit hypergraphs (see
:class:`CoverInstance`); ties always go to the lexicographically least
vertex.  Every constructor verifies its output before returning and reports
the covering-bound comparison in ``SearchOutcome.extra``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels, bounds, erasure, gf2, verify
from .codes import LinearCode
from .errors import BudgetError, GensetError, ParameterError
from .verify import VectorSet

KINDS = ("good", "generic")
DEFAULT_NODE_BUDGET = 1_000_000
GREEDY_BUDGET = verify.DEFAULT_BUDGET
EXPLICIT_BUDGET = 50_000_000
UNION_BUDGET = 20_000_000_000
UNION_MEMORY = 2_000_000_000
PARITY_BUDGET = 5_000_000_000
MAX_EXACT_R = 6


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a constructor: a verified set (or check matrix) and its provenance."""

    set: VectorSet | np.ndarray
    size: int
    optimal: bool
    nodes_explored: int
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def strings(self) -> list[str]:
        if isinstance(self.set, VectorSet):
            return self.set.strings()
        return ["".join(map(str, row)) for row in self.set]

    def to_dict(self) -> dict:
        return {"set": self.strings(), "size": self.size, "optimal": self.optimal,
                "nodes_explored": self.nodes_explored, "seed": self.seed, "extra": self.extra}


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ParameterError(f"kind must be one of {KINDS}, got {kind!r}")


def _check_rs(r: int, s: int, lo: int = 1, strict: bool = False) -> None:
    hi = r - 1 if strict else r
    if not (r >= 1 and lo <= s <= hi):
        raise ParameterError(f"need {lo} <= s <= {hi} with r >= 1, got r={r}, s={s}")


def _lex_nonzero(r: int) -> list[int]:
    return sorted(range(1, 1 << r), key=lambda x: gf2.lex_key(x, r))


def _syndrome(H, x: int) -> int:
    b = 0
    for i, h in enumerate(H):
        b |= ((h & x).bit_count() & 1) << i
    return b


def _vertex_degree_factor(s: int) -> int:
    """Unordered bases of F_2^s through a fixed nonzero vector."""
    return math.prod((1 << s) - (1 << i) for i in range(1, s)) // math.factorial(s - 1)


# --------------------------------------------------------------------------
# hypergraphs

@dataclass(frozen=True)
class CoverInstance:
    """Hypergraph whose vertex covers are the sets being constructed.

    good:    vertices are nonzero vectors of F_2^r, edges are (H, b): the
             flat {x : Hx = b} for an s x r RREF check matrix H and b != 0.
    generic: same vertices, edges are (H, B): the union of the flats
             {x : Hx = b}, b in B, for an unordered basis B of F_2^s.
    parity:  vertices are nonzero dual codewords, edges are coordinate sets
             K with 1 <= |K| <= d-1; u covers K iff u has weight one on K.
    """

    kind: str
    r: int
    s: int
    code: LinearCode | None = None
    d: int | None = None

    @classmethod
    def good(cls, r: int, s: int) -> "CoverInstance":
        _check_rs(r, s)
        return cls("good", r, s)

    @classmethod
    def generic(cls, r: int, s: int) -> "CoverInstance":
        _check_rs(r, s)
        return cls("generic", r, s)

    @classmethod
    def parity(cls, C: LinearCode, d: int | None = None) -> "CoverInstance":
        if C.k < 1 or C.r < 1:
            raise ParameterError("need a code with 1 <= k < n")
        d = erasure.minimum_distance(C) if d is None else d
        return cls("parity", C.r, d - 1, C, d)

    # sizes -------------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return (1 << self.r) - 1

    @property
    def n_edges(self) -> int:
        if self.kind == "good":
            return ((1 << self.s) - 1) * gf2.gaussian_coefficient(self.r, self.s)
        if self.kind == "generic":
            return gf2.count_bases(self.s) * gf2.gaussian_coefficient(self.r, self.s)
        n = self.code.n
        return sum(math.comb(n, i) for i in range(1, self.d))

    @property
    def edge_degree_min(self) -> int | None:
        """Fewest vertices on an edge (None without edges)."""
        r, s = self.r, self.s
        if self.kind == "good":
            return 1 << (r - s)
        if self.kind == "generic":
            return s << (r - s)
        if self.d < 2:
            return None
        # |K| 2^{r-|K|} dual words have weight one on K when |K| < d
        return min(i << (r - i) for i in range(1, self.d))

    @property
    def vertex_degree_max(self) -> int:
        """Most edges through one vertex."""
        r, s = self.r, self.s
        if self.kind in KINDS:
            through = (1 << (r - s)) * gf2.gaussian_coefficient(r - 1, s - 1)
            return through if self.kind == "good" else through * _vertex_degree_factor(s)
        n = self.code.n
        weights = {u.bit_count() for u in self.code.dual_codewords_bits() if u}
        return max(sum(w * math.comb(n - w, i - 1) for i in range(1, self.d)) for w in weights)

    def covering_bound(self) -> float | None:
        """|V| / d_E * (1 + ln D_V), the greedy cover guarantee."""
        dE = self.edge_degree_min
        if dE is None:
            return 0.0
        return bounds.covering_bound(self.n_vertices, dE, self.vertex_degree_max)

    # enumeration -------------------------------------------------------
    def vertices(self) -> Iterator[int]:
        if self.kind == "parity":
            n = self.code.n
            yield from sorted((u for u in self.code.dual_codewords_bits() if u),
                              key=lambda u: gf2.lex_key(u, n))
        else:
            yield from _lex_nonzero(self.r)

    def edges(self) -> Iterator:
        if self.kind == "parity":
            n = self.code.n
            for size in range(1, self.d):
                for K in itertools.combinations(range(n), size):
                    yield sum(1 << i for i in K)
            return
        for H in gf2.rref_bases(self.r, self.s):
            if self.kind == "good":
                for b in range(1, 1 << self.s):
                    yield H, b
            else:
                for B in _kernels.basis_tuples(self.s):
                    yield H, B

    def incidence(self, v: int, e) -> bool:
        if self.kind == "parity":
            return (v & e).bit_count() == 1
        H, b = e
        y = _syndrome(H, v)
        return y == b if self.kind == "good" else y in b

    def edge_masks(self) -> list[int]:
        """Every edge as a bitmask over vertex positions (``vertices()`` order), deduplicated."""
        verts = list(self.vertices())
        if self.kind == "parity":
            return list(dict.fromkeys(
                sum(1 << i for i, v in enumerate(verts) if self.incidence(v, K)) for K in self.edges()))
        out = {}
        tuples = _kernels.basis_tuples(self.s) if self.kind == "generic" else None
        for H in gf2.rref_bases(self.r, self.s):
            cls = [0] * (1 << self.s)
            for i, v in enumerate(verts):
                cls[_syndrome(H, v)] |= 1 << i
            if self.kind == "good":
                for b in range(1, 1 << self.s):
                    out[cls[b]] = None
            else:
                for B in tuples:
                    m = 0
                    for b in B:
                        m |= cls[b]
                    out[m] = None
        return list(out)


# --------------------------------------------------------------------------
# greedy good and generic sets

def greedy_good_set(r: int, s: int, budget: int | None = None, engine: str = "auto") -> SearchOutcome:
    """Greedy (r,s)-set: repeatedly take the vector meeting the most unmet flats."""
    return _greedy_set("good", r, s, budget, engine)


def greedy_generic_set(r: int, s: int, budget: int | None = None, engine: str = "auto") -> SearchOutcome:
    """Greedy generic (r,s)-set: cover every union of s independent cosets."""
    return _greedy_set("generic", r, s, budget, engine)


def greedy_size_bound(kind: str, r: int, s: int) -> float:
    """Closed-form ceiling on the greedy output size.

    good (s >= 2): 2^s (s(r-s) ln 2 + 2 ln 2 + 1); generic: 2^s (r ln 2 - ln s);
    otherwise the covering bound of the instance itself.
    """
    _check_kind(kind)
    if kind == "good" and s >= 2:
        return (1 << s) * (s * (r - s) * math.log(2) + 2 * math.log(2) + 1)
    if kind == "generic":
        return (1 << s) * (r * math.log(2) - math.log(s))
    return CoverInstance(kind, r, s).covering_bound()


def _greedy_set(kind: str, r: int, s: int, budget: int | None, engine: str) -> SearchOutcome:
    _check_kind(kind)
    _check_rs(r, s)
    if engine == "auto":
        engine = "kernel" if r <= 16 and s <= 4 else "explicit"
    cap = GREEDY_BUDGET if budget is None else budget
    nsub = gf2.gaussian_coefficient(r, s)
    if engine == "kernel":
        if nsub > cap:
            raise BudgetError(f"{nsub} subspaces exceed budget {cap}")
        picks, gains = _greedy_kernel(kind, r, s)
    elif engine == "explicit":
        work = nsub * (1 << r)
        if work > min(cap, EXPLICIT_BUDGET):
            raise BudgetError(f"{work} incidences exceed explicit-engine budget {min(cap, EXPLICIT_BUDGET)}")
        picks, gains = _greedy_explicit(kind, r, s)
    else:
        raise ParameterError(f"unknown engine {engine!r}")
    A = VectorSet(r, tuple(picks))
    check = verify.is_good_set(A, s) if kind == "good" else verify.is_generic_set(A, s)
    if not check:
        raise GensetError(f"greedy {kind} set failed verification: {check.certificate}")
    inst = CoverInstance(kind, r, s)
    lemma = inst.covering_bound()
    closed = greedy_size_bound(kind, r, s)
    extra = {"kind": kind, "r": r, "s": s, "engine": engine, "gains": list(gains),
             "covering_bound": lemma, "size_bound": closed,
             "within_bound": len(A) <= math.ceil(closed) and len(A) <= lemma}
    return SearchOutcome(A, len(A), False, 0, None, extra)


def _greedy_kernel(kind: str, r: int, s: int) -> tuple[list[int], list[int]]:
    ok, _, fhat = _kernels.mask_tables(s, kind)
    H = _kernels.check_rows(r, s)
    order = np.array(_lex_nonzero(r), dtype=np.int64)
    picks, gains = _kernels.greedy_cover(H, r, s, fhat, ok, order, 1 << r, kind == "good")
    return [int(x) for x in picks], [int(g) for g in gains]


def _bases_through(b: int, allowed: list[int], s: int) -> int:
    """Unordered bases of F_2^s containing b with the other vectors from ``allowed``."""
    others = [a for a in allowed if a != b]
    count = 0
    for combo in itertools.combinations(others, s - 1):
        if gf2.is_independent((b, *combo)):
            count += 1
    return count


def _greedy_explicit(kind: str, r: int, s: int) -> tuple[list[int], list[int]]:
    """Pure Python engine over syndrome masks; any s, small r."""
    q = 1 << s
    full = (1 << q) - 1
    subs = list(gf2.rref_bases(r, s))
    verts = _lex_nonzero(r)
    syn = [[_syndrome(H, v) for v in verts] for H in subs]
    masks = [1] * len(subs)  # syndrome 0 is never an edge member
    if s <= 4:
        ok_t, gain_t, _ = _kernels.mask_tables(s, kind)
        ok = lambda m: bool(ok_t[m])  # noqa: E731
        gain = lambda m, b: int(gain_t[m, b])  # noqa: E731
    else:
        memo: dict = {}

        def ok(m):
            missed = [b for b in range(1, q) if not (m >> b) & 1]
            return m == full if kind == "good" else gf2.rank_bits(missed) < s

        def gain(m, b):
            if (m >> b) & 1:
                return 0
            if kind == "good":
                return 1
            if (m, b) not in memo:
                memo[m, b] = _bases_through(b, [y for y in range(1, q) if not (m >> y) & 1], s)
            return memo[m, b]

    live = [u for u in range(len(subs)) if not ok(masks[u])]
    picks, gains = [], []
    while live:
        best, bestg = -1, 0
        for i, v in enumerate(verts):
            g = sum(gain(masks[u], syn[u][i]) for u in live)
            if g > bestg:
                best, bestg = i, g
        picks.append(verts[best])
        gains.append(bestg)
        for u in live:
            masks[u] |= 1 << syn[u][best]
        live = [u for u in live if not ok(masks[u])]
    return picks, gains


# --------------------------------------------------------------------------
# subspace unions

def union_cost(r: int, s: int) -> tuple[int, int]:
    """(counter updates, bytes) the subspace-union greedy needs at (r, s)."""
    m = r - s
    nu = gf2.gaussian_coefficient(r, s)
    nv = gf2.gaussian_coefficient(r, m)
    in_v = sum(gf2.gaussian_coefficient(m, t) for t in range(1, min(s, m) + 1))
    in_u = sum(gf2.gaussian_coefficient(s, t) for t in range(1, s + 1))
    picks = math.ceil(bounds.subspace_union_count_bound(r, s))
    blocks = sum(_kernels._block_size(r, t) for t in range(1, s + 1))
    return nv * in_v + nu * in_u * picks, 4 * (nu * in_u + blocks) + 8 * nu * s


def greedy_subspace_union(r: int, s: int, budget: int | None = None) -> SearchOutcome:
    """Greedy union of s-subspaces giving every (r-s)-subspace a complement.

    Each pick is the s-subspace U meeting the most not-yet-served
    (r-s)-subspaces V only in 0.  The union of the picks (nonzero vectors,
    lexicographic order) is an (r,s)-set.
    """
    _check_rs(r, s, strict=True)
    if r > 16:
        raise ParameterError("subspace unions need r <= 16")
    cap = UNION_BUDGET if budget is None else budget
    work, memory = union_cost(r, s)
    if work > cap or memory > UNION_MEMORY:
        raise BudgetError(f"subspace union at r={r}, s={s} needs {work} updates and {memory} bytes "
                          f"(budget {cap} updates, {UNION_MEMORY} bytes)")
    Ub = _kernels.subspace_rows(r, s)
    nv = gf2.gaussian_coefficient(r, r - s)
    picks, gains = _kernels.subspace_union_mobius(Ub, r, s, *_kernels.mobius_tables(r, s), nv, nv)
    chosen = [tuple(int(x) for x in Ub[p]) for p in picks]
    deg = 1 << (s * (r - s))
    Vb = _kernels.subspace_rows(r, r - s)
    degrees = [int(_kernels.count_complements(Ub[p], s, Vb, r)) for p in picks]
    if any(d != deg for d in degrees) or int(gains[0]) != deg:
        raise GensetError("complement count differs from 2^{s(r-s)}")
    members = set()
    for basis in chosen:
        members.update(x for x in gf2.span_bits(list(basis)) if x)
    A = VectorSet(r, tuple(sorted(members, key=lambda x: gf2.lex_key(x, r))))
    check = verify.is_good_set(A, s)
    if not check:
        raise GensetError(f"subspace union failed verification: {check.certificate}")
    limit = bounds.subspace_union_count_bound(r, s)
    extra = {"kind": "subspace-union", "r": r, "s": s,
             "subspaces": [[gf2.to_string(x, r) for x in b] for b in chosen],
             "count": len(chosen), "gains": [int(g) for g in gains], "degree": deg,
             "count_bound": limit, "within_bound": len(chosen) < limit}
    return SearchOutcome(A, len(A), False, 0, None, extra)


# --------------------------------------------------------------------------
# randomized search

def randomized_search(r: int, s: int, kind: str = "good", seed: int = 0,
                      max_trials: int = 1000) -> SearchOutcome:
    """Sample uniform N-subsets of nonzero vectors, N from the threshold product."""
    _check_kind(kind)
    _check_rs(r, s)
    N = min(bounds.threshold_N(kind, r, s), (1 << r) - 1)
    rng = np.random.default_rng(seed)
    test = verify.is_good_set if kind == "good" else verify.is_generic_set
    for trial in range(1, max_trials + 1):
        pick = rng.choice((1 << r) - 1, size=N, replace=False) + 1
        A = VectorSet(r, tuple(sorted((int(x) for x in pick), key=lambda x: gf2.lex_key(x, r))))
        if test(A, s):
            return SearchOutcome(A, N, False, trial, seed, {"kind": kind, "N": N, "trials": trial})
    raise BudgetError(f"no {kind} set among {max_trials} random {N}-subsets (seed {seed})")


# --------------------------------------------------------------------------
# exact minimum

def exact_minimum(r: int, s: int, kind: str = "good", budget: int | None = None) -> SearchOutcome:
    """Minimum good or generic (r,s)-set by branch and bound.

    Both properties are invariant under GL(r) and force A to span, so the
    search only considers sets containing the standard basis.  The greedy
    set gives the initial upper bound.  ``optimal`` is True when the tree was
    exhausted within ``budget`` nodes.
    """
    _check_kind(kind)
    _check_rs(r, s)
    if r > MAX_EXACT_R:
        raise ParameterError(f"exact search supports r <= {MAX_EXACT_R}")
    cap = DEFAULT_NODE_BUDGET if budget is None else budget
    inst = CoverInstance(kind, r, s)
    verts = list(inst.vertices())
    pos = {v: i for i, v in enumerate(verts)}
    edges = np.array(inst.edge_masks(), dtype=np.int64)
    start = 0
    for i in range(r):
        start |= 1 << pos[1 << i]
    seed_set = _greedy_set(kind, r, s, None, "auto").set
    size, mask, nodes, done = _kernels.hitting_set_bb(edges, len(verts), np.int64(start),
                                                      len(seed_set), cap)
    if mask >= 0:
        A = VectorSet(r, tuple(v for i, v in enumerate(verts) if (int(mask) >> i) & 1))
    else:
        A = VectorSet(r, tuple(sorted(seed_set, key=lambda x: gf2.lex_key(x, r))))
    check = verify.is_good_set(A, s) if kind == "good" else verify.is_generic_set(A, s)
    if not check:
        raise GensetError(f"search result failed verification: {check.certificate}")
    extra = {"kind": kind, "r": r, "s": s, "edges": int(len(edges)), "budget": cap,
             "upper_bound_from": "greedy" if mask < 0 else "search"}
    return SearchOutcome(A, len(A), bool(done), int(nodes), None, extra)


def exact_blocking_minimum(k: int, s: int, budget: int | None = None) -> SearchOutcome:
    """Smallest set of nonzero vectors meeting every (k-s)-subspace of F_2^k.

    Blocking sets need not span, so unlike ``exact_minimum`` the search starts
    from the empty set.
    """
    _check_rs(k, s, strict=True)
    if k > MAX_EXACT_R:
        raise ParameterError(f"exact search supports k <= {MAX_EXACT_R}")
    cap = DEFAULT_NODE_BUDGET if budget is None else budget
    verts = _lex_nonzero(k)
    pos = {v: i for i, v in enumerate(verts)}
    edges = []
    for U in gf2.enumerate_subspaces(k, k - s):
        edges.append(sum(1 << pos[x] for x in U.members() if x))
    edges = np.array(edges, dtype=np.int64)
    size, mask, nodes, done = _kernels.hitting_set_bb(edges, len(verts), np.int64(0),
                                                      len(verts) + 1, cap)
    if mask < 0:
        raise BudgetError(f"no blocking set found within {cap} nodes")
    A = VectorSet(k, tuple(v for i, v in enumerate(verts) if (int(mask) >> i) & 1))
    check = verify.is_subspace_blocking(A, s)
    if not check:
        raise GensetError(f"search result failed verification: {check.certificate}")
    extra = {"kind": "blocking", "k": k, "s": s, "edges": int(len(edges)), "budget": cap}
    return SearchOutcome(A, len(A), bool(done), int(nodes), None, extra)


# --------------------------------------------------------------------------
# parity-check matrices with full stopping distance

def greedy_parity_check(C: LinearCode, budget: int | None = None) -> SearchOutcome:
    """Rows of a parity-check matrix of C with stopping distance d(C).

    Dual codewords are picked greedily until every coordinate set K with
    1 <= |K| <= d-1 meets some row in exactly one position, then RREF rows of
    the dual code are appended until the rank is n-k.
    """
    inst = CoverInstance.parity(C)
    n, r, d = C.n, C.r, inst.d
    cap = PARITY_BUDGET if budget is None else budget
    if r > 20:
        raise BudgetError(f"dual enumeration of 2^{r} words exceeds budget")
    words = np.array(list(inst.vertices()), dtype=np.int64)
    sets = np.array(list(inst.edges()), dtype=np.int64)
    if len(sets):
        picks, gains, done = _kernels.parity_greedy(words, sets, len(words), cap)
        if not done:
            raise BudgetError(f"{len(words)} words x {len(sets)} sets exceeds budget {cap}")
    else:
        picks, gains = np.zeros(0, np.int64), np.zeros(0, np.int64)
    rows = [int(words[p]) for p in picks]
    greedy_rows = len(rows)
    basis, _ = gf2.rref_bits(C.parity_bits(), n)
    rank = gf2.rank_bits(rows, n) if rows else 0
    for b in basis:
        if rank == r:
            break
        if gf2.rank_bits(rows + [b], n) > rank:
            rows.append(b)
            rank += 1
    H = gf2.unpack_rows(rows, n)
    if gf2.rank_bits(rows, n) != r:
        raise GensetError("completion did not reach full rank")
    sd = erasure.stopping_distance(H)
    if sd != d:
        raise GensetError(f"stopping distance {sd} differs from minimum distance {d}")
    bound = bounds.row_greedy_bound(n, C.k, d) if d >= 2 else float(r)
    extra = {"n": n, "k": C.k, "d": d, "stopping_distance": sd, "greedy_rows": greedy_rows,
             "completion_rows": len(rows) - greedy_rows, "gains": [int(g) for g in gains],
             "row_bound": bound, "within_bound": len(rows) <= bound}
    return SearchOutcome(H, len(rows), False, 0, None, extra)
