"""Binary linear codes and the classic families used as fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import ParameterError

FAMILIES = (
    "hamming",
    "extended-hamming",
    "simplex",
    "punctured-simplex",
    "repetition",
    "single-parity",
    "random",
)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """An [n, k] binary code with consistent generator and parity-check matrices."""

    generator: np.ndarray
    parity_check: np.ndarray
    name: str = ""

    def __post_init__(self):
        G, H = self.generator, self.parity_check
        n = G.shape[1]
        if H.shape[1] != n:
            raise ParameterError("generator and parity check have different lengths")
        if G.shape[0] and gf2.rank(G) != G.shape[0]:
            raise ParameterError("generator rows must be independent")
        if H.shape[0] and gf2.rank(H) != H.shape[0]:
            raise ParameterError("parity-check rows must be independent")
        if G.shape[0] + H.shape[0] != n:
            raise ParameterError("rank(G) + rank(H) must equal n")
        if G.size and H.size and gf2.matmul(G, H.T).any():
            raise ParameterError("generator and parity check are not orthogonal")

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def r(self) -> int:
        return self.n - self.k

    @classmethod
    def from_generator(cls, G, name: str = "") -> "LinearCode":
        G = gf2.as_matrix(G)
        n = G.shape[1]
        basis, _ = gf2.rref_bits(gf2.pack_rows(G), n)
        Gr = gf2.unpack_rows(basis, n)
        H = gf2.unpack_rows(gf2.nullspace_bits(basis, n), n) if n else np.zeros((0, 0), np.uint8)
        return cls(Gr, H, name)

    @classmethod
    def from_parity_check(cls, H, name: str = "", keep_rows: bool = True) -> "LinearCode":
        """Code with null space of ``H``; ``H`` is kept verbatim when its rows are independent."""
        H = gf2.as_matrix(H)
        n = H.shape[1]
        rows = gf2.pack_rows(H)
        if not (keep_rows and gf2.is_independent(rows)):
            rows, _ = gf2.rref_bits(rows, n)
            H = gf2.unpack_rows(rows, n)
        G = gf2.unpack_rows(gf2.nullspace_bits(rows, n), n)
        return cls(G, H, name)

    def generator_bits(self) -> list[int]:
        return gf2.pack_rows(self.generator)

    def parity_bits(self) -> list[int]:
        return gf2.pack_rows(self.parity_check)

    def codewords_bits(self) -> list[int]:
        return gf2.span_bits(self.generator_bits())

    def dual_codewords_bits(self) -> list[int]:
        return gf2.span_bits(self.parity_bits())

    def contains(self, word) -> bool:
        x = gf2.pack(word) if not isinstance(word, (int, np.integer)) else int(word)
        return all((x & h).bit_count() % 2 == 0 for h in self.parity_bits())

    def in_dual(self, word) -> bool:
        x = gf2.pack(word) if not isinstance(word, (int, np.integer)) else int(word)
        return all((x & g).bit_count() % 2 == 0 for g in self.generator_bits())

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"<LinearCode {label}[{self.n},{self.k}]>"


@dataclass(frozen=True)
class CodeFamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None


def _columns_matrix(cols: list[int], m: int) -> np.ndarray:
    return gf2.unpack_rows(cols, m).T.copy()


def hamming_parity_check(m: int) -> np.ndarray:
    """Standard m x (2^m - 1) parity check: column j (1-based) is j in binary, LSB on row 0."""
    return _columns_matrix(list(range(1, 1 << m)), m)


def make_code(spec: CodeFamilySpec | str, **params) -> LinearCode:
    """Build a fixture code, e.g. ``make_code("hamming", m=3)``."""
    if isinstance(spec, str):
        seed = params.pop("seed", None)
        spec = CodeFamilySpec(spec, params, seed)
    fam, p = spec.family, dict(spec.params)
    if fam not in FAMILIES:
        raise ParameterError(f"unknown code family {fam!r}")

    def need(key, lo):
        if key not in p:
            raise ParameterError(f"family {fam!r} needs parameter {key!r}")
        v = int(p[key])
        if v < lo:
            raise ParameterError(f"{fam}: {key} must be >= {lo}")
        return v

    if fam == "hamming":
        m = need("m", 2)
        return LinearCode.from_parity_check(hamming_parity_check(m), f"hamming-{m}")
    if fam == "extended-hamming":
        m = need("m", 2)
        H = np.hstack([hamming_parity_check(m), np.zeros((m, 1), np.uint8)])
        H = np.vstack([H, np.ones((1, 1 << m), np.uint8)])
        return LinearCode.from_parity_check(H, f"extended-hamming-{m}")
    if fam == "simplex":
        k = need("k", 1)
        return LinearCode.from_generator(_columns_matrix(list(range(1, 1 << k)), k), f"simplex-{k}")
    if fam == "punctured-simplex":
        k = need("k", 2)
        cols = sorted(range(1, 1 << k), key=lambda x: gf2.lex_key(x, k))[:-1]
        cols.sort()
        G = _columns_matrix(cols, k)
        return LinearCode(G, gf2.nullspace(G), f"punctured-simplex-{k}")
    if fam == "repetition":
        n = need("n", 1)
        return LinearCode.from_generator(np.ones((1, n), np.uint8), f"repetition-{n}")
    if fam == "single-parity":
        n = need("n", 2)
        return LinearCode.from_parity_check(np.ones((1, n), np.uint8), f"single-parity-{n}")
    # random
    n = need("n", 1)
    k = need("k", 0)
    if k > n:
        raise ParameterError("random: need k <= n")
    seed = spec.seed if spec.seed is not None else 0
    rng = np.random.default_rng(seed)
    while True:
        G = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
        if k == 0 or gf2.rank(G) == k:
            break
    if k == 0:
        return LinearCode(np.zeros((0, n), np.uint8), np.eye(n, dtype=np.uint8), f"random-{n}-{k}")
    return LinearCode(G, gf2.nullspace(G), f"random-{n}-{k}-s{seed}")


def random_parity_check(n: int, r: int, seed: int) -> np.ndarray:
    """Random full-rank r x n matrix (numpy Generator seeded with ``seed``)."""
    if not 1 <= r <= n:
        raise ParameterError("need 1 <= r <= n")
    rng = np.random.default_rng(seed)
    while True:
        H = rng.integers(0, 2, size=(r, n), dtype=np.uint8)
        if gf2.rank(H) == r:
            return H


def documented_parameters(spec: CodeFamilySpec | str, **params) -> tuple[int, int, int | None]:
    """Textbook (n, k, d) of a fixture family; d is None for random codes."""
    if isinstance(spec, str):
        spec = CodeFamilySpec(spec, params)
    fam, p = spec.family, {k: int(v) for k, v in spec.params.items()}
    if fam == "hamming":
        return (1 << p["m"]) - 1, (1 << p["m"]) - 1 - p["m"], 3
    if fam == "extended-hamming":
        return 1 << p["m"], (1 << p["m"]) - 1 - p["m"], 4
    if fam == "simplex":
        return (1 << p["k"]) - 1, p["k"], 1 << (p["k"] - 1)
    if fam == "punctured-simplex":
        # deleting one coordinate drops the weight of some codewords by one
        return (1 << p["k"]) - 2, p["k"], (1 << (p["k"] - 1)) - 1
    if fam == "repetition":
        return p["n"], 1, p["n"]
    if fam == "single-parity":
        return p["n"], p["n"] - 1, 2
    if fam == "random":
        return p["n"], p["k"], None
    raise ParameterError(f"unknown code family {fam!r}")


def fixture_specs(max_n: int = 10) -> list[CodeFamilySpec]:
    """Every deterministic fixture code of length at most ``max_n``."""
    out = []
    for m in range(2, 8):
        if (1 << m) - 1 <= max_n:
            out.append(CodeFamilySpec("hamming", {"m": m}))
        if 1 << m <= max_n:
            out.append(CodeFamilySpec("extended-hamming", {"m": m}))
    for k in range(1, 8):
        if (1 << k) - 1 <= max_n:
            out.append(CodeFamilySpec("simplex", {"k": k}))
        if k >= 2 and (1 << k) - 2 <= max_n:
            out.append(CodeFamilySpec("punctured-simplex", {"k": k}))
    out += [CodeFamilySpec("repetition", {"n": n}) for n in range(1, max_n + 1)]
    out += [CodeFamilySpec("single-parity", {"n": n}) for n in range(2, max_n + 1)]
    return out
