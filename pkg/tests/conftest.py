import numpy as np
import pytest

from genset import codes, gf2


def fixture_codes(max_n=10):
    return [codes.make_code(s) for s in codes.fixture_specs(max_n)]


def random_codes(count, max_n=10, seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(2, max_n + 1))
        r = int(rng.integers(1, n + 1))
        H = codes.random_parity_check(n, r, seed * 1000 + i)
        out.append(codes.LinearCode.from_parity_check(H, f"rand{i}"))
    return out


def columns_as_set(G):
    """Columns of a generator matrix as packed vectors of F_2^k."""
    return gf2.pack_rows(np.asarray(G).T)


def witness_sets():
    """Known extremal sets as (kind, r, s, packed vectors)."""
    out = []
    for k in range(1, 7):
        out.append(("good", k, 1, [1 << i for i in range(k)]))
        out.append(("generic", k, 1, [1 << i for i in range(k)]))
    for k in (3, 4):
        C = codes.make_code("punctured-simplex", k=k)
        out.append(("good", k, k - 1, columns_as_set(C.generator)))
        out.append(("good", k, k, list(range(1, 1 << k))))
    return out


@pytest.fixture(scope="session")
def small_codes():
    return fixture_codes(10) + random_codes(100)


# ---------------------------------------------------------------- acceptance lines

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(number, ok, detail=""):
    """Remember the outcome of acceptance criterion ``number`` and echo it."""
    prev = ACCEPTANCE.get(number)
    if prev is not None:
        ok = ok and prev[0]
        detail = "; ".join(x for x in (prev[1], detail) if x)
    ACCEPTANCE[number] = (ok, detail)
    print(f"acceptance {number}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
