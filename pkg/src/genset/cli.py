"""Command-line front end: ``genset <command> ...``.

Exit codes: 0 success or property holds, 1 property fails (certificate in the
report), 2 usage or data error, 3 budget exceeded.  Reports are JSON with the
wall-clock timings kept in their own field so that everything else is
reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bounds, construct, erasure, gf2, verify
from .codes import FAMILIES, CodeFamilySpec, LinearCode, make_code
from .errors import BudgetError, DataError, GensetError, ParameterError

DEFAULT_SEED = 0
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# inputs

def parse_code_spec(text: str, seed: int | None = None) -> CodeFamilySpec:
    """``family[:key=value,...]``, e.g. ``hamming:m=3`` or ``random:n=10,k=4,seed=2``."""
    family, _, rest = text.partition(":")
    if family not in FAMILIES:
        raise UsageError(f"unknown code family {family!r} (choose from {', '.join(FAMILIES)})")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"bad code parameter {item!r}, expected key=value")
        try:
            params[key.strip()] = int(val)
        except ValueError:
            raise UsageError(f"code parameter {key!r} must be an integer") from None
    spec_seed = params.pop("seed", seed)
    return CodeFamilySpec(family, params, spec_seed)


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Inputs:
    """Loads input files and remembers their digests for the report."""

    def __init__(self):
        self.files: dict[str, str] = {}

    def read_matrix(self, path: str) -> np.ndarray:
        p = Path(path)
        try:
            data = p.read_bytes()
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
        self.files[str(path)] = _digest(data)
        return gf2.parse_matrix(data.decode())

    def code(self, args) -> LinearCode:
        if getattr(args, "code", None):
            return make_code(parse_code_spec(args.code, args.seed))
        if getattr(args, "matrix", None):
            return LinearCode.from_parity_check(self.read_matrix(args.matrix), Path(args.matrix).stem)
        raise UsageError("give --code FAMILY:PARAMS or --matrix FILE (parity-check rows)")

    def digest(self, params: dict) -> str:
        blob = json.dumps({"files": self.files, "params": params}, sort_keys=True)
        return _digest(blob.encode())


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("GENSET_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError("GENSET_BUDGET must be an integer") from None
    return None


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


# --------------------------------------------------------------------------
# reports

def _clean(x):
    """JSON-ready copy with integral floats as ints and numpy scalars unwrapped."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isfinite(x) and x.is_integer():
            return int(x)
        return x if math.isfinite(x) else str(x)
    return x


def make_report(argv, inputs: Inputs, params: dict, results: dict, seed, elapsed: float) -> dict:
    return {
        "command": list(argv),
        "inputs_digest": inputs.digest(params),
        "inputs": {"files": inputs.files, "params": _clean(params)},
        "results": _clean(results),
        "seed": seed,
        "version": __version__,
        "timings": {"wall_seconds": round(elapsed, 6)},
    }


def _text(results: dict, indent: str = "") -> str:
    lines = []
    for k, v in results.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_text(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for item in v:
                block = _text(item, indent + "    ").split("\n")
                block[0] = indent + "  - " + block[0].lstrip()
                lines.extend(block)
        else:
            lines.append(f"{indent}{k}: {v}")
    return "\n".join(lines)


def _table_summary(rows: list[dict]) -> list[dict]:
    """Best bounds and exact values per consistency-table row."""
    return [{"k": r["k"], "s": r["s"], "F_lower": r["F"]["best_lower"], "F_exact": r["exact_F"],
             "F_upper": r["F"]["best_upper"], "G1_lower": r["G1"]["best_lower"],
             "G1_exact": r["exact_G1"], "G1_upper": r["G1"]["best_upper"],
             "flags": "; ".join(r["flags"])} for r in rows]


def _table_text(rows: list[dict]) -> str:
    def fmt(x):
        return "-" if x is None else str(x)
    out = [f"{'k':>3} {'s':>2} {'F lo':>6} {'F exact':>7} {'F up':>6} "
           f"{'G1 lo':>6} {'G1 exact':>8} {'G1 up':>6}  flags"]
    for r in _table_summary(rows):
        out.append(f"{r['k']:>3} {r['s']:>2} {fmt(r['F_lower']):>6} {fmt(r['F_exact']):>7} "
                   f"{fmt(r['F_upper']):>6} {fmt(r['G1_lower']):>6} {fmt(r['G1_exact']):>8} "
                   f"{fmt(r['G1_upper']):>6}  {r['flags']}")
    return "\n".join(out)


def _csv(rows: list[dict]) -> str:
    import csv
    import io
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


# --------------------------------------------------------------------------
# commands; each returns (exit code, results, seed)

PROPERTIES = ("good", "generic", "intersecting", "covering-array", "blocking")


def cmd_verify(args, inp: Inputs):
    _require(args, "property", "s")
    budget = _budget(args)
    prop = args.property
    if prop in ("good", "generic", "blocking"):
        _require(args, "set")
        A = verify.VectorSet.from_rows(inp.read_matrix(args.set))
        if prop == "good":
            v = verify.is_good_set(A, args.s, method=args.method or "flats", budget=budget)
        elif prop == "generic":
            v = verify.is_generic_set(A, args.s, method=args.method or "cosets", budget=budget)
        else:
            v = verify.is_subspace_blocking(A, args.s, budget=budget)
        subject = {"r": A.r, "size": len(A)}
    elif prop == "intersecting":
        if args.code:
            G = make_code(parse_code_spec(args.code, args.seed)).generator
        else:
            _require(args, "matrix")
            G = inp.read_matrix(args.matrix)
        v = verify.is_swise_intersecting(G, args.s, budget=budget)
        subject = {"k": int(G.shape[0]), "n": int(G.shape[1])}
    else:
        _require(args, "matrix")
        M = inp.read_matrix(args.matrix)
        v = verify.is_covering_array(M, args.s)
        subject = {"rows": int(M.shape[0]), "columns": int(M.shape[1])}
    res = {"property": prop, "s": args.s, "holds": v.ok, **subject,
           "certificate": v.certificate.to_dict() if v.certificate else None}
    return (EXIT_OK if v.ok else EXIT_FAIL), res, None


CONSTRUCT_KINDS = ("good", "generic", "subspace-union", "parity-check", "parity")


def cmd_construct(args, inp: Inputs):
    _require(args, "kind")
    budget = _budget(args)
    if args.kind in ("parity-check", "parity"):
        C = inp.code(args)
        out = construct.greedy_parity_check(C, budget=budget)
        res = {"code": C.name or f"[{C.n},{C.k}]", **out.to_dict()}
    else:
        _require(args, "r", "s")
        fn = {"good": construct.greedy_good_set, "generic": construct.greedy_generic_set,
              "subspace-union": construct.greedy_subspace_union}[args.kind]
        out = fn(args.r, args.s, budget=budget)
        res = out.to_dict()
    if args.out:
        rows = out.set.matrix() if isinstance(out.set, verify.VectorSet) else out.set
        gf2.write_matrix(args.out, rows, [f"genset construct --kind {args.kind}", f"size {out.size}"])
    return EXIT_OK, res, None


def cmd_search(args, inp: Inputs):
    _require(args, "kind", "r", "s")
    if args.kind not in construct.KINDS:
        raise UsageError(f"--kind must be one of {construct.KINDS} for search")
    budget = _budget(args)
    if args.random:
        seed = DEFAULT_SEED if args.seed is None else args.seed
        out = construct.randomized_search(args.r, args.s, args.kind, seed, args.trials)
        res = out.to_dict()
        code = EXIT_OK
    else:
        seed = None
        out = construct.exact_minimum(args.r, args.s, args.kind, budget)
        res = out.to_dict()
        res["exact"] = out.size if out.optimal else None
        code = EXIT_OK if out.optimal else EXIT_BUDGET
    if args.out:
        gf2.write_matrix(args.out, out.set.matrix(), [f"genset search --kind {args.kind}", f"size {out.size}"])
    return code, res, seed


BOUND_QUANTITIES = ("F", "G1", "rho", "rate", "blocking", "threshold", "table")


def cmd_bounds(args, inp: Inputs):
    q = args.target or args.quantity
    if q is None:
        raise UsageError("bounds needs a quantity (positional or --target)")
    if args.target and args.quantity and args.target != args.quantity:
        raise UsageError("positional quantity and --target disagree")
    if q == "table":
        kmax = args.kmax if args.kmax is not None else 6
        smax = args.smax if args.smax is not None else 4
        rows = bounds.consistency_table(kmax, smax, with_exact=not args.no_exact,
                                        exact_k_max=args.exact_kmax)
        res = {"kmax": kmax, "smax": smax, "rows": [r.to_dict() for r in rows],
               "flagged": [{"k": r.k, "s": r.s, "flags": r.flags} for r in rows if r.flags]}
        return EXIT_OK, res, None
    if q in ("F", "G1"):
        _require(args, "r", "s")
        exact = bounds.known_exact("generic" if q == "F" else "good", args.r, args.s) if args.exact else None
        rep = (bounds.bounds_F if q == "F" else bounds.bounds_G1)(args.r, args.s, exact)
        return EXIT_OK, rep.to_dict(), None
    if q == "rho":
        if args.code or args.matrix:
            C = inp.code(args)
            n, k, d = C.n, C.k, erasure.minimum_distance(C)
        else:
            _require(args, "n", "k", "d")
            n, k, d = args.n, args.k, args.d
        return EXIT_OK, bounds.stopping_redundancy_bounds(n, k, d).to_dict(), None
    if q == "rate":
        _require(args, "s")
        return EXIT_OK, bounds.rate_bounds(args.s, args.r).to_dict(), None
    if q == "blocking":
        _require(args, "r", "s")
        qq = 2 if args.q is None else args.q
        res = {"q": qq, "k": args.r, "s": args.s, "value": bounds.blocking_lower(qq, args.r, args.s)}
        if args.exact:
            if qq != 2:
                raise UsageError("--exact blocking search is binary only")
            out = construct.exact_blocking_minimum(args.r, args.s, _budget(args))
            res.update(exact=out.size if out.optimal else None, witness=out.strings(),
                       nodes_explored=out.nodes_explored)
        return EXIT_OK, res, None
    _require(args, "kind", "r", "s")
    t = bounds.threshold_details(args.kind, args.r, args.s)
    res = {"kind": t.kind, "k": t.k, "s": t.s, "N": t.N, "holds_at_N": t.holds_at_N,
           "fails_at_N_minus_1": t.fails_at_N_minus_1, "float_exact_agree": t.float_exact_agree}
    return EXIT_OK, res, None


def cmd_stopping(args, inp: Inputs):
    if args.matrix and not args.code:
        H = inp.read_matrix(args.matrix)
        C = LinearCode.from_parity_check(H, Path(args.matrix).stem, keep_rows=False)
    else:
        C = inp.code(args)
        H = C.parity_check
    d = erasure.minimum_distance(C)
    sd = erasure.stopping_distance(H)
    S = erasure.smallest_stopping_set(H)
    res = {"n": C.n, "k": C.k, "rows": int(H.shape[0]), "minimum_distance": d,
           "stopping_distance": sd, "smallest_stopping_set": S, "full": sd == d}
    if args.construct:
        out = construct.greedy_parity_check(C, budget=_budget(args))
        res["greedy"] = out.to_dict()
        if args.out:
            gf2.write_matrix(args.out, out.set, [f"greedy parity check for {C.name}"])
    return (EXIT_OK if sd == d or args.construct else EXIT_FAIL), res, None


def cmd_simulate(args, inp: Inputs):
    _require(args, "p")
    C = inp.code(args)
    seed = DEFAULT_SEED if args.seed is None else args.seed
    strategies, names = [C.parity_check], ["parity-check"]
    if args.greedy:
        strategies.append(construct.greedy_parity_check(C).set)
        names.append("greedy")
    if args.set:
        A = inp.read_matrix(args.set)
        strategies.append(erasure.apply_generic_set(A, C.parity_check))
        names.append("generic-set")
    if args.all_dual:
        strategies.append(gf2.unpack_rows([u for u in C.dual_codewords_bits() if u], C.n))
        names.append("all-dual")
    rep = erasure.bec_simulate(strategies, C, args.p, args.trials, seed, names)
    return EXIT_OK, rep.to_dict(), seed


TABLE_KINDS = ("good", "generic", "subspace-union")


def cmd_table(args, inp: Inputs):
    rmax = args.rmax if args.rmax is not None else 6
    smax = args.smax if args.smax is not None else 3
    kinds = [args.kind] if args.kind else list(TABLE_KINDS)
    budget = _budget(args)
    rows = []
    for kind in kinds:
        for r in range(1, rmax + 1):
            for s in range(1, min(smax, r) + 1):
                if kind == "subspace-union" and s >= r:
                    continue
                row = {"kind": kind, "r": r, "s": s}
                try:
                    if kind == "subspace-union":
                        out = construct.greedy_subspace_union(r, s, budget=budget)
                        row.update(size=out.size, count=out.extra["count"], bound=out.extra["count_bound"])
                    else:
                        fn = construct.greedy_good_set if kind == "good" else construct.greedy_generic_set
                        out = fn(r, s, budget=budget)
                        row.update(size=out.size, count=None, bound=out.extra["size_bound"])
                    row["within_bound"] = out.extra["within_bound"]
                except BudgetError:
                    row.update(size=None, count=None, bound=None, within_bound=None)
                rows.append(row)
    return EXIT_OK, {"rows": rows}, None


COMMANDS = {"verify": cmd_verify, "construct": cmd_construct, "search": cmd_search,
            "bounds": cmd_bounds, "stopping": cmd_stopping, "simulate": cmd_simulate,
            "table": cmd_table}


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help=f"seed for randomized paths (default {DEFAULT_SEED})")
    common.add_argument("--budget", type=int, help="work budget (overrides GENSET_BUDGET)")
    common.add_argument("--threads", type=int, help="worker threads for compiled kernels")
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")
    common.add_argument("--report", help="also write the JSON report to this file")

    p = argparse.ArgumentParser(prog="genset", description="Good and generic sets over F_2, "
                                "stopping sets and redundant parity checks.")
    p.add_argument("--version", action="version", version=f"genset {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check a property of a set or matrix")
    v.add_argument("--set", help="file of vectors, one {0,1} row each")
    v.add_argument("--matrix", help="generator (intersecting) or array (covering-array) file")
    v.add_argument("--code", help="fixture code FAMILY:key=val,... (intersecting)")
    v.add_argument("--property", choices=PROPERTIES)
    v.add_argument("--method", choices=("flats", "definition", "cosets", "matrices", "hyperplanes"))
    v.add_argument("--s", type=int, help="s (strength t for covering arrays)")

    c = sub.add_parser("construct", parents=[common], help="greedy constructions")
    c.add_argument("--kind", choices=CONSTRUCT_KINDS)
    c.add_argument("--r", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--code")
    c.add_argument("--matrix", help="parity-check file (kind parity-check)")
    c.add_argument("--out", help="write the set or matrix here (report goes to OUT.json)")

    s = sub.add_parser("search", parents=[common], help="exact or randomized minimum search")
    s.add_argument("--kind", choices=construct.KINDS)
    s.add_argument("--r", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--random", action="store_true", help="random threshold-size subsets")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--out")

    b = sub.add_parser("bounds", parents=[common], help="bounds and consistency table")
    b.add_argument("quantity", nargs="?", choices=BOUND_QUANTITIES)
    b.add_argument("--target", choices=BOUND_QUANTITIES, help="same as the positional quantity")
    b.add_argument("--q", type=int, help="field size (blocking)")
    b.add_argument("--r", "--k", dest="r", type=int)
    b.add_argument("--s", type=int)
    b.add_argument("--kind", choices=construct.KINDS)
    b.add_argument("--n", type=int)
    b.add_argument("--k-dim", dest="k", type=int, help="code dimension (rho)")
    b.add_argument("--d", type=int)
    b.add_argument("--code")
    b.add_argument("--matrix")
    b.add_argument("--exact", action="store_true", help="include exact values where computable")
    b.add_argument("--kmax", type=int)
    b.add_argument("--smax", type=int)
    b.add_argument("--exact-kmax", type=int, default=4)
    b.add_argument("--no-exact", action="store_true")

    t = sub.add_parser("stopping", parents=[common], help="stopping distance of a parity-check matrix")
    t.add_argument("--matrix")
    t.add_argument("--code")
    t.add_argument("--construct", action="store_true", help="also build a greedy redundant matrix")
    t.add_argument("--out")

    m = sub.add_parser("simulate", parents=[common], help="peeling on the erasure channel")
    m.add_argument("--code")
    m.add_argument("--matrix")
    m.add_argument("--p", type=float)
    m.add_argument("--trials", type=int, default=10000)
    m.add_argument("--set", help="generic set A: adds the rows aH")
    m.add_argument("--greedy", action="store_true", help="add the greedy redundant matrix")
    m.add_argument("--all-dual", action="store_true", help="add all nonzero dual codewords")

    g = sub.add_parser("table", parents=[common], help="greedy sizes against their bounds")
    g.add_argument("--kind", choices=TABLE_KINDS)
    g.add_argument("--rmax", type=int)
    g.add_argument("--smax", type=int)
    return p


def _emit(args, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    if args.format == "json":
        print(text)
    elif args.format == "text" and args.command == "bounds" and "rows" in report["results"]:
        print(_table_text(report["results"]["rows"]))
    elif args.format == "csv":
        res = report["results"]
        if args.command == "bounds" and "rows" in res:
            sys.stdout.write(_csv(_table_summary(res["rows"])))
            return _sidecar(args, text)
        if args.command == "simulate":
            base = {k: res[k] for k in ("code", "p", "trials", "seed")}
            rows = [{**base, **s, "ml_failures": res["ml_failures"]} for s in res["per_strategy"]]
            sys.stdout.write(_csv(rows))
            return _sidecar(args, text)
        rows = res.get("rows") or res.get("per_strategy") or [
            {k: v for k, v in res.items() if not isinstance(v, dict)}]
        sys.stdout.write(_csv(rows))
    else:
        print(_text(report["results"]))
    _sidecar(args, text)


def _sidecar(args, text: str) -> None:
    sidecar = args.report or (args.out + ".json" if getattr(args, "out", None) else None)
    if sidecar:
        Path(sidecar).write_text(text + "\n")


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.threads:
        import numba
        numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))
    inp = Inputs()
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("format", "report", "threads")}
    start = time.perf_counter()
    try:
        code, results, seed = COMMANDS[args.command](args, inp)
    except UsageError as e:
        print(f"genset: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DataError) as e:
        print(f"genset: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as e:
        print(f"genset: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except GensetError as e:
        print(f"genset: internal check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    if seed is None:
        seed = args.seed
    report = make_report(["genset", *argv], inp, params, results, seed, time.perf_counter() - start)
    _emit(args, report)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
