"""Command-line front end.

Every subcommand emits one JSON report::

    {"command", "inputs", "results", "checks": [CheckReport...], "wall_time_ms"}

``wall_time_ms`` is null unless ``--timing`` is given, so identical runs give
byte-identical reports. Exit status: 0 success, 1 a check failed, 2 usage,
input-format or size-cap error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import _backend
from .core import MatrixFormatError, format_matrix, read_matrix
from .reduction import (
    DimacsError,
    LabelCoverInstance,
    assignment_to_labeling,
    build_gadget,
    build_maxvol_instance,
    compute_soundness_parameters,
    find_satisfying_assignment,
    parse_dimacs,
    repeat,
    repeat_labeling,
    sat_to_labelcover,
    validate_3sat5,
)
from .solvers import (
    DEFAULT_CAP,
    EnumerationCapError,
    RankDeficientError,
    exact_select,
    greedy_select,
    local_search,
)
from . import verifier

TERMINAL_ENTRY_LIMIT = 10**6


class UsageError(Exception):
    pass


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_clean(v) for v in items]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_matrix(path):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_cnf(path):
    return parse_dimacs(_read_text(path))


def _load_lc(path):
    try:
        return LabelCoverInstance.from_json(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from None


# --- subcommands ------------------------------------------------------------
# each returns (results, checks, artifact) where artifact is text or None


def cmd_solve(args):
    A = _load_matrix(args.matrix)
    if args.local:
        start = args.start if args.start else None
        rep = local_search(A, args.k, args.mu, start=start)
    elif args.exact:
        rep = exact_select(A, args.k, cap=args.cap)
    else:
        rep = greedy_select(A, args.k)
    return rep.as_dict(), [], None


def cmd_sat2lc(args):
    F = _load_cnf(args.cnf)
    problems = validate_3sat5(F)
    if problems:
        raise UsageError("not a Max-3SAT(5) formula: " + "; ".join(problems))
    L = sat_to_labelcover(F)
    return _lc_summary(L), [], L.to_json()


def cmd_repeat(args):
    L = repeat(_load_lc(args.lc), args.ell)
    return _lc_summary(L) | {"ell": args.ell}, [], L.to_json()


def cmd_lc2maxvol(args):
    inst = build_maxvol_instance(_load_lc(args.lc), args.ell)
    if args.output is None and inst.M * inst.N > TERMINAL_ENTRY_LIMIT:
        raise UsageError(f"{inst.M}x{inst.N} matrix is too large for the terminal; pass --output")
    results = {k: v for k, v in inst.sidecar().items() if k not in ("column_index", "block_index")}
    if args.output is not None:
        sidecar = Path(args.sidecar) if args.sidecar else Path(str(args.output) + ".json")
        sidecar.write_text(inst.sidecar_json())
        results["sidecar"] = str(sidecar)
    return results, [], format_matrix(inst.matrix)


def _lc_summary(L):
    d = {"v_count": L.v_count, "w_count": L.w_count, "sigma_v": L.sigma_v, "sigma_w": L.sigma_w,
         "edges": L.num_edges, "biregular": L.is_biregular()}
    if L.is_biregular():
        d |= {"v_degree": L.v_degree, "w_degree": L.w_degree}
    return d


def _fixture_instance(args):
    F = _load_cnf(args.cnf)
    L = sat_to_labelcover(F)
    if args.assignment:
        assignment = [bool(int(x)) for x in args.assignment]
        if len(assignment) != F.num_vars:
            raise UsageError(f"assignment has {len(assignment)} values for {F.num_vars} variables")
    else:
        assignment = find_satisfying_assignment(F)
    base = repeat(L, args.ell) if args.ell > 1 else L
    inst = build_maxvol_instance(base, args.ell)
    return F, L, inst, assignment


def cmd_verify_gadget(args):
    checks = [verifier.check_gadget(build_gadget(m)) for m in args.m]
    return {"m": args.m}, checks, None


def cmd_verify_completeness(args):
    F, L, inst, assignment = _fixture_instance(args)
    results = {"M": inst.M, "N": inst.N, "k": inst.k, "delta": inst.delta, "ell": args.ell}
    if assignment is None:
        results["satisfiable"] = False
        return results, [verifier.CheckReport("satisfiable", False, 0.0, 1.0, 0.0, {})], None
    sigma = assignment_to_labeling(F, assignment)
    if args.ell > 1:
        sigma = repeat_labeling(L, sigma, args.ell)
    check = verifier.check_completeness(inst, sigma)
    greedy = greedy_select(inst.matrix, inst.k)
    results |= {"satisfiable": True, "assignment": [int(a) for a in assignment],
                "greedy_volume": greedy.volume.volume}
    greedy_check = verifier.CheckReport("greedy_volume_one", abs(greedy.volume.volume - 1) <= verifier.SLACK,
                                        greedy.volume.volume, 1.0, verifier.SLACK, {})
    return results, [check, greedy_check], None


def cmd_verify_unsat(args):
    F, L, inst, _ = _fixture_instance(args)
    src = inst.source
    checks = []
    for e in range(src.num_edges):
        for i in range(src.sigma_v):
            for j in range(src.sigma_w):
                if src.pi[e, i] != j:
                    checks.append(verifier.check_unsat_edge_dot(inst, e, i, j))
    return {"triples": len(checks), "expected": verifier.unsat_edge_dot_value(src.v_degree, src.w_degree)}, checks, None


def cmd_verify_duplicates(args):
    _, _, inst, _ = _fixture_instance(args)
    return {"trials": args.trials}, verifier.duplicate_bound_suite(inst, args.trials, args.seed), None


def cmd_verify_union(args):
    if args.matrix:
        A = _load_matrix(args.matrix)
        return {}, [verifier.check_union_lemma(A, args.P, args.Q)], None
    return {"trials": args.trials}, verifier.union_lemma_suite(args.trials, args.seed), None


def cmd_verify_ratio(args):
    if args.matrix:
        return {}, [verifier.check_greedy_ratio(_load_matrix(args.matrix), args.k, cap=args.cap)], None
    return {"trials": args.trials}, verifier.greedy_ratio_suite(args.trials, args.seed, k=args.k), None


def cmd_verify_gt(args):
    if args.matrix:
        if args.rows is None or args.cols is None:
            raise UsageError("--rows and --cols are required with --matrix")
        return {}, [verifier.check_gt_bound(_load_matrix(args.matrix), args.k, args.rows, args.cols)], None
    return {"trials": args.trials}, verifier.gt_bound_suite(args.trials, args.seed, k=args.k), None


def cmd_verify_pan(args):
    if args.matrix:
        return {}, [verifier.check_pan_bounds(_load_matrix(args.matrix), args.k, args.mu)], None
    return {"trials": args.trials}, verifier.pan_bounds_suite(args.trials, args.seed, k=args.k, mu=args.mu), None


def cmd_verify_soundness(args):
    if args.lc:
        L = _load_lc(args.lc)
        return {}, [verifier.brute_force_soundness_probe(L, args.ell, cap=args.cap)], None
    return {}, verifier.soundness_probe_suite(args.seed), None


def cmd_params(args):
    p = compute_soundness_parameters(args.ell, args.alpha, args.k)
    return p.as_dict(), [], None


def cmd_bench(args):
    rng = np.random.default_rng(args.seed)
    ratios, checks = [], []
    for _ in range(args.trials):
        A = rng.standard_normal((args.rows, args.cols))
        g = greedy_select(A, args.k).volume.volume
        e = exact_select(A, args.k, cap=args.cap).volume.volume
        ratios.append(g / e)
        rhs = e / math.factorial(args.k)
        checks.append(verifier.CheckReport("greedy_ratio", g >= rhs - verifier.EXACT_SLACK, g, rhs,
                                           verifier.EXACT_SLACK, {}))
    r = np.array(ratios)
    results = {
        "trials": args.trials,
        "min_ratio": r.min(),
        "mean_ratio": r.mean(),
        "max_ratio": r.max(),
        "greedy_optimal_fraction": float(np.mean(r >= 1 - 1e-12)),
        "theoretical_floor": 1 / math.factorial(args.k),
    }
    return results, checks, None


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="subset enumeration cap")
    common.add_argument("--backend", choices=_backend.BACKENDS, help="kernel backend")
    common.add_argument("--timing", action="store_true", help="record wall_time_ms in the report")

    p = argparse.ArgumentParser(prog="maxvol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="select k columns of a matrix file")
    s.add_argument("matrix")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--greedy", action="store_true")
    g.add_argument("--exact", action="store_true")
    g.add_argument("--local", action="store_true")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--mu", type=float, default=1.0)
    s.add_argument("--start", type=_int_list, help="starting columns for --local (default: greedy)")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="reduction pipeline stages").add_subparsers(dest="stage", required=True)
    x = r.add_parser("sat2lc", parents=[common], help="DIMACS Max-3SAT(5) -> Label Cover JSON")
    x.add_argument("cnf")
    x.add_argument("--output", help="Label Cover JSON destination (default stdout)")
    x.set_defaults(func=cmd_sat2lc)
    x = r.add_parser("repeat", parents=[common], help="l-fold parallel repetition")
    x.add_argument("lc")
    x.add_argument("--ell", type=int, required=True)
    x.add_argument("--output")
    x.set_defaults(func=cmd_repeat)
    x = r.add_parser("lc2maxvol", parents=[common], help="Label Cover JSON -> MAX-VOL matrix + sidecar")
    x.add_argument("lc")
    x.add_argument("--ell", type=int, required=True, help="gadget order 2^(ell+1)")
    x.add_argument("--output", help="matrix text destination (default stdout)")
    x.add_argument("--sidecar", help="sidecar JSON path (default: <output>.json)")
    x.set_defaults(func=cmd_lc2maxvol)

    v = sub.add_parser("verify", help="claim checks").add_subparsers(dest="check", required=True)
    x = v.add_parser("gadget", parents=[common])
    x.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 5, 6, 7, 8])
    x.set_defaults(func=cmd_verify_gadget)
    for name, func, extra in (
        ("completeness", cmd_verify_completeness, False),
        ("unsat-edges", cmd_verify_unsat, False),
        ("duplicates", cmd_verify_duplicates, True),
    ):
        x = v.add_parser(name, parents=[common])
        x.add_argument("--cnf", required=True)
        x.add_argument("--ell", type=int, default=1)
        x.add_argument("--assignment", help="0/1 string, one digit per variable (default: brute force)")
        if extra:
            x.add_argument("--trials", type=int, default=100)
            x.add_argument("--seed", type=int, default=0)
        x.set_defaults(func=func)
    x = v.add_parser("union", parents=[common])
    x.add_argument("--matrix")
    x.add_argument("--P", type=_int_list, default=[])
    x.add_argument("--Q", type=_int_list, default=[])
    x.add_argument("--trials", type=int, default=200)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_verify_union)
    x = v.add_parser("ratio", parents=[common])
    x.add_argument("--matrix")
    x.add_argument("--k", type=int, default=3)
    x.add_argument("--trials", type=int, default=50)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_verify_ratio)
    x = v.add_parser("gt", parents=[common])
    x.add_argument("--matrix")
    x.add_argument("--k", type=int, default=2)
    x.add_argument("--rows", type=_int_list)
    x.add_argument("--cols", type=_int_list)
    x.add_argument("--trials", type=int, default=25)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_verify_gt)
    x = v.add_parser("pan", parents=[common])
    x.add_argument("--matrix")
    x.add_argument("--k", type=int, default=2)
    x.add_argument("--mu", type=float, default=1.0)
    x.add_argument("--trials", type=int, default=25)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_verify_pan)
    x = v.add_parser("soundness-probe", parents=[common])
    x.add_argument("--lc", help="Label Cover JSON (default: built-in tiny instances)")
    x.add_argument("--ell", type=int, default=1)
    x.add_argument("--seed", type=int, default=0)
    x.set_defaults(func=cmd_verify_soundness)

    x = sub.add_parser("params", parents=[common], help="soundness constants for l, alpha, k")
    x.add_argument("--ell", type=int, required=True)
    x.add_argument("--alpha", type=float, default=0.01)
    x.add_argument("--k", type=int, default=1)
    x.set_defaults(func=cmd_params)

    b = sub.add_parser("bench", help="experiments").add_subparsers(dest="bench", required=True)
    x = b.add_parser("greedy-vs-exact", parents=[common])
    x.add_argument("--trials", type=int, default=50)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--rows", type=int, default=6)
    x.add_argument("--cols", type=int, default=6)
    x.add_argument("--k", type=int, default=3)
    x.set_defaults(func=cmd_bench)
    return p


_SKIP_INPUTS = {"func", "report", "timing"}


def _command_name(args) -> str:
    parts = [args.command]
    for attr in ("stage", "check", "bench"):
        if getattr(args, attr, None):
            parts.append(getattr(args, attr))
    return " ".join(parts)


def _validate(args):
    min_k = 0 if args.command == "params" else 1
    if getattr(args, "k", min_k) < min_k:
        raise UsageError(f"--k must be >= {min_k}")
    if getattr(args, "ell", 1) < 1:
        raise UsageError("--ell must be >= 1")
    if getattr(args, "mu", 1.0) < 1.0:
        raise UsageError("--mu must be >= 1")


def run(args) -> int:
    t0 = time.perf_counter()
    if args.backend:
        with _backend.use_backend(args.backend):
            return _run(args, t0)
    return _run(args, t0)


def _run(args, t0) -> int:
    try:
        _validate(args)
        results, checks, artifact = args.func(args)
    except (UsageError, DimacsError, MatrixFormatError, EnumerationCapError, RankDeficientError,
            ValueError, IndexError) as exc:
        print(f"maxvol: error: {exc}", file=sys.stderr)
        return 2
    elapsed = (time.perf_counter() - t0) * 1000.0
    report = {
        "command": _command_name(args),
        "inputs": {k: v for k, v in sorted(vars(args).items()) if k not in _SKIP_INPUTS},
        "results": results,
        "checks": [c.as_dict() for c in checks],
        "wall_time_ms": round(elapsed, 3) if args.timing else None,
    }
    text = json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"
    out_path = getattr(args, "output", None)
    if artifact is not None and out_path is not None:
        Path(out_path).write_text(artifact)
    if artifact is not None and out_path is None:
        sys.stdout.write(artifact)
        if args.report:
            Path(args.report).write_text(text)
    elif args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"maxvol: check failed: {c.name} lhs={c.lhs!r} rhs={c.rhs!r} {c.context}", file=sys.stderr)
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
