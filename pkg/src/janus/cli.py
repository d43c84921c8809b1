"""Command-line entry point: build complexes, run verification suites, emit reports.

Exit status is 0 when every check passes, 1 when a verification fails and 2
for invalid arguments.  ``JANUS_WORKERS`` sets the size of the worker pool
used by ``verify``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from . import chiral, classical, multivar
from .complexes import (
    DSquaredError,
    GradedComplex,
    StructuralError,
    check_d_squared,
    cohomology,
    dumps,
    verify_chain_map,
)
from .superpoly import DomainError, format_poly, generating_function, parse_poly

BOUNDS = {"weight": 12, "window": 64, "vars": 4, "m_max": 8, "n": 64}
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like A..B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _join_negative_windows(argv: Sequence[str]) -> list[str]:
    # "--window -20..20" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--window":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--window={nxt}")
        else:
            out.append(tok)
    return out


def _bound(args, name: str, value: int) -> None:
    if not args.force and abs(value) > BOUNDS[name]:
        raise UsageError(f"{name} {value} exceeds the default bound {BOUNDS[name]}; pass --force to run anyway")


# ---------------------------------------------------------------------------
# reports for a single complex


def complex_report(cx: GradedComplex, representatives: bool = True, emit: bool = False) -> dict:
    d2 = check_d_squared(cx)
    out = {
        "window": [cx.lo, cx.hi],
        "edge_flags": {"left_closed": cx.left_closed, "right_closed": cx.right_closed},
        "trusted_degrees": cx.trusted_degrees(),
        "dims": {str(i): d for i, d in cx.dims().items()},
        "d_squared_zero": d2.passed,
    }
    if cx.meta:
        out["meta"] = {k: cx.meta[k] for k in sorted(cx.meta)}
    if d2.passed:
        out["cohomology"] = cohomology(cx, representatives=representatives).to_json()
    if emit:
        out["complex"] = cx.to_json()
    return out


def _text(report: dict, indent: int = 0) -> str:
    pad = " " * indent
    lines = []
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 2))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(item, indent + 2) for item in v)
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def _csv_dims(dims: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "dim"])
    for k in sorted(dims, key=int):
        w.writerow([k, dims[k]])
    return buf.getvalue()


def emit(args, report: dict, table: dict | None = None) -> None:
    if args.format == "json":
        text = dumps(report) + "\n"
    elif args.format == "csv":
        if table is None:
            raise UsageError("csv output is only available for dimension tables")
        text = _csv_dims(table)
    else:
        text = _text(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_complex(args, cx: GradedComplex) -> int:
    report = complex_report(cx, emit=args.emit_complex)
    table = report["dims"] if args.table == "terms" else report.get("cohomology", {}).get("dims", {})
    emit(args, report, table)
    return EXIT_OK if report["d_squared_zero"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# build commands


def cmd_spheres(args) -> int:
    if args.n is not None:
        _bound(args, "n", args.n)
        cx = classical.sphere_complex(args.n)
    else:
        if args.window is None:
            raise UsageError("--infinite needs --window A..B")
        for v in args.window:
            _bound(args, "window", v)
        cx = classical.sphere_complex(side=args.infinite, window=args.window)
    return _emit_complex(args, cx)


def cmd_koszul(args) -> int:
    for v in args.window:
        _bound(args, "window", v)
    return _emit_complex(args, classical.koszul_complex(args.variant, args.window))


def cmd_chiral(args) -> int:
    _bound(args, "weight", args.weight)
    _bound(args, "window", args.zero_window)
    _bound(args, "vars", args.vars)
    cx = chiral.build_weight_complex(args.variant, args.weight, args.zero_window, args.vars)
    return _emit_complex(args, cx)


def cmd_multivar(args) -> int:
    _bound(args, "weight", args.weight)
    _bound(args, "window", args.zero_window)
    _bound(args, "vars", args.vars)
    cx = multivar.build_multivar_complex(args.variant, args.weight, args.zero_window, args.vars)
    return _emit_complex(args, cx)


def cmd_multivar_janus(args) -> int:
    _bound(args, "weight", args.weight)
    _bound(args, "window", args.zero_window)
    _bound(args, "vars", args.vars)
    return _emit_complex(args, multivar.build_multivar_janus(args.weight, args.zero_window, args.vars))


def cmd_local_cohomology(args) -> int:
    _bound(args, "vars", args.vars)
    _bound(args, "m_max", args.m_max)
    _bound(args, "weight", args.weight)
    _bound(args, "window", args.zero_window)
    rep = multivar.local_cohomology_check(args.vars, args.m_max, args.weight, args.zero_window,
                                          regular=not args.non_regular)
    report = rep.to_json()
    top = {",".join(map(str, t)): ds.get(args.vars, 0) for t, ds in rep.dims.items()}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["exponents", "top_dim"])
        for k in sorted(top):
            w.writerow([k, top[k]])
        _write(args, buf.getvalue())
    else:
        emit(args, report)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_load(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        data = json.load(fh)
    # accept a bare complex or a report made with --emit-complex
    cx = GradedComplex.from_json(data.get("complex", data))
    report = complex_report(cx)
    report["round_trip_identical"] = cx.dumps() == GradedComplex.loads(cx.dumps()).dumps()
    emit(args, report, report["dims"])
    return EXIT_OK if report["round_trip_identical"] else EXIT_FAIL


def cmd_apply(args) -> int:
    op = {"d": chiral.d_ch, "g1": chiral.g1}[args.op]
    p = parse_poly(args.poly)
    out = op(p)
    report = {"input": format_poly(p), "op": args.op, "output": format_poly(out)}
    if args.format == "text":
        _write(args, report["output"] + "\n")
    else:
        emit(args, report)
    return EXIT_OK


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verification suites; each check is a top-level function so it can be
# shipped to worker processes


def _result(name: str, claim: str, passed: bool, detail) -> dict:
    return {"check": name, "claim": claim, "passed": bool(passed), "detail": detail}


def check_sphere(n: int) -> dict:
    h = cohomology(classical.sphere_complex(n)).dims
    expected = {i: 1 if i in (0, n) else 0 for i in range(n + 1)}
    return _result(f"sphere S^{n}", "H^0 = H^n = 1", dict(h) == expected,
                   {"H": {str(i): d for i, d in h.items()}})


def check_matrix_identities() -> dict:
    ids = classical.matrix_identities()
    return _result("matrix identities", "A^2 = 0, B^2 = 0, AP = PB", all(ids.values()), ids)


def check_acyclic_window(kind: str, W: int) -> dict:
    if kind == "sphere":
        cx = classical.sphere_complex(side="both", window=(-W, W))
    else:
        cx = classical.koszul_complex(kind, (-W, W))
    h = cohomology(cx)
    return _result(f"{kind} on [-{W},{W}]", "acyclic in trusted degrees", h.is_acyclic(),
                   {"nonzero": {str(i): d for i, d in h.nonzero().items()}})


def check_iso(kind: str, W: int) -> dict:
    if kind in ("poly", "laurent"):
        f = classical.iso_localized(kind, (0, W) if kind == "poly" else (-W, W))
        name = f"localized Koszul iso ({kind})"
    else:
        window = {"plus": (0, W), "minus": (-W, -1), "both": (-W, W)}[kind]
        f = classical.sphere_koszul_basis_change(kind, window)
        name = f"sphere/Koszul basis change ({kind})"
    rep = verify_chain_map(f)
    return _result(name, "chain isomorphism", rep.passed and rep.iso,
                   {"first_failure": rep.first_failure, "singular": list(rep.singular_degrees)})


def check_dim_vn(N: int) -> dict:
    got = chiral.dim_vn(N)
    want = generating_function(N)[N]
    return _result(f"dim V_{N}", "matches the product generating function", got == want,
                   {"enumerated": got, "series": want})


def check_homotopy(N: int) -> dict:
    cert = chiral.verify_homotopy(N)
    return _result(f"homotopy on V_{N}", "d·g1 + g1·d = N·Id and V_N acyclic",
                   cert.passed and cert.acyclic is not False, cert.to_json())


def check_weight_zero(variant: str, M: int) -> dict:
    cx = chiral.build_weight_complex(variant, 0, M)
    h = cohomology(cx, representatives=True)
    expect = {"plain": ({0: 1}, "1"), "quotient": ({-1: 1}, "xi[0]*x[0]^-1")}[variant]
    reps = h.to_json().get("representatives", {})
    rep = next(iter(reps.values()), [None])[0]
    ok = h.nonzero() == expect[0] and rep == expect[1]
    return _result(f"weight-0 {variant} cohomology", f"H = {expect[0]} spanned by {expect[1]}", ok,
                   {"nonzero": {str(i): d for i, d in h.nonzero().items()}, "representative": rep})


def check_chiral_janus(N: int, M: int, n_vars: int = 1) -> dict:
    h = cohomology(chiral.build_chiral_janus(N, M, n_vars))
    return _result(f"chiral Janus weight {N}, {n_vars} var(s)", "acyclic in trusted degrees",
                   h.is_acyclic(), {"nonzero": {str(i): d for i, d in h.nonzero().items()}})


def check_tensor(N: int, M: int) -> dict:
    rep = chiral.tensor_decomposition_check(N, M)
    return _result(f"tensor decomposition N={N} M={M}", "weight-N piece = V_N ⊗ weight-0 piece",
                   rep.passed, rep.to_json())


def check_weight_zero_iso(M: int, localized: bool) -> dict:
    rep = verify_chain_map(chiral.weight_zero_iso(M, localized))
    name = "weight-0 localized piece ≅ Laurent Koszul" if localized else "weight-0 piece ≅ Koszul"
    return _result(name, "label bijection is a chain isomorphism", rep.passed and rep.iso,
                   {"first_failure": rep.first_failure})


def check_multivar(variant: str, M: int) -> dict:
    cx = multivar.build_multivar_complex(variant, 0, M, 2)
    h = cohomology(cx, representatives=True)
    expect = {"plain": ({0: 1}, "1"),
              "dual": ({-2: 1}, "xi[1,0]*xi[2,0]*x[1,0]^-1*x[2,0]^-1")}[variant]
    reps = h.to_json().get("representatives", {})
    rep = next(iter(reps.values()), [None])[0]
    ok = h.nonzero() == expect[0] and rep == expect[1]
    return _result(f"two-variable {variant} cohomology", f"H = {expect[0]} spanned by {expect[1]}", ok,
                   {"nonzero": {str(i): d for i, d in h.nonzero().items()}, "representative": rep})


def check_local_cohomology(n_vars: int, m_max: int, M: int, regular: bool = True) -> dict:
    rep = multivar.local_cohomology_check(n_vars, m_max, 0, M, regular=regular)
    if regular:
        return _result(f"local cohomology |I|={n_vars} m<={m_max}", "concentrated in top degree",
                       rep.passed, rep.to_json())
    return _result(f"non-regular control |I|={n_vars}", "concentration fails for the zero sequence",
                   not all(rep.concentration.values()), rep.to_json())


def suite_tasks(suite: str, max_weight: int, max_n: int, window: int) -> list[tuple[Callable, tuple]]:
    tasks: list[tuple[Callable, tuple]] = []
    if suite in ("all", "spheres"):
        tasks += [(check_sphere, (n,)) for n in range(1, max_n + 1)]
        tasks.append((check_matrix_identities, ()))
    if suite in ("all", "koszul"):
        tasks += [(check_acyclic_window, (k, window)) for k in ("sphere", "janus", "loc_laurent")]
        tasks += [(check_iso, (k, window)) for k in ("poly", "laurent", "plus", "minus", "both")]
    if suite in ("all", "chiral"):
        tasks += [(check_dim_vn, (N,)) for N in range(max_weight + 1)]
        tasks += [(check_homotopy, (N,)) for N in range(1, max_weight + 1)]
        tasks += [(check_weight_zero, (v, 8)) for v in ("plain", "quotient")]
        tasks += [(check_chiral_janus, (N, max(6, N))) for N in range(max_weight + 1)]
        tasks += [(check_tensor, (N, 4)) for N in range(1, min(max_weight, 4) + 1)]
        tasks += [(check_weight_zero_iso, (8, loc)) for loc in (False, True)]
    if suite in ("all", "multivar"):
        tasks += [(check_multivar, (v, 4)) for v in ("plain", "dual")]
        tasks += [(check_chiral_janus, (N, N + 2, 2)) for N in range(min(max_weight, 3) + 1)]
        tasks += [(check_local_cohomology, (1, 3, 3)), (check_local_cohomology, (2, 2, 2)),
                  (check_local_cohomology, (1, 2, 2, False))]
    return tasks


def _call(task):
    fn, args = task
    return fn(*args)


def workers() -> int:
    raw = os.environ.get("JANUS_WORKERS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"JANUS_WORKERS must be an integer, got {raw!r}") from None
        if n < 1:
            raise UsageError("JANUS_WORKERS must be >= 1")
        return n
    return os.cpu_count() or 1


def run_suite(tasks: list[tuple[Callable, tuple]], n_workers: int) -> list[dict]:
    if n_workers <= 1 or len(tasks) <= 1:
        results = [_call(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_call, tasks))
    return sorted(results, key=lambda r: (r["check"], r["claim"]))


def cmd_verify(args) -> int:
    _bound(args, "weight", args.max_weight)
    _bound(args, "n", args.max_n)
    _bound(args, "window", args.window_size)
    results = run_suite(suite_tasks(args.suite, args.max_weight, args.max_n, args.window_size), workers())
    failed = [r for r in results if not r["passed"]]
    report = {"suite": args.suite, "passed": not failed, "checks": results}
    if args.format == "text":
        lines = [f"{'PASS' if r['passed'] else 'FAIL'}  [{r['claim']}] {r['check']}" for r in results]
        lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
        _write(args, "\n".join(lines) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "claim", "passed"])
        for r in results:
            w.writerow([r["check"], r["claim"], r["passed"]])
        _write(args, buf.getvalue())
    else:
        emit(args, report)
    if failed:
        print(f"first failure: {failed[0]['check']}: {failed[0]['detail']}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--force", action="store_true", help="lift the default size bounds")

    build = argparse.ArgumentParser(add_help=False)
    build.add_argument("--emit-complex", action="store_true", help="embed the full complex in the report")
    build.add_argument("--table", choices=("terms", "cohomology"), default="terms",
                       help="which dimensions the csv table lists")

    p = argparse.ArgumentParser(prog="janus", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spheres", parents=[common, build], help="sphere cochain complexes")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--infinite", choices=classical.SIDES)
    s.add_argument("--window", type=parse_window)
    s.set_defaults(func=cmd_spheres)

    s = sub.add_parser("koszul", parents=[common, build], help="one-variable Koszul and Janus complexes")
    s.add_argument("--variant", choices=classical.KOSZUL_VARIANTS, required=True)
    s.add_argument("--window", type=parse_window, required=True)
    s.set_defaults(func=cmd_koszul)

    s = sub.add_parser("chiral", parents=[common, build], help="weight-N chiral pieces")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--variant", choices=chiral.VARIANTS, default="plain")
    s.add_argument("--zero-window", type=int, default=6)
    s.add_argument("--vars", type=int, default=1)
    s.set_defaults(func=cmd_chiral)

    s = sub.add_parser("multivar", parents=[common, build], help="plain or dual pieces in several variables")
    s.add_argument("--variant", choices=multivar.MULTIVAR_VARIANTS, default="plain")
    s.add_argument("--weight", type=int, default=0)
    s.add_argument("--zero-window", type=int, default=4)
    s.add_argument("--vars", type=int, default=2)
    s.set_defaults(func=cmd_multivar)

    s = sub.add_parser("multivar-janus", parents=[common, build], help="Janus bouquet in several variables")
    s.add_argument("--weight", type=int, default=0)
    s.add_argument("--zero-window", type=int, default=4)
    s.add_argument("--vars", type=int, default=2)
    s.set_defaults(func=cmd_multivar_janus)

    s = sub.add_parser("local-cohomology", parents=[common], help="Koszul complexes on powers")
    s.add_argument("--vars", type=int, default=1)
    s.add_argument("--m-max", type=int, default=3)
    s.add_argument("--weight", type=int, default=0)
    s.add_argument("--zero-window", type=int, default=3)
    s.add_argument("--non-regular", action="store_true", help="use the zero sequence (negative control)")
    s.set_defaults(func=cmd_local_cohomology)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", choices=("all", "spheres", "koszul", "chiral", "multivar"), default="all")
    s.add_argument("--max-weight", type=int, default=4)
    s.add_argument("--max-n", type=int, default=10)
    s.add_argument("--window-size", type=int, default=20)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("load", parents=[common], help="re-import and re-verify an exported complex")
    s.add_argument("path")
    s.set_defaults(func=cmd_load)

    s = sub.add_parser("apply", parents=[common], help="apply d or g1 to a polynomial")
    s.add_argument("op", choices=("d", "g1"))
    s.add_argument("poly")
    s.set_defaults(func=cmd_apply)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = _join_negative_windows(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError, StructuralError, DomainError) as exc:
        print(f"janus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DSquaredError as exc:
        print(f"janus: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL

