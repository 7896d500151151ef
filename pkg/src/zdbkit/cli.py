"""zdbkit command line.

Exit codes: 0 success, 1 reproduction mismatch, 2 bad arguments or schema
error, 3 precondition failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from zdbkit.construct import ConstructionParams
from zdbkit.cwc import build_cwc, code_report
from zdbkit.cyclotomy import build_cosets
from zdbkit.exceptions import PreconditionError, VerificationError
from zdbkit.fhs import berlekamp_massey, expansion_lc, lc_bounds_check, peng_fan_bounds, zdb_set_to_fhs
from zdbkit.field import build_field
from zdbkit.recipes import BUILTIN, builtin_recipe, recipe_kind, reproduce, run_recipe, validate_recipe
from zdbkit.zdb import (
    PdfFamily,
    coincidence_counts,
    difference_spectrum,
    is_zdb,
    lambda_bound_report,
    preimage_size_bounds,
    to_pdf,
    verify_pdf,
)

EXIT_OK, EXIT_MISMATCH, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_VERIFICATION = 0, 1, 2, 3, 4


def _num(x):
    """Exact numbers for output: integers stay integers, fractions become 'a/b'."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def _emit(report: dict, fmt: str) -> None:
    report = _num(report)
    if fmt == "json":
        print(json.dumps(report, indent=2))
        return
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["key", "value"])
    for k, v in report.items():
        w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
    sys.stdout.write(buf.getvalue())


def _load_recipe(args) -> dict:
    if args.recipe in BUILTIN and not Path(args.recipe).exists():
        return builtin_recipe(args.recipe)
    with open(args.recipe) as fh:
        return json.load(fh)


def _write(out_dir: Path | None, name: str, text: str) -> None:
    if out_dir is None:
        return
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text)


def _verify_functions(params: ConstructionParams, fs, threads: int) -> dict:
    """Exhaustive check of every claimed parameter; raises VerificationError on mismatch."""
    claimed = fs[0].provenance.get("claimed")
    lams = [is_zdb(f) for f in fs]
    for i, chk in enumerate(lams):
        if not chk:
            raise VerificationError(f"member {i} is not ZDB: N_0({chk.witness[0]}) = {chk.witness[1]}, N_0(1) = {chk.reference}")
    if claimed is not None:
        got = (fs[0].n, fs[0].ell, lams[0].lam)
        if tuple(claimed) != got or any(c.lam != claimed[2] for c in lams):
            raise VerificationError(f"claimed (n, ell, lambda) = {tuple(claimed)}, observed {got}")

    def cross(pair):
        i, j = pair
        return i, j, set(np.unique(coincidence_counts(fs[i], fs[j])).tolist())

    pairs = [(i, j) for i in range(len(fs)) for j in range(len(fs)) if i != j]
    with ThreadPoolExecutor(max(1, threads)) as pool:
        crosses = list(pool.map(cross, pairs))
    for i, j, vals in crosses:
        if vals != {lams[0].lam}:
            raise VerificationError(f"cross zero-counts of ({i}, {j}) take values {sorted(vals)}, not {{{lams[0].lam}}}")
    return {"n": fs[0].n, "ell": fs[0].ell, "lambda": lams[0].lam, "members": len(fs), "claimed": claimed, "verified": True}


def _bounds_report(n: int, ell: int, lam: int | None = None, N: int | None = None) -> dict:
    out: dict = {"n": n, "ell": ell}
    if ell <= n:
        lb = lambda_bound_report(n, ell)
        out["lambda_lower_bound"] = lb.value
        out["lambda_lower_bound_exact"] = lb.exact
        out["lempel_greenberger"] = lb.value
    if lam is not None:
        pb = preimage_size_bounds(n, ell, lam)
        out["lambda"] = lam
        out["preimage_delta"] = pb.delta
        out["preimage_integer_range"] = list(pb.integer_range())
        out["preimage_special"] = pb.special
    if N is not None:
        out["N"] = N
        out["peng_fan"] = list(peng_fan_bounds(n, N, ell))
    return out


def cmd_field_build(args) -> int:
    modulus = [int(c) for c in args.modulus.split(",")] if args.modulus else None
    F = build_field(args.p, args.s, args.k, modulus)
    report = F.to_dict()
    if args.e is not None:
        report["cosets"] = build_cosets(F, args.e, args.r).to_dict()
    _emit(report, args.format)
    _write(args.out_dir, "field.json", json.dumps(report))
    return EXIT_OK


def _artifacts(params, fs, outputs, out_dir, threads, seed) -> dict:
    summary: dict = {}
    if "spectrum" in outputs:
        for i, f in enumerate(fs):
            spec = difference_spectrum(f, n_jobs=threads)
            _write(out_dir, f"spectrum_{i}.csv", spec.to_csv())
            summary.setdefault("spectrum_value_sets", []).append(sorted(spec.nonzero_value_set()))
    if "pdf" in outputs:
        for i, f in enumerate(fs):
            pdf = to_pdf(f)
            _write(out_dir, f"pdf_{i}.json", pdf.to_json())
            summary.setdefault("pdf_lambda", []).append(verify_pdf(pdf).lam)
    if "fhs" in outputs:
        fset, rep = zdb_set_to_fhs(fs, n_jobs=threads)
        _write(out_dir, "fhs.txt", fset.to_text())
        _write(out_dir, "correlation.csv", fset.correlation_csv())
        _write(out_dir, "fhs_report.json", json.dumps(rep.to_dict()))
        summary["fhs"] = rep.to_dict()
    if "lc" in outputs:
        rep = lc_bounds_check(fs, params)
        reports = [berlekamp_massey(f.field_values(), params.field).to_dict() | {"index_set_size": expansion_lc(f.field_values(), params.field).index_set_size} for f in fs]
        _write(out_dir, "lc.json", json.dumps(reports))
        summary["lc"] = {"lcs": list(rep.lcs), "m": rep.m, "l": rep.l, "predicted": rep.predicted, "extreme": rep.extreme}
    if "cwc" in outputs:
        code = build_cwc(fs)
        rep = code_report(code, n_jobs=threads, seed=seed)
        _write(out_dir, "code.csv", code.to_csv())
        _write(out_dir, "code_report.json", rep.to_json())
        summary["cwc"] = rep.to_dict()
    if "bounds" in outputs:
        f = fs[0]
        lam = is_zdb(f).lam
        summary["bounds"] = _bounds_report(f.n, f.ell, lam, len(fs))
        _write(out_dir, "bounds.json", json.dumps(_num(summary["bounds"])))
    return summary


def cmd_construct(args, outputs=None) -> int:
    recipe = _load_recipe(args)
    params, fs = run_recipe(recipe, force=args.force)
    outputs = outputs or recipe.get("outputs") or ["spectrum", "bounds"]
    report: dict = {"recipe": params.to_recipe(recipe_kind(recipe))}
    _write(args.out_dir, "recipe.json", json.dumps(report["recipe"]))
    if not args.no_verify:
        report["verification"] = _verify_functions(params, fs, args.threads)
    report.update(_artifacts(params, fs, outputs, args.out_dir, args.threads, args.seed))
    _emit(report, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.recipe) as fh:
        data = json.load(fh)
    if "blocks" in data:
        pdf = PdfFamily.from_dict(data)
        chk = verify_pdf(pdf)
        report = {"n": pdf.n, "lambda": chk.lam, "witness": chk.witness}
        _emit(report, args.format)
        if not chk or (pdf.lam is not None and pdf.lam != chk.lam):
            raise VerificationError(f"PDF check gives lambda {chk.lam}, file states {pdf.lam}")
        return EXIT_OK
    validate_recipe(data)
    params, fs = run_recipe(data, force=args.force)
    _emit(_verify_functions(params, fs, args.threads), args.format)
    return EXIT_OK


def cmd_bounds(args) -> int:
    _emit(_bounds_report(args.n, args.ell, args.lam, args.N), args.format)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    checks = reproduce(args.example)
    report = {
        "example": args.example,
        "checks": [{"quantity": c.quantity, "expected": _show(c.expected), "observed": _show(c.observed), "ok": c.ok} for c in checks],
        "pass": all(c.ok for c in checks),
    }
    _emit(report, args.format)
    for c in checks:
        if not c.ok:
            print(f"mismatch: {c.quantity}: expected {c.expected}, observed {c.observed}", file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_MISMATCH


def _show(x):
    if isinstance(x, set):
        return sorted(x)
    if isinstance(x, dict):
        return {str(k): v for k, v in x.items()}
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out-dir", type=Path, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)

    recipe = argparse.ArgumentParser(add_help=False)
    recipe.add_argument("--recipe", required=True, help="recipe JSON file or a built-in name: " + ", ".join(BUILTIN))
    recipe.add_argument("--force", action="store_true", help="build even when the sufficient conditions fail")
    recipe.add_argument("--no-verify", action="store_true")

    parser = argparse.ArgumentParser(prog="zdbkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    field = sub.add_parser("field", help="finite field tables")
    fsub = field.add_subparsers(dest="field_command", required=True)
    fb = fsub.add_parser("build", parents=[common], help="build GF(p^s) over GF(p^k) and print its spec")
    fb.add_argument("--p", type=int, required=True)
    fb.add_argument("--s", type=int, required=True)
    fb.add_argument("--k", type=int, default=1)
    fb.add_argument("--modulus", help="comma-separated coefficients, constant term first")
    fb.add_argument("--e", type=int, help="also dump the cyclotomic classes for this e")
    fb.add_argument("--r", type=int, default=1)
    fb.set_defaults(func=cmd_field_build)

    c = sub.add_parser("construct", parents=[common, recipe], help="construct, verify and export")
    c.set_defaults(func=cmd_construct)
    v = sub.add_parser("verify", parents=[common, recipe], help="verify a recipe or a PDF JSON file")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", parents=[common], help="lambda, preimage and Peng-Fan bounds")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--lam", type=int)
    b.add_argument("--N", type=int)
    b.set_defaults(func=cmd_bounds)

    for name, outputs, text in (
        ("fhs", ["fhs"], "FH sequence set and correlation report"),
        ("lc", ["lc"], "linear complexity by both engines"),
        ("cwc", ["cwc"], "constant-weight code and FVS bound"),
    ):
        p = sub.add_parser(name, parents=[common, recipe], help=text)
        p.set_defaults(func=lambda a, o=outputs: cmd_construct(a, o))

    r = sub.add_parser("reproduce", parents=[common], help="rerun a worked example and compare every number")
    r.add_argument("example", choices=["ex1", "ex2", "ex3"])
    r.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "recipe"
        print(f"schema error at {where}: {exc.message}", file=sys.stderr)
        return EXIT_SCHEMA
    except (json.JSONDecodeError, KeyError, OSError) as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
