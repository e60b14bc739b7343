"""framelab command line.

Every subcommand prints one JSON report (sorted keys) and exits with
0 when the property holds or the construction succeeded, 1 when it fails
(a witness is included), 2 on usage or input errors and 3 when the answer
rests on a finite search budget.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import numerics as nm
from .augmentation import augment_to_cp, complete_hyperplane_family, direct_sum_augment
from .certificates import encode
from .errors import CandidateBudgetExhausted, ConstructionBudgetExhausted, FramelabError, PremiseFailed
from .formats import fixture_names, load_fixture, parse_input
from .frame_model import (
    SubspaceFamily,
    VectorFamily,
    dual_riesz_basis,
    frame_bounds,
    is_parseval,
    riesz_bounds,
)
from .naimark import naimark_complement, verify_naimark_pair
from .numerics import ToleranceConfig
from .phase_retrieval import (
    apply_invertible,
    johnsex_measurements,
    norm_retrieval_subspaces_real,
    norm_retrieval_vectors_real,
    pr_subspaces_real,
    pr_vectors_complex_necessary,
    pr_vectors_real,
    reconstruct_johnsex,
)
from .riesz_projections import construct_full_spark_projection, full_spark_projection_check, range_family
from .spark_cp import (
    blocking_partition,
    check_complement_property,
    complement_deficiency,
    cp_augmentation_number,
    hyperplane_partition_scan,
    is_full_spark,
    smallest_dependent_subset,
    spark,
)

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_BUDGETED = 0, 1, 2, 3


class UsageError(FramelabError):
    pass


def _exit_for(decision):
    if decision in ("PASS", "PASS_exact", "OK"):
        return EXIT_HOLDS
    if decision in ("FAIL", "PREMISE_FAILED"):
        return EXIT_FAILS
    return EXIT_BUDGETED


def _vectors(parsed):
    if not isinstance(parsed.obj, VectorFamily):
        raise UsageError("this command needs a vector family")
    return parsed.obj


def _family_or_union(parsed):
    if isinstance(parsed.obj, SubspaceFamily):
        return parsed.obj.onb_union()[0]
    return _vectors(parsed)


def _mode_of(obj):
    return "exact" if getattr(obj, "exact", False) else "float"


def cmd_analyze(args, parsed, tol):
    f = _vectors(parsed)
    bounds = frame_bounds(f, tol)
    result = {"M": f.M, "N": f.N, "field": f.field, "rank": nm.rank(f.vectors, tol),
              "frame": bounds.is_frame, "lower_bound": bounds.lower, "upper_bound": bounds.upper,
              "parseval": is_parseval(f, tol)}
    if f.M == f.N and bounds.is_frame:
        lo, hi = riesz_bounds(f, tol)
        result["riesz_bounds"] = [lo, hi]
        result["dual_basis"] = dual_riesz_basis(f, tol).vectors
    return "OK", result, None


def cmd_spark(args, parsed, tol):
    f = _vectors(parsed)
    s = spark(f, tol)
    full = is_full_spark(f, tol) if f.M >= f.N else False
    witness = None if full else {"dependent_subset": list(smallest_dependent_subset(f, tol) or [])}
    return ("PASS" if full else "FAIL"), {"spark": s, "full_spark": full, "M": f.M, "N": f.N}, witness


def cmd_cp(args, parsed, tol):
    f = _family_or_union(parsed)
    cert = check_complement_property(f, tol, args.force)
    return cert.decision, {"certificate": cert}, cert.witness


def cmd_deficiency(args, parsed, tol):
    f = _vectors(parsed)
    k, witness = complement_deficiency(f, tol, args.force)
    result = {"k": k, "vectors_needed": cp_augmentation_number(f, tol, args.force)}
    return ("PASS" if k == 0 else "FAIL"), result, None if k == 0 else witness


def cmd_pr_vectors(args, parsed, tol):
    f = _vectors(parsed)
    cert = pr_vectors_complex_necessary(f, tol, args.force) if f.field == "complex" else pr_vectors_real(f, tol, args.force)
    return cert.decision, {"certificate": cert}, cert.witness


def _subspaces(args, parsed):
    sf = parsed.obj
    if not isinstance(sf, SubspaceFamily):
        raise UsageError("this command needs a subspace family")
    if args.operator:
        op = parse_input(args.operator).operator
        if op is None:
            raise UsageError("operator file has no 'operator' matrix")
        sf = apply_invertible(sf, VectorFamily.from_rows(op, dim=sf.N).vectors)
    return sf


def cmd_pr_subspaces(args, parsed, tol):
    sf = _subspaces(args, parsed)
    cert = pr_subspaces_real(sf, budget=args.budget, seed=args.seed, tol=tol, force=args.force)
    return cert.decision, {"certificate": cert}, cert.witness


def cmd_norm_retrieval(args, parsed, tol):
    if isinstance(parsed.obj, SubspaceFamily):
        cert = norm_retrieval_subspaces_real(_subspaces(args, parsed), budget=args.budget, seed=args.seed, tol=tol)
    else:
        cert = norm_retrieval_vectors_real(_vectors(parsed), tol, args.force)
    return cert.decision, {"certificate": cert}, cert.witness


def cmd_naimark(args, parsed, tol):
    f = _vectors(parsed)
    rng = np.random.default_rng(args.seed) if args.random_completion else None
    g = naimark_complement(f, tol, rng)
    cert = verify_naimark_pair(f, g, tol)
    result = {"complement": g.vectors, "complement_dim": g.N, "zero_complement": g.zero_complement,
              "notes": list(g.notes), "verification": cert}
    return cert.decision, result, cert.witness


def cmd_augment(args, parsed, tol):
    f = _vectors(parsed)
    added, trace = augment_to_cp(f, seed=args.seed, bound=args.bound, budget=args.budget_draws, tol=tol,
                                 force=args.force)
    return "PASS", {"added": added.vectors, "trace": trace}, None


def cmd_direct_sum(args, parsed, tol):
    f1 = _vectors(parsed)
    other = parse_input(args.second, args.mode)
    f2 = _vectors(other)
    added, trace = direct_sum_augment(f1, f2, seed=args.seed, bound=args.bound, budget=args.budget_draws, tol=tol)
    return "PASS", {"added": added.vectors, "trace": trace, "second_input_digest": other.digest}, None


def cmd_fsp_project(args, parsed, tol):
    f = _vectors(parsed)
    w = construct_full_spark_projection(f, args.rank, seed=args.seed, tol=tol)
    check = full_spark_projection_check(w, f, "riesz", tol)
    result = {"rank": w.dim, "projector": w.projector, "check": check}
    if 2 * args.rank - 1 <= f.M and 0 < args.rank < f.M:
        result["range_phase_retrieval"] = pr_vectors_real(range_family(w, f, tol), tol).decision
    return check.decision, result, check.witness


def cmd_hyperplanes(args, parsed, tol):
    obj = parsed.obj
    scan = hyperplane_partition_scan(obj, tol, args.force)
    blocking = blocking_partition(obj, tol, args.force)
    result = {"partitions": scan.partitions, "all_hyperplanes": scan.all_hyperplanes,
              "cp_blocked_forever": blocking is not None, "provenance": scan.provenance}
    if args.complete and isinstance(obj, VectorFamily) and scan.all_hyperplanes:
        f0, info = complete_hyperplane_family(obj, seed=args.seed, tol=tol)
        result["completion"] = {"vector": f0, **info}
    return ("PASS" if scan.all_hyperplanes else "FAIL"), result, blocking


def cmd_reconstruct_demo(args, parsed, tol):
    rng = np.random.default_rng(args.seed)
    xs = [np.array(args.x, dtype=float)] if args.x else list(rng.standard_normal((args.samples, 3)))
    worst = 0.0
    worst_case = None
    rows = []
    for x in xs:
        norms = johnsex_measurements(x)
        xh, branch = reconstruct_johnsex(norms, tol)
        err = float(min(np.linalg.norm(xh - x), np.linalg.norm(xh + x)))
        record = {"x": x, "squared_norms": norms, "x_hat": xh, "branch": branch, "error": err}
        if worst_case is None or err > worst:
            worst, worst_case = err, record
        if len(rows) < 5:
            rows.append(record)
    ok = worst <= 1e-8
    return ("PASS" if ok else "FAIL"), {"samples": len(xs), "max_error": worst, "examples": rows}, \
        None if ok else worst_case


# expected outcomes for the bundled fixtures
SUITE = [
    ("cp", "johnsex5", "FAIL"),
    ("pr-vectors", "full_spark_3in2", "PASS_exact"),
    ("pr-vectors", "six_in_r3", "PASS_exact"),
    ("pr-vectors", "two_in_r2", "FAIL"),
    ("spark", "six_in_r3", "FAIL"),
    ("hyperplanes", "johnsex5", "PASS"),
    ("pr-subspaces", "johnsex_subspaces", "PASS_budgeted"),
    ("pr-subspaces+op", "johnsex_subspaces", "FAIL"),
    ("norm-retrieval", "johnsex_perp", "PASS_budgeted"),
    ("pr-subspaces", "johnsex_perp", "PASS_budgeted"),
    ("augment", "two_in_r2", "PASS"),
]


def cmd_fixture_suite(args, parsed, tol):
    rows = []
    all_ok = True
    for command, fixture, expected in SUITE:
        sub = _parser().parse_args([command.replace("+op", ""), fixture, "--seed", str(args.seed),
                                    "--budget", str(args.budget)]
                                   + (["--operator", "johnsex2_operator"] if command.endswith("+op") else []))
        sub_parsed = load_fixture(fixture, None)
        decision, _, _ = COMMANDS[sub.command](sub, sub_parsed, tol)
        ok = decision == expected
        all_ok &= ok
        rows.append({"command": command, "fixture": fixture, "expected": expected, "decision": decision, "ok": ok})
    return ("PASS" if all_ok else "FAIL"), {"checks": rows, "fixtures": fixture_names()}, None


COMMANDS = {
    "analyze": cmd_analyze,
    "spark": cmd_spark,
    "cp": cmd_cp,
    "deficiency": cmd_deficiency,
    "pr-vectors": cmd_pr_vectors,
    "pr-subspaces": cmd_pr_subspaces,
    "norm-retrieval": cmd_norm_retrieval,
    "naimark": cmd_naimark,
    "augment": cmd_augment,
    "direct-sum": cmd_direct_sum,
    "fsp-project": cmd_fsp_project,
    "hyperplanes": cmd_hyperplanes,
    "reconstruct-demo": cmd_reconstruct_demo,
    "paper-suite": cmd_fixture_suite,
}

NO_INPUT = {"reconstruct-demo", "paper-suite"}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact", help="force exact rationals")
    mode.add_argument("--float", dest="mode", action="store_const", const="float", help="force floating point")
    common.add_argument("--tol", type=float, default=None, help="rank tolerance (ortho 0.1x, witness 10x)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=200, help="random starts for budgeted searches")
    common.add_argument("--force", action="store_true", help="allow exhaustive scans over more than 24 vectors")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="pretty", action="store_false", help="compact output (default)")
    out.add_argument("--pretty", dest="pretty", action="store_true", help="indented output")
    common.set_defaults(pretty=False)
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    parser = argparse.ArgumentParser(prog="framelab", description="Certify finite-frame properties.")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = subs.add_parser(name, parents=[common])
        if name not in NO_INPUT:
            sp.add_argument("input", help="JSON or text file, '-' for stdin, or a bundled fixture name")
        if name in ("pr-subspaces", "norm-retrieval"):
            sp.add_argument("--operator", help="file with an 'operator' matrix applied to the subspaces first")
        if name in ("augment", "direct-sum"):
            sp.add_argument("--bound", type=int, default=10, help="candidate entries drawn from [-B, B]")
            sp.add_argument("--budget-draws", type=int, default=1000, help="candidate draws per round")
        if name == "direct-sum":
            sp.add_argument("second", help="second family")
        if name == "naimark":
            sp.add_argument("--random-completion", action="store_true")
        if name == "fsp-project":
            sp.add_argument("--rank", type=int, required=True)
        if name == "hyperplanes":
            sp.add_argument("--complete", action="store_true", help="also construct a completing vector")
        if name == "reconstruct-demo":
            sp.add_argument("--x", type=float, nargs=3)
            sp.add_argument("--samples", type=int, default=1000)
    return parser


def _emit(report, pretty, stream):
    text = json.dumps(encode(report), sort_keys=True, indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"))
    stream.write(text + "\n")


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    report = {"command": args.command, "seed": args.seed}
    start = time.perf_counter()
    try:
        tol = ToleranceConfig.from_rank_tol(args.tol) if args.tol is not None else ToleranceConfig()
        if args.command in NO_INPUT:
            parsed = None
        else:
            parsed = parse_input(args.input, args.mode)
            report.update(input=parsed.canonical, input_digest=parsed.digest, arithmetic_mode=_mode_of(parsed.obj))
        decision, result, witness = COMMANDS[args.command](args, parsed, tol)
        code = _exit_for(decision)
    except PremiseFailed as exc:
        decision, result, witness, code = "PREMISE_FAILED", {"error": str(exc)}, exc.partition, EXIT_FAILS
    except (CandidateBudgetExhausted, ConstructionBudgetExhausted) as exc:
        decision, result, witness, code = "BUDGET_EXHAUSTED", {"error": str(exc)}, None, EXIT_BUDGETED
    except (FramelabError, ValueError, OSError) as exc:
        decision, result, witness, code = "ERROR", {"error": f"{type(exc).__name__}: {exc}"}, None, EXIT_USAGE
    report.update(decision=decision, result=result, witness=witness, exit_code=code)
    if args.timing:
        report["timing_seconds"] = time.perf_counter() - start
    _emit(report, args.pretty, stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
