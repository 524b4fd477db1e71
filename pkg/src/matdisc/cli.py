"""Command-line front end: construct, analyze, certify, verify.

Every run prints exactly one JSON report to standard output and a short
human summary to standard error.  Reports are deterministic for a fixed
command line and seed, except for the "timing" block, which callers
comparing runs should strip.

Exit codes: 0 success, 2 bad parameters or unparseable input, 3 I/O
failure, 4 input too large for the exact engine, 5 broken certificate
chain, 6 verification found a hard violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .constructions import block_matrix, block_plan, qpt_graph, tightness_matrix
from .discrepancy import (
    DEFAULT_ITERATIONS,
    disc_exact,
    disc_heuristic,
    disc2_gap_bound,
)
from .errors import (
    BadEpsilonError,
    BadTError,
    CertificateLinkViolatedError,
    EmptyCliqueError,
    EmptyGraphError,
    FamilyTooSmallError,
    FormatError,
    ImproperPartitionError,
    NotBinaryError,
    NotPrimeError,
    NotRegularError,
    TooLargeError,
    ZeroDegreeError,
)
from .graphs import Graph, from_adjacency, read_graph, write_graph
from .linalg import SymmetricMatrix, eig_symmetric, read_matrix, rho_prime, write_matrix
from .quantization import certify_sigma2
from .spectral import chung_alpha_check, thomason_report
from .suite import check_sparse_family, run_suite

_PARAM_ERRORS = (
    FormatError,
    NotBinaryError,
    NotPrimeError,
    BadTError,
    BadEpsilonError,
    ImproperPartitionError,
    EmptyCliqueError,
    EmptyGraphError,
    FamilyTooSmallError,
    NotRegularError,
    ZeroDegreeError,
    ValueError,
)


def _jsonify(obj):
    """Recursively convert numpy containers and scalars to JSON types."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return v
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def _digest(path: str) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    return {
        "path": path,
        "bytes": len(data),
        "sha256": hashlib.sha256(data).hexdigest(),
    }


def _load_input(path: str):
    """Read a matrix or graph file, sniffing by the header token."""
    with open(path) as fh:
        head = fh.readline().split()
    kind = head[0] if head else ""
    if kind == "sym":
        return read_matrix(path)
    if kind == "graph":
        return read_graph(path)
    raise FormatError(
        f"{path}: expected a 'sym' or 'graph' header, found {kind!r}"
    )


def _as_graph(obj) -> Graph:
    if isinstance(obj, Graph):
        return obj
    return from_adjacency(obj)


def _as_matrix(obj) -> SymmetricMatrix:
    if isinstance(obj, Graph):
        return obj.adjacency
    return obj


def _default_threads() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (results dict, extra report fields,
# human summary, exit code)
# ---------------------------------------------------------------------------


def _cmd_construct(args) -> tuple[dict, dict, str, int]:
    if args.family == "tightness":
        if args.k < 1:
            raise ValueError("--k must be at least 1")
        mat = tightness_matrix(args.k)
        write_matrix(mat, args.output)
        detail = {"family": "tightness", "k": args.k, "n": mat.n}
        summary = f"wrote tightness matrix k={args.k} ({mat.n}x{mat.n})"
    elif args.family == "blockmatrix":
        plan = block_plan(args.p)
        mat = block_matrix(plan)
        write_matrix(mat, args.output)
        detail = {
            "family": "blockmatrix",
            "p": plan.p,
            "k": plan.k,
            "n": mat.n,
            "row_sum": plan.k * plan.p,
            "plan": plan.to_json_dict(),
        }
        summary = (f"wrote block matrix p={plan.p} ({mat.n}x{mat.n}, "
                   f"row sums {plan.k * plan.p})")
    else:  # qpt
        g = qpt_graph(args.p, args.t)
        write_graph(g, args.output)
        detail = {
            "family": "qpt",
            "p": args.p,
            "t": args.t,
            "n": g.n,
            "m": g.m,
            "degree": int(g.degrees[0]) if g.n else 0,
        }
        summary = (f"wrote Q({args.p},{args.t}): {g.n} vertices, "
                   f"{g.m} edges, {detail['degree']}-regular")
    results = {**detail, "output": _digest(args.output)}
    return results, {}, f"{summary} -> {args.output}", 0


def _disc_for(mat: SymmetricMatrix, args):
    if args.heuristic:
        if args.seed is None:
            raise ValueError("--heuristic needs --seed for reproducibility")
        return disc_heuristic(mat, iterations=args.iters, seed=args.seed)
    return disc_exact(mat, threads=args.threads)


def _cmd_analyze(args) -> tuple[dict, dict, str, int]:
    obj = _load_input(args.input)
    mat = _as_matrix(obj)
    disc = _disc_for(mat, args)
    spectrum = eig_symmetric(mat)
    n = mat.n
    sigma2 = spectrum.sigma2 if n >= 2 else None
    denom_ln = disc.value * math.log(n) if n >= 2 else 0.0
    ratio_ln = sigma2 / denom_ln if sigma2 is not None and denom_ln > 0 else None
    denom_log2 = disc.value * math.log2(n) if n >= 2 else 0.0
    ratio_log2 = (sigma2 / denom_log2
                  if sigma2 is not None and denom_log2 > 0 else None)
    results = {
        "kind": "graph" if isinstance(obj, Graph) else "matrix",
        "n": n,
        "rho_prime": rho_prime(mat),
        "sigma1": spectrum.sigma1,
        "sigma2": sigma2,
        "eigenvalue_max": float(spectrum.eigenvalues[0]),
        "eigenvalue_min": float(spectrum.eigenvalues[-1]),
        "disc": disc.to_json_dict(),
        "sigma2_over_disc_ln_n": ratio_ln,
        "sigma2_over_disc_log2_n": ratio_log2,
        "input": _digest(args.input),
    }
    if isinstance(obj, Graph):
        results["density"] = obj.density()
        results["disc_gap_bound"] = disc2_gap_bound(obj)
    summary = (f"disc ({disc.mode}) = {disc.value:.6g} at |X|={len(disc.witness_X)}"
               f" |Y|={len(disc.witness_Y)}; sigma2 = "
               f"{'n/a' if sigma2 is None else format(sigma2, '.6g')}")
    return results, {"seed": args.seed}, summary, 0


def _cmd_certify(args) -> tuple[dict, dict, str, int]:
    obj = _load_input(args.input)
    mat = _as_matrix(obj)
    if args.heuristic and args.seed is None:
        raise ValueError("--heuristic needs --seed for reproducibility")
    cert = certify_sigma2(
        mat,
        disc_mode="heuristic" if args.heuristic else "exact",
        threads=args.threads,
        iterations=args.iters,
        seed=args.seed if args.seed is not None else 0,
    )
    results = {
        "certificate": cert.to_json_dict(),
        "input": _digest(args.input),
    }
    min_slack = min(link.slack for link in cert.links)
    summary = (f"certificate holds: sigma2 = {cert.sigma2:.6g}, "
               f"disc ({cert.disc.mode}) = {cert.disc.value:.6g}, "
               f"min link slack = {min_slack:.3g}, "
               f"headline bound {'holds' if cert.headline_holds else 'OPEN'}")
    return results, {"seed": args.seed}, summary, 0


def _cmd_verify(args) -> tuple[dict, dict, str, int]:
    if args.suite == "thomason":
        graph = _as_graph(_load_input(args.input))
        report = thomason_report(graph, args.p, args.mu,
                                 samples=args.samples, seed=args.seed)
        results = {"report": report.to_json_dict(),
                   "input": _digest(args.input)}
        held = report.params["hypotheses_hold"]
        summary = (f"thomason: {'PASS' if report.passed else 'FAIL'} "
                   f"(hypotheses {'hold' if held else 'fail'}, "
                   f"instances={report.instances})")
        return results, {"seed": args.seed}, summary, 0 if report.passed else 6
    if args.suite == "chung":
        graph = _as_graph(_load_input(args.input))
        report = chung_alpha_check(graph, alpha=args.alpha,
                                   samples=args.samples, seed=args.seed)
        results = {"report": report.to_json_dict(),
                   "input": _digest(args.input)}
        ratio = report.params.get("lambda_bar_over_alpha_min")
        summary = (f"chung: {'PASS' if report.passed else 'FAIL'} "
                   f"(alpha_min={report.params['alpha_min']:.6g}"
                   + (f", lambda_bar/alpha={ratio:.4g}" if ratio else "")
                   + ")")
        return results, {"seed": args.seed}, summary, 0 if report.passed else 6
    if args.suite == "family":
        sizes = tuple(int(s) for s in args.sizes.split(","))
        result = check_sparse_family(sizes=sizes, samples=args.samples,
                                     seed=args.seed)
        summary = (f"family: {'PASS' if result['pass'] else 'FAIL'} "
                   f"(sizes {sizes}, "
                   f"window_ok={result['sigma2_window_ok']}, "
                   f"decreasing={result['disc_ratio_decreasing']})")
        return result, {"seed": args.seed}, summary, 0 if result["pass"] else 6
    # paper-suite
    result = run_suite(max_k=args.max_k, max_p=args.max_p,
                       samples=args.samples, seed=args.seed,
                       quick=args.quick)
    failed = [k for k, v in result["checks"].items() if not v["pass"]]
    summary = ("suite: PASS (9 checks)" if result["pass"]
               else f"suite: FAIL ({', '.join(failed)})")
    return result, {"seed": args.seed}, summary, 0 if result["pass"] else 6


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matdisc",
        description=("Matrix discrepancy, second singular values, and "
                     "edge-distribution checks"),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="write a generated matrix or graph")
    consub = con.add_subparsers(dest="family", required=True)
    tight = consub.add_parser("tightness")
    tight.add_argument("--k", type=int, required=True)
    tight.add_argument("-o", "--output", required=True)
    block = consub.add_parser("blockmatrix")
    block.add_argument("--p", type=int, required=True)
    block.add_argument("-o", "--output", required=True)
    qpt = consub.add_parser("qpt")
    qpt.add_argument("--p", type=int, required=True)
    qpt.add_argument("--t", type=int, required=True)
    qpt.add_argument("-o", "--output", required=True)

    ana = sub.add_parser("analyze", help="discrepancy and spectrum of a file")
    ana.add_argument("input")
    mode = ana.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=False)
    mode.add_argument("--heuristic", action="store_true", default=False)
    ana.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS)
    ana.add_argument("--seed", type=int, default=None)
    ana.add_argument("--threads", type=int, default=_default_threads())

    cer = sub.add_parser("certify", help="second singular value certificate")
    cer.add_argument("input")
    cer.add_argument("--heuristic", action="store_true", default=False)
    cer.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS)
    cer.add_argument("--seed", type=int, default=None)
    cer.add_argument("--threads", type=int, default=_default_threads())

    ver = sub.add_parser("verify", help="run a bound-checking suite")
    versub = ver.add_subparsers(dest="suite", required=True)
    tho = versub.add_parser("thomason")
    tho.add_argument("--input", required=True)
    tho.add_argument("--p", type=float, required=True)
    tho.add_argument("--mu", type=float, required=True)
    tho.add_argument("--samples", type=int, default=10_000)
    tho.add_argument("--seed", type=int, default=1)
    chu = versub.add_parser("chung")
    chu.add_argument("--input", required=True)
    chu.add_argument("--alpha", type=float, default=None)
    chu.add_argument("--samples", type=int, default=10_000)
    chu.add_argument("--seed", type=int, default=1)
    fam = versub.add_parser("family")
    fam.add_argument("--sizes", default="50,100,200")
    fam.add_argument("--samples", type=int, default=10_000)
    fam.add_argument("--seed", type=int, default=7)
    pap = versub.add_parser("paper-suite")
    pap.add_argument("--max-k", type=int, default=64)
    pap.add_argument("--max-p", type=int, default=None)
    pap.add_argument("--samples", type=int, default=10_000)
    pap.add_argument("--seed", type=int, default=1)
    pap.add_argument("--quick", action="store_true", default=False)
    return parser


_HANDLERS = {
    "construct": _cmd_construct,
    "analyze": _cmd_analyze,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        results, extra, summary, code = _HANDLERS[args.command](args)
    except _PARAM_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: rerun with --heuristic --iters N --seed S",
              file=sys.stderr)
        return 4
    except CertificateLinkViolatedError as exc:
        print(f"certificate link violated: {exc}", file=sys.stderr)
        return 5
    report = {
        "command": list(argv) if argv is not None else sys.argv[1:],
        "version": __version__,
        "results": _jsonify(results),
        **_jsonify(extra),
        "timing": {"seconds": time.perf_counter() - started},
    }
    print(json.dumps(report, sort_keys=True))
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
