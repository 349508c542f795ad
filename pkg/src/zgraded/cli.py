"""Command-line front end.

One job per invocation; exit status 0 means affirmative verdict, 1 negative
verdict, 2 input error. A certificate file is written when `--cert` names a
path, and `verify-cert` re-checks any certificate independently.

Complex files are line-oriented:

    ring laurent
    level 0 rank 1
    level 1 rank 1
    d 1 = [[1 - t]]

Matrices on the command line use the same nested-array element grammar.
"""

from __future__ import annotations

import argparse
import sys

from . import certificates as certs
from .complexes import FreeChainComplex, parse_complex_text, r0_routes_report
from .domination import findom_detect, is_fredholm, leavitt_findom_example
from .errors import (
    ConstantTermSingular,
    LeadingTermSingular,
    SchemaError,
    ZGradedError,
)
from .exprs import element_to_str, parse_element, parse_matrix
from .partitions import check_strongly_graded
from .resolution import half_torus
from .rings import get_ring
from .series import invert_series_matrix

TASKS = (
    "check-strong",
    "nf",
    "invert-series",
    "r0-routes",
    "half-torus",
    "fredholm",
    "findom",
    "verify-cert",
    "leavitt-example",
)


def build_parser():
    p = argparse.ArgumentParser(
        prog="zgraded",
        description="exact detectors for strongly Z-graded rings, with re-checkable certificates",
    )
    sub = p.add_subparsers(dest="task", required=True)
    for task in TASKS:
        sp = sub.add_parser(task)
        sp.add_argument("--ring", default=None, help="ring identifier")
        sp.add_argument("--expr", default=None, help="element expression (nf)")
        sp.add_argument("--matrix", default=None, help="matrix as nested arrays")
        sp.add_argument("--complex", default=None, help="path to a complex file")
        sp.add_argument("--order", type=int, default=24)
        sp.add_argument("--horizon", type=int, default=24)
        sp.add_argument("--nmax", type=int, default=5)
        sp.add_argument("--mode", default="nonneg", choices=("nonneg", "conegative"))
        sp.add_argument("--cert", default=None, help="certificate file to write (or verify)")
    return p


def _require(value, name):
    if value is None:
        raise ZGradedError(f"--{name} is required for this task")
    return value


def _load_complex(args) -> FreeChainComplex:
    path = _require(args.complex, "complex")
    with open(path, "r", encoding="utf-8") as fh:
        return parse_complex_text(fh.read())


def _emit(args, doc):
    if args.cert and doc is not None:
        certs.write_certificate(args.cert, doc)
        print(f"certificate written to {args.cert}")


def run(args) -> int:
    """Execute one parsed job; returns the exit status."""
    task = args.task

    if task == "check-strong":
        ring = get_ring(_require(args.ring, "ring"))
        report = check_strongly_graded(ring.ident, args.nmax)
        doc = certs.build_check_strong(report, args.nmax)
        if report.strongly_graded:
            plus, minus = report.witnesses
            pairs = ", ".join(f"({a}, {b})" for a, b in [(str(x), str(y)) for x, y in plus.pairs])
            print(f"{ring.ident}: strongly graded; witnesses of type (1,-1): {pairs}")
        else:
            where = report.failure_degree
            print(f"{ring.ident}: not strongly graded" + (f" (fails at degree {where})" if where is not None else ""))
        _emit(args, doc)
        return 0 if report.strongly_graded else 1

    if task == "nf":
        ring = get_ring(_require(args.ring, "ring"))
        expr = _require(args.expr, "expr")
        value = parse_element(ring, expr)
        print(element_to_str(value))
        _emit(args, certs.build_nf(ring.ident, expr, value))
        return 0

    if task == "invert-series":
        ring = get_ring(_require(args.ring, "ring"))
        m = parse_matrix(ring, _require(args.matrix, "matrix"))
        try:
            cert = invert_series_matrix(m, args.mode, args.order)
        except (ConstantTermSingular, LeadingTermSingular) as exc:
            print(f"not invertible: {exc}")
            _emit(args, certs.build_invert_series_negative(ring.ident, m, args.mode, args.order, str(exc)))
            return 1
        print(f"inverse computed through order {cert.order}; residual check: {cert.residual_check}")
        _emit(args, certs.build_invert_series(ring.ident, m, args.mode, cert))
        return 0 if cert.residual_check else 1

    if task == "r0-routes":
        c = _load_complex(args)
        report = r0_routes_report(c, args.order)
        verdict = report.affirmative()
        print(
            f"contractible over R0: {verdict}; routes agree: {report.agree}"
            f" (r0={report.route1.contractible}, zeta={report.route4.quasi_iso})"
        )
        _emit(args, certs.build_r0_routes(c, report))
        return 0 if verdict and report.agree else 1

    if task == "half-torus":
        c = _load_complex(args)
        rep = half_torus(c, args.horizon)
        print(
            f"half-torus sequence exact through degree {rep.horizon}: {rep.ses_exact};"
            f" cone is a complex: {rep.cone_d_squared_zero}"
        )
        _emit(args, certs.build_half_torus(c, rep))
        return 0 if bool(rep) else 1

    if task == "fredholm":
        ring = get_ring(_require(args.ring, "ring"))
        m = parse_matrix(ring, _require(args.matrix, "matrix"))
        verdict = is_fredholm(m)
        if verdict.fredholm:
            print(
                f"Fredholm: total cokernel dimension {verdict.total_dim}"
                f" (shift m={verdict.suitable_m}, determinant degree {verdict.oracle_det_degree})"
            )
        else:
            why = "not injective" if not verdict.injective else "cokernel does not stabilize"
            print(f"not Fredholm ({why})")
        _emit(args, certs.build_fredholm(m, verdict))
        return 0 if verdict.fredholm else 1

    if task == "findom":
        c = _load_complex(args)
        verdict, cert = findom_detect(c, args.order)
        if verdict.finitely_dominated:
            print(f"finitely dominated over R0; certificate validates at order {verdict.order}")
        else:
            print("not finitely dominated over R0 (Novikov homology is nontrivial)")
        _emit(args, certs.build_findom(c, verdict, cert))
        return 0 if verdict.finitely_dominated else 1

    if task == "leavitt-example":
        rep = leavitt_findom_example()
        good = sum(1 for v in rep["checks"].values() if v)
        print(f"Leavitt worked example: {good}/{len(rep['checks'])} identities hold; ok={rep['ok']}")
        _emit(args, certs.build_leavitt_example(rep))
        return 0 if rep["ok"] else 1

    if task == "verify-cert":
        path = _require(args.cert, "cert")
        ok, problems = certs.verify_certificate(path)
        if ok:
            print("certificate verifies")
            return 0
        print("certificate REJECTED:")
        for p in problems:
            print(f"  - {p}")
        return 1

    raise ZGradedError(f"unknown task {task!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return run(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except ZGradedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
