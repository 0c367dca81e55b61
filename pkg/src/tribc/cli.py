"""Command-line client: files and flags in, results on stdout.

All computation lives in the core package and the shared service handlers;
this module only parses arguments, reads files, formats output, and maps
error classes to exit codes:

    2  malformed input (usage, unparsable files, schema violations)
    3  domain or precondition violations (the message names the condition)
    4  an internal enumeration cap was exceeded

Results go to stdout, diagnostics to stderr.  All randomness flows from
--seed; human-readable numbers carry six significant digits, file output
keeps full precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    DomainError,
    EnumerationCapError,
    PreconditionError,
    SchemaError,
    TribcError,
)

EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_CAP = 4


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise SchemaError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"cannot parse {path}: {exc}") from None


def _load_test_channel(path: str):
    from .regions.testchannel import TestChannel

    doc = _read_json(path)
    return TestChannel.from_json_dict(doc, base_dir=Path(path).parent)


# --- subcommand implementations ------------------------------------------------


def _cmd_entropy(args) -> int:
    from .entropy import LabeledJointPmf, info_quantity, parse_expr

    pmf = LabeledJointPmf.from_json_dict(_read_json(args.pmf))
    value = info_quantity(pmf, parse_expr(args.expr))
    if args.emit == "json":
        print(json.dumps({"expr": args.expr, "bits": value}))
    else:
        print(f"{args.expr} = {_fmt(value)} bits")
    return 0


def _cmd_corollary1(args) -> int:
    from .regions.analytic import corollary1_report

    rep = corollary1_report(args.delta1, args.tau)
    if args.emit == "json":
        print(
            json.dumps(
                {
                    "low": rep.low,
                    "high_derived": rep.high_derived,
                    "published_high": rep.published_high,
                    "published_window_contained": rep.published_window_contained,
                }
            )
        )
        return 0
    print(f"low = {_fmt(rep.low)}")
    print(f"derived high = {_fmt(rep.high_derived)}")
    print(
        f"note: the published window endpoint is {_fmt(rep.published_high)}; "
        f"the bisection-derived endpoint is {_fmt(rep.high_derived)}"
    )
    if rep.published_window_contained:
        print(
            f"note: the derived window ({_fmt(rep.low)}, {_fmt(rep.high_derived)}) "
            f"contains the published window ({_fmt(rep.low)}, {_fmt(rep.published_high)})"
        )
    return 0


def _cmd_gp(args) -> int:
    from .gelfand_pinsker import GPInstance, OptimizerConfig, alpha_T, alpha_TR

    if args.config:
        config = OptimizerConfig.from_json_dict(_read_json(args.config))
    else:
        config = OptimizerConfig(seed=args.seed)
    inst = GPInstance(args.tau, args.delta, args.eps)
    res = alpha_T(inst, config)
    tr = alpha_TR(inst)
    if args.emit == "json":
        print(
            json.dumps(
                {
                    "alpha_t": res.value,
                    "alpha_tr": tr,
                    "gap": tr - res.value,
                    "converged": res.converged,
                }
            )
        )
        return 0
    print(f"alpha_T = {_fmt(res.value)}")
    print(f"alpha_TR = {_fmt(tr)}")
    print(f"gap = {_fmt(tr - res.value)}")
    print(f"converged = {str(res.converged).lower()}")
    return 0


def _cmd_region(args) -> int:
    from .service import handlers

    test = _load_test_channel(args.test_channel)
    try:
        point = tuple(float(v) for v in args.point.split(","))
    except ValueError:
        raise SchemaError(f"cannot parse point {args.point!r}; expected R1,R2,R3")
    if len(point) != 3:
        raise SchemaError("a rate point has exactly three coordinates")
    member = handlers.MEMBERSHIP_TESTS[args.kind](test, point, tol=args.tol)
    csv_row = (
        "region,point,member,tol,seed\n"
        f"{args.kind},{point[0]!r} {point[1]!r} {point[2]!r},"
        f"{str(member).lower()},{args.tol!r},{args.seed}\n"
    )
    if args.out:
        Path(args.out).write_text(csv_row)
    if args.emit == "csv":
        sys.stdout.write(csv_row)
    elif args.emit == "json":
        print(json.dumps({"kind": args.kind, "point": point, "member": member}))
    else:
        print(f"member = {str(member).lower()}")
    return 0


def _cmd_simulate(args) -> int:
    from .coset_sim import SimConfig, simulate_example1

    config = SimConfig.from_json_dict(_read_json(args.config))
    stats = simulate_example1(config, threads=args.threads)
    csv_text = stats.to_csv()
    if args.out:
        Path(args.out).write_text(csv_text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_prop1(args) -> int:
    from .gelfand_pinsker import (
        GPInstance,
        Prop1Certificate,
        prop1_boundary_witness,
        prop1_refute,
    )

    inst = GPInstance(args.tau, args.delta, args.eps)
    if args.relaxed:
        wit = prop1_boundary_witness(inst)
        print(json.dumps({"feasible": True, "joint": wit.joint.to_json_dict()}))
        return 0
    result = prop1_refute(inst)
    if isinstance(result, Prop1Certificate):
        text = result.to_csv()
        if args.out:
            Path(args.out).write_text(text)
            print(f"wrote {args.out}", file=sys.stderr)
        else:
            sys.stdout.write(text)
        print(
            f"all_infeasible = {str(result.all_infeasible).lower()}", file=sys.stderr
        )
        return 0
    # a feasible assignment would refute the impossibility statement
    print(
        json.dumps(
            {
                "all_infeasible": False,
                "counterexample_z": result.z_bits,
                "joint": result.distribution.joint.to_json_dict(),
            }
        )
    )
    return 0


def _cmd_audit(args) -> int:
    from .regions.nem import lemma3_audit

    test = _load_test_channel(args.test_channel)
    rates_doc = _read_json(args.rates)
    if not isinstance(rates_doc, dict):
        raise SchemaError("rates file must hold a JSON object of rate variables")
    rates = {str(k): float(v) for k, v in rates_doc.items()}
    report = lemma3_audit(test, rates, tol=args.tol)
    if args.emit == "json":
        print(
            json.dumps(
                {
                    "all_pass": report.all_pass,
                    "items": [
                        {
                            "label": label,
                            "checks": [
                                {
                                    "name": c.name,
                                    "value": c.value,
                                    "target": c.target,
                                    "passed": c.passed,
                                }
                                for c in checks
                            ],
                        }
                        for label, checks in report.items
                    ],
                }
            )
        )
        return 0
    for label, checks in report.items:
        for c in checks:
            status = "pass" if c.passed else "FAIL"
            print(f"[{status}] {label}: {c.name} (value {_fmt(c.value)}, target {_fmt(c.target)})")
    print(f"all_pass = {str(report.all_pass).lower()}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- argument wiring --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tribc",
        description="three-user broadcast-channel rate regions, capacities and simulation",
    )
    parser.add_argument("--seed", type=int, default=0, help="root seed for all randomness")
    parser.add_argument(
        "--threads", type=int, default=1, help="worker-thread cap for batch drivers"
    )
    parser.add_argument(
        "--emit",
        choices=("human", "json", "csv"),
        default="human",
        help="output format on stdout",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="evaluate an information quantity on a pmf file")
    p.add_argument("--pmf", required=True)
    p.add_argument("--expr", required=True, help='e.g. "I(A;B|C)" or "H(A,B)"')
    p.set_defaults(fn=_cmd_entropy)

    p = sub.add_parser("corollary1", help="the window of equal crossovers separating the regions")
    p.add_argument("--delta1", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.set_defaults(fn=_cmd_corollary1)

    p = sub.add_parser("gp", help="state-dependent channel capacities and the rate-loss gap")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--config", help="optimizer config JSON {restarts,max_iters,tol,seed}")
    p.set_defaults(fn=_cmd_gp)

    p = sub.add_parser("region", help="rate-triple membership for a test channel")
    p.add_argument("--kind", choices=("nem", "beta1", "beta1_raw", "beta2", "betaf"), required=True)
    p.add_argument("--test-channel", required=True)
    p.add_argument("--point", required=True, help="R1,R2,R3")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--out", help="write the membership CSV row here")
    p.set_defaults(fn=_cmd_region)

    p = sub.add_parser("simulate", help="Monte Carlo of the nested-code scheme")
    p.add_argument("--config", required=True, help="simulation config JSON")
    p.add_argument("--out", help="write the statistics CSV here")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("prop1", help="exact impossibility certificate over the 256 input maps")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--out", help="write the certificate CSV here")
    p.add_argument(
        "--relaxed",
        action="store_true",
        help="boundary mode (eps in {0,1}): search for a feasible joint instead",
    )
    p.set_defaults(fn=_cmd_prop1)

    p = sub.add_parser("audit", help="structural identities at the capacity-saturating point")
    p.add_argument("--test-channel", required=True)
    p.add_argument("--rates", required=True, help="JSON object with the 18 rate variables")
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(fn=_cmd_audit)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except TribcError as exc:  # a safety net for anything unclassified
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
