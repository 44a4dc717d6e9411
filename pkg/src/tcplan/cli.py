"""Command-line front end.

Four subcommands, all emitting JSON with stable key order on stdout
(diagnostics go to stderr):

    tcplan bounds  <spec> | --file algebra.json
    tcplan plan    <spec> --from <pt> --to <pt> [--samples N]
                   [--format json|csv] [--kinematics l1,l2,...]
    tcplan verify  <spec> [--pairs N] [--seed S] [--delta D] [--eta E] [--tol T]
    tcplan algebra --file algebra.json [--exhaustive] [--max-len L]

Exit codes: 0 success / verification pass, 1 verification failure,
2 input or validation error.  Points are comma-separated coordinates,
concatenated across factors; sphere blocks are renormalized when within
1e-6 of unit length and rejected otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys

from .catalog import (
    BadSpec,
    UnsupportedParameter,
    catalog_space,
    parse_spec,
    planner_rule_count,
    tc_bounds,
)
from .graded_algebra import AlgebraError, validate_algebra, zdcl
from .geometry import InvalidPoint, make_point
from .planner_core import build_planner, forward_kinematics, plan, sample_path
from .verifier import Mismatch, VerifyConfig, reconcile, verify_planner

_INPUT_ERRORS = (
    BadSpec,
    UnsupportedParameter,
    AlgebraError,
    InvalidPoint,
    ValueError,
    OSError,
    json.JSONDecodeError,
)


def _emit(payload: dict) -> None:
    print(json.dumps(payload))


def _fail(message: str) -> int:
    print(f"tcplan: {message}", file=sys.stderr)
    return 2


def _load_algebra(path: str):
    with open(path) as fh:
        data = json.load(fh)
    return validate_algebra(data, name=data.get("name", path))


def _parse_point(text: str, geometry):
    try:
        coords = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise InvalidPoint(f"bad coordinate in {text!r}: {exc}") from exc
    return make_point(geometry, coords, renormalize=True)


def cmd_bounds(args) -> int:
    if bool(args.spec) == bool(args.file):
        return _fail("bounds needs exactly one of a space spec or --file")
    if args.file:
        algebra = _load_algebra(args.file)
        result = zdcl(algebra, mode="canonical")
        lower = result.length + 1
        upper = 2 * algebra.top_degree + 1
        _emit(
            {
                "space": f"algebra:{algebra.name}",
                "lower": lower,
                "upper": upper,
                "lower_provenance": "cup-length lower bound",
                "upper_provenance": "dimension bound",
                "exact": lower == upper,
                "note": "dimension inferred from the algebra's top degree",
            }
        )
        return 0
    spec = parse_spec(args.spec)
    report = tc_bounds(catalog_space(spec), planner_rule_count(spec))
    _emit(report.as_dict())
    return 0


def cmd_plan(args) -> int:
    spec = parse_spec(args.spec)
    planner = build_planner(spec)
    if planner is None:
        return _fail(f"no explicit planner is available for {spec}")
    start = _parse_point(args.src, planner.geometry)
    goal = _parse_point(args.dst, planner.geometry)
    result = plan(planner, start, goal)
    samples = sample_path(result.path, args.samples)

    joints = None
    if args.kinematics is not None:
        lengths = [float(tok) for tok in args.kinematics.split(",") if tok.strip() != ""]
        joints = [
            [j.tolist() for j in forward_kinematics(point, lengths)]
            for _, point in samples
        ]

    if args.format == "csv":
        dim = planner.geometry.ambient_dim
        header = ["t"] + [f"c{i + 1}" for i in range(dim)]
        if joints is not None:
            per_joint = len(joints[0][0])
            axes = "xyz"[:per_joint]
            header += [f"j{k}{ax}" for k in range(len(joints[0])) for ax in axes]
        lines = [",".join(header)]
        for row_no, (t, point) in enumerate(samples):
            row = [f"{t:.17g}"] + [f"{v:.17g}" for v in point.flat]
            if joints is not None:
                row += [f"{v:.17g}" for joint in joints[row_no] for v in joint]
            lines.append(",".join(row))
        print("\n".join(lines))
        return 0

    payload = {
        "space": str(spec),
        "from": start.flat.tolist(),
        "to": goal.flat.tolist(),
        "rule_index": result.rule_index,
        "samples": [[t] + point.flat.tolist() for t, point in samples],
    }
    if joints is not None:
        payload["joints"] = joints
    _emit(payload)
    return 0


def cmd_verify(args) -> int:
    spec = parse_spec(args.spec)
    planner = build_planner(spec)
    if planner is None:
        return _fail(f"no explicit planner is available for {spec}; only bounds are")
    cfg = VerifyConfig(
        seed=args.seed,
        pairs=args.pairs,
        delta=args.delta,
        margin_eta=args.eta,
        tolerance=args.tol,
    )
    report = verify_planner(planner, cfg)
    payload = report.as_dict()
    descriptor = catalog_space(spec)
    payload["reconcile"] = None
    reconcile_ok = True
    if descriptor.known_tc is not None:
        try:
            payload["reconcile"] = reconcile(planner, descriptor).as_dict()
        except Mismatch as exc:
            payload["reconcile"] = {"error": str(exc)}
            reconcile_ok = False
    _emit(payload)
    return 0 if report.passed and reconcile_ok else 1


def cmd_algebra(args) -> int:
    algebra = _load_algebra(args.file)
    mode = "exhaustive" if args.exhaustive else "canonical"
    result = zdcl(algebra, mode=mode, max_len=args.max_len)
    _emit(
        {
            "algebra": algebra.name,
            "mode": mode,
            "length": result.length,
            "tc_lower_bound": result.length + 1,
            "witness": [w.as_strings() for w in result.witness],
            "product_value": result.product_value.as_strings(),
        }
    )
    return 0


def _glue_value_flags(argv):
    """Join flags whose values may start with '-' (e.g. --to -1,0) into
    --flag=value form so argparse does not mistake the value for an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--from", "--to", "--kinematics"):
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--quiet", action="store_true", help="suppress everything except the JSON output"
    )

    parser = argparse.ArgumentParser(
        prog="tcplan",
        description="Motion-planner complexity bounds and executable minimal planners.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="complexity bounds for a space")
    p.add_argument("spec", nargs="?", help="space expression, e.g. sphere:2 or torus:3")
    p.add_argument("--file", help="algebra presentation JSON instead of a catalog space")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("plan", parents=[common], help="plan a path between configurations")
    p.add_argument("spec")
    p.add_argument("--from", dest="src", required=True, help="start point coordinates")
    p.add_argument("--to", dest="dst", required=True, help="goal point coordinates")
    p.add_argument("--samples", type=int, default=17)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--kinematics", help="bar lengths; append joint positions per sample")
    p.set_defaults(handler=cmd_plan)

    p = sub.add_parser("verify", parents=[common], help="run the planner checks")
    p.add_argument("spec")
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--delta", type=float, default=1e-4)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("algebra", parents=[common], help="cup-length report for an algebra file")
    p.add_argument("--file", required=True)
    p.add_argument("--exhaustive", action="store_true", help="search kernel-basis products")
    p.add_argument("--max-len", dest="max_len", type=int, default=None)
    p.set_defaults(handler=cmd_algebra)

    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_glue_value_flags(argv))
    try:
        return args.handler(args)
    except _INPUT_ERRORS as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
