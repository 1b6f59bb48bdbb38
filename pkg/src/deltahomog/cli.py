"""Command-line front end: ``deltahomog roots | check | phase``.

Exit codes: 0 all conditions hold, 1 some condition fails, 2 bad arguments or
config, 3 only oracle-plausible outcomes remain and ``--strict`` was given.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace

import numpy as np

from .config import OracleBudget, Tolerances, load_config, using
from .exceptions import DeltaHomogError
from .metric import MetricParams, ReductiveSplit, geodesic_completion, is_geodesic_vector, load_space, project

CHECKS = ("geodesic", "ncdo", "t31_4", "t31_5", "t31_9n", "param_range", "delta_vector")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PLAUSIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- roots --------------------------------------------------------------------------

def cmd_roots(args) -> int:
    from .roots import build_root_system
    from .structure import build_bracket_table
    try:
        rank = int(args.rank)
        table = build_bracket_table(build_root_system(args.family, rank))
    except (DeltaHomogError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    doc = table.to_dict()
    doc["long"] = len(table.root_system.long)
    doc["short"] = len(table.root_system.short)
    doc["root_count"] = len(table.root_system)
    _emit(_json(doc), args.out)
    return EXIT_OK


# -- check --------------------------------------------------------------------------

def _budget(args, base: OracleBudget) -> OracleBudget:
    kw = {}
    if args.oracle_restarts is not None:
        kw["restarts"] = args.oracle_restarts
    if args.oracle_steps is not None:
        kw["steps_per_restart"] = args.oracle_steps
    if args.oracle_seed is not None:
        kw["seed"] = args.oracle_seed
    try:
        return replace(base, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_settings(args) -> tuple[Tolerances, OracleBudget]:
    try:
        tol, budget = load_config(args.config)
    except (OSError, ValueError) as exc:
        raise UsageError(f"bad config: {exc}") from None
    return tol, _budget(args, budget)


def _space(name: str, params: MetricParams):
    """(split, test vector W) for a builtin name or a JSON space file."""
    if name == "so5_u2":
        from .so5 import build_so5_u2, candidate_W
        return build_so5_u2(params).split, candidate_W(1.0, 1.0, params)
    try:
        split = load_space(name)
    except (OSError, ValueError, DeltaHomogError) as exc:
        raise UsageError(f"cannot load space {name!r}: {exc}") from None
    V = np.zeros(split.algebra.dim)
    for B in (split.basis_p1, split.basis_p2):
        if B.shape[0]:
            V = V + B[0]
    fam = geodesic_completion(split, params, V)
    return split, V + (np.zeros_like(V) if fam.empty else fam.particular)


def run_checks(split: ReductiveSplit, params: MetricParams, W, checks, budget: OracleBudget) -> list[dict]:
    from . import conditions as C
    W = np.asarray(W, dtype=float)
    X, Y = project(split, W, "p1"), project(split, W, "p2")
    Z = project(split, W, "h")
    normal = params.is_normal()
    out = []
    for cid in checks:
        if cid == "geodesic":
            g = is_geodesic_vector(split, params, W)
            out.append({"condition_id": "geodesic", "holds": bool(g.is_geodesic), "worst_residual": float(g.residual),
                        "witness": None})
        elif cid == "ncdo":
            out.append(C.ncdo_check(split, params, X + Y, Z).to_dict())
        elif cid == "t31_4":
            if normal:
                out.append({"condition_id": "t31_4", "holds": True, "worst_residual": 0.0, "witness": None,
                            "skipped": "normal metric"})
            else:
                out.append(C.t31_4_check(split, params, X, Y, Z).to_dict())
        elif cid == "t31_5":
            reps = [C.t31_5_check(split, params, X, Y, Z, U) for U in split.basis_p1]
            out.append(max(reps, key=lambda r: r.worst_residual).to_dict() if reps else
                       {"condition_id": "t31_5", "holds": True, "worst_residual": 0.0, "witness": None})
        elif cid == "t31_9n":
            reps = [C.t31_9n_check(split, params, A, B) for A in split.basis_p1 for B in split.basis_p2]
            rng = np.random.default_rng(budget.seed)
            for _ in range(16):
                if split.basis_p1.shape[0] and split.basis_p2.shape[0]:
                    A = rng.standard_normal(split.basis_p1.shape[0]) @ split.basis_p1
                    B = rng.standard_normal(split.basis_p2.shape[0]) @ split.basis_p2
                    reps.append(C.t31_9n_check(split, params, A, B))
            out.append(max(reps, key=lambda r: r.worst_residual).to_dict() if reps else
                       {"condition_id": "t31_9n", "holds": True, "worst_residual": 0.0, "witness": None})
        elif cid == "param_range":
            if normal:
                out.append({"condition_id": "param_range", "holds": True, "worst_residual": 0.0, "witness": None,
                            "skipped": "normal metric"})
            else:
                out.append(C.param_range_check(params).to_dict())
        elif cid == "delta_vector":
            cert = C.delta_vector_check(split, params, W, budget)
            out.append({"condition_id": "delta_vector", "holds": not cert.refuted, "worst_residual": cert.excess,
                        "witness": None if cert.witness is None else np.asarray(cert.witness).tolist(),
                        "verdict": cert.verdict})
    return out


def cmd_check(args) -> int:
    tol, budget = _load_settings(args)
    with using(tol):
        return _check(args, budget)


def _check(args, budget: OracleBudget) -> int:
    x1, x2 = args.x1, args.x2
    if args.ratio is not None:
        x1, x2 = 1.0, args.ratio
    if x1 is None or x2 is None:
        raise UsageError("give --x1 and --x2, or --ratio")
    try:
        params = MetricParams(float(x1), float(x2))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.all or not args.checks:
        checks = list(CHECKS)
    else:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise UsageError(f"unknown checks {bad}; choose from {list(CHECKS)}")
    split, W = _space(args.space, params)
    reports = run_checks(split, params, W, checks, budget)
    if not all(r["holds"] for r in reports):
        code = EXIT_FAIL
    elif args.strict and any(r.get("verdict") == "plausible" for r in reports):
        code = EXIT_PLAUSIBLE
    else:
        code = EXIT_OK
    if args.format == "csv":
        text = _csv(reports, ["condition_id", "holds", "worst_residual"])
    else:
        text = _json({"space": args.space, "params": {"x1": params.x1, "x2": params.x2},
                      "oracle": {"restarts": budget.restarts, "steps": budget.steps_per_restart, "seed": budget.seed},
                      "reports": reports, "exit_code": code})
    _emit(text, args.out)
    return code


# -- phase --------------------------------------------------------------------------

def phase_ratios(rmin: float, rmax: float, steps: int) -> list[float]:
    if not (rmin > 0 and rmax >= rmin and steps >= 1) or (steps == 1 and rmax != rmin):
        raise UsageError("need 0 < RMIN <= RMAX and STEPS >= 1 (STEPS = 1 only when RMIN = RMAX)")
    if steps == 1:
        return [float(rmin)]
    return [round(float(r), 12) for r in np.linspace(rmin, rmax, steps)]


def cmd_phase(args) -> int:
    from .so5 import verify_theorem_main
    tol, budget = _load_settings(args)
    ratios = phase_ratios(args.rmin, args.rmax, args.steps)
    with using(tol):
        rows = [r.to_dict(witness=args.format == "json") for r in verify_theorem_main(ratios, budget)]
    if args.no_timing:
        for r in rows:
            r["runtime_ms"] = 0.0
    if args.format == "csv":
        text = _csv(rows, ["ratio", "verdict", "method", "worst_excess", "runtime_ms"])
    else:
        text = _json(rows)
    _emit(text, args.out)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------

def _oracle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--oracle-restarts", type=int)
    p.add_argument("--oracle-steps", type=int)
    p.add_argument("--oracle-seed", type=int)
    p.add_argument("--config", help="JSON file with dotted keys such as oracle.restarts")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltahomog", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="dump a root system and its bracket table as JSON")
    p.add_argument("family")
    p.add_argument("rank")
    p.add_argument("--out")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("check", help="run necessary conditions and the oracle on a space")
    p.add_argument("space", help='"so5_u2" or a JSON space file')
    p.add_argument("--x1", type=float)
    p.add_argument("--x2", type=float)
    p.add_argument("--ratio", type=float, help="shorthand for --x1 1 --x2 RATIO")
    p.add_argument("--all", action="store_true")
    p.add_argument("--checks", help="comma-separated subset of " + ",".join(CHECKS))
    p.add_argument("--strict", action="store_true", help="exit 3 when the oracle can only say plausible")
    _oracle_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("phase", help="delta-homogeneity table for SO(5)/U(2) over x2/x1")
    p.add_argument("rmin", type=float)
    p.add_argument("rmax", type=float)
    p.add_argument("steps", type=int)
    p.add_argument("--no-timing", action="store_true", help="report runtime_ms as 0 for byte-stable output")
    _oracle_flags(p)
    p.set_defaults(func=cmd_phase)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"deltahomog: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
