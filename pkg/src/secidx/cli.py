"""Command-line front end.

Exit codes: 0 clean/success, 1 attack detected, 2 usage or input error,
3 unobservable system, 4 method disagreement, 5 uncorrectable attack,
6 ambiguous correction.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from secidx import guard, index, io
from secidx.coding import build_check_matrix, build_coding_matrix
from secidx.errors import (
    AmbiguousCorrection,
    MethodDisagreement,
    NoConsistentSupport,
    NotObservable,
    SecIdxError,
)
from secidx.model import ToleranceConfig
from secidx.simulate import inject, random_attack, simulate

EXIT_OK = 0
EXIT_ATTACK = 1
EXIT_USAGE = 2
EXIT_UNOBSERVABLE = 3
EXIT_DISAGREE = 4
EXIT_UNCORRECTABLE = 5
EXIT_AMBIGUOUS = 6

log = logging.getLogger("secidx")


class UsageError(Exception):
    pass


def _tol(args) -> ToleranceConfig:
    return ToleranceConfig(args.rank_tol, args.residual_tol, args.detect_tol)


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([complex(v.strip()) for v in text.split(",")], dtype=complex)
    except ValueError as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(io.dump_json(payload))
    else:
        print("\n".join(lines))


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_analyze(args) -> int:
    tol = _tol(args)
    sys_ = io.read_system(args.system, tol)
    cm = build_coding_matrix(sys_)
    maximal = index.is_maximally_secure(cm, tol)
    method = args.method
    if method == "all":
        report = index.security_index(sys_, tol, spark_budget=args.spark_budget)
    elif method == "subset":
        report = index.security_index_subset(cm, tol)
    elif method == "spark":
        d = index.spark(build_check_matrix(cm, tol), tol)
        report = index.SecurityIndexReport(d, index.SPARK, None, frozenset(), {index.SPARK: d})
    else:
        es = index.eigen_structure(sys_.A, tol)
        report = index.security_index_eigen(sys_, es, tol)
    payload = report.to_dict()
    payload.update({"N": sys_.N, "n": sys_.n, "maximally_secure": maximal})
    lines = [f"delta = {report.delta}; maximally secure: {_yes(maximal)} (N = {sys_.N})"]
    lines += [f"  {name}: {value}" for name, value in sorted(report.values.items())]
    if report.witness_support:
        lines.append(f"  witness support: {sorted(report.witness_support)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_simulate(args) -> int:
    tol = _tol(args)
    sys_ = io.read_system(args.system, tol)
    x0 = _parse_vector(args.x0)
    if x0.shape[0] != sys_.n:
        raise UsageError(f"--x0 has {x0.shape[0]} entries, system has n = {sys_.n}")
    if args.T < 1:
        raise UsageError("--T must be positive")
    y = simulate(sys_, x0, args.T)
    if args.out:
        io.write_trajectory(args.out, y)
    payload = {"N": sys_.N, "T": args.T, "x0": io.encode_vector(x0), "seed": args.seed}
    lines = [f"simulated N = {sys_.N} sensors over T = {args.T} steps (seed {args.seed})"]
    if args.attack_weight is not None:
        if not args.attacked_out:
            raise UsageError("--attack-weight needs --attacked-out")
        if not 0 <= args.attack_weight <= sys_.N:
            raise UsageError(f"--attack-weight must lie in 0..{sys_.N}")
        first = sys_.n if args.first_n else None
        eta = random_attack(sys_.N, args.T, args.attack_weight, args.seed, args.magnitude, first)
        r = inject(y, eta)
        io.write_trajectory(args.attacked_out, r)
        sidecar = {
            "seed": args.seed,
            "weight": eta.weight,
            "support": sorted(eta.support),
            "magnitude": args.magnitude,
            "first_steps": first,
            "T": args.T,
        }
        Path(str(args.attacked_out) + ".json").write_text(io.dump_json(sidecar) + "\n")
        payload["attack"] = sidecar
        lines.append(f"attack on sensors {sorted(eta.support)} written to {args.attacked_out}")
    elif not args.out:
        raise UsageError("nothing to write: give --out and/or --attacked-out")
    log.info("simulate seed=%d T=%d", args.seed, args.T)
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_detect(args) -> int:
    tol = _tol(args)
    sys_ = io.read_system(args.system, tol)
    r = io.read_trajectory(args.trajectory)
    if args.rule == "R":
        if not args.R:
            raise UsageError("--rule R needs --R POLY_FILE")
        report = guard.detect_R(io.read_poly_matrix(args.R), r, tol)
    else:
        report = guard.detect_H(sys_, r, tol)
    verdict = "attack detected" if report.attacked else "clean"
    lines = [verdict, f"  max syndrome norm (relative): {report.max_syndrome_norm:.3e}"]
    if report.first_flagged_window is not None:
        lines.append(f"  first flagged window: t = {report.first_flagged_window}")
    _emit(args, report.to_dict(), lines)
    return EXIT_ATTACK if report.attacked else EXIT_OK


def cmd_correct(args) -> int:
    tol = _tol(args)
    sys_ = io.read_system(args.system, tol)
    r = io.read_trajectory(args.trajectory)
    result = guard.correct(sys_, r, tol)
    if args.out:
        io.write_trajectory(args.out, result.corrected)
    x0 = ", ".join(io.format_complex(z) for z in result.x0_estimate)
    lines = [
        f"x0 estimate: [{x0}]",
        f"attack support: {sorted(result.attack_support)}",
        f"residual: {result.residual:.3e}",
    ]
    _emit(args, result.to_dict(), lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="secidx", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trajectory=False):
        sp.add_argument("system", help="system JSON file with keys A and C")
        if trajectory:
            sp.add_argument("trajectory", help="trajectory CSV (t,s1,...,sN)")
        sp.add_argument("--rank-tol", type=float, default=1e-10)
        sp.add_argument("--residual-tol", type=float, default=1e-8)
        sp.add_argument("--detect-tol", type=float, default=1e-9)
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("analyze", help="compute the security index")
    common(sp)
    sp.add_argument("--method", choices=["subset", "spark", "eigen", "all"], default="all")
    sp.add_argument("--spark-budget", type=int, default=12, help="largest N for the spark method")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("simulate", help="simulate clean and attacked trajectories")
    common(sp)
    sp.add_argument("--x0", required=True, help="comma-separated initial state")
    sp.add_argument("--T", type=int, required=True, help="horizon length")
    sp.add_argument("--out", help="clean trajectory CSV")
    sp.add_argument("--attacked-out", help="attacked trajectory CSV (sidecar written to <file>.json)")
    sp.add_argument("--attack-weight", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--magnitude", type=float, default=1.0)
    sp.add_argument("--first-n", action="store_true", help="attack only the first n samples")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("detect", help="syndrome test for sensor attacks")
    common(sp, trajectory=True)
    sp.add_argument("--rule", choices=["H", "R"], default="H")
    sp.add_argument("--R", help="polynomial-matrix JSON for --rule R")
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("correct", help="locate and remove a sparse sensor attack")
    common(sp, trajectory=True)
    sp.add_argument("--out", help="write the corrected trajectory CSV")
    sp.set_defaults(func=cmd_correct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except NotObservable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNOBSERVABLE
    except MethodDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        if getattr(args, "json", False):
            print(json.dumps({"error": "MethodDisagreement", "values": exc.values}, sort_keys=True))
        return EXIT_DISAGREE
    except NoConsistentSupport as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCORRECTABLE
    except AmbiguousCorrection as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (UsageError, SecIdxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
