"""Command-line entry point.

Every subcommand prints one JSON document (stdout, or ``--output``). Exit
status: 0 on success, 1 on invalid input, 2 when a numerical count does not
match its expected value.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import jsonio
from .enumerative import (
    ConicDegenConfig,
    MaximalConfig,
    NonGenericInput,
    PlanesPencilFamily,
    ProblemInstance,
    chasles_table,
    conics5_sweep,
    fixture_names,
    load_fixture,
    maximal_config_verify,
    parametrization_check,
    planes9_sweep,
    random_instance,
    solve_instance,
    veronese_count,
    veronese_limit_check,
)
from .enumerative.fixtures import FIXTURE_VERSION
from .schubert import (
    BoxShape,
    ClassSum,
    degree,
    degree_formula,
    flag_dims_to_partition,
    power,
    witness_cycle_class,
    witness_cycle_signatures,
)
from .tracker import TrackOptions, default_workers

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2
_SOLVE_KINDS = {"lines4": ("lines4",), "planes9": ("planes9",), "conics": ("conics_mixed", "conics5")}
_DEFAULT_SCHEDULE = [10.0 ** -k for k in range(1, 7)]


class InputError(Exception):
    pass


def _load_json(source: str) -> tuple[Any, str]:
    """Contents of a JSON file or of a built-in fixture; the second value is
    the fixture name, or '' for a file."""
    path = Path(source)
    if not path.exists():
        if source in fixture_names():
            return None, source
        raise InputError(f"{source}: no such file or fixture (fixtures: {', '.join(fixture_names())})")
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{source}: {exc.strerror}") from None
    try:
        return json.loads(text), ""
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _unwrap(payload: Any, source: str) -> Any:
    # fixture files carry {version, name, description, data}
    if isinstance(payload, dict) and "data" in payload and "version" in payload:
        if payload["version"] != FIXTURE_VERSION:
            raise InputError(f"{source}: fixture version {payload['version']}, expected {FIXTURE_VERSION}")
        return payload["data"]
    return payload


def _instance(source: str) -> ProblemInstance:
    payload, fixture = _load_json(source)
    if fixture:
        inst = load_fixture(fixture)
        if not isinstance(inst, ProblemInstance):
            raise InputError(f"fixture {fixture} is not a problem instance")
        return inst
    data = _unwrap(payload, source)
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be an object")
    try:
        return ProblemInstance.from_json(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{source}: {exc}") from None


def _maximal(source: str) -> MaximalConfig:
    payload, fixture = _load_json(source)
    if fixture:
        cfg = load_fixture(fixture)
        if not isinstance(cfg, MaximalConfig):
            raise InputError(f"fixture {fixture} is not a point/line configuration")
        return cfg
    data = _unwrap(payload, source)
    try:
        return MaximalConfig.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{source}: {exc}") from None


def _options(args: argparse.Namespace) -> TrackOptions:
    kw = {}
    for name in ("dedup_tol", "reality_tol", "residual_tol"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = v
    try:
        return TrackOptions(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands; each returns (report, exit status)

def cmd_expand(args) -> tuple[dict, int]:
    box = BoxShape(args.rows, args.cols)
    parts = [int(x) for x in args.cls.split(",") if x.strip()] if args.cls else []
    return power(ClassSum.schubert(parts, box), args.power).as_dict(), EXIT_OK


def cmd_degree(args) -> tuple[dict, int]:
    box = BoxShape(args.rows, args.cols)
    d = degree(box)
    return {"degree": d}, EXIT_OK if d == degree_formula(box) else EXIT_MISMATCH


def cmd_witness(args) -> tuple[dict, int]:
    total = witness_cycle_class()
    box = BoxShape(3, 3)
    target = power(ClassSum.schubert([1], box), 4)
    comps = [{"name": name, "flag_dims": list(dims), "class": flag_dims_to_partition(dims, 5, 2).label()}
             for name, dims in witness_cycle_signatures()]
    ok = total == target
    return {"components": comps, "sum": total.as_dict(), "sigma1_4": target.as_dict(), "match": ok}, \
        EXIT_OK if ok else EXIT_MISMATCH


def cmd_solve(args) -> tuple[dict, int]:
    kinds = _SOLVE_KINDS[args.kind]
    if args.random:
        rng = np.random.default_rng(args.seed)
        kind = kinds[0]
        if args.kind == "conics":
            kind = "conics5" if args.points + args.lines == 0 else "conics_mixed"
        inst = random_instance(kind, rng, real=not args.complex, points=args.points, lines=args.lines)
    else:
        if args.input is None:
            raise InputError("solve needs an input file, a fixture name or --random")
        inst = _instance(args.input)
        if inst.kind not in kinds:
            raise InputError(f"input is a {inst.kind} instance, not {args.kind}")
    res = solve_instance(inst, seed=args.seed, opts=_options(args), workers=args.workers)
    report = {"instance": inst.to_json(), "result": res.summary()}
    if args.solutions:
        # chart coordinates of the last attempt; a merged result also lists
        # every solution in chart-free projector form
        report["solutions"] = [s.to_json() for s in res.accepted]
        if res.attempts > 1:
            report["figures"] = [s.to_json() for s in res.figures]
    ok = res.count_ok and res.pairing_ok
    if inst.kind == "conics5":
        ok = ok and res.n_rank2 == 0
    return report, EXIT_OK if ok else EXIT_MISMATCH


def cmd_chasles(args) -> tuple[dict, int]:
    degrees, total = chasles_table()
    return {"degrees": list(degrees), "total": total}, EXIT_OK


def cmd_maximal_verify(args) -> tuple[dict, int]:
    cfg = _maximal(args.input)
    try:
        rep = maximal_config_verify(cfg, seed=args.seed, opts=_options(args), workers=args.workers)
    except NonGenericInput as exc:
        raise InputError(str(exc)) from None
    rep = dict(rep, config=cfg.to_json())
    return rep, EXIT_OK if rep["counts_ok"] and rep["maximal"] else EXIT_MISMATCH


def _schedule(args) -> list[float]:
    sched = args.schedule if args.schedule else _DEFAULT_SCHEDULE
    if any(t < 0 for t in sched):
        raise InputError("schedule values must be non-negative")
    return list(sched)


def cmd_sweep(args) -> tuple[dict, int]:
    opts = _options(args)
    if args.kind == "planes9":
        if args.input:
            raise InputError("the planes9 sweep builds its own seeded family; use 'solve planes9' for files")
        family = PlanesPencilFamily.random(np.random.default_rng([args.seed, 9]))
        report = planes9_sweep(family, _schedule(args), seed=args.seed, opts=opts, workers=args.workers)
        out: dict = {"sweep": report.to_json()}
        ok = all(s.pairing_ok for s in report.steps)
        if args.verify_fixture:
            inst = load_fixture("planes9_real")
            res = solve_instance(inst, seed=args.seed, opts=opts, workers=args.workers)
            out["fixture"] = dict(res.summary(), name="planes9_real")
            ok = ok and res.count_ok and res.n_real == inst.expected_count
        return out, EXIT_OK if ok else EXIT_MISMATCH
    cfg = _maximal(args.input or "maximal_conics")
    try:
        degen = ConicDegenConfig.from_maximal(cfg, angle=args.angle)
        report = conics5_sweep(degen, _schedule(args), seed=args.seed, opts=opts, workers=args.workers)
    except NonGenericInput as exc:
        raise InputError(str(exc)) from None
    ok = all(s.pairing_ok for s in report.steps)
    return {"sweep": report.to_json()}, EXIT_OK if ok else EXIT_MISMATCH


def cmd_veronese(args) -> tuple[dict, int]:
    if args.action == "count":
        n = veronese_count()
        expected = 4 ** 9 * degree(BoxShape(3, 3))
        return {"count": n, "expected": expected}, EXIT_OK if n == expected else EXIT_MISMATCH
    rep = veronese_limit_check()
    rep = dict(rep, parametrization=parametrization_check())
    return rep, EXIT_OK if rep["ok"] and rep["parametrization"] else EXIT_MISMATCH


# ---------------------------------------------------------------------------

def _workers(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("worker count must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--workers", type=_workers, default=None,
                        help="parallel workers (default: $REALENUM_WORKERS or 1)")
    common.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    common.add_argument("--dedup-tol", dest="dedup_tol", type=float)
    common.add_argument("--reality-tol", dest="reality_tol", type=float)
    common.add_argument("--residual-tol", dest="residual_tol", type=float)

    p = argparse.ArgumentParser(prog="realenum", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common], help="power of a Schubert class")
    e.add_argument("--power", type=int, required=True)
    e.add_argument("--class", dest="cls", default="1", help="partition, comma separated (default 1)")
    e.add_argument("--rows", type=int, required=True)
    e.add_argument("--cols", type=int, required=True)
    e.set_defaults(func=cmd_expand)

    d = sub.add_parser("degree", parents=[common], help="degree of a Grassmannian")
    d.add_argument("--rows", type=int, required=True)
    d.add_argument("--cols", type=int, required=True)
    d.set_defaults(func=cmd_degree)

    sub.add_parser("witness", parents=[common], help="limit cycle for planes meeting four planes") \
        .set_defaults(func=cmd_witness)

    s = sub.add_parser("solve", parents=[common], help="solve a problem instance")
    s.add_argument("kind", choices=sorted(_SOLVE_KINDS))
    s.add_argument("input", nargs="?", help="JSON file or fixture name")
    s.add_argument("--random", action="store_true", help="seeded random instance instead of an input")
    s.add_argument("--complex", action="store_true", help="complex random data")
    s.add_argument("--points", type=int, default=0, help="point conditions of a random conic problem")
    s.add_argument("--lines", type=int, default=0, help="line conditions of a random conic problem")
    s.add_argument("--solutions", action="store_true", help="include the solution points")
    s.set_defaults(func=cmd_solve)

    sub.add_parser("chasles", parents=[common], help="mixed point/line degrees").set_defaults(func=cmd_chasles)

    m = sub.add_parser("maximal-verify", parents=[common], help="check the 32 point/line problems")
    m.add_argument("input", nargs="?", default="maximal_conics", help="JSON file or fixture name")
    m.set_defaults(func=cmd_maximal_verify)

    w = sub.add_parser("sweep", parents=[common], help="degeneration sweep")
    w.add_argument("kind", choices=["planes9", "conics5"])
    w.add_argument("input", nargs="?", help="point/line configuration (conics5)")
    w.add_argument("--schedule", type=float, nargs="+", help="parameter values (default 1e-1 .. 1e-6)")
    w.add_argument("--angle", type=float, default=0.05, help="rotation of the second lines (conics5)")
    w.add_argument("--verify-fixture", action="store_true", help="also re-solve the stored real planes9 fixture")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("veronese", parents=[common], help="Veronese degeneration checks")
    v.add_argument("action", choices=["check", "count"])
    v.set_defaults(func=cmd_veronese)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.workers is None:
        try:
            args.workers = default_workers()
        except ValueError:
            print("error: REALENUM_WORKERS must be an integer", file=sys.stderr)
            return EXIT_INPUT
    try:
        report, status = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = jsonio.dumps(report) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
