"""Command-line front end.

Exit codes: 0 success, 1 check failed (non-decoherent history, evolution
defect above tolerance, failed invariant), 2 invalid arguments or input,
3 working dimension too small for the requested region.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, fock, histories, io, phase_space, projector, verify
from .errors import DimensionError, FockError, TruncationError
from .projector import Circle, Ellipse, GeneralRegion

MAX_DIM = 1024
MIN_RES, MAX_RES = 3, 2001


class UsageError(FockError):
    pass


@dataclass
class RunConfig:
    command: str
    dim: int = 64
    region: object = None
    p_range: tuple = (-8.0, 8.0)
    q_range: tuple = (-8.0, 8.0)
    resolution: tuple = (81, 81)
    output: str = "-"
    format: str = "json"
    extra: dict = field(default_factory=dict)

    def validate(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise UsageError(f"--dim must lie in [1, {MAX_DIM}], got {self.dim}")
        for n in self.resolution:
            if not MIN_RES <= n <= MAX_RES:
                raise UsageError(f"grid resolution must lie in [{MIN_RES}, {MAX_RES}], got {n}")
        for lo, hi in (self.p_range, self.q_range):
            if not lo < hi:
                raise UsageError("grid ranges must be increasing")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        return self


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _region_arg(args):
    if args.region is not None:
        obj = args.region if isinstance(args.region, dict) else json.loads(args.region)
        return io.region_from_json(obj)
    if args.N is not None:
        N = int(args.N)
        return Circle(math.sqrt(N + 1.0), tuple(args.center), N)
    raise UsageError("give --region or --N")


def check_truncation(region, d):
    """Reject regions whose physical support does not fit in dimension ``d``."""
    if isinstance(region, Circle):
        N = region.top_level
        need = fock.required_dim(N, fock.label(*region.center))
    elif isinstance(region, Ellipse):
        stretch = math.exp(2.0 * abs(region.squeeze))
        need = math.ceil((region.rank - 1) * stretch
                         + max(4.0 * abs(fock.label(*region.center)) ** 2, 25.0))
    elif isinstance(region, GeneralRegion):
        need = 2 * region.levels
    else:
        raise UsageError(f"unsupported region {region!r}")
    if d < need:
        raise TruncationError(f"dimension {d} is below the required {need} for this region")


def _axes(cfg):
    return (np.linspace(*cfg.p_range, cfg.resolution[0]),
            np.linspace(*cfg.q_range, cfg.resolution[1]))


def _config(args, command):
    res = args.resolution if args.resolution is not None else [81]
    res = tuple(res) if len(res) == 2 else (res[0], res[0])
    return RunConfig(command, dim=args.dim, p_range=tuple(args.p_range),
                     q_range=tuple(args.q_range), resolution=res,
                     output=args.output, format=args.format).validate()


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


def cmd_lambda(args):
    _require(args, "R")
    if not args.R >= 0 or not math.isfinite(args.R):
        raise UsageError("--R must be a non-negative number")
    if args.count < 1:
        raise UsageError("--count must be positive")
    lam = projector.lambda_profile(args.R, args.count)
    if args.format == "csv":
        text = "n,lambda\n" + "".join(f"{n},{io.fmt(v)}\n" for n, v in enumerate(lam))
    else:
        text = io.dumps({"R": args.R, "lambda": [float(v) for v in lam]})
    _emit(text, args.output)
    return 0


def cmd_projector(args):
    cfg = _config(args, "projector")
    region = _region_arg(args)
    check_truncation(region, cfg.dim)
    E = projector.region_projector(region, cfg.dim)
    if cfg.format == "csv":
        rows = ["m,n,re,im"]
        for (m, n), v in np.ndenumerate(E):
            rows.append(f"{m},{n},{io.fmt(v.real)},{io.fmt(v.imag)}")
        text = "\n".join(rows) + "\n"
    else:
        obj = {"region": io.region_to_json(region),
               "trace": float(np.trace(E).real),
               "projector_defect": fock.projector_defect(E),
               "operator": io.operator_to_json(E)}
        text = io.dumps(obj)
    _emit(text, cfg.output)
    return 0


def _grid_command(args, kind):
    cfg = _config(args, kind)
    region = _region_arg(args)
    check_truncation(region, cfg.dim)
    E = projector.region_projector(region, cfg.dim)
    p_axis, q_axis = _axes(cfg)
    if kind == "wigner":
        grid = phase_space.wigner_grid(E, p_axis, q_axis)
    else:
        grid = phase_space.husimi_grid(E, p_axis, q_axis)
    grid.meta.update({"dim": cfg.dim, "region": io.region_to_json(region),
                      "units": "hbar = 1, z = (q + i p) / sqrt(2)"})
    text = io.grid_to_csv(grid) if cfg.format == "csv" else io.grid_to_json(grid)
    _emit(text, cfg.output)
    return 0


def cmd_wigner(args):
    return _grid_command(args, "wigner")


def cmd_husimi(args):
    return _grid_command(args, "husimi")


def cmd_evolve(args):
    _require(args, "N", "t")
    if args.N < 0:
        raise UsageError("--N must be non-negative")
    center = tuple(args.center)
    d = args.dim
    if not 1 <= d <= MAX_DIM:
        raise UsageError(f"--dim must lie in [1, {MAX_DIM}]")
    need = fock.required_dim(args.N, fock.label(*center))
    if d < need:
        raise TruncationError(f"dimension {d} is below the required {need}")
    E = projector.displaced_projector(args.N, center, d)
    flowed = dynamics.classical_flow(center, -args.t)
    F = projector.displaced_projector(args.N, flowed, d)
    defect = float(np.max(np.abs(dynamics.evolve_projector(E, args.t) - F)))
    ok = defect <= args.tol
    _emit(io.dumps({"N": args.N, "center": list(center), "t": args.t, "dim": d,
                    "flowed_center": [float(v) for v in flowed],
                    "defect": defect, "tolerance": args.tol, "pass": ok}), args.output)
    return 0 if ok else 1


def cmd_histories(args):
    _require(args, "spec")
    try:
        with open(args.spec, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read history spec: {exc}") from None
    spec, tol = io.history_from_json(obj)
    if args.tol is not None:
        tol = args.tol
    report = histories.decoherence_functional(spec, tol=tol)
    _emit(io.dumps(io.report_to_json(report)), args.output)
    return 0 if report.decoherent else 1


def cmd_verify(args):
    results = verify.run_checks(force_fail=tuple(args.force_fail or ()))
    ok = all(r["passed"] for r in results)
    _emit(io.dumps({"passed": ok, "checks": results}), args.output)
    return 0 if ok else 1


def _add_output(p, formats=("json", "csv")):
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def _add_region(p):
    p.add_argument("--region", help="region JSON, e.g. '{\"circle\": {\"R\": 3.0}}'")
    p.add_argument("--N", type=int, help="circle at --center holding levels 0..N")
    p.add_argument("--center", type=float, nargs=2, default=[0.0, 0.0], metavar=("P", "Q"))
    p.add_argument("--dim", type=int, default=64)


def _add_grid(p):
    p.add_argument("--p-range", type=float, nargs=2, default=[-8.0, 8.0], metavar=("LO", "HI"))
    p.add_argument("--q-range", type=float, nargs=2, default=[-8.0, 8.0], metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, nargs="+", metavar="N",
                   help="points per axis (one value for both, or P Q)")


def build_parser():
    parser = argparse.ArgumentParser(prog="fockproj", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file whose keys supply option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="quasi-projector eigenvalue profile")
    p.add_argument("--R", type=float)
    p.add_argument("--count", type=int, default=20)
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("projector", help="exact projector matrix for a region")
    _add_region(p)
    _add_grid(p)
    _add_output(p)
    p.set_defaults(func=cmd_projector)

    for name, func in (("wigner", cmd_wigner), ("husimi", cmd_husimi)):
        p = sub.add_parser(name, help=f"{name} function of a region projector on a grid")
        _add_region(p)
        _add_grid(p)
        _add_output(p, ("csv", "json"))
        p.set_defaults(func=func)

    p = sub.add_parser("evolve", help="check the evolution/classical-flow identity")
    p.add_argument("--N", type=int)
    p.add_argument("--center", type=float, nargs=2, default=[0.0, 0.0], metavar=("P", "Q"))
    p.add_argument("--t", type=float)
    p.add_argument("--dim", type=int, default=96)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("histories", help="decoherence report for a history spec file")
    p.add_argument("--spec")
    p.add_argument("--tol", type=float)
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_histories)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--force-fail", action="append", metavar="ID",
                   help="report check ID (or 'all') as failed; test hook")
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_verify)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    command = cfg.pop("command", None)
    for action in parser._subparsers._group_actions:
        for name, subparser in action.choices.items():
            if command in (None, name):
                subparser.set_defaults(**cfg)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"fockproj: cannot read config: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TruncationError, DimensionError) as exc:
        print(f"fockproj: {exc}", file=sys.stderr)
        return 3
    except (FockError, json.JSONDecodeError) as exc:
        print(f"fockproj: {exc}", file=sys.stderr)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
