"""Command-line front end: profiles, pointwise solvers, caustics, Stokes traces and verification.

All numerics live in the library modules; this file parses arguments, builds a
canonical run configuration, calls the library and writes CSV/JSON/SVG files
whose headers embed that configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import BOError, ConfigError

FIXTURES = ("lorentzian", "two-pole")
CSV_FORMAT = "%.16e"
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


@dataclass
class RunConfig:
    """Everything a subcommand needs, in a canonical serialisable form."""

    subcommand: str
    data: dict | None = None
    t: list[float] = field(default_factory=list)
    x: list[float] = field(default_factory=list)
    epsilons: list[float] = field(default_factory=list)
    solver: dict = field(default_factory=dict)
    output: str = "."
    workers: int = 1
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {"subcommand", "data", "t", "x", "epsilons", "solver", "output", "workers", "options"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "subcommand" not in doc:
            raise ConfigError("configuration needs a 'subcommand'")
        cfg = cls(**doc)
        cfg.t = [float(v) for v in cfg.t]
        cfg.x = [float(v) for v in cfg.x]
        cfg.epsilons = [float(v) for v in cfg.epsilons]
        cfg.workers = int(cfg.workers)
        if cfg.workers < 1:
            raise ConfigError(f"workers must be positive, got {cfg.workers}")
        return cfg


# ---------------------------------------------------------------- helpers

def load_data(cfg: RunConfig):
    from .rational import RationalInitialData

    if cfg.data is None:
        raise ConfigError("no initial data given (use --data FILE or --fixture NAME)")
    return RationalInitialData.from_dict(cfg.data)


def fixture_dict(name: str) -> dict:
    from .rational import lorentzian, two_pole_fixture

    if name == "lorentzian":
        return lorentzian().to_dict()
    if name == "two-pole":
        return two_pole_fixture().to_dict()
    raise ConfigError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def data_dict_from_file(path: str) -> dict:
    from .rational import RationalInitialData

    return RationalInitialData.load(path).to_dict()


def solver_config(cfg: RunConfig):
    from .exact import SolverConfig

    unknown = set(cfg.solver) - {"quad_tol", "truncation", "delta"}
    if unknown:
        raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
    return SolverConfig(**cfg.solver)


def write_csv(path: Path, columns: Sequence[str], rows: np.ndarray, cfg: RunConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"config: {cfg.canonical()}\n" + ",".join(columns)
    np.savetxt(path, np.atleast_2d(rows), delimiter=",", fmt=CSV_FORMAT, header=header, comments="# ")
    return path


def write_json(path: Path, payload: dict, cfg: RunConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config": cfg.to_dict(), **payload}
    path.write_text(json.dumps(doc, indent=2, default=_json_default) + "\n")
    return path


def _json_default(obj: Any):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_svg_polylines(path: Path, polylines: list[np.ndarray], cfg: RunConfig,
                        width: int = 800, height: int = 600) -> Path:
    """Polylines (columns horizontal, vertical) scaled into an SVG canvas."""
    path.parent.mkdir(parents=True, exist_ok=True)
    pts = [p for p in polylines if len(p)]
    if pts:
        allp = np.vstack(pts)
        lo = allp.min(axis=0)
        span = np.maximum(allp.max(axis=0) - lo, 1e-12)
    else:
        lo, span = np.zeros(2), np.ones(2)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f"<!-- config: {cfg.canonical()} -->"]
    for p in pts:
        sx = (p[:, 0] - lo[0]) / span[0] * (width - 20) + 10
        sy = height - 10 - (p[:, 1] - lo[1]) / span[1] * (height - 20)
        coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx, sy))
        lines.append(f'<polyline fill="none" stroke="black" stroke-width="1" points="{coords}"/>')
    lines.append("</svg>")
    path.write_text("\n".join(lines) + "\n")
    return path


def _grid(lo: float, hi: float, count: int) -> list[float]:
    if count < 1:
        raise ConfigError("grid counts must be positive")
    return [float(v) for v in np.linspace(lo, hi, count)]


# ---------------------------------------------------------------- commands

def cmd_profile(cfg: RunConfig) -> int:
    from .branches import J_at, continue_branches, weak_limit_ubar
    from .errors import NearCaustic
    from .exact import u_exact_sweep
    from .landscape import Landscape
    from .rational import LaxOleinikPoint
    from .zd import u_zd

    data = load_data(cfg)
    eps = cfg.epsilons[0] if cfg.epsilons else None
    only_ubar = bool(cfg.options.get("only_ubar"))
    with_exact = bool(cfg.options.get("exact"))
    if eps is None and not only_ubar:
        raise ConfigError("profile needs --epsilon unless --only-ubar is given")
    solver = solver_config(cfg)
    rows = []
    for t in cfg.t:
        prev = None
        exact = None
        if with_exact and not only_ubar:
            exact = u_exact_sweep(data, t, cfg.x, [eps], solver)[0]
        for i, x in enumerate(cfg.x):
            pt = LaxOleinikPoint(t, x)
            try:
                prev = continue_branches(data, pt, prev)
            except NearCaustic:
                prev = None
                row = [t, x] + ([] if only_ubar else [math.nan]) + \
                      ([math.nan] if exact is not None else []) + [math.nan, J_at(data, pt)]
                rows.append(row)
                continue
            ubar = weak_limit_ubar(prev)
            row = [t, x]
            if not only_ubar:
                row.append(u_zd(data, pt, eps, prev))
            if exact is not None:
                row.append(exact[i])
            row += [ubar, prev.J]
            rows.append(row)
    columns = ["t", "x"] + ([] if only_ubar else ["u_zd"]) + (["u_exact"] if with_exact and not only_ubar else []) \
        + ["ubar", "J"]
    out = Path(cfg.output)
    written = [write_csv(out / "profile.csv", columns, np.array(rows, dtype=float), cfg)]
    heat = cfg.options.get("heatmap")
    if heat:
        t0, x0 = cfg.t[0], cfg.x[len(cfg.x) // 2]
        re = np.linspace(heat["re"][0], heat["re"][1], int(heat["n"]))
        im = np.linspace(heat["im"][0], heat["im"][1], int(heat["n"]))
        land = Landscape(data, LaxOleinikPoint(t0, x0))
        grid = []
        for b in im:
            for a in re:
                z = complex(a, b)
                if land.nearest_pole_distance(z) < 1e-9:
                    grid.append([a, b, math.nan])
                else:
                    grid.append([a, b, (-1j * land.h_cut(z)).real])
        written.append(write_csv(out / "heatmap.csv", ["re_z", "im_z", "re_minus_i_h"],
                                 np.array(grid), cfg))
    for p in written:
        print(p)
    return EXIT_OK


def _points(cfg: RunConfig) -> list[tuple[float, float]]:
    if len(cfg.t) == 1:
        return [(cfg.t[0], x) for x in cfg.x]
    if len(cfg.t) != len(cfg.x):
        raise ConfigError("give one t, or as many t values as x values")
    return list(zip(cfg.t, cfg.x))


def cmd_exact(cfg: RunConfig) -> int:
    from .exact import u_exact_sweep
    from .verify import exact_on_grid

    data = load_data(cfg)
    if not cfg.epsilons:
        raise ConfigError("exact needs at least one --epsilon")
    solver = solver_config(cfg)
    rows = []
    if len(cfg.t) == 1:
        vals = exact_on_grid(data, cfg.t[0], np.array(cfg.x), cfg.epsilons, solver, cfg.workers)
        for i, x in enumerate(cfg.x):
            for k, e in enumerate(cfg.epsilons):
                rows.append([cfg.t[0], x, e, vals[k, i]])
    else:
        for t, x in _points(cfg):
            vals = u_exact_sweep(data, t, [x], cfg.epsilons, solver)[:, 0]
            rows += [[t, x, e, v] for e, v in zip(cfg.epsilons, vals)]
    print(write_csv(Path(cfg.output) / "exact.csv", ["t", "x", "epsilon", "u_exact"], np.array(rows), cfg))
    return EXIT_OK


def cmd_zd(cfg: RunConfig) -> int:
    from .branches import solve_branches, weak_limit_ubar
    from .rational import LaxOleinikPoint
    from .zd import u_zd

    data = load_data(cfg)
    if not cfg.epsilons:
        raise ConfigError("zd needs at least one --epsilon")
    rows = []
    for t, x in _points(cfg):
        pt = LaxOleinikPoint(t, x)
        br = solve_branches(data, pt)
        for e in cfg.epsilons:
            rows.append([t, x, e, u_zd(data, pt, e, br), weak_limit_ubar(br), br.J])
    print(write_csv(Path(cfg.output) / "zd.csv", ["t", "x", "epsilon", "u_zd", "ubar", "J"],
                    np.array(rows), cfg))
    return EXIT_OK


def cmd_matsuno(cfg: RunConfig) -> int:
    from .matsuno import MatsunoSpec, u_matsuno

    order = int(cfg.options["order"])
    spec = MatsunoSpec.for_order(order)
    rows = [[t, x, spec.epsilon, u_matsuno(spec, t, x)] for t, x in _points(cfg)]
    print(write_csv(Path(cfg.output) / "matsuno.csv", ["t", "x", "epsilon", "u"], np.array(rows), cfg))
    return EXIT_OK


def cmd_caustics(cfg: RunConfig) -> int:
    from .branches import caustic_scan, discriminant_zeros_in_x

    data = load_data(cfg)
    opts = cfg.options
    t_range = (cfg.t[0], cfg.t[-1])
    x_range = (cfg.x[0], cfg.x[-1])
    resolution = (len(cfg.t), len(cfg.x))
    lines = caustic_scan(data, t_range, x_range, resolution)
    rows = [[k, p[0], p[1]] for k, line in enumerate(lines) for p in line]
    out = Path(cfg.output)
    print(write_csv(out / "caustics.csv", ["curve", "t", "x"], np.array(rows).reshape(-1, 3), cfg))
    print(write_svg_polylines(out / "caustics.svg", [line[:, ::-1] for line in lines], cfg))
    if opts.get("zeros_at") is not None:
        t = float(opts["zeros_at"])
        zeros = discriminant_zeros_in_x(data, t, x_range)
        print(write_csv(out / "discriminant_zeros.csv", ["t", "x"],
                        np.array([[t, z] for z in zeros]).reshape(-1, 2), cfg))
    return EXIT_OK


def cmd_stokes_trace(cfg: RunConfig) -> int:
    from .exact import critical_points
    from .rational import LaxOleinikPoint
    from .tracing import trace_steepest_descent

    data = load_data(cfg)
    pt = LaxOleinikPoint(cfg.t[0], cfg.x[0])
    rows, polylines, summary = [], [], []
    for k, y in enumerate(critical_points(data, pt)):
        for branch in range(4):
            kind = "descent" if branch < 2 else "ascent"
            try:
                tr = trace_steepest_descent(data, pt, complex(y), branch)
            except BOError as exc:
                summary.append({"saddle": k, "branch": branch, "kind": kind, "stop": f"failed: {exc}"})
                continue
            path_id = 4 * k + branch
            nodes = np.array(tr.nodes)
            rows += [[path_id, k, branch, z.real, z.imag] for z in nodes]
            polylines.append(np.column_stack([nodes.real, nodes.imag]))
            summary.append({"saddle": k, "branch": branch, "kind": kind, "stop": tr.stop,
                            "target": tr.target, "arclength": tr.arclength})
    out = Path(cfg.output)
    print(write_csv(out / "stokes.csv", ["path", "saddle", "branch", "re_z", "im_z"],
                    np.array(rows).reshape(-1, 5), cfg))
    print(write_svg_polylines(out / "stokes.svg", polylines, cfg))
    print(write_json(out / "stokes.json", {"paths": summary}, cfg))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from . import verify

    suite = cfg.options.get("suite", "all")
    names = list(verify.SUITES) if suite == "all" else [suite]
    solver = solver_config(cfg)
    results, written = [], []
    for name in names:
        if name not in verify.SUITES:
            raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(verify.SUITES)} or all")
        if name == "paper-table":
            cases, report = verify.reference_table_suite(solver, cfg.workers)
            written.append(write_csv(Path(cfg.output) / "raw_grid.csv",
                                     ["epsilon", "x", "u_exact", "u_zd"], report.grid, cfg))
        else:
            cases = verify.SUITES[name](config=solver, workers=cfg.workers,
                                        samples=int(cfg.options.get("samples", 200)))
        results += [c.to_dict() for c in cases]
    ok = all(r["passed"] for r in results)
    for r in results:
        print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['suite']}: {r['name']} = {r['value']:.6g} ({r['bound']})")
    for path in written:
        print(path)
    print(write_json(Path(cfg.output) / "report.json", {"passed": ok, "cases": results}, cfg))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_selftest(cfg: RunConfig) -> int:
    from . import verify

    cases = verify.matsuno_cross_suite(points=[(0.5, 0.3), (1.0, 1.2), (2.0, -0.5), (3.0, 2.5)])
    cases += verify.identities_suite(samples=int(cfg.options.get("samples", 10)))
    ok = all(c.passed for c in cases)
    for c in cases:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}: {c.name} = {c.value:.3g} ({c.bound})")
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "profile": cmd_profile,
    "exact": cmd_exact,
    "zd": cmd_zd,
    "matsuno": cmd_matsuno,
    "caustics": cmd_caustics,
    "stokes-trace": cmd_stokes_trace,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------- argument parsing

def _add_data(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--data", help="TOML or JSON file with 'poles' and 'residues' as [re, im] pairs")
    g.add_argument("--fixture", choices=FIXTURES, help="built-in initial data")


def _add_solver(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quad-tol", type=float, default=1e-10, help="relative quadrature tolerance")
    p.add_argument("--truncation", type=float, default=1e-16, help="relative integrand floor")
    p.add_argument("--delta", type=float, default=0.05, help="dominance margin for contour validation")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", default=".", help="output directory (default: current)")
    p.add_argument("--workers", type=int, default=None, help="worker processes (env BO_WORKERS)")
    p.add_argument("--config", help="JSON/TOML run configuration; command-line values are ignored")


def _add_points(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=float, nargs="+", required=False, help="time value(s)")
    p.add_argument("--x", type=float, nargs="+", help="x value(s)")
    p.add_argument("--x-grid", type=float, nargs=3, metavar=("A", "B", "COUNT"),
                   help="uniform x grid with COUNT points on [A, B]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bozd",
        description="Benjamin-Ono with rational initial data: exact solution by contour integrals, "
                    "zero-dispersion profile, soliton determinant, caustics and checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("profile", help="u_zd, ubar and J on a (t, x) grid; optional u_exact and heatmap")
    _add_data(p)
    _add_points(p)
    _add_solver(p)
    _add_common(p)
    p.add_argument("--t-grid", type=float, nargs=3, metavar=("A", "B", "COUNT"), help="uniform t grid")
    p.add_argument("--epsilon", type=float, help="dispersion parameter")
    p.add_argument("--exact", action="store_true", help="also evaluate u_exact (slow)")
    p.add_argument("--only-ubar", action="store_true", help="emit only the weak limit and J")
    p.add_argument("--heatmap", type=float, nargs=5, metavar=("RE0", "RE1", "IM0", "IM1", "N"),
                   help="Re(-i h) on an N x N complex grid at the first t and middle x")

    for name, helptext in (("exact", "u_exact by steepest-descent contour integrals"),
                           ("zd", "zero-dispersion profile u_zd at points")):
        p = sub.add_parser(name, help=helptext)
        _add_data(p)
        _add_points(p)
        _add_solver(p)
        _add_common(p)
        p.add_argument("--epsilon", type=float, nargs="+", required=True, help="dispersion parameter(s)")

    p = sub.add_parser("matsuno", help="soliton determinant for u0 = 2/(1+x^2) at eps = 1/N")
    _add_points(p)
    _add_common(p)
    p.add_argument("--order", "-N", type=int, required=True, help="soliton number N (eps = 1/N)")

    p = sub.add_parser("caustics", help="caustic curves in a (t, x) window")
    _add_data(p)
    _add_common(p)
    p.add_argument("--t-range", type=float, nargs=2, required=True)
    p.add_argument("--x-range", type=float, nargs=2, required=True)
    p.add_argument("--resolution", type=int, nargs=2, default=(200, 200), metavar=("NT", "NX"))
    p.add_argument("--zeros-at", type=float, help="also list discriminant zeros in x at this t")

    p = sub.add_parser("stokes-trace", help="steepest paths from every critical point at (t, x)")
    _add_data(p)
    _add_common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("verify", help="run verification suites; exit 0 iff all pass")
    _add_solver(p)
    _add_common(p)
    p.add_argument("--suite", default="all",
                   choices=["all", "paper-table", "slope", "l2", "matsuno-cross", "identities",
                            "contours", "boundedness", "caustics"])
    p.add_argument("--samples", type=int, default=200, help="random configurations for identities")

    p = sub.add_parser("selftest", help="quick cross-solver and identity checks")
    _add_common(p)
    p.add_argument("--samples", type=int, default=10)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    from .verify import worker_count

    if getattr(args, "config", None):
        path = Path(args.config)
        if path.suffix.lower() == ".json":
            doc = json.loads(path.read_text())
        else:
            import tomli

            doc = tomli.loads(path.read_text())
        doc.setdefault("subcommand", args.subcommand)
        return RunConfig.from_dict(doc)
    cfg = RunConfig(subcommand=args.subcommand, output=args.output)
    cfg.workers = args.workers if args.workers is not None else worker_count()
    if getattr(args, "data", None):
        cfg.data = data_dict_from_file(args.data)
    elif getattr(args, "fixture", None):
        cfg.data = fixture_dict(args.fixture)
    if hasattr(args, "quad_tol"):
        cfg.solver = {"quad_tol": args.quad_tol, "truncation": args.truncation, "delta": args.delta}
    sc = args.subcommand
    if sc in ("profile", "exact", "zd", "matsuno"):
        if getattr(args, "t_grid", None):
            cfg.t = _grid(args.t_grid[0], args.t_grid[1], int(args.t_grid[2]))
        elif args.t:
            cfg.t = [float(v) for v in args.t]
        else:
            raise ConfigError("give --t (or --t-grid)")
        if args.x_grid:
            cfg.x = _grid(args.x_grid[0], args.x_grid[1], int(args.x_grid[2]))
        elif args.x:
            cfg.x = [float(v) for v in args.x]
        else:
            raise ConfigError("give --x or --x-grid")
    if sc == "profile":
        cfg.epsilons = [args.epsilon] if args.epsilon is not None else []
        cfg.options = {"exact": args.exact, "only_ubar": args.only_ubar}
        if args.heatmap:
            cfg.options["heatmap"] = {"re": args.heatmap[0:2], "im": args.heatmap[2:4], "n": int(args.heatmap[4])}
    elif sc in ("exact", "zd"):
        cfg.epsilons = [float(e) for e in args.epsilon]
    elif sc == "matsuno":
        cfg.options = {"order": args.order}
    elif sc == "caustics":
        cfg.t = _grid(args.t_range[0], args.t_range[1], args.resolution[0])
        cfg.x = _grid(args.x_range[0], args.x_range[1], args.resolution[1])
        cfg.options = {"zeros_at": args.zeros_at}
    elif sc == "stokes-trace":
        cfg.t, cfg.x = [args.t], [args.x]
    elif sc == "verify":
        cfg.options = {"suite": args.suite, "samples": args.samples}
    elif sc == "selftest":
        cfg.options = {"samples": args.samples}
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"bozd {args.subcommand}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"bozd {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BOError as exc:
        print(f"bozd {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
