"""Error tables, convergence slopes and L^2 checks comparing u_exact with u_zd."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as scipy_integrate

from .branches import J_at, continue_branches, discriminant_at, discriminant_zeros_in_x, solve_branches
from .errors import InsufficientData, JTooLarge, NearCaustic, QuadratureFailure
from .exact import SolverConfig, u_exact_sweep
from .quadrature import integrate
from .rational import LaxOleinikPoint, RationalInitialData, eval_u0, two_pole_fixture
from .zd import u_zd, u_zd_sweep

# published sup-norm table: Fig-1 data, t = 4.5, x in [4, 5]
TABLE_DATA_T = 4.5
TABLE_INTERVAL = (4.0, 5.0)
TABLE_ROWS = ((2.0 ** -5, 1000, 0.056871), (2.0 ** -6, 10000, 0.028720), (2.0 ** -7, 10000, 0.014503))
TABLE_TOL = 1e-3
SLOPE_BOUNDS = (0.85, 1.15)
CAUSTIC_EXCLUSION = 1e-3


def worker_count(default: int = 1) -> int:
    """Worker count from BO_WORKERS, else ``default``."""
    raw = os.environ.get("BO_WORKERS")
    if raw is None or raw.strip() == "":
        return default
    count = int(raw)
    if count < 1:
        raise ValueError(f"BO_WORKERS must be a positive integer, got {raw!r}")
    return count


def sample_grid(a: float, b: float, m: int) -> np.ndarray:
    """x_k = a + (k/m)(b - a), k = 0..m."""
    return a + (np.arange(m + 1) / m) * (b - a)


def require_caustic_free(data: RationalInitialData, t: float, xs: np.ndarray) -> None:
    """Raise NearCaustic if the discriminant changes sign on the grid."""
    signs = np.sign([discriminant_at(data, LaxOleinikPoint(t, float(x))) for x in xs])
    if np.any(signs == 0.0) or np.any(signs[1:] != signs[:-1]):
        k = int(np.argmax((signs[1:] != signs[:-1]) | (signs[1:] == 0.0)))
        raise NearCaustic(f"caustic between x = {xs[k]:.6g} and x = {xs[k + 1]:.6g} at t = {t}")


def _sweep_chunk(args) -> np.ndarray:
    data, t, xs, epsilons, config = args
    return u_exact_sweep(data, t, xs, epsilons, config)


def exact_on_grid(data: RationalInitialData, t: float, xs: np.ndarray, epsilons: Sequence[float],
                  config: SolverConfig | None = None, workers: int | None = None) -> np.ndarray:
    """u_exact for every eps on the grid, shape (len(epsilons), len(xs)).

    Contiguous chunks go to separate processes; each point is computed
    independently, so the values do not depend on the worker count.
    """
    workers = worker_count() if workers is None else workers
    xs = np.asarray(xs, dtype=float)
    if workers <= 1 or len(xs) < 2 * workers:
        return u_exact_sweep(data, t, xs, epsilons, config)
    chunks = np.array_split(xs, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_sweep_chunk, [(data, t, c, list(epsilons), config) for c in chunks]))
    return np.concatenate(parts, axis=1)


def supnorm_error(data: RationalInitialData, t: float, a: float, b: float, m: int, epsilon: float,
                  config: SolverConfig | None = None, workers: int | None = None) -> float:
    """max_k |u_exact - u_zd| over x_k = a + (k/m)(b - a)."""
    xs = sample_grid(a, b, m)
    require_caustic_free(data, t, xs)
    exact = exact_on_grid(data, t, xs, [epsilon], config, workers)[0]
    return float(np.max(np.abs(exact - u_zd_sweep(data, t, xs, epsilon))))


@dataclass
class SweepReport:
    interval: tuple[float, float]
    t: float
    epsilons: list[float]
    m: list[int]
    max_errors: list[float]
    fitted_slope: float | None = None
    wall_times: list[float] = field(default_factory=list)
    grid: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if any(mm < 100 for mm in self.m):
            raise ValueError("m must be at least 100")
        if any(e2 >= e1 for e1, e2 in zip(self.epsilons, self.epsilons[1:])):
            raise ValueError("epsilons must be strictly decreasing")

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("grid")
        return out


def error_sweep(data: RationalInitialData, t: float, interval: tuple[float, float],
                epsilons: Sequence[float], ms: Sequence[int], reference: str = "exact",
                config: SolverConfig | None = None, workers: int | None = None) -> SweepReport:
    """Sup-norm errors for several eps on nested grids.

    When every grid is a subgrid of the finest one, u_exact is evaluated once
    per eps on the finest grid and subsampled.  ``reference`` selects the
    comparison solution: "exact" (contour integrals) or "matsuno" (Lorentzian
    data with eps = 1/N only).
    """
    a, b = interval
    epsilons = [float(e) for e in epsilons]
    ms = [int(m) for m in ms]
    fine = max(ms)
    xs = sample_grid(a, b, fine)
    require_caustic_free(data, t, xs[:: max(1, fine // 1000)])
    start = time.perf_counter()
    if reference == "exact":
        if all(fine % m == 0 for m in ms):
            ref = exact_on_grid(data, t, xs, epsilons, config, workers)
            ref_rows = [ref[i, :: fine // m] for i, m in enumerate(ms)]
        else:
            ref_rows = [exact_on_grid(data, t, sample_grid(a, b, m), [e], config, workers)[0]
                        for e, m in zip(epsilons, ms)]
    elif reference == "matsuno":
        from .matsuno import MatsunoSpec, u_matsuno_grid

        ref_rows = []
        for e, m in zip(epsilons, ms):
            order = round(1.0 / e)
            if abs(order * e - 1.0) > 1e-12:
                raise ValueError(f"matsuno reference needs eps = 1/N, got {e}")
            ref_rows.append(u_matsuno_grid(MatsunoSpec.for_order(order), t, sample_grid(a, b, m)))
    else:
        raise ValueError(f"unknown reference {reference!r}")
    ref_time = time.perf_counter() - start
    errors, times, raw = [], [], []
    for e, m, row in zip(epsilons, ms, ref_rows):
        t0 = time.perf_counter()
        grid_x = sample_grid(a, b, m)
        zd = u_zd_sweep(data, t, grid_x, e)
        errors.append(float(np.max(np.abs(row - zd))))
        times.append(time.perf_counter() - t0 + ref_time / len(epsilons))
        raw.append(np.column_stack([np.full(grid_x.size, e), grid_x, row, zd]))
    report = SweepReport((a, b), t, epsilons, ms, errors, wall_times=times, grid=np.vstack(raw))
    if len(epsilons) >= 3:
        report.fitted_slope = loglog_slope(report)
    return report


def loglog_slope(report_or_pairs) -> float:
    """Least-squares slope of log(error) against log(eps) over the three smallest eps."""
    if isinstance(report_or_pairs, SweepReport):
        pairs = list(zip(report_or_pairs.epsilons, report_or_pairs.max_errors))
    else:
        pairs = [(float(e), float(err)) for e, err in report_or_pairs]
    if len(pairs) < 3:
        raise InsufficientData(f"need at least 3 (eps, error) pairs, got {len(pairs)}")
    pairs = sorted(pairs)[:3]
    eps = np.log([p[0] for p in pairs])
    err = np.log([p[1] for p in pairs])
    return float(np.polyfit(eps, err, 1)[0])


# ---------------------------------------------------------------- L^2 check

@dataclass
class L2Check:
    norm_uzd_sq: float
    norm_u0_sq: float
    rel_gap: float
    window: tuple[float, float]
    caustics: list[float]


def _u0_sq_integral(data: RationalInitialData, lo: float, hi: float, tol: float) -> float:
    val, _ = scipy_integrate.quad(lambda y: float(eval_u0(data, y)) ** 2, lo, hi,
                                  epsabs=tol, epsrel=tol, limit=500)
    return val


def _norm_u0_sq(data: RationalInitialData, tol: float) -> float:
    centers = sorted(float(p.real) for p in data.p)
    pieces = [-math.inf] + centers + [math.inf]
    return sum(_u0_sq_integral(data, lo, hi, tol) for lo, hi in zip(pieces[:-1], pieces[1:]))


def _branch_tail(data: RationalInitialData, t: float, x_edge: float, side: int, tol: float) -> float:
    """int of (u_0^B)^2 beyond x_edge in a J = 0 region, through x = y + 2t u0(y)."""
    y = float(solve_branches(data, LaxOleinikPoint(t, x_edge)).real_roots[0])
    u_edge = float(eval_u0(data, y))
    # d x = (1 + 2t u0'(y)) dy, and int u0^2 u0' dy = u0^3/3
    if side > 0:
        return _u0_sq_integral(data, y, math.inf, tol) - 2.0 * t * u_edge ** 3 / 3.0
    return _u0_sq_integral(data, -math.inf, y, tol) + 2.0 * t * u_edge ** 3 / 3.0


def l2_profile_check(data: RationalInitialData, t: float, epsilon: float,
                     window: tuple[float, float] | None = None, quad_tol: float = 1e-8,
                     delta: float = CAUSTIC_EXCLUSION, scan_points: int = 4000) -> L2Check:
    """Compare int (u_zd)^2 dx with int u0^2 dx for data with at most one phase.

    The oscillatory window is integrated adaptively with delta-neighbourhoods of
    caustic points removed; the two J = 0 tails are added exactly through the
    characteristic change of variables.
    """
    sup = data.sup_u0()
    reach = 10.0 * (1.0 + float(np.max(np.abs(data.p))) + 2.0 * t * sup)
    caustics = [float(v) for v in discriminant_zeros_in_x(data, t, (-reach, reach), scan_points)]
    if window is None:
        lo = min(caustics, default=0.0) - 1.0
        hi = max(caustics, default=0.0) + 1.0
    else:
        lo, hi = window
    scan = np.linspace(lo, hi, scan_points)
    prev = None
    js = []
    for x in scan:
        pt = LaxOleinikPoint(t, float(x))
        try:
            prev = continue_branches(data, pt, prev)
            js.append(prev.J)
        except NearCaustic:
            js.append(J_at(data, pt))
    if max(js) >= 2:
        raise JTooLarge(f"J reaches {max(js)} inside [{lo}, {hi}] at t = {t}")
    for edge in (lo, hi):
        if J_at(data, LaxOleinikPoint(t, edge)) != 0:
            raise ValueError(f"window edge x = {edge} is not in a J = 0 region")
    inside = sorted(c for c in caustics if lo < c < hi)
    # integration pieces between excluded caustic neighbourhoods
    cuts = [lo] + [v for c in inside for v in (c - delta, c + delta)] + [hi]
    total = 0.0
    for a, b in zip(cuts[0::2], cuts[1::2]):
        if b <= a:
            continue
        mid = LaxOleinikPoint(t, 0.5 * (a + b))
        oscillatory = J_at(data, mid) >= 1
        spacing = epsilon if oscillatory else 0.25
        count = max(2, int(math.ceil((b - a) / spacing)))
        pts = np.linspace(a, b, count + 1)

        def f(xs: np.ndarray) -> np.ndarray:
            return np.array([u_zd(data, LaxOleinikPoint(t, float(x)), epsilon) ** 2 for x in xs])[:, None]

        try:
            val, _ = integrate(f, pts, rtol=quad_tol, atol=quad_tol * (b - a), max_panels=20000)
        except NearCaustic as exc:
            raise QuadratureFailure(f"caustic inside integration piece [{a}, {b}]: {exc}") from exc
        total += float(val[0])
    total += _branch_tail(data, t, lo, -1, quad_tol) + _branch_tail(data, t, hi, +1, quad_tol)
    norm_u0 = _norm_u0_sq(data, quad_tol)
    return L2Check(total, norm_u0, abs(total - norm_u0) / norm_u0, (lo, hi), inside)


# ---------------------------------------------------------------- suites

@dataclass
class CaseResult:
    suite: str
    name: str
    value: float
    bound: str
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def reference_table_suite(config: SolverConfig | None = None, workers: int | None = None,
                      scale_m: float = 1.0) -> tuple[list[CaseResult], SweepReport]:
    """Sup-norm table for the two-pole data on [4, 5] at t = 4.5 and its slope."""
    data = two_pole_fixture()
    eps = [row[0] for row in TABLE_ROWS]
    ms = [max(100, int(round(row[1] * scale_m))) for row in TABLE_ROWS]
    report = error_sweep(data, TABLE_DATA_T, TABLE_INTERVAL, eps, ms, "exact", config, workers)
    cases = []
    for (e, m, target), err, mm in zip(TABLE_ROWS, report.max_errors, ms):
        cases.append(CaseResult("paper-table", f"eps=2^{round(math.log2(e))} m={mm}", err,
                                f"{target} +/- {TABLE_TOL}", abs(err - target) <= TABLE_TOL))
    slope = report.fitted_slope
    cases.append(CaseResult("paper-table", "loglog slope", slope,
                            f"in [{SLOPE_BOUNDS[0]}, {SLOPE_BOUNDS[1]}]",
                            SLOPE_BOUNDS[0] <= slope <= SLOPE_BOUNDS[1]))
    return cases, report


def matsuno_cross_suite(points: Sequence[tuple[float, float]] | None = None,
                        epsilons: Sequence[float] = (0.25, 0.125), bound: float = 1e-6,
                        config: SolverConfig | None = None) -> list[CaseResult]:
    """u_exact against the soliton determinant for u0 = 2/(1 + x^2)."""
    from .exact import u_exact
    from .matsuno import MatsunoSpec, u_matsuno
    from .rational import lorentzian

    data = lorentzian()
    if points is None:
        rng = np.random.default_rng(20240611)
        points = [(float(rng.uniform(0.2, 3.0)), float(rng.uniform(-2.0, 6.0))) for _ in range(20)]
    worst = 0.0
    for e in epsilons:
        spec = MatsunoSpec.for_order(round(1.0 / e))
        for t, x in points:
            pt = LaxOleinikPoint(t, x)
            worst = max(worst, abs(u_exact(data, pt, e, config) - u_matsuno(spec, t, x)))
    return [CaseResult("matsuno-cross", f"{len(points)} points x {len(epsilons)} eps", worst,
                       f"< {bound}", worst < bound)]


def _max_over(samples: int, check: Callable[[np.random.Generator], float], seed: int) -> float:
    rng = np.random.default_rng(seed)
    return max(check(rng) for _ in range(samples))


def identities_suite(samples: int = 200, seed: int = 7) -> list[CaseResult]:
    """Algebraic identities of the branch and profile construction on random data."""
    from . import identities

    cases = []
    for name, fn, bound in identities.CHECKS:
        worst = _max_over(samples, fn, seed)
        cases.append(CaseResult("identities", name, worst, f"< {bound}", worst < bound))
    return cases


# caustic-free stretches of the one-phase zone of the two-pole data at t = 4.5
SLOPE_T = 4.5
SLOPE_INTERVALS = ((0.5, 1.5), (2.0, 3.0), (4.0, 5.0), (5.5, 6.5), (10.0, 11.0))
SLOPE_EPSILONS = (2.0 ** -5, 2.0 ** -6, 2.0 ** -7)
# Lorentzian data against the soliton determinant, inside the one-phase zone at t = 1.
# Its waves are trains of narrow peaks (r ~ 0.7-0.9), so the grid must be dense and
# the interval kept away from the caustics at x ~ 2.72 and x ~ 4.06.
LORENTZ_SLOPE_T = 1.0
LORENTZ_SLOPE_INTERVAL = (3.0, 3.2)
LORENTZ_SLOPE_EPSILONS = (1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0)
LORENTZ_SLOPE_M = 10000


def slope_suite(m: int = 1000, config: SolverConfig | None = None,
                workers: int | None = None) -> list[CaseResult]:
    """Log-log slope of the sup-norm error on several intervals away from caustics."""
    from .rational import lorentzian

    lo, hi = SLOPE_BOUNDS
    cases = []
    data = two_pole_fixture()
    for interval in SLOPE_INTERVALS:
        report = error_sweep(data, SLOPE_T, interval, SLOPE_EPSILONS, [m] * 3, "exact", config, workers)
        slope = report.fitted_slope
        cases.append(CaseResult("slope", f"two-pole t={SLOPE_T} x in [{interval[0]}, {interval[1]}]",
                                slope, f"in [{lo}, {hi}]", lo <= slope <= hi))
    report = error_sweep(lorentzian(), LORENTZ_SLOPE_T, LORENTZ_SLOPE_INTERVAL, LORENTZ_SLOPE_EPSILONS,
                         [LORENTZ_SLOPE_M] * 3, "matsuno")
    slope = report.fitted_slope
    cases.append(CaseResult("slope", f"lorentzian vs soliton determinant t={LORENTZ_SLOPE_T} "
                            f"x in [{LORENTZ_SLOPE_INTERVAL[0]}, {LORENTZ_SLOPE_INTERVAL[1]}]",
                            slope, f"in [{lo}, {hi}]", lo <= slope <= hi))
    return cases


L2_T = 1.0
L2_EPSILONS = (2.0 ** -5, 2.0 ** -6, 2.0 ** -7)
L2_REL_GAP = 0.02
# before the first caustic of the Lorentzian data (t = 2/(3 sqrt 3) ~ 0.385)
L2_SMOOTH_T = 0.3
L2_SMOOTH_TOL = 1e-8
L2_SMOOTH_WINDOW = (-3.0, 5.0)


def l2_suite(quad_tol: float = 1e-8) -> list[CaseResult]:
    """L^2 norm of u_zd against that of u0 for the Lorentzian data."""
    from .rational import lorentzian

    data = lorentzian()
    gaps = [l2_profile_check(data, L2_T, e, quad_tol=quad_tol).rel_gap for e in L2_EPSILONS]
    cases = [CaseResult("l2", f"rel gap t={L2_T} eps=2^{round(math.log2(e))}", g, "recorded", True)
             for e, g in zip(L2_EPSILONS, gaps)]
    cases.append(CaseResult("l2", f"rel gap at smallest eps", gaps[-1], f"< {L2_REL_GAP}",
                            gaps[-1] < L2_REL_GAP))
    decreasing = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    cases.append(CaseResult("l2", "rel gap decreasing in eps", float(decreasing), "== 1", decreasing))
    smooth = l2_profile_check(data, L2_SMOOTH_T, L2_EPSILONS[0], window=L2_SMOOTH_WINDOW,
                              quad_tol=1e-11).rel_gap
    cases.append(CaseResult("l2", f"norm preserved before breaking t={L2_SMOOTH_T}", smooth,
                            f"< {L2_SMOOTH_TOL}", smooth < L2_SMOOTH_TOL))
    return cases


BOUND_FACTOR = 9.0
BOUND_GRIDS = (
    ("lorentzian", (0.3, 0.6, 1.0, 2.0, 3.0), (-4.0, 10.0)),
    ("two-pole", (1.0, 3.0, 4.5), (-4.0, 24.0)),
)
BOUND_EPSILONS = (2.0 ** -3, 2.0 ** -5, 2.0 ** -7)


def boundedness_suite(points: int = 281) -> list[CaseResult]:
    """max |u_zd| / sup |u0| on sampled grids, counting only points with J <= 1."""
    from .rational import lorentzian

    fixtures = {"lorentzian": lorentzian(), "two-pole": two_pole_fixture()}
    cases = []
    for name, times, (a, b) in BOUND_GRIDS:
        data = fixtures[name]
        sup = data.sup_u0()
        worst = 0.0
        for t in times:
            prev = None
            for x in np.linspace(a, b, points):
                pt = LaxOleinikPoint(t, float(x))
                try:
                    prev = continue_branches(data, pt, prev)
                except NearCaustic:
                    prev = None
                    continue
                if prev.J > 1:
                    continue
                for e in BOUND_EPSILONS:
                    worst = max(worst, abs(u_zd(data, pt, e, prev)) / sup)
        cases.append(CaseResult("boundedness", f"{name} max |u_zd| / sup |u0|", worst,
                                f"<= {BOUND_FACTOR}", worst <= BOUND_FACTOR))
    return cases


CAUSTIC_SAMPLES = 10


def caustic_window(data: RationalInitialData, t: float) -> tuple[float, float]:
    """An x-interval containing every caustic point at time t.

    Caustic points are x = y + 2t u0(y) with 1 + 2t u0'(y) = 0.  Away from the
    poles |u0'(y)| <= 2 sum |c_n| / (y - Re p_n)^2, so such y lie within
    sqrt(4t sum |c_n|) of the nearest pole's real part.
    """
    spread = math.sqrt(4.0 * t * float(np.sum(np.abs(data.c)))) + 1.0
    re_p = data.p.real
    shift = 2.0 * t * data.sup_u0()
    return float(re_p.min() - spread - shift), float(re_p.max() + spread + shift)


def caustic_count_suite(samples: int = CAUSTIC_SAMPLES, seed: int = 11,
                        scan_points: int = 20000) -> list[CaseResult]:
    """Number of real discriminant zeros in x against the 4N bound."""
    from .identities import random_data

    rng = np.random.default_rng(seed)
    worst_margin = -math.inf
    worst = ""
    for _ in range(samples):
        data = random_data(rng, max_poles=3)
        t = float(rng.uniform(0.2, 5.0))
        zeros = discriminant_zeros_in_x(data, t, caustic_window(data, t), scan_points)
        margin = len(zeros) - 4 * data.N
        if margin > worst_margin:
            worst_margin, worst = margin, f"N={data.N} t={t:.3f}: {len(zeros)} zeros"
    return [CaseResult("caustics", f"count - 4N over {samples} cases (worst {worst})",
                       float(worst_margin), "<= 0", worst_margin <= 0)]


CONTOUR_GRIDS = (
    ("lorentzian", (0.2, 3.0), (-2.0, 6.0)),
    ("two-pole", (0.5, 4.5), (-2.0, 20.0)),
)
PERTURBATION = 1e-3
PERTURBATION_POINTS = (
    ("lorentzian", 1.0, 2.0, 0.125),
    ("lorentzian", 0.5, 0.3, 2.0 ** -5),
    ("two-pole", 1.0, 0.5, 0.125),
    ("two-pole", 4.5, 4.3, 2.0 ** -5),
)


def contour_suite(config: SolverConfig | None = None, size: int = 10,
                  seed: int = 3) -> list[CaseResult]:
    """Dominance validation on (t, x) grids and invariance under node jitter."""
    from .errors import BOError
    from .exact import build_contours, u_exact, u_exact_perturbed
    from .rational import lorentzian

    config = config or SolverConfig()
    fixtures = {"lorentzian": lorentzian(), "two-pole": two_pole_fixture()}
    cases = []
    for name, (t0, t1), (x0, x1) in CONTOUR_GRIDS:
        data = fixtures[name]
        failures = 0
        for t in np.linspace(t0, t1, size):
            for x in np.linspace(x0, x1, size):
                try:
                    build_contours(data, LaxOleinikPoint(float(t), float(x)), config)
                except BOError:
                    failures += 1
        cases.append(CaseResult("contours", f"{name} {size}x{size} grid failures", float(failures),
                                "== 0", failures == 0))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for name, t, x, e in PERTURBATION_POINTS:
        data = fixtures[name]
        pt = LaxOleinikPoint(t, x)
        worst = max(worst, float(abs(u_exact_perturbed(data, pt, e, PERTURBATION, rng, config)
                                     - u_exact(data, pt, e, config))))
    bound = 10.0 * config.quad_tol
    cases.append(CaseResult("contours", f"node jitter {PERTURBATION}", worst, f"< {bound:g}", worst < bound))
    return cases


SUITES = {
    "paper-table": lambda **kw: reference_table_suite(kw.get("config"), kw.get("workers"))[0],
    "slope": lambda **kw: slope_suite(config=kw.get("config"), workers=kw.get("workers")),
    "l2": lambda **kw: l2_suite(),
    "matsuno-cross": lambda **kw: matsuno_cross_suite(config=kw.get("config")),
    "identities": lambda **kw: identities_suite(kw.get("samples", 200)),
    "contours": lambda **kw: contour_suite(kw.get("config")),
    "boundedness": lambda **kw: boundedness_suite(),
    "caustics": lambda **kw: caustic_count_suite(),
}


__all__ = [
    "TABLE_ROWS", "TABLE_TOL", "SLOPE_BOUNDS", "worker_count", "sample_grid",
    "require_caustic_free", "exact_on_grid", "supnorm_error", "SweepReport", "error_sweep",
    "loglog_slope", "L2Check", "l2_profile_check", "CaseResult", "reference_table_suite",
    "matsuno_cross_suite", "identities_suite", "slope_suite", "l2_suite", "boundedness_suite",
    "caustic_window", "caustic_count_suite", "contour_suite", "SUITES",
]
