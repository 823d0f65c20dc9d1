"""Exact solution u(t, x; eps) = 2 Re(det A / det B) from steepest-descent integrals.

Each contour W_0..W_N is decomposed into steepest-descent paths (thimbles)
J_k through the 2N+1 saddles y_k of h:

    W_n = sum_k T_nk J_k,

where T_nk is a finite sum of signed monodromy factors exp(2 pi m.a / eps)
(m an integer vector, a the residues of all 2N logarithms).  The integer data
come from intersecting W_n with the steepest-ascent paths K_k dual to J_k: each
crossing contributes the local intersection sign times the factor relating the
branch of h on W_n to the branch continued along K_k from y_k.  T does not
depend on eps, so one trace serves every eps at the same (t, x).

With T known, Cauchy-Binet gives

    det A = sum_{|S| = N+1} det T[:, S] * prod_{k in S} e^{E_k/eps} * det X_A[S, :],

with X_A[k, :] the thimble integrals normalised by their saddle value
e^{E_k/eps}, E = -i h.  All exponentials are combined in log space, so the
huge and tiny factors of the raw matrices never materialise.

W_0 is the real line (homologous to the contour from the 3pi/4 valley to the
-pi/4 valley beneath all cuts).  For a pole with Im c_n > 0 the integrand
vanishes at p_n and W_n is a nonzero multiple of the ray from p_n out to
infinity along its cut; for Im c_n <= 0 the loop around the cut is used.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .branches import BranchData, solve_branches
from .errors import (
    BudgetExceeded,
    ConfigError,
    ContourConstructionFailure,
    QuadratureFailure,
    SingularB,
)
from .landscape import CUT_ANGLE, CUT_DIR, TWO_PI, Landscape
from .quadrature import integrate
from .rational import LaxOleinikPoint, RationalInitialData
from .tracing import ASCENT, Trace, TraceLimits, default_limits, saddle_directions, trace


# --------------------------------------------------------------------------- config

# Rotation of the steepest-descent exponent, see Landscape.eta.
PATH_ROTATION = 0.05

@dataclass(frozen=True)
class SolverConfig:
    quad_tol: float = 1e-10
    truncation: float = 1e-16
    delta: float = 0.05
    manual_paths: dict | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.truncation <= 1e-8):
            raise ConfigError(f"truncation must lie in (0, 1e-8], got {self.truncation}")
        if not (0.0 < self.quad_tol <= 1e-6):
            raise ConfigError(f"quad_tol must lie in (0, 1e-6], got {self.quad_tol}")
        if not self.delta > 0.0:
            raise ConfigError(f"delta must be positive, got {self.delta}")

    def level_drop(self, epsilon: float) -> float:
        """Depth below the saddle value at which the integrand is negligible."""
        return epsilon * math.log(1.0 / self.truncation) + 10.0 * epsilon

    def to_dict(self) -> dict:
        return {"quad_tol": self.quad_tol, "truncation": self.truncation, "delta": self.delta}


@dataclass
class ContourPath:
    """Polyline with analytically continued h at its nodes."""

    nodes: np.ndarray
    h_values: np.ndarray
    role: str
    dominant_saddles: list[complex] = field(default_factory=list)
    args: np.ndarray | None = None  # continued log arguments per node

    def reversed(self) -> "ContourPath":
        return ContourPath(self.nodes[::-1].copy(), self.h_values[::-1].copy(), self.role,
                           list(self.dominant_saddles),
                           None if self.args is None else self.args[::-1].copy())


def critical_points(data: RationalInitialData, pt: LaxOleinikPoint) -> np.ndarray:
    """The 2N+1 zeros of h': real roots first (descending), then upper, then lower."""
    return solve_branches(data, pt).all_roots


# --------------------------------------------------------------------------- integrands

INTEGRAND_U0 = "u0"
INTEGRAND_ONE = "1"


def integrand_values(land: Landscape, z: np.ndarray) -> np.ndarray:
    """Columns [u0, 1, 1/(z-p_1), ..., 1/(z-p_N)] at the points z."""
    inv = 1.0 / (z[:, None] - land.q)
    u0 = inv @ land.a
    out = np.empty((len(z), land.N + 2), dtype=complex)
    out[:, 0] = u0
    out[:, 1] = 1.0
    out[:, 2:] = inv[:, : land.N]
    return out


def _kind_column(kind, N: int) -> int:
    if kind in (1, "1", INTEGRAND_ONE):
        return 1
    if kind == INTEGRAND_U0:
        return 0
    if isinstance(kind, str) and kind.startswith("pole:"):
        k = int(kind.split(":", 1)[1])
        if not 1 <= k <= N:
            raise ConfigError(f"pole index {k} out of range 1..{N}")
        return 1 + k
    raise ConfigError(f"unknown integrand kind {kind!r}; use '1', 'u0' or 'pole:k'")


# --------------------------------------------------------------------------- thimbles

@dataclass
class _Half:
    s: np.ndarray
    z: np.ndarray
    zp: np.ndarray
    dargs: np.ndarray  # theta(z) - theta(saddle)


class Thimble:
    """Steepest-descent path of Re(-i h) through one saddle.

    Parametrised by s with h(z(s)) = h(y) - i s^2, i.e. Re(-i h) drops by s^2
    and Im(-i h) stays fixed.  The positive-s half leaves y along the descent
    direction used to orient the path.
    """

    def __init__(self, land: Landscape, saddle: complex, index: int, args_ref: np.ndarray,
                 s_max: float, avoid: np.ndarray):
        self.land = land
        self.saddle = complex(saddle)
        self.index = index
        self.args_ref = np.array(args_ref, dtype=float)
        self.h_ref = land.h(self.saddle, self.args_ref)
        self.E_ref = -1j * self.h_ref
        hpp = land.hsecond(self.saddle)
        descent, _ = saddle_directions(land, self.saddle, land.data.scale)
        self.descent = descent
        self.w1 = math.sqrt(2.0 / abs(hpp)) * descent
        # h(z(s)) - h(y) = -i e^{-i eta} s^2, so Re(-i h) drops by cos(eta) s^2
        self.drop = cmath.exp(-1j * land.eta)
        self.avoid = np.asarray(avoid, dtype=complex)
        self.s_max = s_max
        self.halves = [self._skeleton(+1.0), self._skeleton(-1.0)]

    # ---- continuation along the path

    def _newton(self, z: complex, s: float, z0: complex, dargs0: np.ndarray):
        land = self.land
        y = self.saddle
        for _ in range(30):
            dargs = dargs0 + np.angle((z - land.q) / (z0 - land.q))
            d = complex(land.h_diff(z, y, dargs)) + 1j * self.drop * s * s
            hp = complex(land.hprime_from(z, y))
            step = d / hp
            z = z - step
            if abs(step) < 1e-14 * (1.0 + abs(z)):
                dargs = dargs0 + np.angle((z - land.q) / (z0 - land.q))
                return z, dargs, True
        return z, dargs0, False

    def _distance(self, z: complex) -> float:
        return float(np.min(np.abs(self.avoid - z)))

    def _skeleton(self, sign: float) -> _Half:
        land = self.land
        y = self.saddle
        ss = [0.0]
        zs = [y]
        zps = [sign * self.w1]
        dargs = [np.zeros(len(land.q))]
        s = 0.0
        width = abs(self.w1)
        for _ in range(100000):
            if s >= self.s_max:
                break
            z, zp = zs[-1], zps[-1]
            d = self._distance(z)
            ds = min(self.s_max - s, 0.1 * d / max(abs(zp), 1e-300), 0.25 * self.s_max)
            while True:
                s_new = s + ds
                guess = z + zp * ds
                z_new, da_new, ok = self._newton(guess, s_new, z, dargs[-1])
                if ok and abs(z_new - guess) < 0.3 * ds * abs(zp) + 1e-12 * width:
                    break
                ds *= 0.5
                if ds < 1e-14 * (1.0 + s):
                    raise ContourConstructionFailure(
                        f"descent path from saddle {y:.6g} stalled at s={s:.6g}",
                        dump={"saddle": y, "nodes": zs})
            hp = complex(land.hprime_from(z_new, y))
            s = s_new
            ss.append(s)
            zs.append(z_new)
            zps.append(-2j * self.drop * s / hp)
            dargs.append(da_new)
            if self._pole_distance(z_new) < 1e-12 * land.data.scale:
                break
        return _Half(np.array(ss), np.array(zs), np.array(zps), np.array(dargs))

    def _pole_distance(self, z: complex) -> float:
        return float(np.min(np.abs(self.land.q - z)))

    # ---- evaluation at arbitrary s (vectorised)

    def positions(self, half: _Half, s: np.ndarray):
        """z(s), z'(s) and continued arguments for s inside the skeleton range."""
        land = self.land
        idx = np.clip(np.searchsorted(half.s, s) - 1, 0, len(half.s) - 2)
        s0 = half.s[idx]
        s1 = half.s[idx + 1]
        hlen = s1 - s0
        tau = (s - s0) / hlen
        z0, z1 = half.z[idx], half.z[idx + 1]
        m0, m1 = half.zp[idx] * hlen, half.zp[idx + 1] * hlen
        t2, t3 = tau * tau, tau * tau * tau
        z = ((2 * t3 - 3 * t2 + 1) * z0 + (t3 - 2 * t2 + tau) * m0
             + (-2 * t3 + 3 * t2) * z1 + (t3 - t2) * m1)
        base_args = half.dargs[idx]
        for _ in range(6):
            dargs = base_args + np.angle((z[:, None] - land.q) / (z0[:, None] - land.q))
            d = land.h_diff(z, self.saddle, dargs) + 1j * self.drop * s * s
            step = d / land.hprime_from(z, self.saddle)
            z = z - step
            if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(z))):
                break
        dargs = base_args + np.angle((z[:, None] - land.q) / (z0[:, None] - land.q))
        zp = -2j * self.drop * s / land.hprime_from(z, self.saddle)
        return z, zp, dargs

    def integrals(self, epsilon: float, config: SolverConfig) -> np.ndarray:
        """Thimble integrals of [u0, 1, 1/(z-p_n)] times e^{(E - E_ref)/eps}."""
        land = self.land
        s_end_eps = math.sqrt(config.level_drop(epsilon) / self.drop.real)
        scale_vals = np.abs(integrand_values(land, np.array([self.saddle]))[0])
        natural = math.sqrt(math.pi * epsilon) * abs(self.w1)
        atol = config.quad_tol * natural * np.maximum(scale_vals, 1e-3 * scale_vals.max())
        total = np.zeros(land.N + 2, dtype=complex)
        for sign, half in zip((1.0, -1.0), self.halves):
            s_end = min(s_end_eps, half.s[-1])
            # panels of about the Gaussian width; refinement handles sharp turns
            count = max(2, int(math.ceil(s_end / math.sqrt(epsilon))))
            pts = np.linspace(0.0, s_end, count + 1)

            def f(s, half=half):
                z, zp, _ = self.positions(half, s)
                w = np.exp(-self.drop * s * s / epsilon) * zp
                return integrand_values(land, z) * w[:, None]

            try:
                val, _ = integrate(f, pts, rtol=config.quad_tol, atol=atol)
            except QuadratureFailure as exc:
                raise QuadratureFailure(f"thimble at {self.saddle:.6g}: {exc}") from exc
            total += sign * val
        return total

    def contour_path(self, epsilon: float | None = None, config: SolverConfig | None = None) -> ContourPath:
        """The thimble as a polyline from the end of the negative half to the end of the positive half."""
        neg, pos = self.halves[1], self.halves[0]
        s_cut = math.inf
        if epsilon is not None:
            s_cut = math.sqrt((config or SolverConfig()).level_drop(epsilon) / self.drop.real)
        kn = neg.s <= s_cut
        kp = pos.s <= s_cut
        nodes = np.concatenate([neg.z[kn][::-1], pos.z[kp][1:]])
        dargs = np.concatenate([neg.dargs[kn][::-1], pos.dargs[kp][1:]])
        args = self.args_ref + dargs
        h_vals = np.array([self.land.h(z, a) for z, a in zip(nodes, args)])
        return ContourPath(nodes, h_vals, f"thimble({self.index})", [self.saddle], args)


# --------------------------------------------------------------------------- intersections

Monomial = tuple  # integer vector over the 2N logarithms
Poly = dict  # Monomial -> int


def _add(poly: Poly, mono: Monomial, coeff: int) -> None:
    v = poly.get(mono, 0) + coeff
    if v:
        poly[mono] = v
    else:
        poly.pop(mono, None)


@dataclass
class _Crossing:
    row: int
    saddle: int
    sign: int
    mono: Monomial
    point: complex


class IntersectionData:
    """Row-by-saddle table of Laurent polynomials in the monodromy factors."""

    def __init__(self, rows: int, saddles: int):
        self.table: list[list[Poly]] = [[{} for _ in range(saddles)] for _ in range(rows)]
        self.crossings: list[_Crossing] = []

    def add(self, crossing: _Crossing) -> None:
        self.crossings.append(crossing)
        _add(self.table[crossing.row][crossing.saddle], crossing.mono, crossing.sign)

    def signature(self) -> tuple:
        return tuple(tuple(tuple(sorted(p.items())) for p in row) for row in self.table)


def _row_geometry(land: Landscape, saddles: np.ndarray):
    """Circle radius around each upper pole and whether its row uses the loop."""
    pts = np.concatenate([land.q, saddles])
    radii = []
    loops = []
    for n in range(land.N):
        p = land.q_list[n]
        d = np.abs(pts - p)
        d = d[d > 0]
        radii.append(0.25 * float(min(1.0, d.min())))
        loops.append(land.a_list[n].imag <= 0.0)
    return np.array(radii), loops


def _segment_ray(z0: complex, z1: complex, base: complex, direction: complex):
    """Intersection of segment z0->z1 with the line base + mu*direction.

    Returns (lambda, mu) with the crossing at z0 + lambda (z1 - z0), or None.
    """
    dz = z1 - z0
    den = (dz.conjugate() * direction).imag
    if den == 0.0:
        return None
    w = base - z0
    lam = (w.conjugate() * direction).imag / den
    mu = (w.conjugate() * dz).imag / den
    return lam, mu


def _winding_vector(land: Landscape, c_args: np.ndarray, k_args: np.ndarray) -> Monomial:
    diff = (c_args - k_args) / TWO_PI
    n = np.rint(diff)
    if np.max(np.abs(diff - n)) > 1e-6:
        raise ContourConstructionFailure(
            "branch arguments at a crossing are not congruent",
            dump={"contour_args": c_args.tolist(), "trace_args": k_args.tolist()})
    return tuple(int(v) for v in n)


def _record_trace_crossings(land: Landscape, tr: Trace, saddle_idx: int, orient: float,
                            data_out: IntersectionData, radii: np.ndarray, loops: list[bool],
                            skip_first: bool) -> None:
    nodes = tr.nodes
    args = tr.args
    N = land.N
    for i in range(len(nodes) - 1):
        z0, z1 = nodes[i], nodes[i + 1]
        a0 = args[i]
        tk = (z1 - z0) * orient
        # real line, row 0
        if not (skip_first and i == 0):
            if (z0.imag > 0.0) != (z1.imag > 0.0):
                lam = z0.imag / (z0.imag - z1.imag)
                w = z0 + lam * (z1 - z0)
                w = complex(w.real, 0.0)
                k_args = a0 + np.angle((w - land.q) / (z0 - land.q))
                c_args = land.cut_args(w)
                mono = _winding_vector(land, c_args, k_args)
                sgn = 1 if tk.imag > 0 else -1
                data_out.add(_Crossing(0, saddle_idx, sgn, mono, w))
        # cut rays and circles, rows 1..N
        for n in range(N):
            p = land.q_list[n]
            rho = radii[n]
            hit = _segment_ray(z0, z1, p, CUT_DIR)
            if hit is not None:
                lam, mu = hit
                lower = rho if loops[n] else 0.0
                if 0.0 <= lam < 1.0 and mu > lower:
                    w = p + mu * CUT_DIR
                    k_args = a0 + np.angle((w - land.q) / (z0 - land.q))
                    c_args = land.cut_args(w)
                    # side A, outward, argument 3pi/4
                    c_args[n] = CUT_ANGLE
                    mono = _winding_vector(land, c_args, k_args)
                    sgn = 1 if (CUT_DIR.conjugate() * tk).imag > 0 else -1
                    data_out.add(_Crossing(n + 1, saddle_idx, sgn, mono, w))
                    if loops[n]:
                        # side B, inward, argument 3pi/4 - 2pi
                        c_args[n] = CUT_ANGLE - TWO_PI
                        mono = _winding_vector(land, c_args, k_args)
                        data_out.add(_Crossing(n + 1, saddle_idx, -sgn, mono, w))
            if loops[n]:
                r0 = abs(z0 - p) - rho
                r1 = abs(z1 - p) - rho
                if (r0 > 0.0) != (r1 > 0.0):
                    lam = _circle_hit(z0, z1, p, rho)
                    w = z0 + lam * (z1 - z0)
                    k_args = a0 + np.angle((w - land.q) / (z0 - land.q))
                    c_args = land.cut_args(w)
                    tc = 1j * (w - p) / abs(w - p)
                    mono = _winding_vector(land, c_args, k_args)
                    sgn = 1 if (tc.conjugate() * tk).imag > 0 else -1
                    data_out.add(_Crossing(n + 1, saddle_idx, sgn, mono, w))


def _circle_hit(z0: complex, z1: complex, centre: complex, rho: float) -> float:
    """Parameter in [0, 1] where the segment crosses the circle."""
    d = z1 - z0
    w = z0 - centre
    a = abs(d) ** 2
    b = 2.0 * (w.conjugate() * d).real
    c = abs(w) ** 2 - rho * rho
    disc = math.sqrt(max(b * b - 4 * a * c, 0.0))
    for lam in ((-b - disc) / (2 * a), (-b + disc) / (2 * a)):
        if -1e-12 <= lam <= 1.0 + 1e-12:
            return min(max(lam, 0.0), 1.0)
    return 0.5


@dataclass
class SaddleFrame:
    """Per-point geometry shared by every eps: saddles, ascent traces, intersection table."""

    land: Landscape
    branches: BranchData
    saddles: np.ndarray
    ref_args: list[np.ndarray]
    traces: list[tuple[Trace, Trace]]
    intersections: IntersectionData
    radii: np.ndarray
    loops: list[bool]


def build_frame(data: RationalInitialData, pt: LaxOleinikPoint,
                branches: BranchData | None = None, sup_u0: float | None = None,
                limits: TraceLimits | None = None) -> SaddleFrame:
    land = Landscape(data, pt, eta=PATH_ROTATION)
    if branches is None:
        branches = solve_branches(data, pt)
    saddles = branches.all_roots
    n_real = len(branches.real_roots)
    ref_args = [land.cut_args(y) for y in saddles]
    if limits is None:
        limits = default_limits(land, saddles, sup_u0)
    radii, loops = _row_geometry(land, saddles)
    # mountain poles capture ascent traces well inside their circles
    cap = limits.capture_radius.copy()
    for n in range(land.N):
        cap[n] = min(cap[n], radii[n] / 10.0) if loops[n] else cap[n]
    limits = TraceLimits(limits.escape_radius, cap, limits.max_arclength,
                         limits.max_steps, limits.rtol, saddles)
    inter = IntersectionData(land.N + 1, len(saddles))
    traces = []
    for k, y in enumerate(saddles):
        descent, ascent = saddle_directions(land, y, data.scale)
        gap = float(np.min(np.abs(np.delete(np.concatenate([saddles, land.q]), k) - y)))
        offset = 1e-6 * min(1.0, gap)
        pair = []
        for orient in (1.0, -1.0):
            start = y + orient * offset * ascent
            args0 = land.advance_args(y, start, ref_args[k])
            try:
                tr = trace(land, start, ASCENT, limits, args0=args0, start_saddle=y)
            except BudgetExceeded as exc:
                raise ContourConstructionFailure(
                    f"ascent path from saddle {y:.6g} did not terminate",
                    dump={"saddle": y, "reason": str(exc)}) from exc
            tr.nodes.insert(0, complex(y))
            tr.args.insert(0, ref_args[k].copy())
            _record_trace_crossings(land, tr, k, orient, inter, radii, loops,
                                    skip_first=k < n_real)
            pair.append(tr)
        traces.append(tuple(pair))
        if k < n_real:
            # the real saddle itself lies on W_0 with the sign of cos(beta_descent)
            sgn = 1 if ascent.imag > 0 else -1
            inter.add(_Crossing(0, k, sgn, tuple([0] * len(land.q)), complex(y)))
    return SaddleFrame(land, branches, saddles, ref_args, traces, inter, radii, loops)


# --------------------------------------------------------------------------- assembly

def _subset_polys(table: list[list[Poly]], subset: Sequence[int]) -> Poly:
    """det of T[:, subset] as a Laurent polynomial (Leibniz expansion)."""
    rows = len(table)
    out: Poly = {}
    for perm in itertools.permutations(range(rows)):
        sign = _perm_sign(perm)
        terms = [table[r][subset[perm[r]]] for r in range(rows)]
        if any(not t for t in terms):
            continue
        acc = {(): sign}
        for t in terms:
            new: Poly = {}
            for m1, c1 in acc.items():
                for m2, c2 in t.items():
                    m = m2 if not m1 else tuple(i + j for i, j in zip(m1, m2))
                    _add(new, m, c1 * c2)
            acc = new
            if not acc:
                break
        for m, c in acc.items():
            _add(out, m, c)
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


@dataclass
class ExpansionTerm:
    subset: tuple[int, ...]
    log_weight: complex  # log of coeff * monodromy * prod e^{E_k/eps}; coefficient folded in


class DeterminantExpansion:
    """det T[:, S] for every saddle subset S, with numerically equal monomials merged."""

    def __init__(self, frame: SaddleFrame):
        self.frame = frame
        n_sad = len(frame.saddles)
        rows = frame.land.N + 1
        self.polys: dict[tuple[int, ...], Poly] = {}
        for subset in itertools.combinations(range(n_sad), rows):
            poly = _subset_polys(frame.intersections.table, subset)
            if poly:
                self.polys[subset] = poly

    def terms(self, epsilon: float) -> list[tuple[tuple[int, ...], complex, complex]]:
        """(subset, coefficient, log factor) with monodromy merged numerically."""
        land = self.frame.land
        out = []
        for subset, poly in self.polys.items():
            merged: dict = {}
            for mono, coeff in poly.items():
                L = land.monodromy_log(mono, epsilon)
                key = (round(L.real, 9), round(((L.imag + math.pi) % TWO_PI) - math.pi, 9))
                if key in merged:
                    merged[key][0] += coeff
                else:
                    merged[key] = [coeff, L]
            for coeff, L in merged.values():
                if coeff:
                    out.append((subset, complex(coeff), L))
        return out


def _pick_thimbles(frame: SaddleFrame, expansion: DeterminantExpansion, E_ref: np.ndarray,
                   epsilon: float, cutoff: float) -> tuple[list, float]:
    terms = expansion.terms(epsilon)
    if not terms:
        raise SingularB("no saddle subset contributes to det B")
    logs = []
    for subset, coeff, L in terms:
        logs.append((L + np.sum(E_ref[list(subset)]) / epsilon).real + math.log(abs(coeff)))
    top = max(logs)
    keep = [term for term, lg in zip(terms, logs) if lg > top - cutoff]
    return keep, top


@dataclass
class ExactResult:
    u: float
    detA_over_detB: complex
    n_terms: int
    saddles: np.ndarray


def assemble(frame: SaddleFrame, expansion: DeterminantExpansion, thimbles: dict,
             epsilon: float, config: SolverConfig, integrals_cache: dict | None = None) -> ExactResult:
    land = frame.land
    N = land.N
    E_ref = np.array([-1j * land.h(y, a) for y, a in zip(frame.saddles, frame.ref_args)])
    cutoff = math.log(1.0 / config.truncation) + 10.0
    keep, top = _pick_thimbles(frame, expansion, E_ref, epsilon, cutoff)
    needed = sorted({k for subset, _, _ in keep for k in subset})
    X = {}
    for k in needed:
        key = (k, epsilon)
        if integrals_cache is not None and key in integrals_cache:
            X[k] = integrals_cache[key]
            continue
        X[k] = thimbles[k].integrals(epsilon, config)
        if integrals_cache is not None:
            integrals_cache[key] = X[k]
    colsA = [0] + list(range(2, N + 2))
    colsB = [1] + list(range(2, N + 2))
    num = 0j
    den = 0j
    biggest = 0.0
    for subset, coeff, L in keep:
        lw = L + np.sum(E_ref[list(subset)]) / epsilon
        w = coeff * cmath.exp(lw - top)
        XA = np.array([X[k][colsA] for k in subset])
        XB = np.array([X[k][colsB] for k in subset])
        tb = w * np.linalg.det(XB)
        num += w * np.linalg.det(XA)
        den += tb
        biggest = max(biggest, abs(tb))
    if den == 0 or abs(den) < 1e-13 * biggest:
        raise SingularB(f"det B cancels to {abs(den):.3g} relative to terms of size {biggest:.3g}")
    ratio = num / den
    return ExactResult(2.0 * ratio.real, ratio, len(keep), frame.saddles)


# --------------------------------------------------------------------------- public API

def build_thimbles(frame: SaddleFrame, epsilon_max: float, config: SolverConfig) -> dict:
    s_max = math.sqrt(config.level_drop(epsilon_max) / math.cos(frame.land.eta))
    avoid = np.concatenate([frame.saddles, frame.land.q])
    out = {}
    for k, y in enumerate(frame.saddles):
        others = np.delete(avoid, k)
        out[k] = Thimble(frame.land, y, k, frame.ref_args[k], s_max, others)
    return out


@dataclass
class ContourSet:
    """W_0..W_N as combinations of thimbles, plus the thimble paths themselves."""

    frame: SaddleFrame
    expansion: DeterminantExpansion
    thimbles: dict
    paths: list[ContourPath]

    def combination(self, n: int) -> dict[int, Poly]:
        return {k: p for k, p in enumerate(self.frame.intersections.table[n]) if p}


def build_contours(data: RationalInitialData, pt: LaxOleinikPoint,
                   config: SolverConfig | None = None, epsilon: float = 0.25) -> ContourSet:
    """Construct and validate the steepest-descent decomposition at (t, x)."""
    config = config or SolverConfig()
    frame = build_frame(data, pt)
    thimbles = build_thimbles(frame, epsilon, config)
    paths = [th.contour_path() for th in thimbles.values()]
    for th, path in zip(thimbles.values(), paths):
        path.dominant_saddles = validate_dominance(frame.land, th, path, config,
                                                   saddles=frame.saddles)
    return ContourSet(frame, DeterminantExpansion(frame), thimbles, paths)


def validate_dominance(land: Landscape, thimble: Thimble, path: ContourPath,
                       config: SolverConfig, samples: int = 200,
                       saddles: Sequence[complex] = ()) -> list[complex]:
    """Re(-i h) must stay at least delta/2 below the saddle value off saddle neighbourhoods.

    A neighbourhood is the disc in which the local quadratic model drops by
    less than delta.  Besides the thimble's own saddle, the neighbourhoods of
    ``saddles`` the path passes through are excused, since a path lingering
    near another saddle sits at that saddle's lower level.  Nowhere may the
    path rise above its own saddle value.  The check uses the continued h at
    points interpolated along the polyline, independently of the
    parametrisation used to build it.  Returns the saddles the path visits.
    """
    y = thimble.saddle
    level = thimble.E_ref.real
    centres = [y] + [complex(v) for v in saddles if v != y]
    radii = [math.sqrt(2.0 * config.delta / abs(land.hsecond(v))) for v in centres]
    visited = [y]
    nodes = path.nodes
    args = path.args
    idx = np.linspace(0, len(nodes) - 1, samples)
    for pos in idx:
        i = min(int(pos), len(nodes) - 2)
        lam = pos - i
        z = nodes[i] + lam * (nodes[i + 1] - nodes[i])
        a = args[i] + np.angle((z - land.q) / (nodes[i] - land.q))
        val = (-1j * land.h(z, a)).real
        near = [v for v, r in zip(centres, radii) if abs(z - v) <= r]
        visited.extend(v for v in near if v not in visited)
        if not near and val > level - 0.5 * config.delta:
            raise ContourConstructionFailure(
                f"dominance check failed on thimble through {y:.6g}: "
                f"Re(-ih) = {val:.6g} vs saddle level {level:.6g} at {z:.6g}",
                dump={"nodes": nodes.tolist(), "saddle": y})
        if val > level + 1e-8 * (1.0 + abs(level)):
            raise ContourConstructionFailure(
                f"Re(-ih) exceeds the saddle level on thimble through {y:.6g}",
                dump={"nodes": nodes.tolist(), "saddle": y})
    return visited


def contour_integral(data: RationalInitialData, pt: LaxOleinikPoint, path: ContourPath,
                     integrand_kind, epsilon: float, config: SolverConfig | None = None,
                     scale_log: complex | None = None) -> complex:
    """Integral of f(z) exp(-i h(z)/eps) along a polyline with continued h.

    The result is multiplied by exp(-scale_log) when ``scale_log`` is given;
    by default the path maximum of Re(-i h)/eps is factored out and the value
    returned is the unscaled integral.
    """
    config = config or SolverConfig()
    vals, log_scale = contour_integrals(data, pt, path, epsilon, config)
    col = _kind_column(integrand_kind, data.N)
    if scale_log is None:
        return complex(vals[col] * cmath.exp(log_scale))
    return complex(vals[col] * cmath.exp(log_scale - scale_log))


def contour_integrals(data: RationalInitialData, pt: LaxOleinikPoint, path: ContourPath,
                      epsilon: float, config: SolverConfig) -> tuple[np.ndarray, complex]:
    """All integrand kinds along ``path``; returns (values * e^{-L}, L)."""
    land = Landscape(data, pt)
    nodes = np.asarray(path.nodes, dtype=complex)
    args = path.args
    if args is None:
        args = continue_args(land, nodes, land.cut_args(nodes[0]))
    h_nodes = np.array([land.h(z, a) for z, a in zip(nodes, args)])
    E_nodes = -1j * h_nodes / epsilon
    L = complex(E_nodes[np.argmax(E_nodes.real)])
    total = np.zeros(land.N + 2, dtype=complex)
    floor = math.log(config.truncation)
    for i in range(len(nodes) - 1):
        z0, z1 = nodes[i], nodes[i + 1]
        if z0 == z1:
            continue
        if max(E_nodes[i].real, E_nodes[i + 1].real) - L.real < floor - 5.0:
            continue
        a0 = args[i]
        h0 = h_nodes[i]
        dz = z1 - z0

        def f(lam, z0=z0, a0=a0, h0=h0, dz=dz):
            z = z0 + lam * dz
            dargs = np.angle((z[:, None] - land.q) / (z0 - land.q))
            hv = h0 + land.h_diff(z, z0, dargs)
            w = np.exp(-1j * hv / epsilon - L) * dz
            return integrand_values(land, z) * w[:, None]

        val, _ = integrate(f, [0.0, 1.0], rtol=config.quad_tol,
                           atol=1e-3 * config.quad_tol * abs(dz))
        total += val
    return total, L


def continue_args(land: Landscape, nodes: np.ndarray, args0: np.ndarray) -> np.ndarray:
    """Unwrap the log arguments along a polyline, subdividing long segments."""
    out = [np.array(args0, dtype=float)]
    for z0, z1 in zip(nodes[:-1], nodes[1:]):
        a = out[-1]
        d = land.nearest_pole_distance(z0)
        pieces = max(1, int(math.ceil(abs(z1 - z0) / max(0.25 * d, 1e-300))))
        zs = z0 + (z1 - z0) * np.linspace(0, 1, pieces + 1)
        for za, zb in zip(zs[:-1], zs[1:]):
            a = land.advance_args(za, zb, a)
        out.append(a)
    return np.array(out)


# --------------------------------------------------------------------------- u_exact

def u_exact(data: RationalInitialData, pt: LaxOleinikPoint, epsilon: float,
            config: SolverConfig | None = None) -> float:
    """2 Re(det A / det B) at a single point."""
    config = config or SolverConfig()
    if not epsilon > 0:
        raise ConfigError("epsilon must be positive")
    if config.manual_paths:
        return u_exact_from_paths(data, pt, epsilon, manual_contours(data, pt, config.manual_paths),
                                  config)
    frame = build_frame(data, pt)
    expansion = DeterminantExpansion(frame)
    thimbles = build_thimbles(frame, epsilon, config)
    return assemble(frame, expansion, thimbles, epsilon, config).u


def u_exact_multi(data: RationalInitialData, pt: LaxOleinikPoint, epsilons: Sequence[float],
                  config: SolverConfig | None = None, frame: SaddleFrame | None = None,
                  expansion: DeterminantExpansion | None = None) -> np.ndarray:
    """u_exact at one point for several eps, sharing traces and thimble skeletons."""
    config = config or SolverConfig()
    if frame is None:
        frame = build_frame(data, pt)
    if expansion is None:
        expansion = DeterminantExpansion(frame)
    thimbles = build_thimbles(frame, max(epsilons), config)
    return np.array([assemble(frame, expansion, thimbles, e, config).u for e in epsilons])


def u_exact_sweep(data: RationalInitialData, t: float, xs: Sequence[float],
                  epsilons: Sequence[float], config: SolverConfig | None = None,
                  block: int = 32) -> np.ndarray:
    """u_exact on an x grid for several eps; returns shape (len(epsilons), len(xs)).

    The intersection table is eps independent and piecewise constant in x.  It
    is traced at block endpoints; a block whose endpoints agree (same saddle
    ordering and the same table) reuses it for its interior points, otherwise
    the block is bisected.  Every point still gets its own saddles, branches
    and thimble integrals.
    """
    config = config or SolverConfig()
    xs = np.asarray(xs, dtype=float)
    sup = data.sup_u0()
    out = np.empty((len(epsilons), len(xs)))
    frames: dict[int, SaddleFrame] = {}

    def frame_at(i: int) -> SaddleFrame:
        if i not in frames:
            frames[i] = build_frame(data, LaxOleinikPoint(t, float(xs[i])), sup_u0=sup)
        return frames[i]

    def same(i: int, j: int) -> bool:
        a, b = frame_at(i), frame_at(j)
        if len(a.branches.real_roots) != len(b.branches.real_roots):
            return False
        return a.intersections.signature() == b.intersections.signature()

    table_for: dict[int, SaddleFrame] = {}

    def fill(i: int, j: int) -> None:
        if same(i, j):
            for k in range(i, j + 1):
                table_for[k] = frames[i]
            return
        if j - i <= 1:
            table_for[i] = frames[i]
            table_for[j] = frames[j]
            return
        m = (i + j) // 2
        fill(i, m)
        fill(m, j)

    starts = list(range(0, len(xs) - 1, block)) + [len(xs) - 1]
    if len(xs) == 1:
        table_for[0] = frame_at(0)
    for i, j in zip(starts[:-1], starts[1:]):
        fill(i, j)
    expansions: dict[int, DeterminantExpansion] = {}
    for k, x in enumerate(xs):
        template = table_for[k]
        if k in frames:
            frame = frames[k]
        else:
            frame = _frame_with_table(data, LaxOleinikPoint(t, float(x)), template)
        key = id(template)
        if key not in expansions:
            expansions[key] = DeterminantExpansion(template)
        exp = expansions[key]
        exp_for_point = exp if frame is template else _rebind(exp, frame)
        out[:, k] = u_exact_multi(data, LaxOleinikPoint(t, float(x)), epsilons, config,
                                  frame=frame, expansion=exp_for_point)
    return out


def _frame_with_table(data: RationalInitialData, pt: LaxOleinikPoint,
                      template: SaddleFrame) -> SaddleFrame:
    """Saddles at pt with the intersection table of a neighbouring point."""
    land = Landscape(data, pt, eta=template.land.eta)
    warm = template.saddles
    branches = solve_branches(data, pt, warm=warm)
    saddles = branches.all_roots
    if len(branches.real_roots) != len(template.branches.real_roots):
        return build_frame(data, pt)
    ref_args = [land.cut_args(y) for y in saddles]
    return SaddleFrame(land, branches, saddles, ref_args, [], template.intersections,
                       template.radii, template.loops)


def _rebind(expansion: DeterminantExpansion, frame: SaddleFrame) -> DeterminantExpansion:
    clone = DeterminantExpansion.__new__(DeterminantExpansion)
    clone.frame = frame
    clone.polys = expansion.polys
    return clone


def u_exact_perturbed(data: RationalInitialData, pt: LaxOleinikPoint, epsilon: float,
                      amplitude: float, rng: np.random.Generator,
                      config: SolverConfig | None = None) -> float:
    """u_exact with every thimble replaced by a polyline whose interior nodes are jittered.

    Each node moves by up to ``amplitude`` in both coordinates; the end nodes
    and nodes within 10 amplitudes of a pole stay put.  By Cauchy's theorem the
    result must not change beyond the quadrature tolerance.
    """
    config = config or SolverConfig()
    frame = build_frame(data, pt)
    expansion = DeterminantExpansion(frame)
    thimbles = build_thimbles(frame, epsilon, config)
    land = frame.land
    cache = {}
    for k, th in thimbles.items():
        path = th.contour_path(epsilon, config)
        shift = amplitude * (rng.uniform(-1.0, 1.0, len(path.nodes))
                             + 1j * rng.uniform(-1.0, 1.0, len(path.nodes)))
        # end nodes and nodes close to a pole stay where they are
        pole_gap = np.min(np.abs(path.nodes[:, None] - land.q[None, :]), axis=1)
        shift[(pole_gap < 10.0 * amplitude)] = 0.0
        shift[[0, -1]] = 0.0
        nodes = path.nodes + shift
        args = path.args + np.angle((nodes[:, None] - land.q) / (path.nodes[:, None] - land.q))
        h_vals = np.array([land.h(z, a) for z, a in zip(nodes, args)])
        moved = ContourPath(nodes, h_vals, path.role, list(path.dominant_saddles), args)
        vals, L = contour_integrals(data, pt, moved, epsilon, config)
        cache[(k, epsilon)] = vals * cmath.exp(L - th.E_ref / epsilon)
    return assemble(frame, expansion, thimbles, epsilon, config, cache).u


# --------------------------------------------------------------------------- explicit paths

def explicit_contours(data: RationalInitialData, pt: LaxOleinikPoint, epsilon: float,
                      config: SolverConfig | None = None) -> list[ContourPath]:
    """Direct W_0..W_N without any tracing, usable when eps is not small.

    W_0 runs in from the 3pi/4 direction beneath every cut, along the real
    axis and out along -pi/4; W_n comes in along the cut of p_n on its
    counterclockwise side, circles p_n and leaves on the other side.  The
    integrand grows like exp(O(1/eps)) along these paths, so they only serve
    as an independent check for moderate eps.
    """
    config = config or SolverConfig()
    land = Landscape(data, pt)
    p = data.p
    kappa = float(np.min(p.real + p.imag))
    left = min(kappa, pt.x, float(np.min(p.real))) - 1.0
    right = max(float(np.max(p.real)), pt.x) + 1.0
    reach = _gaussian_reach(pt, epsilon, config) + (right - left)
    up_left = cmath.exp(1j * CUT_ANGLE)
    down_right = cmath.exp(-0.25j * math.pi)
    legs = np.concatenate([
        left + up_left * np.linspace(reach, 0.0, 64)[:-1],
        np.linspace(left, right, 96)[:-1] + 0j,
        right + down_right * np.linspace(0.0, reach, 64),
    ])
    args0 = land.cut_args(legs[0])
    paths = [_finish_path(land, legs, args0, "W0")]
    for n in range(data.N):
        pn = complex(p[n])
        others = np.delete(land.q, n)
        rho = 0.3 * float(min(1.0, np.min(np.abs(others - pn))))
        mus = np.geomspace(reach + abs(pn - pt.x), rho, 96)
        inward = pn + CUT_DIR * mus
        circle = pn + rho * np.exp(1j * (CUT_ANGLE + np.linspace(-TWO_PI, 0.0, 129)))
        outward = pn + CUT_DIR * mus[::-1]
        nodes = np.concatenate([inward, circle[1:-1], outward])
        a0 = land.cut_args(nodes[0])
        a0[n] = CUT_ANGLE - TWO_PI
        paths.append(_finish_path(land, nodes, a0, f"W{n + 1}"))
    return paths


def _gaussian_reach(pt: LaxOleinikPoint, epsilon: float, config: SolverConfig) -> float:
    return 4.0 * math.sqrt(4.0 * pt.t * config.level_drop(epsilon)) + 10.0


def _finish_path(land: Landscape, nodes: np.ndarray, args0: np.ndarray, role: str) -> ContourPath:
    args = continue_args(land, nodes, args0)
    h_vals = np.array([land.h(z, a) for z, a in zip(nodes, args)])
    return ContourPath(np.asarray(nodes), h_vals, role, [], args)


def manual_contours(data: RationalInitialData, pt: LaxOleinikPoint, spec: dict) -> list[ContourPath]:
    """Contours from user node lists: {"W0": [[re, im], ...], "W1": ..., "args0": {...}}.

    Arguments are continued from the reference sheet at each path's first node;
    an optional ``"start_sheet"`` mapping role -> list of integer sheet shifts per
    logarithm moves that start point onto another sheet.
    """
    land = Landscape(data, pt)
    paths = []
    sheets = spec.get("start_sheet", {})
    for n in range(data.N + 1):
        role = f"W{n}"
        if role not in spec:
            raise ConfigError(f"manual_paths lacks {role}")
        nodes = np.array([complex(a, b) for a, b in spec[role]])
        if len(nodes) < 2:
            raise ConfigError(f"manual path {role} needs at least two nodes")
        a0 = land.cut_args(nodes[0]) + TWO_PI * np.asarray(sheets.get(role, [0] * len(land.q)))
        paths.append(_finish_path(land, nodes, a0, role))
    return paths


def u_exact_from_paths(data: RationalInitialData, pt: LaxOleinikPoint, epsilon: float,
                       paths: list[ContourPath], config: SolverConfig | None = None) -> float:
    """2 Re(det A / det B) with A, B integrated directly along the given contours.

    Each row is scaled by its own exponential factor before the determinants;
    the scalings cancel in the ratio.  Determinants use LU with partial pivoting.
    """
    config = config or SolverConfig()
    N = data.N
    A = np.empty((N + 1, N + 1), dtype=complex)
    B = np.empty((N + 1, N + 1), dtype=complex)
    for r, path in enumerate(paths):
        vals, _ = contour_integrals(data, pt, path, epsilon, config)
        m = np.max(np.abs(vals))
        if m == 0:
            raise SingularB(f"row {r} vanished")
        vals = vals / m
        A[r, 0] = vals[0]
        B[r, 0] = vals[1]
        A[r, 1:] = vals[2:]
        B[r, 1:] = vals[2:]
    detB = np.linalg.det(B)
    if detB == 0:
        raise SingularB("det B vanished for the explicit contours")
    return float(2.0 * (np.linalg.det(A) / detB).real)


# --------------------------------------------------------------------------- diagnostics

@dataclass
class NonspecialReport:
    discriminant_ok: bool
    re_c_sums_ok: bool
    heteroclinic_ok: str  # "ok", "violated" or "not-computed"
    discriminant: float

    def to_dict(self) -> dict:
        return {
            "discriminant_ok": self.discriminant_ok,
            "re_c_sums_ok": self.re_c_sums_ok,
            "heteroclinic_ok": self.heteroclinic_ok,
            "discriminant": self.discriminant,
        }


def nonspecial_check(data: RationalInitialData, pt: LaxOleinikPoint,
                     tol: float = 1e-10) -> NonspecialReport:
    """Genericity conditions at (t, x).

    The heteroclinic condition compares Im(-i h) between every pair of saddles
    along the straight segment joining them (continued h).  A trajectory can
    only join two saddles when these levels coincide, so distinct levels
    certify the condition; equal levels are reported as "violated" since the
    joining path is not searched for.
    """
    from .branches import discriminant_at

    pt.require_positive_time()
    disc = discriminant_at(data, pt)
    disc_ok = bool(disc != 0.0 and math.isfinite(disc))
    re_c = data.c.real
    sums_ok = True
    for r in range(1, data.N + 1):
        for subset in itertools.combinations(range(data.N), r):
            if abs(float(np.sum(re_c[list(subset)]))) <= tol * (1.0 + float(np.sum(np.abs(re_c)))):
                sums_ok = False
    try:
        land = Landscape(data, pt)
        saddles = critical_points(data, pt)
    except Exception:  # noqa: BLE001 - diagnostics should not raise
        return NonspecialReport(disc_ok, sums_ok, "not-computed", disc)
    status = "ok"
    for i in range(len(saddles)):
        for j in range(i + 1, len(saddles)):
            seg = np.linspace(saddles[i], saddles[j], 257)
            args = continue_args(land, seg, land.cut_args(seg[0]))
            hi = land.h(seg[0], args[0])
            hj = land.h(seg[-1], args[-1])
            if abs((hi - hj).real) < 1e-9 * (1.0 + abs(hi)):
                status = "violated"
    return NonspecialReport(disc_ok, sums_ok, status, disc)


__all__ = [
    "SolverConfig",
    "ContourPath",
    "ContourSet",
    "Thimble",
    "critical_points",
    "build_frame",
    "build_contours",
    "contour_integral",
    "contour_integrals",
    "validate_dominance",
    "u_exact",
    "u_exact_multi",
    "u_exact_sweep",
    "u_exact_from_paths",
    "u_exact_perturbed",
    "explicit_contours",
    "manual_contours",
    "nonspecial_check",
    "NonspecialReport",
]
