"""Trajectory tracing for the level curves and gradient lines of Re(-i h).

All traces integrate a unit-speed direction field with an adaptive
Dormand-Prince 5(4) scheme in plain complex arithmetic.  The log-branch
arguments are unwrapped after every accepted step, so every polyline carries
the analytically continued h at its nodes.

Directions (with E = -i h):
  * level curves of Re E:   dz/ds = +/- conj(h')/|h'|
  * steepest ascent of Re E:  dz/ds = +i conj(h')/|h'|
  * steepest descent of Re E: dz/ds = -i conj(h')/|h'|
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, DegenerateSaddle
from .landscape import Landscape
from .rational import LaxOleinikPoint, RationalInitialData

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

LEVEL = "level"
ASCENT = "ascent"
DESCENT = "descent"
_ROTATION = {LEVEL: 1.0 + 0j, ASCENT: 1j, DESCENT: -1j}


@dataclass
class Trace:
    """A traced polyline with the continued branch arguments at each node."""

    nodes: list[complex]
    args: list[np.ndarray]
    stop: str
    target: int | None = None  # singular-point index, or asymptotic sector for "infinity"
    arclength: float = 0.0
    min_saddle_gap: float = math.inf

    def h_values(self, land: Landscape) -> np.ndarray:
        return np.array([land.h(z, a) for z, a in zip(self.nodes, self.args)])


@dataclass
class TraceLimits:
    escape_radius: float
    capture_radius: np.ndarray  # per singular point
    max_arclength: float
    max_steps: int = 20000
    rtol: float = 1e-9
    saddles: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))


def escape_radius(data: RationalInitialData, pt: LaxOleinikPoint) -> float:
    return 10.0 * (1.0 + float(np.max(np.abs(data.p))) + abs(pt.x) + pt.t * data.sup_u0())


def default_limits(land: Landscape, saddles: np.ndarray, sup_u0: float | None = None) -> TraceLimits:
    data = land.data
    if sup_u0 is None:
        sup_u0 = data.sup_u0()
    radius = 10.0 * (1.0 + float(np.max(np.abs(data.p))) + abs(land.x) + land.t * sup_u0)
    q = land.q
    gaps = np.abs(q[:, None] - np.concatenate([q, saddles])[None, :])
    gaps[gaps == 0] = np.inf
    capture = 1e-4 * np.minimum(1.0, np.min(gaps, axis=1))
    return TraceLimits(
        escape_radius=radius,
        capture_radius=capture,
        max_arclength=200.0 * radius,
        saddles=np.asarray(saddles, dtype=complex),
    )


def _sector_at_infinity(land: Landscape, z: complex) -> int:
    """Index 0..3 of the asymptotic direction pi/4 + k pi/2 nearest to arg(z - x)."""
    ang = cmath.phase(z - land.x)
    return int(round((ang - math.pi / 4) / (math.pi / 2))) % 4


def _in_sector_core(land: Landscape, z: complex) -> bool:
    ang = cmath.phase(z - land.x) - math.pi / 4
    off = abs((ang + math.pi / 4) % (math.pi / 2) - math.pi / 4)
    return off < math.pi / 8


def trace(
    land: Landscape,
    start: complex,
    kind: str,
    limits: TraceLimits,
    args0: np.ndarray | None = None,
    sign: float = 1.0,
    stop_at_saddles: bool = False,
    start_saddle: complex | None = None,
) -> Trace:
    """Integrate the unit direction field of ``kind`` from ``start``.

    Stops when the path enters the capture disc of a singular point, when it is
    beyond the escape radius inside an asymptotic sector, or (optionally) when it
    comes close to a saddle other than ``start_saddle``.
    """
    rot = _ROTATION[kind] * sign
    eta_rot = land.rot
    q_list = land.q_list
    a_list = land.a_list
    x = land.x
    inv2t = 1.0 / (2.0 * land.t)

    def field_at(z: complex) -> complex:
        hp = (z - x) * inv2t
        for qq, aa in zip(q_list, a_list):
            hp += aa / (z - qq)
        hp *= eta_rot
        m = abs(hp)
        if m == 0.0:
            return 0j
        return rot * hp.conjugate() / m

    args = land.cut_args(start) if args0 is None else np.array(args0, dtype=float)
    nodes = [complex(start)]
    arg_list = [args.copy()]
    z = complex(start)
    saddles = [complex(s) for s in limits.saddles]
    if start_saddle is not None:
        saddles = [s for s in saddles if abs(s - start_saddle) > 1e-9 * (1 + abs(s))]
    capture = limits.capture_radius

    def dist_info(zz: complex):
        dmin = math.inf
        for qq in q_list:
            d = abs(zz - qq)
            if d < dmin:
                dmin = d
        return dmin

    step = 1e-3 * max(dist_info(z), 1e-6)
    k1 = field_at(z)
    s_total = 0.0
    min_gap = math.inf
    for _ in range(limits.max_steps):
        dmin = dist_info(z)
        step = min(step, 0.25 * dmin, 0.05 * max(abs(z - x), 1.0) + 0.25 * dmin)
        ks = [k1]
        for i in range(1, 7):
            zi = z
            for j, aij in enumerate(_A[i]):
                zi += step * aij * ks[j]
            ks.append(field_at(zi))
        z5 = z
        err = 0j
        for i in range(7):
            z5 += step * _B5[i] * ks[i]
            err += step * _E[i] * ks[i]
        scale = limits.rtol * (step + 1e-3 * dmin) + 1e-14
        ratio = abs(err) / scale
        if ratio > 1.0 or not (z5 == z5):
            step *= max(0.2, 0.9 * ratio ** -0.2)
            if step < 1e-14 * (1.0 + abs(z)):
                break
            continue
        args = args + np.angle((z5 - land.q) / (z - land.q))
        z = z5
        k1 = ks[6]
        s_total += step
        nodes.append(z)
        arg_list.append(args.copy())
        step *= min(5.0, 0.9 * max(ratio, 1e-10) ** -0.2)
        for k, qq in enumerate(q_list):
            if abs(z - qq) < capture[k]:
                return Trace(nodes, arg_list, "pole", k, s_total, min_gap)
        for s in saddles:
            g = abs(z - s)
            if g < min_gap:
                min_gap = g
        if stop_at_saddles and min_gap < 1e-4 * (1.0 + abs(z)):
            return Trace(nodes, arg_list, "saddle", None, s_total, min_gap)
        if abs(z - x) > limits.escape_radius and _in_sector_core(land, z):
            return Trace(nodes, arg_list, "infinity", _sector_at_infinity(land, z), s_total, min_gap)
        if s_total > limits.max_arclength:
            break
    raise BudgetExceeded(
        f"{kind} trace from {start:.6g} did not terminate "
        f"(arclength {s_total:.3g}, last point {z:.6g})"
    )


def saddle_directions(land: Landscape, saddle: complex, scale: float = 1.0) -> tuple[complex, complex]:
    """Unit steepest-descent and steepest-ascent directions of Re(-i h) at a saddle."""
    e2 = -1j * land.rot * land.hsecond(saddle)
    if abs(e2) < 1e-8 * scale:
        raise DegenerateSaddle(f"|h''| = {abs(e2):.3g} at saddle {saddle:.6g}")
    beta = 0.5 * (math.pi - cmath.phase(e2))
    descent = cmath.exp(1j * beta)
    return descent, 1j * descent


def trace_level_curve(
    data: RationalInitialData,
    pt: LaxOleinikPoint,
    start: complex,
    direction: int = 1,
    limits: TraceLimits | None = None,
) -> Trace:
    """Level curve of Re(-i h) through ``start``; stops near equilibria or at escape."""
    from .exact import critical_points

    land = Landscape(data, pt)
    crit = critical_points(data, pt)
    if limits is None:
        limits = default_limits(land, crit)
    return trace(land, start, LEVEL, limits, sign=float(direction), stop_at_saddles=True)


def trace_steepest_descent(
    data: RationalInitialData,
    pt: LaxOleinikPoint,
    saddle: complex,
    branch: int,
    limits: TraceLimits | None = None,
    offset: float = 1e-6,
) -> Trace:
    """Gradient line of Re(-i h) leaving ``saddle``.

    ``branch`` 0/1 are the two descent directions, 2/3 the two ascent directions.
    """
    from .exact import critical_points

    land = Landscape(data, pt)
    crit = critical_points(data, pt)
    if limits is None:
        limits = default_limits(land, crit)
    descent, ascent = saddle_directions(land, saddle, data.scale)
    d = (descent, -descent, ascent, -ascent)[branch]
    kind = DESCENT if branch < 2 else ASCENT
    gap = min(abs(saddle - c) for c in np.concatenate([crit, land.q]) if abs(saddle - c) > 1e-12)
    start = saddle + offset * min(1.0, gap) * d
    args0 = land.advance_args(saddle, start, land.cut_args(saddle))
    tr = trace(land, start, kind, limits, args0=args0, start_saddle=saddle)
    tr.nodes.insert(0, complex(saddle))
    tr.args.insert(0, land.cut_args(saddle))
    return tr
