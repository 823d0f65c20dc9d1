"""Characteristic roots, multivalued Burgers branches and the caustic locus.

At a point (t, x) the characteristic intercepts are the roots of
``y - x + 2 t u0(y) = 0``, a real polynomial equation of degree 2N+1 once the
denominators are cleared.  The 2J+1 real roots are ordered descending
(y_0 > y_1 > ...), which makes the branch values u_k = u0(y_k) ascending.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NearCaustic, RootFindingFailure
from .rational import (
    LaxOleinikPoint,
    RationalInitialData,
    eval_u0,
    eval_u0_complex,
    eval_u0_prime,
)
from .roots import aberth

TAU_REAL = 1e-9
TAU_CAUSTIC = 1e-6
RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class BranchData:
    t: float
    x: float
    real_roots: np.ndarray
    complex_roots: np.ndarray
    branch_values: np.ndarray
    min_root_separation: float

    @property
    def J(self) -> int:
        return (len(self.real_roots) - 1) // 2

    @property
    def all_roots(self) -> np.ndarray:
        """Every zero of h': real roots, upper complex roots, then their conjugates."""
        return np.concatenate([self.real_roots.astype(complex), self.complex_roots,
                               self.complex_roots.conj()])


def characteristic_poly(data: RationalInitialData, pt: LaxOleinikPoint) -> np.ndarray:
    """Monic real coefficients (highest degree first) of the cleared characteristic equation."""
    pt.require_positive_time()
    q_roots = data.all_poles
    res = data.all_residues
    q = np.poly(q_roots)
    lin = np.polymul([1.0, -pt.x], q)
    num = np.zeros(len(q_roots), dtype=complex)
    for k in range(len(q_roots)):
        num = num + res[k] * np.poly(np.delete(q_roots, k))
    coeffs = lin.astype(complex)
    coeffs[-len(num):] += 2.0 * pt.t * num
    return coeffs.real / coeffs.real[0]


def _residual_scale(data: RationalInitialData, pt: LaxOleinikPoint, y: complex) -> float:
    terms = np.abs(data.all_residues / (y - data.all_poles))
    return 1.0 + abs(y) + abs(pt.x) + 2.0 * pt.t * float(np.sum(terms))


def _polish(data: RationalInitialData, pt: LaxOleinikPoint, y: complex) -> tuple[complex, float]:
    """Newton on y - x + 2 t u0(y), which is better conditioned than the expanded polynomial."""
    poles = [complex(p) for p in data.all_poles]
    res_c = [complex(c) for c in data.all_residues]
    x, two_t = pt.x, 2.0 * pt.t

    def evaluate(z: complex) -> tuple[complex, complex, float]:
        f = z - x
        df = 1.0
        mag = 1.0 + abs(z) + abs(x)
        for p, c in zip(poles, res_c):
            w = 1.0 / (z - p)
            cw = c * w
            f += two_t * cw
            df -= two_t * cw * w
            mag += two_t * abs(cw)
        return f, df, mag

    z = complex(y)
    f, df, mag = evaluate(z)
    best, best_res = z, abs(f) / mag
    for _ in range(40):
        if df == 0:
            break
        step = f / df
        z = z - step
        f, df, mag = evaluate(z)
        res = abs(f) / mag
        if res < best_res:
            best, best_res = z, res
        if abs(step) <= 4e-16 * (1.0 + abs(z)) or res <= 1e-17:
            break
    return best, best_res


def all_characteristic_roots(data: RationalInitialData, pt: LaxOleinikPoint,
                             warm: np.ndarray | None = None) -> np.ndarray:
    """All 2N+1 complex roots, polished."""
    coeffs = characteristic_poly(data, pt)
    z = aberth(coeffs, init=warm)
    out = np.empty_like(z)
    for i, zi in enumerate(z):
        zp, res = _polish(data, pt, zi)
        if res > RESIDUAL_TOL:
            raise RootFindingFailure(
                f"root {zi} polished only to relative residual {res:.2e}")
        out[i] = zp
    return out


def classify_roots(data: RationalInitialData, pt: LaxOleinikPoint, roots: np.ndarray,
                   tau_caustic: float = TAU_CAUSTIC, check_caustic: bool = True) -> BranchData:
    scale = data.scale + abs(pt.x)
    diff = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(diff, np.inf)
    sep = float(diff.min()) if len(roots) > 1 else np.inf
    if check_caustic and sep < tau_caustic * scale:
        raise NearCaustic(
            f"roots at (t,x)=({pt.t}, {pt.x}) are {sep:.2e} apart; too close to the discriminant locus")
    is_real = np.abs(roots.imag) < TAU_REAL * (1.0 + np.abs(roots))
    real = np.sort(roots[is_real].real)[::-1]
    upper = roots[~is_real & (roots.imag > 0)]
    lower = roots[~is_real & (roots.imag < 0)]
    if len(real) % 2 != 1 or len(upper) != len(lower):
        if check_caustic:
            raise NearCaustic(f"inconsistent root classification at (t,x)=({pt.t}, {pt.x})")
        # fall back to pairing by conjugation for diagnostics only
        upper = roots[roots.imag > 0][: (len(roots) - len(real)) // 2]
    upper = upper[np.argsort(upper.real)]
    real = np.array([_polish_real(data, pt, y) for y in real])
    return BranchData(
        t=pt.t,
        x=pt.x,
        real_roots=real,
        complex_roots=upper,
        branch_values=np.asarray(eval_u0(data, real), dtype=float),
        min_root_separation=sep,
    )


def _polish_real(data: RationalInitialData, pt: LaxOleinikPoint, y: float) -> float:
    y = float(y)
    for _ in range(5):
        f = y - pt.x + 2.0 * pt.t * eval_u0(data, y)
        df = 1.0 + 2.0 * pt.t * eval_u0_prime(data, y).real
        if df == 0:
            break
        step = f / df
        y -= step
        if abs(step) < 1e-16 * (1 + abs(y)):
            break
    return y


def solve_branches(data: RationalInitialData, pt: LaxOleinikPoint,
                   warm: np.ndarray | None = None,
                   tau_caustic: float = TAU_CAUSTIC) -> BranchData:
    """Classify the characteristic roots at (t, x) into Burgers branches and complex pairs."""
    roots = all_characteristic_roots(data, pt, warm)
    return classify_roots(data, pt, roots, tau_caustic=tau_caustic)


def count_real_roots(data: RationalInitialData, pt: LaxOleinikPoint) -> int:
    """Number of real characteristic roots, without the caustic guard (for J maps)."""
    roots = all_characteristic_roots(data, pt)
    return int(np.sum(np.abs(roots.imag) < TAU_REAL * (1.0 + np.abs(roots))))


def J_at(data: RationalInitialData, pt: LaxOleinikPoint) -> int:
    return (count_real_roots(data, pt) - 1) // 2


def weak_limit_ubar(branches: BranchData) -> float:
    signs = (-1.0) ** np.arange(len(branches.branch_values))
    return float(np.sum(signs * branches.branch_values))


def global_identity_residual(data: RationalInitialData, branches: BranchData) -> float:
    """|y_0 + sum(y_{2j-1} + y_{2j}) + sum 2 Re z_m - x - sum 2 Re p_n| scaled."""
    lhs = np.sum(branches.real_roots) + 2.0 * np.sum(branches.complex_roots.real)
    rhs = branches.x + 2.0 * np.sum(data.p.real)
    return abs(lhs - rhs) / (data.scale + abs(branches.x))


def hprime_factored(data: RationalInitialData, branches: BranchData, z) -> np.ndarray:
    """2t h'(z) assembled from its zeros and poles."""
    za = np.asarray(z, dtype=complex)
    num = np.prod(za[..., None] - branches.all_roots, axis=-1)
    den = np.prod(za[..., None] - data.all_poles, axis=-1)
    return num / den


def discriminant_at(data: RationalInitialData, pt: LaxOleinikPoint) -> float:
    """Discriminant of the monic characteristic polynomial via the Sylvester resultant."""
    a = characteristic_poly(data, pt)
    b = np.polyder(a)
    n = len(a) - 1
    m = len(b) - 1
    size = n + m
    syl = np.zeros((size, size))
    for i in range(m):
        syl[i, i:i + n + 1] = a
    for i in range(n):
        syl[m + i, i:i + m + 1] = b
    res = np.linalg.det(syl)
    sign = (-1.0) ** (n * (n - 1) // 2)
    return float(sign * res)


def branch_derivatives(data: RationalInitialData, pt: LaxOleinikPoint,
                       branches: BranchData) -> tuple[np.ndarray, np.ndarray]:
    """x-derivatives of the real roots and of the branch values by implicit differentiation."""
    up = eval_u0_prime(data, branches.real_roots.astype(complex)).real
    denom = 1.0 + 2.0 * pt.t * up
    if np.any(np.abs(denom) < 1e-8):
        raise NearCaustic("characteristic map is nearly singular at a real root")
    dy = 1.0 / denom
    return dy, up * dy


def continue_branches(data: RationalInitialData, pt: LaxOleinikPoint,
                      previous: BranchData | None) -> BranchData:
    """Solve at ``pt`` warm-started from the roots of a nearby point."""
    warm = None if previous is None else previous.all_roots
    try:
        return solve_branches(data, pt, warm=warm)
    except RootFindingFailure:
        return solve_branches(data, pt)


def caustic_scan(data: RationalInitialData, t_range: tuple[float, float],
                 x_range: tuple[float, float], resolution: tuple[int, int] | int
                 ) -> list[np.ndarray]:
    """Polylines (columns t, x) of the caustic locus in a rectangular window.

    The zero set of the discriminant is extracted with marching squares and only
    pieces across which the number of real roots changes are kept.
    """
    from skimage.measure import find_contours

    if isinstance(resolution, int):
        nt = nx = resolution
    else:
        nt, nx = resolution
    if nt < 2 or nx < 2:
        raise ValueError("resolution must be at least 2 in each direction")
    t0 = max(t_range[0], 1e-9)
    ts = np.linspace(t0, t_range[1], nt)
    xs = np.linspace(x_range[0], x_range[1], nx)
    disc = np.empty((nt, nx))
    for i, t in enumerate(ts):
        for j, x in enumerate(xs):
            disc[i, j] = discriminant_at(data, LaxOleinikPoint(t, x))
    # the discriminant spans many decades; its sign carries the information
    field = np.sign(disc) * np.log1p(np.abs(disc) / (np.median(np.abs(disc)) + 1e-300))
    curves = []
    dt = ts[1] - ts[0]
    dx = xs[1] - xs[0]
    for contour in find_contours(field, 0.0):
        t = t0 + contour[:, 0] * dt
        x = x_range[0] + contour[:, 1] * dx
        keep = []
        for k in range(len(t)):
            if _j_changes(data, t[k], x[k], dt, dx):
                keep.append(k)
        if keep:
            curves.append(np.column_stack([t[keep], x[keep]]))
    return curves


def _j_changes(data: RationalInitialData, t: float, x: float, dt: float, dx: float) -> bool:
    if t <= 0:
        return False
    h = 0.5 * dx
    left = LaxOleinikPoint(t, x - h)
    right = LaxOleinikPoint(t, x + h)
    if J_at(data, left) != J_at(data, right):
        return True
    lo = LaxOleinikPoint(max(t - 0.5 * dt, 1e-9), x)
    hi = LaxOleinikPoint(t + 0.5 * dt, x)
    return J_at(data, lo) != J_at(data, hi)


def j_map(data: RationalInitialData, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
    out = np.empty((len(ts), len(xs)), dtype=int)
    for i, t in enumerate(ts):
        for j, x in enumerate(xs):
            out[i, j] = J_at(data, LaxOleinikPoint(float(t), float(x)))
    return out


def discriminant_zeros_in_x(data: RationalInitialData, t: float, x_range: tuple[float, float],
                            samples: int = 4000) -> np.ndarray:
    """Real zeros in x of the discriminant at fixed t, by sign scan plus bisection.

    The discriminant is a polynomial in x, so the scan is refined until no
    bracket contains a doubled sign change at the sample spacing.
    """
    xs = np.linspace(x_range[0], x_range[1], samples)
    vals = np.array([discriminant_at(data, LaxOleinikPoint(t, x)) for x in xs])
    zeros = []
    for k in range(len(xs) - 1):
        a, b = xs[k], xs[k + 1]
        fa, fb = vals[k], vals[k + 1]
        if fa == 0.0:
            zeros.append(a)
            continue
        if fa * fb < 0:
            for _ in range(80):
                mid = 0.5 * (a + b)
                fm = discriminant_at(data, LaxOleinikPoint(t, mid))
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            zeros.append(0.5 * (a + b))
    return np.array(zeros)
