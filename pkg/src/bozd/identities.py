"""Randomised algebraic identities of the branch and profile construction.

Each check draws its own random data from a generator and returns a residual;
``CHECKS`` lists (name, check, bound) for the verification suite.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .branches import (
    BranchData,
    global_identity_residual,
    hprime_factored,
    solve_branches,
    weak_limit_ubar,
)
from .errors import BOError
from .rational import LaxOleinikPoint, RationalInitialData, eval_h_prime, eval_u0
from .zd import (
    U_r,
    fourier_coeff_Ur,
    phi_closed_form,
    phi_integral_form,
    u_zd_determinant,
    u_zd_one_phase,
    zd_params,
)

MAX_POLES = 4


def random_data(rng: np.random.Generator, max_poles: int = MAX_POLES) -> RationalInitialData:
    """Poles in a strip above the real axis with O(1) residues of either sign."""
    n = int(rng.integers(1, max_poles + 1))
    while True:
        poles = rng.uniform(-3.0, 3.0, n) + 1j * rng.uniform(0.5, 2.0, n)
        gaps = np.abs(poles[:, None] - poles[None, :]) + np.eye(n)
        if gaps.min() > 0.3:
            break
    residues = rng.normal(size=n) + 1j * rng.normal(size=n)
    return RationalInitialData(tuple(poles), tuple(residues))


def random_branches(rng: np.random.Generator, want_j: int | None = None,
                    attempts: int = 200, min_gap: float = 0.0) -> tuple[RationalInitialData, LaxOleinikPoint, BranchData]:
    """A random data set and a point (t, x) away from caustics, optionally with a given J.

    Candidate x values are screened by counting the crossings of the level x by
    the characteristic map y -> y + 2t u0(y) on a dense grid; only a candidate
    with the wanted count is passed to the root solver.
    """
    for _ in range(attempts):
        data = random_data(rng)
        t = float(rng.uniform(0.2, 4.0))
        ys = np.linspace(-40.0, 40.0, 8001)
        G = ys + 2.0 * t * eval_u0(data, ys)
        candidates = rng.uniform(G.min() + 1.0, G.max() - 1.0, 40)
        counts = np.sum(np.diff(np.sign(G[None, :] - candidates[:, None]), axis=1) != 0, axis=1)
        for x, count in zip(candidates, counts):
            if want_j is not None and count != 2 * want_j + 1:
                continue
            pt = LaxOleinikPoint(t, float(x))
            try:
                br = solve_branches(data, pt)
            except BOError:
                continue
            values = br.branch_values
            if len(values) > 1 and np.min(np.diff(values)) < min_gap * (values[-1] - values[0]):
                continue
            if want_j is None or br.J == want_j:
                return data, pt, br
    raise RuntimeError(f"no point with J = {want_j} found in {attempts} random data sets")


def check_global_identity(rng: np.random.Generator) -> float:
    data, _, br = random_branches(rng)
    return global_identity_residual(data, br)


def check_hprime_factored(rng: np.random.Generator) -> float:
    data, pt, br = random_branches(rng)
    z = complex(rng.normal(0.0, 3.0), rng.normal(0.0, 3.0))
    direct = 2.0 * pt.t * complex(eval_h_prime(data, pt, z))
    factored = complex(hprime_factored(data, br, z))
    return abs(direct - factored) / max(abs(direct), 1e-300)


def check_phi_dual_form(rng: np.random.Generator) -> float:
    data, pt, br = random_branches(rng)
    y = float(br.real_roots[int(rng.integers(len(br.real_roots)))])
    closed = float(phi_closed_form(data, pt, br, y))
    quad = phi_integral_form(data, pt, br, y)
    return abs(closed - quad)


def check_fourier_coefficients(rng: np.random.Generator) -> float:
    """Closed-form Fourier coefficients of U_r and U_r^2 against trapezoid sums."""
    r = float(rng.uniform(0.05, 0.9))
    n = int(rng.integers(0, 8))
    p = int(rng.integers(1, 3))
    # trapezoid rule is spectrally accurate for periodic integrands
    samples = 4096
    theta = 2.0 * math.pi * np.arange(samples) / samples
    numeric = float(np.mean(U_r(r, theta) ** p * np.cos(n * theta)))
    closed = fourier_coeff_Ur(r, n, p)
    return abs(numeric - closed) / max(1.0, abs(closed))


def check_one_phase_closed_form(rng: np.random.Generator) -> float:
    """J = 1 closed form against the determinant with the fast phase differentiated."""
    data, pt, br = random_branches(rng, want_j=1)
    params = zd_params(data, pt, br)
    eps = float(2.0 ** -rng.integers(2, 8))
    closed = u_zd_one_phase(params, eps)
    det = u_zd_determinant(data, pt, eps, params, slow=False)
    return abs(closed - det)


def _torus_mean(params, epsilon: float, samples: int) -> float:
    """Mean of the determinant-form profile over a samples^J grid of fast phases."""
    u = params.branches.branch_values
    J = params.J
    odd = u[1:2 * J:2]
    even = u[2:2 * J + 1:2]
    coupling = 1.0 / (odd[:, None] - even[None, :])
    base = u[0] + float(np.sum(odd - even))
    grid = 2.0 * math.pi * np.arange(samples) / samples
    # the first phase runs over the whole grid in every batch; the rest are enumerated
    outer = list(itertools.product(grid, repeat=J - 1))
    total = 0.0
    for rest in outer:
        shifts = np.column_stack([grid] + [np.full(samples, v) for v in rest])
        diag = params.gamma[None, :] * np.exp(1j * (params.theta[None, :] / epsilon + shifts))
        M = np.broadcast_to(coupling, (samples, J, J)).astype(complex)
        M[:, np.arange(J), np.arange(J)] += diag
        dM = np.zeros_like(M)
        dM[:, np.arange(J), np.arange(J)] = diag * (1j * params.kappa[None, :] / epsilon)
        trace = np.trace(np.linalg.solve(M, dM), axis1=1, axis2=2)
        total += float(np.sum(base - 2.0 * epsilon * trace.imag))
    return total / (samples * len(outer))


def fast_phase_average(data: RationalInitialData, pt: LaxOleinikPoint, br: BranchData,
                       epsilon: float, tol: float = 1e-9, max_samples: int | None = None) -> float:
    """Average of u_zd over the J-torus of fast phases with slow parameters frozen.

    The trapezoid rule converges geometrically for this periodic integrand, so
    the grid is doubled until two successive means agree to ``tol``.
    """
    params = zd_params(data, pt, br)
    if max_samples is None:
        max_samples = 1 << 14 if params.J == 1 else 2048
    samples = 16
    prev = _torus_mean(params, epsilon, samples)
    while samples < max_samples:
        samples *= 2
        cur = _torus_mean(params, epsilon, samples)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def check_period_average(rng: np.random.Generator) -> float:
    # close branch values make the wave a train of narrow peaks whose average
    # converges slowly, so the sampled points keep them apart
    want = int(rng.integers(1, 3))
    try:
        data, pt, br = random_branches(rng, want_j=want, attempts=60, min_gap=0.1)
    except RuntimeError:
        data, pt, br = random_branches(rng, want_j=1, min_gap=0.1)
    return abs(fast_phase_average(data, pt, br, 2.0 ** -5) - weak_limit_ubar(br))


CHECKS = (
    ("global identity", check_global_identity, 1e-10),
    ("factored h'", check_hprime_factored, 1e-10),
    ("Phi dual form", check_phi_dual_form, 1e-6),
    ("U_r Fourier coefficients", check_fourier_coefficients, 1e-10),
    ("one-phase closed form vs determinant", check_one_phase_closed_form, 1e-8),
    ("fast-phase average equals weak limit", check_period_average, 1e-6),
)


__all__ = [
    "random_data", "random_branches", "fast_phase_average", "CHECKS",
    "check_global_identity", "check_hprime_factored", "check_phi_dual_form",
    "check_fourier_coefficients", "check_one_phase_closed_form", "check_period_average",
]
