"""The explicit zero-dispersion profile built from the multivalued Burgers branches.

In a region with J oscillatory phases the profile is a J-phase wave whose
parameters are slowly modulated: the phases theta_j are differences of h at
consecutive real roots, the phase shifts phi_j come from the auxiliary function
Phi, and the moduli |gamma_j| are fixed by the branch values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .branches import (
    BranchData,
    branch_derivatives,
    continue_branches,
    solve_branches,
)
from .errors import NonPositiveModulus, QuadratureFailure, SingularM
from .rational import LaxOleinikPoint, RationalInitialData, eval_h_real


@dataclass(frozen=True)
class ZDProfileParams:
    branches: BranchData
    theta: np.ndarray
    phi: np.ndarray
    gamma_abs: np.ndarray
    kappa: np.ndarray
    omega: np.ndarray

    @property
    def J(self) -> int:
        return self.branches.J

    @property
    def gamma(self) -> np.ndarray:
        return self.gamma_abs * np.exp(1j * self.phi)


@dataclass(frozen=True)
class ModulationMatrix:
    M: np.ndarray
    epsilon: float


# ---------------------------------------------------------------- one-phase wave

def U_r(r: float, theta):
    """(1 - r^2)/(1 + r^2 - 2 r cos theta), written without cancellation near theta = 0."""
    s = np.sin(0.5 * np.asarray(theta))
    return (1.0 - r * r) / ((1.0 - r) ** 2 + 4.0 * r * s * s)


def fourier_coeff_Ur(r: float, n: int, p: int) -> float:
    """n-th Fourier coefficient of U_r**p for p in {1, 2}."""
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    k = abs(n)
    return r**k * (k + (1.0 + r * r) / (1.0 - r * r)) ** (p - 1)


# ---------------------------------------------------------------- phases

def nonlinear_phases(data: RationalInitialData, pt: LaxOleinikPoint,
                     branches: BranchData) -> np.ndarray:
    """theta_j = h(y_{2j-1}) - h(y_{2j})."""
    y = branches.real_roots
    hv = np.atleast_1d(eval_h_real(data, pt, y))
    J = branches.J
    return np.array([hv[2 * j - 1] - hv[2 * j] for j in range(1, J + 1)])


def phi_closed_form(data: RationalInitialData, pt: LaxOleinikPoint,
                    branches: BranchData, y) -> np.ndarray | float:
    """Sum of Arg(y - p_n) minus sum of Arg(y - z_m), every Arg taken in (-pi, 0)."""
    ya = np.asarray(y, dtype=float)
    val = np.sum(np.angle(ya[..., None] - data.p), axis=-1)
    if len(branches.complex_roots):
        val = val - np.sum(np.angle(ya[..., None] - branches.complex_roots), axis=-1)
    return float(val) if np.ndim(y) == 0 else val


def log_g(data: RationalInitialData, branches: BranchData, y):
    """ln g(y) with g the positive rational function left after removing the real roots."""
    ya = np.asarray(y, dtype=float)
    val = -2.0 * np.sum(np.log(np.abs(ya[..., None] - data.p)), axis=-1)
    if len(branches.complex_roots):
        val = val + 2.0 * np.sum(np.log(np.abs(ya[..., None] - branches.complex_roots)), axis=-1)
    return val


def phi_integral_form(data: RationalInitialData, pt: LaxOleinikPoint,
                      branches: BranchData, y: float, tol: float = 1e-11) -> float:
    """-J pi/2 + (1/2pi) int_0^inf ln(g(y-s)/g(y+s)) ds/s."""
    y = float(y)

    def integrand(s: float) -> float:
        if s == 0.0:
            return 0.0
        return float(log_g(data, branches, y - s) - log_g(data, branches, y + s)) / s

    # break points where the integrand varies quickly: distances to the singular points
    pts = sorted({abs(y - q.real) for q in np.concatenate([data.p, branches.complex_roots])}
                 | {abs(y - r) for r in branches.real_roots})
    pts = [p for p in pts if p > 0]
    split = 4.0 * (1.0 + abs(y) + max(pts, default=1.0))
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            head, _ = integrate.quad(integrand, 0.0, split, points=pts[:50] or None,
                                     epsabs=tol, epsrel=tol, limit=400)
            tail, _ = integrate.quad(integrand, split, np.inf, epsabs=tol, epsrel=tol, limit=400)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"Phi integral did not converge: {exc}") from exc
    return -branches.J * math.pi / 2.0 + (head + tail) / (2.0 * math.pi)


def phase_corrections(data: RationalInitialData, pt: LaxOleinikPoint,
                      branches: BranchData, use_integral: bool = False) -> np.ndarray:
    """phi_j = pi/2 + Phi(y_{2j-1}) - Phi(y_{2j})."""
    J = branches.J
    y = branches.real_roots
    if use_integral:
        Phi = np.array([phi_integral_form(data, pt, branches, v) for v in y])
    else:
        Phi = np.atleast_1d(phi_closed_form(data, pt, branches, y))
    return np.array([math.pi / 2.0 + Phi[2 * j - 1] - Phi[2 * j] for j in range(1, J + 1)])


# ---------------------------------------------------------------- moduli

def gamma_modulus_sq(R) -> np.ndarray:
    """|gamma_j|^2 from the J-phase modulus constraint with ascending R_0 < ... < R_2J."""
    R = np.asarray(R, dtype=float)
    J = (len(R) - 1) // 2
    out = np.empty(J)
    for j in range(1, J + 1):
        num = R[2 * j] - R[0]
        den = R[2 * j - 1] - R[0]
        for k in range(1, J + 1):
            if k != j:
                num *= R[2 * j - 1] - R[2 * k - 1]
                num *= R[2 * j] - R[2 * k]
            den *= R[2 * j] - R[2 * k - 1]
            den *= R[2 * j - 1] - R[2 * k]
        out[j - 1] = -num / den
    return out


def gamma_modulus(branches_or_R) -> np.ndarray:
    R = branches_or_R.branch_values if isinstance(branches_or_R, BranchData) else branches_or_R
    sq = gamma_modulus_sq(R)
    if np.any(~np.isfinite(sq)) or np.any(sq <= 0.0):
        raise NonPositiveModulus(f"squared moduli {sq} are not all positive")
    return np.sqrt(sq)


# ---------------------------------------------------------------- profile

def zd_params(data: RationalInitialData, pt: LaxOleinikPoint,
              branches: BranchData | None = None, use_integral_phi: bool = False) -> ZDProfileParams:
    if branches is None:
        branches = solve_branches(data, pt)
    u = branches.branch_values
    J = branches.J
    if J == 0:
        empty = np.zeros(0)
        return ZDProfileParams(branches, empty, empty, empty, empty, empty)
    kappa = np.array([u[2 * j - 1] - u[2 * j] for j in range(1, J + 1)])
    omega = np.array([u[2 * j - 1] ** 2 - u[2 * j] ** 2 for j in range(1, J + 1)])
    return ZDProfileParams(
        branches=branches,
        theta=nonlinear_phases(data, pt, branches),
        phi=phase_corrections(data, pt, branches, use_integral=use_integral_phi),
        gamma_abs=gamma_modulus(branches),
        kappa=kappa,
        omega=omega,
    )


def build_M(params: ZDProfileParams, epsilon: float) -> ModulationMatrix:
    u = params.branches.branch_values
    J = params.J
    odd = u[1:2 * J:2]
    even = u[2:2 * J + 1:2]
    M = 1.0 / (odd[:, None] - even[None, :])
    M = M.astype(complex)
    M[np.diag_indices(J)] += params.gamma * np.exp(1j * params.theta / epsilon)
    scale = float(np.max(np.abs(M)))
    if abs(np.linalg.det(M)) <= 1e-12 * scale**J:
        raise SingularM("modulation matrix is numerically singular")
    return ModulationMatrix(M, epsilon)


def _slow_derivative(data: RationalInitialData, pt: LaxOleinikPoint,
                     params: ZDProfileParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Central differences of (u_k, |gamma_j|, phi_j) in x at fixed theta."""
    step = 1e-6 * (1.0 + abs(pt.x))
    vals = []
    for sgn in (1.0, -1.0):
        p2 = LaxOleinikPoint(pt.t, pt.x + sgn * step)
        b2 = continue_branches(data, p2, params.branches)
        if b2.J != params.J:
            raise SingularM("J changes within the finite-difference stencil")
        vals.append((b2.branch_values, gamma_modulus(b2), phase_corrections(data, p2, b2)))
    du = (vals[0][0] - vals[1][0]) / (2 * step)
    dg = (vals[0][1] - vals[1][1]) / (2 * step)
    dphi = (vals[0][2] - vals[1][2]) / (2 * step)
    return du, dg, dphi


def u_zd_determinant(data: RationalInitialData, pt: LaxOleinikPoint, epsilon: float,
                     params: ZDProfileParams | None = None, slow: bool = True) -> float:
    """J-phase form u_0 + sum(u_{2j-1} - u_{2j}) - 2 eps Im tr(M^{-1} dM/dx).

    The fast phase is differentiated exactly (d theta_j/dx = kappa_j).  With
    ``slow=True`` the x-dependence of the branch values, moduli and phase
    shifts is added through central differences.
    """
    if params is None:
        params = zd_params(data, pt)
    u = params.branches.branch_values
    J = params.J
    if J == 0:
        return float(u[0])
    M = build_M(params, epsilon).M
    expo = np.exp(1j * params.theta / epsilon)
    dM = np.zeros((J, J), dtype=complex)
    dM[np.diag_indices(J)] = params.gamma * expo * (1j * params.kappa / epsilon)
    if slow:
        du, dg, dphi = _slow_derivative(data, pt, params)
        odd = u[1:2 * J:2]
        even = u[2:2 * J + 1:2]
        dodd = du[1:2 * J:2]
        deven = du[2:2 * J + 1:2]
        dM += -(dodd[:, None] - deven[None, :]) / (odd[:, None] - even[None, :]) ** 2
        dgamma = (dg + 1j * params.gamma_abs * dphi) * np.exp(1j * params.phi)
        dM[np.diag_indices(J)] += dgamma * expo
    trace = np.trace(np.linalg.solve(M, dM))
    base = u[0] + float(np.sum(u[1:2 * J:2] - u[2:2 * J + 1:2]))
    return float(base - 2.0 * epsilon * trace.imag)


def u_zd_one_phase(params: ZDProfileParams, epsilon: float) -> float:
    u = params.branches.branch_values
    r = math.sqrt((u[1] - u[0]) / (u[2] - u[0]))
    return float(u[0] + (u[2] - u[1]) * U_r(r, params.theta[0] / epsilon + params.phi[0]))


def u_zd(data: RationalInitialData, pt: LaxOleinikPoint, epsilon: float,
         branches: BranchData | None = None) -> float:
    """Zero-dispersion profile at (t, x)."""
    pt.require_positive_time()
    if branches is None:
        branches = solve_branches(data, pt)
    if branches.J == 0:
        return float(branches.branch_values[0])
    params = zd_params(data, pt, branches)
    if params.J == 1:
        return u_zd_one_phase(params, epsilon)
    return u_zd_determinant(data, pt, epsilon, params, slow=True)


def u_zd_sweep(data: RationalInitialData, t: float, xs, epsilon: float) -> np.ndarray:
    """u_zd along an x-grid, warm-starting the root solver from the previous point."""
    out = np.empty(len(xs))
    prev = None
    for i, x in enumerate(xs):
        pt = LaxOleinikPoint(t, float(x))
        prev = continue_branches(data, pt, prev)
        out[i] = u_zd(data, pt, epsilon, prev)
    return out


def phase_derivatives(data: RationalInitialData, pt: LaxOleinikPoint,
                      branches: BranchData) -> tuple[np.ndarray, np.ndarray]:
    """Exact (kappa_j, -omega_j) = (d theta/dx, d theta/dt) from the branch values."""
    u = branches.branch_values
    J = branches.J
    kappa = np.array([u[2 * j - 1] - u[2 * j] for j in range(1, J + 1)])
    omega = np.array([u[2 * j - 1] ** 2 - u[2 * j] ** 2 for j in range(1, J + 1)])
    return kappa, -omega


__all__ = [
    "ZDProfileParams", "ModulationMatrix", "U_r", "fourier_coeff_Ur", "nonlinear_phases",
    "phi_closed_form", "phi_integral_form", "phase_corrections", "gamma_modulus",
    "gamma_modulus_sq", "zd_params", "build_M", "u_zd", "u_zd_determinant",
    "u_zd_one_phase", "u_zd_sweep", "phase_derivatives", "branch_derivatives",
]
