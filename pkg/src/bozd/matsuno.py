"""N-soliton determinant for u0 = 2/(1 + x^2) at eps = 1/N.

With lambda_j = -(eps/2) xi_j, where xi_j are the zeros of the Laguerre
polynomial L_N, the solution is

    u(t, x) = 2 eps Im tr[(I + (i/eps) A)^{-1} (i/eps) dA/dx],

A_jj = -2 lambda_j (x + 2 lambda_j t), A_jk = 2 i eps sqrt(lambda_j lambda_k)/(lambda_j - lambda_k).
Since every lambda_j < 0, sqrt(lambda_j lambda_k) is the positive root of a
positive number.  A is Hermitian, so I + (i/eps) A is always invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConfigError, SingularResolvent


def _laguerre_and_derivative(n: int, x):
    """L_n(x) and L_n'(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev, np.zeros_like(x)
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    # x L_n' = n (L_n - L_{n-1})
    deriv = n * (cur - prev) / x
    return cur, deriv


def laguerre_zeros(N: int) -> np.ndarray:
    """Zeros of L_N, ascending: Golub-Welsch eigenvalues polished by Newton."""
    if N < 1:
        raise ConfigError("N must be at least 1")
    k = np.arange(N)
    diag = 2.0 * k + 1.0
    off = np.arange(1, N, dtype=float)
    xi = eigh_tridiagonal(diag, off, eigvals_only=True)
    for _ in range(3):
        val, der = _laguerre_and_derivative(N, xi)
        xi = xi - val / der
    return np.sort(xi)


def laguerre_residual(N: int, xi) -> np.ndarray:
    """|L_N(xi)| / |L_N'(xi) xi|, the scale-free residual of a computed zero."""
    val, der = _laguerre_and_derivative(N, xi)
    return np.abs(val) / np.abs(der * np.asarray(xi))


@dataclass(frozen=True)
class MatsunoSpec:
    N: int
    epsilon: float
    lambdas: np.ndarray

    @classmethod
    def for_order(cls, N: int) -> "MatsunoSpec":
        if int(N) != N or N < 1:
            raise ConfigError(f"N must be a positive integer, got {N}")
        eps = 1.0 / N
        return cls(int(N), eps, -0.5 * eps * laguerre_zeros(int(N)))


def matsuno_matrix(spec: MatsunoSpec, t: float, x: float) -> np.ndarray:
    lam = spec.lambdas
    eps = spec.epsilon
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, 1.0)
    A = 2j * eps * np.sqrt(lam[:, None] * lam[None, :]) / diff
    np.fill_diagonal(A, -2.0 * lam * (x + 2.0 * lam * t))
    return A


def u_matsuno(spec: MatsunoSpec, t: float, x: float) -> float:
    eps = spec.epsilon
    A = matsuno_matrix(spec, t, x)
    M = np.eye(spec.N) + (1j / eps) * A
    dA = (1j / eps) * np.diag(-2.0 * spec.lambdas)
    try:
        R = np.linalg.solve(M, dA)
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent(f"I + (i/eps) A is singular at (t, x) = ({t}, {x})") from exc
    return float(2.0 * eps * np.trace(R).imag)


def u_matsuno_grid(spec: MatsunoSpec, t: float, xs) -> np.ndarray:
    return np.array([u_matsuno(spec, t, float(x)) for x in np.asarray(xs, dtype=float)])
