"""Simultaneous polynomial root finding (Aberth-Ehrlich) with Newton polishing."""

from __future__ import annotations

import numpy as np

from .errors import RootFindingFailure


def _cauchy_radius(coeffs: np.ndarray) -> float:
    """Upper bound on root moduli for a monic polynomial (Fujiwara bound)."""
    a = np.abs(coeffs[1:] / coeffs[0])
    n = len(a)
    if n == 0:
        return 1.0
    k = np.arange(1, n + 1)
    terms = a ** (1.0 / k)
    terms[-1] = (a[-1] / 2.0) ** (1.0 / n)
    return 2.0 * float(np.max(terms)) + 1e-300


def aberth(coeffs, init=None, tol: float = 1e-11, maxiter: int = 500) -> np.ndarray:
    """All complex roots of the polynomial with coefficients ``coeffs`` (highest first).

    ``init`` may hold warm-start guesses (one per root); otherwise the guesses are
    spread on a slightly rotated circle whose radius bounds the roots.
    """
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    dc = c[:-1] * np.arange(n, 0, -1)
    if init is None:
        centre = -c[1] / n
        radius = _cauchy_radius(c)
        angles = 2 * np.pi * np.arange(n) / n + 0.4
        z = centre + 0.5 * radius * np.exp(1j * angles)
    else:
        z = np.array(init, dtype=complex).copy()
        # separate coincident guesses, Aberth needs distinct starting points
        for i in range(n):
            for j in range(i):
                if abs(z[i] - z[j]) < 1e-10 * (1 + abs(z[i])):
                    z[i] += 1e-6 * (1 + abs(z[i])) * np.exp(1j * (i + 1))
    converged = np.zeros(n, dtype=bool)
    for _ in range(maxiter):
        pz = np.polyval(c, z)
        dpz = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        w[converged] = 0.0
        z = z - w
        converged |= np.abs(w) <= tol * (1.0 + np.abs(z))
        if converged.all():
            return z
    if not np.all(np.isfinite(z)):
        raise RootFindingFailure("Aberth iteration diverged")
    return z


def newton_polish(f, df, z0: complex, tol: float, maxiter: int = 50) -> tuple[complex, float]:
    """Plain Newton on a scalar function; returns the root and the final residual."""
    z = complex(z0)
    best, best_res = z, abs(f(z))
    for _ in range(maxiter):
        fz = f(z)
        if abs(fz) <= tol:
            return z, abs(fz)
        d = df(z)
        if d == 0:
            break
        z = z - fz / d
        res = abs(f(z))
        if res < best_res:
            best, best_res = z, res
        elif res > 1e3 * best_res:
            break
    return best, best_res
