"""The exponent h(z) on the cut plane and its analytic continuation along paths.

The exact solution integrates ``f(z) exp(-i h(z)/eps)`` where

    h(z) = (z - x)^2/(4t) + sum_n [c_n log(z - p_n) + conj(c_n) log(z - conj(p_n))].

Each logarithm is carried as ``log|z - q| + i theta`` with an explicit argument
``theta``; continuing h along a path is the same as unwrapping each theta.  The
reference sheet uses cuts from each upper pole to infinity along the ray of
angle 3pi/4 and the principal (leftward) cuts at the lower poles.  Far out on the
negative real axis this sheet agrees with the principal-branch formula.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .rational import LaxOleinikPoint, RationalInitialData

CUT_ANGLE = 0.75 * math.pi
CUT_DIR = cmath.exp(1j * CUT_ANGLE)
TWO_PI = 2.0 * math.pi


class Landscape:
    """h, h', h'' at a fixed (t, x), with explicit per-logarithm branch arguments."""

    def __init__(self, data: RationalInitialData, pt: LaxOleinikPoint, eta: float = 0.0):
        pt.require_positive_time()
        # Paths are steepest for Re(-i e^{i eta} h).  A small eta breaks the
        # conjugation symmetry that otherwise joins conjugate saddles.
        self.eta = float(eta)
        self.rot = cmath.exp(1j * self.eta)
        self.data = data
        self.t = float(pt.t)
        self.x = float(pt.x)
        self.N = data.N
        self.q = np.concatenate([data.p, data.p.conj()])
        self.a = np.concatenate([data.c, data.c.conj()])
        self.q_list = [complex(v) for v in self.q]
        self.a_list = [complex(v) for v in self.a]
        self.is_upper = np.array([True] * self.N + [False] * self.N)

    # -------------------------------------------------------------- derivatives

    def hprime(self, z: complex) -> complex:
        s = (z - self.x) / (2.0 * self.t)
        for q, a in zip(self.q_list, self.a_list):
            s += a / (z - q)
        return s

    def hsecond(self, z: complex) -> complex:
        s = 1.0 / (2.0 * self.t)
        for q, a in zip(self.q_list, self.a_list):
            d = z - q
            s -= a / (d * d)
        return s

    def hprime_vec(self, z: np.ndarray) -> np.ndarray:
        return (z - self.x) / (2.0 * self.t) + np.sum(self.a / (z[..., None] - self.q), axis=-1)

    # -------------------------------------------------------------- branches

    def cut_args(self, z: complex) -> np.ndarray:
        """Arguments of z - q on the reference sheet."""
        ang = np.angle(z - self.q)
        upper_wrap = self.is_upper & (ang > CUT_ANGLE)
        ang[upper_wrap] -= TWO_PI
        return ang

    def cut_args_vec(self, z: np.ndarray) -> np.ndarray:
        ang = np.angle(z[..., None] - self.q)
        mask = self.is_upper & (ang > CUT_ANGLE)
        return np.where(mask, ang - TWO_PI, ang)

    def advance_args(self, z_old: complex, z_new: complex, args: np.ndarray) -> np.ndarray:
        """Continue the arguments from z_old to z_new along the straight segment."""
        return args + np.angle((z_new - self.q) / (z_old - self.q))

    def h(self, z: complex, args: np.ndarray) -> complex:
        logs = np.log(np.abs(z - self.q)) + 1j * args
        return (z - self.x) ** 2 / (4.0 * self.t) + complex(np.sum(self.a * logs))

    def h_vec(self, z: np.ndarray, args: np.ndarray) -> np.ndarray:
        logs = np.log(np.abs(z[..., None] - self.q)) + 1j * args
        return (z - self.x) ** 2 / (4.0 * self.t) + np.sum(self.a * logs, axis=-1)

    def h_cut(self, z: complex) -> complex:
        return self.h(z, self.cut_args(z))

    def h_diff(self, z, z0: complex, dargs) -> np.ndarray:
        """h(z) - h(z0) where ``dargs`` holds theta(z) - theta(z0) per logarithm.

        Written as differences so that it stays accurate for z close to z0.
        """
        z = np.asarray(z, dtype=complex)
        quad = (z - z0) * (z + z0 - 2.0 * self.x) / (4.0 * self.t)
        rel = (z[..., None] - z0) / (z0 - self.q)
        # log|1 + rel|: log1p form for small rel, plain form near the pole where 1 + rel -> 0
        near = np.abs(rel) < 0.5
        small = np.where(near, rel, 0.0)
        log_small = 0.5 * np.log1p(2.0 * small.real + (small * small.conjugate()).real)
        log_large = np.log(np.abs(np.where(near, 1.0, 1.0 + rel)))
        logs = np.where(near, log_small, log_large) + 1j * dargs
        return quad + np.sum(self.a * logs, axis=-1)

    def hprime_from(self, z, z0: complex) -> np.ndarray:
        """h'(z) for a critical point z0, factored as (z - z0) g(z) so it keeps relative accuracy near z0."""
        z = np.asarray(z, dtype=complex)
        g = 1.0 / (2.0 * self.t) - np.sum(self.a / ((z[..., None] - self.q) * (z0 - self.q)), axis=-1)
        return (z - z0) * g

    # -------------------------------------------------------------- misc

    def singular_points(self) -> np.ndarray:
        return self.q

    def nearest_pole_distance(self, z: complex) -> float:
        return min(abs(z - q) for q in self.q_list)

    def is_mountain(self, k: int) -> bool:
        """True when |exp(-i h/eps)| blows up at singular point k.

        Near q, Re(-i h) ~ Im(a) log|z - q|, so the exponential is unbounded
        exactly when Im(a) < 0.
        """
        return self.a_list[k].imag < 0.0

    def monodromy_log(self, nvec, epsilon: float) -> complex:
        """log of exp(2 pi sum_j n_j a_j / eps), the factor picked up between two sheets."""
        return complex(TWO_PI * np.dot(np.asarray(nvec, dtype=float), self.a) / epsilon)
