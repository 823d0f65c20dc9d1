"""Exact J-phase solutions with constant parameters and the one-phase traveling wave.

A J-phase solution is fixed by real R_0 < R_1 < ... < R_2J and complex gamma_j
whose moduli are determined by the R's.  With linear phases
theta_j = (R_{2j-1} - R_{2j}) x - (R_{2j-1}^2 - R_{2j}^2) t,

    u = R_0 + sum_j (R_{2j-1} - R_{2j}) - 2 eps Im d/dx log det M,
    M_jk = gamma_j e^{i theta_j/eps} delta_jk + 1/(R_{2j-1} - R_{2k}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SingularM
from .zd import U_r, gamma_modulus_sq

MODULUS_RTOL = 1e-8


@dataclass(frozen=True)
class JPhaseSpec:
    R: np.ndarray
    gamma: np.ndarray
    epsilon: float

    def __post_init__(self) -> None:
        R = np.asarray(self.R, dtype=float)
        gamma = np.asarray(self.gamma, dtype=complex)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "gamma", gamma)
        if R.ndim != 1 or len(R) % 2 != 1:
            raise ConfigError(f"need an odd number 2J+1 of R values, got {R.shape}")
        if np.any(np.diff(R) <= 0.0):
            raise ConfigError("R values must be strictly increasing")
        if len(gamma) != (len(R) - 1) // 2:
            raise ConfigError(f"need {(len(R) - 1) // 2} gamma values, got {len(gamma)}")
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        target = gamma_modulus_sq(R)
        actual = np.abs(gamma) ** 2
        if np.any(target <= 0.0):
            raise ConfigError(f"modulus constraint gives non-positive |gamma|^2 {target}")
        if np.any(np.abs(actual - target) > MODULUS_RTOL * target):
            raise ConfigError(
                f"|gamma|^2 = {actual} violates the modulus constraint {target}")

    @property
    def J(self) -> int:
        return len(self.gamma)

    @classmethod
    def from_phases(cls, R, phases, epsilon: float) -> "JPhaseSpec":
        """Build gamma_j = |gamma_j| e^{i phase_j} with the moduli forced by R."""
        R = np.asarray(R, dtype=float)
        if np.any(np.diff(R) <= 0.0):
            raise ConfigError("R values must be strictly increasing")
        modulus = np.sqrt(gamma_modulus_sq(R))
        return cls(R, modulus * np.exp(1j * np.asarray(phases, dtype=float)), epsilon)


def linear_phases(spec: JPhaseSpec, t: float, x: float) -> tuple[np.ndarray, np.ndarray]:
    """theta_j(t, x) and d theta_j/dx."""
    odd = spec.R[1::2]
    even = spec.R[2::2]
    wavenumber = odd - even
    return wavenumber * x - (odd ** 2 - even ** 2) * t, wavenumber


def dk_matrix(spec: JPhaseSpec, t: float, x: float) -> np.ndarray:
    odd = spec.R[1::2]
    even = spec.R[2::2]
    theta, _ = linear_phases(spec, t, x)
    M = (1.0 / (odd[:, None] - even[None, :])).astype(complex)
    M[np.diag_indices(spec.J)] += spec.gamma * np.exp(1j * theta / spec.epsilon)
    return M


def jphase_u(spec: JPhaseSpec, t: float, x: float) -> float:
    eps = spec.epsilon
    theta, wavenumber = linear_phases(spec, t, x)
    M = dk_matrix(spec, t, x)
    scale = float(np.max(np.abs(M)))
    if abs(np.linalg.det(M)) <= 1e-13 * scale ** spec.J:
        raise SingularM(f"J-phase matrix is singular at (t, x) = ({t}, {x})")
    # only the diagonal depends on x
    dM = np.diag(spec.gamma * np.exp(1j * theta / eps) * (1j * wavenumber / eps))
    log_det_x = np.trace(np.linalg.solve(M, dM))
    base = spec.R[0] + float(np.sum(wavenumber))
    return float(base - 2.0 * eps * log_det_x.imag)


def traveling_speed(M: float, r: float, a: float = 0.0) -> float:
    """c_r = M (1 + r^2)/(1 - r^2), plus the Galilean drift 2a of a background level a."""
    return M * (1.0 + r * r) / (1.0 - r * r) + 2.0 * a


def periodic_wave(M: float, r: float, a: float, alpha: float, epsilon: float, t: float, x):
    """M U_r(M (x - c t)/eps + alpha) + a with c = c_r + 2a."""
    if not M > 0.0:
        raise ConfigError(f"M must be positive, got {M}")
    if not 0.0 < r < 1.0:
        raise ConfigError(f"r must lie in (0, 1), got {r}")
    speed = traveling_speed(M, r, a)
    return M * U_r(r, M * (np.asarray(x) - speed * t) / epsilon + alpha) + a


def one_phase_parameters(spec: JPhaseSpec) -> tuple[float, float, float, float]:
    """(M, r, a, alpha) of the traveling wave equal to a J = 1 solution."""
    if spec.J != 1:
        raise ConfigError("only a one-phase solution is a single traveling wave")
    R0, R1, R2 = spec.R
    M = R2 - R1
    r = math.sqrt((R1 - R0) / (R2 - R0))
    return M, r, R0, -float(np.angle(spec.gamma[0]))


__all__ = [
    "JPhaseSpec", "linear_phases", "dk_matrix", "jphase_u", "traveling_speed",
    "periodic_wave", "one_phase_parameters",
]
