"""Rational initial data u0(x) = sum_n c_n/(x - p_n) + conj and the phase function h.

The conjugate half of the data is never stored.  Every evaluation builds the
pair ``(p_n, c_n)`` together with ``(conj p_n, conj c_n)`` so that u0 is real on
the real line by construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError, NonPositiveTime, PoleHit

DEFAULT_TAU = 1e-12


@dataclass(frozen=True)
class RationalInitialData:
    """Poles in the upper half-plane and their residues."""

    poles: tuple[complex, ...]
    residues: tuple[complex, ...]
    p: np.ndarray = field(init=False, repr=False, compare=False)
    c: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        poles = tuple(complex(v) for v in self.poles)
        residues = tuple(complex(v) for v in self.residues)
        if len(poles) == 0:
            raise ConfigError("at least one pole is required")
        if len(poles) != len(residues):
            raise ConfigError(
                f"{len(poles)} poles but {len(residues)} residues were given")
        for n, p in enumerate(poles):
            if not (math.isfinite(p.real) and math.isfinite(p.imag)):
                raise ConfigError(f"pole {n} is not finite")
            if p.imag <= 0.0:
                raise ConfigError(f"pole {n} = {p} must have positive imaginary part")
        for n, c in enumerate(residues):
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ConfigError(f"residue {n} is not finite")
        for n in range(len(poles)):
            for m in range(n):
                if abs(poles[n] - poles[m]) < 1e-12 * (1.0 + abs(poles[n])):
                    raise ConfigError(f"pole {n} coincides with pole {m}")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", residues)
        object.__setattr__(self, "p", np.array(poles, dtype=complex))
        object.__setattr__(self, "c", np.array(residues, dtype=complex))

    @property
    def N(self) -> int:
        return len(self.poles)

    @property
    def all_poles(self) -> np.ndarray:
        """Upper poles followed by their conjugates."""
        return np.concatenate([self.p, self.p.conj()])

    @property
    def all_residues(self) -> np.ndarray:
        return np.concatenate([self.c, self.c.conj()])

    @property
    def scale(self) -> float:
        """Length/amplitude scale used by relative tolerances."""
        return 1.0 + float(np.max(np.abs(self.p))) + float(np.sum(np.abs(self.c)))

    def sup_u0(self, samples: int = 4001) -> float:
        """Supremum of |u0| on the real line, sampled densely around the poles."""
        xs = [np.linspace(-50.0, 50.0, samples)]
        for p in self.p:
            xs.append(p.real + p.imag * np.tan(np.linspace(-1.55, 1.55, samples)))
        x = np.concatenate(xs)
        return float(np.max(np.abs(eval_u0(self, x))))

    def to_dict(self) -> dict[str, Any]:
        return {
            "poles": [[p.real, p.imag] for p in self.poles],
            "residues": [[c.real, c.imag] for c in self.residues],
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "RationalInitialData":
        unknown = set(doc) - {"poles", "residues"}
        if unknown:
            raise ConfigError(f"unknown keys in initial data: {sorted(unknown)}")
        for key in ("poles", "residues"):
            if key not in doc:
                raise ConfigError(f"missing key '{key}'")
        poles = [_pair(v, "poles", i) for i, v in enumerate(doc["poles"])]
        residues = [_pair(v, "residues", i) for i, v in enumerate(doc["residues"])]
        return cls(tuple(poles), tuple(residues))

    @classmethod
    def load(cls, path: str | Path) -> "RationalInitialData":
        """Read ``poles``/``residues`` pair lists from a TOML or JSON file."""
        path = Path(path)
        text = path.read_text()
        if path.suffix.lower() == ".json":
            doc = json.loads(text)
        else:
            import tomli

            doc = tomli.loads(text)
        return cls.from_dict(doc)


def _pair(value: Any, key: str, index: int) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{key}[{index}] must be a [re, im] pair")
    try:
        return complex(float(value[0]), float(value[1]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}[{index}] is not numeric") from exc


@dataclass(frozen=True)
class LaxOleinikPoint:
    """A space-time point (t, x)."""

    t: float
    x: float

    def require_positive_time(self) -> None:
        if not self.t > 0.0:
            raise NonPositiveTime(f"t must be positive, got {self.t}")


def lorentzian() -> RationalInitialData:
    """u0(x) = 2/(1 + x^2): one pole at i with residue -i."""
    return RationalInitialData((1j,), (-1j,))


def two_pole_fixture() -> RationalInitialData:
    """The N = 2 data set with residues 1 - i, 1 + i/sqrt(2) at i and 16 + i."""
    return RationalInitialData((1j, 16 + 1j), (1 - 1j, 1 + 1j / math.sqrt(2.0)))


def _check_pole_distance(data: RationalInitialData, z: np.ndarray) -> None:
    d = np.min(np.abs(z[..., None] - data.all_poles), axis=-1)
    if np.any(d < 1e-13 * data.scale):
        raise PoleHit("evaluation point coincides with a pole")


def eval_u0(data: RationalInitialData, x):
    """u0 on the real line (scalar or array); the imaginary roundoff is dropped."""
    xa = np.asarray(x, dtype=float)
    d = xa[..., None] - data.p
    val = 2.0 * np.sum((data.c / d).real, axis=-1)
    return float(val) if np.ndim(x) == 0 else val


def eval_u0_complex(data: RationalInitialData, z):
    """u0 continued to complex z as the meromorphic sum over both pole sets."""
    za = np.asarray(z, dtype=complex)
    _check_pole_distance(data, za)
    val = np.sum(data.c / (za[..., None] - data.p) + data.c.conj() / (za[..., None] - data.p.conj()), axis=-1)
    return complex(val) if np.ndim(z) == 0 else val


def eval_u0_prime(data: RationalInitialData, z):
    """Exact derivative of u0 at complex z."""
    za = np.asarray(z, dtype=complex)
    _check_pole_distance(data, za)
    d1 = za[..., None] - data.p
    d2 = za[..., None] - data.p.conj()
    val = -np.sum(data.c / d1**2 + data.c.conj() / d2**2, axis=-1)
    return complex(val) if np.ndim(z) == 0 else val


def eval_u0_second(data: RationalInitialData, z):
    za = np.asarray(z, dtype=complex)
    d1 = za[..., None] - data.p
    d2 = za[..., None] - data.p.conj()
    val = 2.0 * np.sum(data.c / d1**3 + data.c.conj() / d2**3, axis=-1)
    return complex(val) if np.ndim(z) == 0 else val


def eval_h_real(data: RationalInitialData, pt: LaxOleinikPoint, y):
    """h(y) = (y-x)^2/(4t) + sum [c Log(y-p) + conj(c) Log(y-conj p)] for real y."""
    pt.require_positive_time()
    ya = np.asarray(y, dtype=float)
    logs = np.log(ya[..., None] - data.p + 0j)
    val = (ya - pt.x) ** 2 / (4.0 * pt.t) + 2.0 * np.sum((data.c * logs).real, axis=-1)
    return float(val) if np.ndim(y) == 0 else val


def eval_h_prime(data: RationalInitialData, pt: LaxOleinikPoint, z):
    """h'(z) = (z - x)/(2t) + u0(z), single valued on the plane minus the poles."""
    pt.require_positive_time()
    return (np.asarray(z, dtype=complex) - pt.x) / (2.0 * pt.t) + eval_u0_complex(data, z)


def eval_h_second(data: RationalInitialData, pt: LaxOleinikPoint, z):
    pt.require_positive_time()
    return 1.0 / (2.0 * pt.t) + eval_u0_prime(data, z)
