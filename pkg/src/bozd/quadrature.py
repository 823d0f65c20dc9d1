"""Globally adaptive Gauss-Kronrod 15/7 quadrature for vector-valued integrands."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import QuadratureFailure

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes ascending
KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[1:7:2] = _WG[:3]
GAUSS_W[7] = _WG[3]
GAUSS_W[13:7:-2] = _WG[:3]


def gk15_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float):
    """Kronrod estimate and |Kronrod - Gauss| on [a, b] for f returning (15, K) values."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = f(mid + half * NODES)
    kron = half * (KRONROD_W @ vals)
    gauss = half * (GAUSS_W @ vals)
    return kron, np.abs(kron - gauss)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints,
    rtol: float = 1e-10,
    atol: float | np.ndarray = 0.0,
    max_panels: int = 4000,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate a vector-valued f over consecutive breakpoints.

    ``f`` maps an array of abscissae (shape (m,)) to values of shape (m, K).
    All open panels are evaluated in one call per sweep.  A panel is accepted
    when its Kronrod-Gauss difference is below its share (by width) of
    max(rtol |I_k|, atol_k); the others are bisected.
    """
    pts = np.asarray(breakpoints, dtype=float)
    keep = pts[1:] > pts[:-1]
    lo = pts[:-1][keep]
    hi = pts[1:][keep]
    if len(lo) == 0:
        raise QuadratureFailure("empty integration range")
    length = float(hi.sum() - lo.sum())
    atol = np.asarray(atol, dtype=float)
    done_val = None
    done_err = None
    used = 0
    while True:
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = (mid[:, None] + half[:, None] * NODES[None, :]).ravel()
        vals = f(x)
        vals = vals.reshape(len(lo), 15, -1)
        kron = half[:, None] * np.einsum("j,pjk->pk", KRONROD_W, vals)
        gauss = half[:, None] * np.einsum("j,pjk->pk", GAUSS_W, vals)
        err = np.abs(kron - gauss)
        used += len(lo)
        total = kron.sum(axis=0) if done_val is None else done_val + kron.sum(axis=0)
        bound = np.maximum(rtol * np.abs(total), atol)
        share = (2.0 * half / length)[:, None] * bound[None, :]
        ok = np.all(err <= share, axis=1)
        acc_val = kron[ok].sum(axis=0)
        acc_err = err[ok].sum(axis=0)
        done_val = acc_val if done_val is None else done_val + acc_val
        done_err = acc_err if done_err is None else done_err + acc_err
        if ok.all():
            return done_val, done_err
        if used >= max_panels:
            raise QuadratureFailure(
                f"adaptive quadrature did not converge in {max_panels} panels "
                f"(error {float(np.max(err[~ok])):.3g})")
        lo_bad, hi_bad, mid_bad = lo[~ok], hi[~ok], mid[~ok]
        if np.any(mid_bad <= lo_bad) or np.any(mid_bad >= hi_bad):
            raise QuadratureFailure("panel width underflow in adaptive quadrature")
        lo = np.concatenate([lo_bad, mid_bad])
        hi = np.concatenate([mid_bad, hi_bad])
