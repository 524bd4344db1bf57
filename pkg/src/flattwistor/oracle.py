"""Brute-force real-point search, independent of the pencil criterion.

Scrambled Sobol points are pushed onto the unit sphere of R^{n+2}; the best
few values of |Q(x)| are then polished with a least-squares solve on the real
and imaginary parts of Q restricted to the sphere.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize, stats

from .quadric import Quadric

ORACLE_LOG2_SAMPLES = 17
ORACLE_POLISH = 8
ORACLE_TOL = 1e-6
ORACLE_MAX_NFEV = 30


@dataclass(frozen=True)
class OracleResult:
    min_value: float
    argmin: np.ndarray

    def has_real_points(self, tol: float = ORACLE_TOL) -> bool:
        return self.min_value < tol


def _sphere_values(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", x, a, x)


@lru_cache(maxsize=16)
def sphere_points(size: int, log2_samples: int, seed: int) -> np.ndarray:
    """2^log2_samples scrambled Sobol points mapped to the unit sphere in R^size."""
    u = stats.qmc.Sobol(size, scramble=True, seed=seed).random_base2(log2_samples)
    x = stats.norm.ppf(np.clip(u, 1e-12, 1.0 - 1e-12))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    x.setflags(write=False)
    return x


def brute_force_min(q: Quadric, seed: int = 0, log2_samples: int = ORACLE_LOG2_SAMPLES,
                    polish: int = ORACLE_POLISH) -> OracleResult:
    """Minimum of |Q(x)| / ||A|| over real unit vectors x."""
    a = q.matrix / q.norm()
    x = sphere_points(q.size, log2_samples, seed)
    vals = np.abs(_sphere_values(a, x))
    best = np.argpartition(vals, polish)[:polish]
    best = best[np.argsort(vals[best])]

    def resid(y):
        y = y / np.linalg.norm(y)
        z = y @ a @ y
        return [z.real, z.imag]

    def jac(y):
        r = np.linalg.norm(y)
        y = y / r
        g = 2.0 * (a @ y - (y @ a @ y) * y) / r
        return np.vstack([g.real, g.imag])

    top_val, top_x = float(vals[best[0]]), x[best[0]]
    for k in best:
        if top_val < 1e-3 * ORACLE_TOL:
            break
        sol = optimize.least_squares(resid, x[k], jac=jac, xtol=1e-14, ftol=1e-14, gtol=1e-14,
                                     max_nfev=ORACLE_MAX_NFEV)
        y = sol.x / np.linalg.norm(sol.x)
        v = float(abs(y @ a @ y))
        if v < top_val:
            top_val, top_x = v, y
    return OracleResult(top_val, top_x)


def brute_force_has_real_points(q: Quadric, seed: int = 0, tol: float = ORACLE_TOL) -> bool:
    return brute_force_min(q, seed).has_real_points(tol)
