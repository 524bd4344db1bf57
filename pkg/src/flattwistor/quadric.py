"""Complex quadrics in CP^{n+1}: real points, phase normal form, duals and restrictions.

A quadric is stored as a complex symmetric matrix ``A = S + iT`` up to a
nonzero complex factor.  In ambient dimension at least three it has no real
points exactly when some member ``cos(t) S + sin(t) T`` of the real pencil is
positive definite.  That definite member drives both the decision procedure
and the simultaneous congruence that produces the phase normal form
``B^T A B = s diag(exp(i p_k))`` with ``0 = p_1 <= ... <= p_N < pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .errors import AmbientTooSmall, DegenerateQuadric, DimensionMismatch, HasRealPoints, RankDeficientBasis

EPS_DET = 1e-10
EPS_DEF = 1e-10
EPS_WRAP = 1e-10
GRID_POINTS = 720
PHASE_GAP = 0.2
# Keeps ensemble members and their duals well above EPS_DET up to size 7.
MAX_CONGRUENCE_COND = 10.0


def _as_symmetric(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("quadric matrix must be square")
    return 0.5 * (m + m.T)


@dataclass(frozen=True, eq=False)
class Quadric:
    matrix: np.ndarray

    def __post_init__(self):
        a = _as_symmetric(self.matrix)
        if a.shape[0] < 2:
            raise DimensionMismatch("quadric needs at least two homogeneous coordinates")
        if not np.all(np.isfinite(a)) or not np.any(a):
            raise ValueError("quadric matrix must be finite and nonzero")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def ambient_n(self) -> int:
        return self.matrix.shape[0] - 2

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def real_part(self) -> np.ndarray:
        return self.matrix.real

    @property
    def imag_part(self) -> np.ndarray:
        return self.matrix.imag

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def scaled(self, c: complex) -> "Quadric":
        return Quadric(c * self.matrix)

    def projective_distance(self, other: "Quadric") -> float:
        """Relative distance between the scale classes (0 iff proportional)."""
        a = self.matrix.ravel() / np.linalg.norm(self.matrix)
        b = other.matrix.ravel() / np.linalg.norm(other.matrix)
        # Norm of the component of a orthogonal to b; avoids sqrt(1 - c^2) cancellation.
        return float(np.linalg.norm(a - np.vdot(b, a) * b))

    def isclose(self, other: "Quadric", tol: float = 1e-9) -> bool:
        return self.size == other.size and self.projective_distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, Quadric):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "n": self.ambient_n,
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quadric":
        arr = np.asarray(data["matrix"], dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValueError("matrix entries must be [re, im] pairs")
        q = cls(arr[..., 0] + 1j * arr[..., 1])
        if "n" in data and int(data["n"]) != q.ambient_n:
            raise DimensionMismatch(f"n={data['n']} does not match a {q.size}x{q.size} matrix")
        return q


@dataclass(frozen=True)
class PencilNormalForm:
    basis: np.ndarray
    scale: complex
    phases: np.ndarray

    def diagonal(self) -> np.ndarray:
        return self.scale * np.diag(np.exp(1j * self.phases))

    def residual(self, q: Quadric) -> float:
        b = self.basis
        return float(np.linalg.norm(b.T @ q.matrix @ b - self.diagonal(), 2) / q.norm())

    def to_json(self, q: Quadric | None = None) -> dict:
        out = {
            "phases": [float(f"{p:.12g}") for p in self.phases],
            "scale": [float(self.scale.real), float(self.scale.imag)],
            "basis": self.basis.tolist(),
        }
        if q is not None:
            out["residual"] = self.residual(q)
        return out


def _check_vec(q: Quadric, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != q.size:
        raise DimensionMismatch(f"vector of length {z.size} for a {q.size}x{q.size} quadric")
    return z


def evaluate(q: Quadric, z) -> complex:
    z = _check_vec(q, z)
    return complex(z @ q.matrix @ z)


def polarize(q: Quadric, u, v) -> complex:
    u = _check_vec(q, u)
    v = _check_vec(q, v)
    return complex(u @ q.matrix @ v)


def relative_det(q: Quadric) -> float:
    s = np.linalg.svd(q.matrix, compute_uv=False)
    return float(np.prod(s / s[0]))


def is_smooth(q: Quadric, eps: float = EPS_DET) -> bool:
    return relative_det(q) > eps


def _require_smooth(q: Quadric) -> None:
    if not is_smooth(q):
        raise DegenerateQuadric(f"relative |det| {relative_det(q):.3e} below {EPS_DET}")


def pencil_min_eigenvalue(q: Quadric, t) -> np.ndarray:
    """Smallest eigenvalue of cos(t) S + sin(t) T, vectorised over t."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s, tt = q.real_part, q.imag_part
    members = np.cos(t)[:, None, None] * s + np.sin(t)[:, None, None] * tt
    return np.linalg.eigvalsh(members)[:, 0]


def definite_direction(q: Quadric) -> tuple[float, float]:
    """Angle maximising the smallest pencil eigenvalue, and that maximum.

    Grid search over [0, 2pi) followed by golden-section refinement on the
    bracket around the best grid node.
    """
    grid = np.linspace(0.0, 2.0 * np.pi, GRID_POINTS, endpoint=False)
    vals = pencil_min_eigenvalue(q, grid)
    k = int(np.argmax(vals))
    step = grid[1] - grid[0]
    lo, hi = grid[k] - step, grid[k] + step
    f = lambda x: float(pencil_min_eigenvalue(q, x)[0])
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(80):
        if hi - lo < 1e-13:
            break
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = f(d)
    t_best, v_best = (c, fc) if fc > fd else (d, fd)
    if vals[k] > v_best:
        t_best, v_best = float(grid[k]), float(vals[k])
    return float(np.mod(t_best, 2.0 * np.pi)), float(v_best)


def has_real_points(q: Quadric, eps: float = EPS_DEF) -> bool:
    if q.size < 3:
        raise AmbientTooSmall("pencil criterion needs at least three homogeneous coordinates")
    _require_smooth(q)
    _, best = definite_direction(q)
    return not best > eps * q.norm()


def _wrap_phases(theta: np.ndarray) -> np.ndarray:
    p = np.mod(theta, np.pi)
    p[np.abs(p - np.pi) < EPS_WRAP] = 0.0
    return p


def normal_form(q: Quadric) -> PencilNormalForm:
    if q.size < 3:
        raise AmbientTooSmall("normal form is computed through the pencil criterion")
    _require_smooth(q)
    t, best = definite_direction(q)
    if not best > EPS_DEF * q.norm():
        raise HasRealPoints("no positive definite member in the pencil")
    c, s = math.cos(t), math.sin(t)
    p = c * q.real_part + s * q.imag_part
    r = c * q.imag_part - s * q.real_part
    # exp(-it) A = P + iR with P > 0: reduce R to the P-inner product.
    low = np.linalg.cholesky(p)
    m = sla.solve_triangular(low, sla.solve_triangular(low, r, lower=True).T, lower=True)
    lam, vecs = np.linalg.eigh(0.5 * (m + m.T))
    basis = sla.solve_triangular(low.T, vecs, lower=False)
    basis = basis * (1.0 + lam * lam) ** -0.25
    theta = t + np.arctan(lam)
    # All theta lie in (t - pi/2, t + pi/2); rotate the smallest to zero.
    theta0 = float(theta.min())
    phases = _wrap_phases(theta - theta0)
    order = np.argsort(phases, kind="stable")
    return PencilNormalForm(
        basis=basis[:, order],
        scale=complex(np.exp(1j * theta0)),
        phases=phases[order],
    )


def dual(q: Quadric) -> Quadric:
    _require_smooth(q)
    return Quadric(np.linalg.inv(q.matrix))


def restrict(q: Quadric, basis) -> Quadric:
    b = np.asarray(basis, dtype=float)
    if b.ndim != 2 or b.shape[0] != q.size:
        raise DimensionMismatch(f"basis must have {q.size} rows")
    k = b.shape[1]
    if k < 2:
        raise RankDeficientBasis("restriction needs at least two basis vectors")
    s = np.linalg.svd(b, compute_uv=False)
    if s[-1] <= 1e-10 * s[0]:
        raise RankDeficientBasis("basis columns are linearly dependent")
    return Quadric(b.T @ q.matrix @ b)


def _well_conditioned_congruence(rng: np.random.Generator, size: int, max_cond: float = MAX_CONGRUENCE_COND) -> np.ndarray:
    while True:
        g = rng.standard_normal((size, size))
        if np.linalg.cond(g) < max_cond:
            return g


def random_phases(n: int, rng: np.random.Generator, gap: float = PHASE_GAP) -> np.ndarray:
    p = np.concatenate([[0.0], rng.uniform(0.0, np.pi - gap, n + 1)])
    return np.sort(p)


def random_real_point_free(n: int, seed: int, gap: float = PHASE_GAP) -> Quadric:
    q, _ = random_real_point_free_with_phases(n, seed, gap)
    return q


def random_real_point_free_with_phases(n: int, seed: int, gap: float = PHASE_GAP) -> tuple[Quadric, np.ndarray]:
    """Like :func:`random_real_point_free` but also returns the drawn phases."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    phases = random_phases(n, rng, gap)
    g = _well_conditioned_congruence(rng, n + 2)
    q = Quadric(g.T @ np.diag(np.exp(1j * phases)) @ g)
    return q, phases


def random_with_real_zero(n: int, seed: int) -> tuple[Quadric, np.ndarray]:
    """A smooth quadric through a planted real unit vector ``x0``."""
    rng = np.random.default_rng(seed)
    size = n + 2
    while True:
        m = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        a = 0.5 * (m + m.T)
        x0 = rng.standard_normal(size)
        x0 /= np.linalg.norm(x0)
        a = a - (x0 @ a @ x0) * np.outer(x0, x0)
        q = Quadric(a)
        if relative_det(q) > 1e-6:
            return q, x0
