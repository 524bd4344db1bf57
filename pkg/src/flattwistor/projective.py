"""Homogeneous coordinates on CP^{n+1}, oriented 2-planes and the twistor projection.

The projection ``rho0`` sends a non-real point ``[z]`` to the plane spanned by
``Re z, Im z`` with that ordered pair declared positively oriented.  The map
``lambda_group`` goes the other way on the level of frames:
``g -> [g_1 + i g_2]``.  Each fiber of ``rho0`` is coordinatised by the upper
half-plane through ``[u + tau v]`` for the stored frame ``(u, v)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FiberMismatchError, RealPointError, SingularMatrixError

EPS_RANK = 1e-9
EPS_EQUAL = 1e-10
EPS_ORTHO = 1e-10


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    coords: np.ndarray
    ambient_n: int

    def __post_init__(self):
        z = np.asarray(self.coords, dtype=complex).reshape(-1)
        if z.size != self.ambient_n + 2:
            raise DimensionMismatch(f"expected {self.ambient_n + 2} coordinates, got {z.size}")
        if not np.any(z):
            raise ValueError("homogeneous coordinates must not all vanish")
        z.setflags(write=False)
        object.__setattr__(self, "coords", z)

    @classmethod
    def from_coords(cls, coords) -> "ProjectivePoint":
        z = np.asarray(coords, dtype=complex).reshape(-1)
        return cls(z, z.size - 2)

    def canonical(self) -> np.ndarray:
        """Representative whose largest-modulus entry equals 1 (lowest index on ties)."""
        z = self.coords
        k = int(np.argmax(np.abs(z)))
        return z / z[k]

    def distance(self, other: "ProjectivePoint") -> float:
        """Sine of the Fubini-Study angle; zero iff the points coincide."""
        a = self.coords / np.linalg.norm(self.coords)
        b = other.coords / np.linalg.norm(other.coords)
        return float(np.linalg.norm(a - np.vdot(b, a) * b))

    def isclose(self, other: "ProjectivePoint", tol: float = EPS_EQUAL) -> bool:
        if self.ambient_n != other.ambient_n:
            return False
        a, b = self.canonical(), other.canonical()
        if np.linalg.norm(a - b) <= tol * np.sqrt(a.size):
            return True
        # Near-tied pivots can pick different entries; fall back to the angle.
        return self.distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def to_json(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "ProjectivePoint":
        arr = np.asarray(data, dtype=float)
        return cls.from_coords(arr[:, 0] + 1j * arr[:, 1])


def orthonormalize_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Modified Gram-Schmidt on an ordered pair; keeps the orientation of (a, b)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = np.linalg.norm(a)
    if na == 0.0:
        raise RealPointError("first vector vanishes")
    u = a / na
    w = b - (u @ b) * u
    w = w - (u @ w) * u
    nw = np.linalg.norm(w)
    if nw <= EPS_RANK * max(np.linalg.norm(b), na):
        raise RealPointError("vectors are linearly dependent")
    return u, w / nw


@dataclass(frozen=True, eq=False)
class OrientedPlane:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).reshape(-1).copy()
        v = np.asarray(self.v, dtype=float).reshape(-1).copy()
        if u.shape != v.shape or u.size < 3:
            raise DimensionMismatch("frame vectors must share a length >= 3")
        gram = np.array([[u @ u, u @ v], [v @ u, v @ v]])
        if np.abs(gram - np.eye(2)).max() > EPS_ORTHO:
            raise ValueError("frame is not orthonormal")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_vectors(cls, a, b) -> "OrientedPlane":
        return cls(*orthonormalize_pair(a, b))

    @property
    def ambient_n(self) -> int:
        return self.u.size - 2

    @property
    def frame(self) -> np.ndarray:
        return np.column_stack([self.u, self.v])

    def projector(self) -> np.ndarray:
        return np.outer(self.u, self.u) + np.outer(self.v, self.v)

    def complement(self) -> np.ndarray:
        """Orthonormal basis (columns) of the orthogonal complement."""
        q, _ = np.linalg.qr(np.column_stack([self.u, self.v, np.eye(self.u.size)]))
        return q[:, 2:]

    def reversed(self) -> "OrientedPlane":
        return OrientedPlane(self.v, self.u)

    def orientation_sign(self, other: "OrientedPlane") -> float:
        return float(np.sign(np.linalg.det(self.frame.T @ other.frame)))

    def distance(self, other: "OrientedPlane") -> float:
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def isclose(self, other: "OrientedPlane", tol: float = EPS_EQUAL) -> bool:
        if self.u.size != other.u.size:
            return False
        return self.distance(other) <= tol and self.orientation_sign(other) > 0

    def __eq__(self, other):
        if not isinstance(other, OrientedPlane):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def to_json(self) -> list:
        return [self.u.tolist(), self.v.tolist()]

    @classmethod
    def from_json(cls, data) -> "OrientedPlane":
        return cls.from_vectors(data[0], data[1])


def is_real_point(p: ProjectivePoint, tol: float = EPS_RANK) -> bool:
    m = np.vstack([p.coords.real, p.coords.imag])
    s = np.linalg.svd(m, compute_uv=False)
    return bool(s[1] <= tol * s[0])


def rho0(p: ProjectivePoint) -> OrientedPlane:
    if is_real_point(p):
        raise RealPointError("rho0 is undefined on real points")
    return OrientedPlane.from_vectors(p.coords.real, p.coords.imag)


def lambda_group(g) -> ProjectivePoint:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 3:
        raise DimensionMismatch("expected a square matrix of size >= 3")
    if not np.all(np.isfinite(g)) or np.linalg.cond(g) > 1e12:
        raise SingularMatrixError("matrix is not invertible")
    return ProjectivePoint(g[:, 0] + 1j * g[:, 1], g.shape[0] - 2)


def point_in_fiber(plane: OrientedPlane, tau: complex) -> ProjectivePoint:
    return ProjectivePoint(plane.u + tau * plane.v, plane.ambient_n)


def fiber_coordinate(plane: OrientedPlane, p: ProjectivePoint, tol: float = 1e-9) -> complex:
    if p.ambient_n != plane.ambient_n:
        raise DimensionMismatch("point and plane live in different ambient spaces")
    z = p.coords / np.linalg.norm(p.coords)
    alpha = plane.u @ z
    beta = plane.v @ z
    if np.linalg.norm(z - alpha * plane.u - beta * plane.v) > tol:
        raise FiberMismatchError("point does not lie over the plane")
    if abs(alpha) <= tol:
        raise FiberMismatchError("point is a real point of the plane")
    tau = complex(beta / alpha)
    if tau.imag <= tol * (1.0 + abs(tau)):
        raise FiberMismatchError("point lies over the oppositely oriented plane")
    return tau
