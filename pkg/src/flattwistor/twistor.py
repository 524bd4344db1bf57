"""Sections of CP^{n+1} minus RP^{n+1} over G2+(R^{n+2}) induced by quadrics.

Over an oriented plane with frame ``(u, v)`` the quadric restricts to the
binary form ``c0 a^2 + 2 c1 a b + c2 b^2``.  For a smooth quadric without real
points exactly one root ``(a : b)`` has ``Im(conj(a) b) > 0``; the point
``[a u + b v]`` is the value of the section at the plane.

Holomorphy of a section image is measured in an affine chart of CP^{n+1}:
the real tangent space ``T`` of the image is complex iff
``(1 - P_T) J P_T`` vanishes.  :func:`wedge_residual` computes the same
number from the (n+1)-fold wedge of the chart coordinate differentials on
tangent vectors, which serves as an independent check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import FiberMultiplicityError, HasRealPoints, RankDeficientTangent
from .grassmannian import FD_STEP, chart_point, coordinate_charts, coordinate_frame_field, random_planes, richardson_derivative
from .projective import OrientedPlane, ProjectivePoint, fiber_coordinate
from .quadric import Quadric, evaluate, polarize

EPS_ROOT = 1e-9
RANK_TOL = 1e-6

Section = Callable[[OrientedPlane], ProjectivePoint]


@dataclass(frozen=True)
class SectionSample:
    plane: OrientedPlane
    point: ProjectivePoint
    tau: complex

    def to_json(self) -> dict:
        return {
            "plane": self.plane.to_json(),
            "point": self.point.to_json(),
            "tau": [self.tau.real, self.tau.imag],
        }


@dataclass(frozen=True)
class HolomorphyReport:
    plane: OrientedPlane
    residual: float
    step: float
    tangent_rank: int

    def to_json(self) -> dict:
        return {"plane": self.plane.to_json(), "residual": self.residual, "step": self.step,
                "tangent_rank": self.tangent_rank}


@dataclass(frozen=True)
class SweepSummary:
    max_residual: float
    mean_residual: float
    reports: list = field(default_factory=list)
    taus: list = field(default_factory=list)


def binary_roots(c0: complex, c1: complex, c2: complex) -> list[tuple[complex, complex]]:
    """Homogeneous roots (a : b) of c0 a^2 + 2 c1 a b + c2 b^2.

    Uses the sign-matched discriminant branch, so a root at infinity
    (c2 = 0) comes out as (0 : 1) without changing charts.
    """
    scale = max(abs(c0), abs(c1), abs(c2))
    if scale == 0.0:
        raise FiberMultiplicityError("binary form vanishes identically")
    c0, c1, c2 = c0 / scale, c1 / scale, c2 / scale
    sq = np.sqrt(complex(c1 * c1 - c0 * c2))
    if (np.conj(c1) * sq).real < 0.0:
        sq = -sq
    q = -(c1 + sq)
    if abs(q) < 1e-14:
        # c1 = 0 and c0 c2 = 0: a double root on a frame axis.
        root = (0.0j, 1.0 + 0j) if abs(c2) < abs(c0) else (1.0 + 0j, 0.0j)
        return [root, root]
    return [(complex(c2), complex(q)), (complex(q), complex(c0))]


def orientation_index(a: complex, b: complex) -> float:
    """Im(conj(a) b) / (|a|^2 + |b|^2): sign tells which half of the fiber (a : b) is in."""
    return float((np.conj(a) * b).imag / (abs(a) ** 2 + abs(b) ** 2))


def section_at(q: Quadric, plane: OrientedPlane) -> SectionSample:
    u, v = plane.u, plane.v
    roots = binary_roots(evaluate(q, u), polarize(q, u, v), evaluate(q, v))
    idx = [orientation_index(a, b) for a, b in roots]
    if min(abs(x) for x in idx) < EPS_ROOT:
        raise HasRealPoints("restricted binary form has a real root")
    upper = [r for r, x in zip(roots, idx) if x > 0.0]
    if len(upper) != 1:
        raise FiberMultiplicityError(f"{len(upper)} roots in the upper half of the fiber")
    a, b = upper[0]
    return SectionSample(plane, ProjectivePoint(a * u + b * v, plane.ambient_n), complex(b / a))


def quadric_section(q: Quadric) -> Section:
    return lambda plane: section_at(q, plane).point


def perturbed_section(q: Quadric, base: OrientedPlane, eps: float) -> Section:
    """``[u + (tau + eps conj(tau)) v]`` in a fixed coordinate frame field near ``base``.

    With ``eps = 0`` this is the quadric section itself.  A frame field that
    does not rotate at ``base`` would hide the perturbation whenever tau is
    stationary there (the identity quadric has tau = i in every frame).
    """
    if eps == 0.0:
        return quadric_section(q)
    frame = coordinate_frame_field(base)

    def sec(plane: OrientedPlane) -> ProjectivePoint:
        u, v = frame(plane)
        fp = OrientedPlane(u, v)
        tau = fiber_coordinate(fp, section_at(q, fp).point)
        return ProjectivePoint(u + (tau + eps * np.conj(tau)) * v, plane.ambient_n)

    return sec


def section_sample(q: Quadric, count: int, seed) -> list[SectionSample]:
    return [section_at(q, p) for p in random_planes(q.ambient_n, count, seed)]


def on_quadric_residual(q: Quadric, point: ProjectivePoint) -> float:
    z = point.coords
    return abs(evaluate(q, z)) / (q.norm() * float(np.vdot(z, z).real))


def image_tangent_vectors(section: Section, plane: OrientedPlane, step: float = FD_STEP) -> np.ndarray:
    """Complex (n+1) x 2n matrix of image velocities in the affine chart at section(plane)."""
    z0 = section(plane).coords
    pivot = int(np.argmax(np.abs(z0)))
    keep = [i for i in range(z0.size) if i != pivot]

    def affine(z: np.ndarray) -> np.ndarray:
        return z[keep] / z[pivot]

    cols = []
    for chart in coordinate_charts(plane):
        cols.append(richardson_derivative(lambda t, c=chart: affine(section(chart_point(c, t)).coords), step))
    return np.column_stack(cols)


def _realify(d: np.ndarray) -> np.ndarray:
    return np.vstack([d.real, d.imag])


def _tangent_basis(d: np.ndarray) -> tuple[np.ndarray, int]:
    r = _realify(d)
    uu, s, _ = np.linalg.svd(r, full_matrices=False)
    rank = int(np.sum(s > RANK_TOL * s[0]))
    return uu[:, :rank], rank


def holomorphy_residual(section: Section, plane: OrientedPlane, step: float = FD_STEP) -> HolomorphyReport:
    d = image_tangent_vectors(section, plane, step)
    n = plane.ambient_n
    basis, rank = _tangent_basis(d)
    if rank < 2 * n:
        raise RankDeficientTangent(f"image tangent rank {rank} < {2 * n}")
    m = d.shape[0]
    jmat = np.block([[np.zeros((m, m)), -np.eye(m)], [np.eye(m), np.zeros((m, m))]])
    jt = jmat @ basis
    resid = jt - basis @ (basis.T @ jt)
    return HolomorphyReport(plane, float(np.linalg.norm(resid, 2)), step, rank)


def wedge_residual(section: Section, plane: OrientedPlane, step: float = FD_STEP) -> float:
    """Holomorphy defect from the wedge of all chart (1,0)-forms on the image.

    With ``E`` a real-orthonormal basis of the image tangent space written as
    complex vectors, every (n+1)-subset of its columns gives the value of
    dw_1 ^ ... ^ dw_{n+1} on those vectors.  The returned quantity
    ``sqrt(2^(1-n) * sum |det|^2)`` coincides with the operator norm
    returned by :func:`holomorphy_residual`.
    """
    d = image_tangent_vectors(section, plane, step)
    n = plane.ambient_n
    basis, rank = _tangent_basis(d)
    if rank < 2 * n:
        raise RankDeficientTangent(f"image tangent rank {rank} < {2 * n}")
    m = d.shape[0]
    e = basis[:m] + 1j * basis[m:]
    total = 0.0
    for cols in itertools.combinations(range(e.shape[1]), m):
        total += abs(np.linalg.det(e[:, cols])) ** 2
    return float(np.sqrt(2.0 ** (1 - n) * total))


def holomorphy_sweep(q: Quadric, count: int, seed, step: float = FD_STEP, perturb: float = 0.0) -> SweepSummary:
    reports, taus = [], []
    for plane in random_planes(q.ambient_n, count, seed):
        sec = perturbed_section(q, plane, perturb)
        reports.append(holomorphy_residual(sec, plane, step))
        taus.append(section_at(q, plane).tau)
    res = np.array([r.residual for r in reports])
    return SweepSummary(float(res.max()), float(res.mean()), reports, taus)
