"""Sampling, curves and tangent maps on the oriented Grassmannian G2+(R^{n+2}).

A tangent vector at a plane ``P`` is a linear map ``P -> P^perp``, stored as an
``n x 2`` matrix: column ``j`` holds the complement coordinates of the image of
the ``j``-th frame vector.  Tangent maps are read off from the derivative of
the orthogonal projector, so they do not depend on how a curve rotates its
frame inside the plane.

Beta-surfaces of the flat model are the families of planes through a fixed
line; alpha-surfaces are the planes inside a fixed 3-space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import StepTooLarge, VectorInPlane, ZeroCovector
from .projective import OrientedPlane, orthonormalize_pair

FD_STEP = 1e-5

Curve = Callable[[float], OrientedPlane]


def random_plane(n: int, seed) -> OrientedPlane:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        a, b = rng.standard_normal((2, n + 2))
        try:
            return OrientedPlane.from_vectors(a, b)
        except Exception:  # pragma: no cover - measure-zero redraw
            continue


def random_planes(n: int, count: int, seed) -> list[OrientedPlane]:
    rng = np.random.default_rng(seed)
    return [random_plane(n, rng) for _ in range(count)]


@dataclass(frozen=True)
class PlaneChart:
    """One-parameter chart ``t -> GS(u + t C w1, v + t C w2)`` around ``base``."""

    base: OrientedPlane
    directions: np.ndarray
    scale: float = 0.5
    complement: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        w = np.asarray(self.directions, dtype=float)
        n = self.base.ambient_n
        if w.shape != (n, 2):
            raise ValueError(f"directions must have shape ({n}, 2)")
        object.__setattr__(self, "directions", w)
        if self.complement is None:
            object.__setattr__(self, "complement", self.base.complement())


def chart_point(chart: PlaneChart, t: float) -> OrientedPlane:
    if abs(t) >= chart.scale:
        raise StepTooLarge(f"|t|={abs(t)} outside chart radius {chart.scale}")
    if t == 0.0:
        return chart.base
    disp = chart.complement @ chart.directions
    return OrientedPlane(*orthonormalize_pair(chart.base.u + t * disp[:, 0], chart.base.v + t * disp[:, 1]))


def coordinate_charts(base: OrientedPlane, scale: float = 0.5) -> list[PlaneChart]:
    """The 2n coordinate directions E_ij of Hom(P, P^perp) at ``base``."""
    n = base.ambient_n
    comp = base.complement()
    charts = []
    for j in range(2):
        for i in range(n):
            w = np.zeros((n, 2))
            w[i, j] = 1.0
            charts.append(PlaneChart(base, w, scale, comp))
    return charts


def richardson_derivative(f: Callable[[float], np.ndarray], h: float = FD_STEP) -> np.ndarray:
    """Central difference at 0 with one Richardson extrapolation."""
    d1 = (f(h) - f(-h)) / (2.0 * h)
    d2 = (f(0.5 * h) - f(-0.5 * h)) / h
    return (4.0 * d2 - d1) / 3.0


def tangent_map(curve: Curve, h: float = FD_STEP) -> np.ndarray:
    """Tangent map of ``curve`` at t=0 in the frame and complement basis of curve(0)."""
    base = curve(0.0)
    dproj = richardson_derivative(lambda t: curve(t).projector(), h)
    return base.complement().T @ dproj @ base.frame


def frame_field(base: OrientedPlane) -> Callable[[OrientedPlane], tuple[np.ndarray, np.ndarray]]:
    """Smooth orthonormal frame field near ``base``: project the base frame and orthonormalise."""
    u0, v0 = base.u, base.v

    def frame(plane: OrientedPlane) -> tuple[np.ndarray, np.ndarray]:
        p = plane.projector()
        return orthonormalize_pair(p @ u0, p @ v0)

    return frame


def coordinate_frame_field(base: OrientedPlane) -> Callable[[OrientedPlane], tuple[np.ndarray, np.ndarray]]:
    """Frame field from two fixed coordinate axes projected onto the moving plane.

    The axes (e_i, e_j) maximise u_i v_j - u_j v_i over the base frame, so the
    projected pair is positively oriented on a neighbourhood of ``base``.
    Unlike :func:`frame_field` it generally rotates to first order at ``base``.
    """
    m = np.outer(base.u, base.v)
    i, j = np.unravel_index(np.argmax(m - m.T), m.shape)
    a, b = np.eye(base.u.size)[[i, j]]

    def frame(plane: OrientedPlane) -> tuple[np.ndarray, np.ndarray]:
        p = plane.projector()
        return orthonormalize_pair(p @ a, p @ b)

    return frame


@dataclass(frozen=True, eq=False)
class BetaSurface:
    """Planes containing the line spanned by ``line`` (sign irrelevant)."""

    line: np.ndarray

    def __post_init__(self):
        l = np.asarray(self.line, dtype=float).reshape(-1)
        nl = np.linalg.norm(l)
        if nl == 0.0:
            raise ZeroCovector("line direction vanishes")
        object.__setattr__(self, "line", l / nl)

    def contains(self, plane: OrientedPlane, tol: float = 1e-12) -> bool:
        return containment_residual(self, plane) <= tol

    def same_as(self, other: "BetaSurface", tol: float = 1e-12) -> bool:
        return 1.0 - abs(float(self.line @ other.line)) <= tol

    def member_curves(self, plane: OrientedPlane) -> list[Curve]:
        """n curves through ``plane`` inside the surface, one per complement direction."""
        l = self.line
        # Rotating l by +90 degrees inside the plane gives a positively oriented (l, m).
        m = -(plane.v @ l) * plane.u + (plane.u @ l) * plane.v
        comp = plane.complement()
        curves = []
        for k in comp.T:
            curves.append(lambda t, k=k: OrientedPlane(l, (m + t * k) / np.linalg.norm(m + t * k)))
        return curves


def containment_residual(surface: BetaSurface, plane: OrientedPlane) -> float:
    l = surface.line
    return float(np.linalg.norm(l - plane.projector() @ l))


def beta_surface_through(plane: OrientedPlane, w) -> BetaSurface:
    """Beta-surface through ``plane`` whose line is the kernel of ``w`` on the plane.

    ``w`` gives the values of the covector on the frame vectors ``(u, v)``.
    """
    w1, w2 = np.asarray(w, dtype=float).reshape(2)
    if w1 == 0.0 and w2 == 0.0:
        raise ZeroCovector("covector must be nonzero")
    return BetaSurface(-w2 * plane.u + w1 * plane.v)


def beta_surface_sample(surface: BetaSurface, count: int, seed) -> list[OrientedPlane]:
    """Planes span(l, m) for random unit m perpendicular to l, alternating orientation."""
    rng = np.random.default_rng(seed)
    l = surface.line
    out = []
    for i in range(count):
        x = rng.standard_normal(l.size)
        m = x - (l @ x) * l
        m /= np.linalg.norm(m)
        out.append(OrientedPlane(l, m) if i % 2 == 0 else OrientedPlane(m, l))
    return out


@dataclass(frozen=True, eq=False)
class AlphaSurface:
    """Oriented planes inside a fixed 3-space (orthonormal columns of ``basis``)."""

    basis: np.ndarray

    def contains(self, plane: OrientedPlane, tol: float = 1e-12) -> bool:
        return self.residual(plane) <= tol

    def residual(self, plane: OrientedPlane) -> float:
        proj3 = self.basis @ self.basis.T
        return float(np.linalg.norm(plane.frame - proj3 @ plane.frame))

    def sample(self, count: int, seed) -> list[OrientedPlane]:
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(count):
            a, b = rng.standard_normal((2, 3))
            out.append(OrientedPlane.from_vectors(self.basis @ a, self.basis @ b))
        return out

    def normal_in_space(self, plane: OrientedPlane) -> np.ndarray:
        """Unit vector of the 3-space perpendicular to ``plane``."""
        w = self.basis @ np.cross(self.basis.T @ plane.u, self.basis.T @ plane.v)
        return w / np.linalg.norm(w)

    def member_curves(self, plane: OrientedPlane) -> list[Curve]:
        """Two curves through ``plane`` tilting u and v towards the in-space normal."""
        w = self.normal_in_space(plane)
        u, v = plane.u, plane.v
        return [
            lambda t: OrientedPlane.from_vectors(u + t * w, v),
            lambda t: OrientedPlane.from_vectors(u, v + t * w),
        ]


def alpha_surface_through(plane: OrientedPlane, w3, tol: float = 1e-10) -> AlphaSurface:
    w3 = np.asarray(w3, dtype=float).reshape(-1)
    rest = w3 - plane.projector() @ w3
    if np.linalg.norm(rest) <= tol * max(1.0, np.linalg.norm(w3)):
        raise VectorInPlane("third vector lies in the plane")
    return AlphaSurface(np.column_stack([plane.u, plane.v, rest / np.linalg.norm(rest)]))


def tangent_rank(maps: Sequence[np.ndarray], rel_tol: float = 1e-6) -> int:
    """Dimension of the span of a family of tangent maps."""
    m = np.array([t.ravel() for t in maps])
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0]))


def chart_tangent_maps(base: OrientedPlane, h: float = FD_STEP) -> list[np.ndarray]:
    return [tangent_map(lambda t, c=c: chart_point(c, t), h) for c in coordinate_charts(base)]


def apply_tangent(tmap: np.ndarray, base: OrientedPlane, x) -> np.ndarray:
    """Image in R^{n+2} of a vector ``x`` of the base plane under a tangent map."""
    return base.complement() @ tmap @ (base.frame.T @ np.asarray(x, dtype=float))


def beta_tangency_residual(surface: BetaSurface, member: OrientedPlane, h: float = FD_STEP) -> float:
    """Largest relative size of T(l) over the finite-difference tangent maps T at ``member``."""
    worst = 0.0
    for curve in surface.member_curves(member):
        base = curve(0.0)
        tmap = tangent_map(curve, h)
        worst = max(worst, float(np.linalg.norm(apply_tangent(tmap, base, surface.line)) / np.linalg.norm(tmap)))
    return worst


def alpha_image_residual(surface: AlphaSurface, member: OrientedPlane, h: float = FD_STEP) -> float:
    """How far the tangent images at ``member`` stray from the in-space normal line."""
    w = surface.normal_in_space(member)
    worst = 0.0
    for curve in surface.member_curves(member):
        base = curve(0.0)
        tmap = tangent_map(curve, h)
        img = base.complement() @ tmap
        off = img - np.outer(w, w @ img)
        worst = max(worst, float(np.linalg.norm(off) / np.linalg.norm(tmap)))
    return worst
