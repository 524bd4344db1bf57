"""Structure equations of the flat model on G2+(R^{n+2}) at the Lie-algebra level.

The Maurer-Cartan form of PL(n+2, R) splits into blocks ``alpha`` (2x2),
``beta`` (2xn), ``eta`` (nx2) and ``gamma`` (nxn).  From them::

    omega = alpha[1, 0]
    2 xi  = (alpha[0, 1] + alpha[1, 0]) + i (alpha[1, 1] - alpha[0, 0])
    phi   = gamma - alpha[1, 1] I
    zeta  = i (eta[:, 0] + i eta[:, 1])

All forms here are left-invariant, so a 1-form is a function of one Lie
algebra element and ``d mu (X, Y) = -mu([X, Y])``.  Wedge products use the
unnormalised shuffle convention ``(mu ^ nu)(X, Y) = mu(X) nu(Y) - mu(Y) nu(X)``.

The connection and curvature forms of the flat adapted connection agree with
the forms above on the lower block-triangular subalgebra (``beta = 0``); that
subgroup is a local section of PL(n+2) -> PL(n+2)/N.  The structure equation
and the Bianchi identity hold on the whole algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, IllConditionedExpansion
from .grassmannian import FD_STEP, chart_point, coordinate_charts, richardson_derivative
from .projective import OrientedPlane
from .quadric import Quadric
from .twistor import Section, quadric_section

EXPANSION_MAX_COND = 1e8


@dataclass(frozen=True)
class MCBlocks:
    alpha: np.ndarray
    beta: np.ndarray
    eta: np.ndarray
    gamma: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.block([[self.alpha, self.beta], [self.eta, self.gamma]])

    def trace(self) -> float:
        return float(np.trace(self.alpha) + np.trace(self.gamma))


@dataclass(frozen=True)
class AdaptedFormValues:
    omega: float
    xi: complex
    phi: np.ndarray
    zeta: np.ndarray


FormMap = Callable[[np.ndarray], AdaptedFormValues]


def traceless(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x - np.trace(x) / x.shape[0] * np.eye(x.shape[0])


def mc_blocks(x, n: int | None = None) -> MCBlocks:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 3:
        raise DimensionMismatch("expected a square matrix of size >= 3")
    if n is not None and x.shape[0] != n + 2:
        raise DimensionMismatch(f"expected size {n + 2}, got {x.shape[0]}")
    return MCBlocks(x[:2, :2], x[:2, 2:], x[2:, :2], x[2:, 2:])


def flat_forms(x) -> AdaptedFormValues:
    b = mc_blocks(x)
    a = b.alpha
    n = b.gamma.shape[0]
    return AdaptedFormValues(
        omega=float(a[1, 0]),
        xi=0.5 * complex(a[0, 1] + a[1, 0], a[1, 1] - a[0, 0]),
        phi=b.gamma - a[1, 1] * np.eye(n),
        zeta=1j * (b.eta[:, 0] + 1j * b.eta[:, 1]),
    )


def broken_flat_forms(x) -> AdaptedFormValues:
    """``flat_forms`` with the sign of Im(xi) flipped; used to check that the verifiers bite."""
    f = flat_forms(x)
    return AdaptedFormValues(f.omega, np.conj(f.xi), f.phi, f.zeta)


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def d_left_invariant(form: Callable, x, y):
    """Exterior derivative of a left-invariant 1-form on (X, Y)."""
    return -form(bracket(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def d2_left_invariant(form2: Callable, x, y, z):
    """Exterior derivative of a left-invariant 2-form on (X, Y, Z)."""
    return (-form2(bracket(x, y), z) + form2(bracket(x, z), y) - form2(bracket(y, z), x))


def wedge11(a_x, a_y, b_x, b_y):
    """(a ^ b)(X, Y) for 1-forms given by their values on X and Y."""
    return a_x * b_y - a_y * b_x


def random_algebra_element(n: int, rng: np.random.Generator, lower: bool = False) -> np.ndarray:
    """Random traceless (n+2)x(n+2) matrix; ``lower`` zeroes the beta block."""
    x = traceless(rng.standard_normal((n + 2, n + 2)))
    if lower:
        x[:2, 2:] = 0.0
        x = traceless(x)
    return x


def algebra_basis(n: int) -> list[np.ndarray]:
    """Basis of sl(n+2): off-diagonal units and E_kk - E_{k+1,k+1}."""
    size = n + 2
    out = []
    for i in range(size):
        for j in range(size):
            if i != j:
                e = np.zeros((size, size))
                e[i, j] = 1.0
                out.append(e)
    for k in range(size - 1):
        e = np.zeros((size, size))
        e[k, k], e[k + 1, k + 1] = 1.0, -1.0
        out.append(e)
    return out


# ---------------------------------------------------------------- torsion ---

def torsion(x, y, forms: FormMap = flat_forms) -> np.ndarray:
    """tau(X, Y) = d zeta + (i(omega - xi) I + phi) ^ zeta + i xi I ^ conj(zeta)."""
    fx, fy = forms(x), forms(y)
    dz = d_left_invariant(lambda w: forms(w).zeta, x, y)
    sx = 1j * (fx.omega - fx.xi)
    sy = 1j * (fy.omega - fy.xi)
    conn = wedge11(sx, sy, fx.zeta, fy.zeta) + (fx.phi @ fy.zeta - fy.phi @ fx.zeta)
    return dz + conn + wedge11(1j * fx.xi, 1j * fy.xi, np.conj(fx.zeta), np.conj(fy.zeta))


def verify_structure_equation(x, y, forms: FormMap = flat_forms) -> np.ndarray:
    return torsion(x, y, forms)


# -------------------------------------------------------------- curvature ---

def curvature(x, y, forms: FormMap = flat_forms) -> tuple[complex, complex, np.ndarray]:
    """(Omega, Xi, Phi) evaluated on (X, Y)."""
    fx, fy = forms(x), forms(y)
    d_omega = d_left_invariant(lambda w: forms(w).omega, x, y)
    d_xi = d_left_invariant(lambda w: forms(w).xi, x, y)
    d_phi = d_left_invariant(lambda w: forms(w).phi, x, y)
    im_x = 1j * (fx.xi - np.conj(fx.xi))
    im_y = 1j * (fy.xi - np.conj(fy.xi))
    omega = d_omega + wedge11(fx.omega, fy.omega, im_x, im_y)
    xi = d_xi + wedge11(fx.xi, fy.xi, 1j * (np.conj(fx.xi) - 2 * fx.omega), 1j * (np.conj(fy.xi) - 2 * fy.omega))
    re_x = fx.xi + np.conj(fx.xi)
    re_y = fy.xi + np.conj(fy.xi)
    phi = d_phi + (fx.phi @ fy.phi - fy.phi @ fx.phi) - wedge11(fx.omega, fy.omega, re_x, re_y) * np.eye(fx.phi.shape[0])
    return complex(omega), complex(xi), phi


def verify_curvature_zero(x, y, forms: FormMap = flat_forms) -> tuple[float, float, float]:
    om, xi, ph = curvature(x, y, forms)
    return abs(om), abs(xi), float(np.abs(ph).max())


# ---------------------------------------------------------------- Bianchi ---

def verify_bianchi(x, y, z, forms: FormMap = flat_forms) -> np.ndarray:
    """d tau - (i(Omega - Xi) I + Phi) ^ zeta - i Xi I ^ conj(zeta) on (X, Y, Z)."""
    x, y, z = (np.asarray(w, dtype=float) for w in (x, y, z))
    d_tau = d2_left_invariant(lambda a, b: torsion(a, b, forms), x, y, z)

    def wedge21(two: Callable, one: Callable) -> np.ndarray:
        return two(x, y) @ one(z) - two(x, z) @ one(y) + two(y, z) @ one(x)

    def big(a, b):
        om, xi, ph = curvature(a, b, forms)
        return 1j * (om - xi) * np.eye(ph.shape[0]) + ph

    def xi_i(a, b):
        om, xi, ph = curvature(a, b, forms)
        return 1j * xi * np.eye(ph.shape[0])

    zeta = lambda w: forms(w).zeta
    return d_tau - wedge21(big, zeta) - wedge21(xi_i, lambda w: np.conj(zeta(w)))


# ------------------------------------------------------------------ gauge ---

def gauge_parameters(b) -> np.ndarray:
    """Complex parameters a_k of the right translation by [b] acting on the flat forms.

    ``a_k = -i (b_1k - i b_2k)``; see the module notes on the sign of the
    second row.
    """
    b = np.asarray(b, dtype=float)
    return -1j * (b[0] - 1j * b[1])


def unipotent(b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    n = b.shape[1]
    h = np.eye(n + 2)
    h[:2, 2:] = b
    return h


def shifted_forms(f: AdaptedFormValues, a: np.ndarray) -> AdaptedFormValues:
    """Primed forms obtained from ``f`` with constant parameters ``a_k`` (same torsion)."""
    z = f.zeta
    d_omega = float(np.sum(a.real * z.imag))
    d_xi = complex(np.sum(np.conj(a) * z) / 2j)
    d_phi = np.real(np.outer(z, a)) + np.sum(a.real * z.real) * np.eye(z.size)
    return AdaptedFormValues(f.omega + d_omega, f.xi + d_xi, f.phi + d_phi, z)


def gauge_action_check(b, x, forms: FormMap = flat_forms) -> dict:
    """Residuals between the pulled-back forms R_[b]^* and the closed-form shifts."""
    x = np.asarray(x, dtype=float)
    h = unipotent(b)
    pulled = forms(np.linalg.solve(h, x @ h))
    expected = shifted_forms(forms(x), gauge_parameters(b))
    return {
        "omega": abs(pulled.omega - expected.omega),
        "xi": abs(pulled.xi - expected.xi),
        "phi": float(np.abs(pulled.phi - expected.phi).max()),
        "zeta": float(np.abs(pulled.zeta - expected.zeta).max()),
    }


def verify_adtors_same_torsion(a, x, y, forms: FormMap = flat_forms) -> np.ndarray:
    """Torsion of the primed connection built with constant a_k, on (X, Y)."""
    a = np.asarray(a, dtype=complex)
    primed = lambda w: shifted_forms(forms(w), a)
    fx, fy = primed(x), primed(y)
    # zeta is unchanged, so d zeta is the same left-invariant derivative.
    dz = d_left_invariant(lambda w: forms(w).zeta, x, y)
    sx = 1j * (fx.omega - fx.xi)
    sy = 1j * (fy.omega - fy.xi)
    conn = wedge11(sx, sy, fx.zeta, fy.zeta) + (fx.phi @ fy.zeta - fy.phi @ fx.zeta)
    return dz + conn + wedge11(1j * fx.xi, 1j * fy.xi, np.conj(fx.zeta), np.conj(fy.zeta))


# ------------------------------------------------- reduction torsion test ---

@dataclass(frozen=True)
class TorsionReport:
    plane: OrientedPlane
    y_abs: np.ndarray
    x: np.ndarray
    condition: float

    @property
    def max_y(self) -> float:
        return float(self.y_abs.max())


def adapted_lift(section: Section, base: OrientedPlane) -> Callable[[OrientedPlane], np.ndarray]:
    """Frames g(plane) with g_1 + i g_2 proportional to section(plane).

    The complex scale is fixed by the pivot coordinate of section(base); the
    remaining columns project the base complement onto the moving complement
    and orthonormalise it.
    """
    z0 = section(base).coords
    pivot = int(np.argmax(np.abs(z0)))
    comp0 = base.complement()

    def lift(plane: OrientedPlane) -> np.ndarray:
        z = section(plane).coords
        z = z / z[pivot]
        z = z * abs(z0[pivot]) / np.linalg.norm(z0)
        g12 = np.column_stack([z.real, z.imag])
        qm, _ = np.linalg.qr(g12)
        rest = comp0 - qm @ (qm.T @ comp0)
        qr, rr = np.linalg.qr(rest)
        qr = qr * np.sign(np.diag(rr))
        return np.column_stack([g12, qr])

    return lift


def reduction_torsion_test(q: Quadric | None, plane: OrientedPlane, step: float = FD_STEP,
                           section: Section | None = None, forms: FormMap = flat_forms) -> TorsionReport:
    """Coefficients of conj(zeta) in xi along an adapted lift of the section.

    Solves ``xi = x_k zeta^k + y_k conj(zeta^k)`` on the 2n chart velocities and
    returns ``|y_k|``; these vanish exactly when the reduction is torsion-free.
    """
    if section is None:
        section = quadric_section(q)
    lift = adapted_lift(section, plane)
    g0 = lift(plane)
    xis, zetas = [], []
    for chart in coordinate_charts(plane):
        dg = richardson_derivative(lambda t, c=chart: lift(chart_point(c, t)), step)
        f = forms(traceless(np.linalg.solve(g0, dg)))
        xis.append(f.xi)
        zetas.append(f.zeta)
    z = np.array(zetas)
    m = np.hstack([z, np.conj(z)])
    cond = float(np.linalg.cond(m))
    if not np.isfinite(cond) or cond > EXPANSION_MAX_COND:
        raise IllConditionedExpansion(f"zeta matrix condition number {cond:.3e}")
    sol, *_ = np.linalg.lstsq(m, np.array(xis), rcond=None)
    n = z.shape[1]
    return TorsionReport(plane, np.abs(sol[n:]), sol[:n], cond)
