import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flattwistor import connection as cl
from flattwistor.errors import DimensionMismatch
from flattwistor.grassmannian import random_plane
from flattwistor.quadric import Quadric, random_real_point_free
from flattwistor.twistor import perturbed_section


def unit(size, i, j):
    e = np.zeros((size, size))
    e[i, j] = 1.0
    return e


def test_mc_blocks():
    b = cl.mc_blocks(unit(4, 1, 0), 2)
    assert np.array_equal(b.alpha, [[0, 0], [1, 0]])
    assert not b.beta.any() and not b.eta.any() and not b.gamma.any()
    x = cl.random_algebra_element(3, np.random.default_rng(0))
    blocks = cl.mc_blocks(x)
    assert np.array_equal(blocks.assemble(), x)
    assert abs(blocks.trace()) < 1e-14
    with pytest.raises(DimensionMismatch):
        cl.mc_blocks(x, 2)


def test_flat_forms_examples():
    f = cl.flat_forms(unit(4, 1, 0))
    assert f.omega == 1.0 and f.xi == 0.5
    f = cl.flat_forms(unit(5, 3, 0))
    assert np.allclose(f.zeta, [0, 1j, 0])
    d = np.diag([0.0, 0.0, 1.0, -1.0])
    f = cl.flat_forms(d)
    assert f.xi == 0 and f.omega == 0


def test_d_left_invariant_properties(rng):
    m = rng.standard_normal((4, 4))
    form = lambda z: np.trace(m @ z)
    x = cl.random_algebra_element(2, rng)
    assert cl.d_left_invariant(form, x, 2 * x + 0) == 0.0
    y, z = (cl.random_algebra_element(2, rng) for _ in range(2))
    assert abs(cl.d_left_invariant(form, x, y) + cl.d_left_invariant(form, y, x)) < 1e-12
    # d(d mu) = 0: Jacobi identity
    dd = cl.d2_left_invariant(lambda a, b: cl.d_left_invariant(form, a, b), x, y, z)
    assert abs(dd) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_structure_equation_on_basis(n):
    basis = cl.algebra_basis(n)
    worst = max(np.abs(cl.verify_structure_equation(x, y)).max() for x in basis for y in basis)
    assert worst < 1e-14


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([1, 2, 3, 5]), st.integers(0, 2**31))
def test_exact_identities(n, seed):
    rng = np.random.default_rng(seed)
    x, y, z = (cl.random_algebra_element(n, rng) for _ in range(3))
    assert np.abs(cl.verify_structure_equation(x, y)).max() < 1e-12
    assert np.abs(cl.verify_structure_equation(x, x)).max() == 0.0
    assert np.abs(cl.verify_bianchi(x, y, z)).max() < 1e-12
    b = rng.standard_normal((2, n))
    assert max(cl.gauge_action_check(b, x).values()) < 1e-12
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert np.abs(cl.verify_adtors_same_torsion(a, x, y)).max() < 1e-12
    xl, yl = (cl.random_algebra_element(n, rng, lower=True) for _ in range(2))
    assert max(cl.verify_curvature_zero(xl, yl)) < 1e-12


def test_bianchi_antisymmetric(rng):
    x, y, z = (cl.random_algebra_element(2, rng) for _ in range(3))
    assert np.allclose(cl.verify_bianchi(x, y, z), -cl.verify_bianchi(y, x, z), atol=1e-14)
    assert np.abs(cl.verify_bianchi(x, x, z)).max() < 1e-13


def test_gauge_zero_and_zeta_invariance(rng):
    x = cl.random_algebra_element(3, rng)
    assert max(cl.gauge_action_check(np.zeros((2, 3)), x).values()) == 0.0
    assert cl.gauge_action_check(rng.standard_normal((2, 3)), x)["zeta"] < 1e-13


def test_adtors_zero_is_identity(rng):
    x, y = (cl.random_algebra_element(2, rng) for _ in range(2))
    assert np.array_equal(cl.verify_adtors_same_torsion(np.zeros(2), x, y), cl.verify_structure_equation(x, y))


def test_broken_xi_is_detected(rng):
    x, y = (cl.random_algebra_element(2, rng) for _ in range(2))
    assert np.abs(cl.verify_structure_equation(x, y, cl.broken_flat_forms)).max() > 1e-2


def test_torsion_identity_quadric():
    q = Quadric(np.eye(5))
    for seed in range(5):
        assert cl.reduction_torsion_test(q, random_plane(3, seed)).max_y < 1e-6


def test_torsion_detects_perturbation():
    q = random_real_point_free(2, 3)
    plane = random_plane(2, 7)
    rep = cl.reduction_torsion_test(q, plane, section=perturbed_section(q, plane, 1e-2))
    assert rep.max_y > 1e-4
    assert rep.condition < 1e8
