import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flattwistor.errors import AmbientTooSmall, DegenerateQuadric, DimensionMismatch, HasRealPoints, RankDeficientBasis
from flattwistor.quadric import (Quadric, dual, evaluate, has_real_points, is_smooth, normal_form, polarize,
                                 random_real_point_free, random_real_point_free_with_phases, random_with_real_zero,
                                 restrict)


def test_evaluate_examples():
    assert abs(evaluate(Quadric(np.eye(3)), [1, 1j, 0])) < 1e-15
    assert evaluate(Quadric(np.eye(3)), [1.0, 2.0, 2.0]) == 9.0
    assert abs(evaluate(Quadric(np.diag([1, 1j])), [1, 1]) - (1 + 1j)) < 1e-15


def test_polarize(rng):
    q = Quadric(np.eye(3))
    assert polarize(q, [1, 0, 0], [0, 1, 0]) == 0
    assert polarize(q, [1, 0, 0], [1, 0, 0]) == 1
    q = random_real_point_free(2, 3)
    u, v = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
    assert abs(polarize(q, u, v) - polarize(q, v, u)) < 1e-12


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evaluate(Quadric(np.eye(3)), [1, 0])
    with pytest.raises(DimensionMismatch):
        Quadric.from_json({"n": 2, "matrix": Quadric(np.eye(3)).to_json()["matrix"]})


def test_smoothness(rng):
    assert is_smooth(Quadric(np.eye(4)))
    assert not is_smooth(Quadric(np.diag([1, 1, 1, 0])))
    g = rng.standard_normal((4, 4))
    assert is_smooth(Quadric(g.T @ g))


def test_has_real_points_examples():
    assert has_real_points(Quadric(np.eye(3))) is False
    assert has_real_points(Quadric(np.diag([1, -1, 1]))) is True
    assert has_real_points(Quadric(np.diag([1, np.exp(1j * np.pi / 3), 1j]))) is False


def test_has_real_points_errors():
    with pytest.raises(AmbientTooSmall):
        has_real_points(Quadric(np.eye(2)))
    with pytest.raises(DegenerateQuadric):
        has_real_points(Quadric(np.diag([1, 1, 0])))


def test_planted_zero_detected():
    for seed in range(10):
        q, x0 = random_with_real_zero(2, seed)
        assert abs(evaluate(q, x0)) < 1e-12 * q.norm()
        assert has_real_points(q)


def test_normal_form_identity_and_diagonal():
    nf = normal_form(Quadric(np.eye(4)))
    assert np.all(nf.phases == 0.0)
    p = np.array([0.0, 0.4, 1.1, 2.9])
    nf = normal_form(Quadric(np.diag(np.exp(1j * p))))
    assert np.max(np.abs(nf.phases - p)) < 1e-9


def test_normal_form_rejects_real_points():
    with pytest.raises(HasRealPoints):
        normal_form(Quadric(np.diag([1, -1, 1])))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_normal_form_recovers_planted_phases(n, seed):
    q, phases = random_real_point_free_with_phases(n, seed)
    nf = normal_form(q)
    assert nf.residual(q) < 1e-9
    assert np.max(np.abs(nf.phases - phases)) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 6.0))
def test_normal_form_scale_invariant(seed, angle):
    q = random_real_point_free(2, seed)
    a = normal_form(q).phases
    b = normal_form(q.scaled(2.5 * np.exp(1j * angle))).phases
    assert np.max(np.abs(a - b)) < 1e-9


def test_dual_examples():
    assert dual(Quadric(np.eye(3))) == Quadric(np.eye(3))
    p = np.array([0.0, 0.5, 2.0])
    assert dual(Quadric(np.diag(np.exp(1j * p)))) == Quadric(np.diag(np.exp(-1j * p)))


def test_restrict_examples():
    e = np.eye(3)
    assert restrict(Quadric(np.eye(3)), e[:, :2]) == Quadric(np.eye(2))
    d = Quadric(np.diag([1, np.exp(0.3j), np.exp(1.2j)]))
    assert restrict(d, e[:, [0, 2]]) == Quadric(np.diag([1, np.exp(1.2j)]))
    with pytest.raises(RankDeficientBasis):
        restrict(d, np.column_stack([e[:, 0], e[:, 0]]))
    with pytest.raises(RankDeficientBasis):
        restrict(d, e[:, :1])


def test_random_restriction_point_free(rng):
    q = random_real_point_free(3, 11)
    for _ in range(10):
        b, _ = np.linalg.qr(rng.standard_normal((5, 3)))
        assert has_real_points(restrict(q, b)) is False


def test_json_round_trip():
    q = random_real_point_free(2, 5)
    assert Quadric.from_json(q.to_json()) == q
    assert q.to_json()["n"] == 2


def test_dual_involution_and_point_free():
    for seed in range(20):
        q = random_real_point_free(1 + seed % 5, seed)
        d = dual(q)
        assert dual(d) == q
        assert is_smooth(d) and has_real_points(d) is False


def test_phase_invariance_under_congruence(rng):
    q = random_real_point_free(3, 8)
    g = rng.standard_normal((5, 5))
    a = normal_form(q).phases
    b = normal_form(Quadric(g.T @ q.matrix @ g)).phases
    assert np.max(np.abs(a - b)) < 1e-8
