import numpy as np
import pytest

from conftest import random_ets, trajectory_fd_twists
from etskin.diffkin import (
    accel_twist,
    hessian_fast,
    hessian_fd,
    hessian_naive,
    jacobian_fast,
    jacobian_fd,
    jacobian_naive,
    nmode3,
    partial_pose,
    second_partial_pose,
    velocity_twist,
)
from etskin.errors import DimensionMismatch, RangeError
from etskin.ets import fkine, joint_pose, parse_ets
from etskin.liealg import Axis, generator

PLANAR2R = parse_ets("rz(q0) tx(1) rz(q1) tx(1)")
CRANK = parse_ets("rz(q0) tx(1)")


class TestPartialPose:
    def test_single_revolute_at_zero(self):
        D = partial_pose(parse_ets("rz(q0)"), [0.0], 0)
        assert np.array_equal(D, generator(Axis.RZ))

    def test_single_prismatic_constant_derivative(self):
        e = parse_ets("tz(q0)")
        for q in (0.0, 1.3, -2.0):
            assert np.array_equal(partial_pose(e, [q], 0), generator(Axis.TZ))

    def test_matches_fd_on_random_chain(self, rng):
        h = 1e-6
        for _ in range(5):
            e = random_ets(rng, max_joints=7)
            q = rng.uniform(-np.pi, np.pi, e.n)
            for j in range(e.n):
                dq = np.zeros(e.n)
                dq[j] = h
                fd = (fkine(e, q + dq).A - fkine(e, q - dq).A) / (2 * h)
                assert np.max(np.abs(fd - partial_pose(e, q, j))) <= 1e-8

    def test_bottom_row_zero(self, rng):
        e = random_ets(rng)
        q = rng.uniform(-1, 1, e.n)
        assert np.array_equal(partial_pose(e, q, 0)[3], [0, 0, 0, 0])

    def test_bad_joint(self):
        with pytest.raises(RangeError):
            partial_pose(PLANAR2R, [0, 0], 2)


class TestSecondPartialPose:
    def test_prismatic_diagonal_is_zero(self):
        Z = second_partial_pose(parse_ets("tz(q0)"), [0.4], 0, 0)
        assert np.array_equal(Z, np.zeros((4, 4)))

    def test_revolute_diagonal_squared_generator(self):
        D = second_partial_pose(parse_ets("rz(q0)"), [0.0], 0, 0)
        G = generator(Axis.RZ)
        assert np.array_equal(D, G @ G)
        assert np.array_equal(np.diag(D), [-1, -1, 0, 0])

    def test_flipped_diagonal_same_sign(self):
        # (-G)^2 = G^2: the flip cancels in the diagonal second derivative.
        a = second_partial_pose(parse_ets("rz(-q0)"), [0.2], 0, 0)
        b = second_partial_pose(parse_ets("rz(q0)"), [-0.2], 0, 0)
        assert np.allclose(a, b, atol=1e-15)

    def test_matches_fd_of_partial(self, rng):
        h = 1e-5
        for _ in range(3):
            e = random_ets(rng, max_joints=3, max_transforms=10)
            q = rng.uniform(-np.pi, np.pi, e.n)
            for j in range(e.n):
                for k in range(e.n):
                    dq = np.zeros(e.n)
                    dq[k] = h
                    fd = (
                        partial_pose(e, q + dq, j) - partial_pose(e, q - dq, j)
                    ) / (2 * h)
                    assert (
                        np.max(np.abs(fd - second_partial_pose(e, q, j, k))) <= 1e-6
                    )


class TestJacobian:
    def test_single_revolute_column(self):
        J = jacobian_naive(parse_ets("rz(q0)"), [0.0])
        assert np.array_equal(J[:, 0], [0, 0, 0, 0, 0, 1])

    def test_single_prismatic_column(self):
        J = jacobian_naive(parse_ets("tz(q0)"), [0.0])
        assert np.array_equal(J[:, 0], [0, 0, 1, 0, 0, 0])

    def test_planar_zero_config(self):
        expected = np.array(
            [[0, 0], [2, 1], [0, 0], [0, 0], [0, 0], [1, 1]], dtype=float
        )
        assert np.allclose(jacobian_naive(PLANAR2R, [0, 0]), expected, atol=1e-15)
        assert np.allclose(jacobian_fast(PLANAR2R, [0, 0]), expected, atol=1e-15)

    def test_fast_matches_naive_single(self):
        e = parse_ets("rz(q0)")
        diff = jacobian_fast(e, [0.7]) - jacobian_naive(e, [0.7])
        assert np.max(np.abs(diff)) <= 1e-12

    def test_oracle_triangle_random(self, rng):
        for _ in range(10):
            e = random_ets(rng, max_joints=7)
            for _ in range(10):
                q = rng.uniform(-np.pi, np.pi, e.n)
                Jf = jacobian_fast(e, q)
                assert np.max(np.abs(Jf - jacobian_naive(e, q))) <= 1e-10
                assert np.max(np.abs(Jf - jacobian_fd(e, q))) <= 1e-6

    def test_fd_planar(self):
        q = [0.3, -0.2]
        diff = jacobian_fd(PLANAR2R, q) - jacobian_fast(PLANAR2R, q)
        assert np.max(np.abs(diff)) <= 1e-7

    def test_no_joints(self):
        e = parse_ets("tx(1) rz(0.3)")
        assert jacobian_fd(e, []).shape == (6, 0)

    def test_prismatic_only_angular_rows_zero(self):
        e = parse_ets("tx(q0) ty(q1) tz(q2)")
        q = [0.1, 0.2, 0.3]
        assert np.array_equal(jacobian_fast(e, q)[3:], np.zeros((3, 3)))
        assert np.max(np.abs(jacobian_fd(e, q)[3:])) <= 1e-12

    def test_revolute_angular_column_is_axis_column(self, rng):
        for _ in range(10):
            e = random_ets(rng)
            q = rng.uniform(-np.pi, np.pi, e.n)
            J = jacobian_fast(e, q)
            for j in range(e.n):
                et = e[e.joint_position(j)]
                if not et.axis.is_rotation:
                    continue
                col = joint_pose(e, q, j).R[:, et.axis.index]
                if et.flipped:
                    col = -col
                assert np.max(np.abs(J[3:, j] - col)) <= 1e-12

    def test_flipped_column_negates(self, rng):
        flipped = parse_ets("tx(0.3) ry(-q0) rz(q1) tz(0.2)")
        plain = parse_ets("tx(0.3) ry(q0) rz(q1) tz(0.2)")
        for _ in range(10):
            q = rng.uniform(-np.pi, np.pi, 2)
            qneg = q * [-1, 1]
            Jf = jacobian_fast(flipped, q)
            Jp = jacobian_fast(plain, qneg)
            assert np.max(np.abs(Jf[:, 0] + Jp[:, 0])) <= 1e-12
            assert np.max(np.abs(Jf[:, 1] - Jp[:, 1])) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            jacobian_fast(PLANAR2R, [0.0])


class TestHessian:
    def test_crank_analytic(self):
        # End effector at (cos q, sin q): second derivative at q=0 is (-1, 0, 0).
        H = hessian_naive(CRANK, [0.0])
        assert np.allclose(H[:3, 0, 0], [-1, 0, 0], atol=1e-15)
        assert np.allclose(H[3:, 0, 0], [0, 0, 0], atol=1e-15)
        Hf = hessian_fast(CRANK, [0.0])
        assert np.allclose(Hf[:3, 0, 0], [-1, 0, 0], atol=1e-15)

    def test_one_joint_rotational_hessian_zero(self, rng):
        for _ in range(10):
            e = random_ets(rng, max_joints=1, max_transforms=8)
            q = rng.uniform(-np.pi, np.pi, 1)
            assert np.array_equal(hessian_fast(e, q)[3:], np.zeros((3, 1, 1)))
            assert np.max(np.abs(hessian_naive(e, q)[3:])) <= 1e-12

    def test_planar_parallel_axes_rotational_zero(self):
        H = hessian_fast(PLANAR2R, [0.4, -0.9])
        assert np.array_equal(H[3:], np.zeros((3, 2, 2)))

    def test_oracle_triangle_random(self, rng):
        for _ in range(10):
            e = random_ets(rng, max_joints=7)
            for _ in range(10):
                q = rng.uniform(-np.pi, np.pi, e.n)
                Hf = hessian_fast(e, q)
                assert np.max(np.abs(Hf - hessian_naive(e, q))) <= 1e-10
                assert np.max(np.abs(Hf - hessian_fd(e, q))) <= 1e-5

    def test_translational_symmetry(self, rng):
        for _ in range(10):
            e = random_ets(rng)
            q = rng.uniform(-np.pi, np.pi, e.n)
            Ha = hessian_fast(e, q)[:3]
            assert np.array_equal(Ha, Ha.transpose(0, 2, 1))
            Hn = hessian_naive(e, q)[:3]
            assert np.max(np.abs(Hn - Hn.transpose(0, 2, 1))) <= 1e-10

    def test_matches_fd_of_naive_jacobian(self, rng):
        e = random_ets(rng, max_joints=7)
        q = rng.uniform(-np.pi, np.pi, e.n)
        h = 1e-5
        H = hessian_naive(e, q)
        for j in range(e.n):
            dq = np.zeros(e.n)
            dq[j] = h
            fd = (jacobian_naive(e, q + dq) - jacobian_naive(e, q - dq)) / (2 * h)
            assert np.max(np.abs(H[:, :, j] - fd)) <= 1e-5


class TestNmode3:
    def test_basis_vector_selects_fibre(self, rng):
        H = rng.normal(size=(6, 3, 3))
        for k in range(3):
            v = np.zeros(3)
            v[k] = 1.0
            assert np.array_equal(nmode3(H, v), H[:, :, k])

    def test_linearity(self, rng):
        H = rng.normal(size=(6, 4, 4))
        a, b = rng.normal(size=4), rng.normal(size=4)
        lhs = nmode3(H, a + b)
        rhs = nmode3(H, a) + nmode3(H, b)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_explicit_sum(self):
        H = np.arange(1, 25, dtype=float).reshape(6, 2, 2)
        v = np.array([1.0, 2.0])
        expected = np.zeros((6, 2))
        for r in range(6):
            for i in range(2):
                for j in range(2):
                    expected[r, i] += H[r, i, j] * v[j]
        assert np.array_equal(nmode3(H, v), expected)

    def test_matches_triple_loop_random(self, rng):
        H = rng.normal(size=(6, 5, 5))
        v = rng.normal(size=5)
        expected = np.einsum("rij,j->ri", H, v)
        assert np.allclose(nmode3(H, v), expected, atol=0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            nmode3(np.zeros((6, 2, 2)), np.zeros(3))


class TestTwists:
    def test_zero_velocity(self):
        assert np.array_equal(velocity_twist(PLANAR2R, [0.3, 0.1], [0, 0]), np.zeros(6))

    def test_single_revolute(self):
        tw = velocity_twist(parse_ets("rz(q0)"), [0.5], [2.0])
        assert np.array_equal(tw, [0, 0, 0, 0, 0, 2])

    def test_velocity_matches_trajectory_fd(self, rng):
        for _ in range(5):
            e = random_ets(rng, max_joints=6)
            q = rng.uniform(-np.pi, np.pi, e.n)
            qd = rng.uniform(-1, 1, e.n)
            fd_vel, _ = trajectory_fd_twists(e, q, qd)
            assert np.max(np.abs(velocity_twist(e, q, qd) - fd_vel)) <= 1e-6

    def test_accel_reduces_to_jacobian_term(self, rng):
        e = random_ets(rng, max_joints=5)
        q = rng.uniform(-np.pi, np.pi, e.n)
        qdd = rng.uniform(-1, 1, e.n)
        tw = accel_twist(e, q, np.zeros(e.n), qdd)
        assert np.max(np.abs(tw - jacobian_fast(e, q) @ qdd)) <= 1e-15

    def test_centripetal_crank(self):
        tw = accel_twist(CRANK, [0.0], [1.0], [0.0])
        assert np.max(np.abs(tw - [-1, 0, 0, 0, 0, 0])) <= 1e-12

    def test_accel_matches_trajectory_fd(self, rng):
        for _ in range(5):
            e = random_ets(rng, max_joints=6)
            q = rng.uniform(-np.pi, np.pi, e.n)
            qd = rng.uniform(-1, 1, e.n)
            qdd = rng.uniform(-1, 1, e.n)
            _, fd_acc = trajectory_fd_twists(e, q, qd, qdd, h=1e-4)
            assert np.max(np.abs(accel_twist(e, q, qd, qdd) - fd_acc)) <= 1e-4
