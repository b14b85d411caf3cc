"""Shared helpers: randomized ETS models, DH tables and FD oracles."""

import numpy as np
import pytest

from etskin.ets import DhLink, DhTable, ETS, ElementaryTransform
from etskin.liealg import Axis

ALL_AXES = [Axis.TX, Axis.TY, Axis.TZ, Axis.RX, Axis.RY, Axis.RZ]


def random_ets(rng, max_joints=10, max_transforms=30, flip_prob=0.3):
    """A random mixed revolute/prismatic ETS.

    Joint indices are assigned to random sequence positions in random
    order, so joint-number order and chain order disagree on purpose.
    """
    n = int(rng.integers(1, max_joints + 1))
    M = int(rng.integers(n, max_transforms + 1))
    joint_at = dict(zip(rng.choice(M, size=n, replace=False), rng.permutation(n)))
    transforms = []
    for pos in range(M):
        axis = ALL_AXES[rng.integers(6)]
        if pos in joint_at:
            transforms.append(
                ElementaryTransform(
                    axis,
                    jindex=int(joint_at[pos]),
                    flipped=bool(rng.random() < flip_prob),
                )
            )
        else:
            lim = np.pi if axis.is_rotation else 1.0
            transforms.append(
                ElementaryTransform(axis, value=float(rng.uniform(-lim, lim)))
            )
    return ETS(transforms)


def random_dh_table(rng, max_links=7):
    links = []
    for _ in range(int(rng.integers(1, max_links + 1))):
        links.append(
            DhLink(
                joint_kind="revolute" if rng.random() < 0.5 else "prismatic",
                theta=float(rng.uniform(-np.pi, np.pi)),
                d=float(rng.uniform(-1, 1)),
                a=float(rng.uniform(-1, 1)),
                alpha=float(rng.uniform(-np.pi, np.pi)),
                offset=float(rng.uniform(-0.5, 0.5)),
            )
        )
    convention = "standard" if rng.random() < 0.5 else "modified"
    return DhTable(convention=convention, links=links)


def dh_direct_product(dh, q):
    """Independent oracle: classical closed-form DH link matrices."""
    T = np.eye(4)
    for j, link in enumerate(dh.links):
        if link.joint_kind == "revolute":
            theta, d = q[j] + link.offset, link.d
        else:
            theta, d = link.theta, q[j] + link.offset
        a, alpha = link.a, link.alpha
        ct, st = np.cos(theta), np.sin(theta)
        ca, sa = np.cos(alpha), np.sin(alpha)
        if dh.convention == "standard":
            L = np.array(
                [
                    [ct, -st * ca, st * sa, a * ct],
                    [st, ct * ca, -ct * sa, a * st],
                    [0.0, sa, ca, d],
                    [0.0, 0.0, 0.0, 1.0],
                ]
            )
        else:
            L = np.array(
                [
                    [ct, -st, 0.0, a],
                    [st * ca, ct * ca, -sa, -sa * d],
                    [st * sa, ct * sa, ca, ca * d],
                    [0.0, 0.0, 0.0, 1.0],
                ]
            )
        T = T @ L
    return T


def trajectory_fd_twists(ets, q, qd, qdd=None, h=1e-6):
    """FD oracle for the end-effector velocity/acceleration twist.

    Walks the trajectory q(t) = q + t qd + t^2/2 qdd and differences the
    pose.  Returns (v; w) and, when qdd is given, also (a; alpha) from
    second differences via skew(alpha) = Rdd R^T + Rd Rd^T.
    """
    qdd = np.zeros_like(q) if qdd is None else qdd

    def pose(t):
        return ets.fkine(q + t * qd + 0.5 * t * t * qdd).A

    Tp, T0, Tm = pose(h), pose(0.0), pose(-h)
    Td = (Tp - Tm) / (2.0 * h)
    R = T0[:3, :3]
    Rd = Td[:3, :3]
    W = Rd @ R.T

    def vex_skewpart(S):
        S = 0.5 * (S - S.T)
        return np.array([S[2, 1], S[0, 2], S[1, 0]])

    vel = np.concatenate([Td[:3, 3], vex_skewpart(W)])

    Tdd = (Tp - 2.0 * T0 + Tm) / (h * h)
    Rdd = Tdd[:3, :3]
    acc = np.concatenate([Tdd[:3, 3], vex_skewpart(Rdd @ R.T + Rd @ Rd.T)])
    return vel, acc


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
