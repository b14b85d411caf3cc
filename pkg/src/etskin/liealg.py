"""SO(3)/SE(3) primitives.

Skew/vex operators in both the 3-vector and twist (6-vector) flavours,
the six elementary rotation/translation matrices, and the matching six
generators used to differentiate them.  Twists are ordered (v; w).

All functions are pure and operate on plain numpy arrays: 3-vectors,
3x3, 4x4 and 6-vectors.  Nothing here mutates its arguments.
"""

from enum import Enum

import numpy as np

from .errors import NotAugmentedSkew, NotSkewSymmetric

# Tolerance for the skew-symmetry preconditions of vex3/vex6.
TOL_SKEW = 1e-9


class Axis(Enum):
    """One of the six elementary transform axes."""

    TX = "tx"
    TY = "ty"
    TZ = "tz"
    RX = "rx"
    RY = "ry"
    RZ = "rz"

    @property
    def is_rotation(self):
        return self in (Axis.RX, Axis.RY, Axis.RZ)

    @property
    def index(self):
        """Coordinate index 0/1/2 for x/y/z."""
        return "xyz".index(self.value[1])


def skew3(w):
    """Map a 3-vector to its skew-symmetric 3x3 matrix."""
    w = np.asarray(w, dtype=float)
    return np.array(
        [
            [0.0, -w[2], w[1]],
            [w[2], 0.0, -w[0]],
            [-w[1], w[0], 0.0],
        ]
    )


def vex3(S, tol=TOL_SKEW):
    """Inverse of skew3.  Reads the canonical entries (S32, S13, S21).

    Raises NotSkewSymmetric if ``S + S.T`` exceeds ``tol`` elementwise.
    """
    S = np.asarray(S, dtype=float)
    if np.max(np.abs(S + S.T)) > tol:
        raise NotSkewSymmetric("matrix is not skew-symmetric")
    return np.array([S[2, 1], S[0, 2], S[1, 0]])


def skew6(s):
    """Map a twist (v; w) to its augmented skew 4x4 matrix."""
    s = np.asarray(s, dtype=float)
    M = np.zeros((4, 4))
    M[:3, :3] = skew3(s[3:])
    M[:3, 3] = s[:3]
    return M


def vex6(M, tol=TOL_SKEW):
    """Inverse of skew6.

    Raises NotAugmentedSkew unless the rotational block is skew-symmetric
    and the bottom row is zero, both within ``tol``.
    """
    M = np.asarray(M, dtype=float)
    R = M[:3, :3]
    if np.max(np.abs(R + R.T)) > tol or np.max(np.abs(M[3])) > tol:
        raise NotAugmentedSkew("matrix is not an augmented skew matrix")
    return np.array([M[0, 3], M[1, 3], M[2, 3], R[2, 1], R[0, 2], R[1, 0]])


def rho(T):
    """Rotation block: the top-left 3x3 of a 4x4 matrix."""
    return np.asarray(T, dtype=float)[:3, :3]


def tau(T):
    """Translation part: the first three entries of column 4."""
    return np.asarray(T, dtype=float)[:3, 3]


def elem_matrix(axis, eta):
    """The elementary transform matrix for ``axis`` with parameter ``eta``.

    Radians for rotation axes, metres for translation axes.  The result is
    always a member of SE(3) with an exact (0, 0, 0, 1) bottom row.
    """
    T = np.eye(4)
    k = axis.index
    if axis.is_rotation:
        c, s = np.cos(eta), np.sin(eta)
        i, j = [(1, 2), (2, 0), (0, 1)][k]
        T[i, i] = c
        T[j, j] = c
        T[j, i] = s
        T[i, j] = -s
    else:
        T[k, 3] = eta
    return T


def generator(axis, flipped=False):
    """The se(3) generator that differentiates ``elem_matrix(axis, .)``.

    For rotations d/dtheta E = generator @ E; for translations the
    derivative is the (constant) generator itself.  ``flipped`` negates
    the result, matching a joint variable that enters with a minus sign.
    """
    G = np.zeros((4, 4))
    k = axis.index
    if axis.is_rotation:
        i, j = [(1, 2), (2, 0), (0, 1)][k]
        G[i, j] = -1.0
        G[j, i] = 1.0
    else:
        G[k, 3] = 1.0
    return -G if flipped else G
