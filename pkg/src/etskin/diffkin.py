"""World-frame Jacobians and Hessians of an ETS.

Each quantity comes in three flavours that cross-validate each other:

* ``*_naive``  -- chain-rule products of elementary-transform derivatives,
* ``*_fast``   -- reduced per-axis closed forms built from link poses,
* ``*_fd``     -- central finite differences (the independent oracle).

Conventions: Jacobians are 6 x n with rows (v; w); the Hessian is a
6 x n x n tensor H[r, i, j] where i selects the slice and j the mode-3
fibre index, so ``H[:, i, j]`` is the derivative of Jacobian column i
with respect to joint j.  The translational block H[:3] is symmetric in
(i, j).

Joint ordering in the closed forms is chain order (sequence position
m_j), not joint-number order: H[3:, i, j] is nonzero only when joint j
precedes joint i along the sequence.
"""

import numpy as np

from .ets import Pose
from .liealg import generator, rho, tau, vex3

__all__ = [
    "partial_pose",
    "second_partial_pose",
    "jacobian_naive",
    "jacobian_fast",
    "jacobian_fd",
    "hessian_naive",
    "hessian_fast",
    "hessian_fd",
    "nmode3",
    "velocity_twist",
    "accel_twist",
]

# Central-difference step sizes: first and second derivatives.
FD_STEP_FIRST = 1e-6
FD_STEP_SECOND = 1e-5


def _matrices(ets, q):
    return [et.matrix(q) for et in ets]


def _prefixes(mats):
    """Cumulative left products: P[k] = E_0 ... E_{k-1}, P[0] = I."""
    P = [np.eye(4)]
    for E in mats:
        P.append(P[-1] @ E)
    return P


def _suffixes(mats):
    """Cumulative right products: S[k] = E_k ... E_{M-1}, S[M] = I."""
    M = len(mats)
    S = [np.eye(4)] * (M + 1)
    for k in range(M - 1, -1, -1):
        S[k] = mats[k] @ S[k + 1]
    return S


def _check_joint(ets, j):
    from .errors import RangeError

    if not isinstance(j, (int, np.integer)) or not (0 <= j < ets.n):
        raise RangeError(f"joint index {j} out of range for n={ets.n}")


def partial_pose(ets, q, j):
    """dT/dq_j as a 4x4 matrix (zero bottom row).

    The chain rule turns the product of transforms into
    prefix * generator * E_m * suffix, the generator being the
    derivative constant of the joint's elementary transform.
    """
    _check_joint(ets, j)
    q = ets.check_q(q)
    mats = _matrices(ets, q)
    m = ets.joint_position(j)
    et = ets[m]
    D = _prefixes(mats[:m])[-1] @ generator(et.axis, et.flipped) @ mats[m]
    for E in mats[m + 1 :]:
        D = D @ E
    return D


def second_partial_pose(ets, q, j, k):
    """d2T/dq_j dq_k as a 4x4 matrix.

    Three cases by sequence position: the earlier joint's generator is
    inserted first; equal positions (j == k) insert the squared
    generator, which is the zero matrix for a prismatic joint.
    """
    _check_joint(ets, j)
    _check_joint(ets, k)
    q = ets.check_q(q)
    mats = _matrices(ets, q)

    def gen(jj):
        et = ets[ets.joint_position(jj)]
        return generator(et.axis, et.flipped)

    mj, mk = ets.joint_position(j), ets.joint_position(k)
    if mj == mk:
        G2 = gen(j) @ gen(k)
        inserts = {mj: G2}
    else:
        inserts = {mj: gen(j), mk: gen(k)}

    T = np.eye(4)
    for pos, E in enumerate(mats):
        if pos in inserts:
            T = T @ inserts[pos]
        T = T @ E
    return T


def jacobian_naive(ets, q):
    """Jacobian assembled column by column from pose partial derivatives.

    Column j has linear part tau(dT/dq_j) and angular part
    vex3(rho(dT/dq_j) R^T).
    """
    q = ets.check_q(q)
    mats = _matrices(ets, q)
    P = _prefixes(mats)
    S = _suffixes(mats)
    R = rho(P[-1])
    J = np.zeros((6, ets.n))
    for j in range(ets.n):
        m = ets.joint_position(j)
        et = ets[m]
        D = P[m] @ generator(et.axis, et.flipped) @ mats[m] @ S[m + 1]
        J[:3, j] = tau(D)
        J[3:, j] = vex3(rho(D) @ R.T, tol=1e-6)
    return J


def jacobian_fast(ets, q):
    """Jacobian from the reduced per-axis case formulas.

    For joint j let (n, o, a) be the columns of the rotation up to the
    joint and (x_e, y_e, z_e) the translation of the remainder of the
    sequence expressed in the joint frame.  Revolute columns combine two
    of n/o/a with two of x_e/y_e/z_e; prismatic columns are the matching
    rotation column with zero angular part.  Flipped joints negate the
    column.
    """
    q = ets.check_q(q)
    mats = _matrices(ets, q)
    P = _prefixes(mats)
    T = P[-1]
    J = np.zeros((6, ets.n))
    for j in range(ets.n):
        m = ets.joint_position(j)
        et = ets[m]
        Rj = rho(P[m])
        nj, oj, aj = Rj[:, 0], Rj[:, 1], Rj[:, 2]
        if et.axis.is_rotation:
            # Translation of the joint-to-end subchain in the joint frame.
            xe, ye, ze = Rj.T @ (tau(T) - tau(P[m]))
            k = et.axis.index
            if k == 0:
                Jv = aj * ye - oj * ze
                Jw = nj
            elif k == 1:
                Jv = nj * ze - aj * xe
                Jw = oj
            else:
                Jv = oj * xe - nj * ye
                Jw = aj
        else:
            Jv = Rj[:, et.axis.index]
            Jw = np.zeros(3)
        if et.flipped:
            Jv, Jw = -Jv, -Jw
        J[:3, j] = Jv
        J[3:, j] = Jw
    return J


def jacobian_fd(ets, q, h=FD_STEP_FIRST):
    """Central-difference Jacobian (the independent oracle).

    Linear columns difference the translation; angular columns apply the
    skew-part vex of (dR/dq_j) R^T with R taken at the midpoint.
    """
    q = ets.check_q(q)
    R0 = ets.fkine(q).R
    J = np.zeros((6, ets.n))
    for j in range(ets.n):
        dq = np.zeros(ets.n)
        dq[j] = h
        Tp = ets.fkine(q + dq).A
        Tm = ets.fkine(q - dq).A
        D = (Tp - Tm) / (2.0 * h)
        J[:3, j] = tau(D)
        W = rho(D) @ R0.T
        J[3:, j] = vex3(0.5 * (W - W.T), tol=np.inf)
    return J


def hessian_naive(ets, q):
    """Hessian assembled from first and second pose partials.

    H[:3, i, j] = tau(d2T/dq_i dq_j); H[3:, i, j] applies the skew-part
    vex to rho(d2T) R^T + rho(dT/dq_i) rho(dT/dq_j)^T.
    """
    q = ets.check_q(q)
    n = ets.n
    mats = _matrices(ets, q)
    P = _prefixes(mats)
    S = _suffixes(mats)
    R = rho(P[-1])

    def gen(j):
        et = ets[ets.joint_position(j)]
        return generator(et.axis, et.flipped)

    dT = []
    for j in range(n):
        m = ets.joint_position(j)
        dT.append(P[m] @ gen(j) @ mats[m] @ S[m + 1])

    H = np.zeros((6, n, n))
    for i in range(n):
        mi = ets.joint_position(i)
        for j in range(i, n):
            mj = ets.joint_position(j)
            if mi == mj:
                X = P[mi] @ (gen(i) @ gen(j)) @ mats[mi] @ S[mi + 1]
            else:
                a, b = (i, j) if mi < mj else (j, i)
                ma, mb = ets.joint_position(a), ets.joint_position(b)
                X = P[ma] @ gen(a)
                for pos in range(ma, mb):
                    X = X @ mats[pos]
                X = X @ gen(b) @ mats[mb] @ S[mb + 1]
            Ht = tau(X)
            H[:3, i, j] = Ht
            H[:3, j, i] = Ht
            for (r, c) in ((i, j), (j, i)) if i != j else ((i, i),):
                W = rho(X) @ R.T + rho(dT[r]) @ rho(dT[c]).T
                H[3:, r, c] = vex3(0.5 * (W - W.T), tol=np.inf)
    return H


def hessian_fast(ets, q):
    """Hessian built solely from the fast Jacobian.

    With joints ordered by sequence position, the angular block is the
    cross product of the earlier joint's angular column with the later
    one's (zero when the fibre joint does not precede the slice joint),
    and the translational block is angular-of-earlier cross
    linear-of-later, which is symmetric by construction.
    """
    q = ets.check_q(q)
    n = ets.n
    J = jacobian_fast(ets, q)
    Jv, Jw = J[:3], J[3:]
    pos = [ets.joint_position(j) for j in range(n)]
    H = np.zeros((6, n, n))
    for i in range(n):
        for j in range(n):
            a, b = (i, j) if pos[i] <= pos[j] else (j, i)
            H[:3, i, j] = np.cross(Jw[:, a], Jv[:, b])
            if pos[j] < pos[i]:
                H[3:, i, j] = np.cross(Jw[:, j], Jw[:, i])
    return H


def hessian_fd(ets, q, h=FD_STEP_SECOND):
    """Central differences of the fast Jacobian: H[:, i, j] = dJ[:, i]/dq_j."""
    q = ets.check_q(q)
    n = ets.n
    H = np.zeros((6, n, n))
    for j in range(n):
        dq = np.zeros(n)
        dq[j] = h
        Jp = jacobian_fast(ets, q + dq)
        Jm = jacobian_fast(ets, q - dq)
        H[:, :, j] = (Jp - Jm) / (2.0 * h)
    return H


def nmode3(H, v):
    """Mode-3 product: contract the last tensor index with ``v``.

    Result (r, i) = sum_j H[r, i, j] v[j].
    """
    from .errors import DimensionMismatch

    H = np.asarray(H, dtype=float)
    v = np.asarray(v, dtype=float)
    if H.ndim != 3 or v.shape != (H.shape[2],):
        raise DimensionMismatch(
            f"cannot contract tensor {H.shape} with vector {v.shape}"
        )
    return H @ v


def velocity_twist(ets, q, qd):
    """End-effector twist (v; w) = J(q) qdot, using the fast Jacobian."""
    qd = ets.check_q(qd)
    return jacobian_fast(ets, q) @ qd


def accel_twist(ets, q, qd, qdd):
    """End-effector acceleration twist (a; alpha).

    (H x3 qdot) qdot + J qddot, using the fast Hessian and Jacobian.
    """
    qd = ets.check_q(qd)
    qdd = ets.check_q(qdd)
    H = hessian_fast(ets, q)
    J = jacobian_fast(ets, q)
    return nmode3(H, qd) @ qd + J @ qdd
