"""Seeded oracle self-checks over a robot model.

Draws random joint configurations from a PCG64 generator (numpy's
``default_rng``) so reports are reproducible from a 64-bit seed, then
compares the fast, naive and finite-difference Jacobians and Hessians,
and verifies SE(3) structure and translational-Hessian symmetry.
"""

import numpy as np

from . import diffkin
from .ets import fkine

__all__ = ["TOLERANCES", "run_checks"]

TOLERANCES = {
    "jacobian_fast_vs_naive": 1e-10,
    "jacobian_fast_vs_fd": 1e-6,
    "hessian_fast_vs_naive": 1e-10,
    "hessian_fast_vs_fd": 1e-5,
    "orthonormality": 1e-10,
    "determinant": 1e-10,
    "hessian_translational_symmetry": 1e-10,
}


def _maxabs(x):
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def run_checks(model, trials=100, seed=42, corrupt=False):
    """Run the oracle comparisons on ``model`` over ``trials`` random q.

    Returns a report dict with per-check maximum residuals, tolerances
    and an overall ``passed`` flag.  ``corrupt`` perturbs the fast
    Jacobian before comparison; it exists as a negative-control fixture
    for the exit-code contract and must stay False in real use.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ets = model.ets
    rng = np.random.default_rng(seed)
    residuals = dict.fromkeys(TOLERANCES, 0.0)
    for _ in range(trials):
        q = rng.uniform(-np.pi, np.pi, ets.n)
        pose = fkine(ets, q)
        residuals["orthonormality"] = max(
            residuals["orthonormality"], _maxabs(pose.R.T @ pose.R - np.eye(3))
        )
        residuals["determinant"] = max(
            residuals["determinant"], abs(float(np.linalg.det(pose.R)) - 1.0)
        )

        J_fast = diffkin.jacobian_fast(ets, q)
        if corrupt and J_fast.size:
            J_fast = J_fast.copy()
            J_fast[0, 0] += 1e-3
        J_naive = diffkin.jacobian_naive(ets, q)
        J_fd = diffkin.jacobian_fd(ets, q)
        residuals["jacobian_fast_vs_naive"] = max(
            residuals["jacobian_fast_vs_naive"], _maxabs(J_fast - J_naive)
        )
        residuals["jacobian_fast_vs_fd"] = max(
            residuals["jacobian_fast_vs_fd"], _maxabs(J_fast - J_fd)
        )

        H_fast = diffkin.hessian_fast(ets, q)
        H_naive = diffkin.hessian_naive(ets, q)
        H_fd = diffkin.hessian_fd(ets, q)
        residuals["hessian_fast_vs_naive"] = max(
            residuals["hessian_fast_vs_naive"], _maxabs(H_fast - H_naive)
        )
        residuals["hessian_fast_vs_fd"] = max(
            residuals["hessian_fast_vs_fd"], _maxabs(H_fast - H_fd)
        )
        Ha = H_naive[:3]
        residuals["hessian_translational_symmetry"] = max(
            residuals["hessian_translational_symmetry"],
            _maxabs(Ha - Ha.transpose(0, 2, 1)),
        )

    failures = [name for name, r in residuals.items() if r > TOLERANCES[name]]
    return {
        "model": model.name,
        "trials": trials,
        "seed": seed,
        "residuals": residuals,
        "tolerances": dict(TOLERANCES),
        "failures": failures,
        "passed": not failures,
    }
