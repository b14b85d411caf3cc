"""Command-line front end.

Every subcommand prints a single JSON document on stdout with all
numbers rendered at 17 significant digits (re-parsing reproduces the
doubles bit-for-bit); diagnostics go to stderr.

Exit codes: 0 success, 1 self-check failure, 2 usage/input error,
3 non-convergence, 4 singularity.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import diffkin
from .checks import run_checks
from .errors import KinematicsError
from .ets import fkine, format_ets, link_pose, parse_ets
from .robots import bundled_documents, bundled_models, load_model

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_SINGULAR = 4

SIGMA_MIN_TOL = 1e-8


def _format_json(obj):
    """Serialize with floats at 17 significant digits."""

    def render(x):
        if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
            return json.dumps(x)
        if isinstance(x, (float, np.floating)):
            return format(float(x), ".17g")
        if isinstance(x, np.ndarray):
            return render(x.tolist())
        if isinstance(x, (list, tuple)):
            return "[" + ", ".join(render(v) for v in x) + "]"
        if isinstance(x, dict):
            return "{" + ", ".join(f"{json.dumps(k)}: {render(v)}" for k, v in x.items()) + "}"
        raise TypeError(f"cannot serialize {type(x)}")

    return render(obj)


def _emit(obj):
    print(_format_json(obj))


def _csv_floats(text):
    text = text.strip()
    if not text:
        return np.zeros(0)
    return np.array([float(v) for v in text.split(",")])


def _resolve_model(args):
    if getattr(args, "ets", None) is not None:
        return load_model({"name": "inline", "ets": args.ets})
    if args.model is None:
        raise KinematicsError("one of --model or --ets is required")
    for model in bundled_models():
        if args.model == model.name:
            return model
    return load_model(Path(args.model))


def _parse_link_range(text, M):
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError as e:
        raise KinematicsError(f"bad --link range {text!r}, expected A:B") from e


def cmd_fkine(args):
    model = _resolve_model(args)
    q = _csv_floats(args.q)
    if args.link is not None:
        a, b = _parse_link_range(args.link, model.ets.M)
        pose = link_pose(model.ets, q, a, b)
    else:
        pose = fkine(model.ets, q)
    _emit({"T": pose.A.reshape(-1)})
    return EXIT_OK


def cmd_jacobian(args):
    model = _resolve_model(args)
    q = _csv_floats(args.q)
    if args.method == "fast":
        J = diffkin.jacobian_fast(model.ets, q)
    elif args.method == "naive":
        J = diffkin.jacobian_naive(model.ets, q)
    else:
        J = diffkin.jacobian_fd(model.ets, q, h=args.h)
    _emit({"J": J.reshape(-1)})
    return EXIT_OK


def cmd_hessian(args):
    model = _resolve_model(args)
    q = _csv_floats(args.q)
    if args.method == "fast":
        H = diffkin.hessian_fast(model.ets, q)
    elif args.method == "naive":
        H = diffkin.hessian_naive(model.ets, q)
    else:
        H = diffkin.hessian_fd(model.ets, q, h=args.h)
    _emit({"H": H.reshape(-1), "layout": "r,i,j"})
    return EXIT_OK


def cmd_twist(args):
    model = _resolve_model(args)
    q = _csv_floats(args.q)
    qd = _csv_floats(args.qd)
    if args.qdd is not None:
        tw = diffkin.accel_twist(model.ets, q, qd, _csv_floats(args.qdd))
        kind = "acceleration"
    else:
        tw = diffkin.velocity_twist(model.ets, q, qd)
        kind = "velocity"
    _emit({"twist": tw, "kind": kind})
    return EXIT_OK


def cmd_check(args):
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.model is None and args.ets is None:
        models = bundled_models()
    else:
        models = [_resolve_model(args)]
    reports = [
        run_checks(m, trials=args.trials, seed=args.seed, corrupt=args.corrupt)
        for m in models
    ]
    passed = all(r["passed"] for r in reports)
    _emit({"reports": reports, "passed": passed})
    if not passed:
        first = next(f for r in reports for f in r["failures"])
        print(f"check failed: {first} exceeded tolerance", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _rotation_error(R_target, R):
    W = R_target @ R.T
    S = 0.5 * (W - W.T)
    return np.array([S[2, 1], S[0, 2], S[1, 0]])


def cmd_ik(args):
    model = _resolve_model(args)
    target = _csv_floats(args.target)
    if target.shape != (16,):
        raise KinematicsError("--target must be 16 comma-separated numbers")
    T_target = target.reshape(4, 4)
    R_target, t_target = T_target[:3, :3], T_target[:3, 3]
    q = _csv_floats(args.q0)
    lam = args.damping

    def error(q):
        pose = fkine(model.ets, q)
        return np.concatenate([t_target - pose.t, _rotation_error(R_target, pose.R)])

    best = np.inf
    for iteration in range(args.max_iters + 1):
        e = error(q)
        resid = float(np.linalg.norm(e))
        best = min(best, resid)
        if resid <= args.tol:
            _emit({"q": q, "residual": resid, "iterations": iteration})
            return EXIT_OK
        if iteration == args.max_iters:
            break
        J = diffkin.jacobian_fast(model.ets, q)
        A = J.T @ J + lam * np.eye(model.n)
        q = q + np.linalg.solve(A, J.T @ e)
    _emit({"q": q, "residual": best, "converged": False})
    print(f"ik did not converge: best residual {best:.3e}", file=sys.stderr)
    return EXIT_NO_CONVERGENCE


def cmd_rrmc(args):
    model = _resolve_model(args)
    q = _csv_floats(args.q0)
    nu = _csv_floats(args.twist)
    if nu.shape != (6,):
        raise KinematicsError("--twist must be 6 comma-separated numbers")
    if args.dt <= 0 or args.steps < 1:
        raise KinematicsError("--dt must be > 0 and --steps >= 1")
    lam = args.damping
    task = np.flatnonzero(nu)
    steps = []
    for step in range(args.steps):
        J = diffkin.jacobian_fast(model.ets, q)
        # Singularity: the Jacobian restricted to the commanded task rows
        # loses rank, so the demanded twist is unreachable.
        if task.size:
            sigma = np.linalg.svd(J[task, :], compute_uv=False)
            if sigma.size == 0 or sigma[-1] < SIGMA_MIN_TOL:
                _emit({"steps": steps, "singular_at_step": step})
                print(f"singular Jacobian at step {step}", file=sys.stderr)
                return EXIT_SINGULAR
        A = J.T @ J + lam * np.eye(model.n)
        qd = np.linalg.solve(A, J.T @ nu)
        realized = J @ qd
        q = q + qd * args.dt
        steps.append({"q": q, "qd": qd, "realized_twist": realized})
    _emit({"steps": steps})
    return EXIT_OK


def cmd_dh2ets(args):
    if args.model is None:
        raise KinematicsError("--model is required")
    model = load_model(Path(args.model))
    _emit({"name": model.name, "ets": format_ets(model.ets)})
    return EXIT_OK


def cmd_models(args):
    if args.action != "export":
        raise KinematicsError(f"unknown models action {args.action!r}")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for doc in bundled_documents():
        path = outdir / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        written.append(str(path))
    _emit({"written": written})
    return EXIT_OK


def _add_model_args(p):
    p.add_argument("--model", help="model file path or bundled model name")
    p.add_argument("--ets", help="inline ETS text instead of a model file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="etskin", description="ETS kinematics toolbox"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fkine", help="forward kinematics")
    _add_model_args(p)
    p.add_argument("--q", required=True, help="joint coordinates, CSV radians")
    p.add_argument("--link", help="half-open position range A:B")
    p.set_defaults(func=cmd_fkine)

    p = sub.add_parser("jacobian", help="6xn manipulator Jacobian")
    _add_model_args(p)
    p.add_argument("--q", required=True)
    p.add_argument("--method", choices=["fast", "naive", "fd"], default="fast")
    p.add_argument("--h", type=float, default=diffkin.FD_STEP_FIRST)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("hessian", help="6xnxn manipulator Hessian")
    _add_model_args(p)
    p.add_argument("--q", required=True)
    p.add_argument("--method", choices=["fast", "naive", "fd"], default="fast")
    p.add_argument("--h", type=float, default=diffkin.FD_STEP_SECOND)
    p.set_defaults(func=cmd_hessian)

    p = sub.add_parser("twist", help="end-effector velocity/acceleration twist")
    _add_model_args(p)
    p.add_argument("--q", required=True)
    p.add_argument("--qd", required=True)
    p.add_argument("--qdd")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("check", help="seeded oracle self-checks")
    _add_model_args(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ik", help="damped least-squares inverse kinematics")
    _add_model_args(p)
    p.add_argument("--target", required=True, help="target pose, CSV16 row-major")
    p.add_argument("--q0", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--damping", type=float, default=1e-6)
    p.set_defaults(func=cmd_ik)

    p = sub.add_parser("rrmc", help="resolved-rate motion control stepping")
    _add_model_args(p)
    p.add_argument("--q0", required=True)
    p.add_argument("--twist", required=True, help="commanded twist, CSV6 (v; w)")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--damping", type=float, default=1e-6)
    p.set_defaults(func=cmd_rrmc)

    p = sub.add_parser("dh2ets", help="convert a DH model document to ETS text")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_dh2ets)

    p = sub.add_parser("models", help="bundled model utilities")
    p.add_argument("action", choices=["export"])
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_models)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (KinematicsError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
