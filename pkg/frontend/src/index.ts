// Typed wrapper around the etskin command line interface.
//
// Every call spawns the CLI, which prints one JSON document on stdout.
// Matrices cross the boundary as flat double arrays plus a known shape
// and are reassembled here; no numeric re-formatting happens host-side,
// so values are bitwise-identical to what the CLI printed.

import { spawnSync } from "node:child_process";

const PYTHON = process.env.ETSKIN_PYTHON ?? "python3";

export type Matrix = number[][];
export type Tensor3 = number[][][];
export type JacobianMethod = "fast" | "naive" | "fd";

/** Raised when the CLI exits nonzero; carries its stderr verbatim. */
export class CliError extends Error {
  constructor(
    message: string,
    public readonly exitCode: number,
  ) {
    super(message);
    this.name = "CliError";
  }
}

export interface ModelRef {
  /** Bundled model name or path to a model JSON file. */
  model?: string;
  /** Inline chain text, e.g. "rz(q0) tx(1)". */
  ets?: string;
}

export interface CheckReport {
  passed: boolean;
  [key: string]: unknown;
}

function csv(xs: number[]): string {
  return xs.length === 0 ? "" : xs.map((x) => x.toString()).join(",");
}

function modelArgs(ref: ModelRef): string[] {
  if (ref.ets !== undefined) return ["--ets", ref.ets];
  if (ref.model !== undefined) return ["--model", ref.model];
  throw new CliError("a model name/path or inline ets text is required", 2);
}

function invoke(args: string[]): Record<string, unknown> {
  const proc = spawnSync(PYTHON, ["-m", "etskin.cli", ...args], {
    encoding: "utf8",
  });
  if (proc.error) throw proc.error;
  if (proc.status !== 0) {
    throw new CliError(proc.stderr.trim(), proc.status ?? -1);
  }
  return JSON.parse(proc.stdout) as Record<string, unknown>;
}

function reshape2(flat: number[], rows: number, cols: number): Matrix {
  const out: Matrix = [];
  for (let r = 0; r < rows; r++) {
    out.push(flat.slice(r * cols, (r + 1) * cols));
  }
  return out;
}

/** Forward kinematics: 4x4 pose matrix. */
export function fkine(ref: ModelRef, q: number[]): Matrix {
  const doc = invoke(["fkine", ...modelArgs(ref), `--q=${csv(q)}`]);
  return reshape2(doc.T as number[], 4, 4);
}

/** Manipulator Jacobian, 6 x n. */
export function jacobian(
  ref: ModelRef,
  q: number[],
  method: JacobianMethod = "fast",
): Matrix {
  const doc = invoke([
    "jacobian", ...modelArgs(ref), `--q=${csv(q)}`, "--method", method,
  ]);
  const flat = doc.J as number[];
  return reshape2(flat, 6, flat.length / 6);
}

/** Manipulator Hessian, 6 x n x n (layout r,i,j). */
export function hessian(
  ref: ModelRef,
  q: number[],
  method: JacobianMethod = "fast",
): Tensor3 {
  const doc = invoke([
    "hessian", ...modelArgs(ref), `--q=${csv(q)}`, "--method", method,
  ]);
  const flat = doc.H as number[];
  const n = Math.round(Math.sqrt(flat.length / 6));
  const out: Tensor3 = [];
  for (let r = 0; r < 6; r++) {
    out.push(reshape2(flat.slice(r * n * n, (r + 1) * n * n), n, n));
  }
  return out;
}

/** End-effector velocity twist (v; w) for joint rates qd. */
export function velocityTwist(
  ref: ModelRef,
  q: number[],
  qd: number[],
): number[] {
  const doc = invoke([
    "twist", ...modelArgs(ref), `--q=${csv(q)}`, `--qd=${csv(qd)}`,
  ]);
  return doc.twist as number[];
}

/** End-effector acceleration twist for joint rates qd and accelerations qdd. */
export function accelTwist(
  ref: ModelRef,
  q: number[],
  qd: number[],
  qdd: number[],
): number[] {
  const doc = invoke([
    "twist", ...modelArgs(ref), `--q=${csv(q)}`, `--qd=${csv(qd)}`, `--qdd=${csv(qdd)}`,
  ]);
  return doc.twist as number[];
}

/** Randomized self-check (fast vs naive vs finite differences). */
export function check(
  ref: ModelRef,
  opts: { trials?: number; seed?: number } = {},
): CheckReport {
  const doc = invoke([
    "check",
    ...modelArgs(ref),
    "--trials", String(opts.trials ?? 100),
    "--seed", String(opts.seed ?? 42),
  ]);
  return doc as CheckReport;
}

/** Raw CLI access for callers needing the exact printed document. */
export function raw(args: string[]): { stdout: string; doc: Record<string, unknown> } {
  const proc = spawnSync(PYTHON, ["-m", "etskin.cli", ...args], {
    encoding: "utf8",
  });
  if (proc.error) throw proc.error;
  if (proc.status !== 0) {
    throw new CliError(proc.stderr.trim(), proc.status ?? -1);
  }
  return { stdout: proc.stdout, doc: JSON.parse(proc.stdout) };
}
