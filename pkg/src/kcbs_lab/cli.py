"""Command-line front end: ``kcbs-lab {pentagram,context,sweep,simulate}``.

Exit codes: 0 success, 2 input or domain error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Callable

from . import __version__
from .errors import KCBSLabError
from .gauge import CanonicalContextParams, chi1_of, chi2_of, gauge_fix, validate_domain
from .hidden import (
    DEFAULT_CHUNKS,
    DEFAULT_PANELS,
    integrate_oracle,
    joint_analytic,
    simulate,
)
from .pentagram import (
    OUTCOME_KEYS,
    ZETA_PENT,
    build_pentagram,
    classical_min_sum,
    context_joint_qm,
    kcbs_quantum_sum,
    verify_pentagram,
)
from .qutrit import ORTHO_TOL, BinaryTest, Z_STATE

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3

SWEEP_HEADER = [
    "zeta", "theta",
    "qm_mm", "qm_mp", "qm_pm", "qm_pp",
    "hv_mm", "hv_mp", "hv_pm", "hv_pp",
    "max_abs_discrepancy",
]

# verification thresholds used for the exit code
QM_HV_TOL = 1e-10
ORACLE_TOL = 1e-7
SWEEP_TOL = 1e-12
Z_MAX = 4.0

_PENTAGRAM_CANON = gauge_fix(Z_STATE, *build_pentagram(ZETA_PENT).vectors[:2])


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    zeta_pent: float | None = None
    zeta_canon: float | None = None
    theta: float | None = None
    rho: float | None = None
    samples: int = 1_000_000
    seed: int = 0
    grid: int = 50
    format: str = "text"
    output_path: str | None = None

    def validate(self) -> None:
        for name in ("zeta_pent", "zeta_canon", "theta", "rho"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise InputError(f"--{name.replace('_', '-')} must be finite")
        if self.zeta_pent is not None and not math.cos(self.zeta_pent) > 0:
            raise InputError(f"--zeta-pent {self.zeta_pent:.7g}: need cos(zeta_pent) > 0")
        if self.command in ("context", "simulate"):
            z, t = self.canonical()
            if not validate_domain(z, t):
                if not 0 <= z <= math.pi / 2:
                    raise InputError(f"--zeta-canon {z:.7g} outside [0, pi/2]")
                raise InputError(
                    f"--theta {t:.7g} outside the context domain: need "
                    f"pi/2 <= theta <= pi/2 + zeta = {math.pi / 2 + z:.7g}"
                )
        if self.rho is not None and not 0 <= self.rho < 2 * math.pi:
            raise InputError(f"--rho {self.rho:.7g} outside [0, 2*pi)")
        if self.samples < 1:
            raise InputError("--samples must be at least 1")
        if self.command == "sweep" and self.grid < 2:
            raise InputError("--grid must be at least 2")

    def canonical(self) -> tuple[float, float]:
        z = _PENTAGRAM_CANON.zeta_canon if self.zeta_canon is None else self.zeta_canon
        t = _PENTAGRAM_CANON.theta if self.theta is None else self.theta
        return z, t


def g7(x: float) -> str:
    return f"{x:.7g}"


# --- commands -----------------------------------------------------------------
# Each returns (exit_code, inputs, results, text_lines).

def cmd_pentagram(cfg: RunConfig):
    zeta = ZETA_PENT if cfg.zeta_pent is None else cfg.zeta_pent
    p = build_pentagram(zeta)
    report = verify_pentagram(p, ORTHO_TOL)
    qsum = kcbs_quantum_sum(Z_STATE, p)
    bound = classical_min_sum()
    verdict = "VIOLATED" if qsum < bound else "SATISFIED"
    vectors = [[[c.real, c.imag] for c in v] for v in p.vectors]
    results = {
        "vectors": vectors,
        "adjacency_moduli": list(report.moduli),
        "orthogonality_tol": report.tol,
        "orthogonality_ok": report.passed,
        "quantum_sum": qsum,
        "classical_bound": bound,
        "verdict": verdict,
    }
    lines = [f"zeta_pent = {g7(zeta)}", "vectors:"]
    for i, v in enumerate(p.vectors, 1):
        lines.append(f"  chi_{i} = {v!r}")
    lines.append("adjacency |<chi_i|chi_i+1>|:")
    for i, m in enumerate(report.moduli, 1):
        flag = "" if m <= report.tol else "  FAIL"
        lines.append(f"  ({i},{i % 5 + 1}) {m:.3e}{flag}")
    lines.append(f"orthogonality: {'PASS' if report.passed else 'FAIL'} (tol {report.tol:g})")
    lines.append(f"quantum KCBS sum = {g7(qsum)}")
    lines.append(f"classical bound   = {bound}")
    lines.append(f"verdict: {verdict}")
    code = EXIT_OK if report.passed else EXIT_VERIFY
    return code, {"zeta_pent": zeta}, results, lines


def cmd_context(cfg: RunConfig):
    z, t = cfg.canonical()
    rho = cfg.rho or 0.0
    params = CanonicalContextParams(z, t, rho)
    a, b = chi1_of(z), chi2_of(z, t, rho)
    qm = context_joint_qm(Z_STATE, BinaryTest(a), BinaryTest(b))
    hv = joint_analytic(params)
    quad = integrate_oracle(params, DEFAULT_PANELS)
    d_qm_hv = qm.max_abs_diff(hv)
    d_hv_quad = hv.max_abs_diff(quad)
    ok = d_qm_hv <= QM_HV_TOL and d_hv_quad <= ORACLE_TOL
    results = {
        "qm": qm.as_dict(),
        "hv_closed_form": hv.as_dict(),
        "hv_quadrature": quad.as_dict(),
        "n_panels": DEFAULT_PANELS,
        "discrepancy": {
            key: {
                "qm_vs_hv": abs(x - y),
                "hv_vs_quadrature": abs(y - w),
            }
            for key, x, y, w in zip(OUTCOME_KEYS, qm.as_tuple(), hv.as_tuple(), quad.as_tuple())
        },
        "max_qm_vs_hv": d_qm_hv,
        "max_hv_vs_quadrature": d_hv_quad,
        "ok": ok,
    }
    lines = [f"zeta_canon = {g7(z)}  theta = {g7(t)}  rho = {g7(rho)}"]
    lines.append(f"{'outcome':>8} {'qm':>12} {'hv':>12} {'quadrature':>12} {'|qm-hv|':>10} {'|hv-quad|':>10}")
    for key, x, y, w in zip(OUTCOME_KEYS, qm.as_tuple(), hv.as_tuple(), quad.as_tuple()):
        lines.append(f"{key:>8} {g7(x):>12} {g7(y):>12} {g7(w):>12} {abs(x - y):10.2e} {abs(y - w):10.2e}")
    lines.append(f"agreement: {'PASS' if ok else 'FAIL'}")
    inputs = {"zeta_canon": z, "theta": t, "rho": rho}
    return (EXIT_OK if ok else EXIT_VERIFY), inputs, results, lines


def sweep_points(grid: int):
    """Half-step offset lattice: zeta over (0, pi/2), theta over (pi/2, pi/2 + zeta)."""
    for i in range(grid):
        z = (i + 0.5) * (math.pi / 2) / grid
        for j in range(grid):
            yield z, math.pi / 2 + (j + 0.5) * z / grid


def sweep_rows(grid: int) -> list[dict[str, float]]:
    rows = []
    for z, t in sweep_points(grid):
        qm = context_joint_qm(Z_STATE, BinaryTest(chi1_of(z)), BinaryTest(chi2_of(z, t)))
        hv = joint_analytic(CanonicalContextParams(z, t))
        row = {"zeta": z, "theta": t}
        row.update({f"qm_{k}": v for k, v in qm.as_dict().items()})
        row.update({f"hv_{k}": v for k, v in hv.as_dict().items()})
        row["max_abs_discrepancy"] = qm.max_abs_diff(hv)
        rows.append(row)
    return rows


def cmd_sweep(cfg: RunConfig):
    rows = sweep_rows(cfg.grid)
    gmax = max(r["max_abs_discrepancy"] for r in rows)
    ok = gmax < SWEEP_TOL
    results = {
        "rows": rows,
        "summary": {"n_rows": len(rows), "global_max_abs_discrepancy": gmax, "ok": ok},
    }
    lines = [
        f"grid {cfg.grid}x{cfg.grid}: {len(rows)} points",
        f"global max |qm - hv| = {gmax:.3e}",
        f"agreement: {'PASS' if ok else 'FAIL'} (tol {SWEEP_TOL:g})",
    ]
    return (EXIT_OK if ok else EXIT_VERIFY), {"grid": cfg.grid}, results, lines


def cmd_simulate(cfg: RunConfig):
    z, t = cfg.canonical()
    params = CanonicalContextParams(z, t)
    res = simulate(params, cfg.samples, cfg.seed, chunks=DEFAULT_CHUNKS)
    ref = joint_analytic(params)
    zs = res.z_scores(ref)
    ok = res.counts[0] == 0 and all(s is not None and abs(s) <= Z_MAX for s in zs)
    results = {
        "rng_algorithm": res.rng_algorithm,
        "chunks": res.chunks,
        "n_samples": res.n_samples,
        "counts": dict(zip(OUTCOME_KEYS, res.counts)),
        "estimate": res.estimate.as_dict(),
        "std_errors": dict(zip(OUTCOME_KEYS, res.std_errors)),
        "analytic": ref.as_dict(),
        "z_scores": dict(zip(OUTCOME_KEYS, zs)),
        "ok": ok,
    }
    lines = [
        f"zeta_canon = {g7(z)}  theta = {g7(t)}",
        f"samples = {res.n_samples}  seed = {res.seed}  chunks = {res.chunks}",
        f"rng = {res.rng_algorithm}",
        f"{'outcome':>8} {'count':>10} {'estimate':>12} {'std_err':>12} {'analytic':>12} {'z':>8}",
    ]
    for i, key in enumerate(OUTCOME_KEYS):
        zt = "n/a" if zs[i] is None else f"{zs[i]:.3f}"
        lines.append(
            f"{key:>8} {res.counts[i]:>10} {g7(res.estimate.as_tuple()[i]):>12} "
            f"{g7(res.std_errors[i]):>12} {g7(ref.as_tuple()[i]):>12} {zt:>8}"
        )
    lines.append(f"consistency: {'PASS' if ok else 'FAIL'} (|z| <= {Z_MAX:g}, mm count = 0)")
    inputs = {"zeta_canon": z, "theta": t, "samples": cfg.samples, "seed": cfg.seed}
    return (EXIT_OK if ok else EXIT_VERIFY), inputs, results, lines


COMMANDS: dict[str, Callable[[RunConfig], Any]] = {
    "pentagram": cmd_pentagram,
    "context": cmd_context,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}

# --- rendering ----------------------------------------------------------------


def render(cfg: RunConfig, inputs: dict, results: dict, lines: list[str]) -> str:
    if cfg.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": cfg.command,
            "inputs": inputs,
            "results": results,
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    if cfg.format == "csv":
        return _render_csv(cfg.command, results)
    return "\n".join(lines) + "\n"


def _render_csv(command: str, results: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "sweep":
        w.writerow(SWEEP_HEADER)
        for row in results["rows"]:
            w.writerow([repr(row[k]) for k in SWEEP_HEADER])
        summary = ["summary"] + [""] * (len(SWEEP_HEADER) - 2)
        w.writerow(summary + [repr(results["summary"]["global_max_abs_discrepancy"])])
        return buf.getvalue()
    # other commands: flattened key,value pairs
    w.writerow(["key", "value"])
    for key, value in _flatten(results):
        w.writerow([key, value])
    return buf.getvalue()


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        key = prefix[:-1]
        if isinstance(obj, float):
            yield key, repr(obj)
        elif obj is None:
            yield key, ""
        else:
            yield key, str(obj)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zeta-pent", type=float, help="pentagram angle in radians (default pi/5)")
    common.add_argument("--zeta-canon", type=float, help="canonical first-test polar angle, radians")
    common.add_argument("--theta", type=float, help="canonical second-test polar angle, radians")
    common.add_argument("--rho", type=float, help="free phase of the second test, radians")
    common.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    common.add_argument("--grid", type=int, default=50, help="sweep lattice size per axis")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", dest="output_path", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="kcbs-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("pentagram", parents=[common], help="KCBS vectors, quantum sum and classical bound")
    sub.add_parser("context", parents=[common], help="QM vs model vs quadrature for one context")
    sub.add_parser("sweep", parents=[common], help="model/QM agreement over a parameter lattice")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo run of the hidden-variable model")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; keep 0 for --help/--version
        return int(exc.code or 0)
    cfg = RunConfig(**vars(ns))
    try:
        cfg.validate()
        code, inputs, results, lines = COMMANDS[cfg.command](cfg)
    except (InputError, KCBSLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(cfg, inputs, results, lines)
    if cfg.output_path:
        try:
            with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
