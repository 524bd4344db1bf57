"""Command-line front end.

    flattwistor quadric check FILE
    flattwistor quadric random --n 2 --seed 7
    flattwistor section sample FILE --trials 100 --format csv --svg
    flattwistor holomorphy FILE --trials 20 --perturb 1e-2
    flattwistor flat verify --n 1,2,3,5 --trials 1000

Exit codes: 0 success, 1 parse error, 2 degenerate input, 3 correspondence
violated, 4 identity failure.  Reports are deterministic for a fixed seed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import connection as cl
from .errors import AmbientTooSmall, DegenerateQuadric, FiberMultiplicityError, HasRealPoints, TwistorError
from .grassmannian import random_planes
from .quadric import (Quadric, has_real_points, is_smooth, normal_form, random_real_point_free_with_phases,
                      relative_det)
from .twistor import holomorphy_residual, on_quadric_residual, perturbed_section, section_at

SCHEMA_VERSION = 1
OUT_ENV = "FLATTWISTOR_OUT"

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_CORRESPONDENCE, EXIT_IDENTITY = 0, 1, 2, 3, 4

DEFAULT_TOLERANCES = {
    "identity": 1e-10,
    "holomorphy": 1e-5,
    "torsion": 1e-5,
    "on_quadric": 1e-10,
}


@dataclass
class RunConfig:
    seed: int = 0
    n: list = field(default_factory=lambda: [1, 2, 3, 5])
    trials: int = 100
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: Path | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(n < 1 for n in self.n):
            raise ValueError("n must be positive")
        if any(not v > 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")


class UsageError(Exception):
    pass


def _parse_tol(items) -> dict:
    tols = dict(DEFAULT_TOLERANCES)
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep or name not in tols:
            raise UsageError(f"bad tolerance {item!r}; known names: {', '.join(sorted(tols))}")
        tols[name] = float(val)
    return tols


def _config(args) -> RunConfig:
    try:
        ns = [int(x) for x in str(args.n).split(",") if x.strip()]
        out = args.out or os.environ.get(OUT_ENV)
        return RunConfig(seed=args.seed, n=ns, trials=args.trials, tolerances=_parse_tol(args.tol),
                         output_dir=Path(out) if out else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, name: str, text: str, stdout: bool = True) -> None:
    if stdout:
        sys.stdout.write(text)
    if cfg.output_dir is not None:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        (cfg.output_dir / name).write_text(text)


def load_quadric(path) -> Quadric:
    try:
        data = json.loads(Path(path).read_text())
        return Quadric.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read quadric from {path}: {exc}") from exc


def _header(command: str, cfg: RunConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "seed": cfg.seed}


# ----------------------------------------------------------------- quadric ---

def cmd_quadric_check(path, cfg: RunConfig) -> int:
    q = load_quadric(path)
    report = _header("quadric check", cfg)
    report.update({"n": q.ambient_n, "relative_det": relative_det(q), "smooth": is_smooth(q)})
    if not report["smooth"]:
        report["verdict"] = "degenerate"
        _emit(cfg, "quadric_check.json", _dump(report))
        return EXIT_DEGENERATE
    try:
        real = has_real_points(q)
    except AmbientTooSmall as exc:
        report["verdict"] = f"degenerate: {exc}"
        _emit(cfg, "quadric_check.json", _dump(report))
        return EXIT_DEGENERATE
    report["has_real_points"] = real
    if real:
        report["verdict"] = "has real points"
    else:
        nf = normal_form(q)
        report["normal_form"] = nf.to_json(q)
        allzero = bool(np.all(nf.phases == 0.0))
        report["verdict"] = "no real points; phases all 0" if allzero else "no real points"
    _emit(cfg, "quadric_check.json", _dump(report))
    return EXIT_OK


def cmd_quadric_random(cfg: RunConfig) -> int:
    q, phases = random_real_point_free_with_phases(cfg.n[0], cfg.seed)
    data = q.to_json()
    data["generation"] = {"seed": cfg.seed, "phases": phases.tolist()}
    _emit(cfg, "quadric.json", _dump(data))
    return EXIT_OK


# ----------------------------------------------------------------- section ---

def tau_scatter_svg(taus, width: int = 400, height: int = 220) -> str:
    """Scatter of fiber coordinates in the upper half-plane as a standalone SVG."""
    taus = np.asarray(taus, dtype=complex)
    r = 1.1 * float(np.max(np.abs(taus))) if taus.size else 1.0
    pad = 10.0
    sx = (width - 2 * pad) / (2 * r)
    sy = (height - 2 * pad) / r
    base_y = height - pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{pad}" y1="{base_y}" x2="{width - pad}" y2="{base_y}" stroke="black"/>',
        f'<line x1="{width / 2}" y1="{pad}" x2="{width / 2}" y2="{base_y}" stroke="gray"/>',
    ]
    for t in taus:
        cx = width / 2 + t.real * sx
        cy = base_y - t.imag * sy
        parts.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="2" fill="steelblue"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _section_rows(samples, q):
    for i, s in enumerate(samples):
        yield i, s, on_quadric_residual(q, s.point)


def cmd_section_sample(path, cfg: RunConfig, fmt: str = "json", svg: bool = False) -> int:
    q = load_quadric(path)
    samples = [section_at(q, p) for p in random_planes(q.ambient_n, cfg.trials, cfg.seed)]
    rows = list(_section_rows(samples, q))
    max_res = max(r for _, _, r in rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        size = q.size
        w.writerow(["index"] + [f"u{k}" for k in range(size)] + [f"v{k}" for k in range(size)]
                   + ["tau_re", "tau_im", "on_quadric_residual"])
        for i, s, r in rows:
            w.writerow([i] + [repr(float(x)) for x in s.plane.u] + [repr(float(x)) for x in s.plane.v]
                       + [repr(s.tau.real), repr(s.tau.imag), repr(r)])
        _emit(cfg, "section_sample.csv", buf.getvalue())
    else:
        report = _header("section sample", cfg)
        report.update({
            "n": q.ambient_n,
            "count": len(samples),
            "max_on_quadric_residual": max_res,
            "samples": [dict(s.to_json(), on_quadric_residual=r) for _, s, r in rows],
        })
        _emit(cfg, "section_sample.json", _dump(report))
    if svg:
        if cfg.output_dir is None:
            raise UsageError("--svg needs --out (or the output directory environment variable)")
        _emit(cfg, "section_tau.svg", tau_scatter_svg([s.tau for s in samples]), stdout=False)
    return EXIT_OK if max_res < cfg.tolerances["on_quadric"] else EXIT_CORRESPONDENCE


# -------------------------------------------------------------- holomorphy ---

def holomorphy_run(q: Quadric, cfg: RunConfig, perturb: float = 0.0) -> dict:
    """Holomorphy residual and torsion coefficients on shared random planes."""
    tol_h, tol_t = cfg.tolerances["holomorphy"], cfg.tolerances["torsion"]
    samples = []
    for plane in random_planes(q.ambient_n, cfg.trials, cfg.seed):
        sec = perturbed_section(q, plane, perturb)
        h = holomorphy_residual(sec, plane).residual
        t = cl.reduction_torsion_test(q, plane, section=sec).max_y
        tau = section_at(q, plane).tau
        samples.append({
            "plane": plane.to_json(),
            "tau": [tau.real, tau.imag],
            "residual": h,
            "torsion": t,
            "agree": bool((h < tol_h) == (t < tol_t)),
        })
    return {
        "n": q.ambient_n,
        "perturb": perturb,
        "max_holomorphy_residual": max(s["residual"] for s in samples),
        "max_torsion_coefficient": max(s["torsion"] for s in samples),
        "min_holomorphy_residual": min(s["residual"] for s in samples),
        "min_torsion_coefficient": min(s["torsion"] for s in samples),
        "agreement": all(s["agree"] for s in samples),
        "samples": samples,
    }


def cmd_holomorphy(path, cfg: RunConfig, perturb: float = 0.0, fmt: str = "json") -> int:
    q = load_quadric(path)
    result = holomorphy_run(q, cfg, perturb)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        size = q.size
        w.writerow([f"u{k}" for k in range(size)] + [f"v{k}" for k in range(size)]
                   + ["im_tau", "residual", "torsion"])
        for s in result["samples"]:
            u, v = s["plane"]
            w.writerow([repr(x) for x in u] + [repr(x) for x in v]
                       + [repr(s["tau"][1]), repr(s["residual"]), repr(s["torsion"])])
        _emit(cfg, "holomorphy.csv", buf.getvalue())
    else:
        report = _header("holomorphy", cfg)
        report.update(result)
        _emit(cfg, "holomorphy.json", _dump(report))
    return EXIT_OK if result["agreement"] else EXIT_IDENTITY


# -------------------------------------------------------------------- flat ---

def flat_identity_residuals(n: int, trials: int, seed: int, forms=cl.flat_forms) -> dict:
    """Max residual of each flat-model identity over random Lie algebra data."""
    rng = np.random.default_rng([seed, n])
    worst = dict.fromkeys(["structure_equation", "curvature_zero", "bianchi", "gauge_action", "adtors"], 0.0)
    for _ in range(trials):
        x, y, z = (cl.random_algebra_element(n, rng) for _ in range(3))
        xl, yl = (cl.random_algebra_element(n, rng, lower=True) for _ in range(2))
        b = rng.standard_normal((2, n))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        worst["structure_equation"] = max(worst["structure_equation"],
                                          float(np.abs(cl.verify_structure_equation(x, y, forms)).max()))
        worst["curvature_zero"] = max(worst["curvature_zero"], max(cl.verify_curvature_zero(xl, yl, forms)))
        worst["bianchi"] = max(worst["bianchi"], float(np.abs(cl.verify_bianchi(x, y, z, forms)).max()))
        worst["gauge_action"] = max(worst["gauge_action"], max(cl.gauge_action_check(b, x, forms).values()))
        worst["adtors"] = max(worst["adtors"], float(np.abs(cl.verify_adtors_same_torsion(a, x, y, forms)).max()))
    return worst


def cmd_flat_verify(cfg: RunConfig, break_xi: bool = False) -> int:
    forms = cl.broken_flat_forms if break_xi else cl.flat_forms
    tol = cfg.tolerances["identity"]
    results = []
    for n in cfg.n:
        for name, value in flat_identity_residuals(n, cfg.trials, cfg.seed, forms).items():
            results.append({"identity": name, "n": n, "trials": cfg.trials, "max_residual": float(value),
                            "pass": bool(value < tol)})
    report = _header("flat verify", cfg)
    report.update({"tolerance": tol, "results": results, "all_pass": all(r["pass"] for r in results)})
    _emit(cfg, "flat_verify.json", _dump(report))
    return EXIT_OK if report["all_pass"] else EXIT_IDENTITY


# ------------------------------------------------------------------ parser ---

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", default="1,2,3,5", help="ambient n, or a comma list for flat verify")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--tol", action="append", metavar="NAME=VAL", help="override a tolerance")
    common.add_argument("--out", help=f"output directory (default: ${OUT_ENV})")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    p = _Parser(prog="flattwistor", description="Quadrics without real points and the flat twistor fibration.")
    sub = p.add_subparsers(dest="group", required=True)

    pq = sub.add_parser("quadric").add_subparsers(dest="action", required=True)
    c = pq.add_parser("check", parents=[common])
    c.add_argument("file")
    pq.add_parser("random", parents=[common])

    ps = sub.add_parser("section").add_subparsers(dest="action", required=True)
    s = ps.add_parser("sample", parents=[common])
    s.add_argument("file")
    s.add_argument("--svg", action="store_true", help="also write a scatter of tau")

    h = sub.add_parser("holomorphy", parents=[common])
    h.add_argument("file")
    h.add_argument("--perturb", type=float, default=0.0)

    pf = sub.add_parser("flat").add_subparsers(dest="action", required=True)
    f = pf.add_parser("verify", parents=[common])
    f.add_argument("--break-xi", action="store_true", help="corrupt the xi formula (harness self-test)")
    for sp in (pq, ps, pf):
        for action in sp.choices.values():
            action.__class__ = _Parser
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        if args.group == "quadric" and args.action == "check":
            return cmd_quadric_check(args.file, cfg)
        if args.group == "quadric" and args.action == "random":
            return cmd_quadric_random(cfg)
        if args.group == "section":
            return cmd_section_sample(args.file, cfg, args.format, args.svg)
        if args.group == "holomorphy":
            return cmd_holomorphy(args.file, cfg, args.perturb, args.format)
        if args.group == "flat":
            return cmd_flat_verify(cfg, args.break_xi)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateQuadric, AmbientTooSmall, HasRealPoints) as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except FiberMultiplicityError as exc:
        print(f"correspondence violated: {exc}", file=sys.stderr)
        return EXIT_CORRESPONDENCE
    except TwistorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORRESPONDENCE
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
