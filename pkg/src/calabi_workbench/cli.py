"""Command-line driver: ``workbench <subcommand> [options]``.

Every run writes ``report.json`` (byte-identical for identical options)
and ``metadata.json`` (timestamp, backend, versions) into ``--out``;
sweep and scan tables go next to them as CSV.

Exit codes: 0 all verdicts hold, 1 an inequality fails, 2 input error,
3 only outside-regime verdicts besides passing ones.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .conformal import cone_angle_estimate
from .cover import ConformalFactorField, format_field, load_field, parse_field, random_field
from .errors import WorkbenchError
from .lattice import HEX, LOEWNER_CONSTANT, loewner_check, random_basis, shortest_vector_bruteforce
from .reports import FAILS, HOLDS, OUTSIDE, SCHEMA_VERSION, InequalityReport
from .sweep import (
    QuadratureParams,
    classify_height,
    expected_length_gc,
    gamma_lengths,
    stokes_lower_bound_check,
    stokes_terms,
    sweep_cycle,
)
from .verify import (
    VerifySettings,
    averaged_inequality_check,
    default_alpha_grid,
    default_s_grid,
    diastole_upper_bound,
    neighborhood_certificate,
    theorem_check,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_OUTSIDE = 0, 1, 2, 3
# scan multiplies a unit-amplitude base field by each epsilon
DEFAULT_AMPLITUDE = {"scan": 1.0, "stokes": 0.3}
SPHERE_AREA_GC = 1.0 / (2.0 * math.sqrt(3.0))


@dataclass
class RunConfig:
    subcommand: str
    field_path: str | None = None
    field_inline: str | None = None
    amplitude: float = 0.05
    resolution: int = 128
    sup_resolution: int = 256
    s_grid: int = 64
    alpha_grid: int = 129
    nodes: int = 64
    seed: int = 0
    safety: float = 1.05
    out: str = "out"
    tol: float = 1e-8
    epsilons: tuple = (-0.05, -0.02, -0.01, 0.0, 0.01, 0.02, 0.05)
    count: int = 0
    extra: dict = field(default_factory=dict)

    def settings(self) -> VerifySettings:
        return VerifySettings(
            area_N=self.resolution,
            sup_N=self.sup_resolution,
            s_count=self.s_grid,
            alpha_count=self.alpha_grid,
            nodes=self.nodes,
            safety=self.safety,
            tol=self.tol,
        )

    def validate(self):
        if self.resolution < 64 or self.sup_resolution < 64:
            raise WorkbenchError("--resolution and --sup-resolution must be >= 64")
        if self.s_grid < 1 or self.alpha_grid < 3 or self.nodes < 2:
            raise WorkbenchError("--s-grid >= 1, --alpha-grid >= 3 and --nodes >= 2 required")
        if not (self.safety >= 1.0 and math.isfinite(self.safety)):
            raise WorkbenchError("--safety must be a finite number >= 1")

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k not in ("out", "extra")}
        d["epsilons"] = list(self.epsilons)
        d.update(self.extra)
        return d


def identity_report(name: str, value: float, expected: float, tol: float, **details) -> InequalityReport:
    """``|value - expected| <= tol`` as a report."""
    err = abs(value - expected)
    return InequalityReport(
        name=name,
        lhs=err,
        rhs=0.0,
        verdict=HOLDS if err <= tol else FAILS,
        tolerances={"tol": tol},
        details={"value": value, "expected": expected, **details},
    )


def resolve_field(cfg: RunConfig) -> ConformalFactorField:
    if cfg.field_path:
        return load_field(cfg.field_path)
    if cfg.field_inline:
        return parse_field(cfg.field_inline.replace(";", "\n"))
    return random_field(cfg.seed, cfg.amplitude)


# -- suites -----------------------------------------------------------------


def run_baseline(cfg: RunConfig):
    """The unperturbed metric ``g_c``: every quantity at its exact value."""
    st = cfg.settings()
    u = ConformalFactorField.zero()
    reports = []
    tol = 1e-9
    th = theorem_check(u, st)
    area = th.details["area"]
    U = th.details["U"]
    reports.append(identity_report("area_gc", area, SPHERE_AREA_GC, tol))
    lg = gamma_lengths(u, default_s_grid(cfg.s_grid), cfg.nodes)
    reports.append(identity_report("gamma_lengths", float(np.max(np.abs(lg - 1.0))) + 1.0, 1.0, tol))
    law = max(
        abs(sweep_cycle(float(s), float(a)).cycle.length_gc() - expected_length_gc(float(a)))
        for s in default_s_grid(cfg.s_grid)
        for a in default_alpha_grid(cfg.alpha_grid)
    )
    reports.append(identity_report("length_law", law, 0.0, tol))
    reports.append(identity_report("diastole_bound", U, 1.0, tol))
    reports.append(identity_report("area_over_U2", area / U**2, SPHERE_AREA_GC, tol))
    eq = th.details["near_equality"]
    reports.append(InequalityReport("equality_flag", 0.0 if eq else 1.0, 0.0, HOLDS if eq else FAILS,
                                    details={"near_equality": eq, "margin": th.margin}))
    reports.append(th)
    return u, reports, {}


def _sweep_table(u, cfg: RunConfig):
    s_grid = default_s_grid(cfg.s_grid)
    a_grid = default_alpha_grid(cfg.alpha_grid)
    bound = diastole_upper_bound(u, s_grid, a_grid, cfg.nodes)
    rows = []
    for i, s in enumerate(s_grid):
        sp = classify_height(float(s))
        for j, a in enumerate(a_grid):
            rows.append([
                repr(float(s)), repr(float(a)), "first" if sp.special else "second", sp.k,
                repr(sp.a_low), repr(sp.a_high), repr(expected_length_gc(float(a))),
                repr(float(bound.lengths[i, j])),
            ])
    return ["s", "alpha", "case", "k", "a_low", "a_high", "length_gc", "length_g"], rows


def run_perturb(cfg: RunConfig):
    """Certificate, averaged inequality, sweep table and theorem verdict for one field."""
    st = cfg.settings()
    u = resolve_field(cfg)
    cert = neighborhood_certificate(u, st.sup_N, st.safety)
    cert_report = InequalityReport(
        name="neighborhood_certificate",
        lhs=cert.sup_dev + cert.sup_slope * 0.5 / math.sqrt(3.0),
        rhs=1.0,
        verdict=HOLDS if cert.valid else OUTSIDE,
        settings={"N": st.sup_N, "safety": st.safety},
        details=cert.to_dict(),
        field_digest=u.digest,
    )
    reports = [cert_report, averaged_inequality_check(u, st.area_N, st)]
    bound = diastole_upper_bound(u, default_s_grid(st.s_count), default_alpha_grid(st.alpha_count), st.nodes,
                                 certified=cert.valid, tol=st.tol)
    reports.append(InequalityReport(
        name="diastole_upper_bound",
        lhs=bound.U,
        rhs=float(np.min(bound.gamma_lengths)),
        verdict=(HOLDS if bound.U <= np.min(bound.gamma_lengths) + st.tol else FAILS) if cert.valid else OUTSIDE,
        settings={"s_count": st.s_count, "alpha_count": st.alpha_count, "nodes": st.nodes},
        details={"U": bound.U, "s_star": bound.s_star, "dominance_gap": bound.dominance_gap,
                 "sweep_max_matches_gamma": bound.sweep_max_matches_gamma},
        field_digest=u.digest,
    ))
    reports.append(theorem_check(u, st))
    header, rows = _sweep_table(u, cfg)
    return u, reports, {"sweep_table.csv": (header, rows)}


def run_scan(cfg: RunConfig):
    """Margin of the theorem along ``eps * u`` for a base field ``u``."""
    st = cfg.settings()
    base = resolve_field(cfg)
    rows, reports = [], []
    fit_x, fit_y = [], []
    for eps in cfg.epsilons:
        r = theorem_check(base.scaled(float(eps)), st)
        r.inputs["epsilon"] = float(eps)
        reports.append(r)
        rows.append([repr(float(eps)), repr(r.details["area"]), repr(r.details["U"]), repr(r.margin), r.verdict])
        if r.verdict != OUTSIDE:
            fit_x.append(float(eps))
            fit_y.append(r.margin)
    extra = {}
    if len(fit_x) >= 3:
        coeffs, res, *_ = np.polyfit(fit_x, fit_y, 2, full=True)
        extra = {"quadratic_fit": [float(c) for c in coeffs],
                 "quadratic_fit_residual": float(res[0]) if len(res) else 0.0}
    header = ["epsilon", "area", "U", "margin", "verdict"]
    return base, reports, {"scan.csv": (header, rows), "_summary": extra}


def run_loewner(cfg: RunConfig):
    """Loewner inequality and Lagrange reduction on seeded random lattices."""
    count = cfg.count or 1000
    rng = np.random.default_rng(cfg.seed)
    worst_ratio = math.inf
    worst_sys_err = 0.0
    failures = []
    for i in range(count):
        b = random_basis(rng)
        rep = loewner_check(b)
        brute = shortest_vector_bruteforce(b, 25)
        err = abs(rep.details["systole"] - brute)
        worst_sys_err = max(worst_sys_err, err)
        worst_ratio = min(worst_ratio, rep.details["ratio"])
        if rep.verdict != HOLDS or err > 1e-9:
            failures.append({"index": i, "b1": list(b.b1), "b2": list(b.b2), "ratio": rep.details["ratio"],
                             "systole_error": err})
    hexrep = loewner_check(HEX)
    reports = [
        InequalityReport("loewner_random", LOEWNER_CONSTANT, worst_ratio,
                         HOLDS if worst_ratio >= LOEWNER_CONSTANT - 1e-12 else FAILS,
                         inputs={"count": count, "seed": cfg.seed}, tolerances={"tol": 1e-12},
                         details={"failures": failures}),
        identity_report("lagrange_vs_bruteforce", worst_sys_err, 0.0, 1e-9, box=25),
        identity_report("loewner_hex_equality", hexrep.details["ratio"], LOEWNER_CONSTANT, 1e-12,
                        equality=hexrep.details["equality"]),
    ]
    return None, reports, {}


def run_stokes(cfg: RunConfig):
    """Stokes residuals under quadrature refinement for a seeded field."""
    u = resolve_field(cfg)
    rng = np.random.default_rng(cfg.seed)
    levels = [16, 32, 64, 128, 256, 512]
    rows, reports = [], []
    pairs = cfg.count or 10
    for _ in range(pairs):
        s = float(rng.uniform(0.0, math.sqrt(3.0) / 2.0))
        a = float(rng.uniform(0.0, 1.0))
        if a == 0.5:
            continue
        res = []
        for n in levels:
            terms = stokes_terms(u, s, a, QuadratureParams(n, n))
            res.append(max(t.residual for t in terms))
            rows.append([repr(s), repr(a), n, repr(res[-1])])
        ok_conv = all(res[i] >= 4.0 * res[i + 1] or res[i] <= 1e-12 for i in range(len(res) - 1))
        reports.append(InequalityReport(
            "stokes_residual", res[-1], 1e-6, HOLDS if res[-1] < 1e-6 and ok_conv else FAILS,
            inputs={"s": s, "alpha": a}, details={"levels": levels, "residuals": res, "convergence_ok": ok_conv},
            field_digest=u.digest))
        reports.append(stokes_lower_bound_check(u, s, a, cfg.sup_resolution, safety=cfg.safety))
    return u, reports, {"stokes.csv": (["s", "alpha", "nodes", "residual"], rows)}


def run_cone_angle(cfg: RunConfig):
    """Cone-angle estimates at the three cone points and one regular point."""
    reports, rows = [], []
    radii = (1e-2, 1e-3, 1e-4)
    for center, expected in ((-1.0, 2 * math.pi / 3), (0.0, 2 * math.pi / 3), (1.0, 2 * math.pi / 3),
                             (0.5 + 0.5j, 2 * math.pi)):
        est = [cone_angle_estimate(center, r) for r in radii]
        for r, e in zip(radii, est):
            rows.append([repr(complex(center)), repr(r), repr(e), repr(expected)])
        rep = identity_report("cone_angle", est[1], expected, 1e-3, center=[complex(center).real, complex(center).imag],
                              radii=list(radii), estimates=est)
        reports.append(rep)
    return None, reports, {"cone_angle.csv": (["center", "r", "estimate", "expected"], rows)}


SUITES = {
    "baseline": run_baseline,
    "perturb": run_perturb,
    "scan": run_scan,
    "loewner": run_loewner,
    "stokes": run_stokes,
    "cone-angle": run_cone_angle,
}


# -- output -----------------------------------------------------------------


def exit_code_for(reports) -> int:
    verdicts = [r.verdict for r in reports]
    if FAILS in verdicts:
        return EXIT_FAIL
    if OUTSIDE in verdicts:
        return EXIT_OUTSIDE
    return EXIT_OK


def build_report(cfg: RunConfig, u, reports, summary_extra=None) -> dict:
    code = exit_code_for(reports)
    counts = {v: sum(r.verdict == v for r in reports) for v in (HOLDS, FAILS, OUTSIDE)}
    return {
        "schema": SCHEMA_VERSION,
        "subcommand": cfg.subcommand,
        "config": cfg.as_dict(),
        "field": None if u is None else {"digest": u.digest, "definition": format_field(u, canonical=True)},
        "reports": [r.to_dict() for r in reports],
        "summary": {
            "exit_code": code,
            "counts": counts,
            "failed": [r.name for r in reports if r.verdict == FAILS],
            **(summary_extra or {}),
        },
    }


def write_outputs(cfg: RunConfig, doc: dict, tables: dict):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    meta = {
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "kernel_backend": kernels.BACKEND,
        "version": __version__,
        "numpy": np.__version__,
        "python": sys.version.split()[0],
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for name, (header, rows) in tables.items():
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)


def run(cfg: RunConfig) -> int:
    cfg.validate()
    u, reports, tables = SUITES[cfg.subcommand](cfg)
    summary_extra = tables.pop("_summary", None)
    doc = build_report(cfg, u, reports, summary_extra)
    write_outputs(cfg, doc, tables)
    if u is not None and cfg.subcommand in ("perturb", "scan", "stokes"):
        (Path(cfg.out) / "field.txt").write_text(format_field(u), encoding="utf-8")
    return doc["summary"]["exit_code"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name, fn in SUITES.items():
        sp = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        sp.add_argument("--field", dest="field_path", help="field-definition file")
        sp.add_argument("--inline", dest="field_inline", help="field definition, directives separated by ';'")
        sp.add_argument("--amplitude", type=float, default=DEFAULT_AMPLITUDE.get(name, 0.05),
                        help="sup |u| of the seeded random field (scan: of the base field)")
        sp.add_argument("--resolution", type=int, default=128, help="torus grid N for areas")
        sp.add_argument("--sup-resolution", type=int, default=256, help="torus grid N for sup norms")
        sp.add_argument("--s-grid", type=int, default=64)
        sp.add_argument("--alpha-grid", type=int, default=129)
        sp.add_argument("--nodes", type=int, default=64, help="Gauss-Legendre nodes per edge")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--safety", type=float, default=1.05, help="inflation factor for grid sups")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--out", default="out")
        if name == "scan":
            sp.add_argument("--epsilons", default="-0.05,-0.02,-0.01,0,0.01,0.02,0.05")
        if name in ("loewner", "stokes"):
            sp.add_argument("--count", type=int, default=0, help="number of lattices / (s, alpha) pairs")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        eps = tuple(float(e) for e in args.epsilons.split(",")) if hasattr(args, "epsilons") else RunConfig.epsilons
        cfg = RunConfig(
            subcommand=args.subcommand,
            field_path=args.field_path,
            field_inline=args.field_inline,
            amplitude=args.amplitude,
            resolution=args.resolution,
            sup_resolution=args.sup_resolution,
            s_grid=args.s_grid,
            alpha_grid=args.alpha_grid,
            nodes=args.nodes,
            seed=args.seed,
            safety=args.safety,
            out=args.out,
            tol=args.tol,
            epsilons=eps,
            count=getattr(args, "count", 0),
        )
        return run(cfg)
    except (WorkbenchError, OSError, ValueError) as exc:
        print(f"workbench: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
