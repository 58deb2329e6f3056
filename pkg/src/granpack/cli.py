"""Command line entry point: ``granpack fit|pack|report|run``.

Exit statuses: 0 success, 2 input error, 3 placement failure (the first
disk does not fit), 4 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import distributions as dist
from . import granulometry as gran
from .errors import (
    CurveError,
    DegenerateHistogram,
    DomainError,
    FirstParticleFailed,
    GranpackError,
    NoConvergedFit,
    NonConvergence,
    RadiiExhausted,
    SchemaError,
)
from .fitting import FitConfig, fit_candidates
from .packing import (
    DEFAULT_JMAX,
    DEFAULT_K,
    RadiusModel,
    parse_domain,
    read_polygon,
    sequential_pack,
)
from .render import fit_svg, packing_svg

log = logging.getLogger("granpack")

FIT_REPORT = "fit_report.json"
FIT_SVG = "fit.svg"
HIST_CSV = "histogram.csv"
PACKING_CSV = "packing.csv"
PACKING_REPORT = "packing_report.json"
PACKING_SVG = "packing.svg"

EXIT_INPUT, EXIT_FAIL, EXIT_NONCONV = 2, 3, 4


@dataclass
class RunConfig:
    curve_path: str = None
    porosity: float = 0.35
    domain: str = "20x20"
    polygon_path: str = None
    k: int = 1000
    K: float = DEFAULT_K
    j_max: int = DEFAULT_JMAX
    seed: int = 0
    log_base: float = math.e
    ref_diameter_mm: float = gran.DEFAULT_REF_DIAMETER_MM
    fit_space: str = "log"
    families: tuple = dist.FAMILIES
    out: str = "out"
    fit_report: str = None
    packing_report: str = None
    extras: dict = field(default_factory=dict)

    def validate(self):
        if not 0 < self.porosity < 1:
            raise ValueError(f"--porosity must lie in (0, 1), got {self.porosity}")
        if self.k < 1:
            raise ValueError("--k must be a positive integer")
        if not self.K > 1:
            raise ValueError("--oversample-K must exceed 1")
        if self.j_max < 1:
            raise ValueError("--jmax must be at least 1")
        if not self.log_base > 1:
            raise ValueError("--log-base must exceed 1")
        if not self.ref_diameter_mm > 0:
            raise ValueError("--ref-diameter-mm must be positive")
        if self.fit_space not in ("log", "linear"):
            raise ValueError("--fit-space must be 'log' or 'linear'")
        if not self.families or any(f not in dist.FAMILIES for f in self.families):
            raise ValueError(f"--families must be a non-empty subset of {','.join(dist.FAMILIES)}")


def stage_seeds(seed):
    """Independent integer seeds for the sampling, moment and placement stages."""
    children = np.random.SeedSequence(seed).spawn(3)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _dump_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None


# -- subcommands -------------------------------------------------------------

def cmd_fit(cfg):
    """Fit all requested families to the pseudo-sample; writes the fit report and plots."""
    path = cfg.curve_path
    if not path or not os.path.isfile(path):
        raise FileNotFoundError(f"curve file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    curve = gran.parse_granulometric_table(text)
    hist = gran.to_log_histogram(curve, cfg.log_base, cfg.ref_diameter_mm)
    sample_seed, _, _ = stage_seeds(cfg.seed)
    sample = gran.sample_pseudo_diameters(hist, cfg.k, np.random.default_rng(sample_seed))
    if sample.M == 0:
        raise DegenerateHistogram(f"k={cfg.k} rounds every bin count to zero")

    families = tuple(cfg.families)
    if cfg.fit_space == "linear":
        values = sample.diameters_mm() / 2.0
        if "hyperbolic" in families:
            log.warning("hyperbolic law dropped: radii must be positive in linear fit space")
            families = tuple(f for f in families if f != "hyperbolic")
            if not families:
                raise ValueError("no family left to fit in linear space")
    else:
        values = sample.values

    selection = fit_candidates(values, families, FitConfig())
    best = selection.best
    best_p = max(gof.p_value for _, gof in selection.candidates)
    if best_p < 0.05:
        log.warning("no candidate law passes the chi-square test at the 5%% level (best p=%.3g)", best_p)
    radius_model = RadiusModel(best.model, cfg.fit_space, cfg.log_base, cfg.ref_diameter_mm, best.shift)
    report = {
        "config": {
            "curve_name": os.path.basename(path),
            "curve_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            "k": cfg.k,
            "seed": cfg.seed,
            "log_base": cfg.log_base,
            "ref_diameter_mm": cfg.ref_diameter_mm,
            "fit_space": cfg.fit_space,
            "families": list(families),
        },
        "sample_size": sample.M,
        "candidates": [
            {
                "family": fit.family,
                "params": dist.params_dict(fit.model),
                "log_likelihood": fit.log_likelihood,
                "converged": fit.converged,
                "iterations": fit.iterations,
                "shift": fit.shift,
                "gof": {"statistic": gof.statistic, "df": gof.degrees_of_freedom,
                        "p_value": gof.p_value, "bins": gof.bin_count},
            }
            for fit, gof in selection.candidates
        ],
        "chosen": best.family,
        "rule_applied": selection.rule_applied,
        "model": radius_model.to_json(),
    }
    os.makedirs(cfg.out, exist_ok=True)
    _dump_json(os.path.join(cfg.out, FIT_REPORT), report)
    _write(os.path.join(cfg.out, HIST_CSV), hist.to_csv())
    curves = [(fit.model, fit.shift) for fit, _ in selection.candidates]
    if cfg.fit_space == "log":
        svg = fit_svg(hist, curves, chosen=best.family)
    else:
        # same masses on a radius axis, so the fitted radius densities are comparable
        radius_hist = gran.LogHistogram(curve.diameters / 2.0, hist.masses, hist.log_base, hist.ref_diameter)
        svg = fit_svg(radius_hist, curves, chosen=best.family, xlabel="radius (mm)")
    _write(os.path.join(cfg.out, FIT_SVG), svg)
    return report


def _domain_from_cfg(cfg):
    if cfg.polygon_path:
        if not os.path.isfile(cfg.polygon_path):
            raise FileNotFoundError(f"polygon file not found: {cfg.polygon_path}")
        return read_polygon(cfg.polygon_path)
    return parse_domain(cfg.domain)


def cmd_pack(cfg, fit_report=None):
    """Pack disks from the chosen model of a fit report; writes CSV, JSON and SVG."""
    if fit_report is None:
        fit_report = _load_json(cfg.fit_report or os.path.join(cfg.out, FIT_REPORT))
    if "model" not in fit_report:
        raise SchemaError("fit report has no 'model' entry")
    radius_model = RadiusModel.from_json(fit_report["model"])
    _, moment_seed, place_seed = stage_seeds(cfg.seed)
    radius_model.moment_seed = moment_seed
    domain = _domain_from_cfg(cfg)
    try:
        packing = sequential_pack(domain, radius_model, cfg.porosity, cfg.K, cfg.j_max, place_seed)
    except RadiiExhausted as exc:
        log.warning(str(exc))
        packing = exc.packing
    packing.seed = cfg.seed
    report = packing.report(model_ref=fit_report["model"])
    os.makedirs(cfg.out, exist_ok=True)
    _write(os.path.join(cfg.out, PACKING_CSV), packing.to_csv())
    _dump_json(os.path.join(cfg.out, PACKING_REPORT), report)
    _write(os.path.join(cfg.out, PACKING_SVG), packing_svg(packing))
    return report


def _fmt_params(params):
    return " ".join(f"{k}={v:.4g}" for k, v in params.items())


def cmd_report(fit_report, packing_report):
    """Aligned text table: one row per candidate law plus a packing summary row."""
    cands = fit_report.get("candidates")
    if not isinstance(cands, list) or not cands:
        raise SchemaError("fit report has no candidates")
    for key in ("target_porosity", "achieved_porosity", "particle_count", "estimated_count"):
        if key not in packing_report:
            raise SchemaError(f"packing report lacks {key!r}")
    try:
        rows = [(c["family"], _fmt_params(c["params"]), f"{c['log_likelihood']:.3f}",
                 f"{c['gof']['p_value']:.3g}", "*" if c["family"] == fit_report.get("chosen") else "")
                for c in cands]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed candidate entry: {exc}") from None
    head = ("family", "parameters", "loglik", "p-value", "chosen")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(len(head))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(head, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in rows]
    cfg = fit_report.get("config", {})
    lines.append(
        f"summary  model={fit_report.get('chosen')}  N={packing_report['estimated_count']}  "
        f"placed={packing_report['particle_count']}  eta={packing_report['target_porosity']:.3f}  "
        f"eta_hat={packing_report['achieved_porosity']:.3f}  "
        f"stop={packing_report.get('termination_reason', '')}  "
        f"log_base={cfg.get('log_base', float('nan')):.6g}  ref_mm={cfg.get('ref_diameter_mm', float('nan')):.6g}  "
        f"seed={packing_report.get('seed')}"
    )
    return "\n".join(lines) + "\n"


# -- argument parsing ----------------------------------------------------------

def _add_common(p, fit=True, pack=True):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out", help="output directory")
    if fit:
        p.add_argument("--curve", dest="curve_path", help="granulometric curve CSV")
        p.add_argument("--k", type=int, default=1000, help="pseudo-sample scale")
        p.add_argument("--log-base", type=float, default=math.e)
        p.add_argument("--ref-diameter-mm", type=float, default=gran.DEFAULT_REF_DIAMETER_MM)
        p.add_argument("--fit-space", choices=("log", "linear"), default="log")
        p.add_argument("--families", default=",".join(dist.FAMILIES))
    if pack:
        p.add_argument("--porosity", type=float, default=0.35)
        p.add_argument("--domain", default="20x20", help="rectangle WxH in mm")
        p.add_argument("--polygon", dest="polygon_path", help="polygon CSV (x_mm,y_mm)")
        p.add_argument("--oversample-K", dest="K", type=float, default=DEFAULT_K)
        p.add_argument("--jmax", dest="j_max", type=int, default=DEFAULT_JMAX)


def build_parser():
    parser = argparse.ArgumentParser(prog="granpack", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("fit", help="fit size laws to a granulometric curve"), pack=False)
    p = sub.add_parser("pack", help="pack disks using a fit report")
    _add_common(p, fit=False)
    p.add_argument("--fit-report", help="fit report JSON (default: OUT/fit_report.json)")
    _add_common(sub.add_parser("run", help="fit then pack"))
    p = sub.add_parser("report", help="print a summary table")
    p.add_argument("--out", default="out")
    p.add_argument("--fit-report")
    p.add_argument("--packing-report")
    return parser


def config_from_args(args):
    cfg = RunConfig()
    for key, value in vars(args).items():
        if key == "families":
            value = tuple(f.strip() for f in value.split(",") if f.strip())
        if hasattr(cfg, key):
            setattr(cfg, key, value)
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = config_from_args(args)
    try:
        if args.command == "report":
            fit_report = _load_json(cfg.fit_report or os.path.join(cfg.out, FIT_REPORT))
            packing_report = _load_json(cfg.packing_report or os.path.join(cfg.out, PACKING_REPORT))
            sys.stdout.write(cmd_report(fit_report, packing_report))
            return 0
        cfg.validate()
        if args.command == "fit":
            cmd_fit(cfg)
        elif args.command == "pack":
            cmd_pack(cfg)
        elif args.command == "run":
            cmd_pack(cfg, cmd_fit(cfg))
    except FirstParticleFailed as exc:
        print(f"granpack: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NoConvergedFit, NonConvergence) as exc:
        print(f"granpack: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (FileNotFoundError, CurveError, SchemaError, DomainError, ValueError, GranpackError) as exc:
        print(f"granpack: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
