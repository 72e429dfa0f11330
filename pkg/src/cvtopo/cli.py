"""Command-line front end: ``cvtopo <command> [flags]``.

Every table is written as CSV (or a JSON mirror with the same field names).
CSV output starts with two comment lines, the units of each column and the
fully resolved configuration, followed by the header row.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .errors import CVTopoError, NumericalAssertionError, ValidationError
from .lattice import ModeLattice, surface_code_pattern
from .noise import kappa as kappa_from_beta
from .polymer import SWEEP_HEADER, OscillatorPairConfig, convergence_sweep
from .selftest import run_selftest
from .topo import (
    ClusterSystem,
    ScaledState,
    SurfaceCodeSystem,
    correlation_profile,
    demko_constants,
    kp_regions,
    lw_regions,
    regions_from_json,
    squeezing_conventions,
    tee_kp,
    tee_lw,
    tee_upper_bound,
    tln_kp,
    tmi,
    tmi_high_temp_limit,
    tmi_wootton_bounds,
)
from .torus import energy_gap

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3

DEFAULTS: dict[str, Any] = {
    "rows": 36, "cols": 36, "boundary": "planar", "margin": 6, "log_s": "0:4:0.5",
    "kappa": "1,1.5,3,10,1000,1000000", "beta": None, "regions": None, "radius": 8.0,
    "out": None, "format": "csv", "threads": None, "seed": 0, "state": "surface",
    "n": "101", "m": "101", "s": "5", "axis": "u", "max_sep": 12,
    "alpha": None, "lam": None, "mass": 1.0, "omega": 1.0,
    "mu_over_d": "0.01,0.02,0.03,0.05,0.07,0.1", "source": "series",
}

UNITS = {
    "log_s": "natural log of s", "s": "raw squeezing factor", "dB": "10 log10(s^2)",
    "tee_kp": "bits", "tee_lw": "bits", "tln": "bits", "tee_upper_bound": "bits",
    "tmi_lower_limit": "bits", "kappa": "dimensionless", "tmi": "bits",
    "wootton_lower": "bits", "wootton_upper": "bits", "n": "sites", "m": "sites",
    "gap": "energy units of the nullifier Hamiltonian", "asymptotic": "same as gap",
    "ratio": "dimensionless", "axis": "rotated lattice axis", "separation": "lattice units",
    "qq": "<q_0 q_r>", "pp": "<p_0 p_r>", "demko_bound": "bound on |<q_0 q_r>|",
    "index": "survivor index", "row": "cluster row", "col": "cluster column",
    "mu_over_d": "dimensionless", "s_schr_bits": "bits", "s_poly_bits": "bits",
    "delta_s_numeric_bits": "bits", "delta_s_closed_bits": "bits",
}

TEE_HEADER = ("log_s", "s", "dB", "tee_kp", "tee_lw", "tln", "tee_upper_bound", "tmi_lower_limit")
TMI_HEADER = ("log_s", "kappa", "tmi", "tmi_lower_limit", "wootton_lower", "wootton_upper")
GAP_HEADER = ("n", "m", "s", "gap", "asymptotic", "ratio")
CORR_HEADER = ("log_s", "axis", "separation", "qq", "pp", "demko_bound")
SURVIVOR_HEADER = ("index", "row", "col")


# ---------------------------------------------------------------------------
# parsing helpers


def parse_range(text: str) -> list[float]:
    """``a:b:step`` (inclusive) or a comma list."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"range {text!r} must look like start:stop:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValidationError(f"range {text!r} needs step > 0 and stop >= start")
        count = int(np.floor((b - a) / step + 1e-9)) + 1
        return [round(a + k * step, 12) for k in range(count)]
    return parse_list(text)


def parse_list(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse number list {text!r}") from exc


def resolve_threads(value) -> int:
    if value is None:
        value = os.environ.get("CVTOPO_THREADS", 1)
    try:
        threads = int(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"thread count {value!r} is not an integer") from exc
    if threads < 1:
        raise ValidationError("thread count must be at least 1")
    return threads


def pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Map in input order, on a thread pool when more than one thread is requested."""
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_table(cfg: dict, header: Sequence[str], rows: list[Sequence], extra: dict | None = None) -> None:
    if cfg["format"] == "json":
        doc = {"config": cfg, "units": {h: UNITS.get(h, "") for h in header},
               "columns": list(header),
               "rows": [{h: (float(v) if isinstance(v, (float, np.floating)) else v)
                         for h, v in zip(header, r)} for r in rows]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    else:
        lines = ["# units: " + "; ".join(f"{h} [{UNITS.get(h, '')}]" for h in header),
                 "# config: " + json.dumps(cfg, sort_keys=True)]
        for k, v in (extra or {}).items():
            lines.append(f"# {k}: " + json.dumps(v, sort_keys=True))
        lines.append(",".join(header))
        lines += [",".join(fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    if cfg["out"]:
        try:
            with open(cfg["out"], "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise ValidationError(f"cannot write {cfg['out']}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _bulk(cfg: dict) -> int:
    rows, cols = int(cfg["rows"]), int(cfg["cols"])
    if rows != cols:
        raise ValidationError("the survivor bulk must be square (rows == cols)")
    if cfg["boundary"] != "planar":
        raise ValidationError("region witnesses run on the planar code; use gap for the torus")
    return rows


def _system(cfg: dict, s: float):
    bulk, margin = _bulk(cfg), int(cfg["margin"])
    if cfg["state"] == "cluster":
        return ClusterSystem(s, bulk, margin)
    if cfg["state"] != "surface":
        raise ValidationError("state must be 'surface' or 'cluster'")
    return SurfaceCodeSystem(s, bulk, margin)


def _regions(cfg: dict, system) -> tuple[tuple, tuple]:
    """(A, B, C) for KP-type witnesses and (A, B, C, D) for Levin-Wen."""
    geom = system.geometry
    kp = lw = None
    if cfg["regions"]:
        # surface codes map cluster sites to survivors; the cluster state is indexed directly
        index_of = getattr(system, "index_from_cluster", system.lattice.index)
        masks = regions_from_json(cfg["regions"], index_of)
        if all(k in masks for k in "ABC"):
            kp = (masks["A"], masks["B"], masks["C"])
        if all(k in masks for k in ("LA", "LB", "LC", "LD")):
            lw = (masks["LA"], masks["LB"], masks["LC"], masks["LD"])
    if kp is None:
        kp = kp_regions(geom, radius=float(cfg["radius"]))
    if lw is None:
        lw = lw_regions(geom)
    return kp, lw


def cmd_tee(cfg: dict) -> None:
    grid = parse_range(cfg["log_s"])

    def point(ls: float):
        s, _, db = squeezing_conventions(float(np.exp(ls)))
        system = _system(cfg, s)
        kp, lw = _regions(cfg, system)
        # the cluster state has a q-p cross block, where log-negativity is not implemented
        tln = tln_kp(system.state, *kp) if system.state.block_form else float("nan")
        return (ls, s, db, tee_kp(system.state, *kp), tee_lw(system.state, *lw),
                tln, tee_upper_bound(s)[1],
                tmi_high_temp_limit(system.state, *kp))

    write_table(cfg, TEE_HEADER, pmap(point, grid, resolve_threads(cfg["threads"])))


def cmd_tmi(cfg: dict) -> None:
    grid = parse_range(cfg["log_s"])
    betas = parse_list(cfg["beta"]) if cfg["beta"] is not None else None
    kappas = None if betas else parse_list(cfg["kappa"])
    if kappas is not None and any(k < 1 for k in kappas):
        raise ValidationError("kappa must be at least 1")

    def point(ls: float):
        s = float(np.exp(ls))
        system = _system(cfg, s)
        kp, _ = _regions(cfg, system)
        limit = tmi_high_temp_limit(system.state, *kp)
        ks = kappas if kappas is not None else [kappa_from_beta(b, s) for b in betas]
        out = []
        for k in ks:
            state = ScaledState(system.state, k)
            bounds = tmi_wootton_bounds(state, *kp)
            out.append((ls, k, tmi(state, *kp), limit, bounds.lower, bounds.upper))
        return out

    blocks = pmap(point, grid, resolve_threads(cfg["threads"]))
    write_table(cfg, TMI_HEADER, [row for block in blocks for row in block])


def cmd_gap(cfg: dict) -> None:
    rows = []
    for n in parse_list(cfg["n"]):
        for m in parse_list(cfg["m"]):
            for s in parse_list(cfg["s"]):
                if n != int(n) or m != int(m):
                    raise ValidationError("torus sides must be integers")
                res = energy_gap(int(n), int(m), s)
                rows.append((int(n), int(m), s, res.gap, res.asymptotic, res.ratio))
    write_table(cfg, GAP_HEADER, rows)


def cmd_correlations(cfg: dict) -> None:
    grid = parse_range(cfg["log_s"])

    def point(ls: float):
        s = float(np.exp(ls))
        system = SurfaceCodeSystem(s, _bulk(cfg), int(cfg["margin"]))
        prof = correlation_profile(system, cfg["axis"], int(cfg["max_sep"]))
        c, xi = demko_constants(s)
        rows = [(ls, cfg["axis"], int(r), q, p, c * np.exp(-(r + 1) / xi))
                for r, q, p in zip(prof.separations, prof.values, prof.p_values)]
        fit = {"log_s": ls, "a": None, "xi_a": None, "b": None, "xi_b": None,
               "residual": prof.residual, "demko_max_ratio": prof.demko_max_ratio,
               "p_beyond_one_max": prof.p_beyond_one_max, "flags": list(prof.flags)}
        if prof.fit is not None:
            fit.update(zip(("a", "xi_a", "b", "xi_b"), prof.fit))
        return rows, fit

    results = pmap(point, grid, resolve_threads(cfg["threads"]))
    write_table(cfg, CORR_HEADER, [r for rows, _ in results for r in rows],
                {"fits": [f for _, f in results]})


def cmd_polymer(cfg: dict) -> None:
    if (cfg["alpha"] is None) == (cfg["lam"] is None):
        raise ValidationError("give exactly one of --alpha or --lambda")
    m, w = float(cfg["mass"]), float(cfg["omega"])
    if cfg["alpha"] is not None:
        base = OscillatorPairConfig.from_alpha(float(cfg["alpha"]), 0.0, m, w)
    else:
        base = OscillatorPairConfig(m, w, float(cfg["lam"]), 0.0)
    if cfg["source"] not in ("series", "closed_form"):
        raise ValidationError("source must be 'series' or 'closed_form'")
    rows = convergence_sweep(base, parse_list(cfg["mu_over_d"]), cfg["source"])
    write_table(cfg, SWEEP_HEADER, rows)


def cmd_survivors(cfg: dict) -> None:
    lat = ModeLattice(int(cfg["rows"]), int(cfg["cols"]), cfg["boundary"])
    _, surv = surface_code_pattern(lat)
    rows = [tuple(int(x) for x in line.split(",")) for line in surv.csv_rows()[1:]]
    write_table(cfg, SURVIVOR_HEADER, rows)


def cmd_selftest(cfg: dict) -> int:
    checks = run_selftest(int(cfg["seed"]))
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_NUMERICAL if failed else EXIT_OK


COMMANDS = {"tee": cmd_tee, "tmi": cmd_tmi, "gap": cmd_gap, "correlations": cmd_correlations,
            "polymer": cmd_polymer, "survivors": cmd_survivors, "selftest": cmd_selftest}


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # defaults stay None so that a config file can fill them in
    common.add_argument("--config", help="JSON file of option values; flags override it")
    common.add_argument("--rows", type=int)
    common.add_argument("--cols", type=int)
    common.add_argument("--boundary", choices=["planar", "toroidal"])
    common.add_argument("--margin", type=int)
    common.add_argument("--log-s", dest="log_s", help="start:stop:step or comma list")
    common.add_argument("--kappa", help="comma list of thermal scalings")
    common.add_argument("--beta", help="comma list of inverse temperatures (overrides --kappa)")
    common.add_argument("--regions", help="JSON file of [row, col] masks")
    common.add_argument("--radius", type=float, help="Kitaev-Preskill disk radius")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--threads", type=int, help="worker threads (env CVTOPO_THREADS)")
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="cvtopo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cvtopo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("tee", "tmi"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--state", choices=["surface", "cluster"])
    sub.add_parser("survivors", parents=[common])
    sub.add_parser("selftest", parents=[common])
    p = sub.add_parser("gap", parents=[common])
    p.add_argument("--n", help="comma list of torus sides")
    p.add_argument("--m", help="comma list of torus sides")
    p.add_argument("--s", help="comma list of squeezing factors")
    p = sub.add_parser("correlations", parents=[common])
    p.add_argument("--axis", choices=["u", "v"])
    p.add_argument("--max-sep", dest="max_sep", type=int)
    p = sub.add_parser("polymer", parents=[common])
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mass", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--mu-over-d", dest="mu_over_d", help="comma list")
    p.add_argument("--source", choices=["series", "closed_form"])
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in cfg and value is not None:
            cfg[key] = value
    cfg["command"] = args.command
    return cfg


def run(cfg: dict) -> int:
    result = COMMANDS[cfg["command"]](cfg)
    return EXIT_OK if result is None else result


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(resolve_config(args))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalAssertionError as exc:
        print(f"numerical check failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CVTopoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
