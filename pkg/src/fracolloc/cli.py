"""Command-line front end: table reproductions and node/matrix/solver dumps as CSV.

Exit codes: 0 success, 2 invalid parameters, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import experiments as ex
from .basis import FracBasis
from .errors import FracCollocError, NumericalError, ParameterError
from .operators import advdiff_matrix, frac_diff_matrix
from .solvers import (
    BvpProblem,
    GridChoice,
    OdeProblem,
    bvp_collocation_grid,
    max_norm_error,
    ode_collocation_grid,
    reference_solution,
    solve_fractional_bvp,
    solve_fractional_ode,
)
from .superconsistency import ChiFunction, Family

log = logging.getLogger("fracolloc")

COMMANDS = ("table1", "table2", "table3", "fig1", "nodes", "grid", "matrix", "solve")
EXIT_OK, EXIT_PARAM, EXIT_NUMERIC = 0, 2, 3

DEFAULTS = {
    "N": None,
    "N_range": None,
    "sigma": None,
    "K": None,
    "mu": None,
    "family": "mu",
    "choices": None,
    "out": None,
    "mesh_points": None,
    "seed": None,
    "points": "nodes",
    "labels": "nodes",
    "N_ref": 50,
    "timing": False,
}


def fmt(v):
    return "NA" if v is None else f"{v:.17g}"


def parse_int_list(text):
    """``"4:15"`` (inclusive), ``"4..15"`` or ``"5,10,20"``."""
    text = str(text).strip()
    try:
        for sep in (":", ".."):
            if sep in text:
                lo, hi = text.split(sep)
                return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"cannot read an integer list from {text!r}") from None


def parse_float_list(text):
    """``"0.1,0.5"`` or ``"lo:hi:step"`` (inclusive)."""
    text = str(text).strip()
    try:
        if ":" in text:
            lo, hi, step = (float(v) for v in text.split(":"))
            count = int(round((hi - lo) / step)) + 1
            return [round(lo + k * step, 12) for k in range(count)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"cannot read a number list from {text!r}") from None


def read_config(path):
    """``key=value`` lines; ``#`` starts a comment; dashes in keys are read as underscores."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ParameterError(f"{path}:{lineno}: expected key=value")
                key, value = (s.strip() for s in line.split("=", 1))
                key = key.lstrip("-").replace("-", "_")
                if key not in DEFAULTS and key != "command":
                    raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = value
    except OSError as exc:
        raise ParameterError(f"cannot read config file: {exc}") from None
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="fracolloc", description=__doc__.splitlines()[0])
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--N", type=int)
    p.add_argument("--N-range", dest="N_range", help="4:15, 4..15 or 5,10,20")
    p.add_argument("--sigma", help="order, or a list for fig1 (0.1,0.5 or lo:hi:step)")
    p.add_argument("--K", type=float)
    p.add_argument("--mu", help="exponent, or a list for nodes (0.1,0.5 or lo:hi:step)")
    p.add_argument("--family", choices=[f.value for f in Family])
    p.add_argument("--choices", help="comma-separated grid choices, e.g. C1,C3")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--mesh-points", dest="mesh_points", type=int)
    p.add_argument("--seed", type=int, help="reserved, has no effect")
    p.add_argument("--points", choices=("nodes", "mesh"), help="where table errors are measured")
    p.add_argument("--labels", choices=("nodes", "size"), help="table1: N counts all nodes including -1, or N is the matrix size")
    p.add_argument("--N-ref", dest="N_ref", type=int, help="reference resolution for errors")
    p.add_argument("--timing", action="store_true", default=None, help="add runtime_ms to solve output")
    return p


def resolve(args):
    """Merge defaults < config file < flags."""
    cfg = dict(DEFAULTS)
    cfg["command"] = None
    if args.config:
        cfg.update(read_config(args.config))
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            cfg[key] = value
    if cfg["command"] not in COMMANDS:
        raise ParameterError(f"--command must be one of {', '.join(COMMANDS)}")
    for key, cast in (("N", int), ("K", float), ("mesh_points", int), ("N_ref", int), ("seed", int)):
        if cfg[key] is not None:
            try:
                cfg[key] = cast(cfg[key])
            except ValueError:
                raise ParameterError(f"invalid value for {key}: {cfg[key]!r}") from None
    if isinstance(cfg["timing"], str):
        cfg["timing"] = cfg["timing"].lower() in ("1", "true", "yes")
    if cfg["N"] is not None and cfg["N"] < 2:
        raise ParameterError(f"N must be at least 2, got {cfg['N']}")
    if cfg["N_ref"] < 2:
        raise ParameterError("N_ref must be at least 2")
    if cfg["mesh_points"] is not None and cfg["mesh_points"] < 2:
        raise ParameterError("mesh_points must be at least 2")
    return cfg


def _single(cfg, key, default, lo=0.0, hi=1.0):
    value = cfg[key]
    if value is None:
        return default
    values = parse_float_list(value)
    if len(values) != 1:
        raise ParameterError(f"--{key} takes a single value for this command")
    if not lo < values[0] < hi:
        raise ParameterError(f"{key} must lie in ({lo}, {hi}), got {values[0]}")
    return values[0]


def _N_list(cfg, default):
    if cfg["N_range"] is not None:
        Ns = parse_int_list(cfg["N_range"])
    elif cfg["N"] is not None:
        Ns = [cfg["N"]]
    else:
        Ns = list(default)
    if not Ns or min(Ns) < 2:
        raise ParameterError("every N must be at least 2")
    return Ns


def _choices(cfg, default):
    if cfg["choices"] is None:
        return [GridChoice(c) for c in default]
    names = [c.strip().upper() for c in str(cfg["choices"]).split(",") if c.strip()]
    valid = [c.value for c in GridChoice if c is not GridChoice.REFERENCE]
    if not names or any(n not in valid for n in names):
        raise ParameterError(f"grid choices must be among {','.join(valid)}, got {cfg['choices']!r}")
    return [GridChoice(n) for n in names]


def cmd_table1(cfg):
    mu = _single(cfg, "mu", 0.5)
    rows = ex.table1_rows(_N_list(cfg, ex.TABLE1_N), mu, labels=cfg["labels"])
    return ["N,cond2"] + [f"{N},{fmt(c)}" for N, c in rows], EXIT_OK


def _error_table(rows, names):
    lines = ["N," + ",".join(names)]
    status = EXIT_OK
    for row in rows:
        lines.append(f"{row.N}," + ",".join(fmt(e) for e in row.errors))
        if not row.ok:
            status = EXIT_NUMERIC
    return lines, status


def _choice_columns(choices):
    return [f"err_choice{c.value[1:]}" for c in choices]


def cmd_table2(cfg):
    sigma = _single(cfg, "sigma", 0.5)
    choices = _choices(cfg, ("C1", "C2", "C3"))
    if not all(c.is_ode for c in choices):
        raise ParameterError("table2 accepts choices C1, C2, C3")
    rows = ex.table2_rows(
        _N_list(cfg, ex.TABLE_N), sigma, [c.value for c in choices], cfg["N_ref"], cfg["points"], cfg["mesh_points"] or 1001
    )
    return _error_table(rows, _choice_columns(choices))


def cmd_table3(cfg):
    sigma = _single(cfg, "sigma", 0.5)
    K = 10.0 if cfg["K"] is None else cfg["K"]
    choices = _choices(cfg, ("C4", "C5", "C6"))
    if not all(c.is_bvp for c in choices):
        raise ParameterError("table3 accepts choices C4, C5, C6")
    rows = ex.table3_rows(
        _N_list(cfg, ex.TABLE_N),
        sigma,
        K,
        [c.value for c in choices],
        cfg["N_ref"],
        cfg["points"],
        cfg["mesh_points"] or 1001,
    )
    return _error_table(rows, _choice_columns(choices))


def cmd_fig1(cfg):
    N = cfg["N"] or 19
    sigmas = parse_float_list(cfg["sigma"]) if cfg["sigma"] is not None else list(ex.FIG1_SIGMAS + ex.FIG1_SIGMAS_HIGH)
    mesh = np.linspace(-1.0, 1.0, cfg["mesh_points"] or 201)
    mesh, cols = ex.fig1_columns(N, sigmas, mesh)
    lines = ["x," + ",".join(f"sigma_{s:g}" for s in sigmas)]
    for i, x in enumerate(mesh):
        lines.append(fmt(x) + "," + ",".join(fmt(cols[s][i]) for s in sigmas))
    return lines, EXIT_OK


def cmd_nodes(cfg):
    N = cfg["N"] or 5
    mus = parse_float_list(cfg["mu"]) if cfg["mu"] is not None else parse_float_list("0:1:0.1")
    if any(not 0.0 <= m <= 1.0 for m in mus):
        raise ParameterError("mu values must lie in [0, 1]")
    lines = ["family,N,mu,kind,index,value"]
    status = EXIT_OK
    for s in ex.node_sets(cfg["family"], N, mus, cfg["K"]):
        if s.nodes is None:
            log.warning("%s", s.message)
            lines.append(f"{s.family},{s.N},{s.mu:g},{s.kind},NA,NA")
            status = EXIT_NUMERIC
            continue
        lines.extend(f"{s.family},{s.N},{s.mu:g},{s.kind},{i},{fmt(v)}" for i, v in enumerate(s.nodes))
    return lines, status


def cmd_grid(cfg):
    N = cfg["N"] or 10
    mu = 0.5 if cfg["mu"] is None else parse_float_list(cfg["mu"])[0]
    if not 0.0 <= mu <= 1.0:
        raise ParameterError(f"mu must lie in [0, 1], got {mu}")
    grid = ChiFunction(cfg["family"], N, mu).representation_grid()
    return ["index,node"] + [f"{i},{fmt(v)}" for i, v in enumerate(grid.nodes)], EXIT_OK


def _problem_setup(cfg, default_choice):
    N = cfg["N"] or 8
    sigma = _single(cfg, "sigma", 0.5)
    choices = _choices(cfg, (default_choice,))
    return N, sigma, choices


def cmd_matrix(cfg):
    N, sigma, choices = _problem_setup(cfg, "C3")
    if len(choices) != 1:
        raise ParameterError("matrix takes exactly one grid choice")
    choice = choices[0]
    mu = 1.0 - sigma
    rep = ChiFunction(Family.MU, N, mu).representation_grid()
    basis = FracBasis.build(rep, mu)
    if choice.is_ode:
        M = frac_diff_matrix(basis, ode_collocation_grid(N, sigma, choice, rep), sigma)
    else:
        K = 10.0 if cfg["K"] is None else cfg["K"]
        M = advdiff_matrix(basis, bvp_collocation_grid(N, sigma, K, choice, rep), sigma, K)
    return M.to_csv().rstrip("\n").split("\n"), EXIT_OK


def cmd_solve(cfg):
    """Solve the table problems (ODE for C1-C3, BVP for C4-C6) and report errors."""
    N, sigma, choices = _problem_setup(cfg, "C3")
    K = 10.0 if cfg["K"] is None else cfg["K"]
    header = "N,sigma,K,choice,error" + (",runtime_ms" if cfg["timing"] else "")
    lines, status = [header], EXIT_OK
    refs = {}
    for choice in choices:
        kind = "ode" if choice.is_ode else "bvp"
        if kind not in refs:
            problem = OdeProblem(ex.table2_rhs, sigma) if kind == "ode" else BvpProblem(ex.table3_rhs, sigma, K)
            refs[kind] = (problem, reference_solution(problem, cfg["N_ref"]))
        problem, ref = refs[kind]
        k_out = 0.0 if kind == "ode" else K
        try:
            if kind == "ode":
                report = solve_fractional_ode(problem, sigma, N, choice)
            else:
                report = solve_fractional_bvp(problem, sigma, K, N, choice)
            err = max_norm_error(report, ref, cfg["points"], cfg["mesh_points"] or 1001)
            timing = f",{report.runtime_ms:.3f}" if cfg["timing"] else ""
        except NumericalError as exc:
            log.warning("N=%d %s failed: %s", N, choice.value, exc)
            err, timing, status = None, ",NA" if cfg["timing"] else "", EXIT_NUMERIC
        lines.append(f"{N},{fmt(sigma)},{fmt(k_out)},{choice.value},{fmt(err)}{timing}")
    return lines, status


HANDLERS = {
    "table1": cmd_table1,
    "table2": cmd_table2,
    "table3": cmd_table3,
    "fig1": cmd_fig1,
    "nodes": cmd_nodes,
    "grid": cmd_grid,
    "matrix": cmd_matrix,
    "solve": cmd_solve,
}


def _configure_logging():
    level = os.environ.get("FRACOLLOC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def run(argv=None):
    """Run one command; returns ``(lines, exit_code)``."""
    args = build_parser().parse_args(argv)
    cfg = resolve(args)
    log.debug("config: %s", cfg)
    return HANDLERS[cfg["command"]](cfg), cfg["out"]


def main(argv=None):
    _configure_logging()
    try:
        (lines, status), out = run(argv)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except FracCollocError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
