"""Command-line harness.

Exit codes: 0 on success, 1 on configuration errors (bad flags, bad
config files, invalid parameter combinations), 2 on numeric failures
(continuation stalled, singular Jacobian, non-compact input, ...).

Inputs to geometry commands are either a catalog entry name (see
``polyvol catalog``) or a path to a saved realization file.
"""

from __future__ import annotations

import functools
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import io
from .catalog import catalog_build, catalog_entry
from .deform import (DeformationFamily, default_chart, run_family,
                     stoker_compare)
from .errors import ConfigError, PolyvolError
from .quantum import (RootParams, color_sequence, eval_trivalent_bracket,
                      volconj_slopes, yokota_log, yokota_value)
from .report import CsvReport, load_config, render_series_plot
from .volume import schlafli_rate, volume_mc, volume_quadrature


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(1)
        except PolyvolError as exc:
            click.echo(f"numeric failure ({type(exc).__name__}): {exc}",
                       err=True)
            sys.exit(2)
    return wrapper


def _load_realization(spec: str):
    path = Path(spec)
    if path.exists():
        try:
            return io.load(path)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"cannot parse realization {spec}: {exc}")
    try:
        return catalog_entry(spec).realization
    except KeyError:
        raise ConfigError(
            f"{spec!r} is neither a readable file nor a catalog entry")


def _merge_config(config_path, explicit: dict, casts: dict) -> dict:
    """Config file supplies values for any option left at None."""
    out = dict(explicit)
    if config_path is not None:
        cfg = load_config(config_path)
        unknown = set(cfg) - set(casts)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, raw in cfg.items():
            if out.get(key) is None:
                try:
                    out[key] = casts[key](raw)
                except ValueError:
                    raise ConfigError(f"config key {key}: bad value {raw!r}")
    return out


def _require_odd_r(r: int) -> None:
    if r % 2 == 0 or r < 5:
        raise ConfigError(f"r must be odd and at least 5 (got {r})")


def _out_path(out_dir, name: str) -> Path | None:
    if out_dir is None:
        return None
    return Path(out_dir) / name


def _emit(report: CsvReport, out_dir, name: str) -> None:
    if out_dir is not None:
        path = report.write(Path(out_dir) / name)
        click.echo(f"wrote {path}")
    else:
        click.echo(report.render(), nl=False)


@click.group()
def main():
    """Compact hyperbolic polyhedra: realizations, deformations,
    volumes, and quantum invariants."""


@main.command()
@click.argument("input_spec", metavar="INPUT")
@_handle_errors
def check(input_spec):
    """Classify a realization's 1-skeleton (strict / weak / invalid)."""
    r = _load_realization(input_spec)
    report = r.check_membership()
    click.echo(report.pretty())


@main.command()
@click.argument("input_spec", metavar="INPUT")
@click.option("--method", type=click.Choice(["quadrature", "mc", "both"]),
              default="quadrature", show_default=True)
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="flat key=value file supplying unset options")
@click.option("--tol", type=float, default=None, help="quadrature tolerance")
@click.option("--samples", type=int, default=None, help="MC sample count")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@_handle_errors
def volume(input_spec, method, config_path, tol, samples, seed, out_dir):
    """Hyperbolic volume by quadrature and/or Monte Carlo."""
    opts = _merge_config(config_path,
                         {"tol": tol, "samples": samples, "seed": seed},
                         {"tol": float, "samples": int, "seed": int})
    tol = opts["tol"] if opts["tol"] is not None else 1e-6
    samples = opts["samples"] if opts["samples"] is not None else 1_000_000
    seed = opts["seed"] if opts["seed"] is not None else 0
    if tol <= 0:
        raise ConfigError(f"tol must be positive (got {tol})")
    if samples <= 0:
        raise ConfigError(f"samples must be positive (got {samples})")

    r = _load_realization(input_spec)
    params = {"input": input_spec, "method": method, "tol": tol,
              "samples": samples}
    report = CsvReport(["method", "value", "error_bound", "samples"],
                       params, seed=seed)
    estimates = []
    if method in ("quadrature", "both"):
        estimates.append(volume_quadrature(r, tol=tol))
    if method in ("mc", "both"):
        estimates.append(volume_mc(r, n_samples=samples, seed=seed))
    for est in estimates:
        report.add(est.method, est.value, est.error_bound, est.samples)
        click.echo(f"{est.method}: {est.value:.12g} "
                   f"(error bound {est.error_bound:.3g})")
    _emit(report, out_dir, "volume.csv")


@main.command()
@click.argument("input_spec", metavar="INPUT")
@click.option("--family", type=click.Choice(["scale_one_edge",
                                             "add_diagonal"]),
              default="scale_one_edge", show_default=True)
@click.option("--edge", type=int, default=None,
              help="edge index; defaults to the marked edge if present")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--t0", type=float, default=None)
@click.option("--t1", type=float, default=None)
@click.option("--steps", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--plot", is_flag=True, help="render a PNG beside the CSV")
@_handle_errors
def deform(input_spec, family, edge, config_path, t0, t1, steps, out_dir,
           plot):
    """Continuation along a one-parameter dihedral-angle family."""
    opts = _merge_config(
        config_path,
        {"edge": edge, "t0": t0, "t1": t1, "steps": steps},
        {"edge": int, "t0": float, "t1": float, "steps": int})
    edge, t0, t1, steps = (opts["edge"], opts["t0"], opts["t1"],
                           opts["steps"])
    base = _load_realization(input_spec)
    if edge is None:
        marked = base.graph.marked_edge
        if marked is None:
            raise ConfigError("--edge is required for unmarked skeletons")
        edge = marked
    if not 0 <= edge < base.graph.n_edges:
        raise ConfigError(f"edge {edge} out of range "
                          f"(graph has {base.graph.n_edges} edges)")
    if t0 is None or t1 is None:
        t0, t1 = (0.8, 1.0) if family == "scale_one_edge" else (0.0, 0.2)
    if steps is None:
        steps = 16
    if steps <= 0:
        raise ConfigError(f"steps must be positive (got {steps})")

    fam = DeformationFamily(base, family, edge, (t0, t1))
    record = run_family(fam, steps)

    n_e = base.graph.n_edges
    columns = (["t", "status", "schlafli_rate"]
               + [f"angle_{e}" for e in range(n_e)]
               + [f"length_{e}" for e in range(n_e)])
    params = {"input": input_spec, "family": family, "edge": edge,
              "t0": t0, "t1": t1, "steps": steps}
    report = CsvReport(columns, params)
    for i, t in enumerate(record.ts):
        rate = schlafli_rate(record.lengths[i], record.angle_rates[i])
        report.add(float(t), record.statuses[i].value, rate,
                   *map(float, record.angles[i]),
                   *map(float, record.lengths[i]))
    _emit(report, out_dir, "deform.csv")
    if plot and out_dir is not None:
        path = render_series_plot(
            _out_path(out_dir, "deform.png"), record.ts,
            {f"edge {e}": record.angles[:, e] for e in range(n_e)},
            "t", "dihedral angle (rad)", f"{family} on {input_spec}")
        click.echo(f"wrote {path}")
    elif plot:
        raise ConfigError("--plot requires --out")


@main.command()
@click.argument("input_a", metavar="INPUT_A")
@click.argument("input_b", metavar="INPUT_B")
@click.option("--tol", type=float, default=1e-9, show_default=True,
              help="max allowed dihedral-angle discrepancy")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@_handle_errors
def stoker(input_a, input_b, tol, out_dir):
    """Compare two realizations with equal skeleta and angles:
    edge lengths, face diagonals, face congruences, global isometry."""
    if tol <= 0:
        raise ConfigError(f"tol must be positive (got {tol})")
    r1 = _load_realization(input_a)
    r2 = _load_realization(input_b)
    rep = stoker_compare(r1, r2, eps_theta=tol)

    params = {"input_a": input_a, "input_b": input_b, "tol": tol}
    report = CsvReport(["edge", "length_diff"], params)
    for e, d in enumerate(rep.edge_length_diffs):
        report.add(e, float(d))
    report.note(f"max_edge_diff: {rep.max_edge_diff:.17g}")
    max_diag = max(rep.diagonal_diffs.values(), default=0.0)
    report.note(f"max_diagonal_diff: {max_diag:.17g}")
    report.note(f"all_faces_congruent: {rep.all_faces_congruent()}")
    report.note(f"isometry_max_displacement: "
                f"{rep.isometry_max_displacement:.17g}")
    click.echo(f"max edge-length difference:  {rep.max_edge_diff:.3e}")
    click.echo(f"all faces congruent:         {rep.all_faces_congruent()}")
    click.echo(f"isometry max displacement:   "
               f"{rep.isometry_max_displacement:.3e}")
    _emit(report, out_dir, "stoker.csv")


@main.command()
@click.argument("input_spec", metavar="INPUT")
@click.option("--r", "r_value", type=int, required=True,
              help="order of the root of unity (odd, >= 5)")
@click.option("--colors", type=str, default=None,
              help="comma-separated even edge colors; defaults to the "
                   "geometric coloring from the dihedral angles")
@click.option("--seed", type=int, default=None,
              help="randomize the skein-reduction order")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@_handle_errors
def yokota(input_spec, r_value, colors, seed, out_dir):
    """Quantum invariant Y_r of a realization's colored 1-skeleton."""
    _require_odd_r(r_value)
    r = _load_realization(input_spec)
    rp = RootParams(r_value)
    g = r.graph
    if colors is not None:
        try:
            cols = np.array([int(c) for c in colors.split(",")], dtype=int)
        except ValueError:
            raise ConfigError(f"bad --colors value {colors!r}")
        if len(cols) != g.n_edges:
            raise ConfigError(f"expected {g.n_edges} colors, "
                              f"got {len(cols)}")
    else:
        cols = color_sequence(rp, r.angle_vector(), g)

    bracket = eval_trivalent_bracket(rp, g, cols, order_seed=seed)
    log_y = yokota_log(rp, g, cols)
    value = yokota_value(rp, g, cols)
    slope = math.pi * log_y / r_value

    params = {"input": input_spec, "r": r_value,
              "colors": ",".join(map(str, cols))}
    report = CsvReport(["r", "log_y", "value", "slope",
                        "bracket_logmag", "bracket_phase"],
                       params, seed=seed)
    report.add(r_value, log_y, value, slope,
               bracket.logmag, bracket.phase)
    report.note("colors: " + " ".join(map(str, cols)))
    click.echo(f"colors:        {' '.join(map(str, cols))}")
    click.echo(f"log Y_{r_value} = {log_y:.12g}")
    click.echo(f"(pi/r) log Y = {slope:.12g}")
    _emit(report, out_dir, "yokota.csv")


@main.command()
@click.argument("input_spec", metavar="INPUT")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--r-min", type=int, default=None)
@click.option("--r-max", type=int, default=None)
@click.option("--r-step", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--plot", is_flag=True, help="render a PNG beside the CSV")
@_handle_errors
def volconj(input_spec, config_path, r_min, r_max, r_step, out_dir, plot):
    """Growth rate (pi/r) log Y_r over a sweep of odd r, its 1/r -> 0
    extrapolation, and the quadrature volume for comparison."""
    opts = _merge_config(
        config_path,
        {"r_min": r_min, "r_max": r_max, "r_step": r_step},
        {"r_min": int, "r_max": int, "r_step": int})
    r_min = opts["r_min"] if opts["r_min"] is not None else 51
    r_max = opts["r_max"] if opts["r_max"] is not None else 201
    r_step = opts["r_step"] if opts["r_step"] is not None else 10
    if r_step <= 0:
        raise ConfigError(f"r-step must be positive (got {r_step})")
    if r_max < r_min:
        raise ConfigError(f"empty sweep: r-max {r_max} < r-min {r_min}")
    rs = list(range(r_min, r_max + 1, r_step))
    for r in rs:
        _require_odd_r(r)
    if len(rs) < 4:
        raise ConfigError(f"sweep has only {len(rs)} values of r; "
                          "at least 4 are needed for the extrapolation")

    realization = _load_realization(input_spec)
    fit = volconj_slopes(realization, rs)
    vol = volume_quadrature(realization, tol=1e-8)

    params = {"input": input_spec, "r_min": r_min, "r_max": r_max,
              "r_step": r_step}
    report = CsvReport(["r", "slope"], params)
    for r, s in zip(fit.r_values, fit.slopes):
        report.add(int(r), float(s))
    report.note(f"extrapolated: {fit.extrapolated:.17g}")
    report.note(f"fit_coeffs: {fit.fit_coeffs[0]:.17g} "
                f"{fit.fit_coeffs[1]:.17g}")
    report.note(f"volume_quadrature: {vol.value:.17g}")
    click.echo(f"extrapolated growth rate: {fit.extrapolated:.8g}")
    click.echo(f"quadrature volume:        {vol.value:.8g}")
    _emit(report, out_dir, "volconj.csv")
    if plot and out_dir is not None:
        xs = [1.0 / r for r in fit.r_values]
        path = render_series_plot(
            _out_path(out_dir, "volconj.png"), xs,
            {"(pi/r) log Y_r": fit.slopes,
             "volume": [vol.value] * len(xs)},
            "1/r", "growth rate", f"volume conjecture sweep: {input_spec}")
        click.echo(f"wrote {path}")
    elif plot:
        raise ConfigError("--plot requires --out")


@main.command()
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="also write each entry as a realization file")
@_handle_errors
def catalog(out_dir):
    """List the built-in catalog (and optionally export its entries)."""
    entries = catalog_build(verify=True)
    report = CsvReport(["name", "status", "vertices", "edges", "faces",
                        "symmetries"], {"command": "catalog"})
    for e in entries:
        g = e.realization.graph
        report.add(e.name, e.expected_status.value, g.n_vertices,
                   g.n_edges, len(g.faces), e.symmetry_count)
        click.echo(f"{e.name:14s} {e.expected_status.value:15s} {e.note}")
        if out_dir is not None:
            path = Path(out_dir) / f"{e.name}.poly"
            path.parent.mkdir(parents=True, exist_ok=True)
            io.save(e.realization, path)
    _emit(report, out_dir, "catalog.csv")


if __name__ == "__main__":
    main()
