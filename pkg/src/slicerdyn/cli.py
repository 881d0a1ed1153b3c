"""Command-line front end.

Every command writes plot-ready CSV files plus ``manifest.json`` into the
output directory (``--out``, else ``$SLICERDYN_OUTPUT_DIR``, else ``.``).
``slicerdyn replay manifest.json`` regenerates the outputs and checks their
digests.

Exit codes: 0 ok, 1 failed check, 2 usage error, 3 wall-clock budget exceeded.
"""

from __future__ import annotations

import configparser
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import click
import numpy as np

from . import __version__, analysis, closed_form, ensemble, levy, measure
from .io import MANIFEST_NAME, read_manifest, write_csv, write_manifest
from .slicer import SlicerFamily

OUTPUT_ENV = "SLICERDYN_OUTPUT_DIR"
EXIT_CHECK = 1
EXIT_BUDGET = 3

class FiniteRange(click.FloatRange):
    """FloatRange that also refuses nan and inf."""

    def convert(self, value, param, ctx):
        v = super().convert(value, param, ctx)
        if not math.isfinite(v):
            self.fail(f"{value!r} is not a finite number.", param, ctx)
        return v


ALPHA = FiniteRange(min=0.0, max=2.0, min_open=True)
POSITIVE = FiniteRange(min=0.0, min_open=True)


class BudgetExceeded(click.ClickException):
    exit_code = EXIT_BUDGET


def _read_config(path: str) -> dict:
    """Flat ``key = value`` file; a section header is optional."""
    text = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser()
    parser.optionxform = str
    parser.read_string("[config]\n" + text)
    out = {}
    for section in parser.sections():
        for k, v in parser.items(section):
            out[k.replace("-", "_")] = v
    return out


def _config_defaults(group: click.Group, values: dict) -> dict:
    """Per-command default maps; unknown keys are ignored, lists split on commas."""
    maps = {}
    for name, cmd in group.commands.items():
        own = {}
        for param in cmd.params:
            if param.name in values:
                v = values[param.name]
                own[param.name] = [s.strip() for s in v.split(",")] if getattr(param, "multiple", False) else v
        maps[name] = own
    return maps


def _out_dir(out: str | None) -> Path:
    path = Path(out or os.environ.get(OUTPUT_ENV) or ".")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _check_budget(start: float, max_seconds: float | None) -> None:
    if max_seconds is not None and time.perf_counter() - start > max_seconds:
        raise BudgetExceeded(f"wall-clock budget of {max_seconds:g} s exceeded")


# Command bodies: params dict in, written files out. Replay calls these.

def _slicer_dist(params: dict, out: Path) -> list[Path]:
    alpha, n = params["alpha"], params["n"]
    dist = closed_form.coarse_distribution(alpha, n)
    header = ["j", "mass"]
    cols = [dist.cells, dist.mass]
    if params.get("tail"):
        header.append("tail")
        c = params.get("tail_c")
        cols.append(closed_form.asymptotic_tail(alpha, np.abs(dist.cells), c))
    files = [write_csv(out / "slicer_dist.csv", header, zip(*cols))]
    if params.get("endpoints"):
        occ = measure.evolve_to(SlicerFamily(alpha), n)
        files.append(write_csv(out / "slicer_occupancy.csv", ["cell", "left_endpoint", "right_endpoint"],
                               measure.endpoint_rows(occ)))
    return files


def _moment_rows(alpha: float, ns: np.ndarray, p: int):
    values = closed_form.moment_series(alpha, ns, p)
    log_case = alpha == 2.0 and p == 2
    for n, v in zip(ns, values):
        row = [int(n), p, float(v), float(v) / float(n) ** (p - alpha) if not log_case else math.nan]
        if alpha == 2.0:
            row.append(float(v) / math.log(n) if n > 1 else math.nan)
        yield row


def _slicer_moments(params: dict, out: Path) -> list[Path]:
    alpha = params["alpha"]
    ns = analysis.geometric_steps(params["n_max"], params["points"])
    header = ["n", "p", "moment", "normalized"] + (["moment_over_log_n"] if alpha == 2.0 else [])
    rows = [r for p in params["p"] for r in _moment_rows(alpha, ns, p)]
    name = params.get("_name", "slicer_moments.csv")
    return [write_csv(out / name, header, rows)]


def _slicer_msd(params: dict, out: Path) -> list[Path]:
    return _slicer_moments({**params, "p": [2], "_name": "slicer_msd.csv"}, out)


def _mc(params: dict, out: Path) -> list[Path]:
    times = analysis.geometric_steps(params["n"], params["points"]) if params["n"] > 0 else np.array([0])
    cfg = ensemble.EnsembleConfig(params["alpha"], params["N"], params["n"], params["seed"],
                                  tuple(int(t) for t in times))
    hists = ensemble.run_ensemble(cfg, threads=params.get("threads"))
    final = hists[-1]
    files = [write_csv(out / "mc_histogram.csv", ["j", "count", "frequency"],
                       zip(final.cells, final.counts, final.frequencies())),
             write_csv(out / "mc_msd.csv", ["n", "msd"], ensemble.msd_series(cfg, hists))]
    rows = [(n, p, v) for p in params["p"] for n, v in ensemble.empirical_moment(cfg, p, hists)]
    files.append(write_csv(out / "mc_moments.csv", ["n", "p", "moment"], rows))
    return files


def _levy(params: dict, out: Path) -> list[Path]:
    cfg = levy.WalkConfig.geometric(params["t_max"], points=params["points"], n_env=params["n_env"],
                                    n_walkers=params["n_walkers"], velocity=params["v"],
                                    seed=params["seed"])
    run = levy.run_walks(cfg, params["beta"], params["r0"], threads=params.get("threads"))
    rows = [(t, p, m) for p in params["p"] for t, m in zip(run.times, run.moment(p))]
    return [write_csv(out / "levy_moments.csv", ["t", "p", "moment"], rows),
            write_csv(out / "levy_visited.csv", ["t", "n_visited"], zip(run.times, run.mean_visits()))]


def _compare(params: dict, out: Path) -> list[Path]:
    budget = analysis.LevyBudget(t_max=params["t_max"], n_env=params["n_env"],
                                 n_walkers=params["n_walkers"], r0=params["r0"],
                                 velocity=params["v"], seed=params["seed"], points=params["points"],
                                 slicer_n_max=params["slicer_n_max"])
    report = analysis.compare_slicer_levy(params["beta"], params["p"], budget)
    json_path = out / "compare_report.json"
    json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    txt_path = out / "compare_report.txt"
    txt_path.write_text(report.to_table() + "\n", encoding="utf-8")
    click.echo(report.to_table())
    return [json_path, txt_path]


COMMANDS = {
    "slicer-dist": _slicer_dist,
    "slicer-msd": _slicer_msd,
    "slicer-moments": _slicer_moments,
    "mc": _mc,
    "levy": _levy,
    "compare": _compare,
}

# parameters that change neither results nor outputs
_VOLATILE = {"threads", "max_seconds", "out"}


def execute(command: str, params: dict, out_dir: Path, max_seconds: float | None = None) -> Path:
    """Run a command body, enforce the budget, write the manifest."""
    start = time.perf_counter()
    files = COMMANDS[command](params, out_dir)
    _check_budget(start, max_seconds)
    recorded = {k: v for k, v in params.items() if k not in _VOLATILE and not k.startswith("_")}
    return write_manifest(out_dir, command, recorded, files, __version__)


@click.group()
@click.version_option(__version__, prog_name="slicerdyn")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Flat key = value file supplying defaults; flags take precedence.")
@click.pass_context
def main(ctx, config_path):
    """Slicer map lattice and quenched Lévy walks."""
    if config_path:
        ctx.default_map = _config_defaults(ctx.command, _read_config(config_path))


def _common(f):
    f = click.option("--out", type=click.Path(file_okay=False), default=None,
                     help=f"Output directory (default ${OUTPUT_ENV} or .).")(f)
    f = click.option("--max-seconds", type=POSITIVE, default=None,
                     help="Wall-clock cap; exit code 3 when exceeded.")(f)
    return f


def _run(command: str, params: dict):
    out = _out_dir(params.pop("out"))
    max_seconds = params.pop("max_seconds")
    path = execute(command, params, out, max_seconds)
    click.echo(f"wrote {path}", err=True)


@main.command("slicer-dist")
@click.option("--alpha", type=ALPHA, required=True)
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--tail/--no-tail", default=False, help="Add the asymptotic tail column.")
@click.option("--tail-c", type=POSITIVE, default=None, help="Tail amplitude (default 2*alpha).")
@click.option("--endpoints/--no-endpoints", default=False,
              help="Also export exact interval endpoints per cell.")
@_common
def slicer_dist(**params):
    """Coarse-grained distribution after N steps."""
    _run("slicer-dist", params)


@main.command("slicer-msd")
@click.option("--alpha", type=ALPHA, required=True)
@click.option("--n-max", type=click.IntRange(min=1), required=True)
@click.option("--points", type=click.IntRange(min=2), default=None,
              help="Grid size (default: 24 per decade).")
@_common
def slicer_msd(**params):
    """Exact mean square displacement on geometric steps."""
    _run("slicer-msd", params)


@main.command("slicer-moments")
@click.option("--alpha", type=ALPHA, required=True)
@click.option("--n-max", type=click.IntRange(min=1), required=True)
@click.option("--p", type=click.IntRange(min=1), multiple=True, default=(2,), show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=None,
              help="Grid size (default: 24 per decade).")
@_common
def slicer_moments(**params):
    """Exact moments <dX^p> and moment / n^(p - alpha)."""
    params["p"] = list(params["p"])
    _run("slicer-moments", params)


@main.command("mc")
@click.option("--alpha", type=ALPHA, required=True)
@click.option("--N", "N", type=click.IntRange(min=1), required=True, help="Particles.")
@click.option("--n", type=click.IntRange(min=0), required=True, help="Steps.")
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@click.option("--points", type=click.IntRange(min=1), default=None,
              help="Grid size (default: 24 per decade).")
@click.option("--p", type=click.IntRange(min=1), multiple=True, default=(1, 2), show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=None)
@_common
def mc(**params):
    """Monte Carlo ensemble started uniformly in cell 0."""
    params["p"] = list(params["p"])
    _run("mc", params)


def _walk_options(f):
    for opt in reversed([
        click.option("--beta", type=POSITIVE, required=True),
        click.option("--r0", type=POSITIVE, default=1.0, show_default=True),
        click.option("--v", type=POSITIVE, default=1.0, show_default=True),
        click.option("--t-max", type=POSITIVE, default=1e5, show_default=True),
        click.option("--n-env", type=click.IntRange(min=1), default=200, show_default=True),
        click.option("--n-walkers", type=click.IntRange(min=1), default=50, show_default=True),
        click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True),
        click.option("--points", type=click.IntRange(min=3), default=None),
    ]):
        f = opt(f)
    return f


@main.command("levy")
@_walk_options
@click.option("--p", type=POSITIVE, multiple=True, default=(2.0,), show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=None)
@_common
def levy_cmd(**params):
    """Quenched Lévy walk ensemble: moments and visited scatterers."""
    params["p"] = list(params["p"])
    _run("levy", params)


@main.command("compare")
@_walk_options
@click.option("--p", type=click.IntRange(min=1), multiple=True, default=(2,), show_default=True)
@click.option("--slicer-n-max", type=click.IntRange(min=100), default=100_000, show_default=True)
@_common
def compare(**params):
    """Slicer vs Lévy walk growth exponents at alpha = alpha(beta)."""
    params["p"] = list(params["p"])
    _run("compare", params)


@main.command("verify")
@click.option("--n-max", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--tol", type=POSITIVE, default=1e-13, show_default=True)
def verify(n_max, tol):
    """Exact interval evolution against the closed-form distribution."""
    ok = True
    for alpha in (1 / 3, 0.5, 1.0, 1.5, 2.0):
        worst = 0.0
        mass_err = 0.0
        fam = SlicerFamily(alpha)
        for occ in measure.evolve(fam, n_max):
            got = measure.areas(occ)
            want = closed_form.coarse_distribution(fam, occ.time).as_dict()
            if set(got) != set(want):
                worst = math.inf
                break
            worst = max(worst, max(abs(got[j] - want[j]) for j in want))
            mass_err = max(mass_err, abs(sum(got.values()) - 1.0))
        good = worst <= tol and mass_err <= 1e-12
        ok &= good
        click.echo(f"{'PASS' if good else 'FAIL'} alpha={alpha:.6g} n<={n_max} "
                   f"max|area-closed|={worst:.3g} max|mass-1|={mass_err:.3g}")
    sys.exit(0 if ok else EXIT_CHECK)


@main.command("replay")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Where to regenerate (default: a temporary directory).")
@click.option("--threads", type=click.IntRange(min=1), default=None)
def replay(manifest, out, threads):
    """Regenerate a run from its manifest and compare output digests."""
    data = read_manifest(manifest)
    if data.get("command") not in COMMANDS:
        raise click.BadParameter(f"unknown command {data.get('command')!r}", param_hint="MANIFEST")
    params = dict(data["params"])
    if threads is not None:
        params["threads"] = threads
    with tempfile.TemporaryDirectory() as tmp:
        target = _out_dir(out or tmp)
        execute(data["command"], params, target)
        fresh = read_manifest(target / MANIFEST_NAME)["outputs"]
    same = fresh == data["outputs"]
    for name, digest in sorted(data["outputs"].items()):
        status = "ok" if fresh.get(name) == digest else "MISMATCH"
        click.echo(f"{status} {name} {digest[:16]}")
    sys.exit(0 if same else EXIT_CHECK)


if __name__ == "__main__":
    main()
