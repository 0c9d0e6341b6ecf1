"""Command-line front end.

Usage:
    expsum analyze  --problem f.json [--svg]
    expsum count    --problem f.json --y-lo 0 --y-hi 6.2832
    expsum zeros    --problem f.json --y-lo -10 --y-hi 10 [--svg]
    expsum density  --problem f.json [--r-grid 10,20,50] [--y0 0]
    expsum backlund --problem f.json --z1 2+0j --z2 2+6j --radius 12
    expsum disc     --problem f.json --horizon 1000 --lines 50
    expsum report   --problem f.json --out reports/
    expsum validate --report reports/decomposition.json

Exit codes: 0 ok, 2 bad input, 3 a verification check failed, 4 numerical failure.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import click

from . import io as eio
from .core import ExpSum, normalize
from .density import default_r_grid, density_reports, disc_experiment
from .errors import ExpSumError, InvalidInput, NoConvergence, PerturbationExhausted
from .strips import decompose
from .winding import Rectangle, backlund_bound, count_zeros, spanning_rectangle
from .zeros import find_all_zeros

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_NUMERIC = 0, 2, 3, 4


@dataclass
class RunConfig:
    problem_path: Path
    command: str
    window: Optional[tuple[float, float]] = None
    r_grid: Optional[list[float]] = None
    output_dir: Path = Path(".")
    seed: int = 0
    json: bool = False
    csv: bool = False
    svg: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.window is not None and not self.window[0] < self.window[1]:
            raise InvalidInput("window needs y_lo < y_hi")

    def wants(self, fmt: str, primary: bool) -> bool:
        """Primary formats are always written; the flags add the others."""
        return primary or getattr(self, fmt)


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _problem(cfg: RunConfig) -> ExpSum:
    f, shift, prefactor = normalize(eio.load_problem(cfg.problem_path))
    if shift or prefactor != 1:
        click.echo(f"normalized: divided by ({prefactor}) * exp({shift} z)", err=True)
    return f


def _write(cfg: RunConfig, name: str, text: str) -> None:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / name
    path.write_text(text)
    click.echo(f"wrote {path}")


def _window(cfg: RunConfig, default=(0.0, 2 * math.pi)):
    return cfg.window or default


def cmd_analyze(cfg: RunConfig) -> int:
    f = _problem(cfg)
    dec = decompose(f)
    data = eio.decomposition_to_dict(dec)
    if cfg.wants("json", True):
        _write(cfg, "decomposition.json", json.dumps(data, indent=2) + "\n")
    if cfg.wants("svg", False):
        _write(cfg, "strips.svg", eio.strip_svg(dec))
    for r in dec.regions:
        click.echo(f"zero-free region ({r.x_lo:.12g}, {r.x_hi:.12g}) dominant {r.dominant}")
    for s in dec.strips:
        click.echo(f"critical strip [{s.x_lo:.12g}, {s.x_hi:.12g}] "
                   f"Lambda({s.left_dominant},{s.right_dominant})")
    return EXIT_OK


def cmd_count(cfg: RunConfig) -> int:
    f = _problem(cfg)
    y_lo, y_hi = _window(cfg)
    rect = spanning_rectangle(decompose(f), y_lo, y_hi)
    x_lo, x_hi = cfg.extra.get("x_lo"), cfg.extra.get("x_hi")
    if x_lo is not None or x_hi is not None:
        rect = Rectangle(rect.x_lo if x_lo is None else x_lo,
                         rect.x_hi if x_hi is None else x_hi, y_lo, y_hi)
    res = count_zeros(f, rect)
    if cfg.wants("json", True):
        _write(cfg, "count.json", eio.to_json(res))
    click.echo(f"count {res.count}")
    return EXIT_OK


def cmd_zeros(cfg: RunConfig) -> int:
    f = _problem(cfg)
    y_lo, y_hi = _window(cfg)
    dec = decompose(f)
    recs = find_all_zeros(f, y_lo, y_hi, decomposition=dec)
    if cfg.wants("csv", True):
        _write(cfg, "zeros.csv", eio.zeros_to_csv(recs))
    if cfg.wants("json", False):
        _write(cfg, "zeros.json", eio.to_json(recs))
    if cfg.wants("svg", False):
        _write(cfg, "zeros.svg", eio.strip_svg(dec, recs, (y_lo, y_hi)))
    outside = [r for r in recs if dec.strip_of(r.z.real) is None]
    click.echo(f"{len(recs)} zero records, total multiplicity {sum(r.multiplicity for r in recs)}")
    if outside:
        raise _Failure(EXIT_INVARIANT, f"zero outside every critical strip: {outside[0]}")
    return EXIT_OK


def cmd_density(cfg: RunConfig) -> int:
    f = _problem(cfg)
    grid = cfg.r_grid or default_r_grid(seed=cfg.seed)
    reports = density_reports(f, grid, y0=cfg.extra.get("y0", 0.0))
    if cfg.wants("json", True):
        _write(cfg, "density.json", eio.to_json(reports))
    if cfg.wants("csv", True):
        for rep in reports:
            _write(cfg, f"density_strip{rep.strip_index}.csv", eio.density_to_csv(rep))
    for rep in reports:
        click.echo(f"strip {rep.strip_index}: expected slope {rep.slope_expected:.6g}, "
                   f"max |deviation| {rep.max_abs_deviation:.4g}")
    langer = reports[0].langer_max_deviation
    click.echo(f"Langer max deviation {langer:.4g} (bound {f.n})")
    if langer > f.n + 1e-6:
        raise _Failure(EXIT_INVARIANT, f"Langer bound violated: {langer} > {f.n}")
    return EXIT_OK


def cmd_backlund(cfg: RunConfig) -> int:
    f = _problem(cfg)
    res = backlund_bound(f, cfg.extra["z1"], cfg.extra["z2"], cfg.extra["radius"])
    if cfg.wants("json", True):
        _write(cfg, "backlund.json", eio.to_json(res))
    click.echo(f"lhs {res.lhs:.6g} <= bound {res.bound:.6g}: {res.holds}")
    if not res.holds:
        raise _Failure(EXIT_INVARIANT, f"Backlund inequality violated: {res}")
    return EXIT_OK


def cmd_disc(cfg: RunConfig) -> int:
    f = _problem(cfg)
    res = disc_experiment(f, cfg.extra.get("horizon", 1000.0), cfg.extra.get("lines", 50),
                          lines=cfg.extra.get("line", ()), seed=cfg.seed,
                          method=cfg.extra.get("method", "auto"))
    if cfg.wants("json", True):
        _write(cfg, "disc.json", eio.to_json(res))
    click.echo(f"{res.zero_count} zeros, sum r_n = {res.radii_partial_sum:.6g}, "
               f"tail bound {res.analytic_tail_bound:.6g}, "
               f"{res.lines_hitting_infinitely}/{res.lines_tested} lines hit the last decade")
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    cfg.json = cfg.csv = cfg.svg = True
    code = cmd_analyze(cfg)
    code = max(code, cmd_zeros(cfg))
    code = max(code, cmd_density(cfg))
    cfg.extra.setdefault("horizon", 200.0)
    return max(code, cmd_disc(cfg))


COMMANDS = {"analyze": cmd_analyze, "count": cmd_count, "zeros": cmd_zeros,
            "density": cmd_density, "backlund": cmd_backlund, "disc": cmd_disc,
            "report": cmd_report}


def run(cfg: RunConfig) -> int:
    """Dispatch ``cfg.command`` and map failures onto exit codes."""
    try:
        return COMMANDS[cfg.command](cfg)
    except _Failure as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return exc.code
    except (PerturbationExhausted, NoConvergence) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERIC
    except (InvalidInput, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except ExpSumError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERIC


def _grid(ctx, param, value):
    if value is None:
        return None
    try:
        grid = [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated numbers")
    if not grid or any(r <= 0 for r in grid) or grid != sorted(grid):
        raise click.BadParameter("r values must be positive and increasing")
    return grid


def _complex(ctx, param, value):
    if value is None:
        return None
    try:
        return complex(value.replace(" ", ""))
    except ValueError:
        raise click.BadParameter(f"not a complex number: {value}")


def _common(fn):
    opts = [
        click.option("--problem", "problem", required=True, type=click.Path(path_type=Path)),
        click.option("--y-lo", type=float, default=None),
        click.option("--y-hi", type=float, default=None),
        click.option("--r-grid", callback=_grid, default=None, help="comma-separated r values"),
        click.option("--out", "out", type=click.Path(path_type=Path), default=Path(".")),
        click.option("--seed", type=int, default=0),
        click.option("--json", "as_json", is_flag=True),
        click.option("--csv", "as_csv", is_flag=True),
        click.option("--svg", "as_svg", is_flag=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _config(command, problem, y_lo, y_hi, r_grid, out, seed, as_json, as_csv, as_svg, **extra):
    window = None
    if y_lo is not None or y_hi is not None:
        if y_lo is None or y_hi is None:
            raise click.UsageError("--y-lo and --y-hi go together")
        if not y_lo < y_hi:
            raise click.UsageError("need --y-lo < --y-hi")
        window = (y_lo, y_hi)
    return RunConfig(problem, command, window, r_grid, out, seed, as_json, as_csv, as_svg,
                     {k: v for k, v in extra.items() if v is not None})


@click.group(help="Zeros of normalized exponential sums.")
def main():
    pass


def _simple(name, help_text):
    @main.command(name, help=help_text)
    @_common
    def command(**kw):
        sys.exit(run(_config(name, **kw)))
    return command


_simple("analyze", "Zero-free regions and critical strips.")
_simple("zeros", "Localise zeros in all critical strips for y in [y-lo, y-hi).")
_simple("report", "Run analyze, zeros, density and disc into one output directory.")


@main.command("count", help="Count zeros in the spanning rectangle (or --x-lo/--x-hi).")
@_common
@click.option("--x-lo", type=float, default=None)
@click.option("--x-hi", type=float, default=None)
def _count(**kw):
    sys.exit(run(_config("count", **kw)))


@main.command("density", help="Per-strip and global counting laws over an r grid.")
@_common
@click.option("--y0", type=float, default=None)
def _density(**kw):
    sys.exit(run(_config("density", **kw)))


@main.command("backlund", help="Both sides of Backlund's inequality on [z1, z2].")
@_common
@click.option("--z1", callback=_complex, required=True)
@click.option("--z2", callback=_complex, required=True)
@click.option("--radius", type=float, required=True)
def _backlund(**kw):
    sys.exit(run(_config("backlund", **kw)))


@main.command("disc", help="Disc-avoidance experiment up to a modulus horizon.")
@_common
@click.option("--horizon", type=float, default=None)
@click.option("--lines", type=int, default=None, help="number of sampled vertical lines")
@click.option("--line", type=float, multiple=True, help="extra abscissa to test")
@click.option("--method", type=click.Choice(["auto", "winding", "oracle"]), default=None)
def _disc(**kw):
    sys.exit(run(_config("disc", **kw)))


@main.command("validate", help="Check a decomposition report against its schema.")
@click.option("--report", "report", required=True, type=click.Path(path_type=Path))
def _validate(report):
    try:
        eio.validate_decomposition(json.loads(report.read_text()))
    except (OSError, json.JSONDecodeError, InvalidInput) as exc:
        click.echo(f"invalid: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    click.echo("valid")


if __name__ == "__main__":
    main()
