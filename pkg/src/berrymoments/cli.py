"""
Command-line interface for berrymoments.

Usage:
    berrymoments spectrum --coordination 6 --J 2 --w 1
    berrymoments susceptibility --coordination 6 --J 4 --tmin 0.01 --tmax 100 --points 41
    berrymoments classify --coordination 8 --ion Ho
    berrymoments cef --A 0 --B 1 --bruteforce

Every command takes ``--format table|json|csv`` (table is the default except
for ``susceptibility``, which defaults to CSV) and ``--output FILE``.
"""

from __future__ import annotations

import sys
import warnings

import click
import numpy as np

from . import __version__
from .cef import CefParams, ClassAssignmentWarning, ion_class, load_ions, minima_bruteforce, sector
from .geometry import Coordination
from .halfint import as_half_integer, format_half_integer
from .records import OutputRecord, emit_csv, emit_json
from .spectra import classify, spectrum_for
from .thermo import ground_multiplet, low_T_limit, susceptibility_curve

__all__ = ["cli", "main"]

FORMATS = click.Choice(["table", "json", "csv"])


class CoordinationType(click.ParamType):
    name = "coordination"

    def convert(self, value, param, ctx):
        try:
            return Coordination.parse(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class HalfIntegerType(click.ParamType):
    name = "half-integer"

    def convert(self, value, param, ctx):
        try:
            return as_half_integer(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class DirectionType(click.ParamType):
    name = "x,y,z"

    def convert(self, value, param, ctx):
        if isinstance(value, np.ndarray):
            return value
        try:
            parts = [float(x) for x in str(value).split(",")]
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated 3-vector", param, ctx)
        d = np.array(parts)
        if d.shape != (3,) or not np.linalg.norm(d) > 0:
            self.fail(f"{value!r} must be a non-zero 3-vector", param, ctx)
        return d / np.linalg.norm(d)


COORDINATION = CoordinationType()
HALF_INTEGER = HalfIntegerType()
DIRECTION = DirectionType()


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return "" if value is None else str(value)


def _table(rows: list, summary: dict) -> str:
    lines = [f"{k}: {_format_value(v)}" for k, v in summary.items()]
    if rows:
        header = list(rows[0])
        cells = [[_format_value(r[k]) for k in header] for r in rows]
        widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
        if lines:
            lines.append("")
        lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        lines.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
    return "\n".join(lines) + "\n"


def _emit(record: OutputRecord, fmt: str, output):
    if fmt == "json":
        text = emit_json(record)
    elif fmt == "csv":
        text = emit_csv(record.rows)
    else:
        text = _table(record.rows, record.summary)
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _common(func):
    func = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                        help="Write to FILE instead of stdout.")(func)
    return func


@click.group()
@click.version_option(__version__, prog_name="berrymoments")
def cli():
    """Tunnelling spectra, susceptibility and CEF sectors of large cubic moments."""


@cli.command()
@click.option("--coordination", type=COORDINATION, required=True, help="6, 8, octahedral or cubic.")
@click.option("--J", "J", type=HALF_INTEGER, required=True, help="Moment, e.g. 7.5 or 15/2.")
@click.option("--w", "w", type=float, default=1.0, show_default=True, help="Tunnelling amplitude.")
@click.option("--field-dir", type=DIRECTION, default=None, help="Field direction x,y,z.")
@click.option("--h", "h", type=float, default=0.0, show_default=True, help="Reduced field g mu_B H.")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@_common
def spectrum(coordination, J, w, field_dir, h, fmt, output):
    """Energy levels with degeneracies and the class label."""
    if h < 0:
        raise click.BadParameter("must be non-negative", param_hint="--h")
    spec = spectrum_for(coordination, J, w, field_dir, h)
    cls = classify(J, coordination)
    rows = [{"energy": float(e), "multiplicity": int(m)} for e, m in spec.groups]
    params = {"coordination": coordination.value, "J": format_half_integer(J), "w": w, "h": h,
              "field_dir": None if field_dir is None else [float(x) for x in field_dir]}
    summary = {"class": cls.label, "moments": cls.describe(),
               "ground_energy": rows[0]["energy"], "ground_degeneracy": rows[0]["multiplicity"]}
    _emit(OutputRecord("spectrum", params, rows, summary), fmt, output)


@cli.command()
@click.option("--coordination", type=COORDINATION, required=True)
@click.option("--J", "J", type=HALF_INTEGER, required=True)
@click.option("--w", "w", type=float, default=1.0, show_default=True)
@click.option("--tmin", type=float, default=0.01, show_default=True)
@click.option("--tmax", type=float, default=100.0, show_default=True)
@click.option("--points", type=int, default=41, show_default=True)
@click.option("--field-dir", type=DIRECTION, default=None)
@click.option("--format", "fmt", type=FORMATS, default="csv", show_default=True)
@_common
def susceptibility(coordination, J, w, tmin, tmax, points, field_dir, fmt, output):
    """Reduced susceptibility on a log-spaced temperature grid (columns T, beta, chi_reduced)."""
    if not tmin > 0:
        raise click.BadParameter("must be positive", param_hint="--tmin")
    if not tmax > tmin:
        raise click.BadParameter("must exceed --tmin", param_hint="--tmax")
    if points < 2:
        raise click.BadParameter("need at least 2 points", param_hint="--points")
    temps = np.geomspace(tmin, tmax, points)
    curve = susceptibility_curve(coordination, J, w, temps, field_dir)
    rows = [{"T": float(T), "beta": float(1.0 / T), "chi_reduced": float(c)}
            for T, c in zip(curve.temperatures, curve.chi)]
    params = {"coordination": coordination.value, "J": format_half_integer(J), "w": w,
              "tmin": tmin, "tmax": tmax, "points": points,
              "field_dir": curve.metadata["direction"]}
    _emit(OutputRecord("susceptibility", params, rows, {"step": curve.metadata["step"]}),
          fmt, output)


@cli.command(name="classify")
@click.option("--coordination", type=COORDINATION, required=True)
@click.option("--J", "J", type=HALF_INTEGER, default=None)
@click.option("--ion", type=str, default=None, help="R3+ ion symbol, e.g. Dy.")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@_common
def classify_cmd(coordination, J, ion, fmt, output):
    """Class of a moment, its ground level and low-temperature susceptibility form."""
    if (J is None) == (ion is None):
        raise click.UsageError("give exactly one of --J or --ion")
    row = {}
    if ion is not None:
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", ClassAssignmentWarning)
                report = ion_class(ion, coordination)
        except KeyError:
            raise click.BadParameter(
                f"unknown ion {ion!r}; known symbols: {', '.join(load_ions())}",
                param_hint="--ion") from None
        for w in caught:
            click.echo(f"warning: {w.message}", err=True)
        J = report.J
        row["ion"] = report.symbol
    cls = classify(J, coordination)
    spec = spectrum_for(coordination, J, 1.0)
    limit = low_T_limit(ground_multiplet(coordination, J, 1.0))
    j2 = float(J) ** 2 if J else 1.0
    row.update({
        "coordination": coordination.value,
        "J": format_half_integer(J),
        "class": cls.label,
        "moments": cls.describe(),
        "ground_energy": spec.ground[0],
        "ground_degeneracy": spec.ground[1],
        "first_excited": spec.first_excited,
        "low_T": limit.kind,
        "low_T_coefficient_over_J2": limit.coefficient / j2,
    })
    if ion is not None:
        row.update({"table_class": report.table_label, "agrees": report.agrees,
                    "convention": report.convention})
    params = {"coordination": coordination.value,
              "J": None if ion is not None else format_half_integer(J), "ion": ion}
    _emit(OutputRecord("classify", params, [row]), fmt, output)


@cli.command()
@click.option("--A", "A", type=float, required=True, help="Fourth-order CEF constant.")
@click.option("--B", "B", type=float, required=True, help="Sixth-order CEF constant.")
@click.option("--bruteforce", is_flag=True, help="Verify by minimizing the potential on a grid.")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@_common
def cef(A, B, bruteforce, fmt, output):
    """Stability sector of the CEF constants (A, B)."""
    if A == 0 and B == 0:
        raise click.BadParameter("(A, B) = (0, 0) has no sector", param_hint="--A/--B")
    result = sector(A, B)
    summary = {"sector": result.value}
    rows = []
    if bruteforce:
        minima = minima_bruteforce(CefParams(A, B))
        summary["n_minima"] = len(minima)
        rows = [{"x": float(x), "y": float(y), "z": float(z)} for x, y, z in minima]
    _emit(OutputRecord("cef", {"A": A, "B": B, "bruteforce": bruteforce}, rows, summary),
          fmt, output)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="berrymoments", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except ValueError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
