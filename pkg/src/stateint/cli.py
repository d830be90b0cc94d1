"""Command-line entry point.

Exit codes: 0 pass, 1 numerical failure, 2 validation or refusal, 3 usage.
JSON is written with sorted keys and no timings, so identical invocations
give identical bytes. The default precision profile comes from
STATEINT_PROFILE (fast, standard, fine).
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import asymptotics as asy
from . import batteries
from . import state_integral as si
from .contour import EvaluationResult
from .qdl import ModularParameter, PoleError, nearest_singularity, phi_b
from .shape_space import (check_gauge_in_weight_kernel, check_moment_map, check_weights_commute,
                          reduced_dims)
from .triangulation import (GluingError, LeveledShape, MoveError, OrientationError, ShapeError,
                            apply_gauge, balanced_edges, fixture, fixture_names, homology_h2, load,
                            pachner32, to_json, weights)

EXIT_OK, EXIT_NUMERIC, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 3

PROFILES = {
    "fast": si.QuadratureConfig(density=2.0, order=12),
    "standard": si.QuadratureConfig(),
    "fine": si.QuadratureConfig(density=4.0, order=20),
}
PROFILE_ENV = "STATEINT_PROFILE"
VOLUME_CSV_COLUMNS = ("hbar", "re_g", "im_g", "two_pi_hbar_log_abs")
SWEEP_CSV_COLUMNS = ("hbar", "re", "im", "abs", "arg")


class Refusal(Exception):
    """Input rejected after validation (exit 2)."""


class NumericalFailure(Exception):
    """A check or evaluation did not meet its tolerance (exit 1)."""


def _profile(name: str | None) -> si.QuadratureConfig:
    key = name or os.environ.get(PROFILE_ENV, "standard")
    if key not in PROFILES:
        raise click.UsageError(f"unknown precision profile {key!r}; choose from {', '.join(PROFILES)}")
    return PROFILES[key]


def _mp(b: float | None, hbar: float | None, default_b: float | None = 0.8) -> ModularParameter:
    if b is not None and hbar is not None:
        raise click.UsageError("give exactly one of --b and --hbar")
    try:
        if hbar is not None:
            return ModularParameter.from_hbar(hbar)
        if b is None:
            if default_b is None:
                raise click.UsageError("give one of --b and --hbar")
            b = default_b
        return ModularParameter(b)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _cnum(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _dump(doc, out: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise click.BadParameter(f"cannot parse {text!r} as a complex number") from exc


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"expected a comma separated list of numbers, got {text!r}") from exc


def _eval_record(res: EvaluationResult) -> dict:
    return {"value": _cnum(res.value), "abs_error": res.abs_error, "nodes": res.nodes}


# ---------------------------------------------------------------------------


@click.group()
@click.option("--profile", type=str, default=None,
              help=f"Precision profile (fast, standard, fine); default from ${PROFILE_ENV}.")
@click.pass_context
def cli(ctx, profile):
    """State integrals of shaped triangulations."""
    ctx.obj = {"cfg": _profile(profile)}


@cli.command()
@click.option("--b", "b", type=float, default=None)
@click.option("--hbar", type=float, default=None)
@click.option("--z", "z", type=str, required=True, help="Complex argument, e.g. 0.3+0.1i.")
def dilog(b, hbar, z):
    """Faddeev's quantum dilogarithm at one point."""
    mp = _mp(b, hbar, None)
    zz = _parse_complex(z)
    loc, kind = nearest_singularity(zz, mp)
    try:
        val = complex(phi_b(zz, mp))
    except PoleError as exc:
        raise Refusal(str(exc)) from exc
    _dump({"b": mp.b, "z": _cnum(zz), "value": _cnum(val), "modulus": abs(val),
           "nearest_singularity": {"location": _cnum(loc), "kind": kind, "distance": abs(zz - loc)}}, None)


@cli.command()
@click.option("--suite", "suites", type=click.Choice(batteries.SUITES + ("all",)), multiple=True,
              default=("all",), show_default=True)
@click.option("--b", "b", type=float, default=None)
@click.option("--hbar", type=float, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def identities(suites, b, hbar, out):
    """Run identity batteries; nonzero exit on any failure."""
    mp = _mp(b, hbar)
    names = batteries.SUITES if "all" in suites else suites
    report = {"b": mp.b, "suites": {}}
    ok = True
    for name in names:
        rows = batteries.run_suite(name, mp)
        passed = all(r["pass"] for r in rows)
        ok &= passed
        report["suites"][name] = {"pass": passed, "checks": rows}
    report["pass"] = ok
    _dump(report, out)
    if not ok:
        raise NumericalFailure("identity battery failed")


def _load_complex(manifold: str | None, path: str | None):
    if (manifold is None) == (path is None):
        raise click.UsageError("give exactly one of --manifold and --file")
    try:
        if path is not None:
            return load(path)
        return fixture(manifold), None
    except KeyError as exc:
        raise click.UsageError(str(exc.args[0])) from exc
    except FileNotFoundError as exc:
        raise click.UsageError(f"no such file: {path}") from exc
    except (GluingError, OrientationError, ShapeError, json.JSONDecodeError, ValueError) as exc:
        raise Refusal(f"invalid triangulation: {exc}") from exc


def _require_admissible(X, label: str):
    rep = homology_h2(X)
    if not rep.trivial:
        raise Refusal(f"{label} is not admissible: H_2 of the complement of the vertices is {rep.describe()} "
                      f"(free rank {rep.free_rank})")


def _charges(text: str, count: int = 3) -> tuple[float, ...]:
    vals = _parse_floats(text)
    if len(vals) != count:
        raise click.BadParameter(f"expected {count} numbers, got {text!r}")
    return tuple(vals)


def _invariant_at(name: str, mp: ModularParameter, cfg: si.QuadratureConfig, opts: dict) -> dict:
    if name == "3_1_complement":
        w = opts["w"]
        res = si.trefoil(w, mp, cfg)
        target = si.TREFOIL_TARGET
        return {"w": w, **_eval_record(res), "limit_w_to_1": _cnum(target),
                "modulus": abs(res.value), "distance_to_limit": abs(res.value - target)}
    if name == "4_1_complement":
        plus = _charges(opts["plus"])
        minus = _charges(opts["minus"])
        res = si.figure_eight(plus, minus, mp, cfg)
        prod = si.figure_eight_product(plus, minus, mp, cfg)
        return {"plus": list(plus), "minus": list(minus), **_eval_record(res),
                "factorised": _cnum(prod), "chi41_0": _cnum(si.chi41(0.0, mp, cfg).value)}
    if name in ("h31", "h41", "h52"):
        lim = si.h_triangulation_limit(name, mp, cfg=cfg)
        doc = lim.to_dict()
        doc.pop("seconds")
        return doc
    if name == "one_tet_one_face":
        ls = LeveledShape.from_charges([_charges(opts["plus"])])
        res = si.partition_function(fixture(name), ls, mp, cfg)
        return {"symbolic": res.describe(), "coefficient": _cnum(res.coefficient)}
    if name == "5_2_complement":
        ri = si.reduce_deltas(si.assemble(fixture(name), _fig52_shape(), mp))
        raise NumericalFailure(f"the reduced 5_2 complement integral has dimension {ri.dimension} with coupled "
                               "Gaussian terms; the tensor contour does not converge. Use h52 or chi52.")
    raise click.UsageError(f"no invariant recipe for {name!r}")


def _fig52_shape() -> LeveledShape:
    return LeveledShape.from_charges([(0.15, 0.15, 0.2), (0.15, 0.2, 0.15), (0.2, 0.15, 0.15)])


@cli.command()
@click.option("--manifold", type=str, default=None, help="Named fixture: " + ", ".join(fixture_names()))
@click.option("--file", "path", type=click.Path(dir_okay=False), default=None)
@click.option("--b", "b", type=float, default=None)
@click.option("--hbar", type=float, default=None)
@click.option("--sweep", type=str, default=None, help="Comma separated hbar values.")
@click.option("--w", "w", type=float, default=0.999, show_default=True, help="Trefoil edge weight over 2 pi.")
@click.option("--plus", type=str, default="0.16666666666666666,0.16666666666666666,0.16666666666666666",
              help="Charges a,b,c of the (first) positive tetrahedron.")
@click.option("--minus", type=str, default="0.16666666666666666,0.16666666666666666,0.16666666666666666",
              help="Charges a,b,c of the negative tetrahedron (4_1).")
@click.option("--lam", type=float, default=0.02, show_default=True, help="Gauge parameter for sp_n.")
@click.option("--n", "n", type=int, default=3, show_default=True, help="Size of sp_n.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Sweep table (hbar, re, im, abs, arg) for numeric values.")
@click.pass_context
def invariant(ctx, manifold, path, b, hbar, sweep, w, plus, minus, lam, n, out, csv_path):
    """Partition function (or renormalised limit) of a fixture or file."""
    cfg = ctx.obj["cfg"]
    X, shape = _load_complex(manifold, path)
    label = manifold or path
    _require_admissible(X, label)
    mps = [_mp(None, h) for h in _parse_floats(sweep)] if sweep else [_mp(b, hbar)]
    opts = {"w": w, "plus": plus, "minus": minus}
    rows = []
    for mp in mps:
        row = {"b": mp.b, "hbar": mp.hbar}
        if path is not None:
            if shape is None:
                raise Refusal("the file carries no angles; nothing to evaluate")
            res = si.partition_function(X, shape, mp, cfg)
            if isinstance(res, si.SymbolicResult):
                row.update(symbolic=res.describe(), coefficient=_cnum(res.coefficient))
            else:
                row.update(_eval_record(res))
        elif manifold == "sp_n" or manifold.startswith("sp_"):
            k = n if manifold == "sp_n" else int(manifold[3:])
            a = [0.1] * k
            c = [0.15] * k
            rep = si.spn_gauge_phase(k, a, c, lam, mp)
            row.update(rep.to_dict())
            if not rep.passed:
                rows.append(row)
                _dump({"manifold": label, "rows": rows}, out)
                raise NumericalFailure("gauge phase outside tolerance")
        else:
            row.update(_invariant_at(manifold, mp, cfg, opts))
        rows.append(row)
    _dump({"manifold": label, "rows": rows}, out)
    if csv_path:
        Path(csv_path).write_text(sweep_csv(rows))


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(SWEEP_CSV_COLUMNS)
    for row in rows:
        key = "value" if "value" in row else "extrapolated" if "extrapolated" in row else None
        if key is None:
            continue
        z = complex(*row[key])
        wr.writerow([repr(row["hbar"]), repr(z.real), repr(z.imag), repr(abs(z)), repr(cmath.phase(z))])
    return buf.getvalue()


@cli.command()
@click.option("--n", "n", type=click.IntRange(2, 3), required=True)
@click.option("--hbar-grid", type=str, default="0.2,0.1,0.05,0.02", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="JSON result path.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Sweep CSV path.")
def volume(n, hbar_grid, out, csv_path):
    """Volume estimate 2 pi hbar log|g_n(hbar)| extrapolated to hbar = 0."""
    grid = _parse_floats(hbar_grid)
    try:
        res = asy.volume_estimate(n, grid)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    doc = res.to_dict()
    doc.pop("seconds")
    doc["g"] = {str(h): _cnum(v) for h, v in res.values.items()}
    doc["leading_order_ratio"] = {str(h): abs(v) / abs(asy.leading_order(n, h)) for h, v in res.values.items()}
    _dump(doc, out)
    if csv_path:
        Path(csv_path).write_text(volume_csv(n, res))


def volume_csv(n: int, res: asy.VolumeResult) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(VOLUME_CSV_COLUMNS)
    for h, g in res.values.items():
        wr.writerow([repr(h), repr(g.real), repr(g.imag), repr(2 * math.pi * h * math.log(abs(g)))])
    return buf.getvalue()


@cli.command("complex")
@click.option("--file", "path", type=click.Path(dir_okay=False), default=None)
@click.option("--manifold", type=str, default=None)
@click.option("--action", type=click.Choice(["validate", "weights", "pachner", "gauge", "shape-space"]),
              required=True)
@click.option("--edge", type=int, default=None, help="Edge class for pachner.")
@click.option("--gauge", "gauge_path", type=click.Path(dir_okay=False), default=None,
              help='JSON object {"edge": value} for gauge.')
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def complex_cmd(path, manifold, action, edge, gauge_path, out):
    """Combinatorial operations on a triangulation."""
    X, shape = _load_complex(manifold, path)
    doc = {"complex": manifold or path, "action": action}
    if action == "validate":
        plus, minus = X.boundary_split()
        rep = homology_h2(X)
        doc.update(counts=X.counts(), boundary_plus=len(plus), boundary_minus=len(minus),
                   h2=rep.describe(), admissible=rep.trivial, has_shape=shape is not None)
    elif action == "shape-space":
        d = reduced_dims(X)
        doc.update(dims={"total": d.dim_total, "gauge_orbit": d.dim_gauge_orbit, "reduced": d.dim_reduced,
                         "weight_fiber": d.dim_weight_fiber, "h1_boundary": d.h1_boundary},
                   checks=[r.to_dict() for r in (check_moment_map(X), check_weights_commute(X),
                                                 check_gauge_in_weight_kernel(X))])
    else:
        if shape is None:
            raise Refusal(f"action {action} needs a file with angles")
        if action == "weights":
            doc.update(weights=[_num(x) for x in weights(X, shape)],
                       balanced=balanced_edges(X, shape))
        elif action == "pachner":
            if edge is None:
                raise click.UsageError("pachner needs --edge")
            try:
                res = pachner32(X, shape, edge)
            except (MoveError, ShapeError) as exc:
                raise Refusal(str(exc)) from exc
            before, after = weights(X, shape), weights(res.complex, res.shape)
            kept = all(before[o] == after[m] for o, m in res.edge_map.items())
            doc.update(counts=res.complex.counts(), triangulation=json.loads(to_json(res.complex, res.shape)),
                       weights_preserved=kept)
            if not kept:
                _dump(doc, out)
                raise NumericalFailure("weights changed under the move")
        elif action == "gauge":
            if gauge_path is None:
                raise click.UsageError("gauge needs --gauge FILE")
            raw = json.loads(Path(gauge_path).read_text())
            g = {int(k): Fraction(str(v)) for k, v in raw.items()}
            try:
                moved = apply_gauge(X, shape, g)
            except ShapeError as exc:
                raise Refusal(str(exc)) from exc
            doc.update(angles=[[_num(a) for a in tri] for tri in moved.angles], level=_num(moved.level),
                       weights_preserved=weights(X, moved) == weights(X, shape))
    _dump(doc, out)


def _num(x):
    return str(x) if isinstance(x, Fraction) else float(x)


@cli.command()
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--quick/--full", default=True, show_default=True,
              help="--full adds the H-triangulation limits.")
@click.pass_context
def report(ctx, out_dir, quick):
    """Write JSON/CSV data and matplotlib figures for the main results."""
    from .report import write_report
    written = write_report(Path(out_dir), ctx.obj["cfg"], full=not quick)
    _dump({"written": sorted(str(p.name) for p in written)}, None)


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="stateint", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except Refusal as exc:
        click.echo(f"refused: {exc}", err=True)
        return EXIT_REFUSED
    except (NumericalFailure, PoleError, si.ContourError, si.DivergenceError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERIC
    except click.exceptions.Exit as exc:
        return exc.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
