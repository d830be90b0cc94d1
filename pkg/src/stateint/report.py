"""Figures and data files for the main numerical results.

Every figure is written next to the JSON or CSV it is drawn from.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import state_integral as si
from .qdl import ModularParameter, phi_b

HBARS = (0.2, 0.1, 0.05, 0.02)


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams.update({"figure.dpi": 120, "savefig.bbox": "tight", "axes.grid": True,
                         "grid.alpha": 0.3, "font.size": 9})
    return plt


def _write_csv(path: Path, header, rows) -> Path:
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        wr.writerows(rows)
    return path


def _write_json(path: Path, doc) -> Path:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def phi_profile(out: Path, plt) -> list[Path]:
    """|Phi_b| and arg Phi_b along horizontal lines in the strip."""
    x = np.linspace(-4, 4, 401)
    rows, fig = [], plt.figure(figsize=(6.4, 3.2))
    ax1, ax2 = fig.subplots(1, 2)
    for b in (0.3, 0.7, 1.0):
        mp = ModularParameter(b)
        for frac in (0.0, 0.3):
            z = x + 1j * frac * abs(mp.c_b)
            v = phi_b(z, mp)
            rows += [[b, frac, xi, vi.real, vi.imag] for xi, vi in zip(x, v)]
            ax1.plot(x, np.abs(v), label=f"b={b}, Im z={frac}|c_b|")
            ax2.plot(x, np.unwrap(np.angle(v)), label=f"b={b}, Im z={frac}|c_b|")
    ax1.set(xlabel="Re z", ylabel="|Phi_b(z)|")
    ax2.set(xlabel="Re z", ylabel="arg Phi_b(z)")
    ax1.legend(fontsize=6)
    png = out / "phi_profile.png"
    fig.savefig(png)
    plt.close(fig)
    return [_write_csv(out / "phi_profile.csv", ("b", "im_over_cb", "x", "re_phi", "im_phi"), rows), png]


def descent_figure(out: Path, plt) -> list[Path]:
    """Traced descent contours with the saddles of v_2 and v_3."""
    fig, ax = plt.subplots(figsize=(5, 3.2))
    rows = []
    for n in (2, 3):
        dc = asy.descent_contour(n)
        pts = np.array(dc.nodes)
        rows += [[n, z.real, z.imag] for z in dc.nodes]
        ax.plot(pts.real, pts.imag, label=f"C_{n}")
        for z in asy.saddles(n):
            ax.plot(z.real, z.imag, "k." if z != dc.anchor else "r*")
    ax.set(xlabel="Re z", ylabel="Im z", xlim=(-12, 12))
    ax.legend()
    png = out / "descent_contours.png"
    fig.savefig(png)
    plt.close(fig)
    return [_write_csv(out / "descent_contours.csv", ("n", "re_z", "im_z"), rows), png]


def volume_figure(out: Path, plt) -> list[Path]:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    docs, rows = {}, []
    for n in (2, 3):
        res = asy.volume_estimate(n, HBARS)
        doc = res.to_dict()
        doc.pop("seconds")
        docs[str(n)] = doc
        hs = np.array(HBARS)
        est = np.array([res.estimate_by_hbar[h] for h in HBARS])
        rows += [[n, h, res.values[h].real, res.values[h].imag, e] for h, e in zip(HBARS, est)]
        coef = np.polyfit(hs, est, 2)
        grid = np.linspace(0, max(HBARS), 100)
        line, = ax.plot(hs, est, "o", label=f"n={n}")
        ax.plot(grid, np.polyval(coef, grid), "-", color=line.get_color(), lw=0.8)
        ax.axhline(res.im_v, ls=":", color=line.get_color())
    ax.set(xlabel="hbar", ylabel="2 pi hbar log|g_n|")
    ax.legend()
    png = out / "volume_extrapolation.png"
    fig.savefig(png)
    plt.close(fig)
    return [_write_json(out / "volume.json", docs),
            _write_csv(out / "volume_sweep.csv", ("n", "hbar", "re_g", "im_g", "two_pi_hbar_log_abs"), rows), png]


def trefoil_figure(out: Path, plt, cfg: si.QuadratureConfig) -> list[Path]:
    """Trefoil partition function as the edge weight approaches 2 pi."""
    mp = ModularParameter(0.8)
    ws = (0.9, 0.95, 0.98, 0.99, 0.995, 0.999)
    rows = []
    for w in ws:
        v = si.trefoil(w, mp, cfg).value
        rows.append([w, v.real, v.imag])
    fig, ax = plt.subplots(figsize=(4, 3.2))
    arr = np.array(rows)
    ax.plot(arr[:, 1], arr[:, 2], "o-", ms=3, label="Z(w)")
    t = si.TREFOIL_TARGET
    ax.plot([t.real], [t.imag], "r*", label="w -> 1 limit")
    ax.set(xlabel="Re Z", ylabel="Im Z")
    ax.legend()
    png = out / "trefoil.png"
    fig.savefig(png)
    plt.close(fig)
    return [_write_csv(out / "trefoil.csv", ("w", "re_z", "im_z"), rows), png]


def limits_figure(out: Path, plt, cfg: si.QuadratureConfig) -> list[Path]:
    mp = ModularParameter(0.8)
    docs = {}
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for ex in ("h31", "h41", "h52"):
        lim = si.h_triangulation_limit(ex, mp, cfg=cfg)
        doc = lim.to_dict()
        doc.pop("seconds")
        docs[ex] = doc
        errs = [abs(v - lim.derived_target) / abs(lim.derived_target) for v in lim.values]
        ax.loglog(lim.ts, errs, "o-", label=ex)
    ax.set(xlabel="knot edge weight / 2 pi", ylabel="relative distance to limit")
    ax.legend()
    png = out / "h_limits.png"
    fig.savefig(png)
    plt.close(fig)
    return [_write_json(out / "h_limits.json", docs), png]


def write_report(out: Path, cfg: si.QuadratureConfig = si.QuadratureConfig(), full: bool = False) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    plt = _plt()
    written = phi_profile(out, plt) + descent_figure(out, plt) + volume_figure(out, plt)
    written += trefoil_figure(out, plt, cfg)
    if full:
        written += limits_figure(out, plt, cfg)
    return written
