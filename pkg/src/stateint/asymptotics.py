"""Saddle-point analysis of g_n(hbar) = (2 pi sqrt(hbar))^-1 int Phi_b(z/(2 pi sqrt(hbar)))^-n e^{i z^2/(4 pi hbar)} dz."""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .contour import Contour, EvaluationResult, integrate
from .qdl import PI, ModularParameter, li2, log_phi_b

# the square root in the leading order is the principal one; checked against quadrature
SQRT_BRANCH = "principal"


def _dilog_exp(z: complex) -> complex:
    """Li2(-e^z) continued to C minus the half lines Re z = 0, |Im z| >= pi,
    using Li2(-e^z) + Li2(-e^-z) = -z^2/2 - pi^2/6 for Re z > 0."""
    z = complex(z)
    if z.real <= 0:
        return li2(-cmath.exp(z))
    return -z * z / 2 - PI ** 2 / 6 - li2(-cmath.exp(-z))


def _log1p_exp(z: complex) -> complex:
    """log(1 + e^z) with the branch matching _dilog_exp."""
    z = complex(z)
    if z.real <= 0:
        return cmath.log(1 + cmath.exp(z))
    return z + cmath.log(1 + cmath.exp(-z))


@dataclass(frozen=True)
class SaddleProblem:
    n: int

    def __post_init__(self):
        if not (2 <= self.n <= 6):
            raise ValueError("n must lie in 2..6")

    def v(self, z: complex) -> complex:
        return -self.n * _dilog_exp(z) - complex(z) ** 2 / 2

    def dv(self, z: complex) -> complex:
        return self.n * _log1p_exp(z) - complex(z)

    def d2v(self, z: complex) -> complex:
        e = cmath.exp(complex(z))
        return self.n * e / (1 + e) - 1


def saddles(n: int) -> list[complex]:
    """Roots of v_n' in the strip |Im z| < pi, sorted by Im v_n."""
    sp = SaddleProblem(n)
    # (1 + w)^n - w = 0
    coeffs = [math.comb(n, k) for k in range(n + 1)]  # ascending powers
    coeffs[1] -= 1
    roots = np.roots(coeffs[::-1])
    out = []
    for w in roots:
        z = cmath.log(complex(w))
        for _ in range(4):
            z -= sp.dv(z) / sp.d2v(z)
        if abs(sp.dv(z)) < 1e-12 and abs(z.imag) < PI:
            out.append(z)
    return sorted(out, key=lambda z: sp.v(z).imag)


def selected_saddle(n: int) -> complex:
    return saddles(n)[0]


def im_v_at_saddle(n: int) -> float:
    return SaddleProblem(n).v(selected_saddle(n)).imag


def g_factor(x: complex) -> complex:
    """(1 + e^x)^{ix/(2 pi)} e^{(i/pi) Li2(-e^x)}."""
    return cmath.exp(1j * x / (2 * PI) * _log1p_exp(x) + 1j / PI * _dilog_exp(x))


def leading_order(n: int, hbar: float) -> complex:
    sp = SaddleProblem(n)
    z = selected_saddle(n)
    return (cmath.exp(sp.v(z) / (2j * PI * hbar)) * g_factor(z) ** (-n)
            / cmath.sqrt(1j * sp.d2v(z)))


# ---------------------------------------------------------------------------
# descent contour


@dataclass
class DescentContour:
    anchor: complex
    nodes: list[complex]
    slopes: tuple[int, int] = (1, -1)

    def contour(self, spacing: float = 0.25) -> Contour:
        pts = [self.nodes[0]]
        for p in self.nodes[1:-1]:
            if abs(p - pts[-1]) >= spacing or abs(p - self.anchor) < 1e-12:
                pts.append(p)
        pts.append(self.nodes[-1])
        return Contour(tuple(pts))


def _trace_arm(sp: SaddleProblem, start: complex, target: float, step: float, limit: float) -> list[complex]:
    z = start
    pts = [z]
    while abs(z.real) < limit and len(pts) < 100000:
        d = sp.dv(z)
        # predictor: dz = -i conj(v') keeps Re v fixed and lowers Im v
        z = z - 1j * step * d.conjugate() / abs(d)
        # corrector: Newton on Re v along its gradient conj(v')
        for _ in range(8):
            err = sp.v(z).real - target
            if abs(err) < 1e-13:
                break
            d = sp.dv(z)
            z = z - err * d.conjugate() / abs(d) ** 2
        pts.append(z)
    return pts


def descent_contour(n: int, step: float = 0.02, limit: float = 8.0, tail: float = 4.0) -> DescentContour:
    """Level set Re v_n = Re v_n(z_n) through the selected saddle, traced in
    both directions until |Re z| > limit, then straight rays of slope -+1."""
    sp = SaddleProblem(n)
    z0 = selected_saddle(n)
    target = sp.v(z0).real
    # v'' dz^2 negative imaginary: Im v decreases with Re v fixed
    dz = cmath.sqrt(-1j / sp.d2v(z0))
    dz /= abs(dz)
    arms = []
    for s in (1, -1):
        start = z0 + s * step * dz
        for _ in range(8):
            d = sp.dv(start)
            start = start - (sp.v(start).real - target) * d.conjugate() / abs(d) ** 2
        arms.append(_trace_arm(sp, start, target, step, limit))
    right, left = (arms[0], arms[1]) if arms[0][-1].real > 0 else (arms[1], arms[0])
    left_end = left[-1] + tail * cmath.exp(-3j * PI / 4)
    right_end = right[-1] + tail * cmath.exp(-1j * PI / 4)
    nodes = [left_end] + left[::-1] + [z0] + right + [right_end]
    return DescentContour(z0, nodes)


def contour_check(n: int, dc: DescentContour) -> dict:
    """Deviation of Re v along the traced part and monotonicity of Im v on
    each arm."""
    sp = SaddleProblem(n)
    target = sp.v(dc.anchor).real
    traced = dc.nodes[1:-1]
    k = traced.index(dc.anchor)
    dev = max(abs(sp.v(z).real - target) for z in traced)
    im = [sp.v(z).imag for z in traced]
    mono = all(a > b for a, b in zip(im[k:], im[k + 1:])) and all(a > b for a, b in zip(im[k::-1], im[k - 1::-1]))
    return {"max_re_deviation": dev, "im_monotone": mono}


# ---------------------------------------------------------------------------
# quadrature


def _log_fn(n: int, hbar: float, mp: ModularParameter):
    s = 2 * PI * math.sqrt(hbar)

    def logf(z):
        z = np.asarray(z, dtype=complex)
        return -n * log_phi_b(z / s, mp) + 1j * z * z / (4 * PI * hbar)

    return logf


def gN(n: int, hbar: float, mp: ModularParameter | None = None, dc: DescentContour | None = None,
       density: float | None = None, order: int = 20) -> EvaluationResult:
    """g_n(hbar) along the descent contour through z_n."""
    mp = mp or ModularParameter.from_hbar(hbar)
    dc = dc or descent_contour(n)
    logf = _log_fn(n, hbar, mp)
    dens = density if density is not None else 1.5 / math.sqrt(hbar)
    res = integrate(lambda z: np.exp(logf(z)), dc.contour(), dens, order)
    scale = 1 / (2 * PI * math.sqrt(hbar))
    return EvaluationResult(scale * res.value, scale * res.abs_error, res.nodes, "descent contour", res.seconds)


def gN_line(n: int, hbar: float, mp: ModularParameter | None = None, lift: float = 0.1,
            density: float | None = None, order: int = 20) -> EvaluationResult:
    """g_n(hbar) in the variable y = z/(2 pi sqrt(hbar)) along a lifted real
    line with rotated tails: int Phi_b(y)^-n e^{i pi y^2} dy."""
    mp = mp or ModularParameter.from_hbar(hbar)
    R = 3.0
    h = 1j * lift * abs(mp.c_b)
    # e^{i pi y^2} on the left, e^{i pi (1 - n) y^2} on the right
    ll = math.sqrt(36 / PI)
    rl = math.sqrt(36 / (PI * (n - 1)))
    c = Contour((-R - 1 + h - ll * cmath.exp(1j * PI / 4), -R - 1 + h, R + 1 + h,
                 R + 1 + h + rl * cmath.exp(-1j * PI / 4)))

    def f(y):
        return np.exp(-n * log_phi_b(y, mp) + 1j * PI * y * y)

    return integrate(f, c, density if density is not None else 4.0, order)


@dataclass
class VolumeResult:
    n: int
    saddle: complex
    im_v: float
    estimate_by_hbar: dict[float, float]
    extrapolated: float
    values: dict[float, complex] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def rel_error(self) -> float:
        return abs(self.extrapolated - self.im_v) / abs(self.im_v)

    def to_dict(self) -> dict:
        return {"n": self.n, "saddle": [self.saddle.real, self.saddle.imag], "im_v": self.im_v,
                "estimate_by_hbar": {str(h): v for h, v in self.estimate_by_hbar.items()},
                "extrapolated": self.extrapolated, "rel_error": self.rel_error,
                "seconds": round(self.seconds, 6)}


def extrapolate(hbars: Sequence[float], values: Sequence[float], degree: int = 2) -> float:
    """Least-squares fit in powers of hbar; returns the hbar -> 0 value."""
    A = np.vander(np.asarray(hbars, dtype=float), degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(A, np.asarray(values, dtype=float), rcond=None)
    return float(coef[0])


def volume_estimate(n: int, hbars: Sequence[float] = (0.2, 0.1, 0.05, 0.02)) -> VolumeResult:
    t0 = time.perf_counter()
    if any(h <= 0 for h in hbars) or list(hbars) != sorted(hbars, reverse=True):
        raise ValueError("hbar sequence must be positive and decreasing")
    dc = descent_contour(n)
    vals, est = {}, {}
    for h in hbars:
        g = gN(n, h, dc=dc).value
        vals[h] = g
        est[h] = 2 * PI * h * math.log(abs(g))
    z = selected_saddle(n)
    extr = extrapolate(list(est), list(est.values()))
    return VolumeResult(n, z, SaddleProblem(n).v(z).imag, est, extr, vals, time.perf_counter() - t0)


def sweep_rows(n: int, hbars: Sequence[float]) -> list[dict]:
    """CSV rows (hbar, re_g, im_g, two_pi_hbar_log_abs)."""
    dc = descent_contour(n)
    rows = []
    for h in hbars:
        g = gN(n, h, dc=dc).value
        rows.append({"hbar": h, "re_g": g.real, "im_g": g.imag,
                     "two_pi_hbar_log_abs": 2 * PI * h * math.log(abs(g))})
    return rows
