"""Integral identities of Faddeev's quantum dilogarithm as quadrature oracles.

Each identity is evaluated twice: by direct contour quadrature and by its
closed form. The contours follow the real axis on the left (exponential decay),
pass above the origin when an i0 prescription asks for it, and on the right
either stay real or turn into the descent direction of the Gaussian phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .contour import Contour, EvaluationResult, integrate
from .qdl import PI, ModularParameter, log_phi_b, phi_b

NEG_INF = float("-inf")


class DomainError(ValueError):
    pass


def _phi(z, mp):
    return complex(phi_b(complex(z), mp))


def _contour(left_rate: float, right_rate: float, quad: float, lin: complex, knot: float,
             bump: float | None = None, digits: float = 38.0) -> Contour:
    """Contour for an integrand ~ e^{left_rate x} at -inf and
    ~ e^{i pi quad x^2 + 2 pi i lin x} at +inf (real decay right_rate if quad = 0)."""
    if left_rate <= 0:
        raise DomainError("integrand does not decay at -infinity")
    left = -(knot + digits / left_rate)
    pts: list[complex] = [left]
    if bump is not None:
        r = min(0.5, bump)
        pts += [-r, 1j * bump, r]
    if quad == 0:
        if right_rate <= 0:
            raise DomainError("integrand does not decay at +infinity")
        pts.append(knot + digits / right_rate)
        return Contour(tuple(pts))
    theta = PI / 4 if quad > 0 else -PI / 4
    d = cmath.exp(1j * theta)
    # |e^{i pi quad (knot + r d)^2 + 2 pi i lin (knot + r d)}| <~ e^{-pi |quad| r^2 + 2 pi g r}
    g = abs(lin) + abs(quad) * knot
    r = (2 * PI * g + math.sqrt(4 * PI ** 2 * g * g + 4 * PI * abs(quad) * digits)) / (2 * PI * abs(quad))
    pts += [knot, knot + r * d]
    return Contour(tuple(pts))


@dataclass
class IdentityCheck:
    name: str
    params: dict
    quadrature: complex
    closed: complex
    abs_error: float
    tol: float = 1e-6
    extra: dict = field(default_factory=dict)

    @property
    def rel_error(self) -> float:
        return abs(self.quadrature - self.closed) / abs(self.closed)

    @property
    def passed(self) -> bool:
        return self.rel_error < self.tol

    def to_dict(self) -> dict:
        return {"identity": self.name, "params": {k: str(v) for k, v in self.params.items()},
                "quadrature": [self.quadrature.real, self.quadrature.imag],
                "closed": [self.closed.real, self.closed.imag],
                "rel_error": self.rel_error, "abs_error_estimate": self.abs_error,
                "pass": self.passed, **self.extra}


# ---------------------------------------------------------------------------
# Ramanujan 1psi1 analog


@dataclass(frozen=True)
class RamanujanParams:
    u: complex
    v: complex
    w: complex

    def check(self, mp: ModularParameter):
        cb = abs(mp.c_b)
        u, v, w = self.u, self.v, self.w
        ok = v.imag + cb > 0 and -u.imag + cb > 0 and (v - u).imag < w.imag < 0
        if not ok:
            raise DomainError(f"parameters outside Im(v+c_b)>0, Im(c_b-u)>0, Im(v-u)<Im w<0: {self}")


def ramanujan_closed(p: RamanujanParams, mp: ModularParameter, form: int = 1) -> complex:
    cb = mp.c_b
    u, v, w = p.u, p.v, p.w
    if form == 1:
        return (mp.zeta_o * _phi(u - v - cb, mp) * _phi(w + cb, mp) / _phi(u - v + w - cb, mp)
                * cmath.exp(-2j * PI * w * (v + cb)))
    return (_phi(v - u - w + cb, mp) / (mp.zeta_o * _phi(v - u + cb, mp) * _phi(-w - cb, mp))
            * cmath.exp(-2j * PI * w * (u - cb)))


def ramanujan_integral(p: RamanujanParams, mp: ModularParameter, density: float = 3.0) -> EvaluationResult:
    p.check(mp)
    u, v, w = p.u, p.v, p.w

    def f(x):
        return np.exp(log_phi_b(x + u, mp) - log_phi_b(x + v, mp) + 2j * PI * w * x)

    knot = 1.0 + max(abs(u.real), abs(v.real))
    c = _contour(-2 * PI * w.imag, 2 * PI * (u - v + w).imag, 0.0, 0.0, knot)
    return integrate(f, c, density)


def ramanujan_psi(p: RamanujanParams, mp: ModularParameter, mode: str = "closed"):
    if mode == "closed":
        p.check(mp)
        return ramanujan_closed(p, mp)
    if mode == "integral":
        return ramanujan_integral(p, mp).value
    raise ValueError("mode must be 'integral' or 'closed'")


def sample_ramanujan(mp: ModularParameter, rng: np.random.Generator) -> RamanujanParams:
    """In-domain point, pulled halfway toward the centre of the constraint polytope."""
    cb = abs(mp.c_b)
    # centre of {Im v > -cb, Im u < cb, Im(v-u) < Im w < 0} on a bounded slice
    cu, cv = 0.25 * cb, -0.25 * cb
    iu = cu + 0.5 * rng.uniform(-0.5, 0.5) * cb
    iv = cv + 0.5 * rng.uniform(-0.5, 0.5) * cb
    lo = iv - iu
    iw = 0.5 * lo + 0.5 * rng.uniform(-0.4, 0.4) * abs(lo)
    re = rng.uniform(-0.5, 0.5, size=3)
    p = RamanujanParams(complex(re[0], iu), complex(re[1], iv), complex(re[2], iw))
    p.check(mp)
    return p


# ---------------------------------------------------------------------------
# Fourier transforms


def fourier_phi_plus_closed(w: complex, mp: ModularParameter, form: int = 1) -> complex:
    cb = mp.c_b
    if form == 1:
        return cmath.exp(2j * PI * w * cb) / (mp.zeta_o * _phi(-w - cb, mp))
    return mp.zeta_o * cmath.exp(-1j * PI * w * w) * _phi(w + cb, mp)


def fourier_phi_minus_closed(w: complex, mp: ModularParameter, form: int = 1) -> complex:
    cb = mp.c_b
    if form == 1:
        return mp.zeta_o * cmath.exp(-2j * PI * w * cb) * _phi(w + cb, mp)
    return cmath.exp(1j * PI * w * w) / (mp.zeta_o * _phi(-w - cb, mp))


def _fourier_integral(w: complex, mp: ModularParameter, sign: int, density: float) -> EvaluationResult:
    if not w.imag < 0:
        raise DomainError("Fourier transform of Phi_b^{+-1} needs Im w < 0")

    def f(x):
        return np.exp(sign * log_phi_b(x, mp) + 2j * PI * w * x)

    c = _contour(-2 * PI * w.imag, 0.0, float(sign), w, 1.0 + abs(w.real))
    return integrate(f, c, density)


def fourier_phi_plus(w: complex, mp: ModularParameter, mode: str = "closed"):
    """int Phi_b(x) e^{2 pi i w x} dx for Im w < 0."""
    if mode == "closed":
        if not w.imag < 0:
            raise DomainError("Fourier transform of Phi_b needs Im w < 0")
        return fourier_phi_plus_closed(w, mp)
    return _fourier_integral(w, mp, 1, 3.0).value


def fourier_phi_minus(w: complex, mp: ModularParameter, mode: str = "closed"):
    """int Phi_b(x)^{-1} e^{2 pi i w x} dx for Im w < 0."""
    if mode == "closed":
        if not w.imag < 0:
            raise DomainError("Fourier transform of 1/Phi_b needs Im w < 0")
        return fourier_phi_minus_closed(w, mp)
    return _fourier_integral(w, mp, -1, 3.0).value


# ---------------------------------------------------------------------------
# hypergeometric-type integrals I_n


def ihg_check(a: Sequence[complex], b: Sequence[complex], w: complex, mp: ModularParameter):
    """Conditions of the defining integral; -inf entries drop out."""
    cb = abs(mp.c_b)
    if len(b) != len(a) - 1:
        raise DomainError("I_n takes n upper and n-1 lower parameters")
    fa = [x for x in a if not _is_neg_inf(x)]
    fb = [x for x in b if not _is_neg_inf(x)]
    if any(complex(x).imag <= 0 for x in fb):
        raise DomainError("need Im b_j > 0")
    if any(cb - complex(x).imag <= 0 for x in fa):
        raise DomainError("need Im(c_b - a_j) > 0")
    if not complex(w).imag - cb < 0:
        raise DomainError("need Im(w - c_b) < 0")
    if len(fa) == len(a) and len(fb) == len(b):
        lower = sum(complex(bj).imag for bj in fb) - sum(complex(aj).imag for aj in fa) - len(a) * cb
        if not lower < complex(w).imag - cb:
            raise DomainError("need sum Im(b_j - a_j - c_b) < Im(w - c_b)")


def _is_neg_inf(x) -> bool:
    return isinstance(x, float) and x == NEG_INF


def ihg_integral(a: Sequence[complex], b: Sequence[complex], w: complex, mp: ModularParameter,
                 density: float = 3.0) -> EvaluationResult:
    """I_n(a; b; w) = int e^{2 pi i x (w - c_b)} prod Phi(x + a_j) / Phi(x + b_j - c_b),
    with b_n = i0 (the contour passes above the origin)."""
    ihg_check(a, b, w, mp)
    cb = mp.c_b
    fa = [complex(x) for x in a if not _is_neg_inf(x)]
    fb = [complex(x) for x in b if not _is_neg_inf(x)]

    def f(x):
        acc = 2j * PI * x * (w - cb) - log_phi_b(x - cb, mp)
        for aj in fa:
            acc = acc + log_phi_b(x + aj, mp)
        for bj in fb:
            acc = acc - log_phi_b(x + bj - cb, mp)
        return np.exp(acc)

    # phase at +inf: e^{i pi quad x^2 + 2 pi i lin x}
    quad = len(fa) - len(fb) - 1
    lin = (w - cb) + sum(fa) - sum(bj - cb for bj in fb) + cb
    left_rate = -2 * PI * (w - cb).imag
    right_rate = 2 * PI * lin.imag if quad == 0 else 0.0
    # keep the bump below the poles of Phi(x + a_j) and above those of the b_j factors
    gap = min([abs(mp.c_b) - aj.imag for aj in fa] + [abs(mp.c_b)])
    knot = 1.0 + max([abs(x.real) for x in fa + fb] + [0.0])
    c = _contour(left_rate, right_rate, quad, lin, knot, bump=0.5 * gap)
    return integrate(f, c, density)


def ihg1_closed(a: complex, w: complex, mp: ModularParameter) -> complex:
    return mp.zeta_o * _phi(a, mp) * _phi(w, mp) / _phi(a + w - mp.c_b, mp)


def ihg(n: int, a: Sequence, b: Sequence, w: complex, mp: ModularParameter) -> complex:
    if len(a) != n:
        raise DomainError(f"I_{n} takes {n} upper parameters")
    return ihg_integral(a, b, w, mp).value


def saal1_closed(a: complex, b: complex, d: complex, mp: ModularParameter) -> complex:
    """I_2(a, b; d; -c_b); a or b may be -inf."""
    cb = mp.c_b
    val = mp.zeta_o ** 3 * cmath.exp(1j * PI * d * (2 * cb - d))
    if _is_neg_inf(a) or _is_neg_inf(b):
        if not (_is_neg_inf(a) and _is_neg_inf(b)):
            live = b if _is_neg_inf(a) else a
            val *= _phi(live, mp) * _phi(live - d, mp)
        return val
    return val * _phi(a, mp) * _phi(b, mp) * _phi(a - d, mp) * _phi(b - d, mp) / _phi(a + b - d - cb, mp)


def saal_closed(a: complex, b: complex, c: complex, d: complex, mp: ModularParameter) -> complex:
    """I_3(a, b, c; d, a + b + c - d - c_b; -c_b)."""
    cb = mp.c_b
    num = _phi(a, mp) * _phi(b, mp) * _phi(c, mp) * _phi(a - d, mp) * _phi(b - d, mp) * _phi(c - d, mp)
    den = _phi(a + b - d - cb, mp) * _phi(b + c - d - cb, mp) * _phi(c + a - d - cb, mp)
    return mp.zeta_o ** 3 * cmath.exp(1j * PI * d * (2 * cb - d)) * num / den


def saalschuetz_full(a: complex, b: complex, c: complex, d: complex, mp: ModularParameter,
                     tol: float = 1e-6) -> IdentityCheck:
    cb = mp.c_b
    upper = (a, b, c)
    lower = (d, a + b + c - d - cb)
    res = ihg_integral(upper, lower, -cb, mp)
    return IdentityCheck("saalschuetz", {"a": a, "b": b, "c": c, "d": d}, res.value,
                         saal_closed(a, b, c, d, mp), res.abs_error, tol)


def euler_heine_sides(a: complex, b: complex, c: complex, w: complex, mp: ModularParameter):
    lhs = ihg_integral((a, b), (c,), w, mp)
    pref = (_phi(a, mp) * _phi(b, mp) * _phi(w, mp)
            / (_phi(c - b, mp) * _phi(c - a, mp) * _phi(a + b + w - c, mp)))
    rhs = ihg_integral((c - a, c - b), (c,), a + b + w - c, mp)
    return lhs, pref * rhs.value, rhs


def _in_domain(a, b, w, mp) -> bool:
    try:
        ihg_check(a, b, w, mp)
        return True
    except DomainError:
        return False


def sample_saal(mp: ModularParameter, rng: np.random.Generator):
    cb = abs(mp.c_b)
    while True:
        im = 0.5 * cb + 0.2 * cb * rng.uniform(0, 1, 3)
        idd = 0.15 * cb + 0.2 * cb * rng.uniform(0, 1)
        re = rng.uniform(-0.4, 0.4, 4)
        a, b, c = (complex(re[k], im[k]) for k in range(3))
        d = complex(re[3], idd)
        if _in_domain((a, b, c), (d, a + b + c - d - mp.c_b), -mp.c_b, mp):
            return a, b, c, d


def sample_saal1(mp: ModularParameter, rng: np.random.Generator):
    cb = abs(mp.c_b)
    while True:
        im = 0.2 * cb + 0.4 * cb * rng.uniform(0, 1, 2)
        idd = 0.2 * cb + 0.4 * cb * rng.uniform(0, 1)
        re = rng.uniform(-0.4, 0.4, 3)
        a, b = complex(re[0], im[0]), complex(re[1], im[1])
        d = complex(re[2], idd)
        if _in_domain((a, b), (d,), -mp.c_b, mp):
            return a, b, d


def sample_euler_heine(mp: ModularParameter, rng: np.random.Generator):
    """Parameters where both sides of the Euler-Heine transformation are in domain."""
    cb = abs(mp.c_b)
    while True:
        im = rng.uniform(0.05, 0.95, 4) * cb
        re = rng.uniform(-0.4, 0.4, 4)
        a, b, c = complex(re[0], im[0]), complex(re[1], im[1]), complex(re[2], im[2])
        w = complex(re[3], im[3] - cb)
        margin = 0.1 * cb
        lhs_ok = _in_domain((a, b), (c,), w, mp)
        rhs_ok = _in_domain((c - a, c - b), (c,), a + b + w - c, mp)
        if lhs_ok and rhs_ok and min(im[:3]) > margin and cb - max(im[:2]) > margin:
            return a, b, c, w


# ---------------------------------------------------------------------------
# batteries


def ramanujan_battery(mp: ModularParameter, points: int = 5, seed: int = 7, tol: float = 1e-6) -> list[IdentityCheck]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(points):
        p = sample_ramanujan(mp, rng)
        res = ramanujan_integral(p, mp)
        out.append(IdentityCheck("ramanujan", {"u": p.u, "v": p.v, "w": p.w}, res.value,
                                 ramanujan_closed(p, mp), res.abs_error, tol,
                                 {"forms_agree": abs(ramanujan_closed(p, mp) - ramanujan_closed(p, mp, 2))
                                  / abs(ramanujan_closed(p, mp))}))
    return out


def fourier_battery(mp: ModularParameter, points: int = 5, seed: int = 11, tol: float = 1e-6) -> list[IdentityCheck]:
    rng = np.random.default_rng(seed)
    cb = abs(mp.c_b)
    out = []
    for k in range(points):
        w = complex(rng.uniform(-0.5, 0.5), -cb * rng.uniform(0.2, 0.6))
        for sign, name, closed in ((1, "fourier_plus", fourier_phi_plus_closed),
                                   (-1, "fourier_minus", fourier_phi_minus_closed)):
            res = _fourier_integral(w, mp, sign, 3.0)
            c1, c2 = closed(w, mp, 1), closed(w, mp, 2)
            out.append(IdentityCheck(name, {"w": w}, res.value, c1, res.abs_error, tol,
                                     {"forms_agree": abs(c1 - c2) / abs(c1)}))
    return out


def saalschuetz_battery(mp: ModularParameter, points: int = 5, seed: int = 13, tol: float = 1e-6) -> list[IdentityCheck]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(points):
        out.append(saalschuetz_full(*sample_saal(mp, rng), mp, tol))
    for _ in range(points):
        a, b, d = sample_saal1(mp, rng)
        res = ihg_integral((a, b), (d,), -mp.c_b, mp)
        out.append(IdentityCheck("saalschuetz_limit", {"a": a, "b": b, "d": d}, res.value,
                                 saal1_closed(a, b, d, mp), res.abs_error, tol))
    return out


def euler_heine_battery(mp: ModularParameter, points: int = 5, seed: int = 17, tol: float = 1e-6) -> list[IdentityCheck]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(points):
        a, b, c, w = sample_euler_heine(mp, rng)
        lhs, rhs, rres = euler_heine_sides(a, b, c, w, mp)
        out.append(IdentityCheck("euler_heine", {"a": a, "b": b, "c": c, "w": w}, lhs.value, rhs,
                                 lhs.abs_error + rres.abs_error, tol))
    return out
