"""Classical dilogarithm and Faddeev's quantum dilogarithm.

The quantum dilogarithm is evaluated from its integral representation

    log Phi_b(z) = int_{R + i0} exp(-2izw) / (4 sinh(wb) sinh(w/b) w) dw,

valid for |Im z| < |Im c_b|, and continued to the rest of the plane with the
shift equations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

PI = math.pi
ZETA2 = PI * PI / 6.0


class PoleError(ValueError):
    """Raised when an argument is too close to a pole of Phi_b."""


class CutError(ValueError):
    """Raised when Li2 is requested on its branch cut without a side."""


# ---------------------------------------------------------------------------
# classical dilogarithm


def _li2_series(w: complex) -> complex:
    # plain power series, used for |w| <= 1/2
    total = 0j
    term = w
    k = 1
    while True:
        add = term / (k * k)
        total += add
        if abs(add) < 1e-18 * max(abs(total), 1e-300):
            return total
        k += 1
        term *= w


# Bernoulli numbers B_{2k} / (2k+1)! for the series in u = -log(1 - w)
_BERN = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
         Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6),
         Fraction(-3617, 510), Fraction(43867, 798), Fraction(-174611, 330),
         Fraction(854513, 138), Fraction(-236364091, 2730),
         Fraction(8553103, 6), Fraction(-23749461029, 870)]
_BERN_COEF = [float(bk / math.factorial(2 * k + 3)) for k, bk in enumerate(_BERN)]


def _li2_bernoulli(w: complex) -> complex:
    # Li2(w) = u - u^2/4 + sum_k B_2k u^(2k+1)/(2k+1)!, u = -log(1-w);
    # accurate for |w| <= 1 and Re w <= 1/2
    u = -cmath.log(1.0 - w)
    u2 = u * u
    total = u - u2 / 4.0
    p = u * u2
    for coef in _BERN_COEF:
        add = coef * p
        total += add
        if abs(add) < 1e-18 * abs(total):
            break
        p *= u2
    return total


def _li2_unit(w: complex) -> complex:
    # |w| <= 1, w not in (1, inf)
    if abs(w) <= 0.5:
        return _li2_series(w)
    if w.real <= 0.5:
        return _li2_bernoulli(w)
    # reflection w -> 1 - w
    if w == 1:
        return complex(ZETA2)
    return -_li2_unit(1.0 - w) + ZETA2 - cmath.log(w) * cmath.log(1.0 - w)


def li2(w: complex, side: int | None = None) -> complex:
    """Principal branch of the dilogarithm Li2(w).

    Args:
        w: complex argument.
        side: for w real and > 1 (the cut), +1 selects the limit from above
            and -1 from below. Ignored elsewhere.

    Returns:
        Li2(w).
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError("non-finite argument")
    if w.imag == 0.0 and w.real > 1.0:
        if side not in (1, -1):
            raise CutError("Li2 on its branch cut needs side=+1 or -1")
        x = w.real
        lx = math.log(x)
        real = 2 * ZETA2 - 0.5 * lx * lx - _li2_unit(complex(1.0 / x)).real
        return complex(real, side * PI * lx)
    if abs(w) <= 1.0:
        return _li2_unit(w)
    # inversion w -> 1/w
    lg = cmath.log(-w)
    return -_li2_unit(1.0 / w) - ZETA2 - 0.5 * lg * lg


li2_vec = np.vectorize(li2, otypes=[complex], excluded={"side"})


# ---------------------------------------------------------------------------
# modular parameter


@dataclass(frozen=True)
class ModularParameter:
    """The parameter b > 0 and the constants derived from it."""

    b: float

    def __post_init__(self):
        if not (isinstance(self.b, (int, float)) and math.isfinite(self.b) and self.b > 0):
            raise ValueError(f"b must be a positive real, got {self.b!r}")

    @classmethod
    def from_hbar(cls, hbar: float) -> "ModularParameter":
        """The root b in (0, 1] of b + 1/b = hbar^(-1/2)."""
        if not (0 < hbar <= 0.25):
            raise ValueError("hbar must lie in (0, 1/4]")
        s = 1.0 / math.sqrt(hbar)
        disc = max(s * s - 4.0, 0.0)
        # smaller root of b^2 - s b + 1 = 0, written to avoid cancellation
        return cls(2.0 / (s + math.sqrt(disc)))

    @property
    def hbar(self) -> float:
        return 1.0 / (self.b + 1.0 / self.b) ** 2

    @property
    def c_b(self) -> complex:
        return 0.5j * (self.b + 1.0 / self.b)

    @property
    def q(self) -> complex:
        return cmath.exp(1j * PI * self.b ** 2)

    @property
    def zeta_o(self) -> complex:
        return cmath.exp(1j * PI * (1 - 4 * self.c_b ** 2) / 12)

    @property
    def zeta_inv(self) -> complex:
        return cmath.exp(1j * PI * (1 + 2 * self.c_b ** 2) / 6)

    @property
    def beta(self) -> float:
        """min(b, 1/b); Phi_b depends on b only through this."""
        return min(self.b, 1.0 / self.b)


# ---------------------------------------------------------------------------
# quantum dilogarithm


@dataclass(frozen=True)
class _Rule:
    """Trapezoidal nodes on the line R + i*eta for one value of beta."""

    t: np.ndarray
    h: float
    eta: float
    strip: float
    weights_plus: np.ndarray = field(repr=False)
    weights_minus: np.ndarray = field(repr=False)


_RULES: dict[float, _Rule] = {}


def _rule(mp: ModularParameter) -> _Rule:
    beta = mp.beta
    rule = _RULES.get(beta)
    if rule is not None:
        return rule
    cb = abs(mp.c_b)
    # nearest non-zero singularity of the integrand sits at i*pi*beta
    eta = PI * beta / 2.0
    h = 2.0 * PI * eta / 42.0
    strip = cb / 2.0
    # integrand decays like exp(-(2|c_b| - 2|Im z|)|t|)
    tmax = 43.0 / (2.0 * cb - 2.0 * strip)
    n = int(math.ceil(tmax / h))
    t = h * np.arange(-n, n + 1)
    out = []
    for s in (1.0, -1.0):
        w = t + 1j * s * eta
        out.append(h / (4.0 * np.sinh(w * mp.b) * np.sinh(w / mp.b) * w))
    rule = _Rule(t=t, h=h, eta=eta, strip=strip, weights_plus=out[0], weights_minus=out[1])
    _RULES[beta] = rule
    return rule


def _log_phi_strip(z: np.ndarray, mp: ModularParameter) -> np.ndarray:
    """log Phi_b by quadrature for |Im z| <= |c_b|/2 (vectorised)."""
    rule = _rule(mp)
    out = np.empty(z.shape, dtype=complex)
    b2 = mp.b ** 2 + mp.b ** -2
    # choose the side of the origin that damps exp(-2izw)
    left = z.real <= 0
    for mask, s, wts in ((left, 1.0, rule.weights_plus), (~left, -1.0, rule.weights_minus)):
        if not mask.any():
            continue
        zz = z[mask]
        w = rule.t + 1j * s * rule.eta
        chunk = max(1, 200000 // len(w))
        vals = np.empty(zz.shape, dtype=complex)
        for i in range(0, len(zz), chunk):
            zc = zz[i:i + chunk, None]
            vals[i:i + chunk] = np.exp(-2j * zc * w) @ wts
        if s < 0:
            # the line passes below the triple pole at 0: add -2 pi i Res
            vals += 1j * PI * zz ** 2 + 1j * PI * b2 / 12.0
        out[mask] = vals
    return out


def _log1p_exp(u: np.ndarray) -> np.ndarray:
    """log(1 + e^u) up to 2 pi i, stable for large |Re u|."""
    big = u.real > 0
    res = np.empty(u.shape, dtype=complex)
    res[~big] = np.log1p(np.exp(u[~big]))
    res[big] = u[big] + np.log1p(np.exp(-u[big]))
    return res


def log_phi_b(z, mp: ModularParameter, margin: float = 1e-12):
    """log Phi_b(z) modulo 2 pi i.

    Args:
        z: complex scalar or array.
        mp: modular parameter.
        margin: refuse arguments closer than this to a pole.

    Returns:
        array (or scalar) of log Phi_b(z).
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite argument")
    cb = abs(mp.c_b)
    if np.any(np.abs(z.imag) > 50 * cb):
        raise ValueError("|Im z| exceeds 50 |c_b|; refusing strip extension")
    if margin > 0:
        d = _pole_distance(z, mp)
        if np.any(d < margin):
            raise PoleError(f"argument within {margin} of a pole or zero of Phi_b")
    beta = mp.beta
    strip = cb / 2.0
    # number of beta-steps bringing Im z into [-strip, strip]
    steps = np.zeros(z.shape, dtype=int)
    over = np.abs(z.imag) > strip
    steps[over] = np.ceil((np.abs(z.imag[over]) - strip) / beta).astype(int)
    sgn = np.sign(z.imag).astype(int)
    acc = np.zeros(z.shape, dtype=complex)
    cur = z.copy()
    kmax = int(steps.max()) if steps.size else 0
    for _ in range(kmax):
        act = steps > 0
        up = act & (sgn > 0)
        dn = act & (sgn < 0)
        # Phi(z) = Phi(z - i beta) / (1 + exp(2 pi beta (z - i beta/2)))
        if up.any():
            acc[up] -= _log1p_exp(2 * PI * beta * (cur[up] - 0.5j * beta))
            cur[up] -= 1j * beta
        # Phi(z) = (1 + exp(2 pi beta (z + i beta/2))) Phi(z + i beta)
        if dn.any():
            acc[dn] += _log1p_exp(2 * PI * beta * (cur[dn] + 0.5j * beta))
            cur[dn] += 1j * beta
        steps[act] -= 1
    res = acc + _log_phi_strip(cur, mp)
    return res[0] if scalar else res


def phi_b(z, mp: ModularParameter, margin: float = 1e-12):
    """Faddeev's quantum dilogarithm Phi_b(z), vectorised over z."""
    return np.exp(log_phi_b(z, mp, margin))


def _pole_distance(z: np.ndarray, mp: ModularParameter) -> np.ndarray:
    # poles at c_b + i(m b + n/b), zeros at their negatives (singular for
    # log Phi and for 1/Phi); only lattice points with
    # Im near Im z matter, the real part is fixed at 0
    best = np.full(z.shape, np.inf)
    for loc in _lattice(mp, float(np.max(np.abs(z.imag))) + abs(mp.c_b) + 1.0):
        best = np.minimum(best, np.minimum(np.abs(z - loc), np.abs(z + loc)))
    return best


def _lattice(mp: ModularParameter, reach: float) -> list[complex]:
    pts = set()
    b, ib = mp.b, 1.0 / mp.b
    m = 0
    while m * b <= reach:
        n = 0
        while m * b + n * ib <= reach:
            pts.add(round(m * b + n * ib, 15))
            n += 1
        m += 1
    return [mp.c_b + 1j * p for p in sorted(pts)]


def nearest_singularity(z: complex, mp: ModularParameter) -> tuple[complex, str]:
    """Nearest pole (c_b + i m b + i n/b) or zero (its negative) of Phi_b."""
    z = complex(z)
    best = (math.inf, 0j, "zero")
    for loc in _lattice(mp, abs(z.imag) + abs(mp.c_b) + 1.0):
        for point, kind in ((loc, "pole"), (-loc, "zero")):
            d = abs(z - point)
            if d < best[0]:
                best = (d, point, kind)
    return best[1], best[2]


def phi_shift_residual(z: complex, mp: ModularParameter, sign: int) -> complex:
    """Phi(z - i b^s/2) - (1 + e^{2 pi b^s z}) Phi(z + i b^s/2) with s = sign."""
    bs = mp.b if sign > 0 else 1.0 / mp.b
    lo, hi = phi_b(np.array([z - 0.5j * bs, z + 0.5j * bs]), mp)
    return lo - (1 + cmath.exp(2 * PI * bs * z)) * hi


# ---------------------------------------------------------------------------
# semiclassical expansion

# B_{2n}(1/2) = (2^{1-2n} - 1) B_{2n}
_BERN_HALF = [Fraction(1)] + [(Fraction(1, 2 ** (2 * n - 1)) - 1) * _BERN[n - 1] for n in range(1, 5)]


def _logistic_derivs(x: float, kmax: int) -> list[float]:
    # d^k/dx^k of s = e^x/(1+e^x) as polynomials in s, using s' = s - s^2
    s = 1.0 / (1.0 + math.exp(-x))
    poly = np.array([0.0, 1.0])
    out = []
    for _ in range(kmax + 1):
        out.append(float(np.polyval(poly[::-1], s)))
        dpoly = np.polynomial.polynomial.polyder(poly)
        poly = np.polynomial.polynomial.polymul(dpoly, [0.0, 1.0, -1.0])
    return out


def phi_asymptotic(x: float, mp: ModularParameter, order: int = 0) -> complex:
    """Semiclassical approximation of Phi_b(x / (2 pi b)).

    Returns exp of sum_{n<=order} (2 pi i b^2)^{2n-1} B_2n(1/2)/(2n)! d^{2n} Li2(-e^x).
    """
    if not 0 <= order <= 4:
        raise ValueError("order must lie in 0..4")
    b2 = mp.b ** 2
    total = li2(-math.exp(x)) / (2j * PI * b2)
    # d^{2n} Li2(-e^x) = -d^{2n-2} s(x)
    ds = _logistic_derivs(x, 2 * order)
    for n in range(1, order + 1):
        coef = (2j * PI * b2) ** (2 * n - 1) * float(_BERN_HALF[n]) / math.factorial(2 * n)
        total += coef * (-ds[2 * n - 2])
    return cmath.exp(total)


# ---------------------------------------------------------------------------
# product formula (complex b with Im b^2 > 0)


def phi_product(z: complex, b: complex, tol: float = 1e-15) -> complex:
    """Phi_b(z) from the infinite product, valid only when Im b^2 > 0."""
    b = complex(b)
    if (b * b).imag <= 0:
        raise ValueError("product formula needs Im b^2 > 0")
    cb = 0.5j * (b + 1 / b)
    q2 = cmath.exp(2j * PI * b * b)
    qb2 = cmath.exp(-2j * PI / (b * b))
    num = _qpoch(cmath.exp(2 * PI * (z + cb) * b), q2, tol)
    den = _qpoch(cmath.exp(2 * PI * (z - cb) / b), qb2, tol)
    return num / den


def _qpoch(x: complex, q: complex, tol: float) -> complex:
    if abs(q) >= 1:
        raise ValueError("q-Pochhammer needs |q| < 1")
    prod = 1 + 0j
    term = x
    while abs(term) > tol:
        prod *= 1 - term
        term *= q
    return prod
