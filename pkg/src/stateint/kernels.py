"""Charged tetrahedral kernels and their scalar identities.

Charges are dihedral angles divided by 2 pi; a triple (a, b, c) sums to 1/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .contour import Contour, integrate
from .qdl import PI, ModularParameter, log_phi_b

Number = float | Fraction


@dataclass(frozen=True)
class ChargeTriple:
    """Charges (a, c) with derived b = 1/2 - a - c."""

    a: Number
    c: Number

    @property
    def b(self) -> Number:
        return Fraction(1, 2) - self.a - self.c if _exact(self.a, self.c) else 0.5 - self.a - self.c

    def is_positive(self) -> bool:
        return self.a > 0 and self.b > 0 and self.c > 0

    def require_positive(self):
        if not self.is_positive():
            raise ValueError(f"charges must be strictly positive, got a={self.a}, b={self.b}, c={self.c}")


def _exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


# ---------------------------------------------------------------------------
# constant phases


def nu(x: float, mp: ModularParameter) -> complex:
    """nu(x) = exp(-i pi c_b^2 (4x + 1) / 6)."""
    return cmath.exp(-1j * PI * mp.c_b ** 2 * (4 * float(x) + 1) / 6)


def nu_pair(x: float, y: float, mp: ModularParameter) -> complex:
    """nu_{x,y} = exp(4 pi i c_b^2 x (x + y)) nu(x - y)."""
    x, y = float(x), float(y)
    return cmath.exp(4j * PI * mp.c_b ** 2 * x * (x + y)) * nu(x - y, mp)


def mu(c: float, b: float, mp: ModularParameter) -> complex:
    """mu_{c,b} = nu_{c,b} exp(8 pi i c_b^2 b (b + c))."""
    c, b = float(c), float(b)
    return nu_pair(c, b, mp) * cmath.exp(8j * PI * mp.c_b ** 2 * b * (b + c))


# ---------------------------------------------------------------------------
# kernel functions


def log_psi_ac(a: float, c: float, x, mp: ModularParameter, margin: float = 1e-12):
    """log of psi_{a,c}(x) = psi(x - 2c_b(a+c)) e^{-4 pi i c_b a (x - c_b(a+c))} e^{-i pi c_b^2 (4(a-c)+1)/6},
    where psi = 1/Phi_b."""
    a, c = float(a), float(c)
    cb = mp.c_b
    x = np.asarray(x, dtype=complex)
    return (-log_phi_b(x - 2 * cb * (a + c), mp, margin)
            - 4j * PI * cb * a * (x - cb * (a + c))
            - 1j * PI * cb ** 2 * (4 * (a - c) + 1) / 6)


def psi_ac(a: float, c: float, x, mp: ModularParameter, margin: float = 1e-12):
    """psi_{a,c}(x), vectorised over x."""
    return np.exp(log_psi_ac(a, c, x, mp, margin))


def psi_tilde_prime(a: float, c: float, x, mp: ModularParameter):
    """Closed form of e^{-i pi x^2} times the Fourier transform of psi_{a,c}:
    e^{-i pi/12} psi_{c,b}(x) with b = 1/2 - a - c."""
    b = 0.5 - float(a) - float(c)
    return cmath.exp(-1j * PI / 12) * psi_ac(c, b, x, mp)


def _decay_window(a: float, c: float, mp: ModularParameter, digits: float = 40.0) -> tuple[float, float]:
    # |psi_{a,c}(x)| ~ exp(4 pi |c_b| a x) on the left and exp(-4 pi |c_b| c x) on the right
    rate = 4 * PI * abs(mp.c_b)
    return -digits / (rate * a), digits / (rate * c)


def psi_tilde_quad(a: float, c: float, x, mp: ModularParameter, density: float = 3.0) -> np.ndarray:
    """Fourier transform int psi_{a,c}(y) e^{-2 pi i x y} dy by direct quadrature
    on the real line (absolutely convergent for positive charges)."""
    a, c = float(a), float(c)
    if not (a > 0 and c > 0 and 0.5 - a - c > 0):
        raise ValueError("direct Fourier quadrature needs strictly positive charges")
    lo, hi = _decay_window(a, c, mp)
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    dens = density * max(1.0, float(np.max(np.abs(x))))
    y, w = Contour((lo, 0.0, hi)).rule(dens, 20)
    vals = psi_ac(a, c, y, mp) * w
    return np.exp(-2j * PI * np.outer(x, y)) @ vals


def psi_tilde_prime_quad(a: float, c: float, x, mp: ModularParameter) -> np.ndarray:
    """e^{-i pi x^2} psi~_{a,c}(x) with the transform done by quadrature."""
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    return np.exp(-1j * PI * x ** 2) * psi_tilde_quad(a, c, x, mp)


# ---------------------------------------------------------------------------
# kernel descriptors


@dataclass(frozen=True)
class KernelDescriptor:
    """A tetrahedral kernel as a delta constraint times a smooth factor.

    `variables` holds the labels of the faces 0..3 of the tetrahedron. The
    delta is sum(delta[i] * x_i) = 0.
    """

    sign: int
    charges: ChargeTriple
    variables: tuple
    delta: tuple[int, int, int, int]

    def factor(self, xs: Sequence, mp: ModularParameter):
        """Smooth factor at face values xs = (x_0, x_1, x_2, x_3)."""
        return np.exp(self.log_factor(xs, mp))

    def log_factor(self, xs: Sequence, mp: ModularParameter):
        x0, x1, x2, x3 = (np.asarray(v, dtype=complex) for v in xs)
        c, b = float(self.charges.c), float(self.charges.b)
        if self.sign > 0:
            # <x0,x2|T(a,c)|x1,x3> = delta(x0+x2-x1) psi~'_{a,c}(x3-x2) e^{2 pi i x0 (x3-x2)}
            d = x3 - x2
            return (-1j * PI / 12 + log_psi_ac(c, b, d, mp) + 2j * PI * x0 * d)
        # <x1,x3|Tbar(a,c)|x0,x2> = delta(x0+x2-x1) psi_{b,c}(x2-x3) e^{-i pi/12}
        #                           e^{i pi (x2-x3)^2} e^{-2 pi i x0 (x3-x2)}
        d = x2 - x3
        return (log_psi_ac(b, c, d, mp) - 1j * PI / 12 + 1j * PI * d ** 2 + 2j * PI * x0 * d)


def kernel_for(sign: int, charges: ChargeTriple, variables: Sequence = (0, 1, 2, 3)) -> KernelDescriptor:
    """Kernel of a tetrahedron of the given sign; charges (a, c) are those of
    the edges v0v1 and v0v3."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    charges.require_positive()
    return KernelDescriptor(sign, charges, tuple(variables), (1, -1, 1, 0))


def angle_kernel_log_factor(alphas: Sequence[float], xs: Sequence, mp: ModularParameter,
                            literal: bool = False):
    """Single positive tetrahedron kernel written in terms of angles over pi.

    `alphas` are (alpha_0, alpha_1, alpha_2) = angles of the edges opposite to
    v0v1, v0v2, v0v3, divided by pi. With literal=True the Phi argument uses
    alpha_1 and the linear term uses alpha_0 in place of an undefined index;
    the default uses alpha_0 and alpha_2, which agrees with `kernel_for`.
    """
    al0, al1, al2 = (float(v) for v in alphas)
    hbar = mp.hbar
    x0, x1, x2, x3 = (np.asarray(v, dtype=complex) for v in xs)
    sq = math.sqrt(hbar)
    phi_t = al0 * al2 + (al0 - al2) / 3 - (2 * hbar + 1) / 6
    shift = al1 if literal else al0
    lin = al0 if literal else al2
    d = x3 - x2
    return (2j * PI * d * (x0 + lin / (2j * sq)) + 1j * PI * phi_t / (4 * hbar)
            - log_phi_b(d + (1 - shift) / (2j * sq), mp))


# ---------------------------------------------------------------------------
# charged pentagon


@dataclass
class PentagonReport:
    linear_ok: bool
    quadratic_ok: bool
    positive: bool
    p_e: Number
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.linear_ok and self.quadratic_ok


def pentagon_charge_check(a: Sequence[Number], c: Sequence[Number]) -> PentagonReport:
    """Check the five linear charge conditions and the quadratic identity.

    The quadratic identity is evaluated exactly when the inputs are rationals.
    """
    a0, a1, a2, a3, a4 = a
    c0, c1, c2, c3, c4 = c
    fails = []
    for name, lhs, rhs in (("a1=a0+a2", a1, a0 + a2), ("a3=a2+a4", a3, a2 + a4),
                           ("c1=c0+a4", c1, c0 + a4), ("c3=a0+c4", c3, a0 + c4),
                           ("c2=c1+c3", c2, c1 + c3)):
        if lhs != rhs:
            fails.append(name)
    quad = a2 * c2 + a4 * c4 + a4 * (a0 - c3) == a2 * (a4 + c0 + c3)
    if not quad:
        fails.append("quadratic")
    half = Fraction(1, 2) if _exact(*a, *c) else 0.5
    positive = all(x > 0 for x in (*a, *c)) and all(half - ai - ci > 0 for ai, ci in zip(a, c))
    p_e = 2 * (c0 + a2 + c4) - half
    return PentagonReport(not [f for f in fails if f != "quadratic"], quad, positive, p_e, fails)


def pentagon_completion(a0: Number, a2: Number, a4: Number, c0: Number, c4: Number):
    """The charges fixed by the linear conditions from five free ones."""
    a1, a3 = a0 + a2, a2 + a4
    c1, c3 = c0 + a4, a0 + c4
    return (a0, a1, a2, a3, a4), (c0, c1, c1 + c3, c3, c4)


# ---------------------------------------------------------------------------
# fundamental lemma in delta-reduced scalar form


def _tbar_reduced(A: float, C: float, u: float, v: float, y: float, mp: ModularParameter) -> complex:
    # smooth factor of <x,y|Tbar(A,C)|u,v> with x = u + v
    B = 0.5 - A - C
    d = v - y
    return complex(psi_ac(B, C, d, mp) * cmath.exp(-1j * PI / 12 + 1j * PI * d * d - 2j * PI * u * (y - v)))


def fundamental_lemma_sides(which: str, charges: ChargeTriple, point: Sequence[float],
                            mp: ModularParameter) -> tuple[complex, complex]:
    """Both sides of one tetrahedral symmetry identity at (u, v, y), x = u + v.

    The left side uses the Fourier transform by direct quadrature (p01, p23)
    or a Gaussian convolution by quadrature (p12).
    """
    charges.require_positive()
    a, c, b = float(charges.a), float(charges.c), float(charges.b)
    u, v, y = (float(p) for p in point[:3])
    x = u + v
    if which == "p01":
        lhs = complex(psi_tilde_prime_quad(a, c, v - y, mp)[0]) * cmath.exp(
            2j * PI * x * (v - y) + 1j * PI * (y * y - v * v))
        rhs = _tbar_reduced(a, b, u, v, y, mp)
    elif which == "p12":
        rate = 4 * PI * abs(mp.c_b)
        lo, hi = -40 / (rate * c), 40 / (rate * b)

        def g(s):
            # s = t - x
            return (psi_tilde_prime(a, c, s, mp) * np.exp(-2j * PI * u * s)
                    * np.exp(1j * PI * (s + x - y) ** 2))

        dens = 3.0 * max(1.0, abs(x - y), abs(u))
        res = integrate(g, Contour((lo, 0.0, hi)), density=dens)
        lhs = cmath.exp(-1j * PI / 12 - 1j * PI * u * u) * res.value
        rhs = _tbar_reduced(b, c, u, v, y, mp)
    elif which == "p23":
        lhs = complex(psi_tilde_prime_quad(a, c, v - y, mp)[0]) * cmath.exp(
            1j * PI * (y - x - u) * (y - x + u))
        rhs = _tbar_reduced(a, b, u, v, y, mp)
    else:
        raise ValueError("which must be one of p01, p12, p23")
    return lhs, rhs


def fundamental_lemma_residual(which: str, charges: ChargeTriple, point: Sequence[float],
                               mp: ModularParameter) -> float:
    """Relative difference of the two sides of a tetrahedral symmetry identity."""
    lhs, rhs = fundamental_lemma_sides(which, charges, point, mp)
    return abs(lhs - rhs) / abs(rhs)


def lemma_charge_map(which: str, charges: ChargeTriple) -> ChargeTriple:
    """Charges of the negative kernel produced by each identity."""
    a, c, b = charges.a, charges.c, charges.b
    return {"p01": ChargeTriple(a, b), "p12": ChargeTriple(b, c), "p23": ChargeTriple(a, b)}[which]
