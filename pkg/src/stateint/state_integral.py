"""State integrals of shaped triangulations: assembly, exact delta
elimination and contour evaluation, plus the worked examples.

Every kernel is a delta constraint times e^{-i pi/12} psi_{p,q}(d) times a
Gaussian phase, so the whole integrand is carried symbolically as

    prefactor * prod_j psi_{p_j,q_j}(l_j . x) * exp(2 pi i x^T Q x)

with rational linear forms l_j and a rational symmetric matrix Q. Reduction
eliminates variables through the deltas and through Fourier deltas
(int dz e^{2 pi i z l(x)} = delta(l(x))), both exactly over the rationals.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .contour import Contour, EvaluationResult, integrate
from .kernels import ChargeTriple, kernel_for, log_psi_ac, nu, psi_tilde_prime_quad
from .qdl import PI, ModularParameter, PoleError, _pole_distance, log_phi_b, phi_b
from .shape_space import rank
from .triangulation import LeveledShape, PseudoManifold, _check_dims

Form = tuple[Fraction, ...]


class DivergenceError(ValueError):
    """The delta system is dependent, so the state integral contains delta(0)."""


class ContourError(ValueError):
    """The integrand has not decayed at the ends of the contour."""


# ---------------------------------------------------------------------------
# symbolic integrand


@dataclass(frozen=True)
class PsiFactor:
    """psi_{p,q}(form . x) contributed by tetrahedron `tet`."""

    p: float
    q: float
    form: Form
    tet: int


@dataclass
class StateIntegrand:
    labels: tuple[str, ...]
    interior: tuple[bool, ...]
    deltas: list[Form]
    factors: list[PsiFactor]
    quad: list[list[Fraction]]
    prefactor: complex

    @property
    def n_vars(self) -> int:
        return len(self.labels)


def _zero_form(n: int) -> list[Fraction]:
    return [Fraction(0)] * n


def assemble(X: PseudoManifold, ls: LeveledShape, mp: ModularParameter) -> StateIntegrand:
    """One variable per face class, one kernel per tetrahedron."""
    _check_dims(X, ls)
    if not ls.is_positive():
        raise ValueError("the state integral needs a strictly positive shape")
    var = {}
    labels, interior = [], []
    for k, cls in enumerate(X.face_classes):
        for slot in cls:
            var[slot] = k
        labels.append("x" + "=".join(f"{t}.{f}" for t, f in cls))
        interior.append(len(cls) == 2)
    n = len(labels)
    quad = [_zero_form(n) for _ in range(n)]
    deltas, factors = [], []
    prefactor = cmath.exp(1j * PI * float(ls.level) / (4 * mp.hbar))
    for t, (a, b, c) in enumerate(ls.charges()):
        sign = X.signs[t]
        kd = kernel_for(sign, ChargeTriple(a, c), tuple(var[(t, i)] for i in range(4)))
        v0, v1, v2, v3 = kd.variables
        delta = _zero_form(n)
        for v, coef in zip(kd.variables, kd.delta):
            delta[v] += coef
        deltas.append(tuple(delta))
        d = _zero_form(n)
        if sign > 0:
            # psi~'_{a,c}(x3 - x2) e^{2 pi i x0 (x3 - x2)}
            d[v3] += 1
            d[v2] -= 1
            factors.append(PsiFactor(float(c), float(b), tuple(d), t))
        else:
            # psi_{b,c}(x2 - x3) e^{i pi (x2 - x3)^2} e^{2 pi i x0 (x2 - x3)}
            d[v2] += 1
            d[v3] -= 1
            factors.append(PsiFactor(float(b), float(c), tuple(d), t))
            for i in range(n):
                for j in range(n):
                    quad[i][j] += d[i] * d[j] / 2
        for j in range(n):
            quad[v0][j] += d[j] / 2
            quad[j][v0] += d[j] / 2
        prefactor *= cmath.exp(-1j * PI / 12)
    return StateIntegrand(tuple(labels), tuple(interior), deltas, factors, quad, prefactor)


# ---------------------------------------------------------------------------
# exact reduction


@dataclass
class ReducedIntegral:
    source: StateIntegrand
    free_vars: tuple[int, ...]
    boundary_vars: tuple[int, ...]
    substitution: dict[int, Form]
    factors: list[PsiFactor]
    quad: list[list[Fraction]]
    prefactor: complex
    jacobian: Fraction
    residual_deltas: list[Form]
    fourier_vars: tuple[int, ...] = ()
    transformed_vars: tuple[int, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.free_vars)

    def check_substitution(self) -> bool:
        """Substituting back into every original delta gives exactly zero,
        modulo the residual boundary deltas."""
        n = self.source.n_vars
        for row in self.source.deltas:
            out = _substitute(row, self.substitution, n)
            if any(out) and not _in_span(out, self.residual_deltas):
                return False
        return True


def _substitute(form: Sequence[Fraction], subs: dict[int, Form], n: int) -> list[Fraction]:
    out = list(form)
    for p, expr in subs.items():
        c = out[p]
        if c:
            out[p] = Fraction(0)
            for j in range(n):
                out[j] += c * expr[j]
    return out


def _in_span(vec: Sequence[Fraction], rows: list[Form]) -> bool:
    from .shape_space import rank
    return rank([list(r) for r in rows] + [list(vec)]) == rank([list(r) for r in rows])


class _Reducer:
    def __init__(self, si: StateIntegrand):
        self.si = si
        self.n = si.n_vars
        self.subs: dict[int, Form] = {}
        self.factors = list(si.factors)
        self.quad = [list(r) for r in si.quad]
        self.jac = Fraction(1)
        self.residual: list[Form] = []
        self.fourier: list[int] = []
        self.removed: set[int] = set()
        self.transformed: list[int] = []
        self.phase = 0  # number of e^{-i pi/12} factors from Fourier transforms

    def eliminate(self, row: Sequence[Fraction]):
        row = _substitute(row, self.subs, self.n)
        piv = next((j for j in range(self.n) if self.si.interior[j] and j not in self.removed and row[j]), None)
        if piv is None:
            if not any(row):
                raise DivergenceError("dependent delta constraints: the integrand contains delta(0)")
            self.residual.append(tuple(row))
            return
        r = row[piv]
        expr = tuple(Fraction(0) if j == piv else -row[j] / r for j in range(self.n))
        self.jac /= abs(r)
        self.subs = {p: tuple(_substitute(e, {piv: expr}, self.n)) for p, e in self.subs.items()}
        self.subs[piv] = expr
        self.removed.add(piv)
        self.factors = [PsiFactor(f.p, f.q, tuple(_substitute(f.form, {piv: expr}, self.n)), f.tet)
                        for f in self.factors]
        self.residual = [tuple(_substitute(r_, {piv: expr}, self.n)) for r_ in self.residual]
        # Q -> S^T Q S with x_piv replaced by expr
        S = [[Fraction(int(i == j)) for j in range(self.n)] for i in range(self.n)]
        for j in range(self.n):
            S[piv][j] = expr[j]
        QS = [[sum(self.quad[i][k] * S[k][j] for k in range(self.n) if self.quad[i][k] and S[k][j])
               for j in range(self.n)] for i in range(self.n)]
        self.quad = [[sum(S[k][i] * QS[k][j] for k in range(self.n) if S[k][i] and QS[k][j])
                      for j in range(self.n)] for i in range(self.n)]

    def fourier_step(self) -> bool:
        for v in range(self.n):
            if not self.si.interior[v] or v in self.removed:
                continue
            if any(f.form[v] for f in self.factors) or self.quad[v][v]:
                continue
            ell = [2 * self.quad[v][j] for j in range(self.n)]
            for j in range(self.n):
                self.quad[v][j] = self.quad[j][v] = Fraction(0)
            self.removed.add(v)
            self.fourier.append(v)
            if not any(ell):
                raise DivergenceError(f"variable {self.si.labels[v]} appears nowhere: the integral diverges")
            self.eliminate(ell)
            return True
        return False


    def transform_step(self) -> bool:
        # int dv psi_{p,q}(alpha v + r) e^{2 pi i v l} = |alpha|^-1 e^{-2 pi i r l/alpha} psi~_{p,q}(-l/alpha)
        # with psi~_{p,q}(y) = e^{i pi y^2} e^{-i pi/12} psi_{q,1/2-p-q}(y)
        for v in range(self.n):
            if not self.si.interior[v] or v in self.removed or self.quad[v][v]:
                continue
            hits = [k for k, f in enumerate(self.factors) if f.form[v]]
            if len(hits) != 1:
                continue
            fac = self.factors[hits[0]]
            alpha = fac.form[v]
            r = [Fraction(0) if j == v else fac.form[j] for j in range(self.n)]
            ell = [Fraction(0) if j == v else 2 * self.quad[v][j] for j in range(self.n)]
            y = [-x / alpha for x in ell]
            for j in range(self.n):
                self.quad[v][j] = self.quad[j][v] = Fraction(0)
            for i in range(self.n):
                for j in range(self.n):
                    self.quad[i][j] += -(r[i] * ell[j] + ell[i] * r[j]) / (2 * alpha) + y[i] * y[j] / 2
            new = PsiFactor(fac.q, 0.5 - fac.p - fac.q, tuple(y), fac.tet)
            self.factors[hits[0]] = new
            self.jac /= abs(alpha)
            self.phase += 1
            self.removed.add(v)
            self.transformed.append(v)
            return True
        return False


def reduce_deltas(si: StateIntegrand, transforms: bool = True) -> ReducedIntegral:
    """Eliminate the deltas over the rationals, interior variables first,
    then integrate out variables that only enter linearly in the phase
    (Fourier deltas) or through a single kernel (Fourier transforms)."""
    red = _Reducer(si)
    for row in si.deltas:
        red.eliminate(row)
    while red.fourier_step() or (transforms and red.transform_step()):
        pass
    free = tuple(j for j in range(si.n_vars) if si.interior[j] and j not in red.removed)
    bnd = tuple(j for j in range(si.n_vars) if not si.interior[j])
    pref = si.prefactor * cmath.exp(-1j * PI * red.phase / 12)
    return ReducedIntegral(si, free, bnd, red.subs, red.factors, red.quad, pref,
                           red.jac, red.residual, tuple(red.fourier), tuple(red.transformed))


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class QuadratureConfig:
    density: float = 3.0
    order: int = 16
    radius: float = 3.0
    lift: float = 0.1          # central offset in units of |c_b|
    digits: float = 36.0       # tails are cut where the integrand is e^{-digits}
    max_tail: float = 40.0
    pole_margin: float = 0.05  # in units of |c_b|
    tail_tol: float = 1e-9


@dataclass
class SymbolicResult:
    """A distribution supported on residual boundary deltas."""

    residual_deltas: list[Form]
    labels: tuple[str, ...]
    coefficient: complex | None

    def describe(self) -> str:
        parts = []
        for row in self.residual_deltas:
            terms = [f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}{self.labels[j]}"
                     for j, c in enumerate(row) if c]
            parts.append("delta(" + "".join(terms).lstrip("+") + ")")
        return " ".join(parts)


def _numeric(form: Sequence[Fraction], idx: Sequence[int]) -> np.ndarray:
    return np.array([float(form[j]) for j in idx])


@dataclass
class _Coordinates:
    """Coordinates u = M v + s with v the free variables; u_i is the argument
    of factor `aligned[i]` when that is not None."""

    M: np.ndarray
    Minv: np.ndarray
    det: float
    aligned: list


def _coordinates(ri: ReducedIntegral) -> _Coordinates:
    k = ri.dimension
    rows, aligned = [], []
    for j, f in enumerate(ri.factors):
        r = [f.form[v] for v in ri.free_vars]
        if any(r):
            if rank(rows + [r]) > len(rows):
                rows.append(r)
                aligned.append(j)
        if len(rows) == k:
            break
    for i in range(k):
        if len(rows) == k:
            break
        e = [Fraction(int(i == j)) for j in range(k)]
        if rank(rows + [e]) > len(rows):
            rows.append(e)
            aligned.append(None)
    M = np.array([[float(x) for x in r] for r in rows]).reshape(k, k)
    return _Coordinates(M, np.linalg.inv(M) if k else M, float(np.linalg.det(M)) if k else 1.0, aligned)


def _tail_profile(ri: ReducedIntegral, coords: _Coordinates, mp: ModularParameter):
    """Per coordinate: (kappa_left, kappa_right, lift_sign, left_rate, right_rate).

    The integrand behaves like exp(i pi kappa u^2) along each coordinate axis;
    psi factors decay exponentially where their argument runs to the side on
    which 1/Phi tends to 1."""
    k = ri.dimension
    Qf = np.array([[float(ri.quad[a][b]) for b in ri.free_vars] for a in ri.free_vars]).reshape(k, k)
    Qu = coords.Minv.T @ Qf @ coords.Minv if k else Qf
    rate = 4 * PI * abs(mp.c_b)
    out = []
    for i in range(k):
        kl = kr = 2 * Qu[i, i]
        lift, left_rate, right_rate = set(), 0.0, 0.0
        for f in ri.factors:
            alpha = float(_numeric(f.form, ri.free_vars) @ coords.Minv[:, i])
            if abs(alpha) < 1e-15:
                continue
            lift.add(1 if alpha > 0 else -1)
            # |psi_{p,q}(d)| ~ e^{4 pi |c_b| p d} as d -> -infinity, ~ e^{-4 pi |c_b| q d} as d -> +infinity
            if alpha > 0:
                kr -= alpha ** 2
                left_rate += rate * f.p * alpha
                right_rate += rate * f.q * alpha
            else:
                kl -= alpha ** 2
                left_rate += rate * f.q * -alpha
                right_rate += rate * f.p * -alpha
        out.append((kl, kr, lift.pop() if len(lift) == 1 else 0, left_rate, right_rate))
    return out


def _axis_contour(profile, mp: ModularParameter, cfg: QuadratureConfig, center: float = 0.0) -> Contour:
    kl, kr, lift_sign, lrate, rrate = profile
    R = cfg.radius
    h = 1j * lift_sign * cfg.lift * abs(mp.c_b)

    def tail(kappa, rate):
        if abs(kappa) > 1e-12:
            angle = PI / 4 if kappa > 0 else -PI / 4
            length = math.sqrt(cfg.digits / (PI * abs(kappa)))
            if rate > 0:
                length = min(length, cfg.digits / rate)
            return angle, min(length, cfg.max_tail)
        if rate <= 0:
            raise ContourError("no decay mechanism along a coordinate: the integral is not absolutely convergent")
        return 0.0, min(cfg.digits / rate, cfg.max_tail)

    ra, rl = tail(kr, rrate)
    la, ll = tail(kl, lrate)
    # rays u = +-(R + s e^{i angle}): both decay when Im(kappa e^{2 i angle}) > 0
    left_start = center - R - 1 + h - ll * cmath.exp(1j * la)
    right_end = center + R + 1 + h + rl * cmath.exp(1j * ra)
    return Contour((left_start, center - R - 1 + h, center + R + 1 + h, right_end))


def _log_integrand(ri: ReducedIntegral, coords: _Coordinates, mp: ModularParameter,
                   boundary: dict[int, float], margin: float):
    """Returns f(grids) giving the log of the integrand on a tensor grid of
    coordinate values, and the Phi-argument distance guard."""
    free = ri.free_vars
    k = len(free)
    bvals = {j: float(boundary.get(j, 0.0)) for j in ri.boundary_vars}
    shifts = []
    for i, j in enumerate(coords.aligned):
        if j is None:
            shifts.append(0.0)
        else:
            f = ri.factors[j]
            shifts.append(sum(float(f.form[b]) * v for b, v in bvals.items()))
    shifts = np.array(shifts)
    Q = ri.quad
    Qff = np.array([[float(Q[a][b]) for b in free] for a in free]).reshape(k, k)
    lin = np.array([2 * sum(float(Q[a][b]) * v for b, v in bvals.items()) for a in free])
    const = sum(float(Q[a][b]) * bvals[a] * bvals[b] for a in bvals for b in bvals)

    def f(axes: list[np.ndarray]):
        shape = [len(ax) for ax in axes]
        grids = np.meshgrid(*axes, indexing="ij") if k else []
        us = [g - s for g, s in zip(grids, shifts)]
        vs = [sum(coords.Minv[a, i] * us[i] for i in range(k)) for a in range(k)]
        total = np.full(shape, 2j * PI * const, dtype=complex)
        for a in range(k):
            total = total + 2j * PI * lin[a] * vs[a]
            for b in range(k):
                if Qff[a, b]:
                    total = total + 2j * PI * Qff[a, b] * vs[a] * vs[b]
        for j, fac in enumerate(ri.factors):
            off = sum(float(fac.form[b]) * v for b, v in bvals.items())
            if j in coords.aligned:
                i = coords.aligned.index(j)
                vals = log_psi_ac(fac.p, fac.q, axes[i], mp)
                sl = [None] * k
                sl[i] = slice(None)
                total = total + vals[tuple(sl)]
            else:
                dvals = off + sum(float(fac.form[v]) * vs[a] for a, v in enumerate(free))
                total = total + log_psi_ac(fac.p, fac.q, dvals, mp)
        return total

    def guard(axes: list[np.ndarray]) -> float:
        grids = np.meshgrid(*axes, indexing="ij") if k else []
        us = [g - s for g, s in zip(grids, shifts)]
        vs = [sum(coords.Minv[a, i] * us[i] for i in range(k)) for a in range(k)]
        best = math.inf
        for fac in ri.factors:
            if not any(fac.form[v] for v in free):
                continue  # constant factors are evaluated exactly, not integrated
            off = sum(float(fac.form[b]) * v for b, v in bvals.items())
            d = off + sum(float(fac.form[v]) * vs[a] for a, v in enumerate(free))
            z = np.asarray(d, dtype=complex) - 2 * mp.c_b * (fac.p + fac.q)
            best = min(best, float(np.min(_pole_distance(np.atleast_1d(z), mp))))
        return best

    return f, guard


def evaluate(ri: ReducedIntegral, mp: ModularParameter, cfg: QuadratureConfig = QuadratureConfig(),
             boundary: dict[int, float] | None = None, contours: Sequence[Contour] | None = None):
    """Tensor-product Gauss-Legendre quadrature over the free variables.

    Returns a SymbolicResult when boundary deltas remain."""
    t0 = time.perf_counter()
    boundary = boundary or {}
    if ri.residual_deltas:
        return _symbolic(ri, mp)
    k = ri.dimension
    if k > 3:
        raise ValueError(f"generic evaluation is capped at 3 dimensions, got {k}")
    coords = _coordinates(ri)
    if contours is None:
        contours = [_axis_contour(p, mp, cfg) for p in _tail_profile(ri, coords, mp)]
    logf, guard = _log_integrand(ri, coords, mp, boundary, cfg.pole_margin)
    const = ri.prefactor * float(ri.jacobian) / abs(coords.det)
    if k == 0:
        val = const * complex(np.exp(logf([])))
        return EvaluationResult(val, 0.0, 1, "point", time.perf_counter() - t0)
    vals, nodes = [], 0
    for dens in (cfg.density / 2, cfg.density):
        rules = [c.rule(dens, cfg.order) for c in contours]
        axes = [r[0] for r in rules]
        dist = guard(axes)
        if dist < cfg.pole_margin * abs(mp.c_b):
            raise PoleError(f"contour passes within {dist:.3g} of a singularity of Phi_b")
        lg = logf(axes)
        grid = np.exp(lg)
        if dens == cfg.density:
            _check_tails(np.abs(grid), cfg.tail_tol)
        for r in reversed(rules):
            grid = grid @ r[1]
        vals.append(const * complex(grid))
        nodes = int(np.prod([len(a) for a in axes]))
    desc = " x ".join(c.describe() for c in contours)
    return EvaluationResult(vals[1], abs(vals[1] - vals[0]) * abs(1), nodes, desc, time.perf_counter() - t0)


def _check_tails(mag: np.ndarray, tol: float = 1e-9):
    """Raise unless the integrand is negligible at both ends of every axis."""
    top = float(np.max(mag))
    for ax in range(mag.ndim):
        for idx in (0, -1):
            edge = float(np.max(np.take(mag, idx, axis=ax)))
            if edge > tol * top:
                raise ContourError(f"integrand not decayed at the end of axis {ax}: "
                                   f"{edge:.3g} vs peak {top:.3g}")


def _symbolic(ri: ReducedIntegral, mp: ModularParameter) -> SymbolicResult:
    """Coefficient of the residual deltas when they pin every boundary
    variable and nothing is left to integrate."""
    labels = ri.source.labels
    coef = None
    bnd = list(ri.boundary_vars)
    from .shape_space import rank
    rows = [[r[j] for j in bnd] for r in ri.residual_deltas]
    if not ri.free_vars and len(rows) == len(bnd) and rank(rows) == len(bnd):
        det = abs(float(np.linalg.det(np.array([[float(x) for x in r] for r in rows]))))
        val = ri.prefactor * float(ri.jacobian) / det
        q0 = 0.0
        for fac in ri.factors:
            val *= complex(np.exp(log_psi_ac(fac.p, fac.q, 0.0, mp)))
        coef = val * cmath.exp(2j * PI * q0)
    return SymbolicResult(list(ri.residual_deltas), labels, coef)


def partition_function(X: PseudoManifold, ls: LeveledShape, mp: ModularParameter,
                       cfg: QuadratureConfig = QuadratureConfig(), boundary=None):
    """assemble, reduce and evaluate in one call."""
    return evaluate(reduce_deltas(assemble(X, ls, mp)), mp, cfg, boundary)


# ---------------------------------------------------------------------------
# one-dimensional building blocks


def contour_1d(kappa_left: float, kappa_right: float, mp: ModularParameter,
               cfg: QuadratureConfig = QuadratureConfig(), lift_sign: int = 1,
               center: float = 0.0) -> Contour:
    """Lifted central segment with tails rotated into the descent sectors of
    exp(i pi kappa u^2)."""
    return _axis_contour((kappa_left, kappa_right, lift_sign, 0.0, 0.0), mp, cfg, center)


def _chi_config(x: float, mp: ModularParameter, cfg: QuadratureConfig) -> QuadratureConfig:
    # log Phi_b varies on the scale b, so panels scale with 1/b
    return replace(cfg, density=cfg.density * max(1.0, 1.0 / mp.b), radius=cfg.radius + abs(x))


def _integrate_log(logf: Callable, contour: Contour, cfg: QuadratureConfig) -> EvaluationResult:
    def f(z):
        return np.exp(logf(z))

    res = integrate(f, contour, cfg.density, cfg.order)
    z, _ = contour.rule(cfg.density, cfg.order)
    _check_tails(np.abs(f(z)), cfg.tail_tol)
    return res


def chi41(x: float, mp: ModularParameter, cfg: QuadratureConfig = QuadratureConfig()) -> EvaluationResult:
    """int dy Phi(x - y)/Phi(y) e^{2 pi i x (2y - x)} above the singularities."""
    x = float(x)

    def logf(y):
        return log_phi_b(x - y, mp) - log_phi_b(y, mp) + 2j * PI * x * (2 * y - x)

    cfg = _chi_config(x, mp, cfg)
    return _integrate_log(logf, contour_1d(1.0, -1.0, mp, cfg), cfg)


def chi52(x: float, mp: ModularParameter, cfg: QuadratureConfig = QuadratureConfig()) -> EvaluationResult:
    """e^{-i pi/3} int dz e^{i pi (z - x)(z + x)} / (Phi(z + x) Phi(z - x) Phi(z))."""
    x = float(x)

    def logf(z):
        return (1j * PI * (z - x) * (z + x) - log_phi_b(z + x, mp) - log_phi_b(z - x, mp)
                - log_phi_b(z, mp))

    cfg = _chi_config(x, mp, cfg)
    res = _integrate_log(logf, contour_1d(1.0, -2.0, mp, cfg), cfg)
    ph = cmath.exp(-1j * PI / 3)
    return EvaluationResult(ph * res.value, res.abs_error, res.nodes, res.contour, res.seconds)


def phi_cb(c: float, b: float, mp: ModularParameter, cfg: QuadratureConfig = QuadratureConfig()) -> EvaluationResult:
    """int dz psi_{c,b}(z) e^{2 pi i z^2}."""
    def logf(z):
        return log_psi_ac(c, b, z, mp) + 2j * PI * z * z

    return _integrate_log(logf, contour_1d(2.0, 1.0, mp, cfg), cfg)


# ---------------------------------------------------------------------------
# values on the support of boundary deltas


def support_value(ri: ReducedIntegral, mp: ModularParameter, boundary: dict[int, float],
                  kernel_mode: str = "closed") -> complex:
    """The integrand with every delta stripped, at boundary values that
    satisfy the residual deltas; only meaningful when nothing is integrated.

    With kernel_mode="quadrature" each psi_{p,q} = e^{i pi/12} psi~'_{1/2-p-q,p}
    is computed from its defining Fourier integral."""
    if ri.free_vars:
        raise ValueError("support_value needs a fully reduced integrand")
    for row in ri.residual_deltas:
        if abs(sum(float(row[j]) * boundary.get(j, 0.0) for j in ri.boundary_vars)) > 1e-12:
            raise ValueError("boundary values violate a residual delta")
    x = {j: float(boundary.get(j, 0.0)) for j in ri.boundary_vars}
    val = ri.prefactor * float(ri.jacobian)
    q = sum(float(ri.quad[i][j]) * x[i] * x[j] for i in x for j in x)
    val *= cmath.exp(2j * PI * q)
    for fac in ri.factors:
        d = sum(float(fac.form[j]) * x[j] for j in x)
        if kernel_mode == "quadrature":
            val *= cmath.exp(1j * PI / 12) * complex(psi_tilde_prime_quad(0.5 - fac.p - fac.q, fac.p, d, mp)[0])
        else:
            val *= complex(np.exp(log_psi_ac(fac.p, fac.q, d, mp)))
    return val


def support_points(ri: ReducedIntegral, count: int, seed: int = 0, scale: float = 1.0) -> list[dict[int, float]]:
    """Seeded random boundary values on the support of the residual deltas."""
    from scipy.linalg import null_space
    bnd = list(ri.boundary_vars)
    A = np.array([[float(r[j]) for j in bnd] for r in ri.residual_deltas]).reshape(-1, len(bnd))
    basis = null_space(A) if len(A) else np.eye(len(bnd))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = basis @ rng.uniform(-scale, scale, basis.shape[1])
        out.append(dict(zip(bnd, v)))
    return out


@dataclass
class GaugePhaseReport:
    n: int
    lam: float
    predicted: complex
    ratios: list[complex]
    max_deviation: float
    tol: float = 1e-3

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def to_dict(self) -> dict:
        return {"n": self.n, "lambda": self.lam, "predicted_re": self.predicted.real,
                "predicted_im": self.predicted.imag,
                "ratios": [[r.real, r.imag] for r in self.ratios],
                "max_deviation": self.max_deviation, "pass": self.passed}


def spn_gauge_phase(n: int, a: Sequence[float], c: Sequence[float], lam: float, mp: ModularParameter,
                    points: int = 3, seed: int = 0, kernel_mode: str = "quadrature") -> GaugePhaseReport:
    """Z(SP_n, a, c + lam)/Z(SP_n, a, c) on the support of the boundary deltas
    against exp(2 pi i c_b^2 (n - 6 Q_e) lam / 3), Q_e = sum(a)."""
    from .triangulation import sp_n
    X = sp_n(n)
    a, c = [float(x) for x in a], [float(x) for x in c]
    if len(a) != n or len(c) != n:
        raise ValueError(f"need {n} charges a and c")
    base = LeveledShape.from_charges([(a[j], 0.5 - a[j] - c[j], c[j]) for j in range(n)])
    moved = LeveledShape.from_charges([(a[j], 0.5 - a[j] - c[j] - lam, c[j] + lam) for j in range(n)])
    r0 = reduce_deltas(assemble(X, base, mp))
    r1 = reduce_deltas(assemble(X, moved, mp))
    pred = cmath.exp(2j * PI * mp.c_b ** 2 * (n - 6 * sum(a)) * lam / 3)
    ratios = []
    for pt in support_points(r0, points, seed):
        ratios.append(support_value(r1, mp, pt, kernel_mode) / support_value(r0, mp, pt, kernel_mode))
    dev = max(abs(r / pred - 1) for r in ratios)
    return GaugePhaseReport(n, lam, pred, ratios, dev)


# ---------------------------------------------------------------------------
# worked examples


TREFOIL_TARGET = cmath.exp(-1j * PI / 6) / math.sqrt(3)


def trefoil_shape(w: float) -> LeveledShape:
    """c_1 = c_2 = w/2 and a_i = b_i; the edge e_1 has weight 2 pi w."""
    c = w / 2
    a = (0.5 - c) / 2
    return LeveledShape.from_charges([(a, a, c)] * 2)


def trefoil(w: float, mp: ModularParameter, cfg: QuadratureConfig = QuadratureConfig()) -> EvaluationResult:
    from .triangulation import fixture
    return partition_function(fixture("3_1_complement"), trefoil_shape(w), mp, cfg)


def figure_eight(plus: Sequence[float], minus: Sequence[float], mp: ModularParameter,
                 cfg: QuadratureConfig = QuadratureConfig()) -> EvaluationResult:
    """Charges (a, b, c) of the positive and the negative tetrahedron."""
    from .triangulation import fixture
    return partition_function(fixture("4_1_complement"), LeveledShape.from_charges([plus, minus]), mp, cfg)


def figure_eight_product(plus: Sequence[float], minus: Sequence[float], mp: ModularParameter,
                         cfg: QuadratureConfig = QuadratureConfig()) -> complex:
    """phi_{c+,b+} conj(phi_{c-,b-}), the factorised form."""
    p = phi_cb(plus[2], plus[1], mp, cfg).value
    m = phi_cb(minus[2], minus[1], mp, cfg).value
    return p * m.conjugate()


@dataclass
class LimitResult:
    example: str
    ts: list[float]
    values: list[complex]
    errors: list[float]
    extrapolated: complex
    target: complex
    derived_target: complex
    seconds: float

    @property
    def rel_error(self) -> float:
        return abs(self.extrapolated - self.target) / abs(self.target)

    @property
    def rel_error_derived(self) -> float:
        return abs(self.extrapolated - self.derived_target) / abs(self.derived_target)

    def to_dict(self) -> dict:
        return {"example": self.example, "ts": self.ts,
                "values": [[v.real, v.imag] for v in self.values],
                "extrapolated": [self.extrapolated.real, self.extrapolated.imag],
                "target": [self.target.real, self.target.imag],
                "derived_target": [self.derived_target.real, self.derived_target.imag],
                "rel_error": self.rel_error, "rel_error_derived": self.rel_error_derived,
                "seconds": self.seconds}


@dataclass(frozen=True)
class HParams:
    """Charges in the limit. h31: (a, b) of the single tetrahedron. h41: the
    central (b0, c0) and (a, b) of the side tetrahedra. h52: the central
    (b0, c0) and (alpha, c1, b2) with a1 = c2 = a3 = alpha, b3 = c1 + b2."""

    central: tuple[float, float] = (0.2, 0.3)
    side: tuple[float, ...] = (0.15, 0.15, 0.1)


def h_shape(example: str, t: float, p: HParams) -> LeveledShape:
    """Shape with knot weight 2 pi t whose other edges balance as t -> 0."""
    b0, c0 = p.central
    if example == "h31":
        a, b = b0, c0
        return LeveledShape.from_charges([(a - t / 2, b - t / 2, t)])
    central = (t, b0 - t / 2, c0 - t / 2)
    if example == "h41":
        A, B = p.side[:2]
        side = (A, B, 0.5 - A - B)
        return LeveledShape.from_charges([central, side, side])
    if example == "h52":
        al, c1, b2 = p.side
        b3 = c1 + b2
        return LeveledShape.from_charges([central, (al, 0.5 - al - c1, c1), (0.5 - b2 - al, b2, al),
                                          (al, b3, 0.5 - al - b3)])
    raise KeyError(f"unknown H-triangulation {example!r}")


def h_targets(example: str, p: HParams, mp: ModularParameter,
              cfg: QuadratureConfig = QuadratureConfig()) -> tuple[complex, complex]:
    """(stated closed form, closed form found by the exact reduction)."""
    b0, c0 = p.central
    if example == "h31":
        v = cmath.exp(-1j * PI / 6) / nu(c0, mp)
        return v, v
    if example == "h41":
        v = cmath.exp(-1j * PI / 12) * chi41(0.0, mp, cfg).value / nu(c0, mp)
        return v, v
    chi = chi52(0.0, mp, cfg).value
    stated = cmath.exp(1j * PI / 4) * chi / nu(c0, mp)
    derived = cmath.exp(-1j * PI / 12) * chi * nu(p.side[0], mp) / nu(b0, mp)
    return stated, derived


def h_triangulation_limit(example: str, mp: ModularParameter, p: HParams = HParams(),
                          ts: Sequence[float] = (0.02, 0.01, 0.005),
                          cfg: QuadratureConfig = QuadratureConfig()) -> LimitResult:
    """Phi_b(2 c_b t - c_b) Z(X_t) along the shape sequence, extrapolated to t = 0
    by the interpolating polynomial in t."""
    from .triangulation import fixture
    t0 = time.perf_counter()
    X = fixture(example)
    values, errors = [], []
    for t in ts:
        ls = h_shape(example, t, p)
        if not ls.is_positive():
            raise ValueError(f"shape at t={t} leaves the positive region")
        res = partition_function(X, ls, mp, cfg)
        ren = complex(phi_b(2 * mp.c_b * t - mp.c_b, mp))
        values.append(ren * res.value)
        errors.append(abs(ren) * res.abs_error)
    coef = np.polyfit(np.array(ts), np.array(values), len(ts) - 1)
    extrap = complex(coef[-1])
    stated, derived = h_targets(example, p, mp, cfg)
    return LimitResult(example, list(ts), values, errors, extrap, stated, derived, time.perf_counter() - t0)


def result_record(example: str, parameters: dict, res: EvaluationResult) -> dict:
    """CLI-facing JSON record."""
    return {"example": example, "parameters": parameters, "value_re": res.value.real,
            "value_im": res.value.imag, "abs_error": res.abs_error, "nodes": res.nodes,
            "seconds": round(res.seconds, 6)}
