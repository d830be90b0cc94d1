"""Check batteries shared by the command line and the acceptance tests.

Every battery returns plain rows (dicts with a "pass" flag) so that reports
serialise deterministically.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import integral_identities as ii
from .kernels import (ChargeTriple, fundamental_lemma_residual, pentagon_charge_check, pentagon_completion,
                      psi_tilde_prime, psi_tilde_prime_quad)
from .qdl import PI, ModularParameter, phi_b, phi_shift_residual
from .shape_space import (check_gauge_in_weight_kernel, check_moment_map, check_weights_commute,
                          pachner_poisson_check, reduced_dims)
from .triangulation import (PAIR_OF, LeveledShape, apply_gauge, fixture, homology_h2, pachner32,
                            simplex_star, simplex_star_edge, weights)

QDL_BS = (0.3, 0.7, 1.0)
SUITES = ("qdl", "ramanujan", "saalschuetz", "fundamental-lemma", "pentagon")


def _row(name: str, params: dict, error: float, tol: float, **extra) -> dict:
    return {"identity": name, "params": params, "error": float(error), "tol": tol,
            "pass": bool(error < tol), **extra}


def _real_grid() -> np.ndarray:
    return np.linspace(-3.0, 3.0, 25)


def _strip_grid(mp: ModularParameter) -> np.ndarray:
    cb = abs(mp.c_b)
    xs = np.linspace(-2.0, 2.0, 9)
    ys = np.array([-0.4, -0.1, 0.2, 0.45]) * cb
    return (xs[:, None] + 1j * ys[None, :]).ravel()


def qdl_battery(bs=QDL_BS, tol: float = 1e-10) -> list[dict]:
    """Unitarity, inversion, both shift equations and b <-> 1/b on fixed grids."""
    rows = []
    for b in bs:
        mp = ModularParameter(b)
        x = _real_grid()
        z = _strip_grid(mp)
        # unitarity: |Phi(x)| = 1 on the real line, conj Phi(conj z) Phi(z) = 1 in the strip
        err_u = max(float(np.max(np.abs(np.abs(phi_b(x, mp)) - 1))),
                    float(np.max(np.abs(np.conj(phi_b(np.conj(z), mp)) * phi_b(z, mp) - 1))))
        rows.append(_row("unitarity", {"b": b}, err_u, tol))
        # inversion: Phi(z) Phi(-z) = zeta_inv^-1 e^{i pi z^2}
        lhs = phi_b(z, mp) * phi_b(-z, mp)
        rhs = np.exp(1j * PI * z * z) / mp.zeta_inv
        rows.append(_row("inversion", {"b": b}, float(np.max(np.abs(lhs / rhs - 1))), tol))
        # shift equations in both b and 1/b
        for sign in (1, -1):
            bs_ = b if sign > 0 else 1 / b
            pts = np.linspace(-1.5, 1.5, 13) + 0.1j * abs(mp.c_b)
            err = 0.0
            for p in pts:
                ref = abs(complex(phi_b(p - 0.5j * bs_, mp)))
                err = max(err, abs(phi_shift_residual(p, mp, sign)) / ref)
            rows.append(_row(f"shift_{'b' if sign > 0 else '1/b'}", {"b": b}, err, tol))
        other = ModularParameter(1 / b)
        err_s = float(np.max(np.abs(phi_b(z, mp) / phi_b(z, other) - 1)))
        rows.append(_row("b_to_1/b", {"b": b}, err_s, tol))
    return rows


def _identity_rows(checks) -> list[dict]:
    return [c.to_dict() | {"pass": bool(c.passed)} for c in checks]


def ramanujan_rows(mp: ModularParameter, points: int = 5) -> list[dict]:
    """Ramanujan analog and both Fourier transforms."""
    return _identity_rows(ii.ramanujan_battery(mp, points) + ii.fourier_battery(mp, points))


def saalschuetz_rows(mp: ModularParameter, points: int = 5) -> list[dict]:
    """Saalschuetz summation, its limit and Euler-Heine."""
    return _identity_rows(ii.saalschuetz_battery(mp, points) + ii.euler_heine_battery(mp, points))


LEMMA_CHARGES = ((0.1, 0.15), (0.2, 0.1), (0.12, 0.23))
LEMMA_POINTS = ((0.1, -0.2, 0.3), (-0.25, 0.15, 0.05), (0.3, 0.2, -0.1))


def fundamental_lemma_rows(mp: ModularParameter, tol: float = 1e-6) -> list[dict]:
    """Fourier closed form of psi_{a,c} and the three reduced tetrahedral symmetries."""
    rows = []
    xs = np.array([-0.7, -0.2, 0.0, 0.35, 0.9])
    for a, c in LEMMA_CHARGES:
        quad = psi_tilde_prime_quad(a, c, xs, mp)
        closed = np.array([complex(psi_tilde_prime(a, c, x, mp)) for x in xs])
        rows.append(_row("psi_tilde_prime", {"a": a, "c": c}, float(np.max(np.abs(quad / closed - 1))), tol))
    for which in ("p01", "p12", "p23"):
        for (a, c), pt in zip(LEMMA_CHARGES, LEMMA_POINTS):
            err = fundamental_lemma_residual(which, ChargeTriple(a, c), pt, mp)
            rows.append(_row(f"lemma_{which}", {"a": a, "c": c, "point": list(pt)}, err, tol))
    return rows


def random_pentagon_charges(rng: random.Random):
    """Five free positive rationals completed by the linear conditions,
    redrawn until every charge triple is positive."""
    while True:
        a0, a2, a4, c0, c4 = (Fraction(rng.randint(1, 60), rng.randint(61, 400)) for _ in range(5))
        a, c = pentagon_completion(a0, a2, a4, c0, c4)
        if all(Fraction(1, 2) - x - y > 0 for x, y in zip(a, c)):
            return a, c


def pentagon_rows(trials: int = 1000, seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        rep = pentagon_charge_check(*random_pentagon_charges(rng))
        if not (rep.ok and rep.positive):
            failures += 1
    return [{"identity": "pentagon_conditions", "params": {"trials": trials, "seed": seed},
             "failures": failures, "pass": failures == 0}]


def run_suite(name: str, mp: ModularParameter) -> list[dict]:
    if name == "qdl":
        return qdl_battery()
    if name == "ramanujan":
        return ramanujan_rows(mp)
    if name == "saalschuetz":
        return saalschuetz_rows(mp)
    if name == "fundamental-lemma":
        return fundamental_lemma_rows(mp)
    if name == "pentagon":
        return pentagon_rows()
    raise KeyError(f"unknown suite {name!r}")


# ---------------------------------------------------------------------------
# exact structure checks


def balanced_star_shape(X, e) -> LeveledShape:
    """Angle 2 pi/3 at the shared edge and pi/6 elsewhere in each tetrahedron."""
    angles = []
    for _, ed in X.edge_classes[e]:
        tri = [Fraction(1, 6)] * 3
        tri[PAIR_OF[ed]] = Fraction(2, 3)
        angles.append(tuple(tri))
    return LeveledShape(tuple(angles))


def _random_shape(n: int, rng: random.Random) -> LeveledShape:
    tris = []
    for _ in range(n):
        x, y = sorted(Fraction(rng.randint(1, 99), 100) for _ in range(2))
        if x == y:
            y = x + Fraction(1, 200)
        tris.append((x, y - x, 1 - y))
    return LeveledShape(tuple(tris))


def structure_rows(seed: int = 0) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for name in ("3_1_complement", "4_1_complement", "5_2_complement", "sp_4"):
        X = fixture(name)
        for rep in (check_moment_map(X), check_weights_commute(X), check_gauge_in_weight_kernel(X)):
            rows.append({"check": rep.name, "complex": name, "pass": rep.passed})
        s = _random_shape(X.tet_count, rng)
        inner = X.interior_edges()
        g1 = {e: Fraction(rng.randint(-9, 9), 37) for e in inner}
        g2 = {e: Fraction(rng.randint(-9, 9), 41) for e in inner}
        moved = apply_gauge(X, s, g1)
        rows.append({"check": "gauge_weight_invariance", "complex": name,
                     "pass": weights(X, moved) == weights(X, s)})
        both = apply_gauge(X, moved, g2)
        summed = apply_gauge(X, s, {e: g1[e] + g2[e] for e in inner})
        rows.append({"check": "gauge_additivity", "complex": name,
                     "pass": both.angles == summed.angles and both.level == summed.level})
    X = simplex_star()
    e = simplex_star_edge(X)
    s = balanced_star_shape(X, e)
    res = pachner32(X, s, e)
    kept = all(weights(X, s)[old] == weights(res.complex, res.shape)[new] for old, new in res.edge_map.items())
    rows.append({"check": "pachner_weight_preservation", "complex": "sp_3_ordered", "pass": kept})
    expected = tuple((Fraction(1, 3),) * 3 for _ in range(2))
    rows.append({"check": "pachner_positivity", "complex": "sp_3_ordered",
                 "pass": res.shape.is_positive() and res.shape.angles == expected})
    for rep in pachner_poisson_check(X, s, e):
        rows.append({"check": rep.name, "complex": "sp_3_ordered", "pass": rep.passed})
    for name in ("4_1_complement", "5_2_complement"):
        d = reduced_dims(fixture(name))
        rows.append({"check": "fiber_dimension", "complex": name, "value": d.dim_weight_fiber,
                     "pass": d.dim_weight_fiber == 2})
    return rows


ADMISSIBILITY_EXPECTED = {"3_1_complement": True, "4_1_complement": True, "5_2_complement": True,
                          "s2xs1_fixture": False}


def admissibility_rows() -> list[dict]:
    rows = []
    for name, expected in ADMISSIBILITY_EXPECTED.items():
        rep = homology_h2(fixture(name))
        rows.append({"complex": name, "h2": rep.describe(), "free_rank": rep.free_rank,
                     "admissible": rep.trivial, "pass": rep.trivial == expected})
    return rows

