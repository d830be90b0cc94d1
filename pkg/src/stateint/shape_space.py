"""Exact linear algebra of the Neumann-Zagier bracket on shape spaces.

Coordinates are angles in units of pi on (tet, pair) slots. Everything is done
over the rationals, so every check is an equality rather than a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .triangulation import (PAIR_OF, PseudoManifold, LeveledShape, link_euler_characteristics,
                            pachner32, pair_epsilon)

Slot = tuple[int, int]


@dataclass(frozen=True)
class LinearFunctional:
    """sum of coefficient * alpha(slot) + constant, angles in units of pi."""

    coefficients: Mapping[Slot, Fraction] = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    def __add__(self, other: "LinearFunctional") -> "LinearFunctional":
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0) + v
        return LinearFunctional({k: v for k, v in out.items() if v}, self.constant + other.constant)

    def scale(self, c) -> "LinearFunctional":
        return LinearFunctional({k: c * v for k, v in self.coefficients.items()}, c * self.constant)

    def __call__(self, shape: LeveledShape):
        return self.constant + sum((v * shape.angles[t][p] for (t, p), v in self.coefficients.items()), Fraction(0))


def slot_functional(tet: int, pair: int) -> LinearFunctional:
    return LinearFunctional({(tet, pair): Fraction(1)})


def weight_functional(X: PseudoManifold, e: int) -> LinearFunctional:
    coef: dict[Slot, Fraction] = {}
    for t, edge in X.edge_classes[e]:
        key = (t, PAIR_OF[edge])
        coef[key] = coef.get(key, 0) + Fraction(1)
    return LinearFunctional(coef)


def epsilon_slots(X: PseudoManifold, a: Slot, b: Slot) -> int:
    if a[0] != b[0]:
        return 0
    return pair_epsilon(X.signs[a[0]], a[1], b[1])


def bracket_matrix(X: PseudoManifold) -> list[list[int]]:
    """Antisymmetric epsilon matrix on slots ordered (tet, pair)."""
    slots = [(t, p) for t in range(X.tet_count) for p in range(3)]
    return [[epsilon_slots(X, a, b) for b in slots] for a in slots]


def poisson_bracket(u: LinearFunctional, v: LinearFunctional, X: PseudoManifold) -> Fraction:
    total = Fraction(0)
    for a, ua in u.coefficients.items():
        for b, vb in v.coefficients.items():
            total += ua * vb * epsilon_slots(X, a, b)
    return total


def gauge_field(X: PseudoManifold, e: int) -> dict[Slot, Fraction]:
    """Components (units of pi per unit g) of the gauge vector field of edge e."""
    out: dict[Slot, Fraction] = {}
    for t, edge in X.edge_classes[e]:
        q = PAIR_OF[edge]
        for p in range(3):
            eps = pair_epsilon(X.signs[t], p, q)
            if eps:
                out[(t, p)] = out.get((t, p), 0) + eps
    return out


def _reduce_vector(X: PseudoManifold, vec: Mapping[Slot, Fraction]) -> list[Fraction]:
    # tangent vectors keep alpha_0 + alpha_1 + alpha_2 fixed; chart (alpha_0, alpha_1)
    out = []
    for t in range(X.tet_count):
        comp = [Fraction(vec.get((t, p), 0)) for p in range(3)]
        if sum(comp) != 0:
            raise ValueError(f"vector not tangent to the shape space at tetrahedron {t}")
        out += comp[:2]
    return out


def _reduce_covector(X: PseudoManifold, f: LinearFunctional) -> list[Fraction]:
    # alpha_2 = 1 - alpha_0 - alpha_1 in the chart
    out = []
    for t in range(X.tet_count):
        w = [Fraction(f.coefficients.get((t, p), 0)) for p in range(3)]
        out += [w[0] - w[2], w[1] - w[2]]
    return out


def symplectic_form(X: PseudoManifold) -> list[list[Fraction]]:
    """Inverse of the reduced bracket, block-diagonal by tetrahedron."""
    n = 2 * X.tet_count
    om = [[Fraction(0)] * n for _ in range(n)]
    for t, s in enumerate(X.signs):
        # bracket block s*[[0, 1], [-1, 0]] has inverse s*[[0, -1], [1, 0]]
        om[2 * t][2 * t + 1] = Fraction(-s)
        om[2 * t + 1][2 * t] = Fraction(s)
    return om


@dataclass
class CheckReport:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.name, "pass": self.passed, "witness": self.witness}


def check_moment_map(X: PseudoManifold) -> CheckReport:
    """Contraction of each gauge field with the symplectic form equals
    minus the differential of the edge weight."""
    om = symplectic_form(X)
    n = len(om)
    bad = {}
    for e in range(len(X.edge_classes)):
        v = _reduce_vector(X, gauge_field(X, e))
        contraction = [sum(v[i] * om[i][j] for i in range(n)) for j in range(n)]
        dw = _reduce_covector(X, weight_functional(X, e))
        if contraction != [-x for x in dw]:
            bad[e] = {"contraction": [str(x) for x in contraction], "minus_dw": [str(-x) for x in dw]}
    return CheckReport("moment_map", not bad, bad)


def check_weights_commute(X: PseudoManifold) -> CheckReport:
    """Weights of interior edges pairwise Poisson-commute."""
    bad = {}
    interior = X.interior_edges()
    ws = {e: weight_functional(X, e) for e in interior}
    for i in interior:
        for j in interior:
            if i < j:
                val = poisson_bracket(ws[i], ws[j], X)
                if val != 0:
                    bad[f"{i},{j}"] = str(val)
    return CheckReport("weights_commute", not bad, bad)


def check_gauge_in_weight_kernel(X: PseudoManifold) -> CheckReport:
    """Interior gauge directions leave every edge weight unchanged."""
    bad = {}
    for e in X.interior_edges():
        v = gauge_field(X, e)
        for f in range(len(X.edge_classes)):
            w = weight_functional(X, f)
            d = sum((v.get(k, 0) * c for k, c in w.coefficients.items()), Fraction(0))
            if d != 0:
                bad[f"{e},{f}"] = str(d)
    return CheckReport("gauge_preserves_weights", not bad, bad)


def rank(mat: list[list]) -> int:
    """Rank over the rationals by fraction-exact elimination."""
    rows = [[Fraction(x) for x in row] for row in mat if any(row)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass(frozen=True)
class ReducedDims:
    dim_total: int
    dim_gauge_orbit: int
    dim_reduced: int
    dim_weight_fiber: int
    h1_boundary: int | None

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.dim_total, self.dim_gauge_orbit, self.dim_reduced, self.dim_weight_fiber)


def reduced_dims(X: PseudoManifold) -> ReducedDims:
    """Dimensions of the shape space, gauge orbits, quotient and weight fibers.

    Only interior edges generate gauge transformations and impose weight
    conditions.
    """
    interior = X.interior_edges()
    total = 2 * X.tet_count
    orbit = rank([_reduce_vector(X, gauge_field(X, e)) for e in interior]) if interior else 0
    wrank = rank([_reduce_covector(X, weight_functional(X, e)) for e in interior]) if interior else 0
    fiber = total - wrank - orbit
    h1 = None
    if not X.boundary_faces:
        # vertex links are closed orientable surfaces: dim H^1 = 2 - chi per component
        h1 = sum(2 - chi for chi in link_euler_characteristics(X))
    return ReducedDims(total, orbit, total - orbit, fiber, h1)


def pachner_poisson_check(X: PseudoManifold, shape: LeveledShape, e: int) -> list[CheckReport]:
    """The 3-2 angle map intertwines brackets, keeps weights commuting and
    sends the gauge direction of the removed edge to zero."""
    res = pachner32(X, shape, e)
    Y = res.complex

    def pull(slot) -> LinearFunctional:
        return LinearFunctional({k: Fraction(1) for k in res.angle_map[slot]})

    new_slots = sorted(res.angle_map)
    bad = {}
    for i, a in enumerate(new_slots):
        for b in new_slots[i + 1:]:
            old = poisson_bracket(pull(a), pull(b), X)
            new = epsilon_slots(Y, a, b)
            if old != new:
                bad[f"{a},{b}"] = {"old": str(old), "new": new}
    reports = [CheckReport("bracket_intertwining", not bad, bad)]

    wbad = {}
    pulled = {}
    for f in range(len(Y.edge_classes)):
        acc = LinearFunctional()
        for slot, c in weight_functional(Y, f).coefficients.items():
            acc = acc + pull(slot).scale(c)
        pulled[f] = acc
    interior = set(Y.interior_edges())
    for f in pulled:
        for g in pulled:
            if f >= g:
                continue
            old = poisson_bracket(pulled[f], pulled[g], X)
            new = poisson_bracket(weight_functional(Y, f), weight_functional(Y, g), Y)
            if old != new or (f in interior and g in interior and new != 0):
                wbad[f"{f},{g}"] = {"old": str(old), "new": str(new)}
    reports.append(CheckReport("weight_brackets_preserved", not wbad, wbad))

    # gauge direction of e lies in the kernel of the angle map
    v = gauge_field(X, e)
    image = {slot: sum((v.get(k, 0) for k in src), Fraction(0)) for slot, src in res.angle_map.items()}
    kbad = {str(k): str(x) for k, x in image.items() if x != 0}
    reports.append(CheckReport("gauge_to_kernel", not kbad, kbad))

    # surviving gauge directions map to the corresponding gauge directions
    gbad = {}
    for f_old, f_new in res.edge_map.items():
        v = gauge_field(X, f_old)
        img = {slot: sum((v.get(k, 0) for k in src), Fraction(0)) for slot, src in res.angle_map.items()}
        tgt = gauge_field(Y, f_new)
        if any(img[k] != tgt.get(k, 0) for k in img):
            gbad[str(f_old)] = {"image": {str(k): str(x) for k, x in img.items() if x},
                                "target": {str(k): str(x) for k, x in tgt.items()}}
    reports.append(CheckReport("gauge_to_gauge", not gbad, gbad))
    return reports
