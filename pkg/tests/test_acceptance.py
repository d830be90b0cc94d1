"""Acceptance criteria, one block per criterion.

The identity oracles (criterion 2) run first through a session fixture; the
worked examples that rest on them request it and fail if it did not pass.
"""

import cmath
import math
import time

import pytest

from oracles import phi_mp
from stateint import batteries
from stateint import integral_identities as ii
from stateint.asymptotics import SaddleProblem, gN, leading_order, saddles, volume_estimate
from stateint.kernels import pentagon_charge_check
from stateint.qdl import PI, ModularParameter, phi_b
from stateint.state_integral import TREFOIL_TARGET, chi41, chi52, h_triangulation_limit, spn_gauge_phase, trefoil
from stateint.triangulation import fixture, homology_h2

MP = ModularParameter(0.8)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def _failed(rows):
    return [r for r in rows if not r["pass"]]


# ---------------------------------------------------------------------------
# 1


@criterion(1, "quantum dilogarithm battery")
def test_qdl_battery():
    t0 = time.perf_counter()
    rows = batteries.qdl_battery(batteries.QDL_BS, tol=1e-10)
    names = {r["identity"] for r in rows}
    assert {"unitarity", "inversion", "shift_b", "shift_1/b", "b_to_1/b"} <= names
    assert not _failed(rows), _failed(rows)
    assert time.perf_counter() - t0 < 60


@criterion(1, "quantum dilogarithm battery")
@pytest.mark.parametrize("b", [0.3, 0.7])
def test_qdl_dual_parameter_against_oracle(b):
    # Phi evaluated at 1/b against the independent integral at b
    dual = ModularParameter(1 / b)
    for z in (0.3 + 0.1j, -0.8 - 0.05j, 1.2):
        assert abs(complex(phi_b(z, dual)) / phi_mp(z, b) - 1) < 1e-10


# ---------------------------------------------------------------------------
# 2


@pytest.fixture(scope="session")
def appendix_identities():
    t0 = time.perf_counter()
    checks = {
        "ramanujan": ii.ramanujan_battery(MP, points=5),
        "fourier": ii.fourier_battery(MP, points=5),
        "saalschuetz": ii.saalschuetz_battery(MP, points=5),
        "euler_heine": ii.euler_heine_battery(MP, points=5),
    }
    return checks, time.perf_counter() - t0


def _identities_ok(appendix_identities):
    checks, _ = appendix_identities
    return all(c.passed for group in checks.values() for c in group)


@criterion(2, "integral identity oracles")
def test_appendix_identities(appendix_identities):
    checks, seconds = appendix_identities
    for name, group in checks.items():
        kinds = {c.name for c in group}
        for kind in kinds:
            assert sum(c.name == kind for c in group) >= 5, (name, kind)
        bad = [c.to_dict() for c in group if not (c.passed and c.rel_error < 1e-6)]
        assert not bad, bad
    assert {c.name for c in checks["saalschuetz"]} == {"saalschuetz", "saalschuetz_limit"}
    assert seconds < 300


# ---------------------------------------------------------------------------
# 3


@criterion(3, "kernel symmetries and pentagon conditions")
def test_fundamental_lemma():
    rows = batteries.fundamental_lemma_rows(MP, tol=1e-6)
    kinds = {r["identity"] for r in rows}
    assert kinds == {"psi_tilde_prime", "lemma_p01", "lemma_p12", "lemma_p23"}
    assert not _failed(rows), _failed(rows)


@criterion(3, "kernel symmetries and pentagon conditions")
def test_pentagon_random_draws():
    import random
    rng = random.Random(0)
    for _ in range(1000):
        rep = pentagon_charge_check(*batteries.random_pentagon_charges(rng))
        assert rep.linear_ok and rep.quadratic_ok and rep.positive


# ---------------------------------------------------------------------------
# 4


@criterion(4, "trefoil state integral")
def test_trefoil(appendix_identities):
    assert _identities_ok(appendix_identities), "identity oracles must pass first"
    t0 = time.perf_counter()
    res = trefoil(1 - 1e-3, MP)
    assert abs(res.value - TREFOIL_TARGET) < 5e-3
    assert abs(abs(res.value) - 0.577350) < 5e-3
    v06 = trefoil(1 - 1e-3, ModularParameter(0.6)).value
    v10 = trefoil(1 - 1e-3, ModularParameter(1.0)).value
    assert abs(v06 - v10) < 1e-3
    assert time.perf_counter() - t0 < 300


# ---------------------------------------------------------------------------
# 5


@criterion(5, "H-triangulation limits")
@pytest.mark.parametrize("example", ["h31", "h41"])
def test_h_limit(appendix_identities, example):
    assert _identities_ok(appendix_identities), "identity oracles must pass first"
    res = h_triangulation_limit(example, MP)
    assert res.rel_error < 1e-2
    assert res.seconds < 600


@criterion(5, "H-triangulation limits")
@pytest.mark.xfail(strict=True, reason="stated h52 closed form differs from the computed limit by a constant "
                                       "phase; see the derived target")
def test_h52_limit_stated_form(appendix_identities):
    assert _identities_ok(appendix_identities)
    res = h_triangulation_limit("h52", MP)
    assert res.rel_error < 1e-2


@criterion(5, "H-triangulation limits")
def test_h52_limit_derived_form(appendix_identities):
    assert _identities_ok(appendix_identities), "identity oracles must pass first"
    res = h_triangulation_limit("h52", MP)
    assert res.rel_error_derived < 1e-2
    # the two targets differ only in phase
    assert abs(abs(res.target) - abs(res.derived_target)) < 1e-12 * abs(res.target)
    assert res.seconds < 600


# ---------------------------------------------------------------------------
# 6


@criterion(6, "volume asymptotics")
@pytest.mark.parametrize("n,target", [(2, -2.029883), (3, -2.828122)])
def test_volume(n, target):
    sp = SaddleProblem(n)
    assert all(abs(sp.dv(z)) < 1e-12 for z in saddles(n))
    res = volume_estimate(n, (0.2, 0.1, 0.05, 0.02))
    assert abs(res.extrapolated - target) < 5e-3 * abs(target)
    assert res.seconds < 900


@criterion(6, "volume asymptotics")
def test_leading_order_ratio():
    ratio = abs(gN(2, 0.02).value) / abs(leading_order(2, 0.02))
    assert abs(ratio - 1) < 0.02


# ---------------------------------------------------------------------------
# 7


@criterion(7, "SP3 gauge phase")
@pytest.mark.parametrize("a,c,lam", [([0.1] * 3, [0.15] * 3, 0.02),
                                     ([0.12, 0.1, 0.08], [0.1, 0.15, 0.2], 1 / 24)])
def test_sp3_gauge_phase(a, c, lam):
    t0 = time.perf_counter()
    rep = spn_gauge_phase(3, a, c, lam, MP)
    expected = cmath.exp(2j * PI * MP.c_b ** 2 * (3 - 6 * sum(a)) * lam / 3)
    assert abs(rep.predicted - expected) < 1e-15
    assert abs(expected - 1) > 1e-2
    assert rep.max_deviation < 1e-3
    assert time.perf_counter() - t0 < 600


# ---------------------------------------------------------------------------
# 8


@criterion(8, "exact structure suite")
def test_structure_suite():
    t0 = time.perf_counter()
    rows = batteries.structure_rows()
    checks = {r["check"] for r in rows}
    assert {"moment_map", "gauge_weight_invariance", "gauge_additivity", "pachner_weight_preservation",
            "pachner_positivity", "bracket_intertwining", "fiber_dimension"} <= checks
    assert not _failed(rows), _failed(rows)
    assert time.perf_counter() - t0 < 30


# ---------------------------------------------------------------------------
# 9


@criterion(9, "admissibility")
def test_admissibility():
    t0 = time.perf_counter()
    rows = batteries.admissibility_rows()
    assert not _failed(rows), _failed(rows)
    rep = homology_h2(fixture("s2xs1_fixture"))
    assert rep.free_rank == 1 and rep.torsion == ()
    for name in ("3_1_complement", "4_1_complement", "5_2_complement"):
        assert homology_h2(fixture(name)).trivial
    assert time.perf_counter() - t0 < 30


# ---------------------------------------------------------------------------
# 10


def _pair(n, hbar):
    mp = ModularParameter.from_hbar(hbar)
    chi = (chi41 if n == 2 else chi52)(0.0, mp)
    g = gN(n, hbar, mp=mp)
    budget = 3 * (chi.abs_error + g.abs_error) + 1e-12 * abs(g.value)
    return mp, chi.value, g.value, budget


@criterion(10, "self-consistency of the two contour pipelines")
@pytest.mark.xfail(strict=True, reason="chi(0) and g_n differ by a constant phase; moduli agree")
@pytest.mark.parametrize("n", [2, 3])
def test_chi_equals_g_literal(n):
    _, chi, g, budget = _pair(n, 0.1)
    assert abs(chi - g) < budget


@criterion(10, "self-consistency of the two contour pipelines")
@pytest.mark.parametrize("hbar", [0.1, 0.05])
@pytest.mark.parametrize("n", [2, 3])
def test_chi_g_moduli_and_phase(n, hbar):
    mp, chi, g, budget = _pair(n, hbar)
    assert abs(abs(chi) - abs(g)) < budget
    phase = complex(phi_b(0, mp)) ** 2 if n == 2 else cmath.exp(-1j * PI / 3)
    assert abs(chi - phase * g) < budget
    assert math.isfinite(abs(chi)) and abs(chi) > 0
