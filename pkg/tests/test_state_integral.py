import cmath
import dataclasses
from fractions import Fraction as F

import pytest

from stateint.kernels import nu_pair
from stateint.qdl import PI, ModularParameter, phi_b
from stateint.state_integral import (TREFOIL_TARGET, DivergenceError, QuadratureConfig, SymbolicResult, assemble,
                                     chi41, figure_eight, figure_eight_product, partition_function, reduce_deltas,
                                     spn_gauge_phase, trefoil, trefoil_shape)
from stateint.triangulation import LeveledShape, TetGluingSpec, build_complex, fixture

MP = ModularParameter(0.8)
SIXTH = (1 / 6, 1 / 6, 1 / 6)


def test_single_tetrahedron_kernel_wiring():
    X = build_complex(TetGluingSpec(1, ()), (1,))
    si = assemble(X, LeveledShape(((F(1, 3),) * 3,)), MP)
    assert si.n_vars == 4 and not any(si.interior)
    assert si.deltas == [(1, -1, 1, 0)]


def test_trefoil_assembly():
    si = assemble(fixture("3_1_complement"), trefoil_shape(0.999), MP)
    assert (si.n_vars, len(si.factors), len(si.deltas)) == (4, 2, 2)
    assert all(si.interior)


def test_level_phase():
    X = fixture("3_1_complement")
    s = trefoil_shape(0.999)
    lifted = LeveledShape(s.angles, 4 * MP.hbar)
    ratio = assemble(X, lifted, MP).prefactor / assemble(X, s, MP).prefactor
    assert abs(ratio + 1) < 1e-12


def test_assemble_rejects_bad_input():
    X = fixture("3_1_complement")
    with pytest.raises(ValueError):
        assemble(X, LeveledShape(((F(1, 3),) * 3,)), MP)
    with pytest.raises(ValueError):
        assemble(X, LeveledShape(((F(1, 2), F(1, 2), F(0)),) * 2, generalized=True), MP)


def test_trefoil_reduces_to_two_dimensions():
    ri = reduce_deltas(assemble(fixture("3_1_complement"), trefoil_shape(0.999), MP))
    assert ri.dimension == 2 and not ri.residual_deltas
    assert ri.check_substitution()


def test_dependent_deltas_diverge():
    si = assemble(fixture("3_1_complement"), trefoil_shape(0.999), MP)
    doubled = dataclasses.replace(si, deltas=si.deltas + si.deltas[:1])
    with pytest.raises(DivergenceError):
        reduce_deltas(doubled)


def test_one_tet_one_face_is_symbolic():
    ch = (F(1, 10), F(1, 4), F(3, 20))
    res = partition_function(fixture("one_tet_one_face"), LeveledShape.from_charges([ch]), MP)
    assert isinstance(res, SymbolicResult)
    assert len(res.residual_deltas) == 2
    a, b, c = (float(x) for x in ch)
    expected = cmath.exp(-1j * PI / 12) * nu_pair(c, b, MP) / complex(phi_b(2 * MP.c_b * a - MP.c_b, MP))
    assert abs(res.coefficient / expected - 1) < 1e-12


def test_trefoil_value():
    res = trefoil(0.999, MP)
    assert abs(res.value - TREFOIL_TARGET) < 5e-3
    assert abs(abs(res.value) - 0.577350) < 5e-3


def test_trefoil_hbar_independent():
    vals = [trefoil(0.999, ModularParameter(b)).value for b in (0.6, 0.8, 1.0)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-3


def test_doubled_density_within_estimate():
    r1 = trefoil(0.999, MP)
    r2 = trefoil(0.999, MP, QuadratureConfig(density=6.0))
    assert abs(r2.value - r1.value) < 3 * r1.abs_error


def test_orientation_reversal_conjugates():
    X = fixture("3_1_complement")
    Y = build_complex(X.spec, tuple(-s for s in X.signs))
    s = trefoil_shape(0.999)
    a = partition_function(X, s, MP)
    b = partition_function(Y, s, MP)
    assert abs(b.value - a.value.conjugate()) < 3 * (a.abs_error + b.abs_error) + 1e-12


def test_figure_eight_symmetric_point():
    res = figure_eight(SIXTH, SIXTH, MP)
    assert res.value.real > 0 and abs(res.value.imag) < 1e-9
    assert abs(res.value - figure_eight_product(SIXTH, SIXTH, MP)) < 1e-9


def test_figure_eight_factorises():
    plus, minus = (0.1, 0.2, 0.2), (0.15, 0.15, 0.2)
    res = figure_eight(plus, minus, MP)
    assert abs(res.value - figure_eight_product(plus, minus, MP)) < 1e-8


@pytest.mark.parametrize("hbar", [0.25, 0.1])
def test_chi41_finite_nonzero(hbar):
    v = chi41(0.0, ModularParameter.from_hbar(hbar)).value
    assert cmath.isfinite(v) and abs(v) > 1e-6


def test_gauge_phase_zero_shift():
    rep = spn_gauge_phase(3, [1 / 6] * 3, [1 / 6] * 3, 0.0, MP)
    assert all(abs(r - 1) < 1e-12 for r in rep.ratios)


def test_gauge_phase_balanced_charges():
    # Q_e = 1/2 makes the predicted phase trivial
    rep = spn_gauge_phase(3, [1 / 6] * 3, [1 / 6] * 3, 1 / 24, MP)
    assert abs(rep.predicted - 1) < 1e-12 and rep.passed
