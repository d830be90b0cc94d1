import cmath
import math

import numpy as np
import pytest

from oracles import li2_mp, phi_mp
from stateint.qdl import (PI, CutError, ModularParameter, PoleError, li2, log_phi_b, nearest_singularity,
                          phi_asymptotic, phi_b, phi_product, phi_shift_residual)


def test_modular_parameter_constants():
    mp = ModularParameter(0.8)
    assert mp.hbar == pytest.approx(1 / (0.8 + 1.25) ** 2, rel=1e-15)
    assert mp.c_b == pytest.approx(0.5j * (0.8 + 1.25))
    assert abs(mp.zeta_inv - cmath.exp(1j * PI * mp.c_b ** 2) * mp.zeta_o ** 2) < 1e-15


@pytest.mark.parametrize("hbar", [0.25, 0.1, 0.02])
def test_b_from_hbar(hbar):
    mp = ModularParameter.from_hbar(hbar)
    assert 0 < mp.b <= 1
    assert mp.hbar == pytest.approx(hbar, rel=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_invalid_b(bad):
    with pytest.raises(ValueError):
        ModularParameter(bad)


def test_li2_values():
    assert li2(0) == 0
    assert li2(1) == pytest.approx(PI ** 2 / 6, rel=1e-15)
    assert li2(-1) == pytest.approx(-PI ** 2 / 12, rel=1e-15)


@pytest.mark.parametrize("w", [0.3 + 0.4j, -2.5 + 0.1j, 5 - 3j, 0.9 + 0.05j, -0.99, 12j])
def test_li2_against_mpmath(w):
    assert abs(li2(w) - li2_mp(w)) < 1e-13 * max(1, abs(li2_mp(w)))


def test_li2_cut_needs_side():
    with pytest.raises(CutError):
        li2(2.0)
    above, below = li2(2.0, side=1), li2(2.0, side=-1)
    assert above == pytest.approx(below.conjugate())
    assert above.imag == pytest.approx(PI * math.log(2))


@pytest.mark.parametrize("z", [0.3 + 0.5j, -1.2 - 2.0j, 2.0 + 3.0j, -0.4 + 0.1j])
def test_li2_reflection(z):
    lhs = li2(-cmath.exp(z)) + li2(-cmath.exp(-z)) + z * z / 2 + PI ** 2 / 6
    assert abs(lhs) < 1e-12


@pytest.mark.parametrize("b", [0.3, 0.8, 1.25])
@pytest.mark.parametrize("z", [0.3 + 0.1j, -0.7 - 0.2j, 1.5])
def test_phi_against_mpmath(b, z):
    mp = ModularParameter(b)
    assert abs(complex(phi_b(z, mp)) / phi_mp(z, b) - 1) < 1e-12


def test_unitarity_examples():
    mp = ModularParameter(0.8)
    assert np.allclose(np.abs(phi_b(np.array([-1.0, 0.0, 2.0]), mp)), 1, atol=1e-12)


def test_inversion_example():
    mp = ModularParameter(0.8)
    z = 0.3 + 0.1j
    lhs = complex(phi_b(z, mp) * phi_b(-z, mp))
    assert abs(lhs - cmath.exp(1j * PI * z * z) / mp.zeta_inv) < 1e-12


def test_phi_zero_squared():
    mp = ModularParameter(0.8)
    assert abs(complex(phi_b(0, mp)) ** 2 * mp.zeta_inv - 1) < 1e-13
    assert complex(log_phi_b(0, mp)) == pytest.approx(1j * PI * (0.8 ** 2 + 0.8 ** -2) / 24, rel=1e-12)


def test_shift_examples():
    mp = ModularParameter(0.8)
    ratio = complex(phi_b(-0.4j, mp) / phi_b(0.4j, mp))
    assert ratio == pytest.approx(2, rel=1e-12)
    mp6 = ModularParameter(0.6)
    assert abs(phi_shift_residual(0.5, mp6, 1)) < 1e-10
    assert abs(phi_shift_residual(-0.5, mp6, -1)) < 1e-10


def test_strip_extension_uses_shift():
    mp = ModularParameter(0.8)
    z = 5j
    lo = complex(phi_b(z - 0.4j, mp))
    hi = complex(phi_b(z + 0.4j, mp))
    assert abs(lo - (1 + cmath.exp(2 * PI * 0.8 * z)) * hi) < 1e-9 * abs(lo)


def test_product_formula_cross_check():
    b = cmath.exp(0.2j) * 0.8
    z = 0.1 + 0.05j
    # Phi_b(z) Phi_b(-z) = zeta_inv^-1 e^{i pi z^2} holds for complex b too
    cb = 0.5j * (b + 1 / b)
    zinv = cmath.exp(1j * PI * (1 + 2 * cb * cb) / 6)
    lhs = phi_product(z, b) * phi_product(-z, b)
    assert abs(lhs * zinv / cmath.exp(1j * PI * z * z) - 1) < 1e-10
    with pytest.raises(ValueError):
        phi_product(z, 0.8)


def test_pole_guard():
    mp = ModularParameter(0.8)
    with pytest.raises(PoleError):
        phi_b(mp.c_b, mp)
    with pytest.raises(PoleError):
        phi_b(-mp.c_b, mp)


def test_nearest_singularity():
    mp = ModularParameter(0.8)
    assert nearest_singularity(mp.c_b, mp) == (mp.c_b, "pole")
    loc, kind = nearest_singularity(-mp.c_b - 0.8j, mp)
    assert kind == "zero" and abs(loc - (-mp.c_b - 0.8j)) < 1e-15
    loc, _ = nearest_singularity(0, mp)
    assert abs(loc) == pytest.approx(abs(mp.c_b))


def test_asymptotic_order_zero_value():
    mp = ModularParameter(0.1)
    assert phi_asymptotic(0.0, mp, 0) == pytest.approx(cmath.exp(li2(-1) / (2j * PI * 0.01)), rel=1e-12)


def test_asymptotic_trend():
    errs0, errs1 = [], []
    for b in (0.2, 0.1, 0.05):
        mp = ModularParameter(b)
        exact = complex(phi_b(0.3 / (2 * PI * b), mp))
        errs0.append(abs(exact - phi_asymptotic(0.3, mp, 0)) / abs(exact))
        errs1.append(abs(exact - phi_asymptotic(0.3, mp, 1)) / abs(exact))
    # order-0 error is O(b^2)
    assert 3 < errs0[0] / errs0[1] < 5 and 3 < errs0[1] / errs0[2] < 5
    assert errs1[2] * 10 < errs0[2]
