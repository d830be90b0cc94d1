import cmath

import numpy as np
import pytest

from stateint.integral_identities import (NEG_INF, DomainError, euler_heine_battery, fourier_battery,
                                          fourier_phi_minus, fourier_phi_minus_closed, fourier_phi_plus_closed,
                                          ihg1_closed, ihg_integral, ramanujan_battery, ramanujan_closed,
                                          ramanujan_integral, saal1_closed, saalschuetz_battery, saalschuetz_full,
                                          sample_ramanujan, sample_saal1)
from stateint.qdl import PI, ModularParameter

MP = ModularParameter(0.8)


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("battery", [ramanujan_battery, fourier_battery, saalschuetz_battery, euler_heine_battery],
                         ids=lambda f: f.__name__)
def test_batteries_pass(battery):
    rows = battery(MP, points=2)
    assert rows and all(r.passed for r in rows), [r.to_dict() for r in rows if not r.passed]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ramanujan_closed_forms_agree(seed):
    p = sample_ramanujan(MP, np.random.default_rng(seed))
    assert rel(ramanujan_closed(p, MP, form=1), ramanujan_closed(p, MP, form=2)) < 1e-12


def test_ramanujan_quadrature():
    p = sample_ramanujan(MP, np.random.default_rng(3))
    res = ramanujan_integral(p, MP)
    assert rel(res.value, ramanujan_closed(p, MP)) < 1e-9


@pytest.mark.parametrize("w", [0.2 - 0.3j, -0.5 - 0.6j])
def test_fourier_closed_forms_agree(w):
    assert rel(fourier_phi_plus_closed(w, MP, 1), fourier_phi_plus_closed(w, MP, 2)) < 1e-12
    assert rel(fourier_phi_minus_closed(w, MP, 1), fourier_phi_minus_closed(w, MP, 2)) < 1e-12
    assert rel(fourier_phi_minus(w, MP, "quad"), fourier_phi_minus_closed(w, MP)) < 1e-9


def test_fourier_needs_lower_half_plane():
    with pytest.raises(DomainError):
        fourier_phi_minus(0.3 + 0.1j, MP)


@pytest.mark.parametrize("a,w", [(0.1 + 0.3j, -0.2 - 0.1j), (-0.3 + 0.5j, 0.4 - 0.4j)])
def test_ihg1_closed_vs_quadrature(a, w):
    res = ihg_integral((a,), (), w, MP)
    assert rel(res.value, ihg1_closed(a, w, MP)) < 1e-9


@pytest.mark.parametrize("seed", [0, 1])
def test_saal1_closed_vs_quadrature(seed):
    a, b, d = sample_saal1(MP, np.random.default_rng(seed))
    res = ihg_integral((a, b), (d,), -MP.c_b, MP)
    assert rel(res.value, saal1_closed(a, b, d, MP)) < 1e-9


def test_saal1_double_limit():
    d = 0.2 + 0.3j
    cb = MP.c_b
    expected = MP.zeta_o ** 3 * cmath.exp(1j * PI * d * (2 * cb - d))
    assert rel(saal1_closed(NEG_INF, NEG_INF, d, MP), expected) < 1e-15
    res = ihg_integral((NEG_INF, NEG_INF), (d,), -cb, MP)
    assert rel(res.value, expected) < 1e-9


def test_saal1_single_limit():
    a, d = 0.1 + 0.4j, 0.2 + 0.3j
    res = ihg_integral((a, NEG_INF), (d,), -MP.c_b, MP)
    assert rel(res.value, saal1_closed(a, NEG_INF, d, MP)) < 1e-9


def test_domain_rejections():
    cb = MP.c_b
    with pytest.raises(DomainError):
        saalschuetz_full(0.1 + 0.5j, 0.2 + 0.5j, -0.1 + 0.5j, cb, MP)
    with pytest.raises(DomainError):
        ihg_integral((cb,), (), -0.1j, MP)
    with pytest.raises(DomainError):
        ihg_integral((0.1j,), (), cb + 0.1j, MP)
    with pytest.raises(DomainError):
        ihg_integral((0.1j, 0.2j), (), -0.1j, MP)
