import cmath
import math

import numpy as np
import pytest

from oracles import saddle_mp
from stateint.asymptotics import (SaddleProblem, contour_check, descent_contour, extrapolate, gN, gN_line,
                                  im_v_at_saddle, leading_order, saddles, selected_saddle, volume_estimate)

NS = [2, 3, 4, 5, 6]


@pytest.mark.parametrize("n", NS)
def test_derivatives_match_finite_differences(n):
    sp = SaddleProblem(n)
    h = 1e-5
    for x in np.linspace(-3, 3, 7):
        for y in (-2.5, -1.0, 0.5, 2.0):
            z = complex(x, y)
            fd1 = (sp.v(z + h) - sp.v(z - h)) / (2 * h)
            fd2 = (sp.dv(z + h) - sp.dv(z - h)) / (2 * h)
            assert abs(fd1 - sp.dv(z)) < 1e-6
            assert abs(fd2 - sp.d2v(z)) < 1e-6


@pytest.mark.parametrize("n", [1, 7])
def test_invalid_n(n):
    with pytest.raises(ValueError):
        SaddleProblem(n)


@pytest.mark.parametrize("n", NS)
def test_saddle_residuals(n):
    sp = SaddleProblem(n)
    roots = saddles(n)
    assert roots and all(abs(sp.dv(z)) < 1e-12 and abs(z.imag) < math.pi for z in roots)


@pytest.mark.parametrize("n", NS)
def test_saddles_against_mpmath(n):
    z = selected_saddle(n)
    zo, imv = saddle_mp(n, z)
    assert abs(z - zo) < 1e-12
    assert im_v_at_saddle(n) == pytest.approx(imv, abs=1e-12)


def test_saddle_values():
    assert abs(selected_saddle(2) - (-2j * math.pi / 3)) < 1e-13
    assert im_v_at_saddle(2) == pytest.approx(-2.029883212819307, abs=1e-12)
    assert im_v_at_saddle(3) == pytest.approx(-2.828122088330783, abs=1e-12)
    # n = 3: roots of w^3 + 3w^2 + 2w + 1
    ws = np.roots([1, 3, 2, 1])
    assert min(abs(cmath.exp(selected_saddle(3)) - w) for w in ws) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_conjugate_saddle(n):
    sp = SaddleProblem(n)
    z = selected_saddle(n)
    assert any(abs(r - z.conjugate()) < 1e-12 for r in saddles(n))
    assert sp.v(z.conjugate()).imag == pytest.approx(-sp.v(z).imag, abs=1e-12)


@pytest.mark.parametrize("n", NS)
def test_descent_contour(n):
    rep = contour_check(n, descent_contour(n))
    assert rep["max_re_deviation"] < 1e-6 and rep["im_monotone"]


def test_contour_independence():
    a, b = gN(2, 0.1), gN_line(2, 0.1)
    assert abs(a.value - b.value) < 1e-9 * abs(a.value)


def test_leading_order_at_small_hbar():
    g = gN(2, 0.02).value
    ratio = g / leading_order(2, 0.02)
    assert abs(abs(ratio) - 1) < 0.02
    assert abs(cmath.phase(ratio)) < 0.05


def test_raw_estimates_approach_target():
    hbars = (0.2, 0.1, 0.05, 0.02)
    target = im_v_at_saddle(2)
    dc = descent_contour(2)
    errs = [abs(2 * math.pi * h * math.log(abs(gN(2, h, dc=dc).value)) - target) for h in hbars]
    assert all(x > y for x, y in zip(errs, errs[1:]))


def test_extrapolate_recovers_quadratic():
    hs = [0.2, 0.1, 0.05, 0.02]
    assert extrapolate(hs, [1 + 2 * h - 3 * h * h for h in hs]) == pytest.approx(1, abs=1e-12)


def test_volume_grid_must_decrease():
    with pytest.raises(ValueError):
        volume_estimate(2, (0.02, 0.1))


@pytest.mark.parametrize("n", [2, 3])
def test_volume_estimate(n):
    res = volume_estimate(n)
    assert res.rel_error < 5e-3
