"""Independent mpmath oracles used by the tests."""

import mpmath as mpm

mpm.mp.dps = 30


def log_phi_mp(z, b):
    """log Phi_b(z) from the defining integral over R with a small semicircle
    above the origin; valid for |Im z| < |c_b|."""
    z = mpm.mpc(z)
    b = mpm.mpf(b)
    cb = (b + 1 / b) / 2
    r = min(mpm.mpf(1), cb, mpm.pi * min(b, 1 / b)) / 4

    def f(w):
        return mpm.exp(-2j * z * w) / (4 * mpm.sinh(w * b) * mpm.sinh(w / b) * w)

    tail = mpm.quad(lambda t: f(t) + f(-t), [r, 1, 4, 10, 30, mpm.inf])
    semi = mpm.quad(lambda th: f(r * mpm.exp(1j * th)) * 1j * r * mpm.exp(1j * th), [mpm.pi, mpm.pi / 2, 0])
    return complex(tail + semi)


def phi_mp(z, b):
    return complex(mpm.exp(log_phi_mp(z, b)))


def li2_mp(w):
    return complex(mpm.polylog(2, mpm.mpc(w)))


def saddle_mp(n, guess):
    """Root of n log(1 + e^z) - z near guess and Im v_n there."""
    z = mpm.findroot(lambda z: n * mpm.log(1 + mpm.exp(z)) - z, mpm.mpc(guess))
    v = -n * mpm.polylog(2, -mpm.exp(z)) - z * z / 2
    return complex(z), float(mpm.im(v))
