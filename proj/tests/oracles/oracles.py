"""Independent reference values frozen into the unit tests.

Run: python3 tests/oracles/oracles.py
"""
import mpmath as mp
from scipy import integrate
import numpy as np

mp.mp.dps = 30


def dimension(L):
    return mp.findroot(lambda t: 2 * (mp.mpf(L) ** t + 1) - mp.mpf(3) ** t, 1.3)


def series(p, s0, q, J):
    acc = []
    for j in range(1, J + 1):
        a = mp.mpf(4) ** (-j * (s0 - mp.mpf(1) / p)) / (5 * mp.mpf(j) ** (mp.mpf(1) / p) * mp.log(j + 2) ** (mp.mpf(2) / p))
        acc.append(a ** (mp.mpf(p) / q) * mp.mpf(4) ** (j * (s0 * p - 1)))
    return mp.fsum(acc)


def nu_interval(u, s, p, q, a=0.0, b=2.0):
    # Psi(x) has radius d(x)/2; the outer integral is split at the midpoint
    def inner(x):
        d = min(x - a, b - x)
        r = d / 2
        m, _ = integrate.quad(lambda y: abs(u(y) - u(x)) ** q, x - r, x + r, epsabs=1e-14, epsrel=1e-12, limit=200)
        return ((m / (2 * r)) ** (1 / q) / d ** s) ** p
    mid = 0.5 * (a + b)
    v1, _ = integrate.quad(inner, a, mid, epsabs=1e-13, epsrel=1e-11, limit=400)
    v2, _ = integrate.quad(inner, mid, b, epsabs=1e-13, epsrel=1e-11, limit=400)
    return v1 + v2


print("t(1)            ", mp.nstr(dimension(1), 17), " ln4/ln3 =", mp.nstr(mp.log(4) / mp.log(3), 17))
print("t((1+sqrt3)/2)  ", mp.nstr(dimension((1 + mp.sqrt(3)) / 2), 17))
print("t(0.75)         ", mp.nstr(dimension(0.75), 17))
print("S q=1 J=1000    ", mp.nstr(series(1, 1, 1, 1000), 17))
print("bound J=1000    ", mp.nstr(mp.fsum(mp.mpf(1) / 5 / (j * mp.log(j + 2) ** 2) for j in range(1, 1001)), 17))
print("S q=2 J=1000    ", mp.nstr(series(1, 1, 2, 1000), 17))
print("S p2s2q1.5 J=50 log", mp.nstr(mp.log(series(2, 2, 1.5, 50)), 17))
print("nu x s1 p1      ", nu_interval(lambda y: y, 1.0, 1, 1))
print("nu x s1 p2      ", nu_interval(lambda y: y, 1.0, 2, 1))
print("nu x s1 p2 q2   ", nu_interval(lambda y: y, 1.0, 2, 2))
print("nu sin3x s.5 p2 ", nu_interval(lambda y: np.sin(3 * y), 0.5, 2, 1))
print("nu sin3x s.5 p1 q3", nu_interval(lambda y: np.sin(3 * y), 0.5, 1, 3))
print("nu x^2 s.25 p1.5 q2", nu_interval(lambda y: y * y, 0.25, 1.5, 2))
