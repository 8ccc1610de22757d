"""Independent oracles for the test suite.

Everything here is deliberately separate from the library's code paths:
plain integer power series for E4^3/Delta, eta quotients for the degree-2
Hauptmodul identities, and a sympy resultant for the classical modular
polynomial. Library results are checked against these, never the other way
around.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from moonshine.qseries import PuiseuxSeries


def _mul_trunc(a: list[int], b: list[int], top: int) -> list[int]:
    out = [0] * (top + 1)
    for i, x in enumerate(a):
        if x and i <= top:
            for j, y in enumerate(b):
                if i + j > top:
                    break
                if y:
                    out[i + j] += x * y
    return out


def _sigma(k: int, n: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def eisenstein4(top: int) -> tuple[int, ...]:
    return tuple([1] + [240 * _sigma(3, n) for n in range(1, top + 1)])


@lru_cache(maxsize=None)
def eta_power24(top: int) -> tuple[int, ...]:
    """Coefficients of prod (1 - q^n)^24 up to q^top."""
    base = [0] * (top + 1)
    base[0] = 1
    for n in range(1, top + 1):
        # multiply by (1 - q^n): in place, descending
        for i in range(top, n - 1, -1):
            base[i] -= base[i - n]
    out = base
    acc = [1] + [0] * top
    for _ in range(24):
        acc = _mul_trunc(acc, out, top)
    return tuple(acc)


@lru_cache(maxsize=None)
def j_coefficients(top: int) -> tuple[int, ...]:
    """c(-1..top) of J = E4^3/Delta - 744, so the tuple starts at index -1."""
    e4 = list(eisenstein4(top + 1))
    num = _mul_trunc(_mul_trunc(e4, e4, top + 1), e4, top + 1)
    den = list(eta_power24(top + 1))  # Delta = q * this
    # invert den (unit constant term)
    inv = [0] * (top + 2)
    inv[0] = 1
    for n in range(1, top + 2):
        s = 0
        for k in range(1, n + 1):
            if k < len(den) and den[k]:
                s += den[k] * inv[n - k]
        inv[n] = -s
    series = _mul_trunc(num, inv, top + 1)  # E4^3 / (Delta/q) = q * j
    # j = series shifted by q^-1; J = j - 744
    out = [series[0]]  # c(-1)
    out.append(series[1] - 744)  # c(0) (should be 0)
    out.extend(series[2:top + 2])
    return tuple(out)


def j_series(top: int) -> PuiseuxSeries:
    """J as a library series with window top (independent coefficients)."""
    cs = j_coefficients(top)
    coeffs = {-1: cs[0]}
    for n in range(1, top + 1):
        coeffs[n] = cs[n + 1]
    assert cs[1] == 0
    return PuiseuxSeries(1, coeffs, top)


@lru_cache(maxsize=None)
def hauptmodul2(top: int) -> tuple[int, ...]:
    """u = Delta(tau)/Delta(2tau) = q^-1 prod (1-q^n)^24/(1-q^(2n))^24,
    coefficients of q*u (so index k is the q^(k-1) coefficient of u)."""
    num = list(eta_power24(top + 1))
    den2 = [0] * (top + 2)
    for n, c in enumerate(eta_power24((top + 1) // 2)):
        if 2 * n <= top + 1:
            den2[2 * n] = c
    inv = [0] * (top + 2)
    inv[0] = 1
    for n in range(1, top + 2):
        s = 0
        for k in range(1, n + 1):
            if den2[k]:
                s += den2[k] * inv[n - k]
        inv[n] = -s
    return tuple(_mul_trunc(num, inv, top + 1))


def classical_modular_polynomial_2():
    """Phi_2(X, Y) via a resultant of Hauptmodul identities, as an int dict.

    j(tau) = (u + 256)^3 / u^2 and j(2tau) = (u + 16)^3 / u for the degree-2
    eta quotient u; eliminating u yields the classical modular polynomial.
    """
    import sympy

    X, Y, u = sympy.symbols("X Y u")
    p1 = X * u ** 2 - (u + 256) ** 3
    p2 = Y * u - (u + 16) ** 3
    res = sympy.expand(sympy.resultant(p1, p2, u))
    poly = sympy.Poly(res, X, Y)
    # Normalize to monic in X (degree 3).
    lead = poly.coeff_monomial(X ** 3)
    coeffs = {}
    for (i, j), c in poly.terms():
        q = Fraction(int(c), int(lead))
        coeffs[(i, j)] = q
    return coeffs
