"""Truncated formal Puiseux series in q^(1/M) and bivariate series in (p, q).

Every series carries a guaranteed-precision window: coefficients are exact for
all exponents up to the window and undefined above it. All operations compute
the window of their result, so a verifier can never read a coefficient that
depends on unknown input terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclotomic import CycNum, root_of_unity, lcm
from .errors import DomainError, InconclusiveError


def _as_cyc(c) -> CycNum:
    return c if isinstance(c, CycNum) else CycNum(c)


def _prec_min(*precs):
    vals = [p for p in precs if p is not None]
    return min(vals) if vals else None


@dataclass
class Agreement:
    """Outcome of comparing two series on their common guaranteed window."""

    equal: bool
    first_diff: Fraction | None
    window: Fraction | None
    vacuous: bool


class PuiseuxSeries:
    """Sparse Laurent/Puiseux series: keys n mean the exponent n/den.

    ``prec`` is the guaranteed-precision numerator: coefficients are exact for
    all exponents n/den with n <= prec. ``prec=None`` means the series is
    exact at every order (constants, monomials).
    """

    __slots__ = ("den", "coeffs", "prec")

    def __init__(self, den: int, coeffs: dict, prec: int | None):
        if den < 1:
            raise DomainError("exponent denominator must be positive")
        items = {}
        for n, c in coeffs.items():
            c = _as_cyc(c)
            if c and (prec is None or n <= prec):
                items[n] = c
        g = den
        for n in items:
            g = gcd(g, abs(n))
        if g > 1:
            items = {n // g: c for n, c in items.items()}
            if prec is not None:
                prec = prec // g  # floor keeps the window sound
            den //= g
        self.den = den
        self.coeffs = items
        self.prec = prec

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(prec: int | None = None, den: int = 1) -> "PuiseuxSeries":
        return PuiseuxSeries(den, {}, prec)

    @staticmethod
    def one() -> "PuiseuxSeries":
        return PuiseuxSeries(1, {0: CycNum(1)}, None)

    @staticmethod
    def monomial(coeff, exponent, prec: int | None = None) -> "PuiseuxSeries":
        e = Fraction(exponent)
        return PuiseuxSeries(
            e.denominator,
            {e.numerator: _as_cyc(coeff)},
            None if prec is None else prec * e.denominator,
        )

    @staticmethod
    def from_coefficients(coeffs: dict, prec: int, den: int = 1) -> "PuiseuxSeries":
        return PuiseuxSeries(den, dict(coeffs), prec)

    # -- basic views -----------------------------------------------------

    @property
    def window(self) -> Fraction | None:
        return None if self.prec is None else Fraction(self.prec, self.den)

    def valuation(self) -> Fraction | None:
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.den)

    def is_zero(self) -> bool:
        return not self.coeffs

    def items_sorted(self):
        for n in sorted(self.coeffs):
            yield Fraction(n, self.den), self.coeffs[n]

    def coefficient(self, exponent) -> CycNum:
        """Exact coefficient at the given exponent; raises beyond the window."""
        e = Fraction(exponent)
        if self.window is not None and e > self.window:
            raise InconclusiveError(
                f"coefficient at {e} is beyond the guaranteed window {self.window}"
            )
        if self.den % e.denominator:
            return CycNum(0)
        num = e.numerator * (self.den // e.denominator)
        return self.coeffs.get(num, CycNum(0))

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (
            self.den == other.den
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        terms = []
        for e, c in list(self.items_sorted())[:8]:
            terms.append(f"{c.pretty()}*q^{e}")
        body = " + ".join(terms) if terms else "0"
        if len(self.coeffs) > 8:
            body += " + ..."
        w = "exact" if self.prec is None else f"O(q^>{self.window})"
        return f"<series {body} | {w}>"

    # -- ring operations --------------------------------------------------

    def _unified(self, other: "PuiseuxSeries"):
        d = lcm(self.den, other.den)
        fa, fb = d // self.den, d // other.den
        ca = {n * fa: c for n, c in self.coeffs.items()}
        cb = {n * fb: c for n, c in other.coeffs.items()}
        pa = None if self.prec is None else self.prec * fa
        pb = None if other.prec is None else other.prec * fb
        return d, ca, cb, pa, pb

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = PuiseuxSeries.monomial(other, 0)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        d, ca, cb, pa, pb = self._unified(other)
        prec = _prec_min(pa, pb)
        out = dict(ca)
        for n, c in cb.items():
            out[n] = out[n] + c if n in out else c
        return PuiseuxSeries(d, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(
            self.den, {n: -c for n, c in self.coeffs.items()}, self.prec
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = PuiseuxSeries.monomial(other, 0)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scaled(self, c) -> "PuiseuxSeries":
        c = _as_cyc(c)
        if not c:
            return PuiseuxSeries.zero(self.prec, self.den)
        return PuiseuxSeries(
            self.den, {n: c * v for n, v in self.coeffs.items()}, self.prec
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self._scaled(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        # An exact zero annihilates everything.
        if self.prec is None and self.is_zero():
            return self
        if other.prec is None and other.is_zero():
            return other
        d, ca, cb, pa, pb = self._unified(other)
        eva = min(ca) if ca else pa + 1
        evb = min(cb) if cb else pb + 1
        prec = _prec_min(
            None if pa is None else pa + evb,
            None if pb is None else pb + eva,
        )
        out: dict[int, CycNum] = {}
        for na, va in ca.items():
            for nb, vb in cb.items():
                n = na + nb
                if prec is not None and n > prec:
                    continue
                prod = va * vb
                if n in out:
                    out[n] = out[n] + prod
                else:
                    out[n] = prod
        return PuiseuxSeries(d, out, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PuiseuxSeries":
        if not isinstance(k, int) or k < 0:
            raise DomainError("series powers take non-negative integer exponents")
        result = PuiseuxSeries.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncated(self, max_exponent) -> "PuiseuxSeries":
        """Clamp the window to max_exponent (which must not enlarge it)."""
        e = Fraction(max_exponent)
        num = (e.numerator * self.den) // e.denominator  # floor to the grid
        prec = num if self.prec is None else min(self.prec, num)
        return PuiseuxSeries(self.den, self.coeffs, prec)

    # -- structure maps ---------------------------------------------------

    def substitute_scaled(self, a: int, b: int, d: int) -> "PuiseuxSeries":
        """Realize tau -> (a*tau + b)/d on exponents.

        Each term c*q^(n/M) maps to c*e(n*b/(M*d))*q^(n*a/(M*d)).
        """
        if a < 1 or d < 1:
            raise DomainError("substitution requires positive scale and divisor")
        M2 = self.den * d
        out = {}
        for n, c in self.coeffs.items():
            phase = root_of_unity(M2, (n * b) % M2)
            out[n * a] = c * phase
        prec = None if self.prec is None else self.prec * a
        return PuiseuxSeries(M2, out, prec)

    def twisted(self, k: int) -> "PuiseuxSeries":
        """Apply tau -> tau + k: coefficient at n/M picks up e(n*k/M)."""
        M = self.den
        out = {n: c * root_of_unity(M, (n * k) % M) for n, c in self.coeffs.items()}
        return PuiseuxSeries(M, out, self.prec)

    def log(self) -> "PuiseuxSeries":
        """Formal logarithm; needs constant term 1 and no negative exponents."""
        if self.coeffs and min(self.coeffs) < 0:
            raise DomainError("log needs a series without negative exponents")
        if self.coeffs.get(0, CycNum(0)) != CycNum(1):
            raise DomainError("log needs constant term exactly 1")
        g = self - 1
        if g.is_zero():
            return PuiseuxSeries.zero(g.prec, g.den)
        if g.prec is None:
            raise DomainError("log of an exact non-constant series never terminates; truncate first")
        val = min(g.coeffs)
        kmax = g.prec // val
        acc = PuiseuxSeries.zero(None)
        power = PuiseuxSeries.one()
        wnd = g.window
        for k in range(1, kmax + 1):
            power = (power * g).truncated(wnd)
            acc = acc + power._scaled(Fraction(-1 if k % 2 == 0 else 1, k))
            if power.is_zero():
                break
        return acc.truncated(wnd)

    def exp(self) -> "PuiseuxSeries":
        """Formal exponential; needs strictly positive valuation."""
        if self.coeffs and min(self.coeffs) <= 0:
            raise DomainError("exp needs strictly positive valuation")
        if self.is_zero():
            return PuiseuxSeries(self.den, {0: CycNum(1)}, self.prec)
        if self.prec is None:
            raise DomainError("exp of an exact non-zero series never terminates; truncate first")
        val = min(self.coeffs)
        kmax = self.prec // val
        acc = PuiseuxSeries.one()
        power = PuiseuxSeries.one()
        fact = 1
        wnd = self.window
        for k in range(1, kmax + 1):
            power = (power * self).truncated(wnd)
            fact *= k
            acc = acc + power._scaled(Fraction(1, fact))
            if power.is_zero():
                break
        return acc.truncated(wnd)

    # -- comparison ---------------------------------------------------------

    def agrees_with(self, other: "PuiseuxSeries") -> Agreement:
        """Compare within the common guaranteed window."""
        diff = self - other
        window = diff.window
        bad = sorted(diff.coeffs)
        if bad:
            return Agreement(False, Fraction(bad[0], diff.den), window, False)
        ref = [s.valuation() for s in (self, other) if s.valuation() is not None]
        floor = min(ref) if ref else Fraction(0)
        vacuous = window is not None and window < floor
        return Agreement(not vacuous, None, window, vacuous)


class BiSeries:
    """Sparse bivariate series in (p, q) with per-variable windows.

    Keys are integer pairs (m, n) meaning p^(m/dp) * q^(n/dq); ``prec`` is a
    pair of per-variable guaranteed numerators (None = exact in that variable).
    """

    __slots__ = ("dens", "coeffs", "prec")

    def __init__(self, dens, coeffs: dict, prec):
        dp, dq = dens
        if dp < 1 or dq < 1:
            raise DomainError("exponent denominators must be positive")
        P, Q = prec
        items = {}
        for (m, n), c in coeffs.items():
            c = _as_cyc(c)
            if c and (P is None or m <= P) and (Q is None or n <= Q):
                items[(m, n)] = c
        gp, gq = dp, dq
        for m, n in items:
            gp = gcd(gp, abs(m))
            gq = gcd(gq, abs(n))
        if gp > 1 or gq > 1:
            items = {(m // gp, n // gq): c for (m, n), c in items.items()}
            P = None if P is None else P // gp
            Q = None if Q is None else Q // gq
            dp //= gp
            dq //= gq
        self.dens = (dp, dq)
        self.coeffs = items
        self.prec = (P, Q)

    @staticmethod
    def zero(prec=(None, None), dens=(1, 1)) -> "BiSeries":
        return BiSeries(dens, {}, prec)

    @staticmethod
    def one() -> "BiSeries":
        return BiSeries((1, 1), {(0, 0): CycNum(1)}, (None, None))

    @staticmethod
    def monomial(coeff, p_exp, q_exp, prec=(None, None)) -> "BiSeries":
        ep, eq = Fraction(p_exp), Fraction(q_exp)
        P, Q = prec
        return BiSeries(
            (ep.denominator, eq.denominator),
            {(ep.numerator, eq.numerator): _as_cyc(coeff)},
            (
                None if P is None else P * ep.denominator,
                None if Q is None else Q * eq.denominator,
            ),
        )

    @property
    def window(self):
        P, Q = self.prec
        dp, dq = self.dens
        return (
            None if P is None else Fraction(P, dp),
            None if Q is None else Fraction(Q, dq),
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, p_exp, q_exp) -> CycNum:
        ep, eq = Fraction(p_exp), Fraction(q_exp)
        wp, wq = self.window
        if (wp is not None and ep > wp) or (wq is not None and eq > wq):
            raise InconclusiveError(
                f"bidegree ({ep}, {eq}) is beyond the guaranteed window {self.window}"
            )
        dp, dq = self.dens
        if dp % ep.denominator or dq % eq.denominator:
            return CycNum(0)
        key = (ep.numerator * (dp // ep.denominator), eq.numerator * (dq // eq.denominator))
        return self.coeffs.get(key, CycNum(0))

    def items_sorted(self):
        dp, dq = self.dens
        for m, n in sorted(self.coeffs):
            yield (Fraction(m, dp), Fraction(n, dq)), self.coeffs[(m, n)]

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (
            self.dens == other.dens
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        n = len(self.coeffs)
        return f"<biseries {n} terms, window {self.window}>"

    def _unified(self, other: "BiSeries"):
        dp = lcm(self.dens[0], other.dens[0])
        dq = lcm(self.dens[1], other.dens[1])

        def rescale(s):
            fp, fq = dp // s.dens[0], dq // s.dens[1]
            cc = {(m * fp, n * fq): c for (m, n), c in s.coeffs.items()}
            P, Q = s.prec
            return cc, (None if P is None else P * fp, None if Q is None else Q * fq)

        ca, pa = rescale(self)
        cb, pb = rescale(other)
        return (dp, dq), ca, cb, pa, pb

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = BiSeries.monomial(other, 0, 0)
        if not isinstance(other, BiSeries):
            return NotImplemented
        dens, ca, cb, pa, pb = self._unified(other)
        prec = (_prec_min(pa[0], pb[0]), _prec_min(pa[1], pb[1]))
        out = dict(ca)
        for key, c in cb.items():
            out[key] = out[key] + c if key in out else c
        return BiSeries(dens, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(
            self.dens, {k: -c for k, c in self.coeffs.items()}, self.prec
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = BiSeries.monomial(other, 0, 0)
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scaled(self, c) -> "BiSeries":
        c = _as_cyc(c)
        if not c:
            return BiSeries.zero(self.prec, self.dens)
        return BiSeries(
            self.dens, {k: c * v for k, v in self.coeffs.items()}, self.prec
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self._scaled(other)
        if not isinstance(other, BiSeries):
            return NotImplemented
        if (self.prec == (None, None) and self.is_zero()) or (
            other.prec == (None, None) and other.is_zero()
        ):
            return BiSeries.zero((None, None))
        dens, ca, cb, pa, pb = self._unified(other)

        def evs(cc, pp):
            ms = [m for m, _ in cc] or [None]
            ns = [n for _, n in cc] or [None]
            evm = min(ms) if ms[0] is not None else pp[0] + 1
            evn = min(ns) if ns[0] is not None else pp[1] + 1
            return evm, evn

        eva_p, eva_q = evs(ca, pa)
        evb_p, evb_q = evs(cb, pb)
        P = _prec_min(
            None if pa[0] is None else pa[0] + evb_p,
            None if pb[0] is None else pb[0] + eva_p,
        )
        Q = _prec_min(
            None if pa[1] is None else pa[1] + evb_q,
            None if pb[1] is None else pb[1] + eva_q,
        )
        out: dict[tuple[int, int], CycNum] = {}
        for (ma, na), va in ca.items():
            for (mb, nb), vb in cb.items():
                m, n = ma + mb, na + nb
                if (P is not None and m > P) or (Q is not None and n > Q):
                    continue
                prod = va * vb
                if (m, n) in out:
                    out[(m, n)] = out[(m, n)] + prod
                else:
                    out[(m, n)] = prod
        return BiSeries(dens, out, (P, Q))

    __rmul__ = __mul__

    def substituted_powers(self, i: int) -> "BiSeries":
        """The substitution p -> p^i, q -> q^i."""
        if i < 1:
            raise DomainError("power substitution needs a positive exponent")
        P, Q = self.prec
        return BiSeries(
            self.dens,
            {(m * i, n * i): c for (m, n), c in self.coeffs.items()},
            (None if P is None else P * i, None if Q is None else Q * i),
        )

    def _truncated(self) -> "BiSeries":
        return self  # construction already windows; kept for symmetry

    def log(self) -> "BiSeries":
        """Formal log; needs constant term 1 and all other terms with p-degree >= 1."""
        if self.coefficient(0, 0) != CycNum(1):
            raise DomainError("log needs constant term exactly 1")
        g = self - 1
        if any(m < 1 for m, _ in g.coeffs):
            raise DomainError("log needs every non-constant term to carry p")
        if g.is_zero():
            return BiSeries.zero(g.prec, g.dens)
        P = g.prec[0]
        if P is None:
            raise DomainError("log of an exact series never terminates; window it first")
        valp = min(m for m, _ in g.coeffs)
        kmax = P // valp
        acc = BiSeries.zero((None, None))
        power = BiSeries.one()
        for k in range(1, kmax + 1):
            power = power * g
            acc = acc + power._scaled(Fraction(-1 if k % 2 == 0 else 1, k))
            if power.is_zero():
                break
        return (acc + BiSeries.zero(g.prec, g.dens))  # clamp window

    def exp(self) -> "BiSeries":
        """Formal exp; needs strictly positive p-valuation (q may be negative)."""
        if any(m < 1 for m, _ in self.coeffs):
            raise DomainError("exp needs every term to carry a positive power of p")
        if self.is_zero():
            return BiSeries(self.dens, {(0, 0): CycNum(1)}, self.prec)
        P = self.prec[0]
        if P is None:
            raise DomainError("exp of an exact series never terminates; window it first")
        valp = min(m for m, _ in self.coeffs)
        kmax = P // valp
        acc = BiSeries.one()
        power = BiSeries.one()
        fact = 1
        for k in range(1, kmax + 1):
            power = power * self
            fact *= k
            acc = acc + power._scaled(Fraction(1, fact))
            if power.is_zero():
                break
        return acc + BiSeries.zero(self.prec, self.dens)  # clamp window

    def agrees_with(self, other: "BiSeries"):
        diff = self - other
        bad = sorted(diff.coeffs)
        if bad:
            dp, dq = diff.dens
            m, n = bad[0]
            return Agreement(False, (Fraction(m, dp), Fraction(n, dq)), diff.window, False)
        return Agreement(True, None, diff.window, False)


def telescoped_quotient(f: PuiseuxSeries, P: int, Q: int) -> BiSeries:
    """(f(p) - f(q)) / (p^-1 - q^-1) for normalized f, by the closed form.

    With f = q^-1 + sum a_k q^k the quotient is 1 - sum_{m,n>=1} a_{m+n-1}
    p^m q^n, using (p^k - q^k)/(p^-1 - q^-1) = -pq * sum_{i+j=k-1} p^i q^j.
    General series division is deliberately not provided.
    """
    if f.den != 1:
        raise DomainError("telescoped quotient needs integer exponents")
    if f.coeffs.get(-1) != CycNum(1) or any(n < -1 for n in f.coeffs) or 0 in f.coeffs:
        raise DomainError("telescoped quotient needs the normalized form q^-1 + O(q)")
    need = P + Q - 1
    if f.prec is not None and f.prec < need:
        raise InconclusiveError(
            f"window {f.prec} too small: coefficients up to {need} are required"
        )
    out = {(0, 0): CycNum(1)}
    for m in range(1, P + 1):
        for n in range(1, Q + 1):
            a = f.coeffs.get(m + n - 1)
            if a:
                out[(m, n)] = -a
    return BiSeries((1, 1), out, (P, Q))
