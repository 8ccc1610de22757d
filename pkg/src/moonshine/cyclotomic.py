"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Elements are stored on the power basis 1, z, ..., z^(phi(L)-1) modulo the L-th
cyclotomic polynomial, with L always reduced to the minimal possible conductor.
That makes the representation canonical: two field elements are equal iff their
stored data is identical, which the series verifiers rely on constantly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import cmath

from .errors import DomainError

_ZERO = Fraction(0)
_ONE = Fraction(1)

#: Optional safety cap on compositum conductors (set via the CLI flag).
CONDUCTOR_LIMIT: int | None = None


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    large.reverse()
    return small + large


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division of integer polynomials, divisor monic.
    out = [0] * (len(num) - len(den) + 1)
    rem = list(num)
    for i in range(len(out) - 1, -1, -1):
        c = rem[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                rem[i + j] -= c * dj
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, ascending."""
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            num = _poly_div_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


def _reduce_vec(vec: list[Fraction], L: int) -> list[Fraction]:
    """Reduce a coefficient vector in z = zeta_L to length phi(L)."""
    phi = euler_phi(L)
    v = list(vec)
    # z^L = 1: fold high exponents first so the division below stays short.
    if len(v) > L:
        folded = [_ZERO] * L
        for e, c in enumerate(v):
            if c:
                folded[e % L] += c
        v = folded
    if len(v) < phi:
        v += [_ZERO] * (phi - len(v))
        return v
    P = cyclotomic_polynomial(L)
    for e in range(len(v) - 1, phi - 1, -1):
        c = v[e]
        if c:
            v[e] = _ZERO
            base = e - phi
            for i in range(phi):
                if P[i]:
                    v[base + i] -= c * P[i]
    return v[:phi]


@lru_cache(maxsize=None)
def _subfield_solver(L: int, Lp: int):
    """Change-of-basis data for Q(zeta_Lp) inside Q(zeta_L).

    Returns (columns, pivot_rows, inverse) where columns[j] is the length
    phi(L) vector of z_L^{(L/Lp) * j} and inverse solves for subfield
    coordinates from the pivot rows.
    """
    phiL, phiLp = euler_phi(L), euler_phi(Lp)
    step = L // Lp
    cols = []
    for j in range(phiLp):
        vec = [_ZERO] * (step * j) + [_ONE]
        cols.append(tuple(_reduce_vec(vec, L)))
    # Pick phi(Lp) pivot rows making the submatrix invertible.
    work = [[cols[j][i] for j in range(phiLp)] for i in range(phiL)]
    pivots: list[int] = []
    used = set()
    for col in range(phiLp):
        row = next(
            r for r in range(phiL) if r not in used and work[r][col] != 0
        )
        pivots.append(row)
        used.add(row)
        inv = _ONE / work[row][col]
        for c2 in range(phiLp):
            work[row][c2] *= inv
        for r2 in range(phiL):
            if r2 != row and work[r2][col]:
                f = work[r2][col]
                for c2 in range(phiLp):
                    work[r2][c2] -= f * work[row][c2]
    # Invert the pivot submatrix with Gauss-Jordan.
    sub = [[cols[j][pivots[i]] for j in range(phiLp)] for i in range(phiLp)]
    aug = [row + [_ONE if i == k else _ZERO for k in range(phiLp)]
           for i, row in enumerate(sub)]
    for col in range(phiLp):
        prow = next(r for r in range(col, phiLp) if aug[r][col] != 0)
        aug[col], aug[prow] = aug[prow], aug[col]
        inv = _ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r2 in range(phiLp):
            if r2 != col and aug[r2][col]:
                f = aug[r2][col]
                aug[r2] = [x - f * y for x, y in zip(aug[r2], aug[col])]
    inverse = tuple(tuple(row[phiLp:]) for row in aug)
    return cols, tuple(pivots), inverse


def _try_subfield(vec: list[Fraction], L: int, Lp: int) -> list[Fraction] | None:
    cols, pivots, inverse = _subfield_solver(L, Lp)
    phiLp = len(pivots)
    rhs = [vec[i] for i in pivots]
    x = [sum(inverse[i][j] * rhs[j] for j in range(phiLp)) for i in range(phiLp)]
    # Verify on all rows; membership is not guaranteed by the pivot solve.
    phiL = len(vec)
    for i in range(phiL):
        if sum(cols[j][i] * x[j] for j in range(phiLp)) != vec[i]:
            return None
    return x


class CycNum:
    """An element of some Q(zeta_L), kept at its minimal conductor."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, value: "int | Fraction | CycNum" = 0):
        if isinstance(value, CycNum):
            object.__setattr__(self, "conductor", value.conductor)
            object.__setattr__(self, "coeffs", value.coeffs)
        elif isinstance(value, (int, Fraction)):
            object.__setattr__(self, "conductor", 1)
            object.__setattr__(self, "coeffs", (Fraction(value),))
        else:
            raise DomainError(f"cannot build a cyclotomic number from {value!r}")

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("CycNum is immutable")

    # -- construction ------------------------------------------------------

    @staticmethod
    def _make(L: int, vec: list[Fraction]) -> "CycNum":
        vec = _reduce_vec(vec, L)
        # Fast path: rational values.
        if all(c == 0 for c in vec[1:]):
            return CycNum(vec[0] if vec else _ZERO)
        for Lp in divisors(L):
            if Lp == L:
                break
            sub = _try_subfield(vec, L, Lp)
            if sub is not None:
                out = CycNum.__new__(CycNum)
                object.__setattr__(out, "conductor", Lp)
                object.__setattr__(out, "coeffs", tuple(sub))
                return out
        out = CycNum.__new__(CycNum)
        object.__setattr__(out, "conductor", L)
        object.__setattr__(out, "coeffs", tuple(vec))
        return out

    # -- predicates / views ------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeffs[0])
        return hash((self.conductor, self.coeffs))

    def to_complex(self) -> complex:
        L = self.conductor
        return sum(
            complex(c) * cmath.exp(2j * cmath.pi * i / L)
            for i, c in enumerate(self.coeffs)
            if c
        ) or complex(0)

    # -- arithmetic --------------------------------------------------------

    def _embedded(self, M: int) -> list[Fraction]:
        if self.conductor == M:
            return list(self.coeffs)
        step = M // self.conductor
        out = [_ZERO] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            if c:
                out[step * i] = c
        return _reduce_vec(out, M)

    def _compositum(self, other: "CycNum") -> int:
        M = lcm(self.conductor, other.conductor)
        if CONDUCTOR_LIMIT is not None and M > CONDUCTOR_LIMIT:
            raise DomainError(
                f"compositum conductor {M} exceeds the configured bound"
            )
        return M

    @staticmethod
    def _coerce(other) -> "CycNum | None":
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_rational and other.is_rational:
            return CycNum(self.coeffs[0] + other.coeffs[0])
        M = self._compositum(other)
        a, b = self._embedded(M), other._embedded(M)
        return CycNum._make(M, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        out = CycNum.__new__(CycNum)
        object.__setattr__(out, "conductor", self.conductor)
        object.__setattr__(out, "coeffs", tuple(-c for c in self.coeffs))
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_rational:
            r = self.coeffs[0]
            if r == 0:
                return CycNum(0)
            if other.is_rational:
                return CycNum(r * other.coeffs[0])
            out = CycNum.__new__(CycNum)
            object.__setattr__(out, "conductor", other.conductor)
            object.__setattr__(out, "coeffs", tuple(r * c for c in other.coeffs))
            return out
        if other.is_rational:
            return other * self
        M = self._compositum(other)
        a, b = self._embedded(M), other._embedded(M)
        conv = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        conv[i + j] += ca * cb
        return CycNum._make(M, conv)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if not self:
            raise DomainError("division by zero in a cyclotomic field")
        if self.is_rational:
            return CycNum(1 / self.coeffs[0])
        L = self.conductor
        phi = cyclotomic_polynomial(L)
        # Extended Euclid over Q[z]; Phi_L irreducible so the gcd is a constant.
        r0 = [Fraction(c) for c in phi]
        r1 = list(self.coeffs)
        s0, s1 = [_ZERO], [_ONE]

        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        r0, r1 = trim(r0), trim(r1)
        while len(r1) > 1:
            q = [_ZERO] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for i in range(len(q) - 1, -1, -1):
                c = rem[i + len(r1) - 1] / r1[-1]
                q[i] = c
                if c:
                    for j, d in enumerate(r1):
                        rem[i + j] -= c * d
            rem = trim(rem)
            # s_new = s0 - q*s1
            s_new = list(s0) + [_ZERO] * max(0, len(q) + len(s1) - 1 - len(s0))
            for i, qc in enumerate(q):
                if qc:
                    for j, sc in enumerate(s1):
                        if sc:
                            s_new[i + j] -= qc * sc
            r0, r1 = r1, rem
            s0, s1 = s1, trim(s_new)
        if not r1:
            raise DomainError("element shares a factor with the modulus")
        g = r1[0]
        return CycNum._make(L, [c / g for c in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other:
            raise DomainError("division by zero in a cyclotomic field")
        if other.is_rational:
            r = other.coeffs[0]
            if self.is_rational:
                return CycNum(self.coeffs[0] / r)
            out = CycNum.__new__(CycNum)
            object.__setattr__(out, "conductor", self.conductor)
            object.__setattr__(out, "coeffs", tuple(c / r for c in self.coeffs))
            return out
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> "CycNum":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- display -----------------------------------------------------------

    def __repr__(self):
        if self.is_rational:
            return f"CycNum({self.coeffs[0]})"
        return f"CycNum(L={self.conductor}, {list(self.coeffs)})"

    def pretty(self) -> str:
        """Compact human-readable form used in polynomial printouts."""
        if self.is_rational:
            return str(self.coeffs[0])
        parts = " ".join(str(c) for c in self.coeffs)
        return f"(L={self.conductor}: {parts})"


@lru_cache(maxsize=None)
def root_of_unity(L: int, k: int = 1) -> CycNum:
    """The canonical representation of e(k/L) = exp(2*pi*i*k/L)."""
    if L < 1:
        raise DomainError("the order of a root of unity must be positive")
    k %= L
    g = gcd(k, L)
    L1, k1 = L // g, k // g
    vec = [_ZERO] * k1 + [_ONE]
    return CycNum._make(L1, vec)


def classify_root_of_unity(
    a: CycNum, order_bound: int | None = None
) -> tuple[int, int] | None:
    """Return (n, k) with a = e(k/n), gcd(k, n) = 1, or None.

    Complete without a bound: the torsion of Q(zeta_L)^* has order lcm(2, L).
    An explicit ``order_bound`` restricts the orders considered, mirroring the
    bounded brute-force contract.
    """
    if not a:
        return None
    if a.is_rational:
        r = a.as_rational()
        if r == 1:
            return (1, 0)
        if r == -1:
            return (2, 1)
        return None
    m = lcm(2, a.conductor)
    one = CycNum(1)
    order = next(
        (
            n
            for n in divisors(m)
            if (order_bound is None or n <= order_bound) and a ** n == one
        ),
        None,
    )
    if order is None:
        return None
    for k in range(order):
        if gcd(k, order) == 1 and a == root_of_unity(order, k):
            return (order, k)
    return None
