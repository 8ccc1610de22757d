"""Hecke-monicity verification and classification of leading behavior.

fit_monic solves P(x) = x^n + ... from the triangular system on the exponent
lattice {k*c : 0 <= k <= n} (c the pole exponent of the base series), then
verifies the residual at every exponent inside the guaranteed window, so a
discrepancy hiding between lattice points is still caught.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclotomic import CycNum, classify_root_of_unity
from .errors import DomainError, InconclusiveError, NotMonicError
from .groups import CommutingPair, check_commuting
from .hecke import hecke_apply, isogeny_oracle
from .qseries import PuiseuxSeries
from .replication import Polynomial


@dataclass
class MonicityReport:
    """Verdict of fitting n*T_n f as a monic degree-n polynomial in f."""

    n: int
    verdict: str  # pass / fail / inconclusive
    polynomial: Polynomial | None
    first_failure: Fraction | None
    window: Fraction | None
    detail: str = ""


def _pole_data(F: PuiseuxSeries) -> tuple[Fraction, CycNum]:
    val = F.valuation()
    if val is None or val >= 0:
        raise DomainError("base series must have a pole (negative leading exponent)")
    zeta = F.coeffs[min(F.coeffs)]
    return val, zeta


def fit_monic(S: PuiseuxSeries, F: PuiseuxSeries, n: int) -> MonicityReport:
    """Fit S = P(F) with P monic of degree n, exactly within the window."""
    if n < 0:
        raise DomainError("polynomial degree must be non-negative")
    c, zeta = _pole_data(F)
    powers = [PuiseuxSeries.one()]
    for _ in range(n):
        powers.append(powers[-1] * F)
    window = S.window
    for p in powers:
        w = p.window
        if w is not None and (window is None or w < window):
            window = w
    if window is not None and window < 0:
        return MonicityReport(
            n, "inconclusive", None, None, window,
            "window does not reach exponent 0; the constant term cannot be solved",
        )
    residual = S
    coeffs = [CycNum(0)] * (n + 1)
    for k in range(n, -1, -1):
        b = residual.coefficient(k * c) / zeta ** k
        coeffs[k] = b
        if b:
            residual = residual - powers[k] * b
    poly = Polynomial(coeffs)
    if coeffs[n] != CycNum(1):
        return MonicityReport(
            n, "fail", poly, n * c, window,
            f"demanded leading coefficient is {coeffs[n].pretty()}, not 1",
        )
    residual = residual.truncated(window) if window is not None else residual
    bad = sorted(residual.coeffs)
    if bad:
        e = Fraction(bad[0], residual.den)
        return MonicityReport(n, "fail", poly, e, window,
                              f"residual is nonzero at exponent {e}")
    return MonicityReport(n, "pass", poly, None, window)


def weak_monicity_check(family, pair, n_range) -> list[MonicityReport]:
    """Run n*T_n then fit_monic for each n; the base series is f at the pair."""
    pair = check_commuting(family.group, CommutingPair(*pair))
    F = family.lookup(pair)
    reports = []
    for n in n_range:
        S = hecke_apply(family, n, pair)
        reports.append(fit_monic(S, F, n))
    return reports


def express_as_polynomial(E: PuiseuxSeries, F: PuiseuxSeries, what: str = "series") -> Polynomial:
    """Write E as a polynomial in F by lattice elimination, verifying the
    residual vanishes on the whole window; raises NotMonicError otherwise."""
    c, zeta = _pole_data(F)
    residual = E
    lead = residual.valuation()
    k_hi = 0
    if lead is not None and lead < 0:
        k_hi = int(lead / c)  # floor of a positive ratio
    powers = [PuiseuxSeries.one()]
    for _ in range(k_hi):
        powers.append(powers[-1] * F)
    window = E.window
    for p in powers:
        w = p.window
        if w is not None and (window is None or w < window):
            window = w
    if window is not None and window < 0:
        raise InconclusiveError(f"window {window} too small to express {what}")
    coeffs = [CycNum(0)] * (k_hi + 1)
    for k in range(k_hi, -1, -1):
        b = residual.coefficient(k * c) / zeta ** k
        coeffs[k] = b
        if b:
            residual = residual - powers[k] * b
    residual = residual.truncated(window) if window is not None else residual
    bad = sorted(residual.coeffs)
    if bad:
        raise NotMonicError(what, Fraction(bad[0], residual.den))
    return Polynomial(coeffs)


class BivariatePolynomial:
    """Polynomial in two symbols; keys (i, j) mean x^i y^j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict):
        self.coeffs = {
            k: (c if isinstance(c, CycNum) else CycNum(c))
            for k, c in coeffs.items()
            if (c if isinstance(c, CycNum) else CycNum(c))
        }

    @property
    def x_degree(self) -> int:
        return max((i for i, _ in self.coeffs), default=-1)

    @property
    def y_degree(self) -> int:
        return max((j for _, j in self.coeffs), default=-1)

    def get(self, i: int, j: int) -> CycNum:
        return self.coeffs.get((i, j), CycNum(0))

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def is_monic_in_x(self) -> bool:
        d = self.x_degree
        top = {j: c for (i, j), c in self.coeffs.items() if i == d}
        return top == {0: CycNum(1)}

    def evaluate(self, x, y):
        """Evaluate on series (or numbers) by building powers of each symbol."""
        xs = {0: PuiseuxSeries.one() if isinstance(x, PuiseuxSeries) else CycNum(1)}
        ys = {0: PuiseuxSeries.one() if isinstance(y, PuiseuxSeries) else CycNum(1)}
        for i in range(1, self.x_degree + 1):
            xs[i] = xs[i - 1] * x
        for j in range(1, self.y_degree + 1):
            ys[j] = ys[j - 1] * y
        total = None
        for (i, j), c in sorted(self.coeffs.items()):
            term = xs[i] * ys[j] * c
            total = term if total is None else total + term
        if total is None:
            return PuiseuxSeries.zero() if isinstance(x, PuiseuxSeries) else CycNum(0)
        return total

    def __repr__(self):
        return f"BivariatePolynomial({len(self.coeffs)} terms, deg x {self.x_degree}, deg y {self.y_degree})"


def modular_equation(family, pair, p: int) -> BivariatePolynomial:
    """The order-p equivariant modular equation F_p(y, x): the monic degree
    p+1 polynomial in x vanishing on every Hecke root series, with
    coefficients expressed as polynomials in y = f(g, h, tau).

    Requires g^p = g and h^p = h so the root components stay on the
    (g, g^-b h) line.
    """
    G = family.group
    pair = check_commuting(G, CommutingPair(*pair))
    if p < 2 or any(p % q == 0 for q in range(2, p)):
        raise DomainError(f"order {p} is not prime")
    if G.power(pair.g, p) != pair.g or G.power(pair.h, p) != pair.h:
        raise DomainError(
            f"pair {pair} violates g^p = g, h^p = h for p = {p}"
        )
    roots = []
    for a, b, d in isogeny_oracle(p).triples:
        comp = CommutingPair(
            G.power(pair.g, d),
            G.mul(G.power(pair.g, -b), G.power(pair.h, a)),
        )
        roots.append(family.lookup(comp).substitute_scaled(a, b, d))
    # Coefficients of prod (x - r_i) as series, ascending in x.
    elem = [PuiseuxSeries.one()]
    for r in roots:
        nxt = [PuiseuxSeries.zero()] * (len(elem) + 1)
        for i, c in enumerate(elem):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        elem = nxt
    F = family.lookup(pair)
    out: dict[tuple[int, int], CycNum] = {}
    for i, series in enumerate(elem):
        if i == p + 1:
            out[(i, 0)] = CycNum(1)
            continue
        poly = express_as_polynomial(series, F, what=f"symmetric function at x^{i}")
        for j, c in enumerate(poly.coeffs):
            if c:
                out[(i, j)] = c
    return BivariatePolynomial(out)


@dataclass
class SymmetryReport:
    symmetric: bool
    witness: tuple[int, int] | None = None


def symmetry_check(F: BivariatePolynomial) -> SymmetryReport:
    """Is the coefficient map invariant under (i, j) -> (j, i)?"""
    for (i, j), c in F.coeffs.items():
        if F.get(j, i) != c:
            return SymmetryReport(False, (i, j))
    return SymmetryReport(True)


@dataclass
class LeadingBehaviorReport:
    """Leading term zeta * q^(C/M) plus the constraints it must satisfy."""

    zeta: CycNum
    C: int
    den: int
    root_classification: tuple[int, int] | None
    root_ok: bool          # zeta is a root of unity with zeta^(2N) = 1
    strong_root_ok: bool   # the even-case bound zeta^N = 1
    support_ok: bool       # every exponent is an integer multiple of C/M
    support_witness: Fraction | None


def leading_behavior(f: PuiseuxSeries, N: int) -> LeadingBehaviorReport:
    """Classify the pole coefficient and the support lattice of f.

    The exponent denominator of f plays the role of |g|. Violations are
    reported, not raised.
    """
    val = f.valuation()
    if val is None or val >= 0:
        raise DomainError("classification needs a pole (negative leading exponent)")
    C = min(f.coeffs)
    zeta = f.coeffs[C]
    cls = classify_root_of_unity(zeta)
    one = CycNum(1)
    root_ok = cls is not None and zeta ** (2 * N) == one
    strong_ok = cls is not None and zeta ** N == one
    support_witness = None
    for n in sorted(f.coeffs):
        if n % C:
            support_witness = Fraction(n, f.den)
            break
    return LeadingBehaviorReport(
        zeta, C, f.den, cls, root_ok, strong_ok,
        support_witness is None, support_witness,
    )


@dataclass
class TrigTypeReport:
    """Dichotomy evidence: exact match to q^-1 + a0 + zeta*q after rescaling.

    A "trigonometric" verdict certifies the form on the guaranteed window
    only; "not-trigonometric" is witnessed inside the window and final.
    """

    verdict: str  # trigonometric / not-trigonometric / inconclusive
    zeta: CycNum | None = None
    constant: CycNum | None = None
    scale: Fraction | None = None   # the a of tau -> a*tau + b
    shift: Fraction | None = None   # the b
    reason: str = ""


def trig_type_detect(f: PuiseuxSeries) -> TrigTypeReport:
    val = f.valuation()
    if val is None or val >= 0:
        return TrigTypeReport("not-trigonometric", reason="no pole at infinity")
    e0 = val
    window = f.window
    if window is not None and window < -e0:
        return TrigTypeReport(
            "inconclusive",
            reason=f"window {window} cannot see the mirror exponent {-e0}",
        )
    allowed = {e0, Fraction(0), -e0}
    for n in sorted(f.coeffs):
        e = Fraction(n, f.den)
        if e not in allowed:
            return TrigTypeReport(
                "not-trigonometric",
                reason=f"support contains exponent {e} outside {{C, 0, -C}}",
            )
    z0 = f.coeffs[min(f.coeffs)]
    cls0 = classify_root_of_unity(z0)
    if cls0 is None:
        return TrigTypeReport(
            "not-trigonometric",
            reason="leading coefficient is not a root of unity",
        )
    n0, k0 = cls0
    z1 = f.coefficient(-e0)
    if z1:
        if classify_root_of_unity(z1 * z0) is None:
            return TrigTypeReport(
                "not-trigonometric",
                reason="mirror coefficient does not rescale to a root of unity",
            )
    scale = -1 / e0
    shift = scale * Fraction(k0, n0)
    zeta = z1 * z0
    return TrigTypeReport(
        "trigonometric", zeta, f.coefficient(0), scale, shift,
        "matches q^-1 + a0 + zeta*q on the guaranteed window",
    )
