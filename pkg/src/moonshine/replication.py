"""Replication machinery for normalized series f = q^-1 + sum_{k>0} a_k q^k:
Faber polynomials, the bivarial transform and its H-table, replicate
extraction, replicability / complete replicability verdicts, coefficient
extension from seven-coefficient seeds, and the bridge to cyclic-group
equivariant families.

Coefficients live in cyclotomic fields throughout; the defining formulas are
used unchanged for non-rational coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclotomic import CycNum, divisors
from .errors import (
    DomainError,
    InconclusiveError,
    InconsistentDataError,
    NotReplicableError,
    UnsolvableSystemError,
)
from .groups import CommutingPair, GroupTable
from .hecke import EquivariantFamily
from .qseries import PuiseuxSeries, telescoped_quotient


class Polynomial:
    """Dense polynomial with cyclotomic coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, CycNum) else CycNum(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == CycNum(1)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        """Evaluate by Horner; x may be a series or a cyclotomic number."""
        if isinstance(x, PuiseuxSeries):
            acc = PuiseuxSeries.zero()
        else:
            acc = CycNum(0)
        for c in reversed(self.coeffs):
            acc = acc * x + (PuiseuxSeries.monomial(c, 0) if isinstance(x, PuiseuxSeries) else c)
        return acc

    def __repr__(self):
        return f"Polynomial({self.pretty()})"

    def pretty(self, var: str = "x") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                term = c.pretty()
            else:
                xk = var if k == 1 else f"{var}^{k}"
                if c == CycNum(1):
                    term = xk
                elif c == CycNum(-1):
                    term = f"-{xk}"
                else:
                    term = f"{c.pretty()}*{xk}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out


@dataclass
class HTable:
    """Bivarial H-numbers H_{m,n} on a rectangle m <= P, n <= Q."""

    p_order: int
    q_order: int
    values: dict[tuple[int, int], CycNum] = field(default_factory=dict)

    def h(self, m: int, n: int) -> CycNum:
        if not (1 <= m and 1 <= n):
            raise DomainError("H indices start at 1")
        if m <= self.p_order and n <= self.q_order:
            return self.values.get((m, n), CycNum(0))
        if n <= self.p_order and m <= self.q_order:
            return self.values.get((n, m), CycNum(0))
        raise InconclusiveError(f"H({m},{n}) outside the computed rectangle")

    @property
    def order(self) -> int:
        return min(self.p_order, self.q_order)


@dataclass
class ReplicateSet:
    """A normalized base series with its replicates f^(t), t = 1..T."""

    base: PuiseuxSeries
    replicates: dict[int, PuiseuxSeries]

    @property
    def order_bound(self) -> int:
        return max(self.replicates)

    def replicate(self, t: int) -> PuiseuxSeries:
        if t not in self.replicates:
            raise DomainError(f"replicate index {t} not extracted")
        return self.replicates[t]


def require_normalized(f: PuiseuxSeries) -> PuiseuxSeries:
    """Demand the shape q^-1 + sum_{k>0} a_k q^k with integer exponents."""
    if f.den != 1:
        raise DomainError("normalized series must have integer exponents")
    if f.coeffs.get(-1) != CycNum(1):
        raise DomainError("normalized series must start with q^-1 (coefficient 1)")
    if any(n < -1 for n in f.coeffs):
        raise DomainError("normalized series has a pole deeper than q^-1")
    if 0 in f.coeffs:
        raise DomainError("normalized series must have zero constant term")
    return f


def normalized_shift(f: PuiseuxSeries) -> tuple[PuiseuxSeries, CycNum]:
    """Subtract the constant term, returning (normalized series, removed a_0)."""
    a0 = f.coeffs.get(0, CycNum(0))
    if a0:
        f = f - PuiseuxSeries.monomial(a0, 0)
    return require_normalized(f), a0


def _coefficient(f: PuiseuxSeries, k: int) -> CycNum:
    if f.prec is not None and k > f.prec:
        raise InconclusiveError(f"coefficient a_{k} beyond window {f.prec}")
    return f.coeffs.get(k, CycNum(0))


def faber_image(f: PuiseuxSeries, n: int) -> tuple[Polynomial, PuiseuxSeries]:
    """The Faber polynomial of index n together with its value on f.

    Triangular elimination on the principal parts of f^0..f^n produces the
    unique monic degree-n polynomial with P(f) = q^-n + O(q).
    """
    require_normalized(f)
    if n < 1:
        raise DomainError("Faber index must be positive")
    if f.prec is not None and f.prec < n:
        raise InconclusiveError(
            f"window {f.prec} too small for Faber index {n} (need >= {n})"
        )
    powers = [PuiseuxSeries.one()]
    for _ in range(n):
        powers.append(powers[-1] * f)
    coeffs = [CycNum(0)] * n + [CycNum(1)]
    image = powers[n]
    for e in range(n - 1, -1, -1):
        c = image.coefficient(-e)
        if c:
            coeffs[e] = -c
            image = image - powers[e] * c
    return Polynomial(coeffs), image


def faber(f: PuiseuxSeries, n: int) -> Polynomial:
    return faber_image(f, n)[0]


def bivarial_window(f: PuiseuxSeries, P: int, Q: int) -> HTable:
    """H_{m,n} on the rectangle m <= P, n <= Q via the bivarial transform:
    log((f(p) - f(q))/(p^-1 - q^-1)) = -sum H_{m,n} p^m q^n."""
    require_normalized(f)
    quotient = telescoped_quotient(f, P, Q)
    L = quotient.log()
    values = {}
    for (m, n), c in L.coeffs.items():
        values[(m, n)] = -c
    return HTable(P, Q, values)


def bivarial(f: PuiseuxSeries, M: int) -> HTable:
    return bivarial_window(f, M, M)


@dataclass
class ConsistencyReport:
    verdict: str  # pass / fail / inconclusive
    n: int
    checked_up_to: int
    witness: int | None = None


def faber_h_consistency(f: PuiseuxSeries, n: int, M: int) -> ConsistencyReport:
    """Verify Phi_n(f) = q^-n + n * sum_m H_{m,n} q^m coefficient by coefficient."""
    _, image = faber_image(f, n)
    table = bivarial_window(f, M, n)
    top = M
    if image.prec is not None and image.prec < M:
        top = image.prec
    if top < 1:
        return ConsistencyReport("inconclusive", n, 0)
    for m in range(1, top + 1):
        lhs = image.coefficient(m)
        rhs = table.h(m, n) * n
        if lhs != rhs:
            return ConsistencyReport("fail", n, top, witness=m)
    verdict = "pass" if top >= M else "inconclusive"
    return ConsistencyReport(verdict, n, top)


def extract_replicates(
    f: PuiseuxSeries, T: int, M: int, check_order: int | None = None
) -> ReplicateSet:
    """Solve the replicate coefficients a^(t)_k for t <= T, k <= M from

        H_{t,tk} = sum over s | t of (1/s) a^(s)_{t^2 k / s^2},

    then cross-check every available H relation; a violated relation raises
    NotReplicableError (the defining independence fails).
    """
    require_normalized(f)
    if T < 1 or M < 1:
        raise DomainError("replicate bounds must be positive")
    need = max(T * T * M, T + T * M - 1)
    if f.prec is not None and f.prec < need:
        raise InconclusiveError(
            f"window {f.prec} too small to extract {T} replicates to index {M}"
            f" (need {need})"
        )
    # Solving a^(t)_k consumes a^(s)_{t^2 k / s^2} for s | t, so lower levels
    # must reach deeper: level t is solved out to (T/t)^2 * M.
    depth = {t: (T * T * M) // (t * t) for t in range(1, T + 1)}
    coeff = {1: {k: _coefficient(f, k) for k in range(1, depth[1] + 1)}}
    if T > 1:
        q_max = max(t * depth[t] for t in range(2, T + 1))
        table = bivarial_window(f, T, q_max)
    for t in range(2, T + 1):
        coeff[t] = {}
        for k in range(1, depth[t] + 1):
            val = table.h(t, t * k)
            for s in divisors(t):
                if s < t:
                    val = val - coeff[s][(t * t * k) // (s * s)] * Fraction(1, s)
            coeff[t][k] = val * t

    # Over-determination: every H cell whose replicate data we hold must agree.
    K = f.prec if f.prec is not None else need
    B = min(check_order if check_order is not None else 12, (K + 1) // 2)
    if B >= 2:
        square = bivarial_window(f, B, B)
        for m in range(1, B + 1):
            for n in range(m, B + 1):
                ds = divisors(gcd(m, n))
                if any(t > T for t in ds):
                    continue
                if m * n > K:
                    continue
                if any((m * n) // (t * t) > depth[t] for t in ds):
                    continue
                expected = CycNum(0)
                for t in ds:
                    expected = expected + coeff[t][(m * n) // (t * t)] * Fraction(1, t)
                if square.h(m, n) != expected:
                    raise NotReplicableError((m, n))

    replicates = {}
    for t in range(1, T + 1):
        data = {-1: CycNum(1)}
        for k in range(1, depth[t] + 1):
            data[k] = coeff[t][k]
        replicates[t] = PuiseuxSeries(1, data, depth[t])
    return ReplicateSet(f, replicates)


@dataclass
class ReplicabilityReport:
    verdict: str  # pass / fail
    order: int
    witness: tuple[tuple[int, int], tuple[int, int]] | None = None


def replicability_check(f: PuiseuxSeries, M: int) -> ReplicabilityReport:
    """f is replicable up to order M iff H_{m,n} depends only on
    (gcd(m,n), m*n) for all indices <= M."""
    require_normalized(f)
    if f.prec is not None and f.prec < 2 * M - 1:
        raise InconclusiveError(
            f"window {f.prec} too small for replicability order {M}"
        )
    table = bivarial(f, M)
    buckets: dict[tuple[int, int], tuple[tuple[int, int], CycNum]] = {}
    for m in range(1, M + 1):
        for n in range(1, M + 1):
            key = (gcd(m, n), m * n)
            val = table.h(m, n)
            if key in buckets:
                cell, ref = buckets[key]
                if val != ref:
                    return ReplicabilityReport("fail", M, (cell, (m, n)))
            else:
                buckets[key] = ((m, n), val)
    return ReplicabilityReport("pass", M)


@dataclass
class CompleteReplicabilityReport:
    verdict: str  # pass / fail
    T: int
    order: int
    detail: str = ""
    replicate_orders: dict[int, int] = field(default_factory=dict)


def complete_replicability_check(
    f: PuiseuxSeries, T: int, M: int
) -> CompleteReplicabilityReport:
    """Every extracted replicate must itself be replicable, and the s-th
    replicate of f^(t) must equal f^(st); any violation is a fail verdict."""
    require_normalized(f)
    K = f.prec
    t_sq = T * T
    ext = (K // t_sq) if K is not None else max(2 * M - 1, M)
    if ext < 1:
        raise InconclusiveError(
            f"window {K} cannot support any coefficients of the replicate {T}"
        )
    try:
        rs = extract_replicates(f, T, ext)
    except NotReplicableError as exc:
        return CompleteReplicabilityReport("fail", T, M, f"base not replicable: {exc}")
    # Each replicate is checked at the deepest order its window affords,
    # capped at M; the achieved orders are part of the report.
    orders = {}
    for t in range(1, T + 1):
        rep = rs.replicate(t)
        order_t = min(M, (rep.prec + 1) // 2)
        if order_t < 1:
            raise InconclusiveError(
                f"replicate {t} has window {rep.prec}; nothing checkable"
            )
        orders[t] = order_t
        verdict = replicability_check(rep, order_t)
        if verdict.verdict != "pass":
            return CompleteReplicabilityReport(
                "fail", T, M,
                f"replicate {t} fails replicability at H{verdict.witness}",
                orders,
            )
    for t in range(1, T + 1):
        for s in range(2, T // t + 1):
            rep = rs.replicate(t)
            inner_m = rep.prec // (s * s)
            if inner_m < 1:
                continue
            try:
                inner = extract_replicates(rep, s, inner_m)
            except NotReplicableError as exc:
                return CompleteReplicabilityReport(
                    "fail", T, M, f"replicate {t} is not replicable: {exc}", orders
                )
            lhs = inner.replicate(s)
            rhs = rs.replicate(s * t)
            if not lhs.agrees_with(rhs).equal:
                return CompleteReplicabilityReport(
                    "fail", T, M,
                    f"{s}-th replicate of f^({t}) differs from f^({s * t})",
                    orders,
                )
    return CompleteReplicabilityReport("pass", T, M, "", orders)


# ---------------------------------------------------------------------------
# Coefficient extension from seven-coefficient seeds.


class _HEvaluator:
    """Memoized per-series H evaluation straight from coefficients.

    T_k(m, n) = [p^m q^n] S^k for S = sum a_{i+j-1} p^i q^j; then
    H_{m,n} = a_{m+n-1} + sum_{k>=2} T_k(m,n)/k. The partial sum (k >= 2 only)
    uses coefficient indices <= m+n-3, so memo entries stay valid as the known
    prefix grows.
    """

    def __init__(self, coeff_of):
        self._a = coeff_of
        self._memo: dict[tuple[int, int, int], CycNum] = {}

    def _t(self, k: int, m: int, n: int) -> CycNum:
        if k == 1:
            return self._a(m + n - 1)
        key = (k, m, n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        total = CycNum(0)
        for i in range(1, m - k + 2):
            for j in range(1, n - k + 2):
                a = self._a(i + j - 1)
                if a:
                    sub = self._t(k - 1, m - i, n - j)
                    if sub:
                        total = total + a * sub
        self._memo[key] = total
        return total

    def h_partial(self, m: int, n: int) -> CycNum:
        """H_{m,n} minus its leading a_{m+n-1} term."""
        total = CycNum(0)
        for k in range(2, min(m, n) + 1):
            total = total + self._t(k, m, n) * Fraction(1, k)
        return total


def extend_from_partial(
    partials: dict[int, list], target: int
) -> ReplicateSet:
    """Reconstruct coefficients to the target index from short prefixes of the
    replicates at the given indices (powers of two, including 1), assuming
    complete replicability.

    Works by single-unknown propagation over all equations

        a^(r)_{m+n-1} + P_{m,n}(a^(r)_{<m+n-1}) = sum_{s|(m,n)} (1/s) a^(rs)_{mn/s^2}

    and re-uses every fully-known equation as a consistency check, so corrupted
    inputs surface as InconsistentDataError.
    """
    if 1 not in partials:
        raise DomainError("the base series (index 1) must be among the inputs")
    partials = {int(t): [c if isinstance(c, CycNum) else CycNum(c) for c in cs]
                for t, cs in partials.items()}
    for t, cs in partials.items():
        if t < 1:
            raise DomainError("replicate indices must be positive")
        if len(cs) < 7:
            raise DomainError(
                f"need at least seven seed coefficients for replicate {t}, got {len(cs)}"
            )
    r_max = max(16, 2 * max(partials))
    k_cap = max(2 * target + 8, 28)

    known: dict[tuple[int, int], CycNum] = {}
    for t, cs in partials.items():
        for i, c in enumerate(cs):
            known[(t, i + 1)] = c

    prefix: dict[int, int] = {}

    def refresh_prefix(r: int) -> int:
        p = prefix.get(r, 0)
        while (r, p + 1) in known:
            p += 1
        prefix[r] = p
        return p

    evaluators: dict[int, _HEvaluator] = {}

    def evaluator(r: int) -> _HEvaluator:
        ev = evaluators.get(r)
        if ev is None:
            ev = _HEvaluator(lambda k, rr=r: known[(rr, k)])
            evaluators[r] = ev
        return ev

    equations = []
    for r in range(1, r_max + 1):
        for m in range(2, k_cap + 1):
            if m * m > k_cap:
                break
            for n in range(m, k_cap + 1):
                if m * n > k_cap or m + n - 1 > k_cap:
                    break
                ds = divisors(gcd(m, n))
                if any(r * s > r_max for s in ds):
                    continue
                equations.append((r, m, n, tuple(ds)))
    equations.sort()

    checked = [False] * len(equations)
    progress = True
    while progress:
        progress = False
        for idx, (r, m, n, ds) in enumerate(equations):
            if checked[idx]:
                continue
            if refresh_prefix(r) < m + n - 2:
                continue
            lead = (r, m + n - 1)
            rhs_vars = [((r * s, (m * n) // (s * s)), Fraction(1, s)) for s in ds]
            unknowns = []
            if lead not in known:
                unknowns.append(lead)
            unknowns.extend(v for v, _ in rhs_vars if v not in known and v not in unknowns)
            if len(unknowns) > 1:
                continue
            part = evaluator(r).h_partial(m, n)
            if not unknowns:
                lhs = known[lead] + part
                rhs = CycNum(0)
                for v, c in rhs_vars:
                    rhs = rhs + known[v] * c
                if lhs != rhs:
                    raise InconsistentDataError((r, m, n), max(m + n - 1, m * n))
                checked[idx] = True
                progress = True
                continue
            u = unknowns[0]
            lhs_const = (known[lead] if lead in known else CycNum(0)) + part
            rhs_const = CycNum(0)
            u_coeff = Fraction(0)
            if lead == u:
                u_coeff += 1
            for v, c in rhs_vars:
                if v == u:
                    u_coeff -= c
                else:
                    rhs_const = rhs_const + known[v] * c
            # equation: lhs_const + [u if lead] = rhs_const + sum c*u terms
            # => u * u_coeff = rhs_const - lhs_const
            if u_coeff == 0:
                continue
            known[u] = (rhs_const - lhs_const) * (Fraction(1) / u_coeff)
            checked[idx] = True
            progress = True

    reached = refresh_prefix(1)
    if reached < target:
        raise UnsolvableSystemError(reached, target)
    base = PuiseuxSeries(
        1,
        {-1: CycNum(1), **{k: known[(1, k)] for k in range(1, target + 1)}},
        target,
    )
    replicates = {1: base}
    for t in sorted(partials):
        if t == 1:
            continue
        p = refresh_prefix(t)
        replicates[t] = PuiseuxSeries(
            1,
            {-1: CycNum(1), **{k: known[(t, k)] for k in range(1, p + 1)}},
            p,
        )
    return ReplicateSet(base, replicates)


# ---------------------------------------------------------------------------
# Bridge to cyclic-group families.


def replicates_to_family(rs: ReplicateSet, N: int) -> EquivariantFamily:
    """Assemble the Z/N family with f(1, g^m, tau) = f^(m); requires the
    replicate list to have order N (f^(m) = f^(m+N)) and to satisfy the
    inversion symmetry f^(m) = f^(N-m) forced by the +-Z quotient."""
    if N < 1:
        raise DomainError("the order must be positive")
    T = rs.order_bound
    if T < N:
        raise DomainError(f"need replicates up to t = {N}, have {T}")
    for m in range(1, T - N + 1):
        if not rs.replicate(m).agrees_with(rs.replicate(m + N)).equal:
            raise DomainError(
                f"replicates violate order {N}: f^({m}) differs from f^({m + N})"
            )
    G = GroupTable.cyclic(N)
    gen = 1 % N
    entries = {}
    for m in range(1, N + 1):
        entries[CommutingPair(G.identity, G.power(gen, m))] = rs.replicate(m)
    # The family constructor folds (1, g^m) with (1, g^-m) and verifies equality.
    return EquivariantFamily(G, entries, on_conflict="check")


def family_to_replicates(
    family: EquivariantFamily, T: int, generator: int | None = None
) -> ReplicateSet:
    """Inverse of the bridge: read f^(m) = f(1, g^m) off a cyclic-group family."""
    G = family.group
    if generator is None:
        generator = next(
            (x for x in range(G.n) if G.element_order[x] == G.n), None
        )
        if generator is None:
            raise DomainError("group is not cyclic; supply a generator")
    replicates = {}
    for m in range(1, T + 1):
        replicates[m] = family.lookup(
            CommutingPair(G.identity, G.power(generator, m))
        )
    return ReplicateSet(replicates[1], replicates)
