"""Twisted denominator formula verification for Fricke-compatible character
data, assembly of formal orbifold partition functions, and the induced
weak Hecke-monicity suite.

Character data is a truncated table of traces Tr(h^e | V^{i, r/N}_{k/N}) for a
central element g of order N acting by the scalar e(r/N) on each slice. The
identity checked equates the homology-side generating function with the
exponential of Adams-operation traces, exactly, cell by cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import CycNum, root_of_unity
from .errors import DomainError, InconclusiveError
from .groups import CommutingPair, GroupTable
from .hecke import EquivariantFamily
from .monic import MonicityReport, weak_monicity_check
from .qseries import BiSeries, PuiseuxSeries


class ModuleCharacterData:
    """Trace table for the module collection, truncated in the grading.

    Keys are (i, r, knum, e): the module V with upper index (i, r/N) and
    lower grading knum/N, traced against h^e. Entries are guaranteed complete
    for knum <= k_bound; absent entries inside the truncation are zero.
    ``p_bound`` caps the p-degree for which the degree-two homology slice is
    recorded.
    """

    __slots__ = ("N", "h_order", "k_bound", "p_bound", "traces")

    def __init__(self, N: int, h_order: int, k_bound: int, p_bound: int, traces: dict):
        if N < 1 or h_order < 1:
            raise DomainError("group element orders must be positive")
        self.N = N
        self.h_order = h_order
        self.k_bound = k_bound
        self.p_bound = p_bound
        table: dict[tuple[int, int, int, int], CycNum] = {}
        for (i, r, knum, e), value in traces.items():
            value = value if isinstance(value, CycNum) else CycNum(value)
            if not value:
                continue
            if knum > k_bound:
                raise DomainError(
                    f"trace entry at grading {knum} exceeds the truncation {k_bound}"
                )
            table[(i % N, r % N, knum, self._e_canon(e))] = value
        self.traces = table

    def _e_canon(self, e: int) -> int:
        return (e - 1) % self.h_order + 1

    def trace(self, i: int, r: int, knum: int, e: int) -> CycNum:
        if knum > self.k_bound:
            raise InconclusiveError(
                f"trace at grading {knum} is beyond the table truncation {self.k_bound}"
            )
        return self.traces.get(
            (i % self.N, r % self.N, knum, self._e_canon(e)), CycNum(0)
        )

    def with_entry(self, i: int, r: int, knum: int, e: int, value) -> "ModuleCharacterData":
        """Copy with one entry replaced; used for perturbation experiments."""
        table = dict(self.traces)
        key = (i % self.N, r % self.N, knum, self._e_canon(e))
        value = value if isinstance(value, CycNum) else CycNum(value)
        if value:
            table[key] = value
        else:
            table.pop(key, None)
        return ModuleCharacterData(self.N, self.h_order, self.k_bound, self.p_bound, table)

    def __repr__(self):
        return (
            f"ModuleCharacterData(N={self.N}, h_order={self.h_order}, "
            f"{len(self.traces)} entries, k<=({self.k_bound}), p<=({self.p_bound}))"
        )


def orbifold_partition(data: ModuleCharacterData, k: int, l: int, m: int) -> PuiseuxSeries:
    """Z(g^k, g^l h^m, tau): the graded trace with the r-congruence filter
    n = k*r mod 1, as a series in q^(1/N) with the table's truncation window."""
    N = data.N
    coeffs: dict[int, CycNum] = {}
    e = data._e_canon(m)
    for (i, r, knum, ee), tr in data.traces.items():
        if i != k % N or ee != e:
            continue
        nn = knum - N
        if (nn - k * r) % N:
            continue
        phase = root_of_unity(N, (l * r) % N)
        term = phase * tr
        if nn in coeffs:
            coeffs[nn] = coeffs[nn] + term
        else:
            coeffs[nn] = term
    return PuiseuxSeries(N, coeffs, data.k_bound - N)


@dataclass
class DenominatorCellReport:
    h_power: int
    verdict: str  # pass / fail
    first_failure: tuple[Fraction, Fraction] | None = None


@dataclass
class DenominatorReport:
    window: tuple[int, int]
    per_power: list[DenominatorCellReport] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if all(c.verdict == "pass" for c in self.per_power) else "fail"


def _homology_side(data: ModuleCharacterData, e0: int, P: int, Q: int) -> BiSeries:
    N = data.N
    out: dict[tuple[int, int], CycNum] = {(-1, 0): CycNum(1)}
    vacuum = data.trace(1, -1, N - 1, e0)
    for mm in range(1, P + 1):
        c = vacuum * data.trace(mm, 1, N + mm, e0)
        if c:
            out[(mm, 0)] = c
    nn = -(N)
    for nn in range(-N, Q + 1):
        if N + nn < 0:
            continue
        tr = data.trace(1, nn, N + nn, e0)
        if tr:
            key = (0, nn)
            out[key] = out.get(key, CycNum(0)) - tr
    return BiSeries((1, N), out, (P, Q))


def _exponential_side(data: ModuleCharacterData, e0: int, P: int, Q: int) -> BiSeries:
    N = data.N
    arg: dict[tuple[int, int], CycNum] = {}
    Pw = P + 1  # the p^-1 shift costs one degree of p-window
    for i_ad in range(1, Pw + 1):
        for mm in range(1, Pw // i_ad + 1):
            nn_lo = -((N) // mm) - 1
            nn_hi = Q // i_ad
            for nn in range(nn_lo, nn_hi + 1):
                knum = N + mm * nn
                if knum < 0 or knum > data.k_bound:
                    continue
                tr = data.trace(mm, nn, knum, i_ad * e0)
                if not tr:
                    continue
                key = (i_ad * mm, i_ad * nn)
                term = tr * Fraction(1, i_ad)
                arg[key] = arg.get(key, CycNum(0)) + term
    S = BiSeries((1, N), arg, (Pw, Q))
    R = (-S).exp()
    return R * BiSeries.monomial(1, -1, 0)


def denominator_verify(
    data: ModuleCharacterData, h_powers, window: tuple[int, int]
) -> DenominatorReport:
    """Check the twisted denominator identity for each h-power, exactly on the
    bidegree window (p-degree <= P, q-numerator <= Q)."""
    P, Q = window
    if P < 1 or Q < 1:
        raise DomainError("verification window must be positive in both degrees")
    if P > data.p_bound:
        raise InconclusiveError(
            f"window p-degree {P} exceeds the table's p-truncation {data.p_bound}"
        )
    need_k = data.N + (P + 1) * max(Q, 1)
    if need_k > data.k_bound:
        raise InconclusiveError(
            f"window {window} needs trace gradings to {need_k}, table stops at {data.k_bound}"
        )
    report = DenominatorReport(window)
    for e0 in h_powers:
        lhs = _homology_side(data, e0, P, Q)
        rhs = _exponential_side(data, e0, P, Q)
        agreement = lhs.agrees_with(rhs)
        if agreement.equal:
            report.per_power.append(DenominatorCellReport(e0, "pass"))
        else:
            report.per_power.append(
                DenominatorCellReport(e0, "fail", agreement.first_diff)
            )
    return report


def _abelian_bicyclic(N: int, M: int) -> GroupTable:
    table = []
    for x1 in range(N):
        for y1 in range(M):
            row = []
            for x2 in range(N):
                for y2 in range(M):
                    row.append(((x1 + x2) % N) * M + (y1 + y2) % M)
            table.append(row)
    return GroupTable(table, validate=False)


def character_family(data: ModuleCharacterData):
    """The equivariant family Z(g^k, g^l h^m) over Z/N x Z/h_order, plus the
    distinguished pair (g, h)."""
    N, M = data.N, data.h_order
    G = _abelian_bicyclic(N, M)
    g = (1 % N) * M
    h = 1 % M
    entries = {}
    for k in range(N):
        for l in range(N):
            for m in range(M):
                pair = CommutingPair((k % N) * M, (l % N) * M + m % M)
                series = orbifold_partition(data, k, l, m)
                key = CommutingPair(*pair)
                if key not in entries:
                    entries[key] = series
    family = EquivariantFamily(G, entries, on_conflict="check")
    return G, family, CommutingPair(g, h)


def fricke_monicity_suite(data: ModuleCharacterData, n_range) -> list[MonicityReport]:
    """Build the orbifold family and run the weak Hecke-monicity sweep at the
    distinguished pair (g, h)."""
    _, family, pair = character_family(data)
    return weak_monicity_check(family, pair, n_range)
