"""Equivariant Hecke operators on families of q-expansions indexed by
commuting pairs, the composition identity, and the restricted-isogeny
enumeration used as its combinatorial oracle.

The operator computed is the un-normalized n*T_n:

    n*T_n f(g, h, tau) = sum over ad = n, 0 <= b < d of
                         f(g^d, g^-b h^a, (a tau + b)/d),

which keeps every coefficient inside the ring generated by the input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclotomic import CycNum, divisors, root_of_unity
from .errors import DomainError, IncompleteFamilyError, InconclusiveError
from .groups import CommutingPair, GroupTable, check_commuting
from .qseries import Agreement, PuiseuxSeries


@dataclass
class IsogenyEnumeration:
    """Triples (a, b, d) with ad = n, 0 <= b < d, plus primitivity flags."""

    n: int
    triples: list[tuple[int, int, int]]
    primitive: list[bool]

    @property
    def count(self) -> int:
        return len(self.triples)

    @property
    def primitive_count(self) -> int:
        return sum(self.primitive)

    def primitive_triples(self) -> list[tuple[int, int, int]]:
        return [t for t, p in zip(self.triples, self.primitive) if p]


def isogeny_oracle(n: int) -> IsogenyEnumeration:
    """Enumerate restricted degree-n isogeny data; sigma(n) triples in total."""
    if n < 1:
        raise DomainError("isogeny degree must be positive")
    triples = []
    flags = []
    for d in divisors(n):
        a = n // d
        for b in range(d):
            triples.append((a, b, d))
            flags.append(gcd(gcd(a, b), d) == 1)
    return IsogenyEnumeration(n, triples, flags)


class EquivariantFamily:
    """Assignment of a series to each needed component, respecting the +-Z and
    conjugation equivalences: looking up a non-canonical pair twists the
    stored coefficients by the translation phase e(n*k)."""

    def __init__(self, group: GroupTable, entries, on_conflict: str = "check"):
        if on_conflict not in ("check", "error"):
            raise DomainError(f"unknown conflict policy {on_conflict!r}")
        self.group = group
        self._table: dict[CommutingPair, PuiseuxSeries] = {}
        self._canon_cache: dict[CommutingPair, tuple[CommutingPair, int]] = {}
        for pair, series in entries.items():
            self._insert(CommutingPair(*pair), series, on_conflict)

    # -- construction -------------------------------------------------------

    def _canonicalize(self, pair: CommutingPair) -> tuple[CommutingPair, int]:
        hit = self._canon_cache.get(pair)
        if hit is None:
            from .groups import pair_canonicalize

            hit = pair_canonicalize(self.group, pair)
            self._canon_cache[pair] = hit
        return hit

    def _insert(self, pair: CommutingPair, series: PuiseuxSeries, on_conflict: str):
        G = self.group
        pair = check_commuting(G, pair)
        order_g = G.element_order[pair.g]
        if order_g % series.den:
            raise DomainError(
                f"series for {pair} has exponent denominator {series.den}, "
                f"not a divisor of |g| = {order_g}"
            )
        canon, k = self._canonicalize(pair)
        stored = series.twisted(-k)  # f(canon)(tau) = f(pair)(tau - k)
        from .groups import translation_stabilizer

        delta = translation_stabilizer(G, pair)
        if delta:
            step = series.den // gcd(delta, series.den)
            bad = [n for n in stored.coeffs if n % step]
            if bad:
                raise DomainError(
                    f"component {canon} is fixed by translation {delta}; "
                    f"exponent {Fraction(min(bad), stored.den)} is inadmissible"
                )
        if canon in self._table:
            if on_conflict == "error":
                raise DomainError(f"duplicate entry for component {canon}")
            if not self._table[canon].agrees_with(stored).equal:
                raise DomainError(
                    f"conflicting series for component {canon} (via {pair})"
                )
            return
        self._table[canon] = stored

    # -- queries -------------------------------------------------------------

    def components(self) -> list[CommutingPair]:
        return sorted(self._table)

    def __contains__(self, pair) -> bool:
        canon, _ = self._canonicalize(CommutingPair(*pair))
        return canon in self._table

    def lookup(self, pair) -> PuiseuxSeries:
        pair = CommutingPair(*pair)
        canon, k = self._canonicalize(pair)
        series = self._table.get(canon)
        if series is None:
            raise IncompleteFamilyError(pair, canon)
        return series.twisted(k)

    def map_series(self, fn) -> "EquivariantFamily":
        """A new family with fn applied to every stored component series."""
        out = EquivariantFamily.__new__(EquivariantFamily)
        out.group = self.group
        out._canon_cache = self._canon_cache
        out._table = {pair: fn(s) for pair, s in self._table.items()}
        return out

    def __repr__(self):
        return f"EquivariantFamily({len(self._table)} components over order-{self.group.n} group)"


def hecke_apply(family, n: int, pair) -> PuiseuxSeries:
    """n*T_n applied at the given commuting pair.

    ``family`` needs only `.group` and `.lookup`, so operator images can be
    fed back in without materializing them.
    """
    if n < 1:
        raise DomainError("Hecke index must be positive")
    G = family.group
    pair = check_commuting(G, CommutingPair(*pair))
    total = None
    for a, b, d in isogeny_oracle(n).triples:
        comp = CommutingPair(
            G.power(pair.g, d),
            G.mul(G.power(pair.g, -b), G.power(pair.h, a)),
        )
        term = family.lookup(comp).substitute_scaled(a, b, d)
        total = term if total is None else total + term
    return total


class _HeckeImage:
    """Lazy view of the function m*T_m f, usable as a family."""

    def __init__(self, base, m: int):
        self.group = base.group
        self._base = base
        self._m = m
        self._cache: dict[CommutingPair, PuiseuxSeries] = {}

    def lookup(self, pair) -> PuiseuxSeries:
        pair = CommutingPair(*pair)
        hit = self._cache.get(pair)
        if hit is None:
            hit = hecke_apply(self._base, self._m, pair)
            self._cache[pair] = hit
        return hit


@dataclass
class CompositionReport:
    """Outcome of checking T_k T_m f = sum over t | (k,m) of (1/t) T_{km/t^2} f(g^t, h^t)."""

    k: int
    m: int
    pair: CommutingPair
    verdict: str  # pass / fail / inconclusive
    window: Fraction | None
    first_diff: Fraction | None


def hecke_compose_check(family, k: int, m: int, pair) -> CompositionReport:
    """Exact check of the composition identity, scaled by km on both sides."""
    G = family.group
    pair = check_commuting(G, CommutingPair(*pair))
    lhs = hecke_apply(_HeckeImage(family, m), k, pair)
    rhs = None
    for t in divisors(gcd(k, m)):
        powered = CommutingPair(G.power(pair.g, t), G.power(pair.h, t))
        term = hecke_apply(family, (k * m) // (t * t), powered) * t
        rhs = term if rhs is None else rhs + term
    agreement: Agreement = lhs.agrees_with(rhs)
    if agreement.vacuous:
        raise InconclusiveError(
            f"composition check at (k, m) = ({k}, {m}) has an empty window"
        )
    verdict = "pass" if agreement.equal else "fail"
    return CompositionReport(k, m, pair, verdict, agreement.window, agreement.first_diff)


#: Small cyclotomic coefficient pool for reproducible randomized families.
def _default_pool() -> list[CycNum]:
    return [
        CycNum(0),
        CycNum(1),
        CycNum(-1),
        CycNum(2),
        CycNum(Fraction(1, 2)),
        root_of_unity(3, 1),
        root_of_unity(4, 1),
        CycNum(1) + root_of_unity(3, 2),
    ]


def random_family(
    G: GroupTable,
    seed: int,
    depth: int = 8,
    pool: list[CycNum] | None = None,
) -> EquivariantFamily:
    """Deterministic random family on every component of the group.

    Coefficients are drawn from a fixed small cyclotomic pool on the exponent
    window [-2, depth]; only exponents admissible for each component's
    translation stabilizer are populated.
    """
    from .groups import pair_canonicalize, translation_stabilizer

    rng = random.Random(seed)
    pool = pool if pool is not None else _default_pool()
    reps = sorted(
        {pair_canonicalize(G, p)[0] for p in G.commuting_pairs()}
    )
    entries = {}
    for rep in reps:
        Mg = G.element_order[rep.g]
        delta = translation_stabilizer(G, rep)
        step = Mg // gcd(delta, Mg) if delta else 1
        coeffs = {}
        for num in range(-2 * Mg, depth * Mg + 1):
            if num % step:
                continue
            coeffs[num] = rng.choice(pool)
        entries[rep] = PuiseuxSeries(Mg, coeffs, depth * Mg)
    return EquivariantFamily(G, entries)
