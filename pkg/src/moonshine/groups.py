"""Finite groups as multiplication tables, commuting pairs, and the right
SL2(Z) action (g,h) * [[a,b],[c,d]] = (g^a h^c, g^b h^d).

Everything is table-driven and brute-force: the intended scale is groups of a
few thousand elements at most, and lookups must stay trivial inside the Hecke
inner loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .errors import DomainError


class CommutingPair(NamedTuple):
    g: int
    h: int


class IntMatrix2(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


SL2_IDENTITY = IntMatrix2(1, 0, 0, 1)
SL2_S = IntMatrix2(0, -1, 1, 0)
SL2_T = IntMatrix2(1, 1, 0, 1)


class GroupTable:
    """A finite group on elements 0..n-1 with a full multiplication table."""

    __slots__ = ("n", "table", "identity", "inverse", "element_order")

    def __init__(self, table, validate: bool = True):
        n = len(table)
        table = [list(row) for row in table]
        if validate:
            self._validate(table, n)
        self.n = n
        self.table = table
        identity = next(
            e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))
        )
        self.identity = identity
        inverse = [-1] * n
        for g in range(n):
            inverse[g] = next(h for h in range(n) if table[g][h] == identity)
        self.inverse = inverse
        orders = []
        for g in range(n):
            k, x = 1, g
            while x != identity:
                x = table[x][g]
                k += 1
            orders.append(k)
        self.element_order = orders

    @staticmethod
    def _validate(table, n):
        for i, row in enumerate(table):
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise DomainError(f"row {i} of the multiplication table is malformed")
        if not any(
            all(table[e][x] == x == table[x][e] for x in range(n)) for e in range(n)
        ):
            raise DomainError("table has no identity element")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise DomainError(
                            f"associativity fails at ({a}, {b}, {c})"
                        )
        for a in range(n):
            if len(set(table[a])) != n:
                raise DomainError(f"row {a} is not a permutation; inverses missing")

    # -- constructors ------------------------------------------------------

    @classmethod
    def cyclic(cls, N: int) -> "GroupTable":
        return cls([[(i + j) % N for j in range(N)] for i in range(N)], validate=False)

    @classmethod
    def from_permutations(cls, generators: list[tuple[int, ...]], points: int) -> "GroupTable":
        """Close a set of permutations (tuples of images) under composition."""
        ident = tuple(range(points))
        gens = [tuple(p) for p in generators]
        for p in gens:
            if sorted(p) != list(range(points)):
                raise DomainError(f"{p} is not a permutation of {points} points")
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for p in gens:
                    y = tuple(x[p[i]] for i in range(points))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        elems = sorted(seen)
        index = {e: i for i, e in enumerate(elems)}
        table = [
            [index[tuple(a[b[i]] for i in range(points))] for b in elems]
            for a in elems
        ]
        return cls(table, validate=False)

    # -- queries -------------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse[g], -k
        k %= self.element_order[g]
        out = self.identity
        for _ in range(k):
            out = self.table[out][g]
        return out

    def conjugate(self, t: int, g: int) -> int:
        """t g t^-1."""
        return self.table[self.table[t][g]][self.inverse[t]]

    def commute(self, g: int, h: int) -> bool:
        return self.table[g][h] == self.table[h][g]

    def commuting_pairs(self):
        for g in range(self.n):
            for h in range(self.n):
                if self.commute(g, h):
                    yield CommutingPair(g, h)

    def __repr__(self):
        return f"GroupTable(order={self.n})"


def check_commuting(G: GroupTable, pair: CommutingPair) -> CommutingPair:
    pair = CommutingPair(*pair)
    if not (0 <= pair.g < G.n and 0 <= pair.h < G.n):
        raise DomainError(f"pair {pair} out of range for a group of order {G.n}")
    if not G.commute(pair.g, pair.h):
        raise DomainError(f"elements {pair} do not commute")
    return pair


def sl2_act(G: GroupTable, pair: CommutingPair, m: IntMatrix2) -> CommutingPair:
    """Right action (g,h) -> (g^a h^c, g^b h^d); m must be unimodular."""
    m = IntMatrix2(*m)
    if m.det() != 1:
        raise DomainError(f"matrix {m} has determinant {m.det()}, not 1")
    pair = check_commuting(G, pair)
    g1 = G.mul(G.power(pair.g, m.a), G.power(pair.h, m.c))
    h1 = G.mul(G.power(pair.g, m.b), G.power(pair.h, m.d))
    out = CommutingPair(g1, h1)
    if not G.commute(g1, h1):  # impossible for genuine commuting input
        raise DomainError("action broke commutativity; input was inconsistent")
    return out


def _orbit_data(G: GroupTable, pair: CommutingPair, translations: bool):
    """BFS over conjugation (and optionally the +-Z moves), tracking for each
    reached pair an offset o with f(pair) (tau) = f(start)(tau + o), plus the
    gcd of offset discrepancies (the translation stabilizer of the component).
    """
    Mg = G.element_order[pair.g]
    offsets = {pair: 0}
    stab = 0
    queue = [pair]
    while queue:
        nxt = []
        for s in queue:
            o = offsets[s]
            moves = []
            for t in range(G.n):
                moves.append((CommutingPair(G.conjugate(t, s.g), G.conjugate(t, s.h)), o))
            if translations:
                moves.append((CommutingPair(s.g, G.mul(s.g, s.h)), (o + 1) % Mg))
                moves.append(
                    (CommutingPair(G.inverse[s.g], G.inverse[s.h]), o)
                )
            for s2, o2 in moves:
                if s2 in offsets:
                    d = (offsets[s2] - o2) % Mg
                    if d:
                        stab = gcd(stab, d)
                else:
                    offsets[s2] = o2
                    nxt.append(s2)
        queue = nxt
    return offsets, stab


def pair_canonicalize(
    G: GroupTable, pair: CommutingPair, mode: str = "conjugation-and-translation"
) -> tuple[CommutingPair, int]:
    """Deterministic orbit representative plus translation offset.

    The representative is the lexicographically least pair in the orbit. The
    returned k satisfies f(pair)(tau) = f(canonical)(tau + k), i.e. the queried
    pair's coefficients are the canonical ones twisted by e(n*k).
    """
    pair = check_commuting(G, pair)
    if mode not in ("conjugation-only", "conjugation-and-translation"):
        raise DomainError(f"unknown canonicalization mode {mode!r}")
    translations = mode == "conjugation-and-translation"
    offsets, _ = _orbit_data(G, pair, translations)
    canonical = min(offsets)
    Mg = G.element_order[pair.g]
    return canonical, (-offsets[canonical]) % Mg


def translation_stabilizer(G: GroupTable, pair: CommutingPair) -> int:
    """gcd of translation offsets fixing the component (0 = unconstrained).

    A nonzero value delta constrains any equivariant function on the component
    to exponents e with e*delta integral.
    """
    pair = check_commuting(G, pair)
    _, stab = _orbit_data(G, pair, translations=True)
    return stab


@dataclass
class ComponentDecomposition:
    """Conjugation classes of commuting pairs and their SL2(Z) orbits."""

    representatives: list[CommutingPair]
    class_sizes: list[int]
    orbits: list[list[int]]  # indices into representatives

    @property
    def count(self) -> int:
        return len(self.representatives)


def enumerate_components(G: GroupTable) -> ComponentDecomposition:
    """All simultaneous-conjugacy classes of commuting pairs, partitioned into
    SL2(Z) orbits by closing under the S and T generator actions."""
    reps: list[CommutingPair] = []
    sizes: list[int] = []
    seen: set[CommutingPair] = set()
    for pair in G.commuting_pairs():
        if pair in seen:
            continue
        orbit = {
            CommutingPair(G.conjugate(t, pair.g), G.conjugate(t, pair.h))
            for t in range(G.n)
        }
        seen |= orbit
        reps.append(min(orbit))
        sizes.append(len(orbit))
    order = sorted(range(len(reps)), key=lambda i: reps[i])
    reps = [reps[i] for i in order]
    sizes = [sizes[i] for i in order]
    index = {rep: i for i, rep in enumerate(reps)}

    def class_of(pair: CommutingPair) -> int:
        canon = min(
            CommutingPair(G.conjugate(t, pair.g), G.conjugate(t, pair.h))
            for t in range(G.n)
        )
        return index[canon]

    orbits: list[list[int]] = []
    assigned = [False] * len(reps)
    for i in range(len(reps)):
        if assigned[i]:
            continue
        component = []
        stack = [i]
        assigned[i] = True
        while stack:
            j = stack.pop()
            component.append(j)
            for mat in (SL2_S, SL2_T):
                k = class_of(sl2_act(G, reps[j], mat))
                if not assigned[k]:
                    assigned[k] = True
                    stack.append(k)
        orbits.append(sorted(component))
    return ComponentDecomposition(reps, sizes, orbits)
