"""Text file formats: series, groups, families, character data, polynomials.

All emitters iterate in sorted order so identical inputs give byte-identical
files; all parsers raise ParseError with line diagnostics.
"""

from __future__ import annotations

import os
from fractions import Fraction

from .cyclotomic import CycNum, euler_phi, lcm
from .denominator import ModuleCharacterData
from .errors import DomainError, ParseError
from .groups import CommutingPair, GroupTable
from .hecke import EquivariantFamily
from .monic import BivariatePolynomial
from .qseries import PuiseuxSeries
from .replication import Polynomial


# -- cyclotomic numbers -------------------------------------------------------


def cycnum_to_text(c: CycNum) -> str:
    parts = " ".join(f"{x.numerator}/{x.denominator}" for x in c.coeffs)
    return f"L={c.conductor} {parts}"


def cycnum_from_tokens(tokens: list[str], path: str, line: int) -> CycNum:
    if not tokens or not tokens[0].startswith("L="):
        raise ParseError(path, line, "cyclotomic number must start with L=<conductor>")
    try:
        L = int(tokens[0][2:])
    except ValueError:
        raise ParseError(path, line, f"bad conductor {tokens[0]!r}") from None
    if L < 1:
        raise ParseError(path, line, f"conductor must be positive, got {L}")
    vals = []
    for tok in tokens[1:]:
        try:
            vals.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise ParseError(path, line, f"bad rational {tok!r}") from None
    if len(vals) != euler_phi(L):
        raise ParseError(
            path, line,
            f"expected {euler_phi(L)} coefficients for conductor {L}, got {len(vals)}",
        )
    return CycNum._make(L, list(vals))


# -- q-series -----------------------------------------------------------------


def write_series(f: PuiseuxSeries, path: str) -> None:
    if f.prec is None:
        raise DomainError("series files carry a finite window; truncate first")
    conductor = 1
    for c in f.coeffs.values():
        conductor = lcm(conductor, c.conductor)
    lines = [f"M {f.den}", f"L {conductor}", f"K {f.prec}"]
    for n in sorted(f.coeffs):
        lines.append(f"{n} {cycnum_to_text(f.coeffs[n])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_series(path: str) -> PuiseuxSeries:
    with open(path) as fh:
        raw = fh.read().splitlines()
    rows = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip()]
    if len(rows) < 3:
        raise ParseError(path, 1, "series file needs M, L and K header lines")
    header = {}
    for (lineno, text), key in zip(rows[:3], ("M", "L", "K")):
        parts = text.split()
        if len(parts) != 2 or parts[0] != key:
            raise ParseError(path, lineno, f"expected '{key} <integer>', got {text!r}")
        try:
            header[key] = int(parts[1])
        except ValueError:
            raise ParseError(path, lineno, f"bad integer {parts[1]!r}") from None
    coeffs = {}
    last = None
    for lineno, text in rows[3:]:
        parts = text.split()
        try:
            n = int(parts[0])
        except ValueError:
            raise ParseError(path, lineno, f"bad exponent numerator {parts[0]!r}") from None
        if last is not None and n <= last:
            raise ParseError(path, lineno, "exponent numerators must be strictly increasing")
        last = n
        if n > header["K"]:
            raise ParseError(path, lineno, f"exponent {n} exceeds the window K={header['K']}")
        coeffs[n] = cycnum_from_tokens(parts[1:], path, lineno)
    return PuiseuxSeries(header["M"], coeffs, header["K"])


# -- groups -------------------------------------------------------------------


def write_group(G: GroupTable, path: str) -> None:
    lines = [f"order {G.n}"]
    for row in G.table:
        lines.append(" ".join(str(x) for x in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_cycles(text: str, path: str, line: int) -> list[list[int]]:
    cycles = []
    depth, cur = 0, []
    token = ""

    def flush_token():
        nonlocal token
        if token:
            try:
                cur.append(int(token))
            except ValueError:
                raise ParseError(path, line, f"bad point {token!r}") from None
            token = ""

    for ch in text:
        if ch == "(":
            if depth:
                raise ParseError(path, line, "nested parenthesis in cycle notation")
            depth, cur = 1, []
        elif ch == ")":
            flush_token()
            if not depth:
                raise ParseError(path, line, "unbalanced ')' in cycle notation")
            if cur:
                cycles.append(cur)
            depth = 0
        elif ch in " \t,":
            flush_token()
        elif ch.isdigit():
            token += ch
        else:
            raise ParseError(path, line, f"unexpected character {ch!r} in cycle notation")
    if depth:
        raise ParseError(path, line, "unbalanced '(' in cycle notation")
    flush_token()
    return cycles


def read_group(path: str) -> GroupTable:
    with open(path) as fh:
        raw = fh.read().splitlines()
    rows = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip()]
    if not rows:
        raise ParseError(path, 1, "empty group file")
    first = rows[0][1].split()
    if first[0] == "order":
        try:
            n = int(first[1])
        except (IndexError, ValueError):
            raise ParseError(path, rows[0][0], "expected 'order <integer>'") from None
        if len(rows) != n + 1:
            raise ParseError(
                path, rows[-1][0], f"expected {n} table rows, found {len(rows) - 1}"
            )
        table = []
        for lineno, text in rows[1:]:
            try:
                row = [int(x) for x in text.split()]
            except ValueError:
                raise ParseError(path, lineno, "table rows must be integers") from None
            if len(row) != n:
                raise ParseError(path, lineno, f"expected {n} entries per row")
            table.append(row)
        try:
            return GroupTable(table)
        except DomainError as exc:
            raise ParseError(path, rows[0][0], str(exc)) from None
    if first[0] == "perm":
        perms = []
        points = 0
        parsed = []
        for lineno, text in rows:
            parts = text.split(None, 1)
            if parts[0] != "perm":
                raise ParseError(path, lineno, f"expected 'perm <cycles>', got {text!r}")
            cycles = _parse_cycles(parts[1] if len(parts) > 1 else "", path, lineno)
            parsed.append(cycles)
            for cyc in cycles:
                points = max(points, max(cyc) + 1)
        for cycles in parsed:
            perm = list(range(points))
            for cyc in cycles:
                for i, x in enumerate(cyc):
                    perm[x] = cyc[(i + 1) % len(cyc)]
            perms.append(tuple(perm))
        try:
            return GroupTable.from_permutations(perms, points)
        except DomainError as exc:
            raise ParseError(path, rows[0][0], str(exc)) from None
    raise ParseError(path, rows[0][0], "group files start with 'order' or 'perm'")


# -- equivariant families -------------------------------------------------------


def write_family(family: EquivariantFamily, dirpath: str) -> None:
    os.makedirs(dirpath, exist_ok=True)
    for pair in family.components():
        write_series(
            family.lookup(pair), os.path.join(dirpath, f"pair_{pair.g}_{pair.h}.qs")
        )


def read_family(G: GroupTable, dirpath: str) -> EquivariantFamily:
    entries = {}
    if not os.path.isdir(dirpath):
        raise ParseError(dirpath, 0, "family path is not a directory")
    for name in sorted(os.listdir(dirpath)):
        if not (name.startswith("pair_") and name.endswith(".qs")):
            continue
        stem = name[len("pair_"):-len(".qs")]
        try:
            g, h = (int(x) for x in stem.split("_"))
        except ValueError:
            raise ParseError(os.path.join(dirpath, name), 0,
                             "family file names look like pair_<g>_<h>.qs") from None
        entries[CommutingPair(g, h)] = read_series(os.path.join(dirpath, name))
    if not entries:
        raise ParseError(dirpath, 0, "no pair_<g>_<h>.qs files found")
    return EquivariantFamily(G, entries)


# -- character data -------------------------------------------------------------


def write_character_data(data: ModuleCharacterData, path: str) -> None:
    lines = [
        f"N {data.N}",
        f"orders h={data.h_order}",
        f"kbound {data.k_bound}",
        f"pbound {data.p_bound}",
    ]
    for key in sorted(data.traces):
        i, r, knum, e = key
        lines.append(f"{i} {r} {knum} {e} {cycnum_to_text(data.traces[key])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_character_data(path: str) -> ModuleCharacterData:
    with open(path) as fh:
        raw = fh.read().splitlines()
    rows = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip()]
    if len(rows) < 4:
        raise ParseError(path, 1, "character data needs N, orders, kbound, pbound headers")
    try:
        header_n = rows[0][1].split()
        assert header_n[0] == "N"
        N = int(header_n[1])
        header_h = rows[1][1].split()
        assert header_h[0] == "orders" and header_h[1].startswith("h=")
        h_order = int(header_h[1][2:])
        header_k = rows[2][1].split()
        assert header_k[0] == "kbound"
        k_bound = int(header_k[1])
        header_p = rows[3][1].split()
        assert header_p[0] == "pbound"
        p_bound = int(header_p[1])
    except (AssertionError, IndexError, ValueError):
        raise ParseError(path, rows[0][0], "malformed character data header") from None
    traces = {}
    for lineno, text in rows[4:]:
        parts = text.split()
        if len(parts) < 5:
            raise ParseError(path, lineno, "trace lines are 'i r k e <cycnum>'")
        try:
            i, r, knum, e = (int(x) for x in parts[:4])
        except ValueError:
            raise ParseError(path, lineno, "trace indices must be integers") from None
        traces[(i, r, knum, e)] = cycnum_from_tokens(parts[4:], path, lineno)
    try:
        return ModuleCharacterData(N, h_order, k_bound, p_bound, traces)
    except DomainError as exc:
        raise ParseError(path, rows[0][0], str(exc)) from None


# -- polynomials ----------------------------------------------------------------


def write_polynomial(poly: Polynomial, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(poly.pretty() + "\n")


def write_bivariate(F: BivariatePolynomial, path: str) -> None:
    lines = []
    for (i, j) in sorted(F.coeffs):
        lines.append(f"{i} {j} {cycnum_to_text(F.coeffs[(i, j)])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_bivariate(path: str) -> BivariatePolynomial:
    with open(path) as fh:
        raw = fh.read().splitlines()
    coeffs = {}
    for lineno, text in ((i + 1, ln.strip()) for i, ln in enumerate(raw)):
        if not text:
            continue
        parts = text.split()
        if len(parts) < 3:
            raise ParseError(path, lineno, "bivariate lines are 'i j <cycnum>'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(path, lineno, "bivariate exponents must be integers") from None
        coeffs[(i, j)] = cycnum_from_tokens(parts[2:], path, lineno)
    return BivariatePolynomial(coeffs)
