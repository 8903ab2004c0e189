"""Small exact linear algebra: GF(2) bitset elimination and span membership
modulo a composite integer (Howell-style pivoting with annihilator rows)."""

from __future__ import annotations

import math


def gf2_basis(rows: list[int]) -> list[int]:
    """Row-reduce int bitsets over GF(2); returns a basis keyed by lowest set bit."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
            basis.sort(key=lambda r: r & -r)
    return basis


def gf2_reduce(vec: int, basis: list[int]) -> int:
    for b in basis:
        low = b & -b
        if vec & low:
            vec ^= b
    return vec


def gf2_in_span(vec: int, basis: list[int]) -> bool:
    return gf2_reduce(vec, basis) == 0


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


class ModSpan:
    """Span membership for integer row vectors over Z_m (m may be composite).

    Pivot rows are kept in echelon form with pivot entries dividing m, scaled
    by units only, and every installed pivot also feeds its annihilator
    shadow (m/g times the row) back in.  Both points are what make reduction
    decide membership over Z_m rather than just over a field.
    """

    def __init__(self, ncols: int, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        self.ncols = ncols
        self.m = modulus
        self.pivots: dict[int, list[int]] = {}

    def _unit_for(self, v: int, g: int) -> int:
        # unit s mod m with s*v = g (mod m); exists since gcd(v/g, m/g) = 1
        m = self.m
        mg = m // g
        s = pow((v // g) % mg, -1, mg)
        while math.gcd(s, m) != 1:
            s += mg
        return s

    def add(self, vec: list[int]) -> None:
        m = self.m
        stack = [[v % m for v in vec]]
        while stack:
            work = stack.pop()
            col = 0
            while col < self.ncols:
                v = work[col]
                if v == 0:
                    col += 1
                    continue
                row = self.pivots.get(col)
                if row is None:
                    g = math.gcd(v, m)
                    s = self._unit_for(v, g)
                    pivot = [(s * x) % m for x in work]
                    self.pivots[col] = pivot
                    stack.append([(m // g) * x % m for x in pivot])
                    break
                a = row[col]
                if v % a == 0:
                    q = v // a
                    work = [(x - q * y) % m for x, y in zip(work, row)]
                    continue
                # column collision with a smaller gcd: unimodular 2x2 merge
                g, s, t = _extgcd(a, v)
                merged = [(s * x + t * y) % m for x, y in zip(row, work)]
                leftover = [((a // g) * y - (v // g) * x) % m for x, y in zip(row, work)]
                self.pivots[col] = merged
                stack.append([(m // g) * x % m for x in merged])
                work = leftover

    def reduce(self, vec: list[int]) -> list[int]:
        m = self.m
        work = [v % m for v in vec]
        for col in sorted(self.pivots):
            v = work[col]
            if v == 0:
                continue
            row = self.pivots[col]
            q = v // row[col]
            if q:
                work = [(x - q * y) % m for x, y in zip(work, row)]
        return work

    def contains(self, vec: list[int]) -> bool:
        return not any(self.reduce(vec))


def scaled_span(rows: list[tuple[int, ...]], moduli: tuple[int, ...]) -> ModSpan:
    """ModSpan over lcm(moduli) with coordinate i embedded scaled by lcm/m_i."""
    lcm = math.lcm(*moduli)
    span = ModSpan(len(moduli), lcm)
    scale = [lcm // m for m in moduli]
    for row in rows:
        span.add([v * s for v, s in zip(row, scale)])
    return span


def scaled_contains(span: ModSpan, vec: tuple[int, ...], moduli: tuple[int, ...]) -> bool:
    scale = [span.m // m for m in moduli]
    return span.contains([v * s for v, s in zip(vec, scale)])
