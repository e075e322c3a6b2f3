"""Exact primal simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The all-slack basis is feasible because ``b >= 0``, so no phase one is needed.
Pivoting uses Bland's rule (smallest eligible index for both the entering and
the leaving variable), which rules out cycling. Arithmetic is
fraction-free: the tableau holds integers ``T`` together with a common
positive denominator ``D`` and each pivot performs the Bareiss update
``T'[i][j] = (T[i][j] * T[r][s] - T[i][s] * T[r][j]) / D``, whose division is
always exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence


class UnboundedLP(Exception):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    basis: tuple[int, ...]  # basic column per row; columns >= n are slacks
    tight: tuple[int, ...]  # constraint rows whose slack is nonbasic
    pivots: int


def _integer_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int, int]:
    rhs = Fraction(rhs)
    den = rhs.denominator
    if all(type(v) is int for v in coeffs):
        return [v * den for v in coeffs], rhs.numerator, den
    for v in coeffs:
        den = lcm(den, Fraction(v).denominator)
    row = [int(Fraction(v) * den) for v in coeffs]
    return row, int(rhs * den), den


def maximize(c: Sequence, rows: Sequence[Sequence], rhs: Sequence) -> LPResult:
    n = len(c)
    m = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("constraint rows must have one coefficient per variable")
    if len(rhs) != m:
        raise ValueError("one right-hand side per constraint row")
    if any(Fraction(b) < 0 for b in rhs):
        raise ValueError("right-hand sides must be nonnegative")

    width = n + m + 1
    # Row 0 is the objective: z - c.x = 0, stored as [-c | 0 | 0].
    cden = 1
    for v in c:
        cden = lcm(cden, Fraction(v).denominator)
    T = [[-int(Fraction(v) * cden) for v in c] + [0] * m + [0]]
    for i, (coeffs, b) in enumerate(zip(rows, rhs)):
        ints, ib, _ = _integer_row(coeffs, b)
        # Scaling a row scales its slack column too; keep the slack coefficient
        # at the row scale so the integer tableau stays exact.
        slack = [0] * m
        slack[i] = 1
        # A row scaled by k has slack variable k*s; recorded slack values are
        # never reported, so only the basis structure matters.
        T.append(ints + slack + [ib])
    basis = [n + i for i in range(m)]
    D = 1
    pivots = 0

    while True:
        obj = T[0]
        enter = -1
        for j in range(n + m):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_num = best_den = 0
        for i in range(1, m + 1):
            a = T[i][enter]
            if a > 0:
                b = T[i][-1]
                if leave < 0:
                    leave, best_num, best_den = i, b, a
                    continue
                lhs = b * best_den
                rhs_ = best_num * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i - 1] < basis[leave - 1]):
                    leave, best_num, best_den = i, b, a
        if leave < 0:
            raise UnboundedLP("objective is unbounded")
        prow = T[leave]
        p = prow[enter]
        for i in range(m + 1):
            if i == leave:
                continue
            row = T[i]
            f = row[enter]
            if f == 0:
                if p != D:
                    T[i] = [(v * p) // D for v in row]
                continue
            T[i] = [(row[j] * p - f * prow[j]) // D for j in range(width)]
        D = p
        basis[leave - 1] = enter
        pivots += 1

    x = [Fraction(0)] * n
    for i, col in enumerate(basis):
        if col < n:
            x[col] = Fraction(T[i + 1][-1], D)
    value = Fraction(T[0][-1], D * cden)
    in_basis = set(basis)
    tight = tuple(i for i in range(m) if (n + i) not in in_basis)
    return LPResult(value, tuple(x), tuple(basis), tight, pivots)
