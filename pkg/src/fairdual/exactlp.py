"""Thin exact linear-programming layer over sympy's rational simplex.

The backend keeps every variable nonnegative, and its own bounds handling
does not let a variable actually go negative, so variables declared free
here are split into a positive and a negative part before the call and
recombined afterwards. All numbers in and out are Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import Rational
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog

from .model import FairdualError


class LPError(FairdualError):
    pass


@dataclass(frozen=True)
class LPResult:
    optimum: Fraction
    solution: tuple


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q)) if isinstance(value, Rational) else Fraction(value)


def maximize(
    objective: Sequence,
    leq: Sequence = (),
    eq: Sequence = (),
    free: Sequence = (),
) -> LPResult:
    """Maximize objective . x subject to row . x <= rhs and row . x = rhs.

    Variables are nonnegative unless their index appears in `free`.
    `leq` and `eq` are sequences of (row, rhs) pairs. Raises LPError on an
    infeasible or unbounded program.
    """
    m = len(objective)
    free_set = set(free)
    columns = []  # (variable index, sign)
    for i in range(m):
        columns.append((i, 1))
        if i in free_set:
            columns.append((i, -1))

    def expand(row):
        return [Rational(Fraction(row[i]) * sign) for i, sign in columns]

    c = [Rational(-Fraction(objective[i]) * sign) for i, sign in columns]
    # The backend miscounts dimensions when only equalities are given, so
    # always supply at least one (vacuous) inequality row.
    A = [expand(row) for row, _ in leq] or [[Rational(0)] * len(columns)]
    b = [Rational(Fraction(rhs)) for _, rhs in leq] or [Rational(0)]
    A_eq = [expand(row) for row, _ in eq] or None
    b_eq = [Rational(Fraction(rhs)) for _, rhs in eq] or None
    try:
        optimum, solution = linprog(c, A=A, b=b, A_eq=A_eq, b_eq=b_eq)
    except (InfeasibleLPError, UnboundedLPError) as exc:
        raise LPError(str(exc).strip()) from exc

    values = [Fraction(0)] * m
    for (i, sign), component in zip(columns, solution):
        values[i] += sign * _to_fraction(component)
    return LPResult(optimum=-_to_fraction(optimum), solution=tuple(values))
