"""Exact rational linear feasibility via a small phase-one simplex.

Solves: find x with A x >= b (x free), entirely in Fraction arithmetic.
Free variables are split into differences of nonnegatives, surplus and
artificial variables are added, and the artificial sum is minimized with
Bland's rule, which guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_feasibility(rows, rhs, num_vars):
    """Return a rational solution x of `rows @ x >= rhs`, or None.

    rows: list of coefficient lists (length num_vars); rhs: list of Fractions.
    """
    m = len(rows)
    if m == 0:
        return [ZERO] * num_vars
    # columns: x+ (num_vars), x- (num_vars), surplus (m), artificial (m)
    n_plus = num_vars
    n_total = 2 * num_vars + 2 * m
    tableau = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        coeffs = [Fraction(c) for c in row]
        b = Fraction(b)
        if b < 0:
            coeffs = [-c for c in coeffs]
            b = -b
            surplus = ONE  # flipped row: -Ax <= -b becomes -Ax + s = -b ... keep >= form
        else:
            surplus = -ONE
        line = [ZERO] * (n_total + 1)
        for j, c in enumerate(coeffs):
            line[j] = c
            line[n_plus + j] = -c
        line[2 * num_vars + i] = surplus
        line[2 * num_vars + m + i] = ONE
        line[-1] = b
        tableau.append(line)

    basis = [2 * num_vars + m + i for i in range(m)]
    # objective: minimize sum of artificials; express in terms of non-basics
    obj = [ZERO] * (n_total + 1)
    for line in tableau:
        for j in range(n_total + 1):
            obj[j] += line[j]
    art_start = 2 * num_vars + m

    while True:
        pivot_col = None
        for j in range(n_total):
            if j >= art_start:
                continue
            if obj[j] > 0:
                pivot_col = j  # Bland: smallest improving index
                break
        if pivot_col is None:
            break
        pivot_row = None
        best_ratio = None
        for i, line in enumerate(tableau):
            if line[pivot_col] > 0:
                ratio = line[-1] / line[pivot_col]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[pivot_row])
                ):
                    best_ratio = ratio
                    pivot_row = i
        if pivot_row is None:
            return None  # unbounded phase-one cannot happen; defensive
        _pivot(tableau, obj, basis, pivot_row, pivot_col)

    if obj[-1] != 0:
        return None  # artificials cannot all vanish: infeasible

    values = [ZERO] * n_total
    for i, var in enumerate(basis):
        values[var] = tableau[i][-1]
    if any(values[art_start + i] != 0 for i in range(m)):
        return None
    return [values[j] - values[n_plus + j] for j in range(num_vars)]


def _pivot(tableau, obj, basis, row, col):
    line = tableau[row]
    factor = line[col]
    tableau[row] = [v / factor for v in line]
    line = tableau[row]
    for i, other in enumerate(tableau):
        if i == row or other[col] == 0:
            continue
        scale = other[col]
        tableau[i] = [a - scale * b for a, b in zip(other, line)]
    if obj[col] != 0:
        scale = obj[col]
        for j in range(len(obj)):
            obj[j] -= scale * line[j]
    basis[row] = col
