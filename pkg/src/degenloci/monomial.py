"""Integral closure of monomial ideals via the Newton polyhedron.

A monomial ideal is a finite antichain of exponent vectors; a monomial lies
in the integral closure exactly when its exponent vector lies in the convex
hull of the generators plus the positive orthant.  Membership is decided by
exact rational linear programming (a tiny phase-1 simplex over Fraction);
closure generators are enumerated inside the componentwise bounding box of
the generators, which the hull-plus-cone geometry justifies.

The Reid--Roberts--Vitulli test (three variables) reduces normality of the
Rees algebra to integral closedness of the ideal and its square.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedDimensionError


@dataclass(frozen=True)
class MonomialIdeal:
    """An antichain of exponent vectors in N^n (minimal generators)."""

    n: int
    generators: tuple

    def __init__(self, generators):
        gens = sorted({tuple(int(e) for e in g) for g in generators})
        if not gens:
            raise ValueError("a monomial ideal needs at least one generator")
        n = len(gens[0])
        if any(len(g) != n for g in gens) or any(e < 0 for g in gens for e in g):
            raise ValueError("generators must be equal-length non-negative vectors")
        minimal = [g for g in gens if not any(h != g and _leq(h, g) for h in gens)]
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", tuple(minimal))

    def contains_monomial(self, v) -> bool:
        """Plain ideal membership: some generator divides v."""
        v = tuple(v)
        return any(_leq(g, v) for g in self.generators)

    def __le__(self, other: "MonomialIdeal") -> bool:
        return all(other.contains_monomial(g) for g in self.generators)

    def to_json(self):
        return {"generators": [list(g) for g in self.generators]}


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


# -- exact phase-1 simplex ----------------------------------------------------


def _lp_feasible(rows, rhs):
    """Feasibility of rows . x = rhs, x >= 0, by a phase-1 simplex with Bland's rule."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    tab = []
    for i in range(m):
        row = [Fraction(v) for v in rows[i]]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-v for v in row]
            b = -b
        tab.append(row + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b])
    ncols = n + m
    basis = list(range(n, ncols))
    # phase-1 reduced costs: objective coefficient 1 on artificials, then
    # subtract the rows so the basic artificials start at reduced cost 0
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        cost = [c - v for c, v in zip(cost, tab[i])]

    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (tab[i][-1] / tab[i][enter], basis[i], i)
            for i in range(m)
            if tab[i][enter] > 0
        ]
        if not ratios:
            break  # unbounded phase-1 cannot happen, but stay safe
        _, _, leave = min(ratios)
        pivot = tab[leave][enter]
        tab[leave] = [v / pivot for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tab[leave])]
        basis[leave] = enter
    objective = -cost[-1]
    return objective == 0


def in_newton_polyhedron(v, ideal: MonomialIdeal) -> bool:
    """v in conv(generators) + R_{>=0}^n, by exact LP feasibility.

    System: lambda >= 0, sum lambda = 1, sum lambda g + s = v with slack
    s >= 0.
    """
    v = tuple(int(e) for e in v)
    if ideal.contains_monomial(v):
        return True
    gens = ideal.generators
    k, n = len(gens), ideal.n
    rows = [[Fraction(1)] * k + [Fraction(0)] * n]
    rhs = [Fraction(1)]
    for i in range(n):
        row = [Fraction(g[i]) for g in gens]
        row += [Fraction(1) if j == i else Fraction(0) for j in range(n)]
        rows.append(row)
        rhs.append(Fraction(v[i]))
    return _lp_feasible(rows, rhs)


def integral_closure(ideal: MonomialIdeal) -> MonomialIdeal:
    """Minimal generators of the lattice points of the Newton polyhedron.

    Candidates range over the componentwise bounding box of the generators:
    if some coordinate of a lattice point exceeds every generator, dropping
    it by one stays in the polyhedron, so no minimal generator escapes the
    box (asserted below).
    """
    box = [max(g[i] for g in ideal.generators) for i in range(ideal.n)]
    members = [
        v
        for v in itertools.product(*(range(b + 1) for b in box))
        if in_newton_polyhedron(v, ideal)
    ]
    closed = MonomialIdeal(members)
    assert all(
        all(e <= b for e, b in zip(g, box)) for g in closed.generators
    ), "closure generator escaped the bounding box"
    return closed


def power(ideal: MonomialIdeal, k: int) -> MonomialIdeal:
    """Minimal generators of the k-th power (k-fold sums, antichain-reduced)."""
    if k < 1:
        raise ValueError("power wants k >= 1")
    sums = set()
    for combo in itertools.combinations_with_replacement(ideal.generators, k):
        sums.add(tuple(sum(col) for col in zip(*combo)))
    return MonomialIdeal(sums)


def is_integrally_closed(ideal: MonomialIdeal) -> bool:
    return integral_closure(ideal).generators == ideal.generators


def rrv_normal(ideal: MonomialIdeal) -> bool:
    """Normality of the Rees algebra in three variables.

    With three independent variables it is enough that the ideal and its
    square are integrally closed (Reid--Roberts--Vitulli); then all powers
    are.
    """
    if ideal.n != 3:
        raise UnsupportedDimensionError("the Reid-Roberts-Vitulli test needs exactly 3 variables")
    return is_integrally_closed(ideal) and is_integrally_closed(power(ideal, 2))


def closure_member_by_powers(v, ideal: MonomialIdeal, kmax: int = 6) -> bool:
    """Independent oracle: v is integral over the ideal iff k*v lies in I^k for some k."""
    v = tuple(v)
    for k in range(1, kmax + 1):
        kv = tuple(k * e for e in v)
        if power(ideal, k).contains_monomial(kv):
            return True
    return False
