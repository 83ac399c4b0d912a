"""Buchberger engine: reduced bases, normal forms, elimination, dimension.

Desk-scale only (a handful of variables, modest degrees).  The S-pair queue
uses the normal strategy -- minimal lcm total degree, ties broken by the
lexicographic exponent tuple of the lcm -- so runs are reproducible.  A step
budget guards against non-termination bugs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, RingMismatchError
from .poly import Poly, Ring

DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class MonomialOrder:
    """A total order on monomials refining divisibility.

    kind is one of "degrevlex", "lex", "block"; block orders eliminate the
    first ``block`` ring variables.
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "block" and self.block < 1:
            raise ValueError("block order needs a positive elimination block")

    def key(self, exps: tuple):
        if self.kind == "lex":
            return exps
        if self.kind == "degrevlex":
            return _drl_key(exps)
        head, tail = exps[: self.block], exps[self.block:]
        return (_drl_key(head), _drl_key(tail))


def _drl_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def _leading(f: Poly, order: MonomialOrder):
    return max(f.terms.items(), key=lambda item: order.key(item[0]))


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _quotient(e2, e1):
    return tuple(b - a for a, b in zip(e1, e2))


def _lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _mul_mono(f: Poly, exps, coeff):
    return Poly(f.ring, {tuple(a + b for a, b in zip(e, exps)): c * coeff for e, c in f.terms.items()})


class _StepCounter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget):
        self.steps = 0
        self.budget = budget

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetError(f"reduction budget {self.budget} exhausted")


def _reduce_full(f: Poly, basis, order: MonomialOrder, counter: _StepCounter) -> Poly:
    """Remainder of multivariate division of f by the list ``basis``."""
    remainder = Poly.zero(f.ring)
    work = f
    leads = [(_leading(g, order), g) for g in basis]
    while not work.is_zero():
        lexp, lcoeff = _leading(work, order)
        hit = None
        for (gexp, gcoeff), g in leads:
            if _divides(gexp, lexp):
                hit = (gexp, gcoeff, g)
                break
        counter.tick()
        if hit is None:
            move = Poly(work.ring, {lexp: lcoeff})
            remainder = remainder + move
            work = work - move
        else:
            gexp, gcoeff, g = hit
            work = work - _mul_mono(g, _quotient(lexp, gexp), lcoeff / gcoeff)
    return remainder


def _spoly(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    (fe, fc) = _leading(f, order)
    (ge, gc) = _leading(g, order)
    lcm = _lcm(fe, ge)
    return _mul_mono(f, _quotient(lcm, fe), Fraction(1) / fc) - _mul_mono(
        g, _quotient(lcm, ge), Fraction(1) / gc
    )


def _buchberger(gens, order: MonomialOrder, budget: int):
    counter = _StepCounter(budget)
    basis = [g for g in gens if not g.is_zero()]
    if not basis:
        return []
    pairs = {(i, j) for i, j in itertools.combinations(range(len(basis)), 2)}

    def pair_key(pair):
        i, j = pair
        lcm = _lcm(_leading(basis[i], order)[0], _leading(basis[j], order)[0])
        return (sum(lcm), lcm)

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        fi, fj = basis[i], basis[j]
        ei, ej = _leading(fi, order)[0], _leading(fj, order)[0]
        if _lcm(ei, ej) == tuple(a + b for a, b in zip(ei, ej)):
            continue  # product criterion: coprime leading monomials
        s = _reduce_full(_spoly(fi, fj, order), basis, order, counter)
        if not s.is_zero():
            basis.append(s)
            k = len(basis) - 1
            pairs.update((i2, k) for i2 in range(k))
    return _reduce_basis(basis, order, counter)


def _reduce_basis(basis, order: MonomialOrder, counter: _StepCounter):
    # minimalize: scan by increasing leading term, dropping anything whose
    # leading term an already-kept generator divides
    minimal = []
    for g in sorted(basis, key=lambda g: order.key(_leading(g, order)[0])):
        lg = _leading(g, order)[0]
        if any(_divides(_leading(h, order)[0], lg) for h in minimal):
            continue
        minimal.append(g)
    # tail-reduce and make monic
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = _reduce_full(g, others, order, counter) if others else g
        if r.is_zero():
            continue
        lc = _leading(r, order)[1]
        reduced.append(r.scale(Fraction(1) / lc))
    reduced.sort(key=lambda g: order.key(_leading(g, order)[0]), reverse=True)
    return reduced


class Ideal:
    """A finite generator list with a cached reduced Groebner basis.

    The cache is write-once: the basis is computed on first demand and
    shared afterwards.
    """

    __slots__ = ("ring", "generators", "order", "budget", "_basis")

    def __init__(self, ring: Ring, generators, order: MonomialOrder = DEGREVLEX,
                 budget: int = DEFAULT_BUDGET):
        gens = []
        for g in generators:
            if not isinstance(g, Poly):
                raise TypeError("generators must be Poly values")
            if g.ring != ring:
                raise RingMismatchError("generator outside the ideal's ring")
            gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self.order = order
        self.budget = budget
        self._basis = None

    def basis(self):
        if self._basis is None:
            self._basis = tuple(_buchberger(list(self.generators), self.order, self.budget))
        return self._basis

    @property
    def cached_basis(self):
        return self._basis

    def with_order(self, order: MonomialOrder) -> "Ideal":
        if order == self.order:
            return self
        return Ideal(self.ring, self.generators, order, self.budget)

    def is_unit(self) -> bool:
        b = self.basis()
        return len(b) == 1 and b[0].is_constant()

    def is_zero(self) -> bool:
        return not self.basis()

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"


def groebner_basis(ideal: Ideal) -> Ideal:
    """Force the reduced basis; returns the same Ideal with cache filled."""
    ideal.basis()
    return ideal


def normal_form(f: Poly, ideal: Ideal) -> Poly:
    """Remainder of division by the reduced basis; zero iff f is a member."""
    if f.ring != ideal.ring:
        raise RingMismatchError("polynomial outside the ideal's ring")
    counter = _StepCounter(ideal.budget)
    basis = list(ideal.basis())
    if not basis:
        return f
    return _reduce_full(f, basis, ideal.order, counter)


def ideal_equal(left: Ideal, right: Ideal) -> bool:
    """Exact equality via reduced bases in a common order."""
    if left.ring != right.ring:
        raise RingMismatchError("ideal comparison across different rings")
    lb = left.basis()
    rb = right.with_order(left.order).basis()
    return set(lb) == set(rb)


def dimension(ideal: Ideal) -> int:
    """Krull dimension of the vanishing set; -1 for the unit ideal.

    Computed combinatorially from the leading-term monomial ideal: the
    dimension is the size of a largest variable subset S such that no
    leading monomial is supported inside S.
    """
    basis = ideal.basis()
    n = len(ideal.ring.variables)
    supports = []
    for g in basis:
        lexp = _leading(g, ideal.order)[0]
        supports.append(frozenset(i for i, e in enumerate(lexp) if e))
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def eliminate(ideal: Ideal, drop) -> Ideal:
    """Generators of the intersection with the subring omitting ``drop``.

    Internally moves the dropped variables to the front and runs a block
    elimination order.
    """
    drop = set(drop)
    ring = ideal.ring
    for name in drop:
        ring.index(name)
    front = tuple(v for v in ring.variables if v in drop)
    back = tuple(v for v in ring.variables if v not in drop)
    work_ring = Ring(front + back, ring.laurent)
    order = MonomialOrder("block", block=len(front))
    moved = Ideal(work_ring, [g.map_ring(work_ring) for g in ideal.generators], order,
                  ideal.budget)
    sub_ring = Ring(back, ring.laurent)
    kept = [g.map_ring(sub_ring) for g in moved.basis() if not (g.variables_used() & drop)]
    return Ideal(sub_ring, kept, ideal.order if ideal.order.kind != "block" else DEGREVLEX,
                 ideal.budget)


def spolynomial(f: Poly, g: Poly, order: MonomialOrder = DEGREVLEX) -> Poly:
    return _spoly(f, g, order)


def buchberger_certified(ideal: Ideal) -> bool:
    """Post-hoc check: every S-polynomial of the basis reduces to zero."""
    basis = list(ideal.basis())
    counter = _StepCounter(ideal.budget)
    for f, g in itertools.combinations(basis, 2):
        if not _reduce_full(_spoly(f, g, ideal.order), basis, ideal.order, counter).is_zero():
            return False
    return True
