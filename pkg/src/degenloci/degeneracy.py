"""Corank-1 degeneracy loci: Fitting ideals, incidence schemes, charts, strata.

A PolyMatrix is an m x (m+1) matrix of polynomials on affine space; its
maximal minors cut out the degeneracy locus, and the bilinear equations
phi . u = 0 cut out the incidence scheme of projectivized kernels inside
A^n x P^m.  The blow-up criterion checks the rank-stratum codimensions
that identify the incidence scheme with the blow-up of the locus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateMatrixError
from .groebner import DEGREVLEX, Ideal, dimension
from .poly import Poly, Ring, parse_poly, substitute

# Default homogeneous coordinate names for small projective factors.
_GREEK = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta")


class PolyMatrix:
    """An m x (m+1) matrix of polynomials over a common ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, entries):
        entries = tuple(tuple(row) for row in entries)
        if not entries or any(len(row) != len(entries) + 1 for row in entries):
            raise ValueError("matrix must have shape m x (m+1) with m >= 1")
        for row in entries:
            for p in row:
                if not isinstance(p, Poly) or p.ring != ring:
                    raise TypeError("entries must be Poly values over the matrix ring")
        self.ring = ring
        self.rows = len(entries)
        self.cols = len(entries) + 1
        self.entries = entries

    @staticmethod
    def from_strings(ring: Ring, rows) -> "PolyMatrix":
        return PolyMatrix(ring, [[parse_poly(s, ring) for s in row] for row in rows])

    def map_entries(self, fn) -> "PolyMatrix":
        first = fn(self.entries[0][0])
        return PolyMatrix(first.ring, [[fn(p) for p in row] for row in self.entries])

    def substitute(self, assignments) -> "PolyMatrix":
        return self.map_entries(lambda p: substitute(p, assignments))

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def __repr__(self):
        rows = "; ".join(", ".join(str(p) for p in row) for row in self.entries)
        return f"PolyMatrix[{rows}]"


def _det(rows) -> Poly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    ring = rows[0][0].ring
    total = Poly.zero(ring)
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = rows[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def maximal_minors(phi: PolyMatrix) -> list:
    """Signed maximal minors: deleting column j carries sign (-1)^j.

    With this convention the vector of minors is a kernel vector of phi
    wherever phi has full rank.
    """
    out = []
    for j in range(phi.cols):
        rows = [[row[k] for k in range(phi.cols) if k != j] for row in phi.entries]
        minor = _det(rows)
        out.append(minor if j % 2 == 0 else -minor)
    return out


def fitting_ideal(phi: PolyMatrix) -> Ideal:
    """The ideal of maximal minors, generators listed by deleted column."""
    minors = maximal_minors(phi)
    if all(m.is_zero() for m in minors):
        raise DegenerateMatrixError("all maximal minors vanish identically")
    return Ideal(phi.ring, minors)


@dataclass(frozen=True)
class IncidenceScheme:
    """phi . u = 0 inside A^n x P^m, u the column of homogeneous coordinates."""

    matrix: PolyMatrix
    ring: Ring                      # base variables followed by projective ones
    proj_vars: tuple
    equations: tuple                # m polynomials, linear in proj_vars

    @property
    def base_vars(self):
        return self.matrix.ring.variables


def incidence_scheme(phi: PolyMatrix, proj_names=None) -> IncidenceScheme:
    if proj_names is None:
        if phi.cols <= len(_GREEK) and not (set(_GREEK[: phi.cols]) & set(phi.ring.variables)):
            proj_names = _GREEK[: phi.cols]
        else:
            proj_names = tuple(f"u{j}" for j in range(phi.cols))
    proj_names = tuple(proj_names)
    if len(proj_names) != phi.cols:
        raise ValueError("need one homogeneous coordinate per column")
    ring = phi.ring.extend(proj_names)
    u = [Poly.variable(ring, name) for name in proj_names]
    eqs = []
    for row in phi.entries:
        acc = Poly.zero(ring)
        for entry, coord in zip(row, u):
            acc = acc + entry.map_ring(ring) * coord
        eqs.append(acc)
    return IncidenceScheme(phi, ring, proj_names, tuple(eqs))


@dataclass
class Chart:
    """A standard affine chart u_j = 1 of an incidence scheme.

    ``initial_gens`` are the m bilinear equations after the substitution
    u_j := 1; the chart then repeatedly solves any generator that is linear
    in a remaining variable with a constant (unit) coefficient and records
    the substitution chain.  ``ideal`` holds what is left, in the ring of
    surviving variables.
    """

    index: int
    chart_var: str
    ring: Ring
    ideal: Ideal
    initial_gens: tuple
    chain: tuple                    # ((solved variable, image polynomial), ...)

    @property
    def generators(self):
        return self.ideal.generators

    def all_generator_views(self):
        """Generators at both stages, for matching quoted equation shapes."""
        return tuple(self.initial_gens) + tuple(self.ideal.generators)


def _solve_linear(gens, ring: Ring):
    """First (generator, variable) pair solvable with a constant unit coefficient."""
    for gi, g in enumerate(gens):
        for name in ring.variables:
            if g.degree_in(name) != 1:
                continue
            coeff = g.coefficient_of(name, 1)
            if coeff.is_constant() and not coeff.is_zero():
                return gi, name, coeff.constant_value()
    return None


def chart(scheme: IncidenceScheme, j: int) -> Chart:
    if not 0 <= j < scheme.matrix.cols:
        raise ValueError(f"chart index {j} out of range")
    chart_var = scheme.proj_vars[j]
    ring = scheme.ring.without([chart_var])
    one = Poly.constant(scheme.ring, 1)
    initial = []
    for eq in scheme.equations:
        g = substitute(eq, {chart_var: one}).map_ring(ring)
        initial.append(g)

    gens = [g for g in initial]
    chain = []
    while True:
        gens = [g for g in gens if not g.is_zero()]
        hit = _solve_linear(gens, ring)
        if hit is None:
            break
        gi, name, coeff = hit
        g = gens.pop(gi)
        image = (g.coefficient_of(name, 0)).scale(Fraction(-1) / coeff)
        sub_ring = ring.without([name])
        image = image.map_ring(sub_ring)
        chain.append((name, image))
        gens = [substitute(p, {name: image.map_ring(ring)}).map_ring(sub_ring) for p in gens]
        ring = sub_ring

    return Chart(
        index=j,
        chart_var=chart_var,
        ring=ring,
        ideal=Ideal(ring, gens),
        initial_gens=tuple(initial),
        chain=tuple(chain),
    )


def charts(scheme: IncidenceScheme) -> list:
    return [chart(scheme, j) for j in range(scheme.matrix.cols)]


def rank_stratum_ideal(phi: PolyMatrix, p: int) -> Ideal:
    """Ideal of the locus where the rank drops by at least p (minors of size m-p+1)."""
    if not 1 <= p <= phi.rows:
        raise ValueError(f"stratum index p={p} outside 1..{phi.rows}")
    size = phi.rows - p + 1
    gens = []
    for rows in itertools.combinations(range(phi.rows), size):
        for cols in itertools.combinations(range(phi.cols), size):
            sub = [[phi.entries[r][c] for c in cols] for r in rows]
            d = _det(sub)
            if not d.is_zero() and d not in gens:
                gens.append(d)
    return Ideal(phi.ring, gens)


@dataclass(frozen=True)
class BlowupReport:
    ok: bool
    ambient_dim: int
    strata: tuple                   # ((p, codim or None for an empty stratum), ...)
    identification: str

    def to_json(self):
        return {
            "ok": self.ok,
            "ambient_dim": self.ambient_dim,
            "strata": [{"p": p, "codim": c} for p, c in self.strata],
            "identification": self.identification,
        }


def blowup_criterion(phi: PolyMatrix) -> BlowupReport:
    """Check codim S_p >= p+1 for every rank stratum.

    When the check passes, the incidence scheme is irreducible of the
    ambient dimension and coincides with the blow-up of the degeneracy
    locus.
    """
    fitting_ideal(phi)  # surfaces the degenerate-matrix error
    n = len(phi.ring.variables)
    strata = []
    ok = True
    for p in range(1, phi.rows + 1):
        ideal = rank_stratum_ideal(phi, p)
        dim = dimension(ideal)
        if dim < 0:
            strata.append((p, None))
            continue
        codim = n - dim
        strata.append((p, codim))
        if codim < p + 1:
            ok = False
    if ok:
        note = (
            f"incidence scheme is irreducible of dimension {n} and equals the "
            f"blow-up of the degeneracy locus"
        )
    else:
        note = "criterion failed; no blow-up identification is asserted"
    return BlowupReport(ok=ok, ambient_dim=n, strata=tuple(strata), identification=note)


# -- exact linear-algebra oracle ---------------------------------------------


def rank_at_point(phi: PolyMatrix, point: dict) -> int:
    """Rank of phi evaluated at a rational point, by fraction-free elimination."""
    rows = [[p.evaluate(point) for p in row] for row in phi.entries]
    rank = 0
    col = 0
    m, ncols = len(rows), len(rows[0])
    while rank < m and col < ncols:
        pivot = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(m):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def kernel_vector_at_point(phi: PolyMatrix, point: dict) -> list:
    """The signed-minor kernel vector of phi at a point."""
    return [m.evaluate(point) for m in maximal_minors(phi)]
