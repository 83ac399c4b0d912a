"""One-parameter matrix families, isotriviality witnesses, flat degenerations.

A family phi_t is built from a t-free origin matrix by weighted variable
scaling plus row and column clearings by powers of t; the admissibility of
the clearing (no surviving pole) encodes the vanishing-order hypotheses on
the entries.  Witnesses are checked, never searched: the caller supplies
the weights and scalings and the module verifies the exact identity over
the Laurent ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .certify import AXIOM_ELKIK, Certificate, ELKIK
from .degeneracy import PolyMatrix, blowup_criterion, charts, incidence_scheme
from .errors import CertificateRefusal, PoleError
from .groebner import Ideal, dimension
from .poly import Poly, Ring, parse_poly, set_t, substitute, t_monomial, weighted_scale


@dataclass(frozen=True)
class MatrixFamily:
    """A matrix over Q[t, 1/t] together with the t-free matrix it degenerates."""

    origin: PolyMatrix
    phi_t: PolyMatrix

    def __post_init__(self):
        if not self.phi_t.ring.laurent:
            raise PoleError("phi_t must live over the Laurent ring")
        for row in self.phi_t.entries:
            for p in row:
                if p.min_laurent_power() < 0:
                    raise PoleError(f"entry {p} keeps a t-pole after clearing")

    def fiber(self, value) -> PolyMatrix:
        return self.phi_t.map_entries(lambda p: set_t(p, value))

    @property
    def special_fiber(self) -> PolyMatrix:
        return self.fiber(0)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Claim: diag(row_scales) . origin(t^w . x) . diag(col_scales) == phi_t.

    Scales are Laurent monomials in t; optional elementary operations
    (op, target, source, coefficient) apply after the scaling, acting on
    rows ("row_add") or columns ("col_add").
    """

    variable_weights: dict
    row_scales: tuple               # t-powers, one per row
    col_scales: tuple               # t-powers, one per column
    extra_row_ops: tuple = ()
    extra_col_ops: tuple = ()

    def to_json(self):
        return {
            "variable_weights": dict(self.variable_weights),
            "row_scales": list(self.row_scales),
            "col_scales": list(self.col_scales),
            "extra_row_ops": [list(op) for op in self.extra_row_ops],
            "extra_col_ops": [list(op) for op in self.extra_col_ops],
        }


def build_family(origin: PolyMatrix, variable_weights: dict, row_clearings,
                 col_clearings) -> MatrixFamily:
    """phi_t[i][j] = row_clearings[i] * col_clearings[j] * origin[i][j](t^w . x).

    Raises PoleError when a negative t-power survives, which signals an
    inadmissible weight choice (a vanishing-order hypothesis fails).
    """
    if len(row_clearings) != origin.rows or len(col_clearings) != origin.cols:
        raise ValueError("clearing lists must match the matrix shape")
    lring = origin.ring.with_laurent()
    rows = []
    for i, row in enumerate(origin.entries):
        out = []
        for j, entry in enumerate(row):
            scaled = weighted_scale(entry, {v: variable_weights.get(v, 0) for v in origin.ring.variables}, 0)
            scaled = scaled * t_monomial(lring, int(row_clearings[i])) * t_monomial(lring, int(col_clearings[j]))
            out.append(scaled)
        rows.append(out)
    phi_t = PolyMatrix(lring, rows)
    return MatrixFamily(origin=origin, phi_t=phi_t)


def verify_isotriviality(family: MatrixFamily, witness: EquivalenceWitness) -> bool:
    """Exact identity check of the witness over Q[t, 1/t]."""
    origin, phi_t = family.origin, family.phi_t
    if len(witness.row_scales) != origin.rows or len(witness.col_scales) != origin.cols:
        return False
    lring = phi_t.ring
    weights = {v: witness.variable_weights.get(v, 0) for v in origin.ring.variables}
    entries = [
        [
            weighted_scale(origin.entries[i][j], weights, 0)
            * t_monomial(lring, int(witness.row_scales[i]))
            * t_monomial(lring, int(witness.col_scales[j]))
            for j in range(origin.cols)
        ]
        for i in range(origin.rows)
    ]
    for op in witness.extra_row_ops:
        kind, target, source, coeff = op
        if kind != "row_add":
            return False
        coeff = parse_poly(coeff, lring) if isinstance(coeff, str) else coeff
        entries[target] = [a + coeff * b for a, b in zip(entries[target], entries[source])]
    for op in witness.extra_col_ops:
        kind, target, source, coeff = op
        if kind != "col_add":
            return False
        coeff = parse_poly(coeff, lring) if isinstance(coeff, str) else coeff
        for row in entries:
            row[target] = row[target] + coeff * row[source]
    return all(
        entries[i][j] == phi_t.entries[i][j]
        for i in range(origin.rows)
        for j in range(origin.cols)
    )


@dataclass(frozen=True)
class FlatnessReport:
    """Dimension bookkeeping behind the flatness hypothesis of the family.

    The special fiber's charts must have the ambient dimension n and the
    total space's charts (t adjoined as a variable) dimension n + 1;
    together with isotriviality away from t = 0 this is the dimension
    constancy that makes the degeneration flat.
    """

    ambient_dim: int
    fiber0_dims: tuple
    total_dims: tuple
    ok: bool

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "fiber0_dims": list(self.fiber0_dims),
            "total_dims": list(self.total_dims),
            "ok": self.ok,
        }


def verify_flat_degeneration(family: MatrixFamily) -> FlatnessReport:
    n = len(family.origin.ring.variables)
    fiber0 = family.special_fiber
    fiber_dims = tuple(dimension(c.ideal) for c in charts(incidence_scheme(fiber0)))

    total_ring = family.phi_t.ring.laurent_as_variable()
    total = family.phi_t.map_entries(lambda p: p.map_ring(total_ring))
    total_dims = tuple(dimension(c.ideal) for c in charts(incidence_scheme(total)))

    ok = all(d == n for d in fiber_dims) and all(d == n + 1 for d in total_dims)
    return FlatnessReport(ambient_dim=n, fiber0_dims=fiber_dims, total_dims=total_dims, ok=ok)


def elkik_node(family: MatrixFamily, witness: EquivalenceWitness,
               limit_cert: Certificate) -> Certificate:
    """Certify the origin matrix by flat degeneration onto a certified limit.

    Refuses (naming the failed check) unless the isotriviality witness
    verifies, the dimension bookkeeping holds, and the limit certificate is
    complete and certifies the special fiber.
    """
    if not verify_isotriviality(family, witness):
        raise CertificateRefusal("isotriviality")
    flatness = verify_flat_degeneration(family)
    if not flatness.ok:
        raise CertificateRefusal("flatness")
    if not limit_cert.complete:
        raise CertificateRefusal("limit-incomplete")
    fiber0 = family.special_fiber
    expected = tuple(str(e) for e in incidence_scheme(fiber0).equations)
    if limit_cert.kind == "chart_cover" and limit_cert.subject != expected:
        raise CertificateRefusal("limit-subject-mismatch")

    origin_scheme = incidence_scheme(family.origin)
    return Certificate(
        ELKIK,
        origin_scheme.ring.names,
        tuple(str(e) for e in origin_scheme.equations),
        {
            "family_kind": "matrix",
            "origin": [[str(p) for p in row] for row in family.origin.entries],
            "phi_t": [[str(p) for p in row] for row in family.phi_t.entries],
            "base_ring": list(family.origin.ring.variables),
            "witness": witness.to_json(),
            "flatness": flatness.to_json(),
        },
        axiom=AXIOM_ELKIK,
        children=(limit_cert,),
    )


def revalidate_matrix_elkik(cert: Certificate, problems: list):
    """Validator hook: rebuild the family from recorded data and recheck."""
    ring = Ring(tuple(cert.data["base_ring"]))
    lring = ring.with_laurent()
    origin = PolyMatrix.from_strings(ring, cert.data["origin"])
    phi_t = PolyMatrix.from_strings(lring, cert.data["phi_t"])
    family = MatrixFamily(origin=origin, phi_t=phi_t)
    w = cert.data["witness"]
    witness = EquivalenceWitness(
        variable_weights=w["variable_weights"],
        row_scales=tuple(w["row_scales"]),
        col_scales=tuple(w["col_scales"]),
        extra_row_ops=tuple(tuple(op) for op in w.get("extra_row_ops", ())),
        extra_col_ops=tuple(tuple(op) for op in w.get("extra_col_ops", ())),
    )
    if not verify_isotriviality(family, witness):
        problems.append("matrix-family isotriviality recheck failed")
    flatness = verify_flat_degeneration(family)
    if not flatness.ok or flatness.to_json() != cert.data["flatness"]:
        problems.append("matrix-family flatness recheck failed")
    if not cert.children:
        problems.append("matrix elkik node has no limit child")
