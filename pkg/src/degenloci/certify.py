"""Chart-level singularity analysis and rationality certificates.

Rationality is certified only through a fixed catalog of routes: the
Jacobian smoothness criterion, normal toric binomial hypersurfaces
(uv = M with singular locus of codimension >= 2), the three-term
hypersurface form uv = u*M1 + v^d*M2 reduced by an isotrivial degeneration
to its monomial limit, and chart covers of incidence schemes.  Named
classical theorems enter certificates as recorded axioms, never re-proved.

Certificates are self-validating: every leaf stores enough data for
``validate_certificate`` to recompute its claim from scratch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnsupportedShapeError
from .groebner import Ideal, dimension, ideal_equal
from .poly import Poly, Ring, parse_poly, set_t, substitute, t_monomial

AXIOM_ELKIK = {
    "name": "elkik",
    "statement": "deformations and generizations of rational singularities are rational (Elkik)",
}
AXIOM_TORIC = {
    "name": "normal-toric-rational",
    "statement": "a normal toric singularity is rational",
}

SMOOTH = "smooth"
NORMAL_TORIC = "normal_toric"
FORM_MATCH = "form_match"
ELKIK = "elkik"
CHART_COVER = "chart_cover"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    """Tree-structured proof object for rational singularities."""

    kind: str
    ring_names: tuple
    subject: tuple                  # generator strings of the certified ideal
    data: dict = field(default_factory=dict)
    axiom: dict | None = None
    children: tuple = ()

    @property
    def complete(self) -> bool:
        if self.kind == UNKNOWN:
            return False
        return all(c.complete for c in self.children)

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def count(self, kind: str) -> int:
        return sum(1 for node in self.nodes() if node.kind == kind)

    def to_json(self):
        out = {
            "kind": self.kind,
            "ring": list(self.ring_names),
            "subject": list(self.subject),
            "data": self.data,
        }
        if self.axiom:
            out["axiom"] = self.axiom
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _subject(ideal: Ideal):
    return tuple(str(g) for g in ideal.generators)


def unknown_leaf(ideal: Ideal, reason: str) -> Certificate:
    return Certificate(UNKNOWN, ideal.ring.names, _subject(ideal), {"reason": reason})


# -- term helpers -------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """A single coefficient-carrying monomial."""

    coeff: Fraction
    exponents: tuple                # ((name, exponent), ...), sorted

    @staticmethod
    def make(coeff, exps: dict) -> "Term":
        return Term(Fraction(coeff), tuple(sorted((n, e) for n, e in exps.items() if e)))

    def to_poly(self, ring: Ring) -> Poly:
        return Poly.monomial(ring, dict(self.exponents), self.coeff)

    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def variables(self) -> set:
        return {n for n, _ in self.exponents}

    def pure_power(self):
        """(name, degree) when the monomial is a power of one variable."""
        if len(self.exponents) == 1:
            return self.exponents[0]
        return None

    def to_json(self):
        return {"coeff": str(self.coeff), "monomial": dict(self.exponents)}


def _terms_of(f: Poly):
    names = f.ring.names
    out = []
    for exps, coeff in f._sorted_terms():
        out.append(Term(coeff, tuple(sorted((n, e) for n, e in zip(names, exps) if e))))
    return out


@dataclass(frozen=True)
class BinomialMatch:
    u: str
    v: str
    unit: Fraction                  # f == unit * (u*v - M)
    m: Term


def match_binomial_form(f: Poly):
    """Match f = c*(u*v - M), M a coefficient-carrying monomial in other variables.

    Ties break to the lexicographically first (u, v) pair in ring order.
    """
    terms = _terms_of(f)
    if len(terms) != 2:
        return None
    names = f.ring.variables
    for i, j in ((0, 1), (1, 0)):
        uv, other = terms[i], terms[j]
        if uv.degree() != 2 or len(uv.exponents) != 2:
            continue
        (u, eu), (v, ev) = uv.exponents
        if eu != 1 or ev != 1:
            continue
        if other.variables() & {u, v}:
            continue
        u, v = sorted((u, v), key=names.index)
        unit = uv.coeff
        m = Term(-other.coeff / unit, other.exponents)
        return BinomialMatch(u=u, v=v, unit=unit, m=m)
    return None


@dataclass(frozen=True)
class FormMatch:
    """Witness for f == unit * (u*v - u*M1 - v^d*M2), M1 and M2 in the other variables."""

    u: str
    v: str
    d: int
    m1: Term
    m2: Term
    unit: Fraction

    def to_json(self):
        return {
            "u": self.u,
            "v": self.v,
            "d": self.d,
            "m1": self.m1.to_json(),
            "m2": self.m2.to_json(),
            "unit": str(self.unit),
        }


def match_three_term_form(f: Poly):
    """Match the three-term hypersurface form u*v - u*M1 - v^d*M2, d >= 0.

    The search runs over ordered variable pairs in ring order; the first
    full decomposition wins.
    """
    terms = _terms_of(f)
    if len(terms) != 3:
        return None
    names = f.ring.variables
    by_key = {t.exponents: t for t in terms}
    for u in names:
        for v in names:
            if u == v:
                continue
            uv_key = tuple(sorted(((u, 1), (v, 1))))
            uv = by_key.get(uv_key)
            if uv is None:
                continue
            rest = [t for t in terms if t.exponents != uv_key]
            for first, second in ((rest[0], rest[1]), (rest[1], rest[0])):
                exps1 = dict(first.exponents)
                if exps1.get(u) != 1 or v in exps1:
                    continue
                m1_exps = {n: e for n, e in exps1.items() if n != u}
                if not m1_exps:
                    continue  # u*constant would make the surface reducible
                exps2 = dict(second.exponents)
                if u in exps2:
                    continue
                d = exps2.pop(v, 0)
                unit = uv.coeff
                m1 = Term(-first.coeff / unit, tuple(sorted(m1_exps.items())))
                m2 = Term(-second.coeff / unit, tuple(sorted(exps2.items())))
                return FormMatch(u=u, v=v, d=d, m1=m1, m2=m2, unit=unit)
    return None


def expand_three_term_form(match: FormMatch, ring: Ring) -> Poly:
    """Rebuild unit * (u*v - u*M1 - v^d*M2)."""
    u = Poly.variable(ring, match.u)
    v = Poly.variable(ring, match.v)
    body = u * v - u * match.m1.to_poly(ring) - v ** match.d * match.m2.to_poly(ring)
    return body.scale(match.unit)


def expand_binomial(match: BinomialMatch, ring: Ring) -> Poly:
    u = Poly.variable(ring, match.u)
    v = Poly.variable(ring, match.v)
    return (u * v - match.m.to_poly(ring)).scale(match.unit)


# -- Jacobian criterion -------------------------------------------------------


def jacobian_ideal(ideal: Ideal) -> Ideal:
    """The ideal plus all c x c minors of the Jacobian of its c generators.

    Requires the generators to cut out a complete intersection of
    codimension c (checked through the Groebner dimension).
    """
    gens = ideal.generators
    c = len(gens)
    n = len(ideal.ring.variables)
    if c == 0:
        raise UnsupportedShapeError("the zero ideal has no Jacobian criterion to run")
    if dimension(ideal) != n - c:
        raise UnsupportedShapeError(
            f"{c} generators do not form a codimension-{c} complete intersection"
        )
    import itertools

    jac = [[g.derivative(x) for x in ideal.ring.variables] for g in gens]
    minors = []
    for cols in itertools.combinations(range(n), c):
        sub = [[jac[r][cc] for cc in cols] for r in range(c)]
        d = _det(sub)
        if not d.is_zero():
            minors.append(d)
    return Ideal(ideal.ring, list(gens) + minors)


def _det(rows):
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


def is_smooth(ideal: Ideal) -> bool:
    """Jacobian smoothness of a complete intersection (the zero ideal is smooth)."""
    if not ideal.generators or all(g.is_zero() for g in ideal.generators):
        return True
    return jacobian_ideal(ideal).is_unit()


def singular_locus_dimension(f: Poly) -> int:
    """Dimension of the singular locus of the hypersurface f = 0."""
    return dimension(jacobian_ideal(Ideal(f.ring, [f])))


def toric_normal(f: Poly) -> bool:
    """Normality of the binomial hypersurface u*v = M via Serre's criterion.

    S2 is automatic for a hypersurface; R1 asks the singular locus to have
    codimension >= 2 inside the hypersurface.
    """
    if match_binomial_form(f) is None:
        raise UnsupportedShapeError("toric_normal expects a matched binomial u*v - M")
    n = len(f.ring.variables)
    return singular_locus_dimension(f) <= n - 3


# -- certification ------------------------------------------------------------


def certify_rational(chart_or_ideal, budget: int = 32) -> Certificate:
    """Certify rational singularities of a chart through the catalog routes.

    Route order: smoothness, normal toric binomial, three-term form with
    its isotrivial degeneration, otherwise an honest Unknown leaf.
    """
    ideal = getattr(chart_or_ideal, "ideal", chart_or_ideal)
    return _certify_ideal(ideal, budget)


def _certify_ideal(ideal: Ideal, budget: int) -> Certificate:
    if budget <= 0:
        return unknown_leaf(ideal, "budget")
    gens = [g for g in ideal.generators if not g.is_zero()]
    ring = ideal.ring
    n = len(ring.variables)
    c = len(gens)
    work = Ideal(ring, gens)
    if c and dimension(work) != n - c:
        return unknown_leaf(ideal, "not a complete intersection")

    if is_smooth(work):
        return Certificate(SMOOTH, ring.names, _subject(ideal), {"jacobian_unit": True})

    if c == 1:
        f = gens[0]
        bmatch = match_binomial_form(f)
        if bmatch is not None and toric_normal(f):
            sing_dim = singular_locus_dimension(f)
            data = {
                "u": bmatch.u,
                "v": bmatch.v,
                "unit": str(bmatch.unit),
                "m": bmatch.m.to_json(),
                "singular_locus_dim": sing_dim,
                "hypersurface_dim": n - 1,
            }
            pure = bmatch.m.pure_power()
            if pure is not None:
                data["type_a_degree"] = pure[1]
            return Certificate(
                NORMAL_TORIC, ring.names, _subject(ideal), data, axiom=AXIOM_TORIC
            )

        fmatch = match_three_term_form(f)
        if fmatch is not None:
            return _three_term_reduction(ideal, f, fmatch, budget)

    return unknown_leaf(ideal, "no catalog route applies")


def _three_term_reduction(ideal: Ideal, f: Poly, match: FormMatch, budget: int) -> Certificate:
    """The isotrivial-family route for u*v = u*M1 + v^d*M2.

    Substituting v -> v + M1 turns the normalized equation into
    u*v = (v + M1)^d * M2, which sits in the family u*v = (t*v + M1)^d * M2.
    The family is isotrivial away from t = 0 (rescale u by t and v by 1/t)
    and its limit is the binomial u*v = M1^d * M2, so the certificate
    recurses on the limit and wraps the degeneration in an Elkik node.
    """
    ring = ideal.ring
    assert expand_three_term_form(match, ring) == f, "form witness failed to expand"

    u = Poly.variable(ring, match.u)
    v = Poly.variable(ring, match.v)
    m1 = match.m1.to_poly(ring)
    m2 = match.m2.to_poly(ring)
    shifted = substitute(f.scale(1 / match.unit), {match.v: v + m1})
    target = u * v - (v + m1) ** match.d * m2
    assert shifted == target, "shear substitution failed to produce the family fiber"

    lring = ring.with_laurent()
    tv = t_monomial(lring, 1) * v.map_ring(lring)
    family = u.map_ring(lring) * v.map_ring(lring) - (
        tv + m1.map_ring(lring)
    ) ** match.d * m2.map_ring(lring)

    # isotriviality: u -> t*u, v -> v/t carries the family onto its t=1 fiber
    scaled = substitute(
        family,
        {
            match.u: t_monomial(lring, 1) * u.map_ring(lring),
            match.v: t_monomial(lring, -1) * v.map_ring(lring),
        },
    )
    iso_ok = scaled == target.map_ring(lring)

    limit = set_t(family, 0)
    limit_cert = _certify_ideal(Ideal(ring, [limit]), budget - 1)

    elkik = Certificate(
        ELKIK,
        ring.names,
        (str(shifted),),
        {
            "family_kind": "hypersurface",
            "family": str(family),
            "parameter": lring.laurent,
            "isotriviality_weights": {match.u: 1, match.v: -1},
            "isotriviality_ok": iso_ok,
            "limit": str(limit),
            "limit_nonzero": not limit.is_zero(),
        },
        axiom=AXIOM_ELKIK,
        children=(limit_cert,),
    )
    if not iso_ok:
        return unknown_leaf(ideal, "isotriviality witness failed")
    return Certificate(
        FORM_MATCH,
        ring.names,
        _subject(ideal),
        {
            "form": "uv-uM1-vdM2",
            "match": match.to_json(),
            "substitution": {match.v: str(v + m1)},
        },
        children=(elkik,),
    )


def chart_cover_certificate(phi, scheme, chart_list, chart_certs, blowup_report) -> Certificate:
    """Assemble the per-chart certificates of an incidence scheme."""
    data = {
        "matrix": [[str(p) for p in row] for row in phi.entries],
        "base_ring": list(phi.ring.variables),
        "proj_vars": list(scheme.proj_vars),
        "blowup": blowup_report.to_json(),
        "charts": [
            {
                "index": c.index,
                "chart_var": c.chart_var,
                "ring": list(c.ring.names),
                "initial_gens": [str(g) for g in c.initial_gens],
                "chain": [[v, str(p)] for v, p in c.chain],
                "gens": [str(g) for g in c.generators],
            }
            for c in chart_list
        ],
    }
    subject = tuple(str(e) for e in scheme.equations)
    return Certificate(CHART_COVER, scheme.ring.names, subject, data, children=tuple(chart_certs))


# -- validation ---------------------------------------------------------------


def _parse_ideal(ring_names, gens):
    ring = Ring(tuple(ring_names))
    return Ideal(ring, [parse_poly(s, ring) for s in gens])


def validate_certificate(cert: Certificate) -> bool:
    """Re-check every node of a certificate from its recorded witnesses."""
    ok, _ = validate_with_reasons(cert)
    return ok


def validate_with_reasons(cert: Certificate):
    problems = []
    _validate_node(cert, problems)
    return (not problems, problems)


def _validate_node(cert: Certificate, problems: list):
    kind = cert.kind
    if kind == UNKNOWN:
        problems.append(f"unknown leaf: {cert.data.get('reason')}")
    elif kind == SMOOTH:
        ideal = _parse_ideal(cert.ring_names, cert.subject)
        if not is_smooth(ideal):
            problems.append(f"smooth leaf fails Jacobian recheck: {cert.subject}")
    elif kind == NORMAL_TORIC:
        ideal = _parse_ideal(cert.ring_names, cert.subject)
        if len(ideal.generators) != 1:
            problems.append("normal-toric leaf must certify a hypersurface")
            return
        f = ideal.generators[0]
        match = match_binomial_form(f)
        if match is None or not toric_normal(f):
            problems.append(f"normal-toric recheck failed: {cert.subject}")
    elif kind == FORM_MATCH:
        _validate_form_match(cert, problems)
    elif kind == ELKIK:
        _validate_elkik(cert, problems)
    elif kind == CHART_COVER:
        _validate_chart_cover(cert, problems)
    else:
        problems.append(f"unrecognized certificate kind {kind!r}")
    for child in cert.children:
        _validate_node(child, problems)


def _validate_form_match(cert: Certificate, problems: list):
    form = cert.data.get("form")
    if form == "uv-uM1-vdM2":
        ideal = _parse_ideal(cert.ring_names, cert.subject)
        f = ideal.generators[0]
        m = cert.data["match"]
        match = FormMatch(
            u=m["u"],
            v=m["v"],
            d=m["d"],
            m1=Term(Fraction(m["m1"]["coeff"]), tuple(sorted(m["m1"]["monomial"].items()))),
            m2=Term(Fraction(m["m2"]["coeff"]), tuple(sorted(m["m2"]["monomial"].items()))),
            unit=Fraction(m["unit"]),
        )
        if expand_three_term_form(match, ideal.ring) != f:
            problems.append("form-match witness does not expand to the subject")
    elif form == "quadratic_cone_ideal":
        from .degeneracy import PolyMatrix, fitting_ideal

        src_ring = Ring(tuple(cert.data["base_ring"]))
        source = PolyMatrix.from_strings(src_ring, cert.data["source_matrix"])
        target = PolyMatrix.from_strings(src_ring, cert.data["target_matrix"])
        sub = {k: parse_poly(v, src_ring) for k, v in cert.data["substitution"].items()}
        moved = Ideal(src_ring, [substitute(g, sub) for g in fitting_ideal(source).generators])
        if not ideal_equal(moved, fitting_ideal(target)):
            problems.append("quadratic-ideal transport witness failed")
    else:
        problems.append(f"unknown form id {form!r}")


def _validate_elkik(cert: Certificate, problems: list):
    if cert.data.get("family_kind") == "hypersurface":
        ring = Ring(tuple(cert.ring_names))
        lring = ring.with_laurent(cert.data.get("parameter", "t"))
        family = parse_poly(cert.data["family"], lring)
        fiber1 = set_t(family, 1)
        subject = parse_poly(cert.subject[0], ring)
        if fiber1 != subject:
            problems.append("family does not specialize to the certified equation at t=1")
        weights = cert.data["isotriviality_weights"]
        scaled = substitute(
            family,
            {
                name: t_monomial(lring, int(w)) * Poly.variable(lring, name)
                for name, w in weights.items()
            },
        )
        if scaled != fiber1.map_ring(lring):
            problems.append("isotriviality witness recheck failed")
        limit = set_t(family, 0)
        if str(limit) != cert.data["limit"] or limit.is_zero():
            problems.append("family limit mismatch")
        if cert.children and cert.children[0].subject != (cert.data["limit"],):
            problems.append("limit child certifies a different equation")
    elif cert.data.get("family_kind") == "matrix":
        from .families import revalidate_matrix_elkik

        revalidate_matrix_elkik(cert, problems)
    else:
        problems.append("elkik node without a family")


def _validate_chart_cover(cert: Certificate, problems: list):
    from .degeneracy import PolyMatrix, blowup_criterion, charts, incidence_scheme

    ring = Ring(tuple(cert.data["base_ring"]))
    phi = PolyMatrix.from_strings(ring, cert.data["matrix"])
    scheme = incidence_scheme(phi, cert.data["proj_vars"])
    recomputed = charts(scheme)
    if len(recomputed) != len(cert.children):
        problems.append("chart cover is missing charts")
        return
    for c, child in zip(recomputed, cert.children):
        if tuple(str(g) for g in c.generators) != child.subject:
            problems.append(f"chart {c.chart_var} generators differ from the certified subject")
    report = blowup_criterion(phi)
    if report.to_json() != cert.data["blowup"]:
        problems.append("blow-up report recheck failed")
