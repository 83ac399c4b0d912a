"""End-to-end verification pipelines over the instance catalog.

Each instance is pushed through the degeneracy-locus machinery and its
expected artifacts are diffed exactly: ideals by reduced bases, quoted
chart equations up to a rational unit, certificate kinds per chart, and
degeneration chains with their witnesses and dimension reports.  Reports
are deterministic (and byte-identical across runs) by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import catalog
from .catalog import CatalogInstance
from .certify import (
    Certificate,
    FORM_MATCH,
    certify_rational,
    chart_cover_certificate,
    is_smooth,
    validate_with_reasons,
)
from .degeneracy import (
    PolyMatrix,
    blowup_criterion,
    charts,
    fitting_ideal,
    incidence_scheme,
)
from .errors import DegenLociError, NormalizationError
from .families import EquivalenceWitness, build_family, elkik_node, verify_flat_degeneration, verify_isotriviality
from .groebner import Ideal, ideal_equal
from .poly import Poly, Ring, parse_poly, substitute


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class InstanceResult:
    id: str
    passed: bool
    expected_fail: bool
    checks: list
    certificate: dict | None = None
    note: str = ""

    def to_json(self):
        return {
            "id": self.id,
            "passed": self.passed,
            "expected_fail": self.expected_fail,
            "checks": [c.to_json() for c in self.checks],
            "certificate": self.certificate,
            "note": self.note,
        }


@dataclass
class PipelineReport:
    title: str
    seed: int
    results: list = field(default_factory=list)
    gaps: tuple = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> str:
        good = sum(1 for r in self.results if r.passed)
        return f"{self.title}: {good}/{len(self.results)} instances pass"

    def to_json(self):
        return {
            "title": self.title,
            "seed": self.seed,
            "passed": self.passed,
            "summary": self.summary(),
            "gaps": list(self.gaps),
            "results": [r.to_json() for r in self.results],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# -- helpers -------------------------------------------------------------------


def proportional(f: Poly, g: Poly) -> bool:
    """f == c * g for some nonzero rational c (sign/unit normalization)."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    key = next(iter(g.terms))
    if key not in f.terms:
        return False
    c = f.terms[key] / g.terms[key]
    return c != 0 and f == g.scale(c)


def quoted_chart_matches(chart, expected: str) -> bool:
    """Match a quoted equation against the chart's pre- and post-elimination views."""
    for view in chart.all_generator_views():
        ring = view.ring
        try:
            target = parse_poly(expected, ring)
        except DegenLociError:
            continue
        if proportional(target, view):
            return True
    return False


def _square_root(value: Fraction):
    import math

    value = Fraction(value)
    if value < 0:
        return None
    rn = math.isqrt(value.numerator)
    rd = math.isqrt(value.denominator)
    if rn * rn == value.numerator and rd * rd == value.denominator:
        return Fraction(rn, rd)
    return None


def normalize_binary_quadratic(q: Poly):
    """A rational change of (x, y) carrying q onto a multiple of xy or x^2.

    Returns (substitution dict, target name) with target "I1" for split
    nonzero discriminant and "I2" for a square form.  Raises
    NormalizationError when the discriminant is not a rational square.
    """
    ring = q.ring
    x = Poly.variable(ring, "x")
    y = Poly.variable(ring, "y")
    coeff = {}
    for exps, c in q.terms.items():
        names = {n: e for n, e in zip(ring.names, exps) if e}
        if set(names) - {"x", "y"} or sum(names.values()) != 2:
            raise NormalizationError(f"{q} is not a binary quadratic form in x, y")
        coeff[(names.get("x", 0), names.get("y", 0))] = c
    A = coeff.get((2, 0), Fraction(0))
    B = coeff.get((1, 1), Fraction(0))
    C = coeff.get((0, 2), Fraction(0))
    if (A, B, C) == (0, 0, 0):
        raise NormalizationError("the quadratic form vanishes")
    disc = B * B - 4 * A * C
    if disc == 0:
        if A != 0:
            sub = {"x": x - (B / (2 * A)) * y}
        else:  # B = 0 forced, so q = C y^2
            sub = {"x": y, "y": x}
        return sub, "I2"
    root = _square_root(disc)
    if root is None:
        raise NormalizationError(f"discriminant {disc} is not a rational square")
    if A != 0:
        r1 = (-B + root) / (2 * A)
        r2 = (-B - root) / (2 * A)
        sub = {
            "x": (r2 / (r2 - r1)) * x + (r1 / (r1 - r2)) * y,
            "y": (1 / (r2 - r1)) * x + (1 / (r1 - r2)) * y,
        }
    else:
        sub = {"x": (1 / B) * y - (C / B) * x, "y": x}
    return sub, "I1"


_TARGET_ROWS = {
    "I1": (("x", "y", "0"), ("0", "y", "z")),
    "I2": (("x", "y", "0"), ("0", "x", "z")),
}


def _chart_cover(phi: PolyMatrix) -> Certificate:
    scheme = incidence_scheme(phi)
    chart_list = charts(scheme)
    certs = [certify_rational(c) for c in chart_list]
    return chart_cover_certificate(phi, scheme, chart_list, certs, blowup_criterion(phi))


# -- per-instance drivers -------------------------------------------------------


def _check_codims(checks, report, expected):
    got = dict(report.strata)
    for p, codim in expected:
        ok = got.get(p) == codim
        checks.append(CheckResult(f"codim-S{p}", ok, f"expected {codim}, got {got.get(p)}"))


def _run_matrix_instance(inst: CatalogInstance) -> InstanceResult:
    ring = inst.ring
    phi = PolyMatrix.from_strings(ring, inst.matrix)
    checks = []

    report = blowup_criterion(phi)
    checks.append(CheckResult("blowup-criterion", report.ok, report.identification))
    if inst.expected_codims:
        _check_codims(checks, report, inst.expected_codims)

    if inst.expected_fitting:
        expected = Ideal(ring, [parse_poly(s, ring) for s in inst.expected_fitting])
        ok = ideal_equal(fitting_ideal(phi), expected)
        checks.append(CheckResult("fitting-ideal-exact", ok, ", ".join(inst.expected_fitting)))

    scheme = incidence_scheme(phi)
    chart_list = charts(scheme)
    by_var = {c.chart_var: c for c in chart_list}

    for var, quoted in inst.quoted_charts:
        ok = quoted_chart_matches(by_var[var], quoted)
        checks.append(CheckResult(f"quoted-chart-{var}", ok, quoted))
    for var in inst.smooth_charts:
        ok = is_smooth(by_var[var].ideal)
        checks.append(CheckResult(f"smooth-chart-{var}", ok))

    certs = [certify_rational(c) for c in chart_list]
    cover = chart_cover_certificate(phi, scheme, chart_list, certs, report)
    for var, kind in inst.expected_kinds:
        got = certs[list(by_var).index(var)].kind
        checks.append(CheckResult(f"certificate-kind-{var}", got == kind, f"expected {kind}, got {got}"))

    checks.append(CheckResult("certificate-complete", cover.complete))
    valid, problems = validate_with_reasons(cover)
    if inst.expected_fail:
        # the validator must surface the same incompleteness it certifies
        checks.append(CheckResult("validator", not valid and not cover.complete, "; ".join(problems)))
    else:
        checks.append(CheckResult("validator", valid, "; ".join(problems)))

    passed = _passed(checks, inst.expected_fail, cover.complete)
    return InstanceResult(inst.id, passed, inst.expected_fail, checks, cover.to_json(), inst.note)


def _passed(checks, expected_fail, complete):
    if expected_fail:
        # control passes exactly when certification honestly failed
        return not complete
    return all(c.ok for c in checks)


def _run_transport_instance(inst: CatalogInstance) -> InstanceResult:
    ring = inst.ring
    phi = PolyMatrix.from_strings(ring, inst.matrix)
    checks = []

    report = blowup_criterion(phi)
    checks.append(CheckResult("blowup-criterion", report.ok, report.identification))
    _check_codims(checks, report, inst.expected_codims)

    fitting = fitting_ideal(phi)
    q = fitting.generators[2]   # the minor deleting the last column: x*b - y*a
    try:
        sub, target_name = normalize_binary_quadratic(q)
        checks.append(CheckResult("quadratic-form-normalized", True, f"{q} -> {target_name}"))
    except NormalizationError as exc:
        checks.append(CheckResult("quadratic-form-normalized", False, str(exc)))
        return InstanceResult(inst.id, False, inst.expected_fail, checks, None, inst.note)

    target = PolyMatrix.from_strings(ring, _TARGET_ROWS[target_name])
    moved = Ideal(ring, [substitute(g, sub) for g in fitting.generators])
    transported = ideal_equal(moved, fitting_ideal(target))
    checks.append(CheckResult("ideal-transport-exact", transported, f"target {target_name}"))

    cover = _chart_cover(target)
    node = Certificate(
        FORM_MATCH,
        ring.names,
        tuple(str(g) for g in fitting.generators),
        {
            "form": "quadratic_cone_ideal",
            "base_ring": list(ring.variables),
            "source_matrix": [list(r) for r in inst.matrix],
            "target_matrix": [list(r) for r in _TARGET_ROWS[target_name]],
            "target": target_name,
            "substitution": {k: str(v) for k, v in sub.items()},
        },
        children=(cover,),
    )
    checks.append(CheckResult("certificate-complete", node.complete))
    valid, problems = validate_with_reasons(node)
    checks.append(CheckResult("validator", valid, "; ".join(problems)))

    passed = _passed(checks, inst.expected_fail, node.complete)
    return InstanceResult(inst.id, passed, inst.expected_fail, checks, node.to_json(), inst.note)


def _run_degeneration_instance(inst: CatalogInstance) -> InstanceResult:
    ring = inst.ring
    origin = PolyMatrix.from_strings(ring, inst.matrix)
    checks = []

    report = blowup_criterion(origin)
    checks.append(CheckResult("blowup-criterion", report.ok, report.identification))
    _check_codims(checks, report, inst.expected_codims)

    # unwind the chain: families and witnesses share the transcribed data
    matrices = [origin]
    families = []
    ok_chain = True
    for stage in inst.stages:
        current = matrices[-1]
        try:
            family = build_family(current, stage.weights, stage.row_clearings, stage.col_clearings)
        except DegenLociError as exc:
            checks.append(CheckResult(f"family[{stage.label}]", False, str(exc)))
            ok_chain = False
            break
        witness = EquivalenceWitness(
            variable_weights=stage.weights,
            row_scales=stage.row_clearings,
            col_scales=stage.col_clearings,
        )
        iso = verify_isotriviality(family, witness)
        flat = verify_flat_degeneration(family)
        inner_report = blowup_criterion(family.special_fiber)
        checks.append(
            CheckResult(
                f"degeneration[{stage.label}]",
                iso and flat.ok and inner_report.ok,
                f"isotrivial={iso} flat={flat.ok} fiber-blowup={inner_report.ok}",
            )
        )
        ok_chain = ok_chain and iso and flat.ok and inner_report.ok
        families.append((family, witness))
        matrices.append(family.special_fiber)

    limit = matrices[-1]
    if inst.limit_matrix:
        expected_limit = PolyMatrix.from_strings(ring, inst.limit_matrix)
        checks.append(CheckResult("limit-matrix-exact", limit == expected_limit, repr(limit)))

    scheme = incidence_scheme(limit)
    chart_list = charts(scheme)
    by_var = {c.chart_var: c for c in chart_list}
    for var, quoted in inst.quoted_charts:
        checks.append(CheckResult(f"quoted-chart-{var}", quoted_chart_matches(by_var[var], quoted), quoted))
    for var in inst.smooth_charts:
        checks.append(CheckResult(f"smooth-chart-{var}", is_smooth(by_var[var].ideal)))

    certs = [certify_rational(c) for c in chart_list]
    for var, kind in inst.expected_kinds:
        got = certs[list(by_var).index(var)].kind
        checks.append(CheckResult(f"certificate-kind-{var}", got == kind, f"expected {kind}, got {got}"))

    cert = chart_cover_certificate(limit, scheme, chart_list, certs, blowup_criterion(limit))
    if ok_chain:
        for family, witness in reversed(families):
            cert = elkik_node(family, witness, cert)
    checks.append(CheckResult("certificate-complete", cert.complete))
    valid, problems = validate_with_reasons(cert)
    checks.append(CheckResult("validator", valid, "; ".join(problems)))

    passed = _passed(checks, inst.expected_fail, cert.complete) and ok_chain
    return InstanceResult(inst.id, passed, inst.expected_fail, checks, cert.to_json(), inst.note)


def _run_ideal_check_instance(inst: CatalogInstance) -> InstanceResult:
    ring = inst.ring
    phi = PolyMatrix.from_strings(ring, inst.matrix)
    checks = []
    report = blowup_criterion(phi)
    checks.append(CheckResult("blowup-criterion", report.ok, report.identification))
    _check_codims(checks, report, inst.expected_codims)
    expected = Ideal(ring, [parse_poly(s, ring) for s in inst.expected_fitting])
    ok = ideal_equal(fitting_ideal(phi), expected)
    checks.append(CheckResult("fitting-ideal-exact", ok, ", ".join(inst.expected_fitting)))
    passed = all(c.ok for c in checks)
    return InstanceResult(inst.id, passed, inst.expected_fail, checks, None, inst.note)


_ROUTES = {
    "chartwise": _run_matrix_instance,
    "quadratic_transport": _run_transport_instance,
    "degeneration": _run_degeneration_instance,
    "ideal_check": _run_ideal_check_instance,
}


def run_instance(inst: CatalogInstance) -> InstanceResult:
    return _ROUTES[inst.route](inst)


# -- pipelines ------------------------------------------------------------------


def verify_genus2(d_max: int, include_control: bool = True) -> PipelineReport:
    """Blow-up, charts, and certificates for the models (x^d, y), d = 1..d_max."""
    report = PipelineReport(title="genus2", seed=0)
    if d_max < 1:
        return report
    for d in range(1, d_max + 1):
        report.results.append(run_instance(catalog.genus2_instance(d)))
    if include_control:
        report.results.append(run_instance(catalog.genus2_mutation()))
    return report


def verify_genus3(instance_id: str | None = None, seed: int = 2024) -> PipelineReport:
    """The full genus-3 instance catalog (or a single instance by id)."""
    report = PipelineReport(
        title="genus3",
        seed=seed,
        gaps=(
            "the hyperelliptic genus-3 local models are not covered by the catalog "
            "(no certified route exists for them)",
        ),
    )
    for inst in catalog.genus3_instances(seed):
        if instance_id is not None and inst.id != instance_id:
            continue
        report.results.append(run_instance(inst))
    if instance_id is not None and not report.results:
        raise KeyError(f"unknown instance id {instance_id!r}")
    return report
