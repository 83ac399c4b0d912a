import json
from fractions import Fraction

import pytest

from degenloci.certify import (
    Certificate,
    certify_rational,
    chart_cover_certificate,
    expand_three_term_form,
    is_smooth,
    jacobian_ideal,
    match_binomial_form,
    match_three_term_form,
    singular_locus_dimension,
    toric_normal,
    unknown_leaf,
    validate_certificate,
    validate_with_reasons,
)
from degenloci.degeneracy import PolyMatrix, blowup_criterion, charts, incidence_scheme
from degenloci.errors import UnsupportedShapeError
from degenloci.groebner import Ideal, ideal_equal
from degenloci.poly import Ring, parse_poly

R3 = Ring(("x", "y", "z"))


def ideal(*gens, ring=R3):
    return Ideal(ring, [parse_poly(s, ring) for s in gens])


def test_jacobian_ideal_quadric_cone():
    J = jacobian_ideal(ideal("x*y - z^2"))
    assert ideal_equal(J, ideal("x", "y", "z"))


def test_jacobian_ideal_smooth_hyperplane():
    assert jacobian_ideal(ideal("x")).is_unit()


def test_jacobian_requires_complete_intersection():
    with pytest.raises(UnsupportedShapeError):
        jacobian_ideal(ideal("x*y", "x*z", "y*z"))  # codim 2 with 3 generators


def test_is_smooth_examples():
    R5 = Ring(("x", "y", "z", "alpha", "gamma"))
    assert is_smooth(Ideal(R5, [parse_poly("z^2*alpha + z + x*gamma", R5)]))
    assert is_smooth(Ideal(R5, [parse_poly("y^2*alpha + z + x*gamma", R5)]))
    assert not is_smooth(ideal("x*y - z^2"))
    assert is_smooth(Ideal(R3, []))


def test_match_binomial_examples():
    R4 = Ring(("x", "y", "z", "w"))
    m = match_binomial_form(parse_poly("x*y - z*w", R4))
    assert (m.u, m.v) == ("x", "y") and dict(m.m.exponents) == {"z": 1, "w": 1}
    Rt = Ring(("x", "y", "t"))
    m2 = match_binomial_form(parse_poly("x^3 - y*t", Rt))
    assert (m2.u, m2.v) == ("y", "t") and dict(m2.m.exponents) == {"x": 3}
    assert match_binomial_form(parse_poly("x*y - z^2 - w^3", R4)) is None
    assert match_binomial_form(parse_poly("x*y", R4)) is None


def test_toric_normal_type_a_sweep():
    for d in range(1, 9):
        ring = Ring(("u", "v", "z"))
        assert toric_normal(parse_poly(f"u*v - z^{d}", ring))


def test_toric_normal_quadric_cone_4vars():
    ring = Ring(("u", "v", "z", "w"))
    f = parse_poly("u*v - z*w", ring)
    assert toric_normal(f)
    assert singular_locus_dimension(f) == 0  # the origin inside a 3-fold


def test_toric_normal_requires_binomial():
    with pytest.raises(UnsupportedShapeError):
        toric_normal(parse_poly("x + y + z", R3))


def test_match_three_term_form_chart_examples():
    ring = Ring(("x", "y", "z", "alpha", "beta"))
    m = match_three_term_form(parse_poly("y*beta - (y*alpha + z*beta)*alpha", ring))
    assert (m.u, m.v, m.d) == ("y", "beta", 1)
    assert dict(m.m1.exponents) == {"alpha": 2} and m.m1.coeff == 1
    assert dict(m.m2.exponents) == {"z": 1, "alpha": 1} and m.m2.coeff == 1
    assert expand_three_term_form(m, ring) == parse_poly("y*beta - (y*alpha + z*beta)*alpha", ring)

    ring2 = Ring(("x", "y", "z", "beta", "gamma"))
    m2 = match_three_term_form(parse_poly("z^2 + z*beta - y*beta*gamma", ring2))
    assert (m2.u, m2.v, m2.d) == ("beta", "z", 2)
    assert dict(m2.m1.exponents) == {"y": 1, "gamma": 1} and m2.m1.coeff == 1
    assert m2.m2.exponents == () and m2.m2.coeff == -1

    assert match_three_term_form(parse_poly("x^2 + y^2", ring2)) is None


def test_match_three_term_form_soundness_on_variants():
    ring = Ring(("u", "v", "a", "b"))
    for text in ("u*v - u*a^2 - v^3*b", "2*u*v + u*a - b", "u*v - 3*u*a*b - 5*v^2*a"):
        f = parse_poly(text, ring)
        m = match_three_term_form(f)
        assert m is not None and expand_three_term_form(m, ring) == f


def test_certify_normal_toric_chart():
    # the interesting chart of the second quadratic-cone matrix
    ring = Ring(("y", "z", "beta", "gamma"))
    cert = certify_rational(Ideal(ring, [parse_poly("y*beta^2 - z*gamma", ring)]))
    assert cert.kind == "normal_toric" and cert.complete
    assert validate_certificate(cert)


def test_certify_type_a_with_degree():
    ring = Ring(("x", "y", "beta"))
    cert = certify_rational(Ideal(ring, [parse_poly("x^3 + y*beta", ring)]))
    assert cert.kind == "normal_toric" and cert.data["type_a_degree"] == 3


def test_certify_three_term_chain_structure():
    ring = Ring(("y", "z", "alpha", "beta"))
    f = parse_poly("y*beta - y*alpha^2 - z*alpha*beta", ring)
    cert = certify_rational(Ideal(ring, [f]))
    assert cert.kind == "form_match" and cert.complete
    elkik = cert.children[0]
    assert elkik.kind == "elkik" and elkik.axiom["name"] == "elkik"
    assert elkik.data["isotriviality_ok"] and not elkik.children[0].kind == "unknown"
    assert validate_certificate(cert)


def test_certify_smooth_and_unknown():
    ring = Ring(("x", "y", "z", "w"))
    assert certify_rational(Ideal(ring, [parse_poly("x + y^5", ring)])).kind == "smooth"
    bad = certify_rational(Ideal(ring, [parse_poly("x*w - y^2 + z^3 + w^5", ring)]))
    assert bad.kind == "unknown" and not bad.complete


def test_certify_budget():
    ring = Ring(("y", "z", "alpha", "beta"))
    f = parse_poly("y*beta - y*alpha^2 - z*alpha*beta", ring)
    cert = certify_rational(Ideal(ring, [f]), budget=0)
    assert cert.kind == "unknown" and cert.data["reason"] == "budget"


def test_chart_cover_assembly_and_validation():
    mu = PolyMatrix.from_strings(R3, [["x", "y", "0"], ["y", "z", "x"]])
    scheme = incidence_scheme(mu)
    chart_list = charts(scheme)
    certs = [certify_rational(c) for c in chart_list]
    cover = chart_cover_certificate(mu, scheme, chart_list, certs, blowup_criterion(mu))
    assert cover.complete
    ok, problems = validate_with_reasons(cover)
    assert ok, problems
    # serialization round trip stays valid
    payload = json.loads(cover.dumps())
    assert payload["kind"] == "chart_cover" and len(payload["children"]) == 3


def test_validator_catches_tampering():
    ring = Ring(("u", "v", "z"))
    good = certify_rational(Ideal(ring, [parse_poly("u*v - z^2", ring)]))
    assert good.kind == "normal_toric" and validate_certificate(good)
    tampered = Certificate(
        kind="normal_toric",
        ring_names=good.ring_names,
        subject=("u*v - z^2 - u^2",),  # not a binomial at all
        data=good.data,
        axiom=good.axiom,
    )
    ok, problems = validate_with_reasons(tampered)
    assert not ok and problems


def test_validator_flags_unknown():
    leaf = unknown_leaf(ideal("x*y - z^2"), "test")
    ok, problems = validate_with_reasons(leaf)
    assert not ok and "unknown" in problems[0]
