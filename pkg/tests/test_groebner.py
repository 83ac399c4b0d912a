import itertools
import random
from fractions import Fraction

import pytest

from degenloci.errors import BudgetError, RingMismatchError
from degenloci.groebner import (
    DEGREVLEX,
    LEX,
    Ideal,
    MonomialOrder,
    buchberger_certified,
    dimension,
    eliminate,
    groebner_basis,
    ideal_equal,
    normal_form,
)
from degenloci.poly import Poly, Ring, parse_poly

R3 = Ring(("x", "y", "z"))


def ideal(*gens, ring=R3, order=DEGREVLEX):
    return Ideal(ring, [parse_poly(s, ring) for s in gens], order)


def test_monomial_ideal_is_its_own_reduced_basis():
    I = ideal("x*y", "x*z", "y*z")
    assert set(map(str, I.basis())) == {"x*y", "x*z", "y*z"}
    assert buchberger_certified(I)


def test_principal_ideal():
    assert [str(g) for g in ideal("x", order=LEX).basis()] == ["x"]


def test_linear_algebra_case():
    I = ideal("x + y", "x - y")
    assert set(map(str, I.basis())) == {"x", "y"}


def test_cached_basis_write_once():
    I = ideal("x*y - 1", "x^2")
    assert I.cached_basis is None
    first = groebner_basis(I).cached_basis
    assert first is I.cached_basis and first is not None


def test_normal_form_examples():
    I = ideal("x*y", "x*z", "y*z")
    assert normal_form(parse_poly("x*y*z", R3), I).is_zero()
    assert str(normal_form(parse_poly("x^2", R3), I)) == "x^2"
    assert normal_form(Poly.zero(R3), I).is_zero()


def test_normal_form_idempotent():
    rng = random.Random(2)
    I = ideal("x^2 - y", "y^2 - z")
    for _ in range(40):
        f = _random_poly(rng)
        r = normal_form(f, I)
        assert normal_form(r, I) == r


def _random_poly(rng, ring=R3):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        exps = tuple(rng.randint(0, 3) for _ in range(ring.nslots))
        terms[exps] = Fraction(rng.randint(-5, 5))
    return Poly(ring, terms)


def test_ideal_equal_examples():
    assert ideal_equal(ideal("x*y", "x*z", "y*z"), ideal("y*z", "x*y", "x*z"))
    assert not ideal_equal(ideal("x^2", "x*z", "y*z"), ideal("x*y", "x*z", "y*z"))
    assert ideal_equal(ideal("x", "y"), ideal("x + y", "x - y"))


def test_ideal_equal_ring_mismatch():
    other = Ring(("x", "y"))
    with pytest.raises(RingMismatchError):
        ideal_equal(ideal("x"), Ideal(other, [parse_poly("x", other)]))


def test_dimension_examples():
    assert dimension(ideal("x*y", "x*z", "y*z")) == 1
    assert dimension(ideal("1")) == -1
    assert dimension(Ideal(R3, [])) == 3
    assert dimension(ideal("x")) == 2
    assert dimension(ideal("x", "y", "z")) == 0


def test_dimension_order_invariant_on_catalog_ideals():
    catalog = [
        ("x*y", "x*z", "y*z"),
        ("x^2", "x*z", "y*z"),
        ("x*z - y^2", "x^2", "x*y"),
        ("x*y", "x^2", "y*z"),
        ("x*(x + z^3)", "x*y", "(x + z^3)*z + y^3"),
    ]
    for gens in catalog:
        assert dimension(ideal(*gens, order=DEGREVLEX)) == dimension(ideal(*gens, order=LEX))


def test_eliminate_examples():
    ring = Ring(("x", "y", "z", "beta", "gamma"))
    I = Ideal(ring, [parse_poly("x + y*beta", ring), parse_poly("x*beta + z*gamma", ring)])
    out = eliminate(I, {"x"})
    assert [str(g) for g in out.basis()] == ["y*beta^2 - z*gamma"]

    ring2 = Ring(("x", "y"))
    J = Ideal(ring2, [parse_poly("x - y", ring2)])
    assert eliminate(J, {"x"}).is_zero()

    ring3 = Ring(("x", "y", "z", "alpha", "beta"))
    K = Ideal(
        ring3,
        [parse_poly("x*alpha + y*beta", ring3), parse_poly("y*alpha + z*beta + x", ring3)],
    )
    got = eliminate(K, {"x"}).basis()
    target = parse_poly("y*beta - (y*alpha + z*beta)*alpha", Ring(("y", "z", "alpha", "beta")))
    assert len(got) == 1 and (got[0] == target or got[0] == -target or got[0] == target.scale(-1))


def test_spoly_postcheck_on_computed_bases():
    cases = [
        ("x^2 + 2*x*y^2", "x*y + 2*y^3 - 1"),
        ("x - z^2", "y - z^3"),
        ("x^3 - 2*x*y", "x^2*y + x - 2*y^2"),
        ("x*z - y^2", "x^2", "x*y"),
    ]
    for gens in cases:
        for order in (DEGREVLEX, LEX):
            I = ideal(*gens, order=order)
            assert buchberger_certified(I), gens


def test_membership_agrees_with_cofactor_witnesses_on_monomial_ideals():
    rng = random.Random(9)
    for _ in range(40):
        gens = []
        for _ in range(rng.randint(1, 4)):
            exps = {v: rng.randint(0, 2) for v in ("x", "y", "z")}
            if any(exps.values()):
                gens.append(Poly.monomial(R3, exps))
        if not gens:
            continue
        I = Ideal(R3, gens)
        # explicit member: random cofactor combination
        f = Poly.zero(R3)
        for g in gens:
            f = f + g * _random_poly(rng)
        assert normal_form(f, I).is_zero()
        # a random monomial is a member iff some generator divides it
        exps = tuple(rng.randint(0, 3) for _ in range(3))
        mono = Poly(R3, {exps: Fraction(1)})
        divisible = any(
            all(ge <= me for ge, me in zip(next(iter(g.terms)), exps)) for g in gens
        )
        assert normal_form(mono, I).is_zero() == divisible


def test_budget_error():
    I = Ideal(R3, [parse_poly("x^4*y + z", R3), parse_poly("y^4*z + x", R3)], budget=3)
    with pytest.raises(BudgetError):
        I.basis()


def test_block_order_validation():
    with pytest.raises(ValueError):
        MonomialOrder("block", block=0)
    with pytest.raises(ValueError):
        MonomialOrder("weird")
