import random
from fractions import Fraction

import pytest

from degenloci.degeneracy import (
    PolyMatrix,
    blowup_criterion,
    chart,
    charts,
    fitting_ideal,
    incidence_scheme,
    kernel_vector_at_point,
    rank_at_point,
    rank_stratum_ideal,
)
from degenloci.errors import DegenerateMatrixError
from degenloci.groebner import Ideal, dimension, ideal_equal
from degenloci.poly import Ring, parse_poly

R3 = Ring(("x", "y", "z"))
R2 = Ring(("x", "y"))

PHI1 = PolyMatrix.from_strings(R3, [["x", "y", "0"], ["0", "y", "z"]])
PHI2 = PolyMatrix.from_strings(R3, [["x", "y", "0"], ["0", "x", "z"]])
MU = PolyMatrix.from_strings(R3, [["x", "y", "0"], ["y", "z", "x"]])


def expect_ideal(I, *gens, ring=R3):
    assert ideal_equal(I, Ideal(ring, [parse_poly(s, ring) for s in gens]))


def test_fitting_ideal_paper_values():
    expect_ideal(fitting_ideal(PHI1), "x*y", "x*z", "y*z")
    expect_ideal(fitting_ideal(PHI2), "x^2", "x*z", "y*z")
    expect_ideal(fitting_ideal(MU), "x*z - y^2", "x^2", "x*y")


def test_fitting_generators_listed_by_deleted_column():
    gens = fitting_ideal(MU).generators
    assert [str(g) for g in gens] == ["x*y", "-x^2", "-y^2 + x*z"]


def test_degenerate_matrix_error():
    zero_row = PolyMatrix.from_strings(R2, [["0", "0"]])
    with pytest.raises(DegenerateMatrixError):
        fitting_ideal(zero_row)


def test_incidence_equations():
    X = incidence_scheme(MU)
    assert [str(e) for e in X.equations] == ["x*alpha + y*beta", "y*alpha + z*beta + x*gamma"]
    X2 = incidence_scheme(PHI2)
    assert [str(e) for e in X2.equations] == ["x*alpha + y*beta", "x*beta + z*gamma"]
    model = PolyMatrix.from_strings(R2, [["x^3", "y"]])
    Xg = incidence_scheme(model)
    assert [str(e) for e in Xg.equations] == ["x^3*alpha + y*beta"]


def test_chart_solves_unit_linear_variables():
    X2 = incidence_scheme(PHI2)
    c = chart(X2, 0)
    assert [str(g) for g in c.generators] == ["-y*beta^2 + z*gamma"]
    assert len(c.chain) == 1 and c.chain[0][0] == "x" and str(c.chain[0][1]) == "-y*beta"

    model = incidence_scheme(PolyMatrix.from_strings(R2, [["x^3", "y"]]))
    beta_chart = chart(model, 1)
    assert beta_chart.generators == () and beta_chart.chain[0][0] == "y"
    alpha_chart = chart(model, 0)
    assert [str(g) for g in alpha_chart.generators] == ["x^3 + y*beta"]

    cm = chart(incidence_scheme(MU), 2)
    target = parse_poly("y*beta - (y*alpha + z*beta)*alpha", cm.ring)
    got = cm.generators[0]
    assert got == target or got == -target


def test_chart_initial_gens_count():
    for m in (PHI1, PHI2, MU):
        X = incidence_scheme(m)
        for j in range(m.cols):
            assert len(chart(X, j).initial_gens) == m.rows


def test_rank_stratum_ideals():
    expect_ideal(rank_stratum_ideal(PHI1, 1), "x*y", "x*z", "y*z")
    expect_ideal(rank_stratum_ideal(PHI1, 2), "x", "y", "z")
    model = PolyMatrix.from_strings(R2, [["x^4", "y"]])
    expect_ideal(rank_stratum_ideal(model, 1), "x^4", "y", ring=R2)
    with pytest.raises(ValueError):
        rank_stratum_ideal(PHI1, 3)


def test_blowup_criterion_paper_matrices():
    for phi in (PHI1, PHI2, MU):
        report = blowup_criterion(phi)
        assert report.ok and report.strata == ((1, 2), (2, 3))
    for d in range(1, 7):
        model = PolyMatrix.from_strings(R2, [[f"x^{d}", "y"]])
        report = blowup_criterion(model)
        assert report.ok and report.strata == ((1, 2),)


def test_blowup_criterion_failure():
    bad = PolyMatrix.from_strings(R3, [["x", "y", "0"], ["0", "y", "0"]])
    report = blowup_criterion(bad)
    assert not report.ok
    assert dict(report.strata)[1] == 1


def test_fitting_codimension_at_most_two():
    # every component of the degeneracy locus has codimension <= 2
    for phi in (PHI1, PHI2, MU):
        I = fitting_ideal(phi)
        assert len(R3.variables) - dimension(I) <= 2


def test_chart_dimensions_equal_base_dimension():
    for phi in (PHI1, PHI2, MU):
        if not blowup_criterion(phi).ok:
            continue
        for c in charts(incidence_scheme(phi)):
            ambient = len(c.ring.variables)
            gens = [g for g in c.generators]
            assert dimension(Ideal(c.ring, gens)) == 3


def test_kernel_consistency_at_random_points():
    rng = random.Random(41)
    for phi in (PHI1, PHI2, MU):
        X = incidence_scheme(phi)
        hits = 0
        while hits < 10:
            point = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for v in R3.variables}
            if rank_at_point(phi, point) != phi.rows:
                continue
            hits += 1
            kernel = kernel_vector_at_point(phi, point)
            assert any(kernel)
            full = dict(point)
            full.update({name: k for name, k in zip(X.proj_vars, kernel)})
            for eq in X.equations:
                assert eq.evaluate(full) == 0


def test_membership_matches_kernel_existence():
    # a rational point lies in the degeneracy locus iff the kernel jumps
    rng = random.Random(17)
    for phi in (PHI1, PHI2, MU):
        I = fitting_ideal(phi)
        for _ in range(25):
            point = {v: Fraction(rng.randint(-3, 3)) for v in R3.variables}
            fvals = [g.evaluate(point) for g in I.generators]
            in_locus = all(v == 0 for v in fvals)
            assert in_locus == (rank_at_point(phi, point) < phi.rows)
