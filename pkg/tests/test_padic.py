from fractions import Fraction

import pytest

from degenloci.errors import ConfigError
from degenloci.padic import (
    DensityProfile,
    PadicConfig,
    boundedness_verdict,
    estimate_pushforward,
    exact_monomial_density,
    exact_quadric_density,
    exact_xy_zero_density,
    quadric_cone_counts,
)
from degenloci.poly import Ring, parse_poly, substitute

R1 = Ring(("x",))
R2 = Ring(("x", "y"))
R3 = Ring(("x", "y", "z"))

CFG = PadicConfig(p=5, K=8, N=10 ** 5, seed=11)


def xy():
    return parse_poly("x*y", R2)


def cone():
    return parse_poly("x*y - z^2", R3)


def test_config_validation():
    with pytest.raises(ConfigError):
        PadicConfig(p=4, K=8, N=10 ** 5)
    with pytest.raises(ConfigError):
        PadicConfig(p=5, K=0, N=10 ** 5)
    with pytest.raises(ConfigError):
        PadicConfig(p=5, K=8, N=10)


def test_exact_monomial_density_values():
    for p in (3, 5, 7):
        for nu in range(5):
            assert exact_monomial_density((1, 1), p, nu) == Fraction(p - 1, p) * (nu + 1)
    assert exact_monomial_density((1,), 5, 3) == 1
    assert exact_monomial_density((2,), 5, 1) == 0
    assert exact_monomial_density((2,), 5, 2) == 10
    assert exact_monomial_density((2,), 5, 4) == 50
    # p = 2 unit-group structure differs
    assert exact_monomial_density((2,), 2, 2) == 8
    with pytest.raises(ValueError):
        exact_monomial_density((0, 1), 5, 1)


def test_quadric_counts_and_density():
    for p in (2, 3, 5):
        assert quadric_cone_counts(p, 1) == p ** 2
        # brute-force check at level 2
        brute = sum(
            1
            for x in range(p ** 2)
            for y in range(p ** 2)
            for z in range(p ** 2)
            if (x * y - z * z) % p ** 2 == 0
        )
        assert quadric_cone_counts(p, 2) == brute
    seq = [exact_quadric_density(5, k) for k in range(8)]
    assert seq[0] == 1 and seq[2] == Fraction(29, 25)
    assert max(seq) < Fraction(6, 5)  # bounded by the limit (1 + 1/p)


def test_monte_carlo_matches_monomial_oracle():
    prof = estimate_pushforward(xy(), CFG, centers=(0, 1, 5, 25, 125, 625))
    for nu, center in enumerate((1, 5, 25, 125, 625)):
        k = nu + 1
        exact = float(exact_monomial_density((1, 1), 5, nu, level=k))
        assert abs(prof.density(center, k) - exact) <= 5 * prof.stderr(center, k)


def test_monte_carlo_matches_square_map_oracle():
    prof = estimate_pushforward(parse_poly("x^2", R1), CFG, centers=(5, 25))
    assert prof.density(5, 3) == 0.0  # odd valuation is unreachable
    exact = float(exact_monomial_density((2,), 5, 2, level=4))
    assert abs(prof.density(25, 4) - exact) <= 5 * prof.stderr(25, 4) + 1e-9


def test_monte_carlo_matches_oracle_on_mixed_monomials():
    # x*y^2 (gcd 1) and x^2*y^2 (gcd 2, nontrivial unit-group index)
    cases = [
        (parse_poly("x*y^2", R2), (1, 2), (1, 5, 25)),
        (parse_poly("x^2*y^2", R2), (2, 2), (1, 25)),
    ]
    for f, exps, targets in cases:
        prof = estimate_pushforward(f, CFG, centers=targets)
        for center in targets:
            nu = 0
            c = center
            while c % 5 == 0:
                c //= 5
                nu += 1
            level = nu + 2
            exact = float(exact_monomial_density(exps, 5, nu, level=level))
            got = prof.density(center, level)
            assert abs(got - exact) <= 5 * prof.stderr(center, level) + 1e-9, (
                exps, center, got, exact,
            )


def test_coordinate_projection_is_haar():
    prof = estimate_pushforward(parse_poly("x", R1), CFG, centers=(0, 1, 5))
    for c in (0, 1, 5):
        for k in (1, 3, 5):
            assert abs(prof.density(c, k) - 1.0) <= 5 * prof.stderr(c, k)
    verdict = boundedness_verdict(prof, center=0)
    assert verdict["bounded"] and abs(verdict["sup_estimate"] - 1.0) < 0.05


def test_dichotomy_for_three_primes():
    for p in (3, 5, 7):
        cfg = PadicConfig(p=p, K=8, N=10 ** 5, seed=3)
        diverging = boundedness_verdict(estimate_pushforward(xy(), cfg), center=0)
        bounded = boundedness_verdict(estimate_pushforward(cone(), cfg), center=0)
        assert not diverging["bounded"]
        assert bounded["bounded"]


def test_sup_estimate_against_recursion_oracle():
    prof = estimate_pushforward(cone(), CFG, centers=(0,))
    verdict = boundedness_verdict(prof, center=0)
    oracle = max(float(exact_quadric_density(5, k)) for k in verdict["sup_levels"])
    assert abs(verdict["sup_estimate"] - oracle) / oracle < 0.1


def test_normalization_mass_is_exact():
    prof = estimate_pushforward(xy(), CFG, centers=(0,))
    for k, hist in prof.histograms.items():
        assert sum(hist) == CFG.N


def test_haar_invariance_under_unit_affine_change():
    change = {"x": parse_poly("x + 2*y + 3", R2), "y": parse_poly("3*x + 7*y + 1", R2)}
    f2 = substitute(xy(), change)  # determinant 1 change of variables
    p1 = estimate_pushforward(xy(), CFG, centers=(0,))
    p2 = estimate_pushforward(f2, CFG, centers=(0,))
    for k in p1.levels[:4]:
        tol = 4 * (p1.stderr(0, k) + p2.stderr(0, k))
        assert abs(p1.density(0, k) - p2.density(0, k)) <= tol


def test_bitwise_determinism():
    a = estimate_pushforward(xy(), CFG, centers=(0, 1))
    b = estimate_pushforward(xy(), CFG, centers=(0, 1))
    assert a.hits == b.hits and a.histograms == b.histograms


def test_level_out_of_range_errors():
    with pytest.raises(ConfigError):
        estimate_pushforward(xy(), CFG, centers=(0,), levels=(1, 99))
    prof = estimate_pushforward(xy(), CFG, centers=(0,), levels=(1, 2, 3))
    with pytest.raises(ConfigError):
        prof.density(0, 5)


def test_verdict_preconditions():
    prof = estimate_pushforward(xy(), CFG, centers=(0,), levels=(1, 2))
    with pytest.raises(ConfigError):
        boundedness_verdict(prof, center=0)


def test_profile_serialization():
    prof = estimate_pushforward(xy(), CFG, centers=(0, 1))
    payload = prof.to_json()
    assert payload["p"] == 5 and len(payload["estimates"]) == len(prof.levels) * 2
    csv = prof.to_csv()
    assert csv.splitlines()[0] == "center,level,hits,density,stderr"
