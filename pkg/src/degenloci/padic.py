"""Empirical p-adic pushforward densities at finite precision.

The p-adic integers are modeled at fixed precision p^K with uniform
sampling on (Z/p^K)^n; the pushforward density of Haar measure under a
polynomial map is read off ball counts around tracked centers at levels
k <= K-2 (the top levels are skipped to avoid boundary bias).  Sampling is
chunked through a counter-based PRNG (Philox) with one derived key per
chunk, so runs are reproducible bit for bit and independent of how chunks
are scheduled.

Two exact oracles accompany the Monte Carlo path: a finite-sum density for
monomial maps (with the unit-group bookkeeping that makes even targets of
ramified valuation exact) and the level-count recursion for the quadric
cone x*y - z^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError
from .poly import Poly

_CHUNK = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, int(math.isqrt(p)) + 1):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True)
class PadicConfig:
    """Sampling configuration: prime, precision exponent, sample count, seed."""

    p: int
    K: int
    N: int
    seed: int = 0

    def __post_init__(self):
        if not (_is_prime(self.p) and 2 <= self.p <= 100):
            raise ConfigError(f"p={self.p} must be a prime in 2..100")
        if not 1 <= self.K <= 12:
            raise ConfigError(f"K={self.K} must lie in 1..12")
        if self.N < 10 ** 4:
            raise ConfigError(f"N={self.N} must be at least 10^4")

    @property
    def modulus(self) -> int:
        return self.p ** self.K


@dataclass
class DensityProfile:
    """Per-level, per-center density estimates with standard errors.

    density[(center, k)] = p^k * (hits / N), the Haar density of the ball
    of radius p^-k around the center; mass[(k, residue)] records the full
    residue histogram at the coarse levels for normalization checks.
    """

    map_id: str
    p: int
    K: int
    N: int
    seed: int
    levels: tuple
    centers: tuple
    hits: dict = field(default_factory=dict)
    histograms: dict = field(default_factory=dict)

    def density(self, center: int, k: int) -> float:
        if k not in self.levels:
            raise ConfigError(f"level {k} was not tracked (levels {self.levels})")
        return self.p ** k * self.hits[(center, k)] / self.N

    def stderr(self, center: int, k: int) -> float:
        q = self.hits[(center, k)] / self.N
        return self.p ** k * math.sqrt(max(q * (1 - q), 1e-300) / self.N)

    def to_json(self):
        return {
            "map_id": self.map_id,
            "p": self.p,
            "K": self.K,
            "N": self.N,
            "seed": self.seed,
            "levels": list(self.levels),
            "centers": [int(c) for c in self.centers],
            "estimates": [
                {
                    "center": int(c),
                    "level": k,
                    "hits": self.hits[(c, k)],
                    "density": self.density(c, k),
                    "stderr": self.stderr(c, k),
                }
                for c in self.centers
                for k in self.levels
            ],
        }

    def to_csv(self):
        lines = ["center,level,hits,density,stderr"]
        for c in self.centers:
            for k in self.levels:
                lines.append(
                    f"{int(c)},{k},{self.hits[(c, k)]},"
                    f"{self.density(c, k):.10g},{self.stderr(c, k):.10g}"
                )
        return "\n".join(lines) + "\n"


def _compile_map(f):
    """Normalize the map input (Poly or list of one Poly, integer coefficients)."""
    if isinstance(f, (list, tuple)):
        if len(f) != 1:
            raise ConfigError("only scalar-valued maps (target dimension 1) are supported")
        f = f[0]
    if not isinstance(f, Poly):
        raise TypeError("the map must be a Poly")
    terms = []
    for exps, coeff in f.terms.items():
        if coeff.denominator != 1:
            raise ConfigError("map coefficients must be integers")
        terms.append((int(coeff), tuple(exps)))
    return f, sorted(terms, key=lambda t: t[1])


def _evaluate_terms(terms, samples, modulus):
    """Evaluate the compiled map on an (n_samples, n_vars) array, mod modulus."""
    total = np.zeros(samples.shape[0], dtype=samples.dtype)
    for coeff, exps in terms:
        acc = np.full(samples.shape[0], coeff % modulus, dtype=samples.dtype)
        for var_index, e in enumerate(exps):
            col = samples[:, var_index]
            for _ in range(e):
                acc = (acc * col) % modulus
        total = (total + acc) % modulus
    return total


def estimate_pushforward(f, cfg: PadicConfig, centers=(0,), levels=None) -> DensityProfile:
    """Monte Carlo pushforward density profile of a scalar polynomial map.

    Samples x uniformly in (Z/p^K)^n, evaluates f(x) mod p^K, and
    accumulates ball counts per tracked center and level.  Deterministic
    given the seed.
    """
    f, terms = _compile_map(f)
    nvars = len(f.ring.variables)
    if f.ring.laurent:
        raise ConfigError("the map must be t-free")
    if levels is None:
        levels = tuple(range(1, max(cfg.K - 1, 2)))
    levels = tuple(sorted(set(int(k) for k in levels)))
    if any(k < 1 or k > cfg.K for k in levels):
        raise ConfigError(f"levels {levels} exceed the working precision K={cfg.K}")
    centers = tuple(int(c) % cfg.modulus for c in centers)

    modulus = cfg.modulus
    use_numpy = cfg.p ** (2 * cfg.K) < 2 ** 62
    hist_levels = [k for k in (1, 2) if k in levels and cfg.p ** k <= 10 ** 4]

    hits = {(c, k): 0 for c in centers for k in levels}
    histograms = {k: np.zeros(cfg.p ** k, dtype=np.int64) for k in hist_levels}

    remaining = cfg.N
    chunk_index = 0
    while remaining > 0:
        size = min(_CHUNK, remaining)
        gen = np.random.Generator(
            np.random.Philox(key=np.array([cfg.seed, chunk_index], dtype=np.uint64))
        )
        if use_numpy:
            samples = gen.integers(0, modulus, size=(size, nvars), dtype=np.int64)
            values = _evaluate_terms(terms, samples, modulus)
        else:
            # digit-wise fallback for moduli whose squares overflow int64
            digits = gen.integers(0, cfg.p, size=(size, nvars, cfg.K), dtype=np.int64)
            weights = [cfg.p ** e for e in range(cfg.K)]
            sample_list = [
                [sum(int(d) * w for d, w in zip(digits[s, v], weights)) for v in range(nvars)]
                for s in range(size)
            ]
            values = np.array(
                [
                    sum(c * math.prod(pow(row[v], e, modulus) for v, e in enumerate(exps)) for c, exps in terms)
                    % modulus
                    for row in sample_list
                ],
                dtype=object,
            )
        for k in levels:
            pk = cfg.p ** k
            reduced = values % pk
            for c in centers:
                hits[(c, k)] += int(np.count_nonzero(reduced == c % pk))
            if k in histograms:
                histograms[k] += np.bincount(
                    reduced.astype(np.int64), minlength=pk
                )[:pk]
        remaining -= size
        chunk_index += 1

    return DensityProfile(
        map_id=str(f),
        p=cfg.p,
        K=cfg.K,
        N=cfg.N,
        seed=cfg.seed,
        levels=levels,
        centers=centers,
        hits=hits,
        histograms={k: v.tolist() for k, v in histograms.items()},
    )


# -- exact oracles ------------------------------------------------------------


def _power_torsion(d: int, p: int, m: int) -> int:
    """Number of solutions of w^d = 1 in the units mod p^m."""
    if m <= 0:
        return 1
    if p == 2:
        if m == 1:
            return 1
        if m == 2:
            return math.gcd(d, 2)
        return math.gcd(d, 2) * 2 ** min(_vp(d, 2), m - 2)
    return math.gcd(d, p - 1) * p ** min(_vp(d, p), m - 1)


def _vp(d: int, p: int) -> int:
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v


def exact_monomial_density(exponents, p: int, nu: int, level: int | None = None) -> Fraction:
    """Exact pushforward density of the monomial map prod x_i^{a_i} at t = p^nu.

    Summation over valuation tuples with sum a_i v_i = nu; conditioned on
    the tuple, the unit part is uniform on the image subgroup of the units,
    whose index the d-torsion count supplies (d = gcd of the exponents).
    With level=None the stabilized (infinite precision) value is returned;
    a finite level k > nu gives the ball reading at radius p^-k.
    """
    a = [int(e) for e in exponents]
    if any(e < 1 for e in a):
        raise ValueError("all exponents must be >= 1")
    n = len(a)
    d = math.gcd(*a) if n > 1 else a[0]
    if level is None:
        m = max(_vp(d, p) + 2, 3)  # any m with min(v_p(d), m-1) = v_p(d) if p odd; +2 covers p=2
    else:
        if level <= nu:
            raise ValueError("the reading level must exceed the target valuation")
        m = level - nu
    torsion = _power_torsion(d, p, m)

    total = Fraction(0)
    one_minus = Fraction(p - 1, p)

    def tuples(i, rest):
        if i == n - 1:
            if rest % a[i] == 0:
                yield (rest // a[i],)
            return
        for v in range(rest // a[i] + 1):
            for tail in tuples(i + 1, rest - a[i] * v):
                yield (v,) + tail

    # per valuation tuple: unit-size factors (1-1/p) p^{-v_i} on each
    # coordinate, the image ball mass T / phi(p^m), and the p^k scaling
    # collapse to (1-1/p)^{n-1} p^{nu - sum v} T
    for vs in tuples(0, nu):
        total += one_minus ** (n - 1) * Fraction(p) ** (nu - sum(vs)) * torsion
    return total


def quadric_cone_counts(p: int, k: int) -> int:
    """Number of solutions of x*y = z^2 in (Z/p^k)^3, by the peeling recursion.

    Smooth mod-p points (all p^2 - 1 nonzero solutions) lift freely; the
    points over (0,0,0) rescale to the same equation two levels down.
    """
    if k == 0:
        return 1
    if k == 1:
        return p ** 2
    return (p ** 2 - 1) * p ** (2 * (k - 1)) + p ** 3 * quadric_cone_counts(p, k - 2)


def exact_quadric_density(p: int, k: int) -> Fraction:
    """Exact density of the ball p^k Z_p at 0 under x*y - z^2."""
    return Fraction(quadric_cone_counts(p, k), p ** (2 * k))


def exact_xy_zero_density(p: int, k: int) -> Fraction:
    """Exact density of the ball p^k Z_p at 0 under x*y (grows linearly in k)."""
    return k * Fraction(p - 1, p) + 1


# -- verdicts -----------------------------------------------------------------


def boundedness_verdict(profile: DensityProfile, window: int = 5, center: int = 0) -> dict:
    """Bounded-versus-divergent verdict for the density sequence at a center.

    The last ``window`` tracked levels drive the decision: the sequence is
    called bounded when no pair of levels in the window shows an increase
    beyond three combined standard errors (pairwise testing lets the
    precise low levels witness a genuine linear growth that the noisy top
    levels would mask).  The sup estimate is taken over the levels whose
    relative standard error stays below 10 percent, and those levels are
    reported so an exact oracle can be compared like for like.  Sampling
    cannot separate bounded from continuous; the verdict says so.
    """
    levels = [k for k in profile.levels]
    if len(levels) < 3:
        raise ConfigError("boundedness needs at least 3 tracked precision levels")
    if window < 2:
        raise ConfigError("window must span at least 2 levels")
    tail = levels[-window:]
    bounded = True
    for a in range(len(tail)):
        for b in range(a + 1, len(tail)):
            k0, k1 = tail[a], tail[b]
            d0, d1 = profile.density(center, k0), profile.density(center, k1)
            tol = 3 * (profile.stderr(center, k0) + profile.stderr(center, k1))
            if d1 - d0 > tol:
                bounded = False
    diffs = [
        profile.density(center, k1) - profile.density(center, k0)
        for k0, k1 in zip(tail, tail[1:])
    ]
    trend = sum(diffs) / len(diffs) if diffs else 0.0

    sup_levels = [
        k
        for k in levels
        if profile.density(center, k) > 0
        and profile.stderr(center, k) <= 0.1 * profile.density(center, k)
    ]
    if not sup_levels:
        sup_levels = levels[:1]
    sup_estimate = max(profile.density(center, k) for k in sup_levels)
    return {
        "bounded": bounded,
        "sup_estimate": sup_estimate,
        "sup_levels": sup_levels,
        "trend_slope": trend,
        "note": (
            "sampling distinguishes bounded from divergent trends only; "
            "bounded versus continuous is not decidable at finite precision"
        ),
    }
