"""Exact arithmetic for the flip-chain discrepancies and kappa inequalities.

Every inequality is evaluated in exact rational arithmetic on the real
part of kappa; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class FlipData:
    """Canonical and line-bundle discrepancies of the i-th flip at genus g."""

    g: int
    i: int
    m: int                          # canonical discrepancy 3g - 3i - 2
    p: int                          # line-bundle discrepancy 2(2g - 2i - 1)


def flip_data(g: int, i: int) -> FlipData:
    if g < 2:
        raise ValueError("genus must be at least 2")
    if not 1 <= i <= g - 1:
        raise ValueError(f"flip index {i} outside 1..{g - 1}")
    return FlipData(g=g, i=i, m=3 * g - 3 * i - 2, p=2 * (2 * g - 2 * i - 1))


def kappa_flip_ok(g: int, i: int, kappa_re) -> bool:
    """2 Re(kappa) (2g - 2i - 1) <= 3g - 3i - 2, exactly."""
    data = flip_data(g, i)
    return 2 * Fraction(kappa_re) * (2 * g - 2 * i - 1) <= data.m


def blowup_exponents(g: int, kappa_re) -> dict:
    """Exponent bookkeeping of the first blow-up in the chain.

    bundle_exp = (4g-6) kappa - g + 1 is the exceptional exponent of the
    half-density comparison, canonical_m = 2g-3 its canonical discrepancy,
    and the threshold (g-1)/(4g-6) is where bundle_exp vanishes.  At genus
    2 the flip chain is trivial (the first model already is the last), and
    the restriction of the relevant bundle to an exceptional fiber has
    degree -2(2g-3).
    """
    if g < 2:
        raise ValueError("genus must be at least 2")
    kappa_re = Fraction(kappa_re)
    return {
        "bundle_exp": (4 * g - 6) * kappa_re - g + 1,
        "canonical_m": 2 * g - 3,
        "threshold": Fraction(g - 1, 4 * g - 6),
        "trivial_chain": g == 2,
        "fiber_restriction_degree": -2 * (2 * g - 3),
    }


def bir_mod_ok(divisor_data, kappa_re) -> bool:
    """Conjunction of Re(kappa) * n_i <= m_i over (m_i, n_i) pairs."""
    kappa_re = Fraction(kappa_re)
    return all(kappa_re * n <= m for m, n in divisor_data)


def flip_table(g_max: int, kappa_re=Fraction(1, 2)):
    """All (g, i) rows with discrepancies and the kappa verdict."""
    rows = []
    for g in range(2, g_max + 1):
        for i in range(1, g):
            data = flip_data(g, i)
            rows.append(
                {
                    "g": g,
                    "i": i,
                    "m": data.m,
                    "p": data.p,
                    "kappa_ok": kappa_flip_ok(g, i, kappa_re),
                }
            )
    return rows
