"""Exact toolkit for corank-1 degeneracy loci and their blow-up charts.

Everything symbolic runs over exact rationals; the only numerical module
is the finite-precision p-adic sampling lab.
"""

from .poly import Poly, Ring, Substitution, parse_poly, set_t, substitute, weighted_scale
from .groebner import (
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
from .degeneracy import (
    BlowupReport,
    Chart,
    IncidenceScheme,
    PolyMatrix,
    blowup_criterion,
    chart,
    charts,
    fitting_ideal,
    incidence_scheme,
    rank_stratum_ideal,
)
from .certify import (
    Certificate,
    certify_rational,
    is_smooth,
    jacobian_ideal,
    match_binomial_form,
    match_three_term_form,
    toric_normal,
    validate_certificate,
)
from .families import (
    EquivalenceWitness,
    MatrixFamily,
    build_family,
    elkik_node,
    verify_flat_degeneration,
    verify_isotriviality,
)
from .monomial import MonomialIdeal, integral_closure, is_integrally_closed, power, rrv_normal
from .flips import bir_mod_ok, blowup_exponents, flip_data, flip_table, kappa_flip_ok
from .padic import (
    DensityProfile,
    PadicConfig,
    boundedness_verdict,
    estimate_pushforward,
    exact_monomial_density,
    exact_quadric_density,
)
from .pipelines import verify_genus2, verify_genus3

__version__ = "0.1.0"
