"""Catalog of the genus-2 and genus-3 verification instances.

Each instance packages a matrix (or ideal identity) with the artifacts its
pipeline run must reproduce exactly: the degeneracy ideal, quoted chart
equations (matched up to a rational unit at either the pre- or
post-elimination stage), expected certificate kinds per chart, and, for
degeneration instances, the full chain of weights and clearings whose
exact identities the run verifies.  Witness data is transcribed, never
searched for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Ring

BASE3 = ("x", "y", "z")


@dataclass(frozen=True)
class Stage:
    """One degeneration step: weights and t-clearings, which double as the witness."""

    weights: dict
    row_clearings: tuple
    col_clearings: tuple
    label: str


@dataclass(frozen=True)
class CatalogInstance:
    id: str
    base_vars: tuple
    matrix: tuple                           # rows of polynomial strings
    route: str                              # chartwise | quadratic_transport | degeneration | ideal_check
    note: str = ""
    expected_fitting: tuple = ()
    quoted_charts: tuple = ()               # ((chart_var, poly string), ...)
    smooth_charts: tuple = ()
    expected_kinds: tuple = ()              # ((chart_var, kind), ...)
    expected_codims: tuple = ()             # ((p, codim), ...)
    stages: tuple = ()                      # degeneration chain, outermost first
    limit_matrix: tuple = ()                # expected final limit rows
    expected_fail: bool = False

    @property
    def ring(self) -> Ring:
        return Ring(tuple(self.base_vars))


_CODIMS_2x3 = ((1, 2), (2, 3))


def _quadratic_phi1() -> CatalogInstance:
    return CatalogInstance(
        id="g3.quadratic.phi1",
        base_vars=BASE3,
        matrix=(("x", "y", "0"), ("0", "y", "z")),
        route="chartwise",
        note="blow-up of (xy, xz, yz); every chart is a normal toric hypersurface",
        expected_fitting=("x*y", "x*z", "y*z"),
        quoted_charts=(
            ("alpha", "y*beta + z*gamma"),
            ("gamma", "x*alpha + y*beta"),
        ),
        expected_kinds=(
            ("alpha", "normal_toric"),
            ("beta", "normal_toric"),
            ("gamma", "normal_toric"),
        ),
        expected_codims=_CODIMS_2x3,
    )


def _quadratic_phi2() -> CatalogInstance:
    return CatalogInstance(
        id="g3.quadratic.phi2",
        base_vars=BASE3,
        matrix=(("x", "y", "0"), ("0", "x", "z")),
        route="chartwise",
        note="blow-up of (x^2, xz, yz); the interesting chart is y*beta^2 = z*gamma",
        expected_fitting=("x^2", "x*z", "y*z"),
        quoted_charts=(("alpha", "y*beta^2 - z*gamma"),),
        smooth_charts=("beta",),
        expected_kinds=(
            ("alpha", "normal_toric"),
            ("beta", "smooth"),
            ("gamma", "normal_toric"),
        ),
        expected_codims=_CODIMS_2x3,
    )


def _quadratic_mu(instance_id="g3.quadratic.mu", note="") -> CatalogInstance:
    return CatalogInstance(
        id=instance_id,
        base_vars=BASE3,
        matrix=(("x", "y", "0"), ("y", "z", "x")),
        route="chartwise",
        note=note or "symmetric-looking corank-1 matrix; charts certified directly",
        expected_fitting=("x*z - y^2", "x^2", "x*y"),
        quoted_charts=(
            ("alpha", "y + z*beta - y*beta*gamma"),
            ("gamma", "y*beta - (y*alpha + z*beta)*alpha"),
        ),
        smooth_charts=("beta",),
        expected_kinds=(
            ("alpha", "smooth"),
            ("beta", "smooth"),
            ("gamma", "form_match"),
        ),
        expected_codims=_CODIMS_2x3,
    )


def _subcase_2a() -> CatalogInstance:
    return CatalogInstance(
        id="g3.subcase2a",
        base_vars=BASE3,
        matrix=(("x", "y", "0"), ("z", "0", "x")),
        route="chartwise",
        note="double-point subcase with separated points; reduces to the quadric cone",
        expected_fitting=("x*y", "x^2", "y*z"),
        expected_kinds=(
            ("alpha", "smooth"),
            ("beta", "normal_toric"),
            ("gamma", "normal_toric"),
        ),
        expected_codims=_CODIMS_2x3,
    )


def _subcase_2b() -> CatalogInstance:
    inst = _quadratic_mu(
        "g3.subcase2b",
        note="double-point subcase at a ramified point; the matrix itself is certified chartwise",
    )
    return inst


def _case1(instance_id, a, b) -> CatalogInstance:
    return CatalogInstance(
        id=instance_id,
        base_vars=BASE3,
        matrix=(("x", "y", "0"), (a, b, "z")),
        route="quadratic_transport",
        note="generic second row in (x, y); transported onto the quadric-cone ideal",
        expected_codims=_CODIMS_2x3,
    )


def random_case1(seed: int) -> CatalogInstance:
    """A seeded random second row whose quadratic form splits over Q."""
    rng = random.Random(seed)
    while True:
        a1, a2, b1, b2 = (rng.randint(-3, 3) for _ in range(4))
        A, B, C = b1, b2 - a1, -a2
        if (A, B, C) == (0, 0, 0):
            continue
        disc = B * B - 4 * A * C
        if disc < 0:
            continue
        root = _isqrt_exact(disc)
        if root is None:
            continue
        a = _linear_string(a1, a2)
        b = _linear_string(b1, b2)
        return _case1("g3.case1.random", a, b)


def _isqrt_exact(value: int):
    import math

    if value < 0:
        return None
    r = math.isqrt(value)
    return r if r * r == value else None


def _linear_string(cx, cy) -> str:
    parts = []
    if cx:
        parts.append(f"{cx}*x" if cx != 1 else "x")
    if cy:
        sign = "+ " if cy > 0 and parts else ""
        parts.append(f"{sign}{cy}*y" if cy != 1 else f"{sign}y")
    return " ".join(parts) if parts else "0"


def _deg23(instance_id, h, f, stages, limit, quoted, smooth, kinds, note) -> CatalogInstance:
    return CatalogInstance(
        id=instance_id,
        base_vars=BASE3,
        matrix=((f"x + {h}", "y", "0"), (f, "z", "x")),
        route="degeneration",
        note=note,
        expected_codims=_CODIMS_2x3,
        stages=stages,
        limit_matrix=limit,
        quoted_charts=quoted,
        smooth_charts=smooth,
        expected_kinds=kinds,
    )


_STAGE_CASE1 = Stage(
    weights={"x": 2, "y": 1, "z": 1},
    row_clearings=(-2, -2),
    col_clearings=(0, 1, 0),
    label="strip the cubic tails (x, y, z) -> (t^2 x, t y, t z)",
)

_STAGE_1A = Stage(
    weights={"x": 3, "y": 2, "z": 1},
    row_clearings=(-3, -2),
    col_clearings=(0, 1, -1),
    label="quadratic part with z^2: (x, y, z) -> (t^3 x, t^2 y, t z)",
)

_STAGE_1B = Stage(
    weights={"x": 4, "y": 2, "z": 1},
    row_clearings=(-4, -3),
    col_clearings=(0, 2, -1),
    label="quadratic part with yz but no z^2: (x, y, z) -> (t^4 x, t^2 y, t z)",
)

_STAGE_CASE2 = Stage(
    weights={"x": 2, "y": 3, "z": 1},
    row_clearings=(-2, 0),
    col_clearings=(0, -1, -2),
    label="order-2 h branch: (x, y, z) -> (t^2 x, t^3 y, t z)",
)


def deg23_route(h: str, f: str):
    """Case split and degeneration stages for [[x+h(z), y, 0], [f(y,z), z, x]].

    h and f must vanish to order 2; the admissible branches are h of exact
    order 2 (case 2, any f) or h of order >= 3 with a nonzero quadratic
    part of f (case 1, subdivided by which quadratic coefficient leads).
    Anything else is flagged as inadmissible rather than guessed at.
    """
    from .errors import InadmissibleFamilyError

    ring = Ring(("x", "y", "z"))
    from .poly import parse_poly

    hp = parse_poly(h, ring)
    fp = parse_poly(f, ring)
    if hp.variables_used() - {"z"}:
        raise InadmissibleFamilyError("h must be a series in z alone")
    if fp.variables_used() - {"y", "z"}:
        raise InadmissibleFamilyError("f must be a series in y and z")
    for g, label in ((hp, "h"), (fp, "f")):
        if not g.is_zero() and min(sum(e) for e in g.terms) < 2:
            raise InadmissibleFamilyError(f"{label} must vanish to order 2")

    h_coeffs = {exps[2]: c for exps, c in hp.terms.items()}
    if h_coeffs.get(2, 0) != 0:
        return "case2", (_STAGE_CASE2,)

    quad = {
        (exps[1], exps[2]): c for exps, c in fp.terms.items() if exps[1] + exps[2] == 2
    }
    if quad.get((0, 2), 0) != 0:
        return "case1a", (_STAGE_CASE1, _STAGE_1A)
    if quad.get((1, 1), 0) != 0:
        return "case1b", (_STAGE_CASE1, _STAGE_1B)
    if quad.get((2, 0), 0) != 0:
        return "case1c", (_STAGE_CASE1,)
    raise InadmissibleFamilyError(
        "neither branch applies: h has no z^2 term and f has no quadratic part"
    )


def _deg23_case1a() -> CatalogInstance:
    return _deg23(
        "g3.deg23.case1a",
        h="z^3",
        f="z^2 + y^2 + y^3",
        stages=(_STAGE_CASE1, _STAGE_1A),
        limit=(("x", "y", "0"), ("z^2", "z", "x")),
        quoted=(
            ("alpha", "z^2 + z*beta - y*beta*gamma"),
            ("beta", "z^2*alpha + z + x*gamma"),
            ("gamma", "y*beta - (z^2*alpha + z*beta)*alpha"),
        ),
        smooth=("beta",),
        kinds=(("alpha", "form_match"), ("beta", "smooth"), ("gamma", "form_match")),
        note="vanishing-order 3 on h, quadratic part of f carries z^2",
    )


def _deg23_case1b() -> CatalogInstance:
    return _deg23(
        "g3.deg23.case1b",
        h="z^3",
        f="y*z + y^2 + z^3",
        stages=(_STAGE_CASE1, _STAGE_1B),
        limit=(("x", "y", "0"), ("y*z", "z", "x")),
        quoted=(
            ("alpha", "y*z + z*beta - y*beta*gamma"),
            ("beta", "y*z*alpha + z + x*gamma"),
            ("gamma", "y*beta - (y*alpha + beta)*z*alpha"),
        ),
        smooth=("beta",),
        kinds=(("alpha", "form_match"), ("beta", "smooth"), ("gamma", "form_match")),
        note="quadratic part y z; the beta chart is smooth after the exact elimination",
    )


def _deg23_case1c() -> CatalogInstance:
    return _deg23(
        "g3.deg23.case1c",
        h="z^4",
        f="y^2 + z^3",
        stages=(_STAGE_CASE1,),
        limit=(("x", "y", "0"), ("y^2", "z", "x")),
        quoted=(
            ("alpha", "y^2 + z*beta - y*beta*gamma"),
            ("beta", "y^2*alpha + z + x*gamma"),
            ("gamma", "y*beta - (y^2*alpha + z*beta)*alpha"),
        ),
        smooth=("beta",),
        kinds=(("alpha", "form_match"), ("beta", "smooth"), ("gamma", "form_match")),
        note="quadratic part y^2 only; a single degeneration reaches the limit",
    )


def _deg23_case2() -> CatalogInstance:
    return _deg23(
        "g3.deg23.case2",
        h="z^2 + z^3",
        f="y^3",
        stages=(_STAGE_CASE2,),
        limit=(("x + z^2", "y", "0"), ("0", "z", "x")),
        quoted=(
            # the alpha chart recomputed exactly: z*beta = gamma*(z^2 + beta*y)
            ("alpha", "z*beta - (z^2 + beta*y)*gamma"),
            ("gamma", "y*beta - (beta*z - z^2)*alpha"),
        ),
        smooth=("beta",),
        kinds=(("alpha", "form_match"), ("beta", "smooth"), ("gamma", "form_match")),
        note="order-2 h branch; limit x + z^2 in the corner entry",
    )


def _step3_ideal() -> CatalogInstance:
    # degeneracy ideal of [[x+h, y, 0], [-f, z, x]] equals (x(x+h), xy, (x+h)z + yf)
    h, f = "z^3", "y^2"
    return CatalogInstance(
        id="g3.step3.ideal",
        base_vars=BASE3,
        matrix=((f"x + {h}", "y", "0"), (f"-({f})", "z", "x")),
        route="ideal_check",
        note="normal-form generators of the degeneracy ideal at a ramified double point",
        expected_fitting=(f"x*(x + {h})", "x*y", f"(x + {h})*z + y*{f}"),
        expected_codims=_CODIMS_2x3,
    )


def _mutation_mu() -> CatalogInstance:
    return CatalogInstance(
        id="g3.mutation.control",
        base_vars=BASE3,
        matrix=(("x", "y", "0"), ("y", "z", "x + z^2")),
        route="chartwise",
        note="negative control: one entry perturbed off the catalog forms",
        expected_fail=True,
    )


def genus3_instances(seed: int = 2024):
    """All genus-3 instances, in a fixed deterministic order."""
    return [
        _quadratic_phi1(),
        _quadratic_phi2(),
        _quadratic_mu(),
        _subcase_2a(),
        _subcase_2b(),
        _case1("g3.case1.repr1", "y", "x"),
        _case1("g3.case1.repr2", "x", "x + y"),
        random_case1(seed),
        _deg23_case1a(),
        _deg23_case1b(),
        _deg23_case1c(),
        _deg23_case2(),
        _step3_ideal(),
        _mutation_mu(),
    ]


def genus2_instance(d: int) -> CatalogInstance:
    return CatalogInstance(
        id=f"g2.typeA.d{d}",
        base_vars=("x", "y"),
        matrix=((f"x^{d}", "y"),),
        route="chartwise",
        note="reduced local model of the theta-matrix: blow-up of (x^d, y)",
        expected_fitting=(f"x^{d}", "y"),
        quoted_charts=((f"alpha", f"x^{d} + y*beta"),),
        smooth_charts=("beta",),
        expected_kinds=(
            ("alpha", "smooth" if d == 1 else "normal_toric"),
            ("beta", "smooth"),
        ),
        expected_codims=((1, 2),),
    )


def genus2_mutation() -> CatalogInstance:
    return CatalogInstance(
        id="g2.mutation.control",
        base_vars=("x", "y"),
        matrix=(("x^2", "y^2"),),
        route="chartwise",
        note="negative control: squared second entry leaves the catalog",
        expected_fail=True,
    )


def instance(instance_id: str, seed: int = 2024) -> CatalogInstance:
    for inst in genus3_instances(seed):
        if inst.id == instance_id:
            return inst
    if instance_id.startswith("g2.typeA.d"):
        return genus2_instance(int(instance_id.rsplit("d", 1)[1]))
    if instance_id == "g2.mutation.control":
        return genus2_mutation()
    raise KeyError(f"unknown instance id {instance_id!r}")
