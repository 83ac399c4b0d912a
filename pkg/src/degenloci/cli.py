"""Command-line interface.

Subcommands mirror the library surface: gb, fitting, charts, certify,
degenerate, closure, flip, padic, and the two verification pipelines under
``paper``.  Report-producing subcommands can write JSON (--json), and the
tabular ones additionally write delimited output (--csv) with a rendered
matplotlib figure (--plot) alongside.  Exit code 0 means every check
passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .certify import certify_rational, validate_with_reasons
from .degeneracy import PolyMatrix, blowup_criterion, charts, fitting_ideal, incidence_scheme
from .errors import DegenLociError
from .families import EquivalenceWitness, build_family, verify_flat_degeneration, verify_isotriviality
from .flips import blowup_exponents, flip_table
from .groebner import DEGREVLEX, LEX, Ideal, MonomialOrder, buchberger_certified, dimension
from .monomial import MonomialIdeal, integral_closure, is_integrally_closed, power, rrv_normal
from .padic import PadicConfig, boundedness_verdict, estimate_pushforward
from .pipelines import verify_genus2, verify_genus3
from .poly import Ring, parse_poly


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _emit(payload, args):
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _ring_from_job(job) -> Ring:
    if "vars" in job:
        return Ring(tuple(job["vars"]))
    names = set()
    import re

    source = job.get("generators") or [e for row in job["entries"] for e in row]
    for s in source:
        names.update(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", s))
    return Ring(tuple(sorted(names)))


def _matrix_from_job(job) -> PolyMatrix:
    ring = _ring_from_job(job)
    entries = job["entries"]
    if "rows" in job and (len(entries) != job["rows"] or any(len(r) != job["cols"] for r in entries)):
        raise DegenLociError("matrix shape disagrees with the declared rows/cols")
    return PolyMatrix.from_strings(ring, entries)


# -- subcommands ---------------------------------------------------------------


def cmd_gb(args):
    job = _load_json(args.infile)
    ring = _ring_from_job(job)
    order = {"degrevlex": DEGREVLEX, "lex": LEX}[job.get("order", args.order)]
    ideal = Ideal(ring, [parse_poly(s, ring) for s in job["generators"]], order)
    basis = ideal.basis()
    payload = {
        "vars": list(ring.variables),
        "order": ideal.order.kind,
        "reduced_basis": [str(g) for g in basis],
        "dimension": dimension(ideal),
        "spoly_check": buchberger_certified(ideal),
    }
    _emit(payload, args)
    return 0 if payload["spoly_check"] else 1


def cmd_fitting(args):
    phi = _matrix_from_job(_load_json(args.infile))
    ideal = fitting_ideal(phi)
    report = blowup_criterion(phi)
    _emit(
        {
            "vars": list(phi.ring.variables),
            "generators": [str(g) for g in ideal.generators],
            "blowup": report.to_json(),
        },
        args,
    )
    return 0 if report.ok else 1


def cmd_charts(args):
    phi = _matrix_from_job(_load_json(args.infile))
    scheme = incidence_scheme(phi)
    payload = {
        "equations": [str(e) for e in scheme.equations],
        "charts": [
            {
                "chart_var": c.chart_var,
                "initial_gens": [str(g) for g in c.initial_gens],
                "chain": [[v, str(p)] for v, p in c.chain],
                "gens": [str(g) for g in c.generators],
            }
            for c in charts(scheme)
        ],
    }
    _emit(payload, args)
    return 0


def cmd_certify(args):
    phi = _matrix_from_job(_load_json(args.infile))
    scheme = incidence_scheme(phi)
    chart_list = charts(scheme)
    from .certify import chart_cover_certificate

    certs = [certify_rational(c, budget=args.budget) for c in chart_list]
    cover = chart_cover_certificate(phi, scheme, chart_list, certs, blowup_criterion(phi))
    valid, problems = validate_with_reasons(cover)
    payload = cover.to_json()
    payload["complete"] = cover.complete
    payload["valid"] = valid
    payload["problems"] = problems
    _emit(payload, args)
    return 0 if cover.complete and valid else 1


def cmd_degenerate(args):
    job = _load_json(args.infile)
    origin = _matrix_from_job(job["matrix"])
    family = build_family(
        origin, job["weights"], tuple(job["row_clearings"]), tuple(job["col_clearings"])
    )
    witness = EquivalenceWitness(
        variable_weights=job["weights"],
        row_scales=tuple(job["row_clearings"]),
        col_scales=tuple(job["col_clearings"]),
        extra_row_ops=tuple(tuple(op) for op in job.get("extra_row_ops", ())),
        extra_col_ops=tuple(tuple(op) for op in job.get("extra_col_ops", ())),
    )
    iso = verify_isotriviality(family, witness)
    flat = verify_flat_degeneration(family)
    fiber_report = blowup_criterion(family.special_fiber)
    payload = {
        "phi_t": [[str(p) for p in row] for row in family.phi_t.entries],
        "special_fiber": [[str(p) for p in row] for row in family.special_fiber.entries],
        "isotrivial": iso,
        "flatness": flat.to_json(),
        "fiber_blowup": fiber_report.to_json(),
        "ok": iso and flat.ok and fiber_report.ok,
    }
    _emit(payload, args)
    return 0 if payload["ok"] else 1


def cmd_closure(args):
    job = _load_json(args.infile)
    ideal = MonomialIdeal(job["generators"])
    closed = integral_closure(ideal)
    payload = {
        "generators": [list(g) for g in ideal.generators],
        "closure": [list(g) for g in closed.generators],
        "integrally_closed": closed.generators == ideal.generators,
    }
    k = job.get("power")
    if k:
        pk = power(ideal, int(k))
        payload["power"] = {"k": int(k), "generators": [list(g) for g in pk.generators],
                            "integrally_closed": is_integrally_closed(pk)}
    if ideal.n == 3:
        payload["rees_algebra_normal"] = rrv_normal(ideal)
    _emit(payload, args)
    return 0


def cmd_flip(args):
    kappa = Fraction(args.kappa)
    rows = flip_table(args.gmax, kappa)
    all_ok = all(r["kappa_ok"] for r in rows)
    header = f"{'g':>4} {'i':>4} {'m':>6} {'p':>6}  kappa_ok"
    print(header)
    for r in rows:
        print(f"{r['g']:>4} {r['i']:>4} {r['m']:>6} {r['p']:>6}  {r['kappa_ok']}")
    print(f"kappa = {kappa}: {'all inequalities hold' if all_ok else 'INEQUALITY FAILURE'}")
    exps = blowup_exponents(max(args.gmax, 2), kappa)
    if args.json:
        _emit({"kappa": str(kappa), "rows": rows, "all_ok": all_ok,
               "blowup_exponents_gmax": {k: str(v) for k, v in exps.items()}}, args)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("g,i,m,p,kappa_ok\n")
            for r in rows:
                fh.write(f"{r['g']},{r['i']},{r['m']},{r['p']},{int(r['kappa_ok'])}\n")
    if args.plot:
        _plot_flip(rows, kappa, args.plot)
    return 0 if all_ok else 1


def _plot_flip(rows, kappa, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_g = {}
    for r in rows:
        margin = r["m"] - float(kappa) * r["p"]
        by_g.setdefault(r["g"], []).append(margin)
    gs = sorted(by_g)
    mins = [min(by_g[g]) for g in gs]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(gs, mins, marker="o")
    ax.axhline(0.0, linestyle="--", linewidth=1)
    ax.set_xlabel("genus g")
    ax.set_ylabel(f"min over i of m - {kappa} p")
    ax.set_title("flip inequality margins")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_padic(args):
    names = tuple(args.vars.split(","))
    ring = Ring(names)
    f = parse_poly(args.map, ring)
    cfg = PadicConfig(p=args.p, K=args.K, N=args.N, seed=args.seed)
    centers = tuple(int(c) for c in args.centers.split(",")) if args.centers else (0,)
    profile = estimate_pushforward(f, cfg, centers=centers)
    verdicts = {c: boundedness_verdict(profile, window=args.window, center=c) for c in centers}
    for c in centers:
        v = verdicts[c]
        print(
            f"center {c}: bounded={v['bounded']} sup~{v['sup_estimate']:.4f} "
            f"trend~{v['trend_slope']:+.4f}"
        )
    payload = profile.to_json()
    payload["verdicts"] = {str(c): verdicts[c] for c in centers}
    if args.json:
        _emit(payload, args)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(profile.to_csv())
    if args.plot:
        _plot_profile(profile, args.plot)
    return 0


def _plot_profile(profile, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for c in profile.centers:
        ks = list(profile.levels)
        ds = [profile.density(c, k) for k in ks]
        es = [profile.stderr(c, k) for k in ks]
        ax.errorbar(ks, ds, yerr=es, marker="o", capsize=2, label=f"center {c}")
    ax.set_xlabel("level k (ball radius p^-k)")
    ax.set_ylabel("density")
    ax.set_title(f"pushforward density of {profile.map_id} (p={profile.p})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_paper(args):
    if args.which == "genus2":
        report = verify_genus2(args.dmax)
    else:
        report = verify_genus3(instance_id=args.instance, seed=args.seed)
    for res in report.results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.id}")
        if not res.passed:
            for check in res.checks:
                if not check.ok:
                    print(f"      {check.name}: {check.detail}")
    print(report.summary())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.dumps() + "\n")
    return 0 if report.passed else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="degenloci")
    sub = parser.add_subparsers(dest="command", required=True)

    def infile_cmd(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="infile", required=True, help="job JSON path")
        p.add_argument("--json", help="write the result JSON here")
        p.set_defaults(fn=fn)
        return p

    p = infile_cmd("gb", cmd_gb, "reduced Groebner basis of an ideal job")
    p.add_argument("--order", default="degrevlex", choices=["degrevlex", "lex"])
    infile_cmd("fitting", cmd_fitting, "maximal-minor ideal and blow-up report of a matrix job")
    infile_cmd("charts", cmd_charts, "incidence-scheme charts of a matrix job")
    p = infile_cmd("certify", cmd_certify, "chart-cover rationality certificate of a matrix job")
    p.add_argument("--budget", type=int, default=32)
    infile_cmd("degenerate", cmd_degenerate, "verify a one-parameter degeneration job")
    infile_cmd("closure", cmd_closure, "integral closure of a monomial-ideal job")

    p = sub.add_parser("flip", help="flip discrepancies and kappa inequalities")
    p.add_argument("--gmax", type=int, default=10)
    p.add_argument("--kappa", default="1/2")
    p.add_argument("--json")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_flip)

    p = sub.add_parser("padic", help="Monte Carlo pushforward density profile")
    p.add_argument("--map", required=True)
    p.add_argument("--vars", required=True, help="comma-separated variable names")
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--K", type=int, default=8)
    p.add_argument("--N", type=int, default=10 ** 5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--centers", default="0")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--json")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_padic)

    p = sub.add_parser("paper", help="run a verification pipeline")
    p.add_argument("which", choices=["genus2", "genus3"])
    p.add_argument("--dmax", type=int, default=6)
    p.add_argument("--instance", default=None)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_paper)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DegenLociError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
