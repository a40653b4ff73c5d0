"""Command-line entry point: verify, expand, hardhex, report-all."""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import ellgamma, hardhex, identities, multipart, qfunctions
from .errors import SeriesError
from .identities import REGISTRY, VerifyReport, compare, verify_identity
from .series import Series, invert, log_derivative_times_x

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


# -- named expansions -------------------------------------------------------


def _named(name):
    return lambda k: qfunctions.expand_named(name, k)


EXPANSIONS = {
    "G": _named("G"),
    "H": _named("H"),
    "P": _named("P"),
    "Q": _named("Q"),
    "partitions": lambda k: invert(qfunctions.expand_named("Q", k)),
    "z-low": hardhex.z_of_x,
    "x-of-z": lambda k: hardhex.solution_lowz(k).x_of_z,
    "rho-low": lambda k: hardhex.solution_lowz(k).rho_of_z,
    "kappa-low": lambda k: hardhex.solution_lowz(k).kappa_of_z,
    "kappa-low-enum": lambda k: hardhex.kappa_series_lowz(k),
    "rho1-high": lambda k: hardhex.solution_highz(k).rho1,
    "rho2-high": lambda k: hardhex.solution_highz(k).rho2,
    "R-high": lambda k: hardhex.solution_highz(k).R,
    "w-kappa-cubed-high": lambda k: hardhex.solution_highz(k).w_kappa_cubed,
    "rr-sum-0": lambda k: identities.rr_sum_side(0, k),
    "rr-sum-1": lambda k: identities.rr_sum_side(1, k),
    "rr-product-0": lambda k: identities.rr_product_side(0, k),
    "rr-product-1": lambda k: identities.rr_product_side(1, k),
    "rr-bosonic-0": lambda k: identities.rr_alternating_side(0, k),
    "rr-bosonic-1": lambda k: identities.rr_alternating_side(1, k),
    "qpoch-inf": lambda k: qfunctions.qpoch(qfunctions.INFINITY, k),
}
for _w in identities.REGIME_II_SUMS:
    EXPANSIONS[f"F{_w}"] = lambda k, w=_w: identities.regimeII_sum(w, k)


# -- extra named checks for report-all -------------------------------------------


def _bool_report(cid, order, ok, detail=""):
    return VerifyReport(cid, order, "pass" if ok else "fail", None if ok else (0, "fail", "pass"), (), detail)


def check_hardhex_oracle(order):
    tori = [(4, 4), (4, 5), (4, 6), (5, 4), (6, 4)]
    for r, c in tori:
        t = hardhex.TriangularTorus(r, c)
        if hardhex.count_configs(t).g != hardhex.brute_force_counts(t).g:
            return _bool_report("HH-ORACLE", order, False, f"DP differs from brute force on {r}x{c}")
    for r in range(4, 7):
        for c in range(4, 9):
            t = hardhex.TriangularTorus(r, c)
            g = hardhex.count_configs(t, degree=2).g
            if g[1] != t.N or g[2] != t.N * (t.N - 7) // 2:
                return _bool_report("HH-ORACLE", order, False, f"g[1], g[2] wrong on {r}x{c}")
    return _bool_report("HH-ORACLE", order, True, "DP = brute force; g1 = N, g2 = N(N-7)/2")


def check_kappa_enum(order):
    k = min(order, 5)
    enum = hardhex.kappa_series_lowz(k)
    return compare("HH-KAPPA", enum, hardhex.solution_lowz(k).kappa_of_z, k, "enumeration vs parametric kappa")


def check_z_exponents(order):
    c = hardhex.z_product_exponents(29)
    ok = c == [(5, -5, -5, 5, 0)[i % 5] for i in range(29)]
    return _bool_report("HH-EXPONENTS", 29, ok, "c_n period 5 pattern")


def check_solution_low(order):
    sol = hardhex.solution_lowz(order)
    expected = Series((0, 1, -7, 58, -519, 4856))
    rep = compare("HH-RHO-LOW", sol.rho_of_z, expected, min(order, 5))
    if not rep.passed:
        return rep
    return compare("HH-RHO-LOW", sol.rho_of_z, log_derivative_times_x(sol.kappa_of_z), order, "rho = z dlog kappa/dz")


def check_solution_high(order):
    sol = hardhex.solution_highz(order)
    rep = compare("HH-RHO-HIGH", sol.rho1, Series((1, -1, -5, -34, -267)), min(order, 4))
    if not rep.passed:
        return rep
    lhs, rhs = hardhex.highz_density_check(order)
    rep = compare("HH-RHO-HIGH", lhs, rhs, order, "rho1 + 2 rho2 = 1 - w S'/S")
    if not rep.passed:
        return rep
    return compare("HH-RHO-HIGH", hardhex.R_from_rho_x(order), hardhex.R_direct_x(order), order, "R identity")


def check_critical(order):
    r = hardhex.critical_activity()
    ok = r["phi^5 equals z_c"] and r["golden relation"] and r["decimal"] == "11.09017"
    return _bool_report("HH-CRITICAL", 0, ok, r["decimal"])


def check_elliptic(order):
    reps = [
        ellgamma.reflection_check(6, 10),
        ellgamma.shift_check("p", 5, 9),
        ellgamma.shift_check("q", 5, 9),
        ellgamma.p_zero_check(6, 10),
    ]
    for r in reps:
        if not r.passed:
            return _bool_report("EG-FUNCTIONAL", 10, False, r.name)
    return _bool_report("EG-FUNCTIONAL", 10, True, "reflection, shifts, p = 0")


def check_multiplication(order):
    for n in (2, 3):
        for z in (1, 2, 3):
            r = ellgamma.multiplication_check(n, z, 8)
            if not r.passed:
                return _bool_report("EG-MULTIPLICATION", 8, False, r.name)
    return _bool_report("EG-MULTIPLICATION", 8, True, "n in {2,3}, z in {1,2,3}")


def check_vecpart(order):
    for n, cap in ((1, 8), (2, 7), (3, 6), (4, 5)):
        r = multipart.vecpart_functional_check(n, cap)
        if not r.passed:
            return r
    return _bool_report("VP-FUNCTIONAL", 8, True, "n = 1..4")


def check_fermionic(order):
    k = min(order, 40)
    for a in (0, 1):
        for L in range(21):
            f = multipart.fermionic_sum(multipart.rr_fermionic_data(a, L), L * L + 2)
            p = identities.finite_poly_F(L, a)
            if f != Series(p.coeffs, L * L + 2):
                return _bool_report("FERMIONIC", k, False, f"L={L}, a={a}")
        rep = compare("FERMIONIC", multipart.fermionic_sum(multipart.rr_fermionic_data(a), k), identities.rr_sum_side(a, k), k)
        if not rep.passed:
            return rep
    return _bool_report("FERMIONIC", k, True, "finite L <= 20 and u = inf")


def check_duality(order):
    for a in (0, 1):
        for parity in (0, 1):
            for M in range(13):
                if identities.reverse_and_stabilize(a, parity, M) != identities.duality_partner(a, parity, M):
                    return _bool_report("DUALITY", 12, False, f"a={a}, parity={parity}, M={M}")
    return _bool_report("DUALITY", 12, True, "reversed polynomials -> Regime IV sums")


EXTRA_CHECKS = {
    "HH-ORACLE": check_hardhex_oracle,
    "HH-KAPPA": check_kappa_enum,
    "HH-EXPONENTS": check_z_exponents,
    "HH-RHO-LOW": check_solution_low,
    "HH-RHO-HIGH": check_solution_high,
    "HH-CRITICAL": check_critical,
    "EG-FUNCTIONAL": check_elliptic,
    "EG-MULTIPLICATION": check_multiplication,
    "VP-FUNCTIONAL": check_vecpart,
    "FERMIONIC": check_fermionic,
    "DUALITY": check_duality,
}


def run_check(name, order):
    """Run one registry identity or extra check; returns a plain dict (picklable)."""
    if name in REGISTRY:
        k = min(order, 40) if REGISTRY[name].kind == "poly" else order
        return verify_identity(name, k).to_dict()
    return EXTRA_CHECKS[name](order).to_dict()


def all_check_names():
    return list(REGISTRY) + list(EXTRA_CHECKS)


# -- output ---------------------------------------------------------------


def _series_dict(name, series):
    return {
        "id": name,
        "order": series.order,
        "status": "pass",
        "coefficients": [str(c) for c in series.coeffs],
        "first_mismatch": None,
    }


def render(records, fmt):
    if fmt == "json":
        if len(records) == 1:
            return json.dumps(records[0])
        return json.dumps(records, indent=1)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if len(records) == 1:
            w.writerow(["degree", "coefficient"])
            for d, c in enumerate(records[0]["coefficients"]):
                w.writerow([d, c])
        else:
            w.writerow(["id", "order", "status", "mismatch_degree"])
            for r in records:
                mm = r["first_mismatch"]
                w.writerow([r["id"], r["order"], r["status"], "" if mm is None else mm["degree"]])
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in records:
        line = f"{r['id']}: {r['status']} (order {r['order']})"
        if r["first_mismatch"]:
            mm = r["first_mismatch"]
            line += f", first mismatch at degree {mm['degree']}: {mm['lhs']} vs {mm['rhs']}"
        lines.append(line)
        if len(records) == 1 and r["coefficients"]:
            lines.append(" ".join(r["coefficients"]))
    return "\n".join(lines)


def _exit_for(records):
    return EXIT_OK if all(r["status"] == "pass" for r in records) else EXIT_MISMATCH


# -- commands -------------------------------------------------------------


def cmd_verify(args):
    rec = run_check(args.id, args.order) if args.id in EXTRA_CHECKS else verify_identity(args.id, args.order).to_dict()
    return [rec]


def cmd_expand(args):
    try:
        fn = EXPANSIONS[args.fn]
    except KeyError:
        raise SeriesError(f"unknown function {args.fn!r}; choose from {', '.join(sorted(EXPANSIONS))}") from None
    return [_series_dict(args.fn, fn(args.order))]


def cmd_hardhex(args):
    t = hardhex.TriangularTorus(args.rows, args.cols)
    counts = hardhex.count_configs(t, method=args.method, max_rows=args.max_rows, max_cols=args.max_cols)
    ok = counts[0] == 1 and counts[1] == t.N and counts[2] == t.N * (t.N - 7) // 2
    return [
        {
            "id": f"hardhex-{t.rows}x{t.cols}",
            "order": len(counts.g) - 1,
            "status": "pass" if ok else "fail",
            "coefficients": [str(c) for c in counts.g],
            "first_mismatch": None if ok else {"degree": 2, "lhs": str(counts[2]), "rhs": str(t.N * (t.N - 7) // 2)},
        }
    ]


def cmd_report_all(args):
    names = all_check_names()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(run_check, names, [args.order] * len(names)))
    return [run_check(n, args.order) for n in names]


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="rrseries", description="Exact q-series identity verifier.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv", "text"), default="text")

    v = sub.add_parser("verify", help="run one identity")
    v.add_argument("--id", required=True)
    v.add_argument("--order", type=_nonneg, required=True)
    common(v)
    e = sub.add_parser("expand", help="print the coefficients of a named series")
    e.add_argument("--fn", required=True)
    e.add_argument("--order", type=_nonneg, required=True)
    common(e)
    h = sub.add_parser("hardhex", help="count hard-hexagon configurations on a torus")
    h.add_argument("--rows", type=int, required=True)
    h.add_argument("--cols", type=int, required=True)
    h.add_argument("--method", choices=("dp", "brute"), default="dp")
    h.add_argument("--max-rows", type=int, default=6)
    h.add_argument("--max-cols", type=int, default=16)
    common(h)
    r = sub.add_parser("report-all", help="run every check")
    r.add_argument("--order", type=_nonneg, default=60)
    r.add_argument("--jobs", type=int, default=1)
    common(r)
    return p


COMMANDS = {"verify": cmd_verify, "expand": cmd_expand, "hardhex": cmd_hardhex, "report-all": cmd_report_all}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        records = COMMANDS[args.command](args)
    except (SeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(records, args.format))
    return _exit_for(records)


if __name__ == "__main__":
    sys.exit(main())
