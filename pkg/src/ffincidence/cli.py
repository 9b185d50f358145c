"""Command-line front end.

Exit status: 0 when every verdict holds, 1 when an inequality verdict is
false, 2 for invalid input, 3 when a size cap is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from . import geometry as geo
from . import spectral as sp
from .algebra import parse_prime_power, ring_make
from .errors import CapExceeded, InvalidInput, NonConvergence
from .suite import run_suite

EXIT_OK, EXIT_FALSIFIED, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3

KIND_ALIASES = {
    "cayley": sp.CAYLEY_Q,
    "cayley_Q": sp.CAYLEY_Q,
    "cayley-prime": sp.CAYLEY_QPRIME,
    "cayley_prime": sp.CAYLEY_QPRIME,
    "cayley_Qprime": sp.CAYLEY_QPRIME,
    "sum-product": sp.SUM_PRODUCT,
    "sum_product": sp.SUM_PRODUCT,
}


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _default_seed():
    env = os.environ.get("FFIL_SEED")
    try:
        return int(env) if env is not None else 0
    except ValueError:
        return 0


def _common(p, ring=False):
    p.add_argument("--q", required=True,
                   help="odd integer modulus" if ring else "field order, e.g. 5, 9 or 3^2")
    p.add_argument("--d", type=int, default=1)
    if not ring:
        p.add_argument("--exps", type=_int_list, help="exponents c_i (default all 2)")
        p.add_argument("--coeffs", type=_int_list, help="coefficient codes a_i (default all 1)")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)


def _point_source(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true", help="use the whole space")
    g.add_argument("--size", type=int, help="random subset of this size (seeded)")
    g.add_argument("--points", help="CSV file of points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffincidence", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("cert", "spectrum"):
        p = sub.add_parser(name, help="spectral certificate" if name == "cert"
                           else "eigenvalue CSV plus certificate")
        _common(p)
        p.add_argument("--kind", default="cayley", choices=sorted(KIND_ALIASES))
        if name == "spectrum":
            p.add_argument("--cert-out", help="file for the JSON certificate (default stderr)")
            p.add_argument("--gnuplot", help="write a gnuplot script plotting the moduli")

    p = sub.add_parser("incidence", help="incidence bound over F_q")
    _common(p)
    _point_source(p)
    p.add_argument("--spheres", help="CSV file of spheres (b_1..b_d, r)")

    p = sub.add_parser("ring-incidence", help="incidence bound over Z_q")
    _common(p, ring=True)
    _point_source(p)
    p.add_argument("--spheres", help="CSV file of spheres (b_1..b_d, r)")

    for name, helptext in (("pinned", "pinned distance report"),
                           ("isosceles", "isosceles / T_1 report"),
                           ("t2", "T_2 report"),
                           ("ddsubset", "distinct-distance subset")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        _point_source(p)
        if name == "pinned":
            p.add_argument("--c", type=float, default=0.5)
        if name == "ddsubset":
            p.add_argument("--method", choices=("greedy", "deletion"), default="greedy")
            p.add_argument("--order", choices=("lex", "shuffle"), default="lex")

    p = sub.add_parser("random", help="random incidence trials")
    _common(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)

    p = sub.add_parser("suite", help="run the full verification suite")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--keep-going", action="store_true",
                   help="run every criterion even after a failure")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    return parser


# -- helpers -------------------------------------------------------------------


def _form(args):
    ctx = parse_prime_power(args.q)
    exps = args.exps or [2] * args.d
    coeffs = args.coeffs or [1] * len(exps)
    if len(exps) != args.d or len(coeffs) != args.d:
        raise InvalidInput(f"need {args.d} exponents and coefficients")
    return geo.DiagonalForm(ctx, coeffs, exps)


def _points(args, ctx, q, d):
    if args.points:
        return geo.points_from_csv(Path(args.points).read_text(), ctx, d)
    if args.size is not None:
        if not 0 <= args.size <= q**d:
            raise InvalidInput(f"size must lie in [0, {q**d}]")
        rng = np.random.default_rng([args.seed, 0])
        idx = np.sort(rng.choice(q**d, size=args.size, replace=False))
        return geo.all_points(q, d)[idx]
    return geo.all_points(q, d)


def _spheres(args, ctx, q, d):
    if args.spheres:
        return geo.spheres_from_csv(Path(args.spheres).read_text(), ctx, d)
    if args.size is not None:
        if not 0 <= args.size <= q ** (d + 1):
            raise InvalidInput("too many spheres requested")
        rng = np.random.default_rng([args.seed, 1])
        idx = np.sort(rng.choice(q ** (d + 1), size=args.size, replace=False))
        full = geo.all_spheres(q, d)
        return geo.SphereSet(full.centers[idx], full.radii[idx])
    return geo.all_spheres(q, d)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _render(rows: list, fmt: str) -> str:
    rows = [_jsonable(r) for r in rows]
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 else rows
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    keys = sorted({k for r in rows for k, v in r.items() if not isinstance(v, (list, dict))})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k, "") for k in keys})
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------


def _graph(args):
    kind = KIND_ALIASES[args.kind]
    if kind == sp.SUM_PRODUCT:
        return sp.build_graph(kind, ring_make(int(args.q)), args.d)
    Q = _form(args)
    return sp.build_graph(kind, Q.ctx, args.d, Q)


def cmd_cert(args):
    cert = sp.certify(_graph(args))
    _emit(_render([cert.to_dict()], args.format), args.out)
    return cert.verdict


def cmd_spectrum(args):
    g = _graph(args)
    cert = sp.certify(g)
    spec = np.asarray(cert.spectrum, dtype=complex)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "modulus"])
    for z in spec:
        w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))])
    _emit(buf.getvalue(), args.out)
    cert_text = json.dumps(_jsonable(cert.to_dict()), sort_keys=True, indent=2) + "\n"
    if args.cert_out:
        Path(args.cert_out).write_text(cert_text)
    else:
        sys.stderr.write(cert_text)
    if args.gnuplot:
        data = args.out or "eigenvalues.csv"
        Path(args.gnuplot).write_text(
            "set datafile separator ','\n"
            f"set title '{g.kind} q={g.q} d={g.d}'\n"
            "set xlabel 'eigenvalue index'\nset ylabel 'modulus'\n"
            f"set arrow from graph 0, first {cert.bound} to graph 1, first {cert.bound} nohead dt 2\n"
            f"plot '{data}' every ::1 using 0:3 with points pt 7 title '|lambda|'\n"
        )
    return cert.verdict


def cmd_incidence(args):
    Q = _form(args)
    P = _points(args, Q.ctx, Q.q, Q.d)
    S = _spheres(args, Q.ctx, Q.q, Q.d)
    rep = ex.incidence_bound_report(P, S, Q)
    _emit(_render([rep.to_dict()], args.format), args.out)
    return rep.verdict


def cmd_ring_incidence(args):
    ring = ring_make(int(args.q))
    P = _points(args, ring, ring.q, args.d)
    S = _spheres(args, ring, ring.q, args.d)
    rep = ex.ring_incidence_bound_report(P, S, ring, args.d)
    _emit(_render([rep.to_dict()], args.format), args.out)
    return rep.verdict


def cmd_pinned(args):
    Q = _form(args)
    rep = ex.pinned_distance_report(_points(args, Q.ctx, Q.q, Q.d), Q, args.c)
    _emit(_render([rep.to_dict()], args.format), args.out)
    return rep.verdict and rep.average_ok


def cmd_isosceles(args):
    Q = _form(args)
    rep = ex.isosceles_report(_points(args, Q.ctx, Q.q, Q.d), Q)
    _emit(_render([rep.to_dict()], args.format), args.out)
    return rep.identity_ok and rep.bound_ok


def cmd_t2(args):
    Q = _form(args)
    rep = ex.t2_report(_points(args, Q.ctx, Q.q, Q.d), Q)
    _emit(_render([rep.to_dict()], args.format), args.out)
    return rep.verdict


def cmd_ddsubset(args):
    Q = _form(args)
    E = _points(args, Q.ctx, Q.q, Q.d)
    if args.method == "greedy":
        rep = ex.greedy_ddsubset(E, Q, args.order, args.seed)
    else:
        rep = ex.deletion_ddsubset(E, Q, args.seed)
    _emit(_render([rep.to_dict()], args.format), args.out)
    return rep.valid


def cmd_random(args):
    Q = _form(args)
    freq = ex.random_incidence_trials(Q.q, Q.d, Q, args.t, args.trials, args.seed, args.jobs)
    row = {"q": Q.q, "d": Q.d, "t": args.t, "trials": args.trials,
           "seed": args.seed, "frequency": freq}
    _emit(_render([row], args.format), args.out)
    return True


def cmd_suite(args):
    results = run_suite(args.seed, keep_going=args.keep_going,
                        echo=lambda line: print(line, file=sys.stderr))
    rows = [r.to_dict() for r in results]
    if args.format == "csv":
        rows = [{"number": r["number"], "name": r["name"], "passed": r["passed"]} for r in rows]
        _emit(_render(rows, "csv"), args.out)
    else:
        _emit(json.dumps(_jsonable(rows), sort_keys=True, indent=2) + "\n", args.out)
    return all(r.passed for r in results)


COMMANDS = {
    "cert": cmd_cert,
    "spectrum": cmd_spectrum,
    "incidence": cmd_incidence,
    "ring-incidence": cmd_ring_incidence,
    "pinned": cmd_pinned,
    "isosceles": cmd_isosceles,
    "t2": cmd_t2,
    "ddsubset": cmd_ddsubset,
    "random": cmd_random,
    "suite": cmd_suite,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        ok = COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NonConvergence as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK if ok else EXIT_FALSIFIED


def main():
    sys.exit(run())
