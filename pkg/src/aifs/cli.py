"""Command-line interface.

Every subcommand prints a single JSON report to stdout: an envelope with the
tool version, the command name, and a hash of the parsed input, followed by
the command's payload. Rational numbers appear as "p/q" strings so reports
round-trip exactly. Point clouds (attractor, spectrum) can additionally be
written as CSV.

Exit codes:
    0   the requested check passed / the computation succeeded
    1   a negative verdict (failed certification, failing catalog entry,
        counterexample evidence)
    2   usage errors: bad arguments, unreadable input, unsuitable system
    3   a budget or exactness limit prevented a definite answer
"""

from __future__ import annotations

import argparse
import csv
import json
import sys as _sys

from . import __version__
from .errors import (
    AifsError,
    BorderlineExpansive,
    BudgetExceeded,
    ExactnessUnavailable,
    NotExpansive,
    RankDeficient,
)
from .fourier import TruncationPolicy, eval_mu_hat
from .hadamard import check_hadamard, conjecture_probe
from .ifs_core import AffineSystem, attractor
from .serialize import (
    frequencies_from_dict,
    parse_vec,
    report_envelope,
    system_from_dict,
    to_jsonable,
)
from .torus_dynamics import (
    find_zeros,
    finite_bound,
    min_sum_report,
    orbit,
    orbit_distance_bound,
)
from .verify import certify_all_pairs, completeness_q

USAGE_ERRORS = (
    AifsError,
    NotExpansive,
    BorderlineExpansive,
    RankDeficient,
    ValueError,
    KeyError,
    OSError,
    json.JSONDecodeError,
)
LIMIT_ERRORS = (BudgetExceeded, ExactnessUnavailable)


def _load_doc(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_system(path: str):
    doc = _load_doc(path)
    return doc, system_from_dict(doc), frequencies_from_dict(doc)


def _require_freqs(freqs):
    if freqs is None:
        raise AifsError('the system file needs a "frequencies" list')
    return freqs


def _dual(sys: AffineSystem, freqs) -> AffineSystem:
    return AffineSystem(
        R=sys.R.transpose(), digits=tuple(freqs), name=sys.name + "-dual"
    )


def _parse_point(text: str):
    return parse_vec([c.strip() for c in text.split(",")])


def _write_csv(path: str, rows, header) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (input_doc, payload, exit_code)


def _cmd_check_hadamard(args):
    doc, sys, freqs = _load_system(args.system)
    triple = check_hadamard(sys.R, sys.digits, _require_freqs(freqs))
    payload = {
        "certified": triple.certified,
        "defect": triple.defect,
        "size": triple.size,
        "ok": triple.certified and triple.defect <= args.tol,
    }
    if payload["ok"]:
        rc = 0
    elif triple.defect > args.tol:
        rc = 1  # numerically not unitary
    else:
        rc = 3  # small defect but no exact certificate
    return doc, {"hadamard": payload}, rc


def _cmd_attractor(args):
    doc, sys, _ = _load_system(args.system)
    cloud = attractor(
        sys,
        depth=args.depth,
        mode="chaos" if args.chaos else "deterministic",
        count=args.count,
        seed=args.seed,
    )
    pts = cloud.as_floats()
    if args.csv:
        _write_csv(
            args.csv, pts.tolist(), ["x%d" % i for i in range(sys.dim)]
        )
    payload = {
        "points": len(pts),
        "mode": "chaos" if args.chaos else "deterministic",
        "depth": args.depth,
        "min": pts.min(axis=0).tolist(),
        "max": pts.max(axis=0).tolist(),
        "csv": args.csv,
    }
    return doc, {"attractor": payload}, 0


def _cmd_mu_hat(args):
    doc, sys, _ = _load_system(args.system)
    policy = TruncationPolicy(max_terms=args.max_terms, tail_bound=args.tail)
    val = eval_mu_hat(sys, _parse_point(args.x), policy)
    payload = {
        "x": _parse_point(args.x),
        "value": val.value,
        "abs": abs(val.value),
        "error_radius": val.error_radius,
        "exact_zero": val.exact_zero,
        "terms_used": val.terms_used,
    }
    return doc, {"mu_hat": payload}, 0


def _cmd_zeros(args):
    doc, sys, _ = _load_system(args.system)
    zs = find_zeros(sys)
    payload = {
        "points": zs.points,
        "families": [f.describe() for f in zs.families],
        "complete": zs.complete,
        "tag": zs.tag,
        "numeric_points": [list(p) for p in zs.numeric_points],
    }
    rc = 3 if zs.tag == "unavailable" else 0
    return doc, {"zeros": payload}, rc


def _cmd_orbit(args):
    doc, sys, _ = _load_system(args.system)
    res = orbit(sys.R.transpose(), _parse_point(args.x), max_iter=args.max_iter)
    payload = {
        "x": _parse_point(args.x),
        "preperiod": res.preperiod,
        "period": res.period,
        "periodic": res.periodic,
        "cycle": res.cycle,
        "orbit_size": len(res.points),
    }
    return doc, {"orbit": payload}, 0


def _cmd_bound(args):
    doc, sys, _ = _load_system(args.system)
    zs = find_zeros(sys)
    s = sys.R.transpose()
    payload = {"zero_tag": zs.tag, "complete": zs.complete}
    if zs.tag == "unavailable":
        return doc, {"bound": payload}, 3
    if zs.families:
        rep = orbit_distance_bound(s, zs)
        payload["route"] = "distance"
        payload["delta_sq"] = rep.delta_sq
        payload["bound"] = rep.bound
        payload["note"] = rep.note
    else:
        rep = finite_bound(s, zs.points)
        payload["route"] = "finite-orbit"
        payload["orbit_closure_size"] = rep.size
        payload["bound"] = rep.bound
        payload["contains_zero"] = rep.contains_zero
    return doc, {"bound": payload}, 0


def _cmd_dn(args):
    rep = min_sum_report(args.p, args.d, args.n_max)
    doc = {"p": args.p, "d": args.d, "n_max": args.n_max}
    return doc, {"min_sum": rep.describe()}, 0


def _cmd_cycles(args):
    from .cycles_spectrum import extreme_cycles

    doc, sys, freqs = _load_system(args.system)
    dual = _dual(sys, _require_freqs(freqs))
    cycles = extreme_cycles(
        sys, dual, max_period=args.max_period, via=args.via
    )
    payload = {
        "via": args.via,
        "count": len(cycles),
        "cycles": [
            {"points": list(c.points), "period": c.period} for c in cycles
        ],
    }
    return doc, {"extreme_cycles": payload}, 0


def _cmd_spectrum(args):
    from .cycles_spectrum import extreme_cycles, spectrum_from_cycles

    doc, sys, freqs = _load_system(args.system)
    dual = _dual(sys, _require_freqs(freqs))
    cycles = extreme_cycles(sys, dual, max_period=args.max_period, via=args.via)
    ss = spectrum_from_cycles(dual, cycles, args.level)
    if args.csv:
        _write_csv(
            args.csv,
            [[float(c) for c in lam] for lam in ss.elements],
            ["l%d" % i for i in range(sys.dim)],
        )
    payload = {
        "level": ss.level,
        "size": ss.size,
        "cycles": len(cycles),
        "elements": ss.elements if ss.size <= args.print_cap else None,
        "csv": args.csv,
    }
    return doc, {"spectrum": payload}, 0


def _cmd_verify_onb(args):
    from .cycles_spectrum import extreme_cycles, spectrum_from_cycles

    doc, sys, freqs = _load_system(args.system)
    dual = _dual(sys, _require_freqs(freqs))
    cycles = extreme_cycles(sys, dual, max_period=args.max_period, via=args.via)
    ss = spectrum_from_cycles(dual, cycles, args.level)
    pairs = certify_all_pairs(sys, ss.elements)
    qrep = completeness_q(sys, ss.elements, samples=args.samples)
    if pairs.not_orthogonal:
        verdict, rc = "not-orthogonal", 1
    elif pairs.undetermined:
        verdict, rc = "undetermined", 3
    elif qrep.q_max > 1.0 + qrep.error_bound + 1e-8:
        verdict, rc = "parseval-exceeded", 1
    else:
        verdict, rc = "orthogonal-certified", 0
    payload = {
        "level": ss.level,
        "size": ss.size,
        "pairs": pairs.n_pairs,
        "certified": pairs.certified,
        "not_orthogonal": pairs.not_orthogonal,
        "undetermined": pairs.undetermined,
        "bad_pairs": [list(map(list, p)) for p in pairs.bad_pairs],
        "q_min": qrep.q_min,
        "q_max": qrep.q_max,
        "q_error_bound": qrep.error_bound,
        "verdict": verdict,
    }
    return doc, {"verify_onb": payload}, rc


def _cmd_probe(args):
    doc, sys, freqs = _load_system(args.system)
    rep = conjecture_probe(
        sys,
        _require_freqs(freqs),
        level=args.level,
        samples=args.samples,
        pair_budget=args.pair_budget,
    )
    rc = 1 if "counterexample-evidence" in rep.verdicts else 0
    return doc, {"probe": to_jsonable(rep)}, rc


def _cmd_catalog(args):
    from . import catalog

    if args.action == "list":
        names = catalog.entry_names()
        return {"action": "list"}, {"catalog": {"entries": names}}, 0
    names = None if args.name in (None, "all") else [args.name]
    reports = catalog.run_all(names)
    ok = all(r.ok for r in reports)
    payload = {
        "entries": [r.as_dict() for r in reports],
        "ok": ok,
        "failed": [r.name for r in reports if not r.ok],
    }
    return {"action": "run", "name": args.name or "all"}, {
        "catalog": payload
    }, (0 if ok else 1)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aifs",
        description="Orthogonal exponentials and orbit analysis for affine "
        "iterated function systems.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("check-hadamard", _cmd_check_hadamard,
             "certify a digit/frequency pair as a unitary symbol matrix")
    sp.add_argument("system", help="system JSON with a frequencies list")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("attractor", _cmd_attractor, "sample the attractor point cloud")
    sp.add_argument("system")
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--chaos", action="store_true",
                    help="seeded random orbit instead of full words")
    sp.add_argument("--count", type=int, default=4096,
                    help="points in chaos mode")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", help="write the cloud to this CSV file")

    sp = add("mu-hat", _cmd_mu_hat,
             "evaluate the measure transform with certified error")
    sp.add_argument("system")
    sp.add_argument("--x", required=True, help='point, e.g. "1/3,2/5"')
    sp.add_argument("--max-terms", type=int, default=64)
    sp.add_argument("--tail", type=float, default=1e-12)

    sp = add("zeros", _cmd_zeros, "zero set of the symbol on the torus")
    sp.add_argument("system")

    sp = add("orbit", _cmd_orbit,
             "orbit of a point under the transposed integer action")
    sp.add_argument("system")
    sp.add_argument("--x", required=True)
    sp.add_argument("--max-iter", type=int, default=100_000)

    sp = add("bound", _cmd_bound,
             "bound the size of mutually orthogonal exponential families")
    sp.add_argument("system")

    sp = add("dn", _cmd_dn,
             "scaled minima of unit sums at scales p^n (obstruction scan)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n-max", type=int, default=3)

    sp = add("cycles", _cmd_cycles, "extreme cycles of the dual system")
    sp.add_argument("system")
    sp.add_argument("--via", choices=("box", "words"), default="box")
    sp.add_argument("--max-period", type=int, default=12)

    sp = add("spectrum", _cmd_spectrum,
             "candidate spectrum generated from extreme cycles")
    sp.add_argument("system")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--via", choices=("box", "words"), default="box")
    sp.add_argument("--max-period", type=int, default=12)
    sp.add_argument("--csv")
    sp.add_argument("--print-cap", type=int, default=4096,
                    help="omit elements from JSON above this size")

    sp = add("verify-onb", _cmd_verify_onb,
             "certify pairwise orthogonality and Parseval completeness")
    sp.add_argument("system")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--via", choices=("box", "words"), default="box")
    sp.add_argument("--max-period", type=int, default=12)
    sp.add_argument("--samples", type=int, default=16)

    sp = add("probe-conjecture", _cmd_probe,
             "experimental two-sided spectral-pair probe")
    sp.add_argument("system")
    sp.add_argument("--level", type=int, default=None)
    sp.add_argument("--samples", type=int, default=16)
    sp.add_argument("--pair-budget", type=int, default=300)

    sp = add("catalog", _cmd_catalog, "run the bundled example catalog")
    sp.add_argument("action", choices=("list", "run"))
    sp.add_argument("name", nargs="?", default=None,
                    help='entry name or "all"')

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, payload, rc = args.func(args)
    except LIMIT_ERRORS as exc:
        print("limit: %s" % exc, file=_sys.stderr)
        return 3
    except USAGE_ERRORS as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return 2
    envelope = report_envelope(args.command, doc, payload)
    json.dump(to_jsonable(envelope), _sys.stdout, indent=1)
    _sys.stdout.write("\n")
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
