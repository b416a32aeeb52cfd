"""Command line front end.

Subcommands: eval, coeffs, scan, limits, geometry, verify, report. Every
command emits a single UTF-8 JSON document (default) or an RFC-4180 CSV
table to stdout or --output. Floating-point fields appear twice: a display
string at digits-5 significant figures and a machine string carrying the
full stated precision.

Exit codes: 0 success; 1 usage error; 2 mathematical singularity (pole,
vanishing denominator, exceptional point); 3 precision exhaustion;
4 internal inconsistency - including a verification suite that finishes
and reports a failed check, since that means the library disagrees with
itself. Errors print a machine-readable JSON object to stderr.

Lambda tokens: "0", "inf", "i", "-i", or "a+bi" with a mandatory sign and
no spaces (plain reals also accepted). Grids and boxes use
"re0:re1:steps,im0:im1:steps".
"""

import argparse
import csv
import json
import re as _re
import sys

from mpmath import mp

from .atlas import pole_zero_scan
from .backlund import backlund_chain, hamiltonian_value
from .cubic import coeffs
from .curve import qd_geometry, scaling_error
from .errors import P2AiryError, UsageError
from .mpkernel import SeedSpec
from .precision import PrecCtx, ctx_for_order, default_digits, nstr_full, workdps
from .tau import qps_from_tau
from .verify import DEFAULT_SUITES, SUITES, run_suites

try:
    from importlib.metadata import PackageNotFoundError, version

    try:
        _VERSION = version("p2airy")
    except PackageNotFoundError:
        _VERSION = "unknown"
except ImportError:  # pragma: no cover
    _VERSION = "unknown"


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with code 2."""

    def error(self, message):
        raise UsageError(message)


_NUM = r"[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?"
_COMPLEX_RE = _re.compile(rf"({_NUM})(?:([+-](?:\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?)i)?")


def parse_complex(tok):
    """"a", "a+bi", "a-bi" (mandatory sign, no spaces) -> mpf/mpc."""
    m = _COMPLEX_RE.fullmatch(tok.strip())
    if not m:
        raise UsageError(f"cannot parse complex token {tok!r}")
    re_part, im_part = m.group(1), m.group(2)
    if im_part is None:
        return mp.mpf(re_part)
    if im_part in ("+", "-"):
        im_part += "1"
    return mp.mpc(mp.mpf(re_part), mp.mpf(im_part))


def parse_lambda(tok):
    """Seed-parameter token -> 0 | i | -i | inf | complex value."""
    t = tok.strip()
    if t == "0":
        return 0
    if t == "inf":
        return mp.inf
    if t in ("i", "+i"):
        return mp.mpc(0, 1)
    if t == "-i":
        return mp.mpc(0, -1)
    return parse_complex(t)


def parse_grid(tok):
    """"re0:re1:steps,im0:im1:steps" -> ((re0,re1,nx), (im0,im1,ny))."""
    parts = tok.strip().split(",")
    if len(parts) != 2:
        raise UsageError(f"grid must have two comma-separated axes, got {tok!r}")
    out = []
    for part in parts:
        fields = part.split(":")
        if len(fields) != 3:
            raise UsageError(f"axis must be lo:hi:steps, got {part!r}")
        try:
            lo, hi, steps = mp.mpf(fields[0]), mp.mpf(fields[1]), int(fields[2])
        except ValueError:
            raise UsageError(f"cannot parse axis {part!r}")
        if steps < 1:
            raise UsageError("steps must be >= 1")
        if not hi > lo:
            raise UsageError("axis needs hi > lo")
        out.append((lo, hi, steps))
    return tuple(out)


def _num_list(tok, conv, what):
    try:
        return [conv(p) for p in tok.split(",") if p.strip() != ""]
    except ValueError:
        raise UsageError(f"cannot parse {what} list {tok!r}")


# ---------------------------------------------------------------------------
# serialization


def _real_obj(x, digits):
    return {
        "display": mp.nstr(mp.mpf(x), max(digits - 5, 6)),
        "machine": nstr_full(mp.mpf(x), digits),
    }


def _num_obj(x, digits):
    x = mp.mpmathify(x)
    if mp.im(x) == 0:
        return _real_obj(mp.re(x), digits)
    return {"re": _real_obj(mp.re(x), digits), "im": _real_obj(mp.im(x), digits)}


def _machine_pair(x, digits):
    """(re, im) machine strings for CSV cells."""
    x = mp.mpmathify(x)
    return nstr_full(mp.re(x), digits), nstr_full(mp.im(x), digits)


def _write_json(doc, stream):
    json.dump(doc, stream, indent=2, ensure_ascii=False)
    stream.write("\n")


def _write_csv(rows, stream):
    w = csv.writer(stream, lineterminator="\r\n")
    for row in rows:
        w.writerow(row)


def _emit(doc, rows, args):
    """JSON doc or CSV rows to --output / stdout."""
    if args.format == "csv" and rows is None:
        raise UsageError(f"{args.command} output is JSON only")
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            if args.format == "json":
                _write_json(doc, f)
            else:
                _write_csv(rows, f)
    else:
        if args.format == "json":
            _write_json(doc, sys.stdout)
        else:
            _write_csv(rows, sys.stdout)


# ---------------------------------------------------------------------------
# commands


def _check_n(n):
    if n < 1:
        raise UsageError("--n must be >= 1")
    return n


def cmd_eval(args):
    d = args.digits
    ctx = PrecCtx(d)
    n = _check_n(args.n)
    z = parse_complex(args.z)
    lam = parse_lambda(args.lam)
    seed = SeedSpec.from_lambda(lam)
    routes = []
    sols = {}
    if args.route in ("tau", "all"):
        sol = qps_from_tau(n, z, seed, ctx)
        sols["tau"] = (sol.q, sol.qprime, sol.p, sol.sigma)
    if args.route in ("backlund", "all"):
        j = backlund_chain(n, z, seed, ctx)
        with workdps(ctx.dps):
            p = j.qprime + j.q * j.q + j.z / 2
            sig = hamiltonian_value(j.q, p, j.z, n)
        sols["backlund"] = (j.q, j.qprime, p, sig)
    for route, (q, qp, p, sig) in sols.items():
        routes.append(
            {
                "route": route,
                "q": _num_obj(q, d),
                "qprime": _num_obj(qp, d),
                "p": _num_obj(p, d),
                "sigma": _num_obj(sig, d),
            }
        )
    doc = {
        "command": "eval",
        "digits": d,
        "n": n,
        "lambda": args.lam,
        "z": _num_obj(z, d),
        "routes": routes,
    }
    if len(sols) == 2:
        with workdps(ctx.dps):
            doc["deltas"] = {
                "q": _num_obj(abs(sols["tau"][0] - sols["backlund"][0]), d),
                "qprime": _num_obj(abs(sols["tau"][1] - sols["backlund"][1]), d),
            }
    rows = [("route", "quantity", "re", "im")]
    for route, vals in sols.items():
        for name, v in zip(("q", "qprime", "p", "sigma"), vals):
            rows.append((route, name) + _machine_pair(v, d))
    _emit(doc, rows, args)
    return 0


def cmd_coeffs(args):
    d = args.digits
    ctx = PrecCtx(d)
    n = args.n
    if n < 0:
        raise UsageError("--n must be >= 0")
    t = parse_complex(args.t)
    lam = parse_lambda(args.lam)
    rec = coeffs(n, t, args.N, lam, ctx)
    quantities = (
        ("D", rec.D_n),
        ("h", rec.h_n),
        ("beta", rec.beta_n),
        ("gamma2", rec.gamma2_n),
        ("p", rec.p_nn1),
    )
    doc = {
        "command": "coeffs",
        "digits": d,
        "n": n,
        "N": nstr_full(mp.mpf(args.N), d),
        "t": _num_obj(t, d),
        "lambda": args.lam,
    }
    doc.update({name: _num_obj(v, d) for name, v in quantities})
    rows = [("quantity", "re", "im")]
    rows += [(name,) + _machine_pair(v, d) for name, v in quantities]
    _emit(doc, rows, args)
    return 0


def cmd_scan(args):
    d = args.digits
    ctx = PrecCtx(d)
    n = _check_n(args.n)
    lam = parse_lambda(args.lam)
    (re0, re1, nx), (im0, im1, ny) = parse_grid(args.box)
    rep = pole_zero_scan(n, lam, (re0, re1, im0, im1), (nx, ny), ctx, maxdepth=args.maxdepth)
    entries = []
    for e in rep.entries:
        entries.append(
            {
                "location": _num_obj(e.location, d),
                "kind": e.kind,
                "source": e.source,
                "winding": e.winding,
                "tau_distance": None
                if e.tau_distance is None
                else _real_obj(e.tau_distance, d),
            }
        )
    doc = {
        "command": "scan",
        "digits": d,
        "n": n,
        "lambda": args.lam,
        "box": [nstr_full(v, d) for v in (re0, re1, im0, im1)],
        "grid": [nx, ny],
        "total_winding": rep.total_winding,
        "flags": list(rep.flags),
        "entries": entries,
    }
    rows = [("re", "im", "kind", "source", "winding", "tau_distance")]
    for e in rep.entries:
        re_s, im_s = _machine_pair(e.location, d)
        rows.append(
            (
                re_s,
                im_s,
                e.kind,
                e.source,
                e.winding,
                "" if e.tau_distance is None else nstr_full(e.tau_distance, d),
            )
        )
    _emit(doc, rows, args)
    return 0


def cmd_limits(args):
    lam = parse_lambda(args.lam)
    ns = _num_list(args.n, int, "n")
    ts = _num_list(args.t, mp.mpf, "t")
    which = [w.strip() for w in args.which.split(",") if w.strip()]
    if not ns or not ts or not which:
        raise UsageError("limits needs non-empty --n, --t and --which lists")
    for w in which:
        if w not in ("q", "p", "sigma"):
            raise UsageError(f"unknown quantity {w!r}; use q, p or sigma")
    d = args.digits
    rows = [("n", "t", "which", "error")]
    out_rows = []
    for n in ns:
        ctx = PrecCtx(d) if args.explicit_digits else ctx_for_order(n)
        for t in ts:
            for w in which:
                err = abs(scaling_error(n, t, lam, w, ctx))
                out_rows.append(
                    {
                        "n": n,
                        "t": nstr_full(t, d),
                        "which": w,
                        "error": _real_obj(err, d),
                    }
                )
                rows.append((n, nstr_full(t, d), w, nstr_full(err, d)))
    doc = {
        "command": "limits",
        "digits": d,
        "lambda": args.lam,
        "rows": out_rows,
    }
    _emit(doc, rows, args)
    return 0


def cmd_geometry(args):
    d = args.digits
    ctx = PrecCtx(d)
    c, t0 = qd_geometry(ctx, resolution=args.resolution)
    doc = {
        "command": "geometry",
        "digits": d,
        "c": _real_obj(c, d),
        "t0": _real_obj(t0, d),
    }
    rows = [("c", "t0"), (nstr_full(c, d), nstr_full(t0, d))]
    _emit(doc, rows, args)
    return 0


def _check_docs(results, d):
    return [
        {
            "suite": r.suite,
            "name": r.name,
            "passed": r.passed,
            "residual": None if r.residual is None else nstr_full(r.residual, d),
            "tolerance": None if r.tolerance is None else nstr_full(r.tolerance, d),
            "detail": r.detail,
        }
        for r in results
    ]


def cmd_verify(args):
    d = args.digits
    ctx = PrecCtx(d)
    names = args.suite if args.suite else None
    if names is not None:
        for nm in names:
            if not nm.strip():
                raise UsageError("empty suite selection")
    results = run_suites(names, ctx)
    ok = all(r.passed for r in results)
    doc = {
        "command": "verify",
        "digits": d,
        "ok": ok,
        "results": _check_docs(results, d),
    }
    rows = [("suite", "name", "passed", "residual", "tolerance", "detail")]
    for r in results:
        rows.append(
            (
                r.suite,
                r.name,
                "true" if r.passed else "false",
                "" if r.residual is None else nstr_full(r.residual, d),
                "" if r.tolerance is None else nstr_full(r.tolerance, d),
                r.detail,
            )
        )
    _emit(doc, rows, args)
    return 0 if ok else 4


def cmd_report(args):
    d = args.digits
    ctx = PrecCtx(d)
    c, t0 = qd_geometry(ctx)
    results = run_suites(None, ctx)
    ok = all(r.passed for r in results)
    doc = {
        "command": "report",
        "package": {"name": "p2airy", "version": _VERSION},
        "digits": d,
        "geometry": {"c": _real_obj(c, d), "t0": _real_obj(t0, d)},
        "checks": _check_docs(results, d),
        "ok": ok,
    }
    _emit(doc, None, args)
    return 0 if ok else 4


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = _Parser(
        prog="p2airy",
        description="Multi-precision laboratory for the Airy solutions of "
        "Painlevé II and their determinant / orthogonal-polynomial routes.",
    )
    p.add_argument("--version", action="version", version=f"p2airy {_VERSION}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, digits_default=None):
        sp.add_argument(
            "--digits",
            type=int,
            default=digits_default,
            help="stated decimal precision (default: PAINLEVE_DIGITS or 40)",
        )
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", default=None, help="write to file instead of stdout")

    sp = sub.add_parser("eval", help="q, q', p, sigma at one point by route")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z", required=True, help='complex token, e.g. "0" or "1.5-0.2i"')
    sp.add_argument("--lambda", dest="lam", default="0")
    sp.add_argument("--route", choices=("tau", "backlund", "all"), default="all")
    common(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("coeffs", help="recurrence data of the cubic ensemble")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", required=True, help="weight parameter (complex token)")
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", default="0")
    common(sp)
    sp.set_defaults(fn=cmd_coeffs)

    sp = sub.add_parser("scan", help="pole/zero field scan over a box")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", default="0")
    sp.add_argument(
        "--box", required=True, help='"re0:re1:steps,im0:im1:steps" cell grid'
    )
    sp.add_argument("--maxdepth", type=int, default=4)
    common(sp)
    sp.set_defaults(fn=cmd_scan)

    sp = sub.add_parser("limits", help="scaling-limit errors for slope plots")
    sp.add_argument("--n", required=True, help="comma list of orders, e.g. 12,24,48")
    sp.add_argument("--t", required=True, help="comma list of parameters")
    sp.add_argument("--which", default="q,p,sigma")
    sp.add_argument("--lambda", dest="lam", default="0")
    common(sp)
    sp.set_defaults(fn=cmd_limits)

    sp = sub.add_parser("geometry", help="loop crossing c and boundary t0")
    sp.add_argument("--resolution", type=int, default=1600)
    common(sp)
    sp.set_defaults(fn=cmd_geometry)

    sp = sub.add_parser("verify", help="run named verification suites")
    sp.add_argument(
        "--suite",
        action="append",
        help=f"suite name or 'all' (repeatable); known: {', '.join(SUITES)}; "
        f"default: {', '.join(DEFAULT_SUITES)}",
    )
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("report", help="one-document bundle: geometry + checks")
    common(sp)
    sp.set_defaults(fn=cmd_report)

    return p


def _error_doc(e):
    doc = {
        "error": {
            "type": e.__class__.__name__,
            "message": str(e),
            "exit_code": getattr(e, "exit_code", 4),
        }
    }
    loc = getattr(e, "location", None)
    if loc is not None:
        doc["error"]["location"] = mp.nstr(mp.mpmathify(loc), 12)
    sug = getattr(e, "suggested_digits", None)
    if sug is not None:
        doc["error"]["suggested_digits"] = int(sug)
    return doc


def main(argv=None):
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if getattr(args, "digits", None) is None:
            args.explicit_digits = False
            args.digits = default_digits()
        else:
            args.explicit_digits = True
        # ambient precision for token parsing and serialization; the range
        # check (digits >= 16) also happens here, before any work
        with workdps(PrecCtx(args.digits).dps):
            return args.fn(args)
    except P2AiryError as e:
        json.dump(_error_doc(e), sys.stderr, ensure_ascii=False)
        sys.stderr.write("\n")
        return getattr(e, "exit_code", 4)
    except KeyboardInterrupt:  # pragma: no cover
        raise
    except Exception as e:  # pragma: no cover - defensive catch-all
        json.dump(
            {"error": {"type": e.__class__.__name__, "message": str(e), "exit_code": 4}},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
