"""Named verification suites tying the three evaluation routes together.

Each suite returns CheckResult records; a suite passes when every record
does. The suites mirror the package's main claims:

  route-agreement     tau route vs Bäcklund recursion on random samples
  defining-residuals  P_II / P_XXXIV / S_II residuals and H = sigma
  bridges             determinant/Painleve bridge + spot values at z = 0
  strings             discrete string equations over an (n, t, N) grid
  proof-identities    derivative identities, beta-difference, integral law
  scaling             error-halving toward the spectral-curve limit
  geometry            loop crossing c and boundary parameter t0
  pole-zero           pole/zero field structure and winding bookkeeping
  monotonicity        beta/h monotonicity sweep
  negative-control    the squared-q' recursion variant must disagree

The negative control inverts its verdict: it passes exactly when the
deliberately wrong Bäcklund denominator breaks route agreement, which pins
down that the standard denominator is the one the other nine suites certify.
"""

import random
from dataclasses import dataclass

from mpmath import mp

from .atlas import airy_first_zero, default_sweep_grid, monotonicity_sweep, pole_zero_scan
from .backlund import (
    backlund_chain,
    hamiltonian_value,
    residual_p2,
    residual_p34,
    residual_s2,
    s2_chain,
)
from .cubic import (
    beta_difference_residual,
    bridge_theorem,
    der_hn_residual,
    der_lnD_residual,
    der_pn_residual,
    integral_identity_residual,
    string_residuals,
)
from .curve import qd_geometry, scaling_error, x_branch
from .errors import SingularityError, UsageError
from .mpkernel import SeedSpec
from .precision import PrecCtx, ctx_for_order, workdps
from .tau import qps_from_tau

DEFAULT_SEED = 20260815
_LAMBDAS = (0, mp.mpc(0, 1), mp.mpc(0, -1), 1, mp.inf)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    residual: object  # magnitude driving the verdict (None for structural)
    tolerance: object
    detail: str = ""


def _tol_result(suite, name, worst, tol, detail=""):
    return CheckResult(suite, name, bool(worst <= tol), worst, tol, detail)


def _lam_tag(lam):
    if lam is mp.inf or (isinstance(lam, str) and lam == "inf"):
        return "inf"
    lam = mp.mpmathify(lam)
    if lam == 0:
        return "0"
    if lam == mp.mpc(0, 1):
        return "i"
    if lam == mp.mpc(0, -1):
        return "-i"
    if mp.im(lam) == 0 and lam == mp.floor(mp.re(lam)):
        return str(int(mp.re(lam)))
    return mp.nstr(lam, 8)


def _sample_points(count, rng, seed, ctx, n_max, radius=3):
    """count z with |z| <= radius at which orders 1..n_max are regular.

    Draws land in the punctured disk; any draw that hits a pole, a
    recursion singularity or a vanishing p for *either* route is replaced,
    so downstream checks never divide by a near-zero tau.
    """
    pts = []
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 60 * count:
            raise UsageError("sample rejection loop failed to fill the quota")
        r = radius * mp.sqrt(mp.mpf(rng.random()))
        th = 2 * mp.pi * mp.mpf(rng.random())
        z = mp.mpc(r * mp.cos(th), r * mp.sin(th))
        try:
            backlund_chain(n_max, z, seed, ctx)
            for n in range(1, n_max + 1):
                qps_from_tau(n, z, seed, ctx)
        except SingularityError:
            continue
        pts.append(z)
    return pts


def suite_route_agreement(
    ctx=None, n_max=10, samples=20, seed=DEFAULT_SEED, denominator="standard"
):
    """tau-route and Bäcklund-route q, q' agree to 10^{-digits/2}."""
    ctx = ctx or PrecCtx(40)
    tol = mp.mpf(10) ** -(ctx.digits // 2)
    out = []
    with workdps(ctx.dps):
        for idx, lam in enumerate(_LAMBDAS):
            sd = SeedSpec.from_lambda(lam)
            rng = random.Random(seed + idx)
            pts = _sample_points(samples, rng, sd, ctx, n_max)
            worst, where = mp.mpf(0), ""
            for z in pts:
                for n in range(1, n_max + 1):
                    try:
                        jet = backlund_chain(n, z, sd, ctx, denominator=denominator)
                    except SingularityError:
                        # pts are regular for the standard chain, so only a
                        # variant denominator can land here; report it as
                        # total divergence
                        worst = mp.inf
                        where = f"variant chain singular at z={mp.nstr(z, 8)}"
                        break
                    sol = qps_from_tau(n, z, sd, ctx)
                    d = max(abs(sol.q - jet.q), abs(sol.qprime - jet.qprime))
                    if d > worst:
                        worst, where = d, f"n={n} z={mp.nstr(z, 8)}"
            out.append(
                _tol_result(
                    "route-agreement",
                    f"lambda={_lam_tag(lam)}",
                    worst,
                    tol,
                    f"{samples} pts, n <= {n_max}, worst at {where}",
                )
            )
    return out


def suite_defining_residuals(ctx=None, n_max=10, samples=20, seed=DEFAULT_SEED):
    """ODE residuals for q, p, sigma and the Hamiltonian identity H = sigma."""
    ctx = ctx or PrecCtx(40)
    tol_ode = mp.mpf(10) ** -(ctx.digits // 4)
    tol_h = mp.mpf(10) ** -(ctx.digits // 2)
    out = []
    with workdps(ctx.dps):
        for idx, lam in enumerate(_LAMBDAS):
            sd = SeedSpec.from_lambda(lam)
            rng = random.Random(seed + 1000 + idx)
            pts = _sample_points(samples, rng, sd, ctx, n_max)
            worst = {"p2": mp.mpf(0), "p34": mp.mpf(0), "s2": mp.mpf(0), "ham": mp.mpf(0)}
            for k, z in enumerate(pts):
                n = (k % n_max) + 1
                try:
                    r = residual_p2(
                        n, z, ctx, lambda zz, c: backlund_chain(n, zz, sd, c).q
                    )
                    worst["p2"] = max(worst["p2"], abs(r))
                    r = residual_p34(
                        n, z, ctx, lambda zz, c: qps_from_tau(n, zz, sd, c).p
                    )
                    worst["p34"] = max(worst["p34"], abs(r))
                except SingularityError:
                    continue  # FD stencil straddled a pole; the draw itself is clean
                sol = qps_from_tau(n, z, sd, ctx)
                worst["s2"] = max(worst["s2"], abs(residual_s2(*s2_chain(sol), z=sol.z, n=n)))
                h = hamiltonian_value(sol.q, sol.p, sol.z, sol.n)
                worst["ham"] = max(worst["ham"], abs(h - sol.sigma))
            tag = _lam_tag(lam)
            out.append(_tol_result("defining-residuals", f"P2 lambda={tag}", worst["p2"], tol_ode))
            out.append(_tol_result("defining-residuals", f"P34 lambda={tag}", worst["p34"], tol_ode))
            out.append(_tol_result("defining-residuals", f"S2 lambda={tag}", worst["s2"], tol_ode))
            out.append(_tol_result("defining-residuals", f"H=sigma lambda={tag}", worst["ham"], tol_h))
    return out


_SPOTS = (  # (label, n, which, value, abs tol)
    ("q1(0;0)", 1, "q", "-0.578617", "1e-5"),
    ("p1(0;0)", 1, "p", "0.669594", "1e-5"),
    ("sigma1(0;0)", 1, "sigma", "0.578617", "1e-5"),
    ("q2(0;0)", 2, "q", "-0.91482", "1e-4"),
)


def suite_bridges(ctx=None, n_max=8):
    """Bridge identities for n <= n_max, N in {1, 3, n}, lambda in {0, i, inf}."""
    ctx = ctx or PrecCtx(40)
    tol = mp.mpf(10) ** -(ctx.digits // 2)
    out = []
    with workdps(ctx.dps):
        zs = (mp.mpf("0.4"), mp.mpc("-0.6", "0.35"))
        for lam in (0, mp.mpc(0, 1), mp.inf):
            worst, where = mp.mpf(0), ""
            for n in range(1, n_max + 1):
                for N in sorted({1, 3, n}):
                    for z in zs:
                        res = bridge_theorem(n, z, N, lam, ctx)
                        d = max(abs(r) for r in res)
                        if d > worst:
                            worst, where = d, f"n={n} N={N} z={mp.nstr(z, 6)}"
            out.append(
                _tol_result(
                    "bridges", f"lambda={_lam_tag(lam)}", worst, tol, f"worst at {where}"
                )
            )
        sd = SeedSpec.from_lambda(0)
        for label, n, which, val, stol in _SPOTS:
            sol = qps_from_tau(n, mp.mpf(0), sd, ctx)
            got = getattr(sol, which)
            out.append(
                _tol_result(
                    "bridges", label, abs(got - mp.mpf(val)), mp.mpf(stol),
                    f"value {mp.nstr(got, 10)}",
                )
            )
    return out


def suite_strings(ctx=None, n_max=10):
    """String-equation residuals over n <= n_max, t in {0,0.5,1.7,4}, N in {1,5}."""
    ctx = ctx or PrecCtx(40)
    tol = mp.mpf(10) ** -(ctx.digits // 2)
    out = []
    with workdps(ctx.dps):
        for N in (1, 5):
            worst, where = mp.mpf(0), ""
            for t in ("0", "0.5", "1.7", "4"):
                for n in range(1, n_max + 1):
                    r1, r2 = string_residuals(n, mp.mpf(t), N, ctx)
                    d = max(abs(r1), abs(r2))
                    if d > worst:
                        worst, where = d, f"n={n} t={t}"
            out.append(
                _tol_result("strings", f"N={N}", worst, tol, f"worst at {where}")
            )
    return out


def suite_proof_identities(ctx=None):
    """Derivative identities, beta-difference law and the integral identity."""
    ctx = ctx or PrecCtx(40)
    tol = mp.mpf(10) ** -(ctx.digits // 4)
    out = []
    with workdps(ctx.dps):
        grid = [
            (n, mp.mpf(t), N)
            for n in (1, 2, 3, 5, 8)
            for t in ("0", "1.3", "-0.4")
            for N in (1, 3)
        ]
        for label, fun in (
            ("d/dt h_n", der_hn_residual),
            ("d/dt log D", der_lnD_residual),
            ("h-ratio derivative", der_pn_residual),
        ):
            worst, where = mp.mpf(0), ""
            for n, t, N in grid:
                r = abs(fun(n, t, N, ctx))
                if r > worst:
                    worst, where = r, f"n={n} t={mp.nstr(t, 4)} N={N}"
            out.append(_tol_result("proof-identities", label, worst, tol, f"worst at {where}"))
        worst, where = mp.mpf(0), ""
        for n in (1, 2, 5):
            for t in ("0", "1.3", "-0.4"):
                r = abs(beta_difference_residual(n, mp.mpf(t), ctx))
                if r > worst:
                    worst, where = r, f"n={n} t={t}"
        out.append(_tol_result("proof-identities", "beta difference", worst, tol, f"worst at {where}"))
        worst, where = mp.mpf(0), ""
        for n in (0, 1, 2):
            for t in ("0", "0.8"):
                r = abs(integral_identity_residual(n, mp.mpf(t), PrecCtx(30)))
                if r > worst:
                    worst, where = r, f"n={n} t={t}"
        out.append(
            _tol_result(
                "proof-identities", "integral identity", worst, mp.mpf("1e-8"),
                f"relative, worst at {where}",
            )
        )
    return out


_RATIO_BANDS = {"q": ("0.3", "0.7"), "p": ("0.15", "0.35"), "sigma": ("0.15", "0.35")}


def suite_scaling(ts=("-0.5", "0", "1", "2"), ns=(12, 24, 48, 96)):
    """Error ratios e_{2n}/e_n toward the spectral-curve limit, lambda = 0.

    q errors decay like 1/n (ratio band [0.3, 0.7]), p and sigma like 1/n^2
    (band [0.15, 0.35]); at t = 0 the limit targets are exactly
    (-1, 1, 0.75) because x_0(0) = 1.
    """
    out = []
    errors = {}
    with workdps(PrecCtx(40).dps):
        for ts_ in ts:
            t = mp.mpf(ts_)
            for n in ns:
                for which in ("q", "p", "sigma"):
                    errors[(ts_, n, which)] = abs(scaling_error(n, t, 0, which))
        for which in ("q", "p", "sigma"):
            lo, hi = (mp.mpf(b) for b in _RATIO_BANDS[which])
            ok, worst_lo, worst_hi, detail = True, mp.inf, mp.mpf(0), []
            for ts_ in ts:
                for n in ns[:-1]:
                    r = errors[(ts_, 2 * n, which)] / errors[(ts_, n, which)]
                    worst_lo, worst_hi = min(worst_lo, r), max(worst_hi, r)
                    if not lo <= r <= hi:
                        ok = False
                        detail.append(f"t={ts_} n={n}: {mp.nstr(r, 5)}")
            out.append(
                CheckResult(
                    "scaling",
                    f"{which}-error ratio in [{lo},{hi}]",
                    ok,
                    None,
                    None,
                    detail="; ".join(detail)
                    or f"ratios in [{mp.nstr(worst_lo, 4)}, {mp.nstr(worst_hi, 4)}]",
                )
            )
        x0 = x_branch(mp.mpf(0), 0, PrecCtx(40))
        targets = (-x0, 1 / x0, x0 - 1 / (2 * x0) ** 2)
        out.append(
            _tol_result(
                "scaling",
                "t=0 targets (-1, 1, 0.75)",
                max(abs(targets[0] + 1), abs(targets[1] - 1), abs(targets[2] - mp.mpf("0.75"))),
                mp.mpf(10) ** -30,
                "limit values from x_0(0)",
            )
        )
        ntop = max(n for n in ns if n <= 48)
        worst_top = max(errors[("0", ntop, w)] for w in ("q", "p", "sigma"))
        out.append(
            _tol_result(
                "scaling", f"t=0 rescaled data near targets at n={ntop}", worst_top,
                mp.mpf("0.05"), "absolute deviation",
            )
        )
    return out


def suite_geometry(ctx=None):
    """Loop crossing c = 0.635 +- 0.003 and t0 = -1.0005424 +- 5e-5."""
    ctx = ctx or PrecCtx(40)
    with workdps(ctx.dps):
        c, t0 = qd_geometry(ctx)
    return [
        _tol_result(
            "geometry", "loop crossing c", abs(c - mp.mpf("0.635")),
            mp.mpf("0.003"), f"c = {mp.nstr(c, 12)}",
        ),
        _tol_result(
            "geometry", "boundary parameter t0", abs(t0 - mp.mpf("-1.0005424")),
            mp.mpf("5e-5"), f"t0 = {mp.nstr(t0, 12)}",
        ),
    ]


def suite_polezero(ctx=None):
    """Field structure for q_3 on the reference box plus the n = 1 pole.

    The reference box sits in the pole-free region (the field of q_3 at
    lambda = 0 lives along the positive real axis; tau_2 has no zeros with
    Re z <= 2 at all), so a second window over the first real tau_3 zeros
    keeps the pole-provenance check non-vacuous.
    """
    ctx = ctx or PrecCtx(40)
    tol = mp.mpf(10) ** -10
    out = []
    with workdps(ctx.dps):
        rep = pole_zero_scan(3, 0, (-8, 2, -6, 6), (5, 6), ctx)
        bad = [e for e in rep.poles if e.tau_distance is None or e.tau_distance > tol]
        out.append(
            CheckResult(
                "pole-zero",
                "n=3 poles sit on tau_2 tau_3 zeros",
                not bad,
                max((e.tau_distance for e in rep.poles), default=None),
                tol,
                f"{len(rep.poles)} poles, {len(rep.zeros)} zeros in box",
            )
        )
        entry_w = sum(e.winding for e in rep.entries)
        out.append(
            CheckResult(
                "pole-zero",
                "winding bookkeeping exact",
                (not rep.flags) and entry_w == rep.total_winding,
                None,
                None,
                f"total {rep.total_winding}, entries {entry_w}, flags {len(rep.flags)}",
            )
        )
        repw = pole_zero_scan(3, 0, (3.5, 6.5, -0.6, 0.6), (3, 2), ctx)
        worstw = max((e.tau_distance for e in repw.poles), default=mp.inf)
        ww = sum(e.winding for e in repw.entries)
        out.append(
            CheckResult(
                "pole-zero",
                "first real tau_3 poles pinned",
                len(repw.poles) >= 2
                and worstw <= tol
                and not repw.flags
                and ww == repw.total_winding,
                worstw,
                tol,
                f"{len(repw.poles)} poles, {len(repw.zeros)} zeros on the "
                f"real-axis window, winding {repw.total_winding}",
            )
        )
        z1 = -mp.mpf(2) ** (mp.mpf(1) / 3) * airy_first_zero(ctx)
        rep1 = pole_zero_scan(
            1, 0, (float(z1) - 0.7, float(z1) + 0.7, -0.6, 0.6), (2, 2), ctx
        )
        pole_d = min(
            (abs(e.location - z1) for e in rep1.poles), default=mp.inf
        )
        out.append(
            _tol_result(
                "pole-zero", "n=1 pole at -2^{1/3} iota_1", pole_d, tol,
                f"{len(rep1.poles)} pole(s) in window",
            )
        )
    return out


def suite_monotonicity(ctx=None, n_max=20, points=50):
    """Full sweep: zero violations/indeterminates; eventual beta' threshold."""
    ctx = ctx or PrecCtx(60)
    with workdps(ctx.dps):
        rep = monotonicity_sweep(n_max, default_sweep_grid(ctx, points=points), ctx)
    below = sorted({r.n for r in rep.below_threshold})
    return [
        CheckResult(
            "monotonicity",
            f"sweep n<={n_max} on {points}-pt grid",
            rep.ok and not rep.skipped,
            None,
            None,
            f"violations {len(rep.violations)}, indeterminate "
            f"{len(rep.indeterminates)}, beta'_{{n-1}} holds from n="
            f"{rep.hold_from} (below at n in {below})",
        )
    ]


def suite_negative_control(ctx=None):
    """The squared-q' denominator variant must break route agreement."""
    ctx = ctx or PrecCtx(40)
    res = suite_route_agreement(
        ctx, n_max=3, samples=3, denominator="squared-qprime"
    )
    failed = [r for r in res if not r.passed]
    worst = max(r.residual for r in res)
    return [
        CheckResult(
            "negative-control",
            "squared-q' variant disagrees",
            len(failed) == len(res) and worst > mp.mpf("1e-6"),
            worst,
            None,
            f"{len(failed)}/{len(res)} lambda classes diverged, worst delta "
            f"{mp.nstr(worst, 4)}",
        )
    ]


SUITES = {
    "route-agreement": suite_route_agreement,
    "defining-residuals": suite_defining_residuals,
    "bridges": suite_bridges,
    "strings": suite_strings,
    "proof-identities": suite_proof_identities,
    "scaling": suite_scaling,
    "geometry": suite_geometry,
    "pole-zero": suite_polezero,
    "monotonicity": suite_monotonicity,
    "negative-control": suite_negative_control,
}

# the 40-digit identity suites; the long scans run on request or under "all"
DEFAULT_SUITES = (
    "route-agreement",
    "defining-residuals",
    "bridges",
    "strings",
    "proof-identities",
    "geometry",
    "negative-control",
)


def run_suites(names=None, ctx=None):
    """Run the named suites (default: the 40-digit set) -> list[CheckResult].

    names may be suite names or "all"; unknown names raise UsageError.
    The scaling suite manages its own per-order precision and takes no ctx.
    """
    if names is None:
        names = DEFAULT_SUITES
    elif isinstance(names, str):
        names = (names,)
    if any(n == "all" for n in names):
        names = tuple(SUITES)
    if not names:
        raise UsageError("empty suite selection")
    out = []
    for name in names:
        if name not in SUITES:
            raise UsageError(
                f"unknown suite {name!r}; known: {', '.join(SUITES)} or 'all'"
            )
        fun = SUITES[name]
        out.extend(fun() if name == "scaling" else fun(ctx))
    return out
