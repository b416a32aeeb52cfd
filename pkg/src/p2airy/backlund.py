"""Bäcklund recursion for the Airy solutions and defining-equation residuals.

The chain starts from q_1 = -phi'/phi (so q_1' = z/2 + q_1^2 exactly, by the
seed ODE phi'' = -(z/2) phi) and climbs with

    q_{n+1} = -q_n - 2n / (2 q_n^2 + 2 q_n' + z),

the standard Painleve II Bäcklund step for alpha = n - 1/2. A variant with
the denominator's q' squared is kept behind denominator="squared-qprime"
purely as a negative control: it diverges from the tau route at n = 2 (the
route-agreement suite pins that down). Negative indices come from the
reflection q_n = -q_{-n+1}.

Residual evaluators for P_II, P_XXXIV and the sigma-form S_II measure how
well a route's output solves its defining ODE. Second derivatives that the
ODE closure cannot supply are taken by central finite differences with step
h = 10^{-digits/3} at elevated internal precision.
"""

from dataclasses import dataclass

from mpmath import mp

from .errors import (
    BacklundSingularityError,
    AtPoleError,
    InsufficientPrecisionError,
    PVanishesError,
    UsageError,
)
from .precision import PrecCtx, mag10, series_pad, workdps
from .mpkernel import _airy_pair_raw


@dataclass(frozen=True)
class QJet:
    """(q, q') at one point for index n (alpha = n - 1/2)."""

    n: int
    z: object
    q: object
    qprime: object


def q1_jet(z, seed, ctx):
    """Chain seed: q_1 = -phi'/phi, q_1' = z/2 + q_1^2 (exact)."""
    z = mp.mpmathify(z)
    with workdps(ctx.dps + series_pad(z) + 5):
        c = mp.mpf(2) ** mp.mpf("-1/3")
        ai, aip, bi, bip = _airy_pair_raw(-c * z)
        t1, t2 = seed.c1 * ai, seed.c2 * bi
        phi = t1 + t2
        phip = -c * (seed.c1 * aip + seed.c2 * bip)
        scale = max(abs(t1), abs(t2))
        pm, sm = mag10(phi), mag10(scale)
        # two ways to sit on a pole of q_1: the seed terms cancel to
        # roundoff, or phi is genuinely at a (simple) zero, which the
        # Newton distance |phi/phi'| measures since phi' cannot vanish there
        cancelled = pm is None or (sm is not None and pm < sm - (ctx.digits - 10))
        if cancelled or abs(phi) < abs(phip) * mp.mpf(10) ** -(ctx.digits - 10):
            raise AtPoleError(
                f"seed function vanishes to precision at z={mp.nstr(z, 12)}",
                location=z,
            )
        q = -phip / phi
        qp = z / 2 + q * q
    return QJet(n=1, z=z, q=q, qprime=qp)


def q_second(j):
    """q'' from the defining ODE at alpha = n - 1/2 (route-internal closure)."""
    return 2 * j.q ** 3 + j.z * j.q + (mp.mpf(j.n) - mp.mpf(1) / 2)


def _step_core(j, ctx, denominator):
    q, qp, z, n = j.q, j.qprime, j.z, mp.mpf(j.n)
    qpp = q_second(j)
    if denominator == "standard":
        d = 2 * q * q + 2 * qp + z
        dp = 4 * q * qp + 2 * qpp + 1
        scale = max(abs(2 * q * q), abs(2 * qp), abs(z), mp.mpf(1))
    elif denominator == "squared-qprime":
        d = 2 * q * q + 2 * qp * qp + z
        dp = 4 * q * qp + 4 * qp * qpp + 1
        scale = max(abs(2 * q * q), abs(2 * qp * qp), abs(z), mp.mpf(1))
    else:
        raise UsageError(f"unknown denominator variant: {denominator!r}")
    dm, sm = mag10(d), mag10(scale)
    if dm is None or dm < sm - (ctx.digits - 8):
        raise BacklundSingularityError(
            f"recursion denominator vanishes to precision at z={mp.nstr(j.z, 12)}",
            location=j.z,
        )
    # digits cancelled forming d; the chain driver budgets for these
    cost = max(0, (sm or 0) - dm)
    twon = 2 * n
    jet = QJet(n=j.n + 1, z=j.z, q=-q - twon / d, qprime=-qp + twon * dp / (d * d))
    return jet, cost


def backlund_step(j, ctx, denominator="standard"):
    """One step n -> n+1. The q' derivative closes through d'(z).

    denominator="squared-qprime" selects the misprinted variant (negative
    control); its d' is made consistent with that d so the control fails for
    a mathematical reason, not a bookkeeping one.
    """
    jet, _ = _step_core(j, ctx, denominator)
    return jet


def reflect(j):
    """Index reflection n -> 1-n: negates q and q'."""
    return QJet(n=1 - j.n, z=j.z, q=-j.q, qprime=-j.qprime)


def backlund_chain(n, z, seed, ctx, denominator="standard"):
    """QJet at index n from q_1 by stepping (n >= 1) or step-then-reflect.

    Each step that passes near a pole of the next index cancels digits in
    its denominator, so the chain runs padded, tallies the measured losses,
    and re-runs with a larger pad when they exceed the budget.
    """
    if n < 1:
        j = backlund_chain(1 - n, z, seed, ctx, denominator=denominator)
        return reflect(j)
    pad = 10
    for _ in range(4):
        with workdps(ctx.dps + pad):
            j = q1_jet(z, seed, ctx)
            lost = 0
            for _ in range(n - 1):
                j, cost = _step_core(j, ctx, denominator)
                lost += cost
        if lost <= pad - 5:
            return j
        pad = lost + 15
    raise InsufficientPrecisionError(
        f"Bäcklund chain to n={n} keeps outrunning its precision budget "
        f"at z={mp.nstr(z, 12)}",
        suggested_digits=ctx.digits + pad,
    )


def hamiltonian_value(q, p, z, n):
    """H = p^2/2 - (q^2 + z/2) p - n q; equals sigma_n on solutions."""
    return p * p / 2 - (q * q + z / 2) * p - mp.mpf(n) * q


def _fd_ctx(ctx):
    # FD truncation is O(h^2) = 10^{-2 digits/3}; evaluate the stencil at
    # doubled digits so roundoff 10^{-2 digits + 2 digits/3} never leads
    return PrecCtx(2 * ctx.digits)


def _fd_step(ctx):
    return mp.mpf(10) ** -(ctx.digits // 3)


def residual_p2(n, z, ctx, qfun):
    """P_II residual q''_num - (2q^3 + zq + alpha), alpha = n - 1/2.

    qfun(z, ctx) must return the route's q at the requested precision; the
    second derivative is the central difference with step 10^{-digits/3}.
    """
    z = mp.mpmathify(z)
    ectx = _fd_ctx(ctx)
    with workdps(ectx.dps):
        h = _fd_step(ctx)
        q0 = qfun(z, ectx)
        qm = qfun(z - h, ectx)
        qp = qfun(z + h, ectx)
        d2 = (qp - 2 * q0 + qm) / (h * h)
        alpha = mp.mpf(n) - mp.mpf(1) / 2
        res = d2 - (2 * q0 ** 3 + z * q0 + alpha)
    return res


def residual_p34(n, z, ctx, pfun):
    """P_XXXIV residual p'' - ((p')^2 - n^2)/(2p) - 2p^2 + zp.

    p' and p'' come from finite differences of the route's p (the closure
    p' = 2pq + n, p'' = 2p'q + 2pq' is an identity of the Hamiltonian system
    and cancels for any pair, so it has no detection power).
    """
    z = mp.mpmathify(z)
    ectx = _fd_ctx(ctx)
    with workdps(ectx.dps):
        h = _fd_step(ctx)
        p0 = pfun(z, ectx)
        if mag10(p0) is None or abs(p0) < mp.mpf(10) ** -(ctx.digits - 8):
            raise PVanishesError(
                f"p vanishes to precision at z={mp.nstr(z, 12)}", location=z
            )
        pm = pfun(z - h, ectx)
        pp = pfun(z + h, ectx)
        d1 = (pp - pm) / (2 * h)
        d2 = (pp - 2 * p0 + pm) / (h * h)
        nn = mp.mpf(n) ** 2
        res = d2 - (d1 * d1 - nn) / (2 * p0) - 2 * p0 * p0 + z * p0
    return res


def residual_s2(sigma, sigma1, sigma2, z, n):
    """S_II residual (s'')^2 + 4(s')^3 + 2 s'(z s' - s) - (n/2)^2."""
    rhs = (mp.mpf(n) / 2) ** 2
    return sigma2 ** 2 + 4 * sigma1 ** 3 + 2 * sigma1 * (z * sigma1 - sigma) - rhs


def s2_chain(sol):
    """(sigma, sigma', sigma'') for residual_s2 from a solution triple.

    Uses the closures sigma' = -p/2 and sigma'' = -(2pq + n)/2; unlike the
    P_XXXIV case this combination is a genuine cross-check (it expands to a
    multiple of p (sigma - H)).
    """
    sp = -sol.p / 2
    spp = -(2 * sol.p * sol.q + mp.mpf(sol.n)) / 2
    return sol.sigma, sp, spp
