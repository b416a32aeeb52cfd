"""Tau functions: Hankel determinants of seed jets and their log-derivatives.

tau_n(z) = det[phi^{(j+k)}(z)], j,k = 0..n-1, with tau_0 = 1. Exact z
derivatives are row-shifted minors: d/dz of a determinant over rows
(r_0..r_{n-1}) is the sum over j of the determinant with r_j -> r_j + 1,
and terms with duplicated rows vanish. The solution triple comes from

    q_n = (log(tau_{n-1}/tau_n))',   sigma_n = (log tau_n)',
    p_n = -2 (log tau_n)'',          q_n' = p_n - q_n^2 - z/2.
"""

from dataclasses import dataclass

from mpmath import mp

from ._minors import det_rowset, escalate_family, lost_digits, minor_family
from .errors import AtPoleError, UsageError
from .precision import PrecCtx, pad_for_size, workdps
from .mpkernel import seed_jet


@dataclass(frozen=True)
class TauMinor:
    """A determinant over an explicit strictly increasing row set."""

    n: int
    rows: tuple
    z: object
    value: object


@dataclass(frozen=True)
class SolutionJet:
    """(q, q', p, sigma) at one point, tagged with the producing route."""

    n: int
    lam: object
    z: object
    q: object
    qprime: object
    p: object
    sigma: object
    route: str


def _check_rows(rows):
    rows = tuple(int(r) for r in rows)
    if any(r < 0 for r in rows):
        raise UsageError("row indices must be non-negative")
    if any(b <= a for a, b in zip(rows, rows[1:])):
        raise UsageError("row indices must be strictly increasing")
    return rows


def tau_minor(rows, z, seed, ctx):
    """det[phi^{(rows[j]+k)}(z)] for j,k = 0..n-1; empty rows -> 1."""
    rows = _check_rows(rows)
    n = len(rows)
    if n == 0:
        return mp.mpf(1)
    K = max(rows) + n - 1

    def build(pad):
        jet = seed_jet(z, max(K, 1), seed, PrecCtx(ctx.digits + pad))
        with workdps(ctx.dps + pad):
            return det_rowset(jet.values, rows)

    pair, _ = escalate_family(
        build,
        pad_for_size(n),
        ctx,
        f"tau minor rows={rows}",
        measure=lambda vs: lost_digits(vs[0], vs[1]),
    )
    return pair[0]


@dataclass(frozen=True)
class _TauFamily:
    n: int
    tau: object
    d1: object
    d2: object
    scale_mag10: int


def tau_family(n, z, seed, ctx):
    """tau_n with both derivatives from one shared elimination.

    d1 = det(0..n-2, n); d2 = det(0..n-3, n-1, n) + det(0..n-2, n+1);
    the n=1 edge cases collapse to det(1) and det(2).
    """
    if n < 0:
        raise UsageError("tau order must be >= 0")
    if n == 0:
        return _TauFamily(0, mp.mpf(1), mp.mpf(0), mp.mpf(0), 0)

    def build(pad):
        jet = seed_jet(z, 2 * n, seed, PrecCtx(ctx.digits + pad))
        with workdps(ctx.dps + pad):
            return minor_family(jet.values, n)

    fam, pad = escalate_family(build, pad_for_size(n), ctx, f"tau_{n}")
    with workdps(ctx.dps + pad):
        d2 = fam.shift2a + fam.shift2b
    return _TauFamily(n, fam.principal, fam.shift1, d2, fam.scale_mag10)


def tau_derivative(n, z, seed, order, ctx):
    """m-th z-derivative of tau_n, exact row-shift rule, m in {1, 2}."""
    if n < 1:
        raise UsageError("tau_derivative requires n >= 1")
    if order not in (1, 2):
        raise UsageError("derivative order must be 1 or 2")
    fam = tau_family(n, z, seed, ctx)
    return fam.d1 if order == 1 else fam.d2


def _pole_check(fam, z, ctx, label):
    # Newton distance |tau/tau'| to the nearest zero of tau (the zeros are
    # simple: they carry residue +-1 poles of q). A raw smallness-vs-scale
    # test would misfire deep in the oscillatory region, where the whole tau
    # function sits far below its Hadamard bound.
    if fam.tau == 0:
        raise AtPoleError(
            f"{label} vanishes at z={mp.nstr(mp.mpmathify(z), 12)}", location=z
        )
    if fam.d1 != 0 and abs(fam.tau) < abs(fam.d1) * mp.mpf(10) ** (-(ctx.digits - 10)):
        raise AtPoleError(
            f"{label} vanishes to precision at z={mp.nstr(mp.mpmathify(z), 12)}",
            location=z,
        )


def qps_from_tau(n, z, seed, ctx):
    """Solution triple at z from the tau route.

    Raises AtPoleError when z sits within 10^{-(digits-10)} of a zero of
    tau_{n-1} or tau_n (first-order distance estimate |tau/tau'|).
    """
    if n < 1:
        raise UsageError("qps_from_tau requires n >= 1")
    z = mp.mpmathify(z)
    famN = tau_family(n, z, seed, ctx)
    famM = tau_family(n - 1, z, seed, ctx)
    if n > 1:
        _pole_check(famM, z, ctx, f"tau_{n-1}")
    _pole_check(famN, z, ctx, f"tau_{n}")
    with workdps(ctx.dps + pad_for_size(n)):
        sig = famN.d1 / famN.tau
        q = famM.d1 / famM.tau - sig  # n=1: tau_0 = 1, tau_0' = 0
        p = -2 * (famN.d2 * famN.tau - famN.d1 ** 2) / famN.tau ** 2
        qprime = p - q * q - z / 2
    return SolutionJet(
        n=n, lam=seed.lam, z=z, q=q, qprime=qprime, p=p, sigma=sig, route="tau"
    )
