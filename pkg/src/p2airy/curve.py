"""Spectral curve x^3 - xt - 1 = 0 and the quadratic-differential geometry.

The branch x_0(t) is normalized by x_0(0) = 1 and continued analytically;
the rotated branches obey x_{+-i}(t) = e^{-+2 pi i/3} x_0(t e^{-+2 pi i/3}).
Branch points sit where the discriminant 4t^3 = 27 vanishes. The critical
graph of Q(s) ds^2 = -(1+1/s)^3 ds^2 has five trajectories leaving s = -1 at
angles 2 pi k/5; the one leaving at 72 degrees loops around the origin and
crosses (0, infinity) at c ~ 0.635, which maps through x* = (c/2)^{1/3} and
t(x) = (x^3-1)/x to the boundary constant t0 ~ -1.0005424.
"""

from dataclasses import dataclass

from mpmath import mp

from .errors import (
    InternalConsistencyError,
    PathNearBranchPointError,
    UsageError,
)
from .precision import PrecCtx, ctx_for_order, workdps
from .mpkernel import SeedSpec
from .tau import qps_from_tau

_BRANCH_TOKENS = {0: 0, "0": 0, "i": 1, "+i": 1, "-i": -1}


def _branch_sign(lam):
    """0 for the principal branch, +-1 for the rotated ones."""
    if lam in _BRANCH_TOKENS:
        return _BRANCH_TOKENS[lam]
    try:
        v = mp.mpmathify(lam)
    except (TypeError, ValueError):
        raise UsageError("branch lambda must be one of 0, i, -i")
    if v == 0:
        return 0
    if v == mp.mpc(0, 1):
        return 1
    if v == mp.mpc(0, -1):
        return -1
    raise UsageError("branch lambda must be one of 0, i, -i")


@dataclass(frozen=True)
class Branch:
    """Bookkeeping for one pole-free branch: sector angle and boundary ray."""

    lam: object
    sign: int  # 0, +1, -1
    theta: object  # sector angle: pi for the principal, -+pi/3 rotated

    def boundary_point(self, t0):
        """The real boundary constant rotated onto this branch."""
        if self.sign == 0:
            return mp.mpf(t0)
        return mp.e ** (2 * mp.pi * mp.mpc(0, self.sign) / 3) * t0


def branch(lam):
    s = _branch_sign(lam)
    theta = mp.pi if s == 0 else -s * mp.pi / 3
    return Branch(lam=(0 if s == 0 else mp.mpc(0, s)), sign=s, theta=theta)


def branch_points(ctx=None):
    """The three branch points 3*2^{-2/3} e^{2 pi i k/3} (4t^3 = 27)."""
    ctx = ctx or PrecCtx()
    with workdps(ctx.dps):
        b = 3 * mp.mpf(2) ** (-mp.mpf(2) / 3)
        w = mp.e ** (2 * mp.pi * mp.mpc(0, 1) / 3)
        return b, b * w, b / w


def _other_roots(x, t):
    """The two companion roots of x^3 - xt - 1 given the tracked root."""
    disc = mp.sqrt(4 * t - 3 * x * x)
    return (-x + disc) / 2, (-x - disc) / 2


def _continue_root(t_target, ctx, x_start=1, t_start=0):
    """Newton continuation of one cubic root along a straight t-segment.

    Step control keeps each move well inside the tracked root's separation
    from its two companions; a near-collision of the *tracked* root raises
    "path near branch point" with the closest branch point. (Collisions of
    the two companion roots with each other, e.g. when the real path crosses
    t = 3*2^{-2/3} on the principal branch, are harmless and allowed.)
    """
    t0 = mp.mpmathify(t_start)
    t1 = mp.mpmathify(t_target)
    x = mp.mpmathify(x_start)
    tol = mp.mpf(10) ** (-(ctx.digits - 5))
    span = t1 - t0
    if span == 0:
        return x
    s = mp.mpf(0)
    min_sep = mp.mpf("1e-3")
    for _ in range(20000):
        if s >= 1:
            break
        t_here = t0 + span * s
        y1, y2 = _other_roots(x, t_here)
        sep = min(abs(x - y1), abs(x - y2))
        if sep < min_sep:
            bps = branch_points(ctx)
            bp = min(bps, key=lambda b: abs(b - t_here))
            raise PathNearBranchPointError(
                f"tracked root collides near t={mp.nstr(t_here, 10)}",
                branch_point=bp,
            )
        # derivative dx/dt = x/(3x^2 - t); step so |dx| stays << separation
        xp = x / (3 * x * x - t_here)
        h = min(mp.mpf(1) - s, mp.mpf("0.2") * sep / max(abs(xp) * abs(span), mp.mpf("1e-30")))
        h = max(h, mp.mpf("1e-7"))
        while True:
            s_next = min(s + h, mp.mpf(1))
            t_next = t0 + span * s_next
            x_pred = x + xp * span * (s_next - s)
            # Newton corrector on x^3 - x t_next - 1
            xn = x_pred
            ok = False
            for _ in range(60):
                f = xn ** 3 - xn * t_next - 1
                fp = 3 * xn * xn - t_next
                if fp == 0:
                    break
                step = f / fp
                xn -= step
                if abs(step) < tol * max(abs(xn), mp.mpf(1)):
                    ok = True
                    break
            if ok and abs(xn - x_pred) <= max(mp.mpf("0.5") * sep, mp.mpf("1e-20")):
                break
            # corrector wandered off the tracked sheet: retry with half the step
            h = h / 2
            if h < mp.mpf("1e-12"):
                bps = branch_points(ctx)
                bp = min(bps, key=lambda b: abs(b - t_next))
                raise PathNearBranchPointError(
                    f"continuation stalled near t={mp.nstr(t_next, 10)}",
                    branch_point=bp,
                )
        x, s = xn, s_next
    else:
        raise InternalConsistencyError("root continuation exceeded its step budget")
    resid = abs(x ** 3 - x * t1 - 1)
    if resid > tol * max(abs(x) ** 3, mp.mpf(1)):
        raise InternalConsistencyError("continuation final Newton residual too large")
    return x


def x_branch(t, lam, ctx=None):
    """x_lambda(t) for lambda in {0, i, -i}.

    The rotated branches are always produced from the principal one through
    the rotation relation (independent continuation exists only inside
    rotation_residual, as a cross-check).
    """
    ctx = ctx or PrecCtx()
    s = _branch_sign(lam)
    t = mp.mpmathify(t)
    with workdps(ctx.dps + 10):
        if s == 0:
            return _continue_root(t, ctx)
        # x_lam(t) = w x_0(t w) needs the SAME factor inside and outside:
        # substituting x = a x_0(b t) into the cubic leaves x_0 t (b - a)
        w = mp.e ** (-s * 2 * mp.pi * mp.mpc(0, 1) / 3)  # e^{-+2 pi i/3}
        return w * _continue_root(t * w, ctx)


def x_derivative(x, t):
    """dx/dt = x^2/(2x^3+1) (= x/(3x^2-t) on the curve)."""
    return x * x / (2 * x ** 3 + 1)


def rotation_residual(t, sign, ctx=None):
    """|x_0(t) - e^{+-2 pi i/3} x_{+-i}(t e^{+-2 pi i/3})| with the rotated
    branch built by *independent* continuation from its own basepoint
    x_{+-i}(0) = e^{-+2 pi i/3}."""
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    ctx = ctx or PrecCtx()
    t = mp.mpmathify(t)
    with workdps(ctx.dps + 10):
        lhs = _continue_root(t, ctx)
        w = mp.e ** (sign * 2 * mp.pi * mp.mpc(0, 1) / 3)
        x_rot = _continue_root(t * w, ctx, x_start=mp.e ** (-sign * 2 * mp.pi * mp.mpc(0, 1) / 3))
        return abs(lhs - w * x_rot)


def scaling_error(n, t, lam, which, ctx=None):
    """Distance of the rescaled order-n data from its spectral-curve limit:

    q: (2/n)^{1/3} q_n(z_n) + x_lam(t)
    p: (2/n)^{2/3} p_n(z_n) - 1/x_lam(t)
    sigma: 2^{1/3} n^{-4/3} sigma_n(z_n) - x_lam(t) + (2 x_lam(t))^{-2}

    with z_n = -(sqrt(2) n)^{2/3} t. The q error decays like 1/n, the other
    two like 1/n^2. ctx defaults to the order-adaptive schedule.
    """
    if which not in ("q", "p", "sigma"):
        raise UsageError("which must be q, p or sigma")
    ctx = ctx or ctx_for_order(n)
    s = _branch_sign(lam)
    seed = SeedSpec.from_lambda(0 if s == 0 else mp.mpc(0, s))
    t = mp.mpmathify(t)
    x = x_branch(t, lam, PrecCtx(max(40, ctx.digits // 2)))
    with workdps(ctx.dps + 10):
        z = -(mp.sqrt(2) * n) ** (mp.mpf(2) / 3) * t
    sol = qps_from_tau(n, z, seed, ctx)
    with workdps(ctx.dps + 10):
        if which == "q":
            return (mp.mpf(2) / n) ** (mp.mpf(1) / 3) * sol.q + x
        if which == "p":
            return (mp.mpf(2) / n) ** (mp.mpf(2) / 3) * sol.p - 1 / x
        return (
            mp.mpf(2) ** (mp.mpf(1) / 3) * mp.mpf(n) ** (-mp.mpf(4) / 3) * sol.sigma
            - x
            + 1 / (2 * x) ** 2
        )


# ---------------------------------------------------------------------------
# quadratic differential Q(s) ds^2 = -(1+1/s)^3 ds^2


@dataclass(frozen=True)
class TrajectorySample:
    tau: float  # arclength parameter
    s: object  # position
    direction: object  # unit tangent used at this sample


def _Q(s):
    return -((1 + 1 / s) ** 3)


def _sqrtQ_on_upper(s):
    """Single-valued branch i (1+1/s)^{3/2} on the upper half plane u (0,oo)."""
    return mp.mpc(0, 1) * (1 + 1 / s) ** mp.mpf("1.5")


def trace_loop(resolution=1600, max_len=12.0):
    """Trace the 72-degree trajectory of Q ds^2 from s = -1 until it crosses
    the positive real axis; returns (crossing, samples).

    Runs at fixed modest precision (the trace only needs a few digits; the
    quadrature polish supplies the certified value). RK4 on the unit-speed
    field ds/dtau = +-conj(sqrt Q)/|sqrt Q| with the sign chosen for
    continuity of the tangent.
    """
    with workdps(25):
        h = mp.mpf(1) / resolution
        direction = mp.e ** (2 * mp.pi * mp.mpc(0, 1) / 5)
        s = mp.mpc(-1) + mp.mpf("1e-4") * direction
        samples = [TrajectorySample(0.0, s, direction)]

        def field(pos, ref):
            r = mp.sqrt(_Q(pos))
            if r == 0:
                raise InternalConsistencyError("trajectory hit a zero of Q")
            d = mp.conj(r) / abs(r)
            if mp.re(d * mp.conj(ref)) < 0:
                d = -d
            return d

        tau = mp.mpf(0)
        prev_s, prev_im = s, mp.im(s)
        while tau < max_len:
            k1 = field(s, direction)
            k2 = field(s + h / 2 * k1, k1)
            k3 = field(s + h / 2 * k2, k2)
            k4 = field(s + h * k3, k3)
            step = h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            prev_s, prev_im = s, mp.im(s)
            s = s + step
            direction = field(s, k4)
            tau += h
            samples.append(TrajectorySample(float(tau), s, direction))
            if mp.re(s) > 0 and prev_im > 0 and mp.im(s) <= 0:
                # linear interpolation of the axis crossing
                f = prev_im / (prev_im - mp.im(s))
                crossing = mp.re(prev_s) + f * (mp.re(s) - mp.re(prev_s))
                return crossing, samples
        raise InternalConsistencyError("trajectory did not cross the real axis")


def _im_period(c, ctx):
    """Im integral of sqrt(Q) from -1 to c along a UHP rectangle path."""
    with workdps(ctx.dps + 10):
        lift = mp.mpc(0, "0.9")
        path = [mp.mpc(-1), mp.mpc(-1) + lift, c + lift, mp.mpc(c)]
        val = mp.mpf(0)
        for a, b in zip(path, path[1:]):
            val += mp.quad(lambda u: _sqrtQ_on_upper(a + (b - a) * u) * (b - a), [0, 1])
        return mp.im(val)


def qd_geometry(ctx=None, resolution=1600):
    """(loop crossing c, boundary constant t0), certified to ctx digits.

    The trace corroborates the loop and brackets c; the certified value is
    the unique root of Im F(c) = 0, F(c) = int_{-1}^{c} sqrt(Q), whose
    derivative (1+1/c)^{3/2} is positive on (0, infinity) (monotone Newton).
    t0 = t(x*) with 2 x*^3 = c, i.e. t0 = (c/2 - 1)/(c/2)^{1/3}.
    """
    ctx = ctx or PrecCtx(30)
    c_tr, samples = trace_loop(resolution=resolution)
    c_tr2, _ = trace_loop(resolution=2 * resolution)
    if abs(c_tr - c_tr2) > mp.mpf("1e-3"):
        raise InternalConsistencyError("trajectory trace failed step-halving gate")
    with workdps(ctx.dps + 10):
        c = mp.mpf(mp.nstr(c_tr2, 10))
        for _ in range(ctx.digits + 20):
            im = _im_period(c, ctx)
            slope = (1 + 1 / c) ** mp.mpf("1.5")
            step = im / slope
            c = c - step
            if abs(step) < mp.mpf(10) ** (-(ctx.digits + 5)):
                break
        if abs(c - c_tr2) > mp.mpf("5e-3"):
            raise InternalConsistencyError("polished crossing far from traced one")
        half = c / 2
        t0 = (half - 1) / half ** (mp.mpf(1) / 3)
    return c, t0


def qd_geometry_full(ctx=None, resolution=1600):
    """(c, t0, trajectory samples) for reporting/plotting."""
    c, t0 = qd_geometry(ctx=ctx, resolution=resolution)
    _, samples = trace_loop(resolution=resolution)
    return c, t0, samples
