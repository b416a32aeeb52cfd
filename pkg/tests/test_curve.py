"""Spectral-curve branch, rotation/scaling laws and the loop geometry."""

import pytest
from mpmath import mp

from p2airy.curve import (
    branch,
    branch_points,
    qd_geometry,
    rotation_residual,
    scaling_error,
    trace_loop,
    x_branch,
    x_derivative,
)
from p2airy.errors import PathNearBranchPointError, UsageError
from p2airy.precision import PrecCtx, workdps

from helpers import fd1

CTX = PrecCtx(40)


def test_branch_tokens_and_geometry():
    b = branch(0)
    assert b.sign == 0 and b.theta == mp.pi and b.boundary_point(-1) == -1
    bi = branch("i")
    assert bi.sign == 1 and abs(bi.theta + mp.pi / 3) < mp.mpf("1e-12")
    with workdps(CTX.dps):
        w = mp.e ** (2 * mp.pi * mp.mpc(0, 1) / 3)
        assert abs(bi.boundary_point(-1) + w) < mp.mpf("1e-35")
    assert branch(mp.mpc(0, -1)).sign == -1
    with pytest.raises(UsageError):
        branch(2)
    with pytest.raises(UsageError):
        branch("x")


def test_branch_points_modulus_and_args():
    with workdps(CTX.dps):
        bps = branch_points(CTX)
        want = (mp.mpf(27) / 4) ** (mp.mpf(1) / 3)
        for bp in bps:
            assert abs(abs(bp) - want) < mp.mpf("1e-38")
        args = sorted(float(mp.arg(bp)) for bp in bps)
        for got, expect in zip(args, (-2 * mp.pi / 3, 0, 2 * mp.pi / 3)):
            assert abs(got - expect) < 1e-12


def test_principal_branch_values():
    with workdps(CTX.dps):
        assert x_branch(0, 0, CTX) == 1
        # t = 2: x^3 - 2x - 1 = (x+1)(x^2-x-1), the tracked root is golden
        golden = (1 + mp.sqrt(5)) / 2
        assert abs(x_branch(2, 0, CTX) - golden) < mp.mpf("1e-30")
        assert abs(x_branch(-1, 0, CTX) - mp.mpf("0.6823278038280")) < mp.mpf("1e-12")


def test_on_curve_residual():
    with workdps(CTX.dps):
        for t in (mp.mpf("-0.8"), mp.mpc("0.4", "1.1")):
            for lam in (0, "i", "-i"):
                x = x_branch(t, lam, CTX)
                assert abs(x ** 3 - x * t - 1) < mp.mpf(10) ** -(CTX.digits - 5)
        x = x_branch(mp.mpf("3.7"), 0, CTX)
        assert abs(x ** 3 - x * mp.mpf("3.7") - 1) < mp.mpf(10) ** -(CTX.digits - 5)


def test_continuation_through_companion_collision():
    # at t = 3*2^{-2/3} the two companion roots collide at -2^{-1/3};
    # the tracked root passes through as the simple root 2^{2/3}
    with workdps(CTX.dps):
        tc = 3 * mp.mpf(2) ** (-mp.mpf(2) / 3)
        x = x_branch(tc, 0, CTX)
        assert abs(x - mp.mpf(2) ** (mp.mpf(2) / 3)) < mp.mpf("1e-30")
        x5 = x_branch(5, 0, CTX)
        assert abs(x5 ** 3 - 5 * x5 - 1) < mp.mpf("1e-35")
        # the ROTATED branches are the colliding pair at real t_c, so their
        # straight-path continuation to real t > t_c hits the singularity
        with pytest.raises(PathNearBranchPointError):
            x_branch(3, "i", CTX)


def test_tracked_collision_raises():
    # the principal branch is the colliding root at the rotated branch points
    with workdps(CTX.dps):
        bps = branch_points(CTX)
        for bp in (bps[1], bps[2]):
            with pytest.raises(PathNearBranchPointError) as ei:
                x_branch(bp, 0, CTX)
            assert abs(ei.value.branch_point - bp) < mp.mpf("1e-20")
        # ... but not at the real one (a companion collision only)
        x_branch(bps[0], 0, CTX)


def test_derivative_law():
    with workdps(PrecCtx(50).dps):
        t = mp.mpf("0.5")
        x = x_branch(t, 0, PrecCtx(50))
        num = fd1(lambda s: x_branch(s, 0, PrecCtx(50)), t, mp.mpf("1e-12"))
        assert abs(x_derivative(x, t) - num) < mp.mpf("1e-20")
        assert abs(x_derivative(x, t) - x / (3 * x * x - t)) < mp.mpf("1e-40")


def test_rotation_relation_independent_continuation():
    with workdps(CTX.dps):
        pts = (mp.mpf(0), mp.mpf("0.4") - mp.mpc(0, 1) * mp.mpf("0.2"),
               mp.mpf("1.1") * mp.e ** mp.mpc(0, "0.3"))
        for t in pts:
            for sign in (1, -1):
                assert rotation_residual(t, sign, CTX) < mp.mpf("1e-35")
    with pytest.raises(UsageError):
        rotation_residual(0, 2, CTX)


def test_scaling_error_rates():
    # the q-error halves from n=12 to n=24 (1/n), p quarters (1/n^2)
    with workdps(CTX.dps):
        eq = [abs(scaling_error(n, 1, 0, "q")) for n in (12, 24)]
        ep = [abs(scaling_error(n, 1, 0, "p")) for n in (12, 24)]
        assert mp.mpf("0.4") < eq[1] / eq[0] < mp.mpf("0.6")
        assert mp.mpf("0.15") < ep[1] / ep[0] < mp.mpf("0.35")
        # rotated data converges to the rotated branch
        assert abs(scaling_error(12, 1, "i", "q")) < mp.mpf("0.05")
    with pytest.raises(UsageError):
        scaling_error(12, 1, 0, "x")


def test_branch_monotone_and_bounded():
    with workdps(CTX.dps):
        prev = None
        for k in range(12):
            t = mp.mpf(-1) + mp.mpf(11) * k / 11
            x = x_branch(t, 0, CTX)
            assert abs(mp.im(x)) < mp.mpf("1e-35")
            if prev is not None:
                assert mp.re(x) > prev
            prev = mp.re(x)
            if t >= 1:
                assert mp.re(x) < 2 * mp.sqrt(t)


def test_loop_geometry_constants():
    c, t0 = qd_geometry(PrecCtx(30))
    with workdps(PrecCtx(30).dps):
        assert abs(c - mp.mpf("0.635")) < mp.mpf("0.003")
        assert abs(t0 - mp.mpf("-1.0005424")) < mp.mpf("5e-5")
        # self-consistency: t0 is exactly the image of c under t(x), 2x*^3 = c
        half = c / 2
        assert abs(t0 - (half - 1) / half ** (mp.mpf(1) / 3)) < mp.mpf("1e-25")


def test_trace_loop_crossing_brackets_certified_value():
    crossing, samples = trace_loop(resolution=800)
    assert 0.6 < float(crossing) < 0.67
    assert len(samples) > 100
