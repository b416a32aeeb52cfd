"""Pole/zero atlas scans and the monotonicity sweep."""

import pytest
from mpmath import mp

import p2airy.atlas as atlas
from p2airy.atlas import (
    SweepRecord,
    SweepReport,
    airy_first_zero,
    default_sweep_grid,
    monotonicity_sweep,
    pole_zero_scan,
)
from p2airy.cubic import CoeffSequence
from p2airy.errors import ExceptionalPointError, UsageError
from p2airy.precision import PrecCtx, workdps

CTX = PrecCtx(40)


def test_airy_first_zero_matches_oracle():
    with workdps(CTX.dps):
        i1 = airy_first_zero(CTX)
        assert abs(i1 - mp.airyaizero(1)) < mp.mpf("1e-38")
        assert abs(i1 - mp.mpf("-2.3381074105")) < mp.mpf("1e-10")


def test_scan_n1_single_pole():
    with workdps(CTX.dps):
        rep = pole_zero_scan(1, 0, (2.5, 3.5, -0.5, 0.5), (2, 2), CTX)
        assert not rep.flags
        assert len(rep.poles) == 1 and not rep.zeros
        e = rep.poles[0]
        # the first pole of q_1(z;0) is the rescaled first Airy zero,
        # a zero of tau_1 = phi, hence residue -1
        z1 = -(2 ** mp.mpf("1/3")) * airy_first_zero(CTX)
        assert abs(e.location - z1) < mp.mpf("1e-30")
        assert e.kind == "pole" and e.source == "tau_1" and e.winding == -1
        assert e.tau_distance <= mp.mpf("1e-10")
        assert rep.total_winding == -1
        assert rep.total_winding == sum(x.winding for x in rep.entries)
        assert rep.n == 1 and rep.grid == (2, 2)


def test_scan_n3_real_axis_window():
    # two tau_3 poles bracketing one q-zero on the first real-axis stretch
    with workdps(CTX.dps):
        rep = pole_zero_scan(3, 0, (3.5, 6.5, -0.6, 0.6), (3, 2), CTX)
        assert not rep.flags
        assert len(rep.poles) == 2 and len(rep.zeros) == 1
        locs = sorted(rep.entries, key=lambda e: mp.re(e.location))
        for e, want in zip(locs, ("4.032024954", "5.150493556", "6.045728494")):
            assert abs(e.location - mp.mpf(want)) < mp.mpf("1e-8")
            assert abs(mp.im(e.location)) < mp.mpf("1e-30")
        assert [e.kind for e in locs] == ["pole", "zero", "pole"]
        assert [e.source for e in locs] == ["tau_3", "q-root", "tau_3"]
        assert [e.winding for e in locs] == [-1, 1, -1]
        assert max(e.tau_distance for e in rep.poles) <= mp.mpf("1e-12")
        assert rep.total_winding == -1 == sum(e.winding for e in rep.entries)


def test_scan_validation():
    with pytest.raises(UsageError):
        pole_zero_scan(0, 0, (0, 1, 0, 1), (1, 1), CTX)
    with pytest.raises(UsageError):
        pole_zero_scan(1, 0, (1, 1, 0, 1), (1, 1), CTX)
    with pytest.raises(UsageError):
        pole_zero_scan(1, 0, (0, 1, 0, 1), (0, 1), CTX)


def test_default_sweep_grid():
    with workdps(CTX.dps):
        grid = default_sweep_grid(CTX, points=12)
        assert len(grid) == 12
        assert abs(grid[0] - (airy_first_zero(CTX) + mp.mpf("0.01"))) < mp.mpf("1e-30")
        assert grid[-1] == 10


def test_sweep_smoke():
    with workdps(CTX.dps):
        grid = default_sweep_grid(CTX, points=12)
    rep = monotonicity_sweep(6, grid, CTX)
    assert rep.ok
    assert not rep.violations and not rep.indeterminates and not rep.skipped
    # beta'_0 is positive everywhere; beta'_1 and beta'_3 dip below zero on
    # part of the grid, so the eventual claim holds from n = 5 on
    assert sorted({r.n for r in rep.below_threshold}) == [2, 4]
    assert rep.hold_from == 5
    assert rep.first_hold["h_sign"] == 1
    assert rep.first_hold["bprime_prev_pos"] == 1  # n = 1 tests beta'_0
    assert rep.n_max == 6 and len(rep.t_grid) == 12
    with pytest.raises(UsageError):
        monotonicity_sweep(0, grid, CTX)


def test_sweep_skips_exceptional_points(monkeypatch):
    grid = (mp.mpf("1.0"), mp.mpf("2.0"), mp.mpf("3.0"))
    bad = grid[1]

    class Guarded(CoeffSequence):
        def __init__(self, t, N, lam, ctx, mmax):
            if mp.mpf(t) == bad:
                raise ExceptionalPointError("synthetic exceptional point",
                                            location=t)
            super().__init__(t, N, lam, ctx, mmax)

    monkeypatch.setattr(atlas, "CoeffSequence", Guarded)
    rep = monotonicity_sweep(3, grid, PrecCtx(30))
    # the poisoned point is skipped with its reason, never judged
    assert len(rep.skipped) == 1 and rep.skipped[0][0] == bad
    assert "synthetic" in rep.skipped[0][1]
    assert all(r.t != bad for r in rep.records)
    assert not rep.violations


def test_sweep_report_ok_semantics():
    rec = SweepRecord(n=1, t=mp.mpf(1), bprime_prev_pos=True, bprime_band=True,
                      beta_band=True, h_sign=True, q_order=True,
                      indeterminate=False)
    base = dict(n_max=1, t_grid=(mp.mpf(1),), records=(rec,), violations=(),
                below_threshold=(), indeterminates=(), skipped=(),
                first_hold={}, hold_from=1)
    assert SweepReport(**base).ok
    assert not SweepReport(**{**base, "violations": (rec,)}).ok
    assert not SweepReport(**{**base, "indeterminates": (rec,)}).ok
    assert not SweepReport(**{**base, "hold_from": None}).ok
    # skipped points alone do not fail a report
    assert SweepReport(**{**base, "skipped": ((mp.mpf(2), "why"),)}).ok
