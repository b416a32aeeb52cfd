"""Elimination kernels against the permutation-expansion oracle."""

import random

import pytest
from mpmath import mp

from p2airy._minors import (
    det_pivoted,
    det_rowset,
    escalate_family,
    lost_digits,
    minor_family,
)
from p2airy.errors import InsufficientPrecisionError
from p2airy.precision import PrecCtx, workdps

from helpers import perm_det

CTX = PrecCtx(40)


def _random_matrix(rng, m):
    return [
        [mp.mpc(2 * rng.random() - 1, 2 * rng.random() - 1) for _ in range(m)]
        for _ in range(m)
    ]


def test_det_pivoted_vs_permutation_oracle():
    rng = random.Random(20260815)
    with workdps(CTX.dps):
        for m in (1, 2, 3, 4, 5):
            a = _random_matrix(rng, m)
            det, scale = det_pivoted(a)
            want = perm_det(a)
            assert abs(det - want) < mp.mpf("1e-40") * max(1, abs(want))
            assert isinstance(scale, int)


def test_det_pivoted_edge_cases():
    with workdps(CTX.dps):
        det, _ = det_pivoted([])
        assert det == 1
        det, _ = det_pivoted([[mp.mpf(0), mp.mpf(1)], [mp.mpf(0), mp.mpf(2)]])
        assert det == 0
        # zero leading pivot forces a row swap
        det, _ = det_pivoted([[mp.mpf(0), mp.mpf(1)], [mp.mpf(1), mp.mpf(0)]])
        assert det == -1


def test_det_rowset_vs_oracle():
    rng = random.Random(7)
    with workdps(CTX.dps):
        seq = [mp.mpc(2 * rng.random() - 1, 2 * rng.random() - 1) for _ in range(12)]
        for rowset in ((0, 1, 2), (0, 2, 3), (1, 3, 6), (0, 1, 2, 4)):
            m = len(rowset)
            det, _ = det_rowset(seq, rowset)
            want = perm_det([[seq[r + k] for k in range(m)] for r in rowset])
            assert abs(det - want) < mp.mpf("1e-38") * max(1, abs(want))


def test_minor_family_vs_per_minor_oracle():
    rng = random.Random(99)
    with workdps(CTX.dps):
        seq = [mp.mpc(2 * rng.random() - 1, 2 * rng.random() - 1) for _ in range(14)]
        for m in (1, 2, 3, 4, 5):
            fam = minor_family(seq, m)
            rowsets = {
                "principal": tuple(range(m)),
                "shift1": tuple(range(m - 1)) + (m,),
                "shift2b": tuple(range(m - 1)) + (m + 1,),
            }
            if m >= 2:
                rowsets["shift2a"] = tuple(range(m - 2)) + (m - 1, m)
            for name, rows in rowsets.items():
                want = perm_det([[seq[r + k] for k in range(m)] for r in rows])
                got = getattr(fam, name)
                assert abs(got - want) < mp.mpf("1e-38") * max(1, abs(want)), name
        assert minor_family(seq, 0).principal == 1


def test_minor_family_structural_zero_pivot():
    # seq[0] = 0 zeroes the first pivot of the m = 2 family exactly
    with workdps(CTX.dps):
        seq = [mp.mpf(x) for x in (0, 0, 1, 2, 3, 4)]
        fam = minor_family(seq, 2)
        assert fam.principal == perm_det([[seq[0], seq[1]], [seq[1], seq[2]]])
        assert abs(fam.shift1 - perm_det([[seq[0], seq[1]], [seq[2], seq[3]]])) == 0
        assert abs(fam.shift2b - perm_det([[seq[0], seq[1]], [seq[3], seq[4]]])) == 0
        assert abs(fam.shift2a - perm_det([[seq[1], seq[2]], [seq[2], seq[3]]])) == 0


def test_lost_digits():
    with workdps(CTX.dps):
        assert lost_digits(mp.mpf(0), 10) is None
        assert lost_digits(mp.mpf("1e-7"), 0) in (6, 7, 8)
        assert lost_digits(mp.mpf(1), 0) in (-1, 0)


def test_escalate_family_accepts_small_loss():
    calls = []

    def build(pad):
        calls.append(pad)
        return mp.mpf(1)

    obj, pad = escalate_family(build, 20, CTX, "t", measure=lambda v: 3)
    assert obj == 1 and pad == 20 and calls == [20]


def test_escalate_family_escalates_then_succeeds():
    calls = []

    def build(pad):
        calls.append(pad)
        return mp.mpf(1)

    # claims 50 lost digits until the pad covers it
    obj, pad = escalate_family(
        build, 20, CTX, "t", measure=lambda v: 50 if len(calls) == 1 else 50
    )
    assert pad == 50 + 20 + 10
    assert calls == [20, 80]


def test_escalate_family_gives_up():
    # a loss that grows faster than the pad can never be satisfied
    calls = []

    def build(pad):
        calls.append(pad)
        return pad

    with pytest.raises(InsufficientPrecisionError) as ei:
        escalate_family(build, 10, CTX, "t", measure=lambda p: 2 * p + 50)
    assert len(calls) == 4
    assert ei.value.suggested_digits > CTX.digits
