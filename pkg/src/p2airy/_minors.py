"""Pivoted elimination kernels for Hankel-of-jet determinants.

The tau functions and Hankel moment determinants all have the shape
det[seq[rows[j] + k]] for a scalar sequence seq (derivative jet or moment
list). One elimination of the transposed wide matrix W[k][r] = seq[k+r],
k = 0..m-1, r = 0..m+1, yields simultaneously

  principal  rows (0..m-1)          -> the determinant itself,
  shift1     rows (0..m-2, m)       -> its first z/t derivative,
  shift2a    rows (0..m-3, m-1, m)  -> } the two terms of the second
  shift2b    rows (0..m-2, m+1)     -> } derivative,

because row operations on W act identically on every column-selection minor
and the eliminated matrix is upper trapezoidal in its first m columns. All
arithmetic happens at the ambient mpmath precision; callers pad and own the
noise-floor bookkeeping via the returned Hadamard scale.
"""

import math
from dataclasses import dataclass

from mpmath import mp

from .errors import InsufficientPrecisionError
from .precision import mag10

_LOG10_2 = 0.30102999566398120


@dataclass(frozen=True)
class MinorFamily:
    m: int
    principal: object
    shift1: object
    shift2a: object
    shift2b: object
    scale_mag10: int  # decimal magnitude of the Hadamard row-max bound


def _hadamard_mag10(rows):
    """Decimal magnitude of the product of row max-norms (0 rows -> 0)."""
    bits = 0
    for row in rows:
        mags = [mp.mag(x) for x in row]
        mx = max((m for m in mags if m != mp.ninf), default=None)
        if mx is None:
            return None  # a fully zero row: determinant is exactly 0
        bits += int(mx)
    return int(math.floor(bits * _LOG10_2))


def det_pivoted(rows):
    """(det, scale_mag10) of a square matrix given as list of row lists."""
    m = len(rows)
    if m == 0:
        return mp.mpf(1), 0
    W = [list(r) for r in rows]
    scale = _hadamard_mag10(W)
    if scale is None:
        return mp.mpf(0), 0
    sign = 1
    for k in range(m):
        piv, pmag = k, mp.mag(W[k][k])
        for i in range(k + 1, m):
            mg = mp.mag(W[i][k])
            if mg != mp.ninf and (pmag == mp.ninf or mg > pmag):
                piv, pmag = i, mg
        if pmag == mp.ninf:
            return mp.mpf(0), scale
        if piv != k:
            W[k], W[piv] = W[piv], W[k]
            sign = -sign
        pivval = W[k][k]
        for i in range(k + 1, m):
            if W[i][k] == 0:
                continue
            f = W[i][k] / pivval
            W[i][k] = mp.mpf(0)
            for j in range(k + 1, m):
                W[i][j] -= f * W[k][j]
    det = mp.mpf(sign)
    for k in range(m):
        det *= W[k][k]
    return det, scale


def det_rowset(seq, rowset):
    """det[seq[rowset[j]+k]] for j,k = 0..len(rowset)-1, standalone."""
    m = len(rowset)
    if m == 0:
        return mp.mpf(1), 0
    rows = [[seq[r + k] for k in range(m)] for r in rowset]
    return det_pivoted(rows)


def minor_family(seq, m):
    """Principal and shifted minors of order m from one elimination.

    seq must provide indices 0..2m (only 0..2m-2 are touched when m < 2).
    Exact zero pivots (structural zeros at special points) are tolerated:
    the affected shifted minors fall back to independent eliminations.
    """
    if m == 0:
        return MinorFamily(0, mp.mpf(1), mp.mpf(0), mp.mpf(0), mp.mpf(0), 0)
    if m == 1:
        fam_scale = _hadamard_mag10([[seq[0], seq[1], seq[2]]])
        return MinorFamily(
            1, seq[0], seq[1], mp.mpf(0), seq[2], 0 if fam_scale is None else fam_scale
        )
    W = [[seq[k + r] for r in range(m + 2)] for k in range(m)]
    scale = _hadamard_mag10([row[:m] for row in W])
    if scale is None:
        scale = 0
    sign = 1
    zero_piv = None  # first elimination step with an exactly zero pivot column
    for k in range(m):
        piv, pmag = k, mp.mag(W[k][k])
        for i in range(k + 1, m):
            mg = mp.mag(W[i][k])
            if mg != mp.ninf and (pmag == mp.ninf or mg > pmag):
                piv, pmag = i, mg
        if pmag == mp.ninf:
            if zero_piv is None:
                zero_piv = k
            continue  # column already zero below the diagonal
        if piv != k:
            W[k], W[piv] = W[piv], W[k]
            sign = -sign
        pivval = W[k][k]
        for i in range(k + 1, m):
            if W[i][k] == 0:
                continue
            f = W[i][k] / pivval
            W[i][k] = mp.mpf(0)
            for j in range(k + 1, m + 2):
                W[i][j] -= f * W[k][j]

    def prod_pivots(upto):
        v = mp.mpf(sign)
        for i in range(upto):
            v *= W[i][i]
        return v

    if zero_piv is None:
        head1 = prod_pivots(m - 1)
        principal = head1 * W[m - 1][m - 1]
        shift1 = head1 * W[m - 1][m]
        shift2b = head1 * W[m - 1][m + 1]
        head2 = prod_pivots(m - 2)
        shift2a = head2 * (
            W[m - 2][m - 1] * W[m - 1][m] - W[m - 2][m] * W[m - 1][m - 1]
        )
    else:
        # rare structural-zero path: recompute whatever the trapezoidal
        # readout cannot certify by direct per-minor elimination
        principal = mp.mpf(0)
        shift1, _ = det_rowset(seq, list(range(m - 1)) + [m])
        shift2b, _ = det_rowset(seq, list(range(m - 1)) + [m + 1])
        shift2a, _ = det_rowset(seq, list(range(m - 2)) + [m - 1, m])
    return MinorFamily(m, principal, shift1, shift2a, shift2b, scale)


def lost_digits(value, scale_mag10):
    """Decimal digits cancelled between the Hadamard bound and the value."""
    vm = mag10(value)
    if vm is None:
        return None
    return scale_mag10 - vm


def exhaustion_check(value, scale_mag10, ctx, pad, label):
    """Raise when value is indistinguishable from elimination noise.

    The noise floor of an elimination run at digits+guard+pad working digits
    is (Hadamard scale) * 10^{guard-working} = scale * 10^{-(digits+pad)}.
    Exact zeros pass: they arise from exact structural cancellation, while
    noise shows up as a tiny nonzero value.
    """
    lost = lost_digits(value, scale_mag10)
    if lost is None:
        return
    if lost > ctx.digits + pad:
        suggested = ctx.digits + int(lost) - pad - ctx.guard + 10
        raise InsufficientPrecisionError(
            f"{label}: result below the elimination noise floor "
            f"(lost ~{lost} digits); retry with more precision",
            suggested_digits=max(suggested, ctx.digits + 10),
        )


def escalate_family(build, pad0, ctx, label, measure=None, rounds=4):
    """Run build(pad) with automatic precision escalation.

    build(pad) must recompute its inputs and its elimination entirely at
    ctx.digits + pad working digits and return an object carrying a
    cancellation measurement; measure(obj) -> lost decimal digits (None for
    an exact structural zero). Deep in the oscillatory region Hankel
    determinants sit far below their Hadamard scale, so the a-priori pad is
    a guess: whenever the measured loss eats past the pad the whole build is
    redone with pad ~ lost, which restores ctx.digits correct digits in the
    result. Returns (obj, pad_used).
    """
    if measure is None:
        measure = lambda fam: lost_digits(fam.principal, fam.scale_mag10)
    pad = pad0
    for _ in range(rounds):
        obj = build(pad)
        lost = measure(obj)
        if lost is None or lost <= pad:
            return obj, pad
        pad = int(lost) + pad0 + 10
    raise InsufficientPrecisionError(
        f"{label}: cancellation keeps outrunning the precision pad "
        f"(lost ~{lost} digits at pad {pad})",
        suggested_digits=ctx.digits + int(lost) + pad0,
    )
