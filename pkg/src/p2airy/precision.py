"""Working-precision plumbing.

All numerics run on mpmath scalars. A PrecCtx fixes the *stated* decimal
precision of results; operations internally work at digits + guard + padding
and only promise the stated digits. Helpers here centralize the padding
schedules so every module uses the same arithmetic of digit budgets.
"""

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass, field

from mpmath import mp

from .errors import UsageError

MIN_DIGITS = 16

# log10(e); enough digits for any padding arithmetic done in floats
_LOG10E = 0.4342944819032518


def default_guard(digits):
    return 10 + math.ceil(digits / 10)


@dataclass(frozen=True)
class PrecCtx:
    """Stated decimal precision plus internal guard digits."""

    digits: int = 40
    guard: int = field(default=-1)

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise UsageError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.guard < 0:
            object.__setattr__(self, "guard", default_guard(self.digits))

    @property
    def dps(self):
        return self.digits + self.guard

    def scaled(self, extra_digits):
        """A context with extra stated digits (guard recomputed)."""
        return PrecCtx(self.digits + int(extra_digits))


def default_digits():
    """Process default: PAINLEVE_DIGITS env override, else 40."""
    raw = os.environ.get("PAINLEVE_DIGITS")
    if raw is None:
        return 40
    try:
        d = int(raw)
    except ValueError:
        raise UsageError(f"PAINLEVE_DIGITS must be an integer, got {raw!r}")
    if d < MIN_DIGITS:
        raise UsageError(f"PAINLEVE_DIGITS must be >= {MIN_DIGITS}, got {d}")
    return d


def digits_for_order(n):
    """Default precision schedule for order-n tau/Hankel work.

    Calibrated so that the determinants survive their O(n log n) digit loss
    with room to spare up to n ~ 100.
    """
    return 30 + 12 * max(int(n), 0)


def ctx_for_order(n, floor=40):
    return PrecCtx(max(int(floor), digits_for_order(n)))


def pad_for_size(m):
    """Extra digits for an m x m elimination: ceil(5 m log10 m)."""
    m = max(int(m), 2)
    return math.ceil(5 * m * math.log10(m))


def series_pad(u):
    """Cancellation padding for the entire Airy series at argument u.

    The terms of the Maclaurin series peak near exp((2/3)|u|^{3/2}) while the
    value can be exponentially small, so pad by 2|u|^{3/2} log10(e) digits
    (a safe overestimate of the (4/3)|u|^{3/2} worst case).
    """
    try:
        r = abs(complex(u))
    except (OverflowError, TypeError, ValueError):
        # huge arguments: use mpf absolute value, still finite in float terms
        r = float(abs(mp.mpf(abs(u))))
    if not math.isfinite(r):
        raise OverflowError("non-finite argument to series_pad")
    return math.ceil(2.0 * r ** 1.5 * _LOG10E)


@contextmanager
def workdps(dps):
    """mp.dps block, always restored."""
    old = mp.dps
    mp.dps = int(dps)
    try:
        yield mp
    finally:
        mp.dps = old


def mag10(x):
    """Integer-safe decimal magnitude: floor-ish of log10|x|; None for 0."""
    m = mp.mag(x)  # binary exponent bound, exact integer even for huge values
    if m == mp.ninf:
        return None
    return int(math.floor(int(m) * 0.30102999566398120))


def nstr_full(x, digits):
    """Decimal string carrying the full stated precision."""
    return mp.nstr(x, digits, strip_zeros=False)
