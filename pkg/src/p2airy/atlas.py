"""Pole/zero field maps of q_n and the monotonicity sweep.

q_n = (log(tau_{n-1}/tau_n))' is meromorphic with simple poles of residue +1
at zeros of tau_{n-1} and -1 at zeros of tau_n. A rectangle scan therefore
carries four contour counts per cell, all from the same boundary samples:

    W   = (1/2pi i) oint q'/q   = #q-zeros - #poles,
    R   = (1/2pi i) oint q      = #tau_{n-1}-zeros - #tau_n-zeros,
    Wm  = (1/2pi i) oint tm'/tm = #tau_{n-1}-zeros,
    Wn  = (1/2pi i) oint tn'/tn = #tau_n-zeros,

with the built-in cross-check R = Wm - Wn and q-zero count W + Wm + Wn.
Cells are subdivided until each holds at most one singular point, then the
points are pinned by Newton: poles on the tau side (tau, tau' from the
shared minor family) and independently on the q side (Newton on 1/q), with
the distance between the two recorded per entry.

The monotonicity sweep walks beta_n(t, 1), its finite-difference t
derivative, h_n and the image ordering of q_n over a real grid and records
per-point verdicts instead of aborting on the first failure.
"""

from dataclasses import dataclass

from mpmath import mp

from .cubic import CoeffSequence
from .errors import (
    AtPoleError,
    ExceptionalPointError,
    InternalConsistencyError,
    UsageError,
)
from .mpkernel import SeedSpec, airy_pair
from .precision import PrecCtx, workdps
from .tau import tau_family

_GOLDEN = "0.61803398874989484820458683436563811772"


def airy_first_zero(ctx=None):
    """Largest real zero iota_1 of Ai by Newton from -2.3."""
    ctx = ctx or PrecCtx()
    with workdps(ctx.dps + 10):
        u = mp.mpf("-2.3")
        tol = mp.mpf(10) ** (-(ctx.digits + 5))
        for _ in range(ctx.digits + 40):
            ai, aip, _, _ = airy_pair(u, ctx)
            step = ai / aip
            u -= step
            if abs(step) < tol:
                break
        else:
            raise InternalConsistencyError("Airy zero Newton did not converge")
        ai, aip, _, _ = airy_pair(u, ctx)
        if abs(ai) > mp.mpf(10) ** (-(ctx.digits - 5)):
            raise InternalConsistencyError("Airy zero residual too large")
    return u


# ---------------------------------------------------------------------------
# pole/zero scan


@dataclass(frozen=True)
class PoleZeroEntry:
    location: object
    kind: str  # "zero" | "pole"
    source: str  # "tau_{n-1}" | "tau_n" | "q-root"
    winding: int  # residue sign for poles, +1 for zeros
    tau_distance: object  # pole entries: |tau-side - q-side location|; else 0


@dataclass(frozen=True)
class PoleZeroReport:
    n: int
    lam: object
    box: tuple  # scanned rectangle (re0, re1, im0, im1), includes the margin
    grid: tuple
    entries: tuple
    total_winding: int  # sum of per-cell contour windings of q over the grid
    flags: tuple  # unresolved cells (rect, reason)

    @property
    def poles(self):
        return tuple(e for e in self.entries if e.kind == "pole")

    @property
    def zeros(self):
        return tuple(e for e in self.entries if e.kind == "zero")


class _FieldSampler:
    """Memoized boundary evaluations of the four contour integrands."""

    def __init__(self, n, seed, ctx):
        self.n = n
        self.seed = seed
        self.ctx = ctx
        self.cache = {}

    def __call__(self, z):
        key = (z.real._mpf_, z.imag._mpf_)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        famN = tau_family(self.n, z, self.seed, self.ctx)
        famM = tau_family(self.n - 1, z, self.seed, self.ctx)
        if famN.tau == 0 or famM.tau == 0:
            raise AtPoleError("contour node on a tau zero", location=z)
        with workdps(self.ctx.dps + 10):
            ln = famN.d1 / famN.tau
            lm = famM.d1 / famM.tau
            q = lm - ln
            p = -2 * (famN.d2 * famN.tau - famN.d1 ** 2) / famN.tau ** 2
            qp = p - q * q - z / 2
            if q == 0:
                raise AtPoleError("contour node on a q zero", location=z)
            vals = (qp / q, q, lm, ln)
        self.cache[key] = vals
        return vals


class _EdgeTable:
    """Directed-edge midpoint sums, shared between neighbouring cells.

    Each undirected edge carries one phase (bumped when a node lands on a
    singularity) and one node count; both neighbours integrate over exactly
    the same nodes, so interior edges cancel exactly in any cell-sum.
    """

    _BASE = 10
    _PHASES = (mp.mpf("0.5"), mp.mpf(_GOLDEN), mp.mpf("0.28188"))

    def __init__(self, sampler):
        self.sampler = sampler
        self.state = {}  # key -> [phase_index, level]
        self.ends = {}  # key -> canonical (lo, hi) endpoints
        self.sums = {}  # (key, phase_index, level) -> 4-vector of sums

    def _key(self, a, b):
        ka = (a.real._mpf_, a.imag._mpf_)
        kb = (b.real._mpf_, b.imag._mpf_)
        if ka <= kb:
            key, direction, lo, hi = (ka, kb), 1, a, b
        else:
            key, direction, lo, hi = (kb, ka), -1, b, a
        self.ends.setdefault(key, (lo, hi))
        return key, direction

    def refine(self, a, b):
        key, _ = self._key(a, b)
        st = self.state.setdefault(key, [0, 0])
        st[1] += 1

    def integral(self, a, b):
        """Vector of midpoint-rule integrals of the four fields along a->b."""
        key, direction = self._key(a, b)
        st = self.state.setdefault(key, [0, 0])
        while True:
            phase_i, level = st
            tag = (key, phase_i, level)
            sums = self.sums.get(tag)
            if sums is None:
                lo, hi = self.ends[key]
                m = self._BASE * (2 ** level)
                phase = self._PHASES[phase_i]
                try:
                    acc = [mp.mpf(0)] * 4
                    span = hi - lo
                    for j in range(m):
                        z = lo + span * ((j + phase) / m)
                        v = self.sampler(z)
                        for i in range(4):
                            acc[i] += v[i]
                    sums = tuple(a_ * span / m for a_ in acc)
                    self.sums[tag] = sums
                except AtPoleError:
                    if phase_i + 1 >= len(self._PHASES):
                        raise
                    st[0] += 1
                    continue
            return sums if direction == 1 else tuple(-s for s in sums)


def _counts_for_cell(rect, edges, ctx, max_rounds=4):
    """Integer (W, Wm, Wn) for one rectangle, or None when not resolvable."""
    x0, x1, y0, y1 = rect
    corners = (
        mp.mpc(x0, y0),
        mp.mpc(x1, y0),
        mp.mpc(x1, y1),
        mp.mpc(x0, y1),
        mp.mpc(x0, y0),
    )
    prev = None
    for _ in range(max_rounds + 1):
        with workdps(ctx.dps + 10):
            tot = [mp.mpf(0)] * 4
            for a, b in zip(corners, corners[1:]):
                v = edges.integral(a, b)
                for i in range(4):
                    tot[i] += v[i]
            ints = [t / (2 * mp.pi * mp.mpc(0, 1)) for t in tot]
            rounded = [int(mp.nint(mp.re(v))) for v in ints]
            close = all(
                abs(v - r) < mp.mpf("0.1") for v, r in zip(ints, rounded)
            )
        w, r, wm, wn = rounded
        consistent = close and r == wm - wn and w + wm + wn >= 0
        if consistent and prev == rounded:
            return w, wm, wn
        prev = rounded if consistent else None
        for a, b in zip(corners, corners[1:]):
            edges.refine(a, b)
    return None


def _newton_tau(order, z0, seed, ctx, steps=80):
    with workdps(ctx.dps + 10):
        z = mp.mpc(z0)
        tol = mp.mpf(10) ** (-(ctx.digits - 10))
        for _ in range(steps):
            fam = tau_family(order, z, seed, ctx)
            if fam.d1 == 0:
                return None
            step = fam.tau / fam.d1
            z -= step
            if abs(step) < tol:
                return z
    return None


def _newton_inv_q(n, z0, seed, ctx, sampler, steps=80):
    """Newton on 1/q from z0: independent q-side location of a pole."""
    with workdps(ctx.dps + 10):
        z = mp.mpc(z0)
        tol = mp.mpf(10) ** (-(ctx.digits - 10))
        for _ in range(steps):
            try:
                qpq, q, _, _ = sampler(z)
            except AtPoleError as e:
                return mp.mpmathify(e.location)
            # g = 1/q has g/g' = -q/q', so the Newton update is z + q/q'
            if qpq == 0:
                return None
            step = -1 / qpq
            z -= step
            if abs(step) < tol:
                return z
    return None


def _newton_q(n, z0, seed, ctx, sampler, steps=80):
    with workdps(ctx.dps + 10):
        z = mp.mpc(z0)
        tol = mp.mpf(10) ** (-(ctx.digits - 10))
        for _ in range(steps):
            try:
                qpq, q, _, _ = sampler(z)
            except AtPoleError:
                return None
            if qpq == 0:
                return None
            step = 1 / qpq  # q/q'
            z -= step
            if abs(step) < tol:
                return z
    return None


def _inside(z, rect, slack):
    x0, x1, y0, y1 = rect
    return (
        x0 - slack <= mp.re(z) <= x1 + slack
        and y0 - slack <= mp.im(z) <= y1 + slack
    )


def _locate_in_cell(rect, counts, n, seed, ctx, sampler, entries, flags, at_cap):
    w, wm, wn = counts
    nzero = w + wm + wn
    x0, x1, y0, y1 = rect
    diag = mp.sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2)
    dedup = mp.mpf(10) ** (-(ctx.digits // 2))
    center = mp.mpc((x0 + x1) / 2, (y0 + y1) / 2)
    starts = [center] + [
        mp.mpc(x0 + fx * (x1 - x0), y0 + fy * (y1 - y0))
        for fx, fy in ((0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75))
    ]

    def note(kind, source, winding, loc, tau_distance):
        for e in entries:
            if abs(e.location - loc) < dedup and e.kind == kind:
                return
        entries.append(
            PoleZeroEntry(
                location=loc,
                kind=kind,
                source=source,
                winding=winding,
                tau_distance=tau_distance,
            )
        )

    def hunt(newton, accept):
        for s in starts:
            z = newton(s)
            if z is not None and _inside(z, rect, diag / 8):
                accept(z)
                return True
        return False

    if wm and not hunt(
        lambda s: _newton_tau(n - 1, s, seed, ctx),
        lambda z: note(
            "pole",
            f"tau_{n - 1}",
            1,
            z,
            _pole_side_distance(n, z, diag, seed, ctx, sampler),
        ),
    ):
        flags.append((rect, f"tau_{n - 1} zero not pinned"))
    if wn and not hunt(
        lambda s: _newton_tau(n, s, seed, ctx),
        lambda z: note(
            "pole",
            f"tau_{n}",
            -1,
            z,
            _pole_side_distance(n, z, diag, seed, ctx, sampler),
        ),
    ):
        flags.append((rect, f"tau_{n} zero not pinned"))
    if nzero and not hunt(
        lambda s: _newton_q(n, s, seed, ctx, sampler),
        lambda z: note("zero", "q-root", 1, z, mp.mpf(0)),
    ):
        flags.append((rect, "q zero not pinned"))
    if at_cap and (wm + wn + nzero) > 1:
        flags.append((rect, "multiple singular points at depth cap"))


def _pole_side_distance(n, z, diag, seed, ctx, sampler):
    """|tau-side location - independent 1/q-Newton location| of one pole."""
    zq = _newton_inv_q(n, z + diag / 97, seed, ctx, sampler)
    return abs(zq - z) if zq is not None else mp.inf


def _resolve_cell(rect, n, seed, ctx, sampler, edges, entries, flags, depth, maxdepth):
    """Resolve one cell; returns its (W, Wm, Wn) or children's sum."""
    counts = _counts_for_cell(rect, edges, ctx)
    if counts is None and depth >= maxdepth:
        flags.append((rect, "contour counts did not stabilize"))
        return (0, 0, 0)
    if counts == (0, 0, 0):
        return counts
    if counts is not None:
        w, wm, wn = counts
        singular = wm + wn + (w + wm + wn)
        if singular <= 1 or depth >= maxdepth:
            _locate_in_cell(
                rect, counts, n, seed, ctx, sampler, entries, flags,
                at_cap=depth >= maxdepth,
            )
            return counts
    x0, x1, y0, y1 = rect
    xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
    total = (0, 0, 0)
    for sub in (
        (x0, xm, y0, ym),
        (xm, x1, y0, ym),
        (x0, xm, ym, y1),
        (xm, x1, ym, y1),
    ):
        got = _resolve_cell(
            sub, n, seed, ctx, sampler, edges, entries, flags, depth + 1, maxdepth
        )
        total = tuple(a + b for a, b in zip(total, got))
    return total


def pole_zero_scan(n, lam, box, grid, ctx=None, maxdepth=4):
    """Poles and zeros of q_n(z; lambda) over a rectangle.

    box = (re0, re1, im0, im1), grid = (nx, ny) cells. The lower box corner
    is nudged outward by an irrational fraction of a cell so no grid line
    hits the real axis (where the lambda = 0 singularities live); the
    reported box is the rectangle actually scanned.
    """
    if n < 1:
        raise UsageError("pole_zero_scan requires n >= 1")
    ctx = ctx or PrecCtx()
    seed = lam if isinstance(lam, SeedSpec) else SeedSpec.from_lambda(lam)
    re0, re1, im0, im1 = (mp.mpf(b) for b in box)
    nx, ny = int(grid[0]), int(grid[1])
    if not (re1 > re0 and im1 > im0 and nx >= 1 and ny >= 1):
        raise UsageError("box must be a nondegenerate rectangle, grid >= 1x1")
    with workdps(ctx.dps + 10):
        margin = (3 - mp.sqrt(5)) / 20
        re0 -= margin * (re1 - re0) / nx
        im0 -= margin * (im1 - im0) / ny
        xs = [re0 + (re1 - re0) * mp.mpf(j) / nx for j in range(nx + 1)]
        ys = [im0 + (im1 - im0) * mp.mpf(k) / ny for k in range(ny + 1)]
    sampler = _FieldSampler(n, seed, ctx)
    edges = _EdgeTable(sampler)
    entries, flags = [], []
    grid_w = 0
    for k in range(ny):
        for j in range(nx):
            rect = (xs[j], xs[j + 1], ys[k], ys[k + 1])
            w, _, _ = _resolve_cell(
                rect, n, seed, ctx, sampler, edges, entries, flags, 0, maxdepth
            )
            grid_w += w
    total = grid_w
    report = PoleZeroReport(
        n=n,
        lam=seed.lam,
        box=(re0, re1, im0, im1),
        grid=(nx, ny),
        entries=tuple(sorted(entries, key=lambda e: (mp.re(e.location), mp.im(e.location)))),
        total_winding=total,
        flags=tuple(flags),
    )
    return report


# ---------------------------------------------------------------------------
# monotonicity sweep


@dataclass(frozen=True)
class SweepRecord:
    """Verdicts at one (n, t); None marks a check not applicable there."""

    n: int
    t: object
    bprime_prev_pos: object  # beta'_{n-1} > 0
    bprime_band: object  # 0 < beta'_n < 1/(2 sqrt t), only t > 0
    beta_band: object  # sqrt t < beta_n < beta_{n+1}, only t > 0
    h_sign: object  # sgn h_n = (-1)^n
    q_order: object  # beta_n > beta_{n-1}  <=>  q_{n+1}(z) < q_n(z), t >= 0
    indeterminate: bool


@dataclass(frozen=True)
class SweepReport:
    n_max: int
    t_grid: tuple
    records: tuple
    violations: tuple  # failures of the every-n claims
    below_threshold: tuple  # beta'_{n-1} <= 0 records (eventual claim, small n)
    indeterminates: tuple
    skipped: tuple  # (t, reason) grid points lost to exceptional points
    first_hold: dict  # check name -> smallest n passing at every grid t
    hold_from: object  # smallest n0 with beta'_{n-1} > 0 for all n0 <= n <= n_max

    @property
    def ok(self):
        return (
            not self.violations
            and not self.indeterminates
            and self.hold_from is not None
        )


_SWEEP_CHECKS = ("bprime_prev_pos", "bprime_band", "beta_band", "h_sign", "q_order")
# claims asserted for every n; beta'_{n-1} > 0 is only eventual in n
_UNIVERSAL_CHECKS = ("bprime_band", "beta_band", "h_sign", "q_order")


def default_sweep_grid(ctx=None, points=50):
    """points-long uniform grid on (iota_1 + 0.01, 10)."""
    ctx = ctx or PrecCtx()
    with workdps(ctx.dps):
        lo = airy_first_zero(ctx) + mp.mpf("0.01")
        hi = mp.mpf(10)
        return tuple(lo + (hi - lo) * mp.mpf(i) / (points - 1) for i in range(points))


def monotonicity_sweep(n_max, t_grid, ctx=None, lam=0):
    """Verdict table for the beta/h monotonicity claims on a real grid.

    Checks per n in 1..n_max and grid t (N = 1 throughout):
      beta'_{n-1}(t) > 0;  0 < beta'_n < 1/(2 sqrt t) and
      sqrt t < beta_n < beta_{n+1} for t > 0;  sgn h_n = (-1)^n;
      beta_n > beta_{n-1} for t >= 0 (the image ordering q_{n+1} < q_n at
      z = -2^{1/3} t). Derivatives are central differences with step
      10^{-digits/3} evaluated at doubled precision; a sign verdict whose
      magnitude is within 10x the step-squared error proxy is recorded as
      indeterminate, never as pass/fail.

    The band, ordering and sign claims are asserted for every n, so any
    failure lands in report.violations. The beta'_{n-1} > 0 claim is only
    eventual in n: beta_1 descends from a pole at iota_1 (H_1 = Ai vanishes
    there while H_2 does not), so it provably decreases on part of the grid
    and small-n failures are expected. Those records go to
    report.below_threshold, and report.hold_from is the empirical smallest
    n0 such that the claim holds at every grid t for all n0 <= n <= n_max
    (None when even n = n_max fails somewhere, which does flag the report).
    """
    if n_max < 1:
        raise UsageError("monotonicity_sweep requires n_max >= 1")
    ctx = ctx or PrecCtx(60)
    ectx = PrecCtx(2 * ctx.digits)
    records, violations, below, indeterminates, skipped = [], [], [], [], []
    mmax = n_max + 2
    with workdps(ectx.dps):
        h = mp.mpf(10) ** -(ctx.digits // 3)
    for t in t_grid:
        t = mp.mpf(t)
        try:
            seq = CoeffSequence(t, 1, lam, ctx, mmax)
            seq_p = CoeffSequence(t + h, 1, lam, ectx, mmax)
            seq_m = CoeffSequence(t - h, 1, lam, ectx, mmax)
            betas = [seq.beta(k) for k in range(n_max + 2)]
            with workdps(ectx.dps):
                bprimes = [
                    (seq_p.beta(k) - seq_m.beta(k)) / (2 * h)
                    for k in range(n_max + 1)
                ]
            hs = [seq.h(k) for k in range(1, n_max + 1)]
        except ExceptionalPointError as e:
            skipped.append((t, str(e)))
            continue
        with workdps(ctx.dps):
            fd_floor = 10 * h * h * max(max(abs(b) for b in betas), mp.mpf(1))
            pos = t > 0
            sq = mp.sqrt(t) if pos else None
            for n in range(1, n_max + 1):
                indet = abs(bprimes[n - 1]) < fd_floor or (
                    pos and abs(bprimes[n]) < fd_floor
                )
                rec = SweepRecord(
                    n=n,
                    t=t,
                    bprime_prev_pos=(bprimes[n - 1] > 0) if not indet else None,
                    bprime_band=(
                        (0 < bprimes[n] < 1 / (2 * sq)) if pos and not indet else None
                    ),
                    beta_band=((sq < betas[n] < betas[n + 1]) if pos else None),
                    h_sign=(mp.re(hs[n - 1]) * (-1) ** n > 0),
                    q_order=((betas[n] > betas[n - 1]) if t >= 0 else None),
                    indeterminate=indet,
                )
                records.append(rec)
                if indet:
                    indeterminates.append(rec)
                if any(getattr(rec, c) is False for c in _UNIVERSAL_CHECKS):
                    violations.append(rec)
                if rec.bprime_prev_pos is False:
                    below.append(rec)
    first_hold = {}
    for check in _SWEEP_CHECKS:
        first_hold[check] = None
        for n in range(1, n_max + 1):
            vals = [getattr(r, check) for r in records if r.n == n]
            if vals and all(v is not False for v in vals):
                first_hold[check] = n
                break
    fail_ns = {r.n for r in below}
    hold_from = 1 if not fail_ns else max(fail_ns) + 1
    if hold_from > n_max:
        hold_from = None
    return SweepReport(
        n_max=n_max,
        t_grid=tuple(mp.mpf(t) for t in t_grid),
        records=tuple(records),
        violations=tuple(violations),
        below_threshold=tuple(below),
        indeterminates=tuple(indeterminates),
        skipped=tuple(skipped),
        first_hold=first_hold,
        hold_from=hold_from,
    )
