"""Arbitrary-precision Airy kernel and seed-function jets.

Everything downstream consumes this module: the seed function

    phi(z) = C1*Ai(u) + C2*Bi(u),   u = -2^{-1/3} z,

its derivative jets (entries of the tau-function Hankel determinants), and
the lambda -> (C1, C2) normalization. Ai and Bi are evaluated exclusively by
their entire Maclaurin series with cancellation-aware precision padding, so
the kernel is correct on all of C, not just near the real axis.
"""

import math
from dataclasses import dataclass

from mpmath import mp

from .errors import InternalConsistencyError, UsageError
from .precision import PrecCtx, series_pad, workdps

_MAX_TERMS = 2_000_000


def is_infinite_lambda(lam):
    if lam is mp.inf or lam == mp.inf:
        return True
    if isinstance(lam, str):
        return lam.strip().lower() in ("inf", "infinity", "oo")
    return False


# ---------------------------------------------------------------------------
# seed constants Ai(0), Ai'(0) from Gamma closed forms, cached per precision

_const_cache = {}


def _airy_constants():
    """(Ai(0), Ai'(0), sqrt(3)) at the current mp precision, cached.

    Closed forms 3^{-2/3}/Gamma(2/3) and -3^{-1/3}/Gamma(1/3); the cache entry
    is validated once via the Wronskian Ai(0)Bi'(0) - Ai'(0)Bi(0) = 1/pi.
    """
    key = mp.prec
    hit = _const_cache.get(key)
    if hit is not None:
        return hit
    three = mp.mpf(3)
    ai0 = three ** mp.mpf("-2/3") / mp.gamma(mp.mpf("2/3"))
    aip0 = -(three ** mp.mpf("-1/3")) / mp.gamma(mp.mpf("1/3"))
    sq3 = mp.sqrt(three)
    # Bi(0) = sqrt3*Ai(0), Bi'(0) = -sqrt3*Ai'(0); Wronskian must be 1/pi
    wr = ai0 * (-sq3 * aip0) - aip0 * (sq3 * ai0)
    if abs(wr * mp.pi - 1) > mp.mpf(10) ** (-(mp.dps - 5)):
        raise InternalConsistencyError("Airy seed constants fail the Wronskian check")
    _const_cache[key] = (ai0, aip0, sq3)
    return ai0, aip0, sq3


def _series_fg(u):
    """The four entire series (f, g, f', g') of the Airy basis at u.

    f = sum u^{3k} prod..., g = sum u^{3k+1} prod...; Ai = Ai(0) f + Ai'(0) g
    and Bi = sqrt3 (Ai(0) f - Ai'(0) g). Terms are summed at the ambient
    precision until all four fall below the running peak magnitude by more
    than the ambient precision (the caller pads for that cancellation).
    """
    one = mp.mpf(1)
    u = mp.mpmathify(u)
    u3 = u ** 3
    tf, tg, tgp = one, u, one
    tfp = u * u / 2
    f, g, fp, gp = tf, tg, tfp, tgp
    peak = 0  # peak binary magnitude seen across all terms
    stop_below = -(mp.prec + 20)
    k = 0
    while True:
        k += 1
        # advance all four term sequences from index k-1 to k
        km1 = k - 1
        tf = tf * u3 / ((3 * km1 + 2) * (3 * km1 + 3))
        tg = tg * u3 / ((3 * km1 + 3) * (3 * km1 + 4))
        tgp = tgp * u3 / ((3 * km1 + 1) * (3 * km1 + 3))
        if k >= 2:
            tfp = tfp * (mp.mpf(k) / km1) * u3 / ((3 * km1 + 2) * (3 * km1 + 3))
        f += tf
        g += tg
        gp += tgp
        if k >= 2:
            fp += tfp
        mags = [mp.mag(t) for t in (tf, tg, tgp, tfp)]
        peak = max([peak] + [m for m in mags if m != mp.ninf])
        if all(m == mp.ninf or m < peak + stop_below for m in mags):
            break
        if k > _MAX_TERMS:
            raise InternalConsistencyError("Airy series failed to converge")
    return f, g, fp, gp


def _airy_pair_raw(u):
    """(Ai, Ai', Bi, Bi') at the ambient precision, series route."""
    ai0, aip0, sq3 = _airy_constants()
    f, g, fp, gp = _series_fg(u)
    ai = ai0 * f + aip0 * g
    aip = ai0 * fp + aip0 * gp
    bi = sq3 * (ai0 * f - aip0 * g)
    bip = sq3 * (ai0 * fp - aip0 * gp)
    return ai, aip, bi, bip


def airy_pair(u, ctx, self_check=False):
    """(Ai(u), Ai'(u), Bi(u), Bi'(u)) correct to ctx.digits.

    Series-only evaluation; working precision is padded by the cancellation
    estimate 2|u|^{3/2} log10(e). With self_check=True the values are
    recomputed at doubled digits and compared, raising an internal
    consistency error on disagreement beyond 10^{-(digits-2)}.
    """
    pad = series_pad(u)
    with workdps(ctx.dps + pad + 5):
        vals = _airy_pair_raw(u)
    if self_check:
        ctx2 = PrecCtx(2 * ctx.digits)
        with workdps(ctx2.dps + pad + 5):
            vals2 = _airy_pair_raw(u)
        tol = mp.mpf(10) ** (-(ctx.digits - 2))
        for a, b in zip(vals, vals2):
            scale = max(abs(b), mp.mpf(1))
            if abs(a - b) > tol * scale:
                raise InternalConsistencyError(
                    "Airy precision-doubling self-check failed at u=%s" % str(u)
                )
    return vals


# ---------------------------------------------------------------------------
# seed specification: lambda -> (C1, C2) and the ray weights alpha_k


@dataclass(frozen=True)
class SeedSpec:
    """Normalized seed C1*Ai(u) + C2*Bi(u) with its ray weights.

    lam is the ratio C2/C1 (mp.inf for the pure-Bi seed). The alphas are the
    ray weights of the regularization contour: alpha0 = lam/pi and
    alpha1,2 = -lam/2pi -+ i/2pi for finite lam; (1/pi, -1/2pi, -1/2pi) at
    infinity. They satisfy alpha0+alpha1+alpha2 = 0, pi*alpha0 = lam (finite
    case) and pi*i*(alpha1-alpha2) = 1, so the moment generating function of
    the cubic ensemble coincides with this seed.
    """

    lam: object
    c1: object
    c2: object
    alpha0: object
    alpha1: object
    alpha2: object

    @classmethod
    def from_lambda(cls, lam):
        if is_infinite_lambda(lam):
            pi = mp.pi
            return cls(
                lam=mp.inf,
                c1=mp.mpf(0),
                c2=mp.mpf(1),
                alpha0=1 / pi,
                alpha1=-1 / (2 * pi),
                alpha2=-1 / (2 * pi),
            )
        lam = mp.mpmathify(lam)
        pi = mp.pi
        i2pi = mp.mpc(0, 1) / (2 * pi)  # i/(2 pi); note 1/(2 pi i) = -i/(2 pi)
        return cls(
            lam=lam,
            c1=mp.mpf(1),
            c2=lam,
            alpha0=lam / pi,
            alpha1=-lam / (2 * pi) - i2pi,
            alpha2=-lam / (2 * pi) + i2pi,
        )

    @classmethod
    def from_c(cls, c1, c2):
        """Unnormalized coefficients; lambda recovered as c2/c1.

        The overall scale cancels in every log-derivative, so any nonzero
        multiple selects the same solution; tau itself is scale dependent.
        """
        c1 = mp.mpmathify(c1)
        c2 = mp.mpmathify(c2)
        if c1 == 0 and c2 == 0:
            raise UsageError("seed coefficients must not both vanish")
        if c1 == 0:
            base = cls.from_lambda(mp.inf)
        else:
            base = cls.from_lambda(c2 / c1)
        return cls(
            lam=base.lam,
            c1=c1,
            c2=c2,
            alpha0=base.alpha0,
            alpha1=base.alpha1,
            alpha2=base.alpha2,
        )


def seed_lambda(lam):
    """Convenience: SeedSpec from a lambda value (numbers, 'inf', mp.inf)."""
    return SeedSpec.from_lambda(lam)


# ---------------------------------------------------------------------------
# derivative jets of the seed


@dataclass(frozen=True)
class AiryJet:
    """phi(z) and its derivatives phi^{(0..K)} at one point."""

    z: object
    order: int
    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def seed_jet(z, K, seed, ctx):
    """Jet (phi, phi', ..., phi^{(K)}) of the seed at z.

    phi and phi' come from the Airy pair by the chain rule in u = -2^{-1/3}z;
    higher orders follow the recursion phi^{(k+2)} = -(z/2) phi^{(k)}
    - (k/2) phi^{(k-1)}, which is the seed's ODE phi'' = -(z/2) phi
    differentiated k times.
    """
    if K < 1:
        raise UsageError("jet order K must be >= 1")
    z = mp.mpmathify(z)
    pad = series_pad(z) + max(10, K // 8)
    with workdps(ctx.dps + pad):
        c = mp.mpf(2) ** mp.mpf("-1/3")
        u = -c * z
        ai, aip, bi, bip = _airy_pair_raw(u)
        v = [seed.c1 * ai + seed.c2 * bi, -c * (seed.c1 * aip + seed.c2 * bip)]
        for k in range(K - 1):
            nxt = -(z / 2) * v[k]
            if k >= 1:
                nxt -= (mp.mpf(k) / 2) * v[k - 1]
            v.append(nxt)
    return AiryJet(z=z, order=K, values=tuple(v))


def rotate_lambda_identity(z, sign, ctx):
    """Residual of the Airy connection formula under rotation.

    Verifies Ai(z) +- i Bi(z) = 2 e^{+-i pi/3} Ai(z e^{-+2 pi i/3}) and
    returns the absolute residual |LHS - RHS| (the classical one-rotation
    connection formula; the z=0 value arg(Ai(0)+iBi(0)) = pi/3 pins the
    prefactor).
    """
    if sign not in (1, -1):
        raise UsageError("sign must be +1 or -1")
    z = mp.mpmathify(z)
    pad = series_pad(z)
    with workdps(ctx.dps + pad + 5):
        ai, _, bi, _ = _airy_pair_raw(z)
        lhs = ai + sign * mp.mpc(0, 1) * bi
        rot = mp.e ** (-sign * 2 * mp.pi * mp.mpc(0, 1) / 3)
        air, _, _, _ = _airy_pair_raw(z * rot)
        rhs = 2 * mp.e ** (sign * mp.pi * mp.mpc(0, 1) / 3) * air
        res = abs(lhs - rhs)
    return res
