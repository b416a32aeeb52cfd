"""Bäcklund chain: seed jet, steps, reflection, singularities, residuals."""

import pytest
from mpmath import mp

from p2airy.backlund import (
    backlund_chain,
    backlund_step,
    hamiltonian_value,
    q1_jet,
    q_second,
    reflect,
    residual_p2,
    residual_p34,
    residual_s2,
    s2_chain,
)
from p2airy.errors import (
    AtPoleError,
    BacklundSingularityError,
    PVanishesError,
    UsageError,
)
from p2airy.mpkernel import SeedSpec
from p2airy.precision import PrecCtx, workdps
from p2airy.tau import qps_from_tau

CTX = PrecCtx(40)
SD0 = SeedSpec.from_lambda(0)
SDI = SeedSpec.from_lambda(mp.inf)

# first zero of the lambda=inf chain denominator 4 q_1^2 + 2z on the real
# axis; parsed to mpf inside each test so it keeps all 50 digits
Z_DENOM_INF_STR = "-0.50435782383110627057695666554452207492512746445257"


def test_seed_jet_spot_values():
    with workdps(CTX.dps):
        j = q1_jet(mp.mpf(0), SD0, CTX)
        assert j.n == 1
        assert abs(j.q - mp.mpf("-0.578617")) < mp.mpf("1e-6")
        assert abs(j.qprime - mp.mpf("0.3347971")) < mp.mpf("1e-7")
        # q_1' = z/2 + q_1^2 by construction (ulp slack: the jet is formed
        # at padded precision, the comparison at the ambient one)
        assert abs(j.qprime - (j.z / 2 + j.q * j.q)) < mp.mpf("1e-50")
        ji = q1_jet(mp.mpf(0), SDI, CTX)
        # Bi'(0)/Bi(0) = -Ai'(0)/Ai(0), so the two seeds mirror at z = 0
        assert abs(ji.q + j.q) < mp.mpf("1e-38")
        assert abs(ji.q - mp.mpf("0.578616519668")) < mp.mpf("1e-11")


def test_seed_jet_at_pole_of_phi():
    with workdps(PrecCtx(60).dps):
        z1 = -(2 ** mp.mpf("1/3")) * mp.airyaizero(1)
    with pytest.raises(AtPoleError):
        q1_jet(z1, SD0, CTX)


def test_single_step_spot_value():
    # q_2 = -q_1 - 2/(2q_1^2 + 2q_1' + z); at z=0 the denominator is 1.3391883
    with workdps(CTX.dps):
        j1 = q1_jet(mp.mpf(0), SD0, CTX)
        d = 2 * j1.q ** 2 + 2 * j1.qprime + j1.z
        assert abs(d - mp.mpf("1.3391883073")) < mp.mpf("1e-9")
        j2 = backlund_step(j1, CTX)
        assert j2.n == 2
        assert abs(j2.q - mp.mpf("-0.9148254324815767")) < mp.mpf("1e-12")


def test_q_second_closure():
    # the closure is the P_II right-hand side itself
    j = q1_jet(mp.mpf("0.4"), SD0, CTX)
    want = 2 * j.q ** 3 + mp.mpf("0.4") * j.q + mp.mpf("0.5")
    assert q_second(j) == want


def test_chain_matches_tau_route():
    with workdps(PrecCtx(50).dps):
        for n in (2, 3, 5):
            for z in (mp.mpf("0.3"), mp.mpc("-0.9", "0.7")):
                j = backlund_chain(n, z, SD0, CTX)
                sol = qps_from_tau(n, z, SD0, CTX)
                assert abs(j.q - sol.q) < mp.mpf("1e-30")
                assert abs(j.qprime - sol.qprime) < mp.mpf("1e-30")


def test_reflection():
    with workdps(CTX.dps):
        j1 = q1_jet(mp.mpf("0.2"), SD0, CTX)
        j0 = reflect(j1)
        assert j0.n == 0 and j0.q == -j1.q and j0.qprime == -j1.qprime
        # involution up to ambient rounding (negation re-rounds the padded jet)
        j11 = reflect(j0)
        assert j11.n == 1 and abs(j11.q - j1.q) < mp.mpf("1e-50")
        jm1 = backlund_chain(-1, mp.mpf(0), SD0, CTX)
        assert jm1.n == -1
        assert abs(jm1.q - mp.mpf("0.9148254324815767")) < mp.mpf("1e-12")
        jc = backlund_chain(1, mp.mpf("0.2"), SD0, CTX)
        assert jc.n == 1 and abs(jc.q - j1.q) < mp.mpf("1e-50")


def test_chain_singularity_is_detected():
    with workdps(CTX.dps):
        zs = mp.mpf(Z_DENOM_INF_STR)
        j = q1_jet(zs, SDI, CTX)
        with pytest.raises(BacklundSingularityError) as ei:
            backlund_step(j, CTX)
        assert abs(mp.mpmathify(ei.value.location) - zs) < mp.mpf("1e-30")
        with pytest.raises(BacklundSingularityError):
            backlund_chain(2, zs, SDI, CTX)


def test_unknown_denominator_variant():
    j = q1_jet(mp.mpf(0), SD0, CTX)
    with pytest.raises(UsageError):
        backlund_step(j, CTX, denominator="cubed")


def test_misprinted_variant_diverges_at_n2():
    # the negative control must part ways with the tau route by O(1)
    with workdps(CTX.dps):
        jv = backlund_chain(2, mp.mpf(0), SD0, CTX, denominator="squared-qprime")
        sol = qps_from_tau(2, mp.mpf(0), SD0, CTX)
        assert abs(jv.q - sol.q) > mp.mpf("0.5")


def test_hamiltonian_equals_sigma():
    with workdps(CTX.dps):
        assert hamiltonian_value(0, 0, 0, 3) == 0
        for n in (1, 2, 4):
            sol = qps_from_tau(n, mp.mpf("0.7"), SD0, CTX)
            h = hamiltonian_value(sol.q, sol.p, sol.z, n)
            assert abs(h - sol.sigma) < mp.mpf("1e-35")


def test_residual_p2_true_solution_and_sensitivity():
    def qfun(z, ectx):
        return qps_from_tau(2, z, SD0, ectx).q

    with workdps(PrecCtx(80).dps):
        res = residual_p2(2, mp.mpf("0.3"), CTX, qfun)
        assert abs(res) < mp.mpf(10) ** -(CTX.digits // 2)

        def qbad(z, ectx):
            return qfun(z, ectx) + mp.mpf("1e-6")

        assert abs(residual_p2(2, mp.mpf("0.3"), CTX, qbad)) > mp.mpf("1e-7")


def test_residual_p34_true_solution_and_vanishing_p():
    def pfun(z, ectx):
        return qps_from_tau(1, z, SD0, ectx).p

    with workdps(PrecCtx(80).dps):
        res = residual_p34(1, mp.mpf("0.5"), CTX, pfun)
        assert abs(res) < mp.mpf(10) ** -(CTX.digits // 2)
    with pytest.raises(PVanishesError):
        residual_p34(1, mp.mpf("0.5"), CTX, lambda z, ectx: mp.mpf(0))


def test_residual_s2_true_solution_and_sensitivity():
    with workdps(PrecCtx(80).dps):
        sol = qps_from_tau(2, mp.mpf("0.4"), SD0, CTX)
        s, s1, s2 = s2_chain(sol)
        assert abs(residual_s2(s, s1, s2, sol.z, 2)) < mp.mpf(10) ** -(CTX.digits // 2)
        assert abs(residual_s2(s + mp.mpf("0.1"), s1, s2, sol.z, 2)) > mp.mpf("1e-3")
