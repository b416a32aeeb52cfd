"""Shared oracles for the test suite.

Everything here is deliberately *independent* of the library's computation
paths: determinants by permutation expansion, moments by ray quadrature,
Airy values through mpmath's own hypergeometric implementation. Slow is
fine; these only run at small sizes.
"""

import itertools
import json
from pathlib import Path

from mpmath import mp, mpf

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "p2airy" / "schemas"


def load_schema(name):
    return json.loads((SCHEMA_DIR / f"{name}.json").read_text())


def perm_det(a):
    """Determinant by signed permutation expansion (n <= 6)."""
    n = len(a)
    tot = mp.mpf(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):  # cycle-count parity
            if seen[i]:
                continue
            j, clen = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                clen += 1
            if clen % 2 == 0:
                sign = -sign
        term = mp.mpf(sign)
        for i in range(n):
            term = term * a[i][perm[i]]
        tot += term
    return tot


def airy_seed_value(z, lam, derivative=0):
    """phi^{(k)}(z) for the seed C1 Ai(u) + C2 Bi(u), u = -2^{-1/3} z.

    mpmath's airyai/airybi handle the derivatives; this never touches the
    library's series kernel.
    """
    c = mp.mpf(2) ** mp.mpf("-1/3")
    u = -c * z
    if lam == "inf":
        c1, c2 = 0, 1
    else:
        c1, c2 = 1, lam
    chain = (-c) ** derivative
    val = mp.mpf(0)
    if c1:
        val += c1 * mp.airyai(u, derivative=derivative)
    if c2:
        val += c2 * mp.airybi(u, derivative=derivative)
    return chain * val


def moment_quad(k, t, N, lam, dps=40):
    """m_k by quadrature over the three regularization rays.

    Rays L_j at angles pi(-1 + 2j/3) oriented toward the origin, truncated
    at R = 9 (the tail is exp(-N R^3/3)-small), alpha weights fixed by the
    seed parameter; lam = "inf" selects the pure-Bi weights.
    """
    with mp.workdps(dps):
        if lam == "inf":
            a = [1 / mp.pi, -1 / (2 * mp.pi), -1 / (2 * mp.pi)]
        else:
            lam = mp.mpmathify(lam)
            a = [
                lam / mp.pi,
                -lam / (2 * mp.pi) + 1 / (2 * mp.pi * mp.mpc(0, 1)),
                -lam / (2 * mp.pi) - 1 / (2 * mp.pi * mp.mpc(0, 1)),
            ]
        R = 9
        tot = mp.mpc(0)
        for j in range(3):
            e = mp.expjpi(-1 + mpf(2 * j) / 3)

            def f(x, e=e):
                xe = x * e
                return xe ** k * mp.exp(N * (xe ** 3 / 3 - xe * t))

            tot += a[j] * (-e) * mp.quad(f, [0, 1, 3, R])
        return tot


def fd2(fun, x, h):
    """Plain central second difference."""
    return (fun(x + h) - 2 * fun(x) + fun(x - h)) / (h * h)


def fd1(fun, x, h):
    return (fun(x + h) - fun(x - h)) / (2 * h)
