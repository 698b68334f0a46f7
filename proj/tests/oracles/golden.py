# Copyright 2026 The fedsmd Authors.
# SPDX-License-Identifier: Apache-2.0
"""Independent reference values for the C++ unit tests.

Run: python3 tests/oracles/golden.py
Uses mpmath only; shares no code with the library.
"""
import math

import mpmath as mp

mp.mp.dps = 40

M32 = 0xFFFFFFFF


def philox4x32_10(ctr, key):
    c = list(ctr)
    k = list(key)
    for r in range(10):
        p0 = 0xD2511F53 * c[0]
        p1 = 0xCD9E8D57 * c[2]
        c = [(p1 >> 32) ^ c[1] ^ k[0], p1 & M32, (p0 >> 32) ^ c[3] ^ k[1], p0 & M32]
        if r < 9:
            k = [(k[0] + 0x9E3779B9) & M32, (k[1] + 0xBB67AE85) & M32]
    return c


def schedule(p, mu, kappa, gamma, cstar, t):
    t = mp.mpf(t)
    alpha = (1 + mp.log(t)) ** (-gamma) * t ** (-(kappa - mu)) * min(t ** (-mu), 1 / mp.mpf(cstar))
    lam = max(t ** mu, mp.mpf(cstar))
    return alpha, lam


def tau(P, t):
    if t <= 1 + P:
        return 1
    return 1 + ((t - 1) // P) * P


def series(p, mu, kappa, gamma, cstar, P, N):
    a = [0.0] * (N + 1)
    l = [0.0] * (N + 1)
    for t in range(1, N + 1):
        lt = math.log(t)
        a[t] = (1 + lt) ** (-gamma) * t ** (-(kappa - mu)) * min(t ** (-mu), 1 / cstar)
        l[t] = max(t ** mu, cstar)
    terms = [[], [], [], [], [], []]
    for t in range(1, N + 1):
        s = tau(P, t)
        terms[0].append(a[t] * a[s] ** 2 * l[s] ** 2)
        terms[1].append(a[t] * a[s] * l[t] * l[s])
        terms[2].append(a[t] * l[t] ** (1 - p))
        terms[3].append(a[t] ** 2 * l[t] ** (2 - 2 * p))
        terms[4].append((a[t] * l[t]) ** 2 * l[t] ** (-p))
        terms[5].append((a[t] * l[t]) ** 4 * l[t] ** (-p))
    return [math.fsum(x) for x in terms]


def pareto_abs_moment(beta, xs, p):
    beta, xs, p = mp.mpf(beta), mp.mpf(xs), mp.mpf(p)
    mean = beta * xs / (beta - 1)
    dens = lambda x: beta * xs ** beta / x ** (beta + 1)
    left = mp.quad(lambda x: (mean - x) ** p * dens(x), [xs, mean])
    # Right tail mapped onto (0, 1] by x = mean / u, then u = v^k so the
    # endpoint behaviour u^(beta - p - 1) becomes smooth in v.
    k = 1 / (beta - p)
    tail = lambda u: (mean / u - mean) ** p * dens(mean / u) * mean / u ** 2
    right = mp.quad(lambda v: tail(v ** k) * k * v ** (k - 1), [0, 1])
    return left + right


if __name__ == "__main__":
    for ctr, key in [((0, 0, 0, 0), (0, 0)),
                     ((M32, M32, M32, M32), (M32, M32)),
                     ((0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344), (0xA4093822, 0x299F31D0))]:
        print("philox", [hex(v) for v in philox4x32_10(ctr, key)])
    p = mp.mpf("1.8")
    mu = 1 / (2 * p)
    kappa = (p + 1) / (2 * p)
    a100, l100 = schedule(p, mu, kappa, mp.mpf("1.01"), 2, 100)
    print("alpha_100", mp.nstr(a100, 20), "lambda_100", mp.nstr(l100, 20))
    print("lambda_1024 mu=0.25", mp.nstr(schedule(2, mp.mpf("0.25"), mp.mpf("0.75"), mp.mpf("1.01"), 1, 1024)[1], 20))
    sums = series(1.8, 1 / 3.6, 2.8 / 3.6, 1.01, 2.0, 2, 100000)
    print("series N=1e5 c*=2 P=2", ["%.17g" % s for s in sums])
    print("E|xi|^1.8 Pareto(2,0.5)", mp.nstr(pareto_abs_moment(2, "0.5", "1.8"), 20))
    print("E|xi|^1.5 Pareto(3,1)", mp.nstr(pareto_abs_moment(3, 1, "1.5"), 20))
    print("entropy(0.5,0.5)", mp.nstr(2 * mp.mpf("0.5") * mp.log(mp.mpf("0.5")), 20))
    print("KL((.5,.5)||(.25,.75))", mp.nstr(mp.mpf("0.5") * mp.log(2) + mp.mpf("0.5") * mp.log(mp.mpf(2) / 3), 20))
