"""Independent oracle for the frozen expected values in the C++ unit tests.

Evaluates closed forms at 50-digit precision and solves the finite-size
constraint pair by dense scan plus bisection directly in (s1, s_c), with the
relative fluctuations substituted as r1 = k e^{mu/2} / sqrt(mu s1 N) and
r_c = k / sqrt(c s_c N). Shares no code path with the library.

Run: python3 tests/oracles/frozen_values.py
"""
import itertools

import mpmath as mp

mp.mp.dps = 50
E = mp.e


def pois(mu, n):
    mu = mp.mpf(mu)
    return mp.exp(-mu) * mu**n / mp.factorial(n)


def cw(mu):
    mu = mp.mpf(mu)
    return 1 - mp.exp(-mu) - mu * mp.exp(-mu)


def honest_rate(mu, eta, s0):
    # sum_n P_n (1 - (1-s0)(1-eta)^n) = 1 - (1-s0) e^{-eta mu}
    return 1 - (1 - mp.mpf(s0)) * mp.exp(-mp.mpf(eta) * mp.mpf(mu))


def feasible(delta, mu, mup, S, Sp, s0, N, k=10, eps=(0,) * 6):
    mu, mup = mp.mpf(mu), mp.mpf(mup)
    e0, e1, ec, f0, f1, fc = [mp.mpf(x) for x in eps]
    P0, P1, c = mp.exp(-mu) * (1 + e0), mu * mp.exp(-mu) * (1 + e1), cw(mu) * (1 + ec)
    Q0, Q1 = mp.exp(-mup) * (1 + f0), mup * mp.exp(-mup) * (1 + f1)
    cp = cw(mu) * mup**2 * mp.exp(-mup) / (mu**2 * mp.exp(-mu)) * (1 + fc)
    sc = delta * S / c
    s1 = (S - P0 * s0 - c * sc) / P1
    if s1 <= 0:
        return False
    # pools: smaller expected population of each state among the two sources
    n1 = min(P1 * N, Q1 * N)
    nc = min(c * N, cp * N)
    r1 = k / mp.sqrt(s1 * n1)
    rc = k / mp.sqrt(sc * nc)
    return Q0 * s0 + Q1 * (1 - r1) * s1 + cp * (1 - rc) * sc <= Sp


def worst_delta(mu, mup, S, Sp, s0, N, k=10, eps=(0,) * 6):
    grid = [mp.mpf(i) / 20000 for i in range(20000, 0, -1)]
    hi = None
    for d in grid:
        if feasible(d, mu, mup, S, Sp, s0, N, k, eps):
            lo, hi = d, d + mp.mpf(1) / 20000
            break
    for _ in range(120):
        mid = (lo + hi) / 2
        if feasible(mid, mu, mup, S, Sp, s0, N, k, eps):
            lo = mid
        else:
            hi = mid
    return lo


def single_rate(delta, mu, S, s0, e0=0, e1=0, ec=0):
    mu = mp.mpf(mu)
    c = cw(mu) * (1 + ec)
    return (S - mp.exp(-mu) * (1 + e0) * s0 - delta * S) / (mu * mp.exp(-mu) * (1 + e1))


def H(t):
    t = mp.mpf(t)
    return -t * mp.log(t, 2) - (1 - t) * mp.log(1 - t, 2)


def main():
    print("poisson(0.3,1)", pois(0.3, 1))
    print("decompose(0.3)", mp.exp(-0.3), 0.3 * mp.exp(-mp.mpf(0.3)), cw(0.3))
    print("c(0.25)", cw(0.25))
    for mu, mup in ((0.3, 0.45), (0.2, 0.34)):
        mu_, mup_ = mp.mpf(mu), mp.mpf(mup)
        cc = cw(mu) * mup_**2 * mp.exp(-mup_) / (mu_**2 * mp.exp(-mu_))
        print("residual", mu, mup, mp.exp(-mup_), mup_ * mp.exp(-mup_), cc, cw(mup) - cc)
    print("eps0(0.3,0.02)", max(abs(mp.exp(-mp.mpf(0.3) * m) / mp.exp(-mp.mpf(0.3)) - 1) for m in (0.98, 1.02)))
    print("eps1(0.3,0.02)", max(abs(pois(0.3 * m, 1) / pois(0.3, 1) - 1) for m in (0.98, 1.02)))
    print("epsc(0.3,0.02)", max(abs(cw(0.3 * m) / cw(0.3) - 1) for m in (0.98, 1.02)))
    print("rate(0.3,1e-3)", 1 - mp.exp(-mp.mpf(3e-4)))
    print("asym 0.3/0.45 ratio 1.5", 2 * (mp.exp(mp.mpf(0.15)) - 1))
    d = 2 * (mp.exp(mp.mpf(0.15)) - 1)
    print("delta' from it", 1 - (1 - d) * mp.exp(mp.mpf(-0.15)))
    print("H(0.05)", H(0.05), "1-2H(0.05)", 1 - 2 * H(0.05))
    print("key(0.05,0.05,0.25)", 1 - H(0.05) - mp.mpf(0.25) - mp.mpf(0.75) * H(mp.mpf(0.05) / mp.mpf(0.75)))

    cases = [
        ("W1", 0.2, 0.34, 1e-3, 1e10), ("W1", 0.25, 0.38, 1e-3, 1e10),
        ("W1", 0.3, 0.43, 1e-3, 1e10), ("W1", 0.35, 0.45, 1e-3, 1e10),
        ("W2", 0.2, 0.39, 1e-4, 8e10), ("W2", 0.25, 0.41, 1e-4, 8e10),
        ("W2", 0.3, 0.45, 1e-4, 8e10), ("W2", 0.35, 0.47, 1e-4, 8e10),
    ]
    s0 = mp.mpf(1e-6)
    for tag, mu, mup, eta, N in cases:
        S, Sp = honest_rate(mu, eta, s0), honest_rate(mup, eta, s0)
        d = worst_delta(mu, mup, S, Sp, s0, mp.mpf(N))
        s1 = single_rate(d, mu, S, s0)
        untagged = mp.mpf(mu) * mp.exp(-mp.mpf(mu)) * s1 / S
        dv = 1 - untagged
        dp = 1 - (1 - dv - mp.exp(-mp.mpf(mu)) * s0 / S) * mp.exp(mp.mpf(mu) - mp.mpf(mup)) - mp.exp(-mp.mpf(mup)) * s0 / Sp
        print(tag, mu, mup, "delta", mp.nstr(d, 15), "s1", mp.nstr(s1, 15), "with_vac", mp.nstr(dv, 15),
              "delta'", mp.nstr(dp, 15))

    # operational corners at the documented acceptance point
    for mu, mup, eta in ((0.1, 0.5, 1e-3), (0.3, 0.45, 1e-3)):
        S, Sp = honest_rate(mu, eta, s0), honest_rate(mup, eta, s0)
        d0 = worst_delta(mu, mup, S, Sp, s0, mp.mpf(1e10))
        s10 = single_rate(d0, mu, S, s0)
        worst_s1 = None
        for sg in itertools.product((-1, 1), repeat=6):
            eps = tuple(mp.mpf("0.02") * x for x in sg)
            d = worst_delta(mu, mup, S, Sp, s0, mp.mpf(1e10), eps=eps)
            s1 = single_rate(d, mu, S, s0, eps[0], eps[1], eps[2])
            if worst_s1 is None or s1 < worst_s1:
                worst_s1 = s1
        print("operational", mu, mup, "s1_ratio", mp.nstr(worst_s1 / s10, 12))


if __name__ == "__main__":
    main()
