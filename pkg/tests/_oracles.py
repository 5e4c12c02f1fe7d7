"""Independent oracles used across the test suite.

Both oracles avoid the package's own code paths: the brute-force law walks
over raw direction sequences using the definitional remembered-time rule,
and the moment recursion propagates exact first and second moments of the
colour counts one drawing at a time.
"""

from fractions import Fraction
from itertools import product

import numpy as np


def compositions(total, parts):
    """All nonnegative integer vectors of the given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in compositions(total - head, parts - 1):
            yield (head,) + tail


def brute_force_walk_pmf(d, p, q, n, designated_colour=0):
    """Exact law of S_n by summing over all (2d)^n direction sequences.

    The conditional step law is computed from the definition: a past time is
    remembered uniformly, its direction repeated with probability p,
    otherwise one of the other 2d-1 directions is taken uniformly.  p and q
    must be Fractions.
    """
    twod = 2 * d
    off_first = (1 - q) / (twod - 1)
    off_repeat = (1 - p) / (twod - 1)
    pmf = {}
    for seq in product(range(twod), repeat=n):
        prob = q if seq[0] == designated_colour else off_first
        for k in range(1, n):
            tau = seq[k]
            conditional = Fraction(0)
            for remembered in seq[:k]:
                conditional += p if tau == remembered else off_repeat
            prob *= conditional / k
        if prob == 0:
            continue
        pos = [0] * d
        for colour in seq:
            pos[colour // 2] += 1 if colour % 2 == 0 else -1
        key = tuple(pos)
        pmf[key] = pmf.get(key, Fraction(0)) + prob
    return pmf


def replacement_matrix(d, p):
    twod = 2 * d
    A = np.full((twod, twod), (1.0 - p) / (twod - 1))
    np.fill_diagonal(A, p)
    return A


def pairing(d):
    P = np.zeros((d, 2 * d))
    for k in range(d):
        P[k, 2 * k] = 1.0
        P[k, 2 * k + 1] = -1.0
    return P


def first_step_mean(d, q):
    twod = 2 * d
    xi = np.full(twod, (1.0 - q) / (twod - 1))
    xi[0] = q
    return xi


def exact_moments(d, p, q, n, times=(), track_sum=False):
    """Exact E[X_m] and E[X_m X_m^T] of the colour counts, m = 1..n.

    One drawing adds the one-hot vector eps with E[eps | X] = A X / m and
    E[eps eps^T | X] = diag(A X / m).  Cross-time second moments for the
    recorded times propagate by left-multiplying with (I + A/m); with
    ``track_sum`` the running-sum moments for the center of mass are kept
    alongside.

    Returns a dict with 'xbar', 'M', 'recorded' {t: (xbar_t, M_t)}, 'cross'
    {t: E[X_n X_t^T]} and, when tracked, 'T', 'C', 'Q' for T_n = sum X_k.
    """
    A = replacement_matrix(d, p)
    xbar = first_step_mean(d, q)
    M = np.diag(xbar).copy()
    recorded, cross = {}, {}
    if track_sum:
        T = xbar.copy()
        C = M.copy()
        Q = M.copy()
    times = set(times)
    for m in range(1, n):
        if m in times:
            recorded[m] = (xbar.copy(), M.copy())
            cross[m] = M.copy()
        AM = A @ M
        dg = np.diag(A @ xbar)
        M = M + (AM + AM.T) / m + dg / m
        if track_sum:
            Cn = C + (A @ C) / m
            C = Cn + M
            Q = Q + Cn + Cn.T + M
            T = T + xbar + (A @ xbar) / m
        for t in cross:
            cross[t] = cross[t] + (A @ cross[t]) / m
        xbar = xbar + (A @ xbar) / m
    if n in times:
        recorded[n] = (xbar.copy(), M.copy())
        cross[n] = M.copy()
    out = {"xbar": xbar, "M": M, "recorded": recorded, "cross": cross}
    if track_sum:
        out["T"] = T
        out["C"] = C
        out["Q"] = Q
    return out


def walk_mean_cov(d, p, q, n):
    """Exact mean and covariance of S_n from the moment recursion."""
    res = exact_moments(d, p, q, n, times={n})
    xbar, M = res["recorded"][n]
    P = pairing(d)
    mean = P @ xbar
    cov = P @ (M - np.outer(xbar, xbar)) @ P.T
    return mean, cov
