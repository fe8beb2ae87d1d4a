"""Slow, obviously-correct reference implementations used only by the tests."""

import math
from fractions import Fraction
from itertools import permutations, product

import numpy as np


def boxes(lam):
    return [(i, j) for i, row in enumerate(lam) for j in range(row)]


def count_syt(lam):
    # remove a corner box in every possible way
    lam = tuple(v for v in lam if v)
    if sum(lam) <= 1:
        return 1
    total = 0
    for i, v in enumerate(lam):
        if i + 1 == len(lam) or lam[i + 1] < v:
            total += count_syt(lam[:i] + (v - 1,) + lam[i + 1:])
    return total


def ssyt(lam, r):
    """All semistandard tableaux of shape lam with entries 0..r-1, as dicts box -> entry."""
    cells = boxes(lam)
    out = []

    def fill(k, tab):
        if k == len(cells):
            out.append(dict(tab))
            return
        i, j = cells[k]
        lo = 0
        if j > 0:
            lo = max(lo, tab[(i, j - 1)])
        if i > 0:
            lo = max(lo, tab[(i - 1, j)] + 1)
        for v in range(lo, r):
            tab[(i, j)] = v
            fill(k + 1, tab)
            del tab[(i, j)]

    fill(0, {})
    return out


def schur_by_tableaux(lam, x):
    x = np.asarray(x)
    return sum(np.prod([x[v] for v in t.values()]) for t in ssyt(lam, len(x)))


def cycle_count(perm):
    seen = set()
    count = 0
    for s in range(len(perm)):
        if s in seen:
            continue
        count += 1
        while s not in seen:
            seen.add(s)
            s = perm[s]
    return count


def class_sizes_by_enumeration(n):
    from collections import Counter
    out = Counter()
    for perm in permutations(range(n)):
        seen = set()
        cyc = []
        for s in range(n):
            if s in seen:
                continue
            length = 0
            while s not in seen:
                seen.add(s)
                s = perm[s]
                length += 1
            if length > 1:
                cyc.append(length)
        out[tuple(sorted(cyc, reverse=True))] += 1
    return out


def lr_by_characters(lam, mu, nu, partitions, mn_character):
    """<chi_mu x chi_nu, chi_lam restricted> via the class sums of S_m x S_(n-m)."""
    m, k = sum(mu), sum(nu)

    def z(gamma):
        from collections import Counter
        out = 1
        for part, mult in Counter(gamma).items():
            out *= part ** mult * math.factorial(mult)
        return out

    total = Fraction(0)
    for g1 in partitions(m):
        for g2 in partitions(k):
            full = tuple(sorted(g1 + g2, reverse=True))
            val = mn_character(mu, g1) * mn_character(nu, g2) * mn_character(lam, full)
            total += Fraction(val, z(g1) * z(g2))
    assert total.denominator == 1
    return int(total)


def dense_pair_operator(r, entry):
    """r^2 x r^2 matrix with <a1 a2|O|a3 a4> = entry(a1, a2, a3, a4)."""
    M = np.zeros((r * r, r * r))
    for a1, a2, a3, a4 in product(range(r), repeat=4):
        M[a1 * r + a2, a3 * r + a4] = entry(a1, a2, a3, a4)
    return M


def R_by_schur_series(w, z, dps=40):
    """R(w; z) = prod_{k<r} k! sum_lam s_lam(w) s_lam(z) / prod_l (lam_l + r - l)!.

    A denominator-free expansion, valid at any coincidences; slow, for tests only.
    """
    import mpmath

    r = len(w)

    def h_table(x, kmax):
        h = [mpmath.mpf(1)] + [mpmath.mpf(0)] * kmax
        for xi in x:
            for k in range(1, kmax + 1):
                h[k] = h[k] + xi * h[k - 1]
        return h

    def schur(lam, x):
        if not lam:
            return mpmath.mpf(1)
        ell = len(lam)
        h = h_table(x, lam[0] + ell)
        M = [[h[lam[i] - i + j] if lam[i] - i + j >= 0 else 0 for j in range(ell)] for i in range(ell)]
        det = mpmath.mpf(1)
        for c in range(ell):
            piv = max(range(c, ell), key=lambda i: abs(M[i][c]))
            if M[piv][c] == 0:
                return mpmath.mpf(0)
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = -det
            det *= M[c][c]
            for i in range(c + 1, ell):
                f = M[i][c] / M[c][c]
                M[i] = [M[i][j] - f * M[c][j] for j in range(ell)]
        return det

    def parts(n, k, top=None):
        top = n if top is None else top
        if n == 0:
            yield ()
            return
        if k == 0:
            return
        for first in range(min(n, top), 0, -1):
            for rest in parts(n - first, k - 1, first):
                yield (first,) + rest

    with mpmath.workdps(dps):
        W = [mpmath.mpmathify(v) for v in w]
        Z = [mpmath.mpmathify(v) for v in z]
        spread = max(abs(v) for v in W) * max(abs(v) for v in Z) * r
        total = mpmath.mpf(0)
        deg = 0
        while True:
            layer = mpmath.mpf(0)
            for lam in parts(deg, r):
                lp = lam + (0,) * (r - len(lam))
                den = math.prod(math.factorial(lp[l] + r - 1 - l) for l in range(r))
                layer += schur(lam, W) * schur(lam, Z) / den
            total += layer
            if deg > 2 * spread + 10 and abs(layer) < mpmath.mpf(10) ** (-dps + 5) * max(1, abs(total)):
                break
            deg += 1
        return complex(total * math.prod(math.factorial(k) for k in range(r)))
