"""Limiting correlation functions and magnetisation.

The correlation of exp((1/n) sum_i W_i) converges to R(w; z), where w are the
eigenvalues of W and z comes from the maximiser of F (z = x + y for the AB
model, z = x - y for walled Brauer):

    R(w; z) = det[exp(w_i z_j)] prod_{i<j} (j - i) / ((w_i - w_j)(z_i - z_j)).

R is evaluated in extended precision.  When m entries of w coincide, the
corresponding rows of the determinant are replaced by the derivatives
d^p/dw^p exp(w z_j) / p!, p < m, and the Vandermonde factor by its confluent
limit (likewise for z and columns).  This is exact in the confluent limit,
which is the generic case at the symmetric maximiser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import mpmath
import numpy as np

from .variational import TwoBlockParams, maximize_F

CONFLUENCE_TOL = 1e-8

__all__ = [
    "R_function",
    "R_product_form",
    "R_projector_form",
    "NonUniqueMaximizer",
    "limit_correlation",
    "profile_z",
    "magnetisation",
    "free_energy_with_field",
]


def _to_mp(v):
    return [mpmath.mpmathify(complex(t)) if isinstance(t, complex) else mpmath.mpf(float(t)) for t in v]


def _det_mp(M, n):
    # Gaussian elimination with partial pivoting; exact zeros are allowed
    A = [[M[i][j] for j in range(n)] for i in range(n)]
    det = mpmath.mpf(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda i: abs(A[i][col]))
        if A[piv][col] == 0:
            return mpmath.mpf(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for i in range(col + 1, n):
            f = A[i][col] / A[col][col]
            if f:
                for j in range(col, n):
                    A[i][j] -= f * A[col][j]
    return det


def _clusters(vals):
    # group entries closer than CONFLUENCE_TOL (transitively); returns (centre, size) pairs
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, j in combinations(range(n), 2):
        if abs(complex(vals[i] - vals[j])) < CONFLUENCE_TOL:
            parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(vals[i])
    return [(sum(g) / len(g), len(g)) for g in groups.values()]


def _confluent_ratio(clusters):
    # lim det / prod_{i<j}(v_i - v_j) contributes this denominator and sign
    den = mpmath.mpf(1)
    sign = 1
    for (u, mu), (v, mv) in combinations(clusters, 2):
        den *= (u - v) ** (mu * mv)
    for _, m in clusters:
        sign *= (-1) ** (m * (m - 1) // 2)
    return den, sign


def _deriv_entry(a, p, b, q):
    # d^p/da^p d^q/db^q exp(a b) / (p! q!)
    tot = 0
    for s in range(min(p, q) + 1):
        tot += math.comb(p, s) * (math.factorial(q) // math.factorial(q - s)) * a ** (q - s) * b ** (p - s)
    return tot * mpmath.exp(a * b) / (math.factorial(p) * math.factorial(q))


def _R_core(w, z, r):
    cw = _clusters(w)
    cz = _clusters(z)
    rows = [(a, p) for a, m in cw for p in range(m)]
    cols = [(b, q) for b, m in cz for q in range(m)]
    M = [[_deriv_entry(a, p, b, q) for b, q in cols] for a, p in rows]
    dw, sw = _confluent_ratio(cw)
    dz, sz = _confluent_ratio(cz)
    pref = math.prod(math.factorial(k) for k in range(r))
    return pref * sw * sz * _det_mp(M, r) / (dw * dz)


def R_function(w, z, dps: int = 40):
    """R(w; z) for length-r vectors w (possibly complex) and z (real).

    Both arguments are shifted to mean zero first; R(w + s; z + t) =
    exp(s sum z + t sum w + r s t) R(w; z).  Entries closer than 1e-8 are
    merged and handled by the confluent limit.
    """
    w = list(np.atleast_1d(w))
    z = [float(t) for t in np.atleast_1d(z)]
    r = len(w)
    if len(z) != r:
        raise ValueError("w and z must have the same length")
    with mpmath.workdps(dps):
        W = _to_mp(w)
        Z = _to_mp(z)
        s = sum(W) / r
        t = sum(Z) / r
        Wc = [v - s for v in W]
        Zc = [v - t for v in Z]
        shift = mpmath.exp(r * s * t)
        val = mpmath.mpf(1) if r == 1 else _R_core(Wc, Zc, r)
        out = shift * val
        if isinstance(out, mpmath.mpc) and abs(out.imag) > 1e-30 * max(1, abs(out)):
            return complex(out)
        return float(mpmath.re(out))


def R_product_form(h: float, z) -> float:
    """R for w = h (0, 1, ..., r-1): prod_{i<j} (e^{h z_i} - e^{h z_j}) / (h (z_i - z_j))."""
    z = np.asarray(z, dtype=float)
    out = 1.0
    for i, j in combinations(range(len(z)), 2):
        d = h * (z[i] - z[j])
        ratio = math.expm1(d) / d if d != 0 else 1.0
        out *= math.exp(h * z[j]) * ratio
    return out


def R_projector_form(h: float, u: float, r: int) -> float:
    """R for w = h (1, 0, ..., 0) and z = (z_1, z_2, ..., z_2) with sum z = 1, u = z_1 - z_2."""
    k = r - 1
    x = h * u
    with mpmath.workdps(40):
        if x == 0:
            return math.exp(h / r)
        # sum_{j >= k} x^j / j!  =  e^x P(k, x) with the regularised lower gamma
        tail = mpmath.exp(x) * mpmath.gammainc(k, 0, x, regularized=True) if k > 0 else mpmath.exp(x)
        val = mpmath.factorial(k) / mpmath.mpf(x) ** k * mpmath.exp(h * (1 - u) / r) * tail
        return float(val)


class NonUniqueMaximizer(ValueError):
    """The maximiser of F is not unique, so the limiting correlation is not a single number."""

    def __init__(self, candidates):
        self.candidates = candidates
        super().__init__(f"{len(candidates)} maximisers; candidate R values {candidates}")


def profile_z(x, y, kind: str) -> np.ndarray:
    """z = x + y (AB) or x - y (walled Brauer), sorted decreasingly."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if kind == "AB":
        z = x + y
    elif kind in ("WB", "WB-Q", "WB-P"):
        z = x - y
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return np.sort(z)[::-1]


def limit_correlation(p: TwoBlockParams, kind: str, w):
    """lim <exp((1/n) sum_i W_i)> with W = diag(w); B carries -W^T for walled Brauer.

    Raises :class:`NonUniqueMaximizer` (carrying every candidate value) when F
    has more than one maximiser.
    """
    w = np.asarray(w)
    if w.shape != (p.r,):
        raise ValueError("w must have length r")
    rep = maximize_F(p)
    vals = [R_function(w, profile_z(x, y, kind)) for x, y in rep.points]
    if len(vals) > 1:
        raise NonUniqueMaximizer(vals)
    return vals[0]


@dataclass
class Magnetisation:
    right: float
    left: float
    maximizers: int


def magnetisation(p: TwoBlockParams, kind: str, w, side: str = "both"):
    """One-sided h-derivatives of the field free energy at h = 0.

    The right derivative is the largest sum_i z_i w_i over maximisers and the
    left one the smallest sum_i z_i w_{r+1-i}; w is sorted decreasingly first.
    """
    w = np.sort(np.asarray(w, dtype=float))[::-1]
    if w.shape != (p.r,):
        raise ValueError("w must have length r")
    rep = maximize_F(p)
    zs = [profile_z(x, y, kind) for x, y in rep.points]
    right = max(float(z @ w) for z in zs)
    left = min(float(z @ w[::-1]) for z in zs)
    if side == "right":
        return right
    if side == "left":
        return left
    if side != "both":
        raise ValueError("side must be 'right', 'left' or 'both'")
    return Magnetisation(right, left, len(zs))


def free_energy_with_field(p: TwoBlockParams, kind: str, w, h: float) -> float:
    """Free energy with a field h W on every site (-h W^T on B for walled Brauer).

    Equal to max over profile points of F + h sum_i z_i w_sigma(i), with z
    sorted decreasingly and sigma the identity (h > 0) or the reversal
    (h < 0).  By the rearrangement inequality this is the maximum of the
    smooth tilted functional F + h sum_i (x_i +- y_i) w_i, which is what is
    optimised.  Simultaneously diagonal X, Y are assumed.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (p.r,):
        raise ValueError("w must have length r")
    if kind == "AB":
        tilt = (h * w, h * w)
    elif kind in ("WB", "WB-Q", "WB-P"):
        tilt = (h * w, -h * w)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    rep = maximize_F(p, tilt=tilt)
    rb = p.rho_b
    return rep.value + p.rho * math.log(p.rho) + rb * math.log(rb)
