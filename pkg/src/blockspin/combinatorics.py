"""Partitions, symmetric-group characters and GL(r) representation data.

Partitions are plain tuples of positive, weakly decreasing ints; ``()`` is the
empty partition.  Signed (rational) GL(r) weights are tuples of length r,
weakly decreasing, entries possibly negative.

Everything that is an integer in the mathematics is computed with Python ints,
so identities can be checked exactly.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from math import factorial, prod
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "partition",
    "partitions",
    "size",
    "conjugate",
    "content",
    "dim_gl",
    "dim_rational",
    "dim_specht",
    "dim_specht_hooks",
    "lr_coeff",
    "multi_lr_coeff",
    "horn_positive",
    "signed_weight",
    "decompose_weight",
    "wb_branch",
    "mn_character",
    "conjugacy_class_size",
    "cycle_type",
    "gl_character",
    "IllConditionedError",
]


class IllConditionedError(ArithmeticError):
    """Raised when a character evaluation cannot be carried out reliably."""


# ---------------------------------------------------------------- partitions


def partition(parts: Iterable[int]) -> tuple[int, ...]:
    """Validate ``parts`` and return it as a canonical partition tuple.

    Trailing zeros are dropped.  Raises ValueError for negative or increasing
    entries.
    """
    p = tuple(int(v) for v in parts)
    while p and p[-1] == 0:
        p = p[:-1]
    if any(v < 0 for v in p):
        raise ValueError(f"negative part in {p}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"parts of {p} are not weakly decreasing")
    return p


def size(lam: Sequence[int]) -> int:
    return sum(lam)


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int, max_len: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first, max_len - 1):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int, max_len: int | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of ``n`` with at most ``max_len`` rows, reverse-lex order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if max_len is None:
        max_len = n
    yield from _partitions(n, n, max_len)


def conjugate(lam: Sequence[int]) -> tuple[int, ...]:
    lam = partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for v in lam if v > j) for j in range(lam[0]))


def content(lam: Sequence[int]) -> int:
    """Sum of box contents (column minus row) of the Young diagram of ``lam``.

    This is the eigenvalue of the sum of all transpositions on the Specht
    module of shape ``lam``.
    """
    lam = partition(lam)
    return sum(v * (v + 1) // 2 - j * v for j, v in enumerate(lam, start=1))


# ---------------------------------------------------------------- dimensions


def dim_rational(w: Sequence[int]) -> int:
    """Weyl dimension of the GL(r) irreducible with highest weight ``w``.

    ``w`` is any weakly decreasing integer vector of length r; negative
    entries are allowed.
    """
    w = tuple(int(v) for v in w)
    r = len(w)
    if any(w[i] < w[i + 1] for i in range(r - 1)):
        raise ValueError(f"weight {w} is not dominant")
    num = 1
    den = 1
    for i, j in combinations(range(r), 2):
        num *= w[i] - w[j] + j - i
        den *= j - i
    return num // den


def dim_gl(lam: Sequence[int], r: int) -> int:
    """Dimension of the GL(r) irreducible U_lam.  ``lam`` may have at most r rows."""
    lam = partition(lam)
    if r < 1:
        raise ValueError("r must be positive")
    if len(lam) > r:
        raise ValueError(f"{lam} has more than r = {r} rows")
    return dim_rational(lam + (0,) * (r - len(lam)))


def dim_specht(mu: Sequence[int]) -> int:
    """Dimension of the Specht module S_mu of the symmetric group on |mu| letters."""
    mu = partition(mu)
    n = sum(mu)
    r = len(mu)
    m = [mu[i] + r - 1 - i for i in range(r)]
    num = factorial(n)
    for i, j in combinations(range(r), 2):
        num *= m[i] - m[j]
    return num // prod(factorial(v) for v in m)


def dim_specht_hooks(mu: Sequence[int]) -> int:
    """Hook length formula, kept as an independent check of :func:`dim_specht`."""
    mu = partition(mu)
    mu_t = conjugate(mu)
    hooks = 1
    for i, row in enumerate(mu):
        for j in range(row):
            hooks *= (row - j - 1) + (mu_t[j] - i - 1) + 1
    return factorial(sum(mu)) // hooks


# ------------------------------------------------------ Littlewood-Richardson


@lru_cache(maxsize=None)
def _lr(lam: tuple[int, ...], mu: tuple[int, ...], nu: tuple[int, ...]) -> int:
    # count LR tableaux of skew shape lam/mu and content nu
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return 0
    mu_full = mu + (0,) * (len(lam) - len(mu))
    # reading order: rows top to bottom, each row right to left
    cells = [(i, j) for i in range(len(lam)) for j in range(lam[i] - 1, mu_full[i] - 1, -1)]
    if len(cells) != sum(nu):
        return 0
    if not cells:
        return 1
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)
    nu_ext = (0,) + tuple(nu)

    def rec(idx: int) -> int:
        if idx == len(cells):
            return 1
        i, j = cells[idx]
        hi = len(nu)
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        lo = 1
        up = filling.get((i - 1, j))
        if up is not None:
            lo = up + 1
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= nu_ext[v]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filling[(i, j)] = v
            total += rec(idx + 1)
            del filling[(i, j)]
            counts[v] -= 1
        return total

    return rec(0)


def lr_coeff(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """Littlewood-Richardson coefficient c^lam_{mu nu}.

    Multiplicity of U_lam in U_mu (x) U_nu; zero unless |lam| = |mu| + |nu|.
    """
    lam, mu, nu = partition(lam), partition(mu), partition(nu)
    if sum(lam) != sum(mu) + sum(nu):
        return 0
    if sum(mu) < sum(nu):
        mu, nu = nu, mu
    return _lr(lam, mu, nu)


def _contained_partitions(n: int, outer: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for k in partitions(n, len(outer)):
        if all(a <= b for a, b in zip(k, outer)):
            yield k


@lru_cache(maxsize=None)
def _multi_lr(lam: tuple[int, ...], blocks: tuple[tuple[int, ...], ...]) -> int:
    if len(blocks) == 1:
        return int(lam == blocks[0])
    if len(blocks) == 2:
        return lr_coeff(lam, blocks[0], blocks[1])
    head = sum(blocks[0]) + sum(blocks[1])
    total = 0
    for kappa in _contained_partitions(head, lam):
        c = lr_coeff(kappa, blocks[0], blocks[1])
        if c:
            total += c * _multi_lr(lam, (kappa,) + blocks[2:])
    return total


def multi_lr_coeff(lam: Sequence[int], blocks: Sequence[Sequence[int]]) -> int:
    """Multiplicity of U_lam in U_mu1 (x) ... (x) U_mup (iterated LR rule)."""
    lam = partition(lam)
    blocks = tuple(partition(b) for b in blocks)
    if not blocks:
        return int(lam == ())
    if sum(lam) != sum(sum(b) for b in blocks):
        return 0
    return _multi_lr(lam, blocks)


def horn_positive(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int], r: int) -> bool:
    """True when U_lam occurs in U_mu (x) U_nu as GL(r) representations."""
    if max(len(partition(p)) for p in (lam, mu, nu)) > r:
        return False
    return lr_coeff(lam, mu, nu) > 0


# ----------------------------------------------------------- signed weights


def signed_weight(lam: Sequence[int], mu: Sequence[int], r: int) -> tuple[int, ...]:
    """The rational GL(r) weight [lam, mu]_i = lam_i - mu_{r-i+1}."""
    lam, mu = partition(lam), partition(mu)
    if len(lam) + len(mu) > r:
        raise ValueError(f"l({lam}) + l({mu}) exceeds r = {r}")
    lp = lam + (0,) * (r - len(lam))
    mp = mu + (0,) * (r - len(mu))
    return tuple(lp[i] - mp[r - 1 - i] for i in range(r))


def decompose_weight(w: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Inverse of :func:`signed_weight`: split ``w`` into its positive and negative parts."""
    w = tuple(int(v) for v in w)
    if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
        raise ValueError(f"weight {w} is not dominant")
    lam = partition(v for v in w if v > 0)
    mu = partition(-v for v in reversed(w) if v < 0)
    return lam, mu


def wb_branch(lam: Sequence[int], mu: Sequence[int], pi: Sequence[int],
              tau: Sequence[int], r: int) -> int:
    """Multiplicity of U_[lam,mu] in U_pi (x) (U_tau)^* for GL(r).

    Computed as an ordinary LR coefficient after shifting both rational weights
    by tau_1 in every coordinate.  Returns 0 when the sizes do not match
    (|pi| - |lam| must equal |tau| - |mu| and be non-negative) or when a
    length bound fails.
    """
    lam, mu, pi, tau = (partition(p) for p in (lam, mu, pi, tau))
    t = sum(pi) - sum(lam)
    if t < 0 or sum(tau) - sum(mu) != t:
        return 0
    if len(lam) + len(mu) > r or len(pi) > r or len(tau) > r:
        return 0
    shift = tau[0] if tau else 0
    big = tuple(v + shift for v in signed_weight(lam, mu, r))
    small = tuple(v + shift for v in signed_weight((), tau, r))
    if min(big) < 0:
        return 0
    return lr_coeff(big, pi, small)


# ------------------------------------------------------------- characters


def _beta_set(lam: tuple[int, ...], n_beads: int) -> tuple[int, ...]:
    lp = lam + (0,) * (n_beads - len(lam))
    return tuple(lp[i] + n_beads - 1 - i for i in range(n_beads))


@lru_cache(maxsize=None)
def _mn(beads: frozenset, cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1
    k, rest = cycles[0], cycles[1:]
    total = 0
    for b in beads:
        if b - k >= 0 and (b - k) not in beads:
            sign = -1 if sum(1 for c in beads if b - k < c < b) % 2 else 1
            total += sign * _mn((beads - {b}) | {b - k}, rest)
    return total


def mn_character(mu: Sequence[int], gamma: Sequence[int]) -> int:
    """Irreducible character chi_mu of S_|mu| at cycle type ``gamma``.

    ``gamma`` lists cycle lengths; fixed points may be omitted, the missing
    ones are padded with 1-cycles.  Uses the Murnaghan-Nakayama rule.
    """
    mu = partition(mu)
    n = sum(mu)
    gamma = tuple(sorted((int(g) for g in gamma if int(g) > 1), reverse=True))
    if any(g < 1 for g in gamma):
        raise ValueError("cycle lengths must be positive")
    if sum(gamma) > n:
        raise ValueError(f"cycle type {gamma} does not fit in S_{n}")
    gamma = gamma + (1,) * (n - sum(gamma))
    return _mn(frozenset(_beta_set(mu, len(mu))), gamma)


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    """Cycle type (all cycles, including 1-cycles) of a permutation in one-line form."""
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if not seen[s]:
            length = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            out.append(length)
    return tuple(sorted(out, reverse=True))


def conjugacy_class_size(gamma: Sequence[int], n: int) -> int:
    """Number of permutations of n letters with cycle type ``gamma`` (padded with fixed points)."""
    gamma = [int(g) for g in gamma if int(g) > 1]
    if sum(gamma) > n:
        raise ValueError(f"cycle type {gamma} does not fit in S_{n}")
    full = gamma + [1] * (n - sum(gamma))
    z = 1
    for k in set(full):
        m = full.count(k)
        z *= k ** m * factorial(m)
    return factorial(n) // z


def _schur_branching(lam: tuple[int, ...], x: np.ndarray):
    # s_lam(x_1..x_k) = sum over mu interlacing lam of x_k^(|lam|-|mu|) s_mu(x_1..x_{k-1}).
    # No division, so coincident or nearly coincident x cost no accuracy.
    @lru_cache(maxsize=None)
    def s(lam, k):
        if not lam:
            return 1.0
        if len(lam) > k:
            return 0.0
        if k == 1:
            return x[0] ** lam[0]
        total = 0.0
        ranges = [range(lam[i + 1] if i + 1 < len(lam) else 0, lam[i] + 1) for i in range(len(lam))]
        for mu in product(*ranges):
            total = total + x[k - 1] ** (sum(lam) - sum(mu)) * s(partition(mu), k - 1)
        return total

    return s(partition(lam), len(x))


def gl_character(w: Sequence[int], x, tol: float = 1e-3):
    """Character of the GL(r) irreducible with weight ``w`` at eigenvalues ``x``.

    ``w`` may be a partition (padded to length r = len(x)) or a signed weight.
    Uses the bialternant formula when all eigenvalue gaps exceed ``tol``
    (relative) and the branching rule otherwise; at x = (1, ..., 1) it
    returns the exact dimension.
    """
    x = np.asarray(x)
    x = x.astype(complex if np.iscomplexobj(x) else float)
    r = len(x)
    w = tuple(int(v) for v in w)
    if len(w) > r:
        if any(w[r:]):
            return 0.0
        w = w[:r]
    w = w + (0,) * (r - len(w))
    if any(w[i] < w[i + 1] for i in range(r - 1)):
        raise ValueError(f"weight {w} is not dominant")
    if np.all(x == 1):
        return float(dim_rational(w))
    shift = -min(min(w), 0)
    if shift and np.any(x == 0):
        raise ValueError("negative weights need invertible eigenvalues")
    lam = partition(v + shift for v in w)
    gaps = [abs(x[i] - x[j]) for i, j in combinations(range(r), 2)]
    scale = max(1.0, float(np.max(np.abs(x))))
    if r == 1:
        val = x[0] ** w[0]
    elif min(gaps) > tol * scale:
        exps = [w[j] + r - 1 - j for j in range(r)]
        num = np.linalg.det(np.array([[xi ** e for e in exps] for xi in x]))
        den = prod(x[i] - x[j] for i, j in combinations(range(r), 2))
        val = num / den
    else:
        val = _schur_branching(lam, x) / np.prod(x) ** shift
    if not np.all(np.isfinite(val)):
        raise IllConditionedError(f"character of {w} at {x} is not finite")
    if np.isrealobj(x):
        return float(np.real(val))
    return complex(val)
