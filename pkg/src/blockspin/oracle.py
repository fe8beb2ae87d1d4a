"""Dense brute-force operators on (C^r)^(x)n.

This module is the ground truth for small systems: every Hamiltonian is built
as an explicit real matrix and diagonalised with ``numpy.linalg.eigh``.
Basis vectors are labelled by digit strings (alpha_0, ..., alpha_{n-1}) with
alpha_k in {0, ..., r-1}; site 0 is the most significant digit.  Sites are
0-based throughout.

In the two-block models sites ``0..m-1`` form block A and ``m..n-1`` block B.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

import numpy as np
from scipy.special import logsumexp

from .combinatorics import conjugacy_class_size, cycle_type, partition

log = logging.getLogger(__name__)

MAX_DIM = 20000

KINDS = ("AB", "WB-Q", "WB-P", "MB")

__all__ = [
    "MAX_DIM",
    "ModelInstance",
    "basis_digits",
    "build_perm_operator",
    "build_transposition",
    "build_Q",
    "build_P",
    "hamiltonian",
    "bilinear_biquadratic_hamiltonian",
    "spin_matrices",
    "partition_function",
    "log_partition_function",
    "thermal_expectation",
    "collective_field",
    "magnetized_partition_function",
    "wb_intertwiner",
    "spectra_equal_under_equivalence",
    "spin_one_psi",
    "conjugated_spin_matrices",
]


@dataclass
class ModelInstance:
    """A finite permutation-invariant Hamiltonian.

    For the two-block kinds ("AB", "WB-Q", "WB-P") the couplings are ``a``
    (inside A), ``b`` (inside B) and ``c`` (across).  For "MB", ``blocks``
    lists the block sizes and ``terms`` is a list of
    ``(gamma, [a_1, ..., a_p], c)`` triples, one per cycle type.
    """

    kind: str
    r: int
    n: int
    m: int = 0
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    blocks: tuple = ()
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.r < 1 or self.n < 1:
            raise ValueError("r and n must be positive")
        if self.kind == "MB":
            self.blocks = tuple(int(v) for v in self.blocks)
            if not self.blocks or min(self.blocks) < 1 or sum(self.blocks) != self.n:
                raise ValueError(f"block sizes {self.blocks} must be positive and sum to n")
            terms = []
            for gamma, a_list, c in self.terms:
                gamma = partition(sorted((g for g in gamma if g > 1), reverse=True))
                if len(a_list) != len(self.blocks):
                    raise ValueError("need one block coupling per block")
                terms.append((gamma, tuple(float(v) for v in a_list), float(c)))
            self.terms = terms
        elif not 0 <= self.m <= self.n:
            raise ValueError("need 0 <= m <= n")

    @property
    def dim(self) -> int:
        return self.r ** self.n


def _check_size(n: int, r: int) -> int:
    dim = r ** n
    if dim > MAX_DIM:
        raise ValueError(f"r^n = {dim} exceeds the dense limit {MAX_DIM}")
    return dim


def basis_digits(n: int, r: int) -> np.ndarray:
    """Array of shape (r^n, n) holding the digits of every basis index."""
    dim = _check_size(n, r)
    idx = np.arange(dim)
    powers = r ** np.arange(n - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % r


def _index(digits: np.ndarray, r: int) -> np.ndarray:
    n = digits.shape[1]
    return digits @ (r ** np.arange(n - 1, -1, -1))


def _perm_targets(perm, digits, r):
    # T_sigma e_alpha = e_beta with beta_k = alpha_{sigma^{-1}(k)}
    inv = np.argsort(perm)
    return _index(digits[:, inv], r)


def build_perm_operator(perm, n: int, r: int) -> np.ndarray:
    """Matrix of T_sigma, with sigma in one-line form (perm[i] = sigma(i), 0-based).

    T_sigma (v_0 (x) ... (x) v_{n-1}) = v_{sigma^{-1}(0)} (x) ... ; hence
    T_sigma T_tau = T_{sigma tau}.
    """
    perm = np.asarray(perm)
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError(f"{perm.tolist()} is not a permutation of 0..{n - 1}")
    digits = basis_digits(n, r)
    dim = r ** n
    out = np.zeros((dim, dim))
    out[_perm_targets(perm, digits, r), np.arange(dim)] = 1.0
    return out


def _check_pair(i, j, n):
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise ValueError(f"bad site pair ({i}, {j}) for n = {n}")


def _add_transposition(H, coeff, i, j, digits, r):
    perm = np.arange(digits.shape[1])
    perm[i], perm[j] = j, i
    H[_perm_targets(perm, digits, r), np.arange(H.shape[0])] += coeff


def _add_pair_projector(H, coeff, i, j, digits, r, twisted):
    # Q: <a1 a2|Q|a3 a4> = d(a1,a2) d(a3,a4)
    # P: <a1 a2|P|a3 a4> = (-1)^(a1-a3) d(a1,-a2) d(a3,-a4), labels a = k - S
    if twisted:
        cols = np.nonzero(digits[:, j] == r - 1 - digits[:, i])[0]
    else:
        cols = np.nonzero(digits[:, i] == digits[:, j])[0]
    for k in range(r):
        rows_digits = digits[cols].copy()
        rows_digits[:, i] = k
        rows_digits[:, j] = r - 1 - k if twisted else k
        rows = _index(rows_digits, r)
        if twisted:
            sign = np.where((k - digits[cols, i]) % 2 == 0, 1.0, -1.0)
        else:
            sign = 1.0
        H[rows, cols] += coeff * sign


def build_transposition(i: int, j: int, n: int, r: int) -> np.ndarray:
    """T_(i j), the swap of tensor factors i and j."""
    _check_pair(i, j, n)
    digits = basis_digits(n, r)
    H = np.zeros((r ** n, r ** n))
    _add_transposition(H, 1.0, i, j, digits, r)
    return H


def build_Q(i: int, j: int, n: int, r: int) -> np.ndarray:
    """r times the projector onto the maximally entangled state on sites i, j."""
    _check_pair(i, j, n)
    digits = basis_digits(n, r)
    H = np.zeros((r ** n, r ** n))
    _add_pair_projector(H, 1.0, i, j, digits, r, twisted=False)
    return H


def build_P(i: int, j: int, n: int, r: int) -> np.ndarray:
    """r times the projector onto the spin singlet on sites i, j."""
    _check_pair(i, j, n)
    digits = basis_digits(n, r)
    H = np.zeros((r ** n, r ** n))
    _add_pair_projector(H, 1.0, i, j, digits, r, twisted=True)
    return H


def _class_members(sites, gamma):
    # permutations of ``sites`` (as dicts) with cycle type gamma plus fixed points
    k = len(sites)
    target = tuple(sorted(gamma + (1,) * (k - sum(gamma)), reverse=True))
    for p in permutations(range(k)):
        if cycle_type(p) == target:
            yield {sites[i]: sites[p[i]] for i in range(k)}


def _add_class_average(H, coeff, sites, gamma, n, digits, r):
    if sum(gamma) > len(sites):
        raise ValueError(f"cycle type {gamma} does not fit in a block of size {len(sites)}")
    size = conjugacy_class_size(gamma, len(sites))
    for mapping in _class_members(sites, gamma):
        perm = np.arange(n)
        for s, t in mapping.items():
            perm[s] = t
        H[_perm_targets(perm, digits, r), np.arange(H.shape[0])] += coeff / size


def hamiltonian(model: ModelInstance) -> np.ndarray:
    """Dense real symmetric Hamiltonian of ``model``."""
    n, r = model.n, model.r
    digits = basis_digits(n, r)
    dim = r ** n
    H = np.zeros((dim, dim))
    if model.kind == "MB":
        if n > 8:
            raise ValueError("multi-block oracle is limited to n <= 8")
        starts = np.cumsum((0,) + model.blocks)
        for gamma, a_list, c in model.terms:
            for k, a_k in enumerate(a_list):
                if a_k:
                    sites = list(range(starts[k], starts[k + 1]))
                    _add_class_average(H, -n * a_k, sites, gamma, n, digits, r)
            if c:
                _add_class_average(H, -n * c, list(range(n)), gamma, n, digits, r)
        return H
    m = model.m
    for i, j in combinations(range(n), 2):
        if j < m:
            _add_transposition(H, -model.a / n, i, j, digits, r)
        elif i >= m:
            _add_transposition(H, -model.b / n, i, j, digits, r)
        elif model.kind == "AB":
            _add_transposition(H, -model.c / n, i, j, digits, r)
        else:
            _add_pair_projector(H, -model.c / n, i, j, digits, r, twisted=model.kind == "WB-P")
    return H


def spin_matrices(r: int) -> list[np.ndarray]:
    """Spin-S matrices (S^1, S^2, S^3) with S = (r-1)/2 in the basis S, S-1, ..., -S."""
    S = (r - 1) / 2
    mvals = S - np.arange(r)
    sp = np.zeros((r, r))
    for k in range(1, r):
        sp[k - 1, k] = np.sqrt(S * (S + 1) - mvals[k] * (mvals[k] + 1))
    sx = (sp + sp.T) / 2
    sy = (sp - sp.T) / 2j
    return [sx, sy, np.diag(mvals)]


def bilinear_biquadratic_hamiltonian(n: int, m: int, J1: float, J2: float) -> np.ndarray:
    """Spin-1 model -(1/n) sum_{A x B} [J1 S_i.S_j + J2 (S_i.S_j)^2], built from spin matrices."""
    r = 3
    _check_size(n, r)
    spins = spin_matrices(r)
    dim = r ** n
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(m):
        for j in range(m, n):
            dot = np.zeros((dim, dim), dtype=complex)
            for s in spins:
                ops = [np.eye(r)] * n
                ops[i] = s
                ops[j] = s
                term = ops[0]
                for o in ops[1:]:
                    term = np.kron(term, o)
                dot += term
            H += -(J1 * dot + J2 * dot @ dot) / n
    return H


# ------------------------------------------------------------ thermodynamics


def _eigvalsh(H):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("operator must be a square matrix")
    if not np.allclose(H, H.conj().T, atol=1e-12):
        raise ValueError("operator is not Hermitian")
    return np.linalg.eigvalsh(H)


def log_partition_function(H, beta: float) -> float:
    return float(logsumexp(-beta * _eigvalsh(H)))


def partition_function(H, beta: float) -> float:
    """tr exp(-beta H)."""
    return float(np.exp(log_partition_function(H, beta)))


def thermal_expectation(H, beta: float, O) -> complex | float:
    """tr[O exp(-beta H)] / tr exp(-beta H)."""
    H = np.asarray(H)
    _eigvalsh(H)
    evals, evecs = np.linalg.eigh(H)
    weights = np.exp(-beta * (evals - evals.min()))
    weights /= weights.sum()
    O = np.asarray(O)
    if O.ndim == 1:
        diag = np.einsum("ik,i,ik->k", evecs.conj(), O, evecs)
    else:
        diag = np.einsum("ik,ij,jk->k", evecs.conj(), O, evecs)
    val = np.sum(weights * diag)
    return float(val.real) if abs(val.imag) < 1e-12 else complex(val)


def collective_field(w, n: int, r: int, m: int | None = None, kind: str = "AB") -> np.ndarray:
    """Diagonal of sum_i W_i for W = diag(w).

    For walled Brauer kinds the B block carries -W^T instead of W.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (r,):
        raise ValueError("w must have length r")
    digits = basis_digits(n, r)
    vals = w[digits]
    if kind in ("WB-Q", "WB-P"):
        if m is None:
            raise ValueError("walled Brauer field needs the block size m")
        vals[:, m:] *= -1
    return vals.sum(axis=1)


def magnetized_partition_function(model: ModelInstance, beta: float, w, h: float) -> float:
    """tr exp(-beta H + h sum_i W_i), the field acting as -W^T on block B for WB kinds."""
    H = hamiltonian(model)
    fld = collective_field(w, model.n, model.r, model.m, model.kind)
    return float(np.exp(logsumexp(-np.linalg.eigvalsh(beta * H - h * np.diag(fld)))))


# ------------------------------------------------------- Q / P equivalence


def wb_intertwiner(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-site unitaries (alpha, gamma) with (alpha (x) gamma)^-1 Q (alpha (x) gamma) = P.

    For odd r the pair is (identity, K) with K the signed spin flip; for even r
    alpha is block anti-diagonal and gamma block diagonal in 2x2 blocks.
    """
    s = 1 / np.sqrt(2)
    if r % 2:
        K = np.zeros((r, r))
        for b in range(r):
            K[b, r - 1 - b] = (-1) ** b
        return np.eye(r), K
    k = r // 2
    g1 = s * np.array([[1j, 1j], [-1, 1]])
    g2 = s * np.array([[-1, 1], [-1j, -1j]])
    alpha = np.zeros((r, r), dtype=complex)
    gamma = np.zeros((r, r), dtype=complex)
    for q in range(k):
        alpha[2 * q:2 * q + 2, 2 * (k - 1 - q):2 * (k - 1 - q) + 2] = g1
        gamma[2 * q:2 * q + 2, 2 * q:2 * q + 2] = (-1) ** k * g2
    return alpha, gamma


def spectra_equal_under_equivalence(n: int, m: int, r: int, a: float, b: float, c: float,
                                    tol: float = 1e-10) -> tuple[bool, float]:
    """Compare the spectra of the Q and P walled Brauer Hamiltonians.

    Returns ``(equal, max_abs_gap)`` for the sorted eigenvalues.
    """
    hq = hamiltonian(ModelInstance("WB-Q", r, n, m, a, b, c))
    hp = hamiltonian(ModelInstance("WB-P", r, n, m, a, b, c))
    gap = float(np.max(np.abs(np.linalg.eigvalsh(hq) - np.linalg.eigvalsh(hp))))
    return gap <= tol, gap


def spin_one_psi() -> np.ndarray:
    """Unitary 3x3 site map psi with psi_n^-1 H_P psi_n = H_Q for psi_n = psi^(x)n (spin 1)."""
    s = 1 / np.sqrt(2)
    return np.array([[s, 0, 1j * s], [0, 1, 0], [-s, 0, 1j * s]])


def conjugated_spin_matrices() -> list[np.ndarray]:
    """psi^-1 S^(k) psi for k = 1, 2, 3; each is antisymmetric."""
    psi = spin_one_psi()
    inv = np.linalg.inv(psi)
    return [inv @ S @ psi for S in spin_matrices(3)]
