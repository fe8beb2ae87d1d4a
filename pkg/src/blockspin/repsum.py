"""Exact finite-n partition functions as sums over irreducible representations.

Schur-Weyl duality block-diagonalises every Hamiltonian in this package, so
tr exp(-beta H) (optionally with a diagonal field e^W on every site) is a
finite sum of explicit terms.  Terms are accumulated in log space and summed
with ``math.fsum`` to keep the result accurate to a few ulps.
"""

from __future__ import annotations

import math

import numpy as np

from .combinatorics import (
    content,
    dim_gl,
    dim_rational,
    dim_specht,
    gl_character,
    lr_coeff,
    mn_character,
    multi_lr_coeff,
    partitions,
    signed_weight,
    wb_branch,
)
from .oracle import ModelInstance

__all__ = ["z_ab_exact", "z_wb_exact", "z_mb_exact", "log_z_exact", "z_exact"]


def _sum_logs(terms):
    # terms: list of (log magnitude, sign)
    if not terms:
        return -math.inf, 0.0
    top = max(t for t, _ in terms)
    total = math.fsum(s * math.exp(t - top) for t, s in terms)
    if total <= 0:
        raise ArithmeticError("representation sum is not positive")
    return top + math.log(total), total


def _char_term(weight, w, r):
    # (log|chi|, sign) of the GL(r) character at e^w, or the dimension when w is None
    if w is None:
        return math.log(dim_rational(weight)), 1.0
    val = gl_character(weight, np.exp(np.asarray(w, dtype=float)))
    if val == 0:
        return None
    return math.log(abs(val)), math.copysign(1.0, val)


def _check_w(w, r):
    if w is None:
        return None
    w = np.asarray(w, dtype=float)
    if w.shape != (r,):
        raise ValueError("w must have length r")
    if np.allclose(w, 0):
        return None
    return w


def log_z_ab_exact(model: ModelInstance, beta: float, w=None) -> float:
    """log tr[exp(sum_i W_i) exp(-beta H)] for the AB model via the LR expansion."""
    if model.kind != "AB":
        raise ValueError("model must be of kind AB")
    n, m, r = model.n, model.m, model.r
    a, b, c = model.a, model.b, model.c
    w = _check_w(w, r)
    terms = []
    for mu in partitions(m, r):
        for nu in partitions(n - m, r):
            base = math.log(dim_specht(mu)) + math.log(dim_specht(nu))
            e_mn = (a - c) * content(mu) + (b - c) * content(nu)
            for lam in partitions(n, r):
                coeff = lr_coeff(lam, mu, nu)
                if not coeff:
                    continue
                ch = _char_term(lam + (0,) * (r - len(lam)), w, r)
                if ch is None:
                    continue
                expo = beta / n * (e_mn + c * content(lam))
                terms.append((ch[0] + math.log(coeff) + base + expo, ch[1]))
    return _sum_logs(terms)[0]


def log_z_wb_exact(model: ModelInstance, beta: float, w=None) -> float:
    """log tr[exp(sum_A W - sum_B W^T) exp(-beta H)] for the walled Brauer models.

    Uses H = -(1/n)((a+c) sum_A T + (b+c) sum_B T - c J), where J acts on the
    GL(r)-irreducible [lam, mu] as ct(lam) + ct(mu) - r t.
    """
    if model.kind not in ("WB-Q", "WB-P"):
        raise ValueError("model must be of kind WB-Q or WB-P")
    n, m, r = model.n, model.m, model.r
    a, b, c = model.a, model.b, model.c
    w = _check_w(w, r)
    if w is not None and model.kind == "WB-P":
        raise ValueError("the field expansion applies to WB-Q only; the P coupling is not "
                         "invariant under g (x) g^-T")
    terms = []
    for pi in partitions(m, r):
        for tau in partitions(n - m, r):
            base = math.log(dim_specht(pi)) + math.log(dim_specht(tau))
            e_pt = (c + a) * content(pi) + (c + b) * content(tau)
            for t in range(min(m, n - m) + 1):
                for lam in partitions(m - t, r):
                    for mu in partitions(n - m - t, r - len(lam)):
                        mult = wb_branch(lam, mu, pi, tau, r)
                        if not mult:
                            continue
                        ch = _char_term(signed_weight(lam, mu, r), w, r)
                        if ch is None:
                            continue
                        expo = beta / n * (e_pt - c * (content(lam) + content(mu) - r * t))
                        terms.append((ch[0] + math.log(mult) + base + expo, ch[1]))
    return _sum_logs(terms)[0]


def _block_tuples(sizes, r):
    if not sizes:
        yield ()
        return
    for mu in partitions(sizes[0], r):
        for rest in _block_tuples(sizes[1:], r):
            yield (mu,) + rest


def _normalised_char(mu, gamma):
    if sum(gamma) > sum(mu):
        raise ValueError(f"cycle type {gamma} does not fit in S_{sum(mu)}")
    return mn_character(mu, gamma) / dim_specht(mu)


def log_z_mb_exact(model: ModelInstance, beta: float) -> float:
    """log tr exp(-beta H) for the multi-block model.

    On the isotypic component labelled by lam and (mu(1), ..., mu(p)) the
    class average over cycle type gamma acts as chi(gamma)/dim.
    """
    if model.kind != "MB":
        raise ValueError("model must be of kind MB")
    n, r = model.n, model.r
    sizes = model.blocks
    terms = []
    for lam in partitions(n, r):
        glog = math.log(dim_gl(lam, r))
        lam_e = sum(c * _normalised_char(lam, g) for g, _, c in model.terms)
        for mus in _block_tuples(sizes, r):
            mult = multi_lr_coeff(lam, mus)
            if not mult:
                continue
            e = lam_e
            for g, a_list, _ in model.terms:
                e += sum(a_k * _normalised_char(mu, g) for a_k, mu in zip(a_list, mus) if a_k)
            base = sum(math.log(dim_specht(mu)) for mu in mus)
            terms.append((glog + math.log(mult) + base + n * beta * e, 1.0))
    return _sum_logs(terms)[0]


def z_ab_exact(model: ModelInstance, beta: float, w=None) -> float:
    return math.exp(log_z_ab_exact(model, beta, w))


def z_wb_exact(model: ModelInstance, beta: float, w=None) -> float:
    return math.exp(log_z_wb_exact(model, beta, w))


def z_mb_exact(model: ModelInstance, beta: float) -> float:
    return math.exp(log_z_mb_exact(model, beta))


def log_z_exact(model: ModelInstance, beta: float, w=None) -> float:
    """Dispatch on ``model.kind``."""
    if model.kind == "AB":
        return log_z_ab_exact(model, beta, w)
    if model.kind == "MB":
        if w is not None:
            raise ValueError("field is not supported for the multi-block sum")
        return log_z_mb_exact(model, beta)
    return log_z_wb_exact(model, beta, w)


def z_exact(model: ModelInstance, beta: float, w=None) -> float:
    return math.exp(log_z_exact(model, beta, w))
