"""The limiting free-energy functional of the two-block models and its maximisers.

A profile point is a pair ``(x, y)`` of non-negative vectors of length r with
sum(x) = rho and sum(y) = 1 - rho.  The functional is

    F(x, y) = sum_i [ -x_i log x_i - y_i log y_i + beta Q(x_i, y_i) ],
    Q(x, y) = (a x^2 + b y^2 + 2 c x y) / 2,

and the free energy per site is max F + rho log rho + rho' log rho'.
The interchange (AB) and walled Brauer (WB) models have the same free energy;
:func:`free_energy` evaluates each through its own form of the quadratic term
(with z = x + y and z = x - y respectively).

Maximisation runs a batch of mirror-ascent iterations from many starting
points, clusters the end points and finishes each cluster with a Newton solve
of the Lagrange conditions.  For c > 0 every maximiser has the form
x_1 >= x_2 = ... = x_r, y_1 >= y_2 = ... = y_r, so a two-variable grid scan is
added to make the global search exhaustive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import entr

log = logging.getLogger(__name__)

VALUE_TOL = 1e-9
DEDUP_TOL = 1e-6
KKT_TOL = 1e-10
SEED = 20240617

__all__ = [
    "TwoBlockParams",
    "MaximizerReport",
    "BetaCrit",
    "MultiBlockSpec",
    "MultiBlockResult",
    "q_form",
    "omega_zero",
    "omega_one",
    "F_value",
    "maximize_F",
    "free_energy",
    "energy_entropy_split",
    "beta_homogeneous",
    "gamma_value",
    "q_negative_semidefinite",
    "t_condition",
    "beta_crit",
    "beta_crit_bisect",
    "beta_crit_bounds",
    "canonical",
    "multi_block_free_energy",
    "multi_block_phi",
    "multi_block_beta_crit",
    "two_block_as_multi_block",
    "bilinear_biquadratic_convert",
]


@dataclass(frozen=True)
class TwoBlockParams:
    r: int
    a: float
    b: float
    c: float
    rho: float
    beta: float

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 2:
            raise ValueError("r must be an integer >= 2")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie strictly between 0 and 1")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        for v in (self.a, self.b, self.c, self.rho, self.beta):
            if not math.isfinite(v):
                raise ValueError("parameters must be finite")

    @property
    def rho_b(self) -> float:
        return 1.0 - self.rho


def q_form(a, b, c, x, y):
    return 0.5 * (a * x * x + b * y * y + 2 * c * x * y)


def omega_zero(r: int, rho: float):
    """The uniform point (rho/r, ..., rho/r; rho'/r, ..., rho'/r)."""
    return np.full(r, rho / r), np.full(r, (1 - rho) / r)


def omega_one(r: int, rho: float):
    """The point with one heavy coordinate: x_1 = (r-1) rho / r, x_i = rho / (r(r-1))."""
    def part(s):
        v = np.full(r, s / (r * (r - 1)))
        v[0] = (r - 1) * s / r
        return v
    return part(rho), part(1 - rho)


# ------------------------------------------------------------- objective


class _Objective:
    """F plus an optional linear tilt, evaluated through one of three algebraic forms."""

    def __init__(self, p: TwoBlockParams, form: str = "F", tilt=None):
        if form not in ("F", "AB", "WB"):
            raise ValueError(f"unknown form {form!r}")
        self.p = p
        self.form = form
        r = p.r
        if tilt is None:
            tilt = (np.zeros(r), np.zeros(r))
        self.tx = np.asarray(tilt[0], dtype=float)
        self.ty = np.asarray(tilt[1], dtype=float)

    def energy_terms(self, x, y):
        p = self.p
        a, b, c, beta = p.a, p.b, p.c, p.beta
        if self.form == "F":
            q = a * x * x + b * y * y + 2 * c * x * y
        elif self.form == "AB":
            z = x + y
            q = (a - c) * x * x + (b - c) * y * y + c * z * z
        else:
            z = x - y
            q = (a + c) * x * x + (b + c) * y * y - c * z * z
        return 0.5 * beta * q

    def value(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        lin = x @ self.tx + y @ self.ty
        return np.sum(entr(x) + entr(y) + self.energy_terms(x, y), axis=-1) + lin

    def energy_grad(self, x, y):
        p = self.p
        a, b, c, beta = p.a, p.b, p.c, p.beta
        if self.form == "F":
            gx = a * x + c * y
            gy = b * y + c * x
        elif self.form == "AB":
            gx = (a - c) * x + c * (x + y)
            gy = (b - c) * y + c * (x + y)
        else:
            gx = (a + c) * x - c * (x - y)
            gy = (b + c) * y + c * (x - y)
        return beta * gx + self.tx, beta * gy + self.ty

    def grad(self, x, y):
        gx, gy = self.energy_grad(x, y)
        with np.errstate(divide="ignore"):
            return gx - np.log(x) - 1, gy - np.log(y) - 1

    def hessian(self, x, y):
        # full Hessian in (x_1..x_r, y_1..y_r)
        p = self.p
        r = p.r
        beta = p.beta
        # all three forms share the same second derivatives
        hxx, hyy, hxy = p.a, p.b, p.c
        H = np.zeros((2 * r, 2 * r))
        idx = np.arange(r)
        H[idx, idx] = beta * hxx - 1 / x
        H[idx + r, idx + r] = beta * hyy - 1 / y
        H[idx, idx + r] = beta * hxy
        H[idx + r, idx] = beta * hxy
        return H


def F_value(p: TwoBlockParams, x, y) -> float:
    """F(x, y); raises ValueError if the point is not in the constraint set."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_point(p, x, y)
    return float(_Objective(p).value(x, y))


def _check_point(p, x, y, tol=1e-9):
    if x.shape != (p.r,) or y.shape != (p.r,):
        raise ValueError("x and y must have length r")
    if np.any(x < -tol) or np.any(y < -tol):
        raise ValueError("profile point has negative entries")
    if abs(x.sum() - p.rho) > tol or abs(y.sum() - p.rho_b) > tol:
        raise ValueError("profile point violates the trace constraints")


def canonical(x, y, c: float):
    """Order the pairs (x_i, y_i) for comparison: x decreasing, ties by y.

    For c >= 0 ties in x are broken by decreasing y, for c < 0 by increasing y.
    For c = 0 the two vectors are sorted independently since their pairing is
    irrelevant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if c == 0:
        return np.sort(x)[::-1], np.sort(y)[::-1]
    sign = -1.0 if c > 0 else 1.0
    order = np.lexsort((sign * np.round(y, 12), -np.round(x, 12)))
    return x[order], y[order]


# ------------------------------------------------------------- optimiser


@dataclass
class MaximizerReport:
    """All maximisers of F found within ``VALUE_TOL`` of the best value."""

    points: list
    value: float
    kkt_residual: float
    local_maxima: list = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return len(self.points) == 1

    @property
    def point(self):
        if not self.unique:
            raise ValueError(f"{len(self.points)} maximisers; no single point")
        return self.points[0]


def _simplex_seeds(p: TwoBlockParams, n_random: int, rng):
    r = p.r
    xs = [np.full(r, 1.0 / r)]
    ys = [np.full(r, 1.0 / r)]
    # concentrated starts: heavy on the first k / first or last l coordinates
    for k in range(1, r + 1):
        for l in range(1, r + 1):
            for flip in (False, True):
                u = np.zeros(r)
                u[:k] = 1.0 / k
                v = np.zeros(r)
                if flip:
                    v[r - l:] = 1.0 / l
                else:
                    v[:l] = 1.0 / l
                xs.append(0.9 * u + 0.1 / r)
                ys.append(0.9 * v + 0.1 / r)
    xs.append(omega_one(r, 0.5)[0] / 0.5)
    ys.append(omega_one(r, 0.5)[0] / 0.5)
    xs.extend(rng.dirichlet(np.ones(r), size=n_random))
    ys.extend(rng.dirichlet(np.ones(r), size=n_random))
    return p.rho * np.array(xs), p.rho_b * np.array(ys)


def _mirror_ascent(obj: _Objective, X, Y, iters: int = 400):
    # entropic mirror ascent on every row at once
    p = obj.p
    scale = p.beta * max(abs(p.a), abs(p.b), abs(p.c)) * max(p.rho, p.rho_b)
    scale += np.max(np.abs(obj.tx), initial=0) + np.max(np.abs(obj.ty), initial=0)
    eta = 1.0 / (1.0 + 2.0 * scale)
    for _ in range(iters):
        gx, gy = obj.energy_grad(X, Y)
        # the entropy part of the update is x -> x^(1 - eta)
        lx = (1 - eta) * np.log(X) + eta * gx
        ly = (1 - eta) * np.log(Y) + eta * gy
        lx -= lx.max(axis=1, keepdims=True)
        ly -= ly.max(axis=1, keepdims=True)
        X = np.exp(lx)
        Y = np.exp(ly)
        X *= p.rho / X.sum(axis=1, keepdims=True)
        Y *= p.rho_b / Y.sum(axis=1, keepdims=True)
        X = np.maximum(X, 1e-300)
        Y = np.maximum(Y, 1e-300)
    return X, Y


def _kkt_residual(obj, x, y):
    gx, gy = obj.grad(x, y)
    # the multiplier that best fits each block, weighted by the point itself
    lx = np.sum(x * gx) / np.sum(x)
    ly = np.sum(y * gy) / np.sum(y)
    return float(max(np.max(np.abs(x * (gx - lx))) / max(np.max(x), 1e-300),
                     np.max(np.abs(y * (gy - ly))) / max(np.max(y), 1e-300),
                     np.max(np.abs(gx - lx)) if np.min(x) > 1e-12 else 0.0,
                     np.max(np.abs(gy - ly)) if np.min(y) > 1e-12 else 0.0))


def _newton_polish(obj: _Objective, x, y, iters: int = 60):
    """Solve the Lagrange conditions by damped Newton steps in log coordinates."""
    r = obj.p.r
    u = np.log(x)
    v = np.log(y)
    best = (obj.value(x, y), x, y)
    A = np.zeros((2, 2 * r))
    for _ in range(iters):
        x = np.exp(u)
        y = np.exp(v)
        gx, gy = obj.grad(x, y)
        H = obj.hessian(x, y)
        # variables are w = (log x, log y); chain rule with D = diag(x, y)
        D = np.concatenate([x, y])
        g = np.concatenate([gx, gy])
        Hw = D[:, None] * H * D[None, :]
        A[0, :r] = x
        A[0, r:] = 0
        A[1, :r] = 0
        A[1, r:] = y
        K = np.zeros((2 * r + 2, 2 * r + 2))
        K[:2 * r, :2 * r] = Hw
        K[:2 * r, 2 * r:] = A.T
        K[2 * r:, :2 * r] = A
        rhs = np.concatenate([-(D * g), np.zeros(2)])
        try:
            step = np.linalg.solve(K, rhs)[:2 * r]
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        step_max = np.max(np.abs(step))
        if step_max > 2.0:
            step *= 2.0 / step_max
        u_new = u + step[:r]
        v_new = v + step[r:]
        xn = np.exp(u_new)
        yn = np.exp(v_new)
        xn *= obj.p.rho / xn.sum()
        yn *= obj.p.rho_b / yn.sum()
        u, v = np.log(xn), np.log(yn)
        val = obj.value(xn, yn)
        if val >= best[0] - 1e-13:
            best = (val, xn, yn)
        if step_max < 1e-14:
            break
    return best


def _tangent_hessian_max(obj, x, y):
    # largest eigenvalue of the Hessian restricted to sum dx = sum dy = 0
    r = obj.p.r
    H = obj.hessian(x, y)
    basis = []
    for blk in range(2):
        for k in range(r - 1):
            e = np.zeros(2 * r)
            e[blk * r + k] = 1.0
            e[blk * r + r - 1] = -1.0
            basis.append(e)
    B = np.linalg.qr(np.array(basis).T)[0]
    return float(np.max(np.linalg.eigvalsh(B.T @ H @ B)))


def _grid_candidates(obj: _Objective, n_grid: int = 161):
    """Local maxima of F restricted to the two-value family (used when c > 0)."""
    p = obj.p
    r = p.r
    s1 = np.linspace(p.rho / r, p.rho, n_grid)
    s2 = np.linspace(p.rho_b / r, p.rho_b, n_grid)
    X1, Y1 = np.meshgrid(s1, s2, indexing="ij")

    def two_value(v1, total):
        rest = (total - v1) / (r - 1)
        return np.stack([v1] + [rest] * (r - 1), axis=-1)

    vals = obj.value(two_value(X1, p.rho), two_value(Y1, p.rho_b))
    padded = np.pad(vals, 1, constant_values=-np.inf)
    is_max = np.ones_like(vals, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                shifted = padded[1 + di:1 + di + n_grid, 1 + dj:1 + dj + n_grid]
                is_max &= vals >= shifted
    out = []
    for i, j in zip(*np.nonzero(is_max)):
        def neg(t):
            x = two_value(np.array(t[0]), p.rho)
            y = two_value(np.array(t[1]), p.rho_b)
            return -float(obj.value(x, y))
        res = minimize(neg, [X1[i, j], Y1[i, j]], method="L-BFGS-B",
                       bounds=[(p.rho / r, p.rho), (p.rho_b / r, p.rho_b)],
                       options={"ftol": 1e-16, "gtol": 1e-13})
        t = res.x
        x = two_value(np.array(t[0]), p.rho)
        y = two_value(np.array(t[1]), p.rho_b)
        out.append((np.maximum(x, 1e-300), np.maximum(y, 1e-300)))
    return out


def _maximize(obj: _Objective, method: str = "auto", n_random: int = 64, seed: int = SEED,
              extra_starts=()):
    p = obj.p
    rng = np.random.default_rng(seed)
    starts = []
    if method in ("auto", "full"):
        X, Y = _simplex_seeds(p, n_random, rng)
        for xs, ys in extra_starts:
            X = np.vstack([X, np.maximum(xs, 1e-12)[None]])
            Y = np.vstack([Y, np.maximum(ys, 1e-12)[None]])
        X, Y = _mirror_ascent(obj, X, Y)
        vals = obj.value(X, Y)
        # cluster end points so each basin is polished once
        keys = {}
        for k in np.argsort(-vals):
            cx, cy = canonical(X[k], Y[k], 1.0 if p.c >= 0 else -1.0)
            key = tuple(np.round(np.concatenate([cx, cy]), 4))
            if key not in keys:
                keys[key] = k
        starts.extend((X[k], Y[k]) for k in keys.values())
    if method == "reduced" or (method == "auto" and p.c > 0):
        starts.extend(_grid_candidates(obj))
    if not starts:
        raise ValueError(f"unknown method {method!r}")
    found = []
    for x0, y0 in starts:
        val, x, y = _newton_polish(obj, x0, y0)
        found.append((val, x, y))
    found.sort(key=lambda t: -t[0])
    return found


def _report(obj: _Objective, found, value_tol=VALUE_TOL) -> MaximizerReport:
    p = obj.p
    best = found[0][0]
    points = []
    local = []
    for val, x, y in found:
        cx, cy = canonical(x, y, p.c)
        vec = np.concatenate([cx, cy])
        if any(np.max(np.abs(vec - np.concatenate(q))) < DEDUP_TOL for _, q in local):
            continue
        local.append((val, (cx, cy)))
        if val >= best - value_tol:
            points.append((cx, cy))
    res = max(_kkt_residual(obj, x, y) for x, y in points)
    return MaximizerReport(points=points, value=float(best), kkt_residual=res,
                           local_maxima=local)


def maximize_F(p: TwoBlockParams, method: str = "auto", n_random: int = 64,
               seed: int = SEED, tilt=None, form: str = "F") -> MaximizerReport:
    """Global maximisers of F (plus an optional linear tilt) over the profile set.

    ``method`` is "auto" (multistart, plus the two-value grid when c > 0),
    "full" (multistart only) or "reduced" (two-value grid only; valid for c > 0).
    Points are returned in :func:`canonical` order.
    """
    obj = _Objective(p, form=form, tilt=tilt)
    extra = [omega_zero(p.r, p.rho), omega_one(p.r, p.rho)]
    return _report(obj, _maximize(obj, method, n_random, seed, extra))


def free_energy(p: TwoBlockParams, kind: str = "AB", **kw) -> float:
    """Limit of (1/n) log tr exp(-beta H) for the AB or walled Brauer model."""
    if kind == "AB":
        form = "AB"
    elif kind in ("WB", "WB-Q", "WB-P"):
        form = "WB"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    rep = maximize_F(p, form=form, **kw)
    return rep.value + _xlogx(p.rho) + _xlogx(p.rho_b)


def _xlogx(v):
    return v * math.log(v) if v > 0 else 0.0


def energy_entropy_split(p: TwoBlockParams, x, y) -> tuple[float, float]:
    """(E, H) with F(x, y) - F(omega_0) = H + beta E.

    E = (1/r) sum_{i<j} Q(x_i - x_j, y_i - y_j) and H is the entropy deficit
    relative to the uniform point (always <= 0).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_point(p, x, y)
    r = p.r
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    E = float(np.sum(np.triu(q_form(p.a, p.b, p.c, dx, dy), 1)) / r)
    H = float(np.sum(entr(x) + entr(y)) + p.rho * math.log(p.rho / r)
              + p.rho_b * math.log(p.rho_b / r))
    return E, H


# ---------------------------------------------------------- critical point


def beta_homogeneous(r: int) -> float:
    """Critical inverse temperature of the one-block model: 2 for r = 2, else 2(r-1)log(r-1)/(r-2)."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if r == 2:
        return 2.0
    return 2 * (r - 1) * math.log(r - 1) / (r - 2)


def q_negative_semidefinite(a: float, b: float, c: float, tol: float = 1e-12) -> bool:
    return a <= 0 and b <= 0 and a * b - c * c >= -tol * max(1.0, c * c)


def gamma_value(a: float, b: float, c: float, rho: float) -> float:
    """Threshold gamma such that Q(t,u) - (t^2/rho + u^2/rho')/gamma is negative semidefinite iff beta <= gamma."""
    if q_negative_semidefinite(a, b, c):
        raise ValueError("Q is negative semidefinite; no threshold")
    rb = 1 - rho
    det = a * b - c * c
    if abs(det) <= 1e-12 * max(1.0, c * c, abs(a * b)):
        return 2.0 / (a * rho + b * rb)
    disc = math.sqrt((rho * a - rb * b) ** 2 + 4 * rho * rb * c * c)
    return (rho * a + rb * b - disc) / (rho * rb * det)


def t_condition(a: float, b: float, c: float, rho: float, tol: float = 1e-12):
    """Return t if (a-c) rho = (b-c) rho' = t, else None."""
    t1 = (a - c) * rho
    t2 = (b - c) * (1 - rho)
    if abs(t1 - t2) <= tol * max(1.0, abs(t1), abs(t2)):
        return 0.5 * (t1 + t2)
    return None


@dataclass
class BetaCrit:
    value: float | None
    method: str
    reason: str = ""
    lower: float | None = None
    upper: float | None = None


def beta_crit_bounds(a: float, b: float, c: float, rho: float, r: int) -> tuple[float, float]:
    """Rigorous bracket (lower, upper) for beta_crit."""
    gam = gamma_value(a, b, c, rho)
    bh = beta_homogeneous(r)
    lower = 0.5 * bh * gam
    upper = r * gam / 2
    qrr = q_form(a, b, c, rho, 1 - rho)
    if r >= 3 and qrr > 0:
        upper = min(upper, bh / (2 * qrr))
    return lower, upper


def _transition_predicate(a, b, c, rho, r, beta, n_random=32):
    # True when omega_0 is no longer a global maximiser at this beta
    p = TwoBlockParams(r, a, b, c, rho, beta)
    obj = _Objective(p)
    x0, y0 = omega_zero(r, rho)
    if _tangent_hessian_max(obj, x0, y0) > 1e-12:
        return True
    rep = _maximize(obj, "auto", n_random, SEED, [omega_one(r, rho)])
    f0 = obj.value(x0, y0)
    return rep[0][0] > f0 + 1e-11 * max(1.0, abs(f0))


def beta_crit_bisect(a: float, b: float, c: float, rho: float, r: int,
                     xtol: float = 1e-8, max_iter: int = 60) -> float:
    """beta_crit by bisection on "omega_0 is not a global maximiser"."""
    if q_negative_semidefinite(a, b, c):
        raise ValueError("Q is negative semidefinite; there is no transition")
    lower, upper = beta_crit_bounds(a, b, c, rho, r)
    # the bracket is rigorous; the margins only guard against round-off
    lo, hi = max(0.5 * lower, 1e-6), 1.05 * upper
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if _transition_predicate(a, b, c, rho, r, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def beta_crit(a: float, b: float, c: float, rho: float, r: int, xtol: float = 1e-8) -> BetaCrit:
    """Critical inverse temperature, in closed form where one is known.

    Otherwise bisection to within ``xtol``.  ``value`` is None when Q is
    negative semidefinite (no transition).
    """
    if r < 2 or not 0 < rho < 1:
        raise ValueError("need r >= 2 and 0 < rho < 1")
    if q_negative_semidefinite(a, b, c):
        return BetaCrit(None, "none", "Q negative semidefinite")
    lower, upper = beta_crit_bounds(a, b, c, rho, r)
    if r == 2:
        return BetaCrit(gamma_value(a, b, c, rho), "closed-form-r2", lower=lower, upper=upper)
    t = t_condition(a, b, c, rho)
    if t is not None and c >= 0 and c + t > 0:
        val = 2 * (r - 1) * math.log(r - 1) / ((r - 2) * (c + t))
        return BetaCrit(val, "closed-form-tcond", lower=lower, upper=upper)
    return BetaCrit(beta_crit_bisect(a, b, c, rho, r, xtol=xtol), "bisection", lower=lower, upper=upper)


# ------------------------------------------------------------ multi-block


@dataclass
class MultiBlockSpec:
    """Block fractions rho_k and interaction table [(gamma, [a_1..a_p], c), ...]."""

    r: int
    rhos: tuple
    terms: list

    def __post_init__(self):
        self.rhos = tuple(float(v) for v in self.rhos)
        if self.r < 2:
            raise ValueError("r must be >= 2")
        if not self.rhos or min(self.rhos) <= 0 or abs(sum(self.rhos) - 1) > 1e-12:
            raise ValueError("block fractions must be positive and sum to 1")
        clean = []
        for gamma, a_list, c in self.terms:
            gamma = tuple(sorted((int(g) for g in gamma), reverse=True))
            if not gamma or min(gamma) < 2:
                raise ValueError("cycle types must have all parts > 1")
            if len(a_list) != len(self.rhos):
                raise ValueError("need one block coupling per block")
            clean.append((gamma, tuple(float(v) for v in a_list), float(c)))
        self.terms = clean

    @property
    def p(self) -> int:
        return len(self.rhos)


def two_block_as_multi_block(a: float, b: float, c: float, rho: float, r: int) -> MultiBlockSpec:
    """The multi-block table whose limit equals the two-block AB free energy."""
    rb = 1 - rho
    return MultiBlockSpec(r, (rho, rb), [((2,), [(a - c) * rho ** 2 / 2, (b - c) * rb ** 2 / 2], c / 2)])


def _power_product(v, gamma):
    return np.prod([np.sum(v ** g, axis=-1) for g in gamma], axis=0)


def _power_product_grad(v, gamma):
    sums = [np.sum(v ** g, axis=-1) for g in gamma]
    out = np.zeros_like(v)
    for j, g in enumerate(gamma):
        rest = np.prod([s for l, s in enumerate(sums) if l != j], axis=0) if len(gamma) > 1 else 1.0
        out = out + g * v ** (g - 1) * np.asarray(rest)[..., None]
    return out


def multi_block_phi(spec: MultiBlockSpec, beta: float, spectra) -> float:
    """phi for simultaneously diagonal blocks with the given eigenvalue vectors."""
    xs = [np.asarray(v, dtype=float) for v in spectra]
    val = sum(float(np.sum(entr(x))) for x in xs)
    z = sum(xs)
    for gamma, a_list, c in spec.terms:
        q = sum(gamma)
        for a_k, x, rho in zip(a_list, xs, spec.rhos):
            val += beta * a_k * _power_product(x, gamma) / rho ** q
        val += beta * c * _power_product(z, gamma)
    return float(val)


def _mb_phi_matrices(spec, beta, mats):
    val = 0.0
    total = sum(mats)
    for M in mats:
        w = np.clip(np.linalg.eigvalsh(M), 0, None)
        val += float(np.sum(entr(w)))
    zt = np.clip(np.linalg.eigvalsh(total), 0, None)
    for gamma, a_list, c in spec.terms:
        q = sum(gamma)
        for a_k, M, rho in zip(a_list, mats, spec.rhos):
            w = np.clip(np.linalg.eigvalsh(M), 0, None)
            val += beta * a_k * _power_product(w, gamma) / rho ** q
        val += beta * c * _power_product(zt, gamma)
    return float(val)


def _mb_commuting_max(spec, beta, n_random=32, seed=SEED):
    r, p = spec.r, spec.p
    rhos = np.array(spec.rhos)
    rng = np.random.default_rng(seed)

    def unpack(u):
        u = u.reshape(p, r)
        e = np.exp(u - u.max(axis=1, keepdims=True))
        return e / e.sum(axis=1, keepdims=True) * rhos[:, None]

    def neg(u):
        X = unpack(u)
        z = X.sum(axis=0)
        val = np.sum(entr(X))
        g = -np.log(np.maximum(X, 1e-300)) - 1
        for gamma, a_list, c in spec.terms:
            q = sum(gamma)
            for k in range(p):
                if a_list[k]:
                    val += beta * a_list[k] * _power_product(X[k], gamma) / rhos[k] ** q
                    g[k] += beta * a_list[k] * _power_product_grad(X[k], gamma) / rhos[k] ** q
            if c:
                val += beta * c * _power_product(z, gamma)
                g += beta * c * _power_product_grad(z, gamma)[None, :]
        # softmax chain rule per block
        gu = X * (g - np.sum(X * g, axis=1, keepdims=True) / rhos[:, None])
        return -val, -gu.ravel()

    starts = [np.zeros(p * r)]
    for k in range(r):
        u = np.zeros((p, r))
        u[:, k] = 3.0
        starts.append(u.ravel())
    starts.extend(rng.normal(scale=2.0, size=(n_random, p * r)))
    best = None
    for u0 in starts:
        res = minimize(neg, u0, jac=True, method="L-BFGS-B",
                       options={"maxiter": 5000, "ftol": 1e-16, "gtol": 1e-12})
        if best is None or res.fun < best.fun:
            best = res
    return -best.fun, unpack(best.x), best


@dataclass
class MultiBlockResult:
    value: float
    phi_max: float
    spectra: np.ndarray
    commuting_value: float
    refined_value: float
    refinement_improved: bool
    converged: bool


def _unitary(params, r):
    from scipy.linalg import expm
    h = np.zeros((r, r), dtype=complex)
    iu = np.triu_indices(r, 1)
    k = len(iu[0])
    h[iu] = params[:k] + 1j * params[k:2 * k]
    h = h - h.conj().T
    return expm(h)


def multi_block_free_energy(spec: MultiBlockSpec, beta: float, refine: bool = True,
                            seed: int = SEED, refine_steps: int = 200) -> MultiBlockResult:
    """Maximise phi over commuting blocks, then try relative unitary rotations.

    The returned ``value`` is on the (1/n) log Z scale, i.e. max phi plus
    sum_k rho_k log rho_k.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    phi_c, X, res = _mb_commuting_max(spec, beta, seed=seed)
    converged = bool(res.success)
    refined = phi_c
    if refine and spec.p > 1:
        r, p = spec.r, spec.p
        k = r * (r - 1) // 2
        rng = np.random.default_rng(seed + 1)
        logits0 = np.log(np.maximum(X, 1e-300)).ravel()

        def neg(theta):
            lg = theta[:p * r].reshape(p, r)
            e = np.exp(lg - lg.max(axis=1, keepdims=True))
            xs = e / e.sum(axis=1, keepdims=True) * np.array(spec.rhos)[:, None]
            mats = [np.diag(xs[0]).astype(complex)]
            for j in range(1, p):
                U = _unitary(theta[p * r + (j - 1) * 2 * k: p * r + j * 2 * k], r)
                mats.append(U @ np.diag(xs[j]) @ U.conj().T)
            return -_mb_phi_matrices(spec, beta, mats)

        theta0 = np.concatenate([logits0, 1e-3 * rng.normal(size=(p - 1) * 2 * k)])
        out = minimize(neg, theta0, method="L-BFGS-B", options={"maxiter": refine_steps})
        refined = max(phi_c, -out.fun)
    improved = refined > phi_c + 1e-9
    phi_max = max(phi_c, refined)
    value = phi_max + sum(_xlogx(v) for v in spec.rhos)
    return MultiBlockResult(value=value, phi_max=phi_max, spectra=X, commuting_value=phi_c,
                            refined_value=refined, refinement_improved=improved,
                            converged=converged)


def _mb_uniform_hessian_max(spec, beta, h=1e-5):
    # tangent Hessian of the commuting phi at the uniform point, by central differences
    r, p = spec.r, spec.p
    base = [np.full(r, rho / r) for rho in spec.rhos]
    dirs = []
    for k in range(p):
        for i in range(r - 1):
            d = np.zeros((p, r))
            d[k, i] = 1.0
            d[k, r - 1] = -1.0
            dirs.append(d)
    B = np.linalg.qr(np.array([d.ravel() for d in dirs]).T)[0]
    m = B.shape[1]

    def f(t):
        v = np.array(base) + (B @ t).reshape(p, r)
        return multi_block_phi(spec, beta, list(v))

    Hm = np.zeros((m, m))
    f0 = f(np.zeros(m))
    for i in range(m):
        for j in range(i, m):
            ei = np.zeros(m)
            ej = np.zeros(m)
            ei[i] = h
            ej[j] = h
            Hm[i, j] = Hm[j, i] = (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4 * h * h)
    return float(np.max(np.linalg.eigvalsh(Hm))), f0


def multi_block_beta_crit(spec: MultiBlockSpec, beta_max: float = 50.0, xtol: float = 1e-7) -> float:
    """Smallest beta at which the uniform point stops maximising phi (bisection)."""

    def transition(beta):
        hmax, f0 = _mb_uniform_hessian_max(spec, beta)
        if hmax > 1e-6:
            return True
        phi, _, _ = _mb_commuting_max(spec, beta, n_random=16)
        return phi > f0 + 1e-10 * max(1.0, abs(f0))

    lo, hi = 1e-6, beta_max
    if not transition(hi):
        raise ValueError(f"no transition below beta = {beta_max}")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if transition(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------- bilinear-biquadratic map


def bilinear_biquadratic_convert(J1: float, J2: float) -> dict:
    """Rewrite the spin-1 coupling J1 S.S + J2 (S.S)^2 across the blocks.

    Uses S.S = T - P and (S.S)^2 = P + 1, so the coupling equals
    J1 T + (J2 - J1) P + J2.  The result gives the model kind, the cross
    coupling, the T and P coefficients and ``edge_constant`` (= J2): the
    original Hamiltonian equals the converted one minus J2 m (n - m) / n.
    """
    out = {"t_coeff": float(J1), "p_coeff": float(J2 - J1), "edge_constant": float(J2),
           "a": 0.0, "b": 0.0}
    if J1 == 0 and J2 == 0:
        out.update(kind="zero", c=0.0)
    elif J1 == J2:
        out.update(kind="AB", c=float(J1))
    elif J1 == 0:
        out.update(kind="WB-P", c=float(J2))
    else:
        out.update(kind="mixed", c=None)
    return out
