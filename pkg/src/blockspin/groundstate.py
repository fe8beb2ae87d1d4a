"""Zero-temperature phase diagrams of the two-block models.

As beta grows, the maximisers of F concentrate on the maximisers of
G(x, y) = sum_i Q(x_i, y_i) over the profile set.  The (a, b) plane splits
into regions with explicit maximisers.  For c > 0 there are regions
D, E1, E2, F; for c < 0 and r >= 3 there are A, B_1..B_{r-1}, C_1..C_r, D.
Classification uses |c| = 1 internally: G is homogeneous of degree one in
(a, b, c), so (a, b, c) and (a/|c|, b/|c|, sign c) share the same maximisers.

:func:`numeric_max_G` is an independent check: it enumerates every support
pattern of (x, y) up to simultaneous permutation and solves the Lagrange
conditions on each face.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .variational import canonical, q_form

BOUNDARY_TOL = 1e-9

__all__ = [
    "GroundState",
    "G_value",
    "classify_c_positive",
    "classify_c_negative",
    "classify",
    "ground_magnetisation",
    "numeric_max_G",
    "diagram_grid",
    "default_window",
    "grid_to_csv",
    "grid_to_json",
    "region_adjacency",
]


@dataclass
class GroundState:
    """Classification of one (a, b, c) point.

    ``points`` holds the isolated maximisers (canonical order).  Boundary
    families with a continuum of maximisers are described by ``family`` and
    represented by one element in ``points``; ``segment`` holds the end
    points of a maximising segment when there is one.
    """

    region: str
    k: int | None
    value: float
    points: list
    family: str | None = None
    segment: tuple | None = None
    extra: dict = field(default_factory=dict)

    @property
    def boundary(self) -> bool:
        return self.region.startswith("boundary") or self.region in ("P-corner", "BB-boundary", "BC-boundary")


def G_value(a: float, b: float, c: float, x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.sum(q_form(a, b, c, x, y)))


def _vec(*parts):
    return np.concatenate([np.full(cnt, val, dtype=float) for val, cnt in parts if cnt > 0])


def _near(u, v, scale=1.0):
    return abs(u - v) <= BOUNDARY_TOL * max(1.0, abs(scale))


# ------------------------------------------------------------------ c > 0


def classify_c_positive(a: float, b: float, c: float, rho: float, r: int) -> GroundState:
    """Ground state for c > 0: regions D (with boundary), E1, E2, F."""
    if not c > 0:
        raise ValueError("c must be positive")
    if r < 2 or not 0 < rho < 1:
        raise ValueError("need r >= 2 and 0 < rho < 1")
    a, b = a / c, b / c
    out = _classify_pos(a, b, rho, r)
    out.value *= c
    return out


def _classify_pos(a, b, rho, r):
    rb = 1 - rho
    det = a * b - 1
    if a < 0 and b < 0 and det >= -BOUNDARY_TOL:
        x0, y0 = np.full(r, rho / r), np.full(r, rb / r)
        val = G_value(a, b, 1, x0, y0)
        if det > BOUNDARY_TOL:
            return GroundState("D", None, val, [(x0, y0)])
        return GroundState("boundary-D", None, val, [(x0, y0)], family="semidefinite-line",
                           extra={"sign": 1})
    if b <= -rho / rb + BOUNDARY_TOL * max(1, abs(b)) and b < 0:
        x = _vec((rho, 1), (0.0, r - 1))
        y = np.array([(b * rb - (r - 1) * rho) / (b * r)] + [(b * rb + rho) / (b * r)] * (r - 1))
        return GroundState("E1", None, G_value(a, b, 1, x, y), [(x, y)])
    if a <= -rb / rho + BOUNDARY_TOL * max(1, abs(a)) and a < 0:
        x = np.array([(a * rho - (r - 1) * rb) / (a * r)] + [(a * rho + rb) / (a * r)] * (r - 1))
        y = _vec((rb, 1), (0.0, r - 1))
        return GroundState("E2", None, G_value(a, b, 1, x, y), [(x, y)])
    x = _vec((rho, 1), (0.0, r - 1))
    y = _vec((rb, 1), (0.0, r - 1))
    return GroundState("F", None, G_value(a, b, 1, x, y), [(x, y)])


# ------------------------------------------------------------------ c < 0


def _omega_B(k, rho, r):
    rb = 1 - rho
    return _vec((rho / k, k), (0.0, r - k)), _vec((0.0, k), (rb / (r - k), r - k))


def _omega_C(k, a, b, rho, r):
    # c = -1
    rb = 1 - rho
    c = -1.0
    # at the ends a common factor a (k = 1) or b (k = r) cancels
    if k == 1:
        x = _vec((rho, 1), (0.0, r - 1))
        y = _vec((0.0, 0), ((rb * b - (r - 1) * rho * c) / (r * b), 1), ((rb * b + rho * c) / (r * b), r - 1))
        return x, y
    if k == r:
        x = _vec(((rho * a + rb * c) / (r * a), r - 1), ((rho * a - (r - 1) * rb * c) / (r * a), 1))
        y = _vec((0.0, r - 1), (rb, 1))
        return x, y
    dk = k * (r + 1 - k) * a * b - (k - 1) * (r - k) * c * c
    x1 = ((r + 1 - k) * rho * a * b + rb * b * c - (r - k) * rho * c * c) / dk
    x2 = ((r + 1 - k) * rho * a * b - (k - 1) * rb * b * c) / dk
    y1 = (k * rb * a * b - (r - k) * rho * a * c) / dk
    y2 = (k * rb * a * b + rho * a * c - (k - 1) * rb * c * c) / dk
    x = _vec((x1, k - 1), (x2, 1), (0.0, r - k))
    y = _vec((0.0, k - 1), (y1, 1), (y2, r - k))
    return x, y


def _b_inequalities(k, a, b, rho, r, tol):
    # signed slacks; region B_k is where all are > 0
    rb = 1 - rho
    c = -1.0
    s = [a - k * rb * c / ((r - k) * rho), b - (r - k) * rho * c / (k * rb)]
    s.append((r - k) * (r - k - 1) * rho ** 2 * a - k * (k + 1) * rb ** 2 * b)
    s.append((k - 1) * k * rb ** 2 * b - (r - k + 1) * (r - k) * rho ** 2 * a)
    if k == 1:
        s[3] = -b
    if k == r - 1:
        s[2] = -a
    return s


def _c_inequalities(k, a, b, rho, r):
    rb = 1 - rho
    c = -1.0
    s = [1.0 - a * b]
    if k >= 2:
        s.append((k - 1) * rb * c / ((r - k + 1) * rho) - a)
    if k <= r - 1:
        s.append((r - k) * rho * c / (k * rb) - b)
    return s


def classify_c_negative(a: float, b: float, c: float, rho: float, r: int) -> GroundState:
    """Ground state for c < 0: regions A, B_k, C_k, D and their boundaries.

    For r = 2 the diagram is the c > 0 one with y reversed (F -> A,
    E1 -> C_1, E2 -> C_2).
    """
    if not c < 0:
        raise ValueError("c must be negative")
    if r < 2 or not 0 < rho < 1:
        raise ValueError("need r >= 2 and 0 < rho < 1")
    s = -c
    out = _classify_neg(a / s, b / s, rho, r)
    out.value *= s
    return out


def _classify_neg(a, b, rho, r):
    rb = 1 - rho
    tol = BOUNDARY_TOL
    if r == 2:
        pos = _classify_pos(a, b, rho, r)
        pts = [canonical(x, y[::-1], -1.0) for x, y in pos.points]
        name = {"F": "A", "E1": "C_1", "E2": "C_2"}.get(pos.region, pos.region)
        k = {"C_1": 1, "C_2": 2}.get(name)
        val = G_value(a, b, -1, *pts[0])
        if name.startswith("C_"):
            name = "C"
        return GroundState(name, k, val, pts, family=pos.family, extra={"sign": -1})
    G = lambda x, y: G_value(a, b, -1, x, y)  # noqa: E731
    # closed quadrant a, b >= 0
    if a >= -tol and b >= -tol:
        x, y = _vec((rho, 1), (0.0, r - 1)), _vec((0.0, r - 1), (rb, 1))
        if a > tol and b > tol:
            return GroundState("A", None, G(x, y), [(x, y)])
        fam = "origin" if abs(a) <= tol and abs(b) <= tol else ("b-zero" if abs(b) <= tol else "a-zero")
        return GroundState("boundary-A-edge", None, G(x, y), [(x, y)], family=fam)
    det = a * b - 1
    if a < 0 and b < 0 and det >= -tol:
        x0, y0 = np.full(r, rho / r), np.full(r, rb / r)
        if det > tol:
            return GroundState("D", None, G(x0, y0), [(x0, y0)])
        return GroundState("boundary-D", None, G(x0, y0), [(x0, y0)], family="semidefinite-line",
                           extra={"sign": -1})
    for k in range(1, r):
        if min(_b_inequalities(k, a, b, rho, r, tol)) > tol:
            x, y = _omega_B(k, rho, r)
            return GroundState("B", k, G(x, y), [(x, y)])
    for k in range(1, r + 1):
        if min(_c_inequalities(k, a, b, rho, r)) > tol:
            x, y = _omega_C(k, a, b, rho, r)
            return GroundState("C", k, G(x, y), [canonical(x, y, -1.0)])
    return _negative_boundary(a, b, rho, r)


def _negative_boundary(a, b, rho, r):
    # (a, b) lies on a region boundary with ab < 1 outside the closed quadrant
    rb = 1 - rho
    G = lambda x, y: G_value(a, b, -1, x, y)  # noqa: E731
    loose = 1e-7
    for k in range(1, r - 1):
        pa = k * rb * (-1) / ((r - k) * rho)
        pb = (r - k - 1) * rho * (-1) / ((k + 1) * rb)
        if abs(a - pa) <= loose * max(1, abs(pa)) and abs(b - pb) <= loose * max(1, abs(pb)):
            p1, p2 = _omega_B(k, rho, r), _omega_B(k + 1, rho, r)
            return GroundState("P-corner", k, G(*p1), [p1, p2], family="segment", segment=(p1, p2))
    cands = []
    for k in range(1, r):
        cands.append(("B", k, _omega_B(k, rho, r)))
    for k in range(1, r + 1):
        dk = k * (r + 1 - k) * a * b - (k - 1) * (r - k)
        if (k == 1 and b != 0) or (k == r and a != 0) or (1 < k < r and abs(dk) > 1e-12):
            x, y = _omega_C(k, a, b, rho, r)
            if np.min(x) >= -1e-12 and np.min(y) >= -1e-12:
                cands.append(("C", k, (np.maximum(x, 0), np.maximum(y, 0))))
    vals = [G(*pt) for _, _, pt in cands]
    best = max(vals)
    winners = [cands[i] for i, v in enumerate(vals) if v >= best - 1e-9 * max(1, abs(best))]
    pts = []
    for _, _, (x, y) in winners:
        cx, cy = canonical(x, y, -1.0)
        if not any(np.max(np.abs(np.concatenate([cx - px, cy - py]))) < 1e-7 for px, py in pts):
            pts.append((cx, cy))
    bs = sorted(k for kind, k, _ in winners if kind == "B")
    if len(pts) >= 2 and len(bs) >= 2:
        return GroundState("BB-boundary", bs[0], best, pts)
    return GroundState("BC-boundary", bs[0] if bs else None, best, pts)


def classify(a: float, b: float, c: float, rho: float, r: int) -> GroundState:
    if c > 0:
        return classify_c_positive(a, b, c, rho, r)
    if c < 0:
        return classify_c_negative(a, b, c, rho, r)
    raise ValueError("c = 0 decouples the blocks; classification needs c != 0")


def ground_magnetisation(a: float, b: float, c: float, rho: float, r: int, w) -> float:
    """Ground-state magnetisation for c > 0: sum_i z_i w_i with z = x + y of the maximiser.

    Closed forms: 0 in D, (1 - c/b) rho w_1 in E1, (1 - c/a) rho' w_1 in E2,
    w_1 in F (for w with w_2 = ... = w_r = 0 up to a trace shift).
    """
    gs = classify_c_positive(a, b, c, rho, r)
    if gs.region == "boundary-D":
        raise ValueError("maximiser is not unique on the semidefinite line")
    w = np.sort(np.asarray(w, dtype=float))[::-1]
    x, y = gs.points[0]
    z = np.sort(x + y)[::-1]
    return float(z @ w)


def family_contains(gs: GroundState, a, b, c, rho, x, y, tol=1e-6) -> bool:
    """Check that (x, y) belongs to the maximiser family of a boundary classification."""
    r = len(x)
    rb = 1 - rho
    x = np.asarray(x)
    y = np.asarray(y)
    if gs.family == "semidefinite-line":
        sa, sb = math.sqrt(-a / abs(c)), math.sqrt(-b / abs(c))
        if c > 0:
            return np.allclose(sa * (x - rho / r), sb * (y - rb / r), atol=tol)
        return np.allclose(sa * (x - rho / r), -sb * (y - rb / r), atol=tol)
    if gs.family == "b-zero":
        return abs(np.max(x) - rho) < tol and np.all(y[np.argmax(x)] < tol)
    if gs.family == "a-zero":
        return abs(np.max(y) - rb) < tol and np.all(x[np.argmax(y)] < tol)
    if gs.family == "origin":
        return np.all(x * y < tol)
    if gs.family == "segment":
        (x1, y1), (x2, y2) = gs.segment
        d = np.concatenate([x2 - x1, y2 - y1])
        v = np.concatenate([x - x1, y - y1])
        t = float(v @ d / (d @ d))
        return -tol <= t <= 1 + tol and np.max(np.abs(v - t * d)) < tol
    return any(np.max(np.abs(np.concatenate([x - px, y - py]))) < tol for px, py in gs.points)


# ------------------------------------------------------- numerical check


def numeric_max_G(a: float, b: float, c: float, rho: float, r: int):
    """Global maximum of G by exhaustive active-set enumeration.

    For every support pattern (up to simultaneous permutation) the Lagrange
    conditions on that face are solved with all coordinates in the same class
    equal; feasible solutions and all vertices are compared.  Returns
    ``(value, x, y)`` in canonical order.
    """
    rb = 1 - rho
    best = (-math.inf, None, None)
    # index classes: both positive, x only, y only, neither
    for nxy, nx, ny in product(range(r + 1), repeat=3):
        n0 = r - nxy - nx - ny
        if n0 < 0 or nxy + nx == 0 or nxy + ny == 0:
            continue
        # unknowns: X1 (xy class), Y1 (xy class), X2 (x-only), Y3 (y-only)
        names = []
        if nxy:
            names += ["X1", "Y1"]
        if nx:
            names += ["X2"]
        if ny:
            names += ["Y3"]
        m = len(names)
        pos = {nm: i for i, nm in enumerate(names)}
        Hq = np.zeros((m, m))
        if nxy:
            i, j = pos["X1"], pos["Y1"]
            Hq[i, i] += nxy * a
            Hq[j, j] += nxy * b
            Hq[i, j] += nxy * c
            Hq[j, i] += nxy * c
        if nx:
            Hq[pos["X2"], pos["X2"]] += nx * a
        if ny:
            Hq[pos["Y3"], pos["Y3"]] += ny * b
        A = np.zeros((2, m))
        if nxy:
            A[0, pos["X1"]] = nxy
            A[1, pos["Y1"]] = nxy
        if nx:
            A[0, pos["X2"]] = nx
        if ny:
            A[1, pos["Y3"]] = ny
        K = np.zeros((m + 2, m + 2))
        K[:m, :m] = Hq
        K[:m, m:] = -A.T
        K[m:, :m] = A
        rhs = np.concatenate([np.zeros(m), [rho, rb]])
        sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
        if np.max(np.abs(K @ sol - rhs)) > 1e-9:
            continue
        v = sol[:m]
        if np.min(v) < -1e-12:
            continue
        v = np.maximum(v, 0)
        get = lambda nm: v[pos[nm]] if nm in pos else 0.0  # noqa: E731
        x = _vec((get("X1"), nxy), (get("X2"), nx), (0.0, ny), (0.0, n0))
        y = _vec((get("Y1"), nxy), (0.0, nx), (get("Y3"), ny), (0.0, n0))
        if abs(x.sum() - rho) > 1e-9 or abs(y.sum() - rb) > 1e-9:
            continue
        val = G_value(a, b, c, x, y)
        if val > best[0] + 1e-13:
            best = (val, x, y)
    val, x, y = best
    cx, cy = canonical(x, y, c)
    return val, cx, cy


# ------------------------------------------------------------------ grids


def default_window(c: float, rho: float, r: int) -> tuple[float, float, float, float]:
    """(a_min, a_max, b_min, b_max) covering every region of the diagram."""
    rb = 1 - rho
    s = abs(c)
    ext = 1.3 * s * max((r - 1) * rb / rho, (r - 1) * rho / rb, rb / rho, rho / rb, 1.0)
    return (-ext, s * 1.0, -ext, s * 1.0)


def diagram_grid(c: float, rho: float, r: int, resolution: int = 41,
                 a_range: tuple | None = None, b_range: tuple | None = None) -> list[dict]:
    """Classify every cell of a resolution x resolution grid over (a, b)."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    win = default_window(c, rho, r)
    a_range = a_range or win[:2]
    b_range = b_range or win[2:]
    cells = []
    for a in np.linspace(a_range[0], a_range[1], resolution):
        for b in np.linspace(b_range[0], b_range[1], resolution):
            gs = classify(float(a), float(b), c, rho, r)
            cells.append({"a": float(a), "b": float(b), "region": gs.region, "k": gs.k,
                          "maxG": gs.value, "boundary": gs.boundary})
    return cells


def _fmt(v):
    return "" if v is None else (f"{v:.12g}" if isinstance(v, float) else str(v))


def grid_to_csv(cells, fh=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "region", "k", "maxG"])
    for cell in cells:
        writer.writerow([_fmt(cell["a"]), _fmt(cell["b"]), cell["region"], _fmt(cell["k"]),
                         _fmt(cell["maxG"])])
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def grid_to_json(cells) -> str:
    rows = [{"a": float(f"{c['a']:.12g}"), "b": float(f"{c['b']:.12g}"), "region": c["region"],
             "k": c["k"], "maxG": float(f"{c['maxG']:.12g}")} for c in cells]
    return json.dumps({"schema": "blockspin.phase-diagram/1", "cells": rows}, sort_keys=True)


def _label(gs: GroundState) -> str | None:
    if gs.boundary:
        return None
    return gs.region + (f"_{gs.k}" if gs.k is not None else "")


def _crossings(p, q, lp, lq, classify_at, tol, out):
    # bisect the segment p-q until each change of label is pinned to width tol
    if lp == lq:
        return
    if np.max(np.abs(q - p)) <= tol:
        if lp is not None and lq is not None:
            out.add(tuple(sorted((lp, lq))))
        return
    # off-centre split so samples do not land on grid-aligned boundary lines;
    # boundaries have measure zero, so an unlabelled sample is simply moved
    for frac in (0.4871, 0.4613, 0.5389, 0.4127):
        mid = p + frac * (q - p)
        lm = classify_at(mid)
        if lm is not None:
            break
    _crossings(p, mid, lp, lm, classify_at, tol, out)
    _crossings(mid, q, lm, lq, classify_at, tol, out)


def region_adjacency(cells, resolution: int, c: float | None = None, rho: float | None = None,
                     r: int | None = None, tol: float = 1e-7) -> set:
    """Pairs of region labels that share a boundary.

    Neighbouring grid cells with different labels are joined by a segment on
    which the label changes are located by bisection with the exact
    classifier, so regions thinner than the grid spacing are not skipped.
    Without (c, rho, r) only the raw cell labels are compared, skipping over
    boundary cells along grid lines.
    """
    lab = [[None] * resolution for _ in range(resolution)]
    pts = [[None] * resolution for _ in range(resolution)]
    for idx, cell in enumerate(cells):
        i, j = divmod(idx, resolution)
        name = cell["region"] + (f"_{cell['k']}" if cell["k"] is not None else "")
        lab[i][j] = None if cell["boundary"] else name
        pts[i][j] = np.array([cell["a"], cell["b"]])
    exact = c is not None and rho is not None and r is not None

    def classify_at(v):
        return _label(classify(float(v[0]), float(v[1]), c, rho, r))

    pairs = set()
    for i in range(resolution):
        for j in range(resolution):
            if lab[i][j] is None:
                continue
            for di, dj in ((1, 0), (0, 1)):
                ii, jj = i + di, j + dj
                while ii < resolution and jj < resolution and lab[ii][jj] is None:
                    ii += di
                    jj += dj
                if ii >= resolution or jj >= resolution or lab[ii][jj] == lab[i][j]:
                    continue
                if exact:
                    _crossings(pts[i][j], pts[ii][jj], lab[i][j], lab[ii][jj], classify_at, tol, pairs)
                else:
                    pairs.add(tuple(sorted((lab[i][j], lab[ii][jj]))))
    return pairs
