"""Command-line front end.

Every subcommand prints one JSON document with a ``schema`` field, the
package version and the parameters it was called with.  Floats are written
with 12 significant digits so repeated runs give byte-identical output.
``phase-diagram`` can write CSV instead.

Set BLOCKSPIN_THREADS to cap the BLAS thread count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

THREAD_ENV = "BLOCKSPIN_THREADS"


class UsageError(ValueError):
    pass


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _round(obj.tolist())
    return obj


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def parse_gamma(text: str) -> list[tuple[tuple[int, ...], float]]:
    """Parse "2:0.5,3:-0.1" (and "2+2:0.3" for cycle type (2,2)) into (gamma, c) pairs."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise UsageError(f"bad cycle-type entry {item!r}; expected cycle:coupling")
        key, val = item.split(":", 1)
        try:
            gamma = tuple(sorted((int(g) for g in key.split("+")), reverse=True))
            c = float(val)
        except ValueError:
            raise UsageError(f"bad cycle-type entry {item!r}")
        if min(gamma) < 2:
            raise UsageError("cycle types must have all parts > 1")
        out.append((gamma, c))
    if not out:
        raise UsageError("empty cycle-type specification")
    return out


def parse_config(path: str) -> dict:
    """Read a line-oriented key=value file; '#' starts a comment."""
    conf = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}")
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            conf[k.strip()] = v.strip()
    return conf


def _two_block_args(p, beta=True):
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    if beta:
        p.add_argument("--beta", type=float, required=True)


def _finite_args(p):
    p.add_argument("--kind", choices=["AB", "WB-Q", "WB-P"], default="AB")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockspin", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("free-energy", help="limiting free energy of the AB or WB model")
    _two_block_args(p)
    p.add_argument("--kind", choices=["AB", "WB"], default="AB")

    p = sub.add_parser("beta-crit", help="critical inverse temperature")
    _two_block_args(p, beta=False)

    p = sub.add_parser("maximize", help="maximisers of the free-energy functional")
    _two_block_args(p)

    p = sub.add_parser("phase-diagram", help="ground-state region grid over (a, b)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--resolution", type=int, default=41)
    p.add_argument("--a-range", type=str, default=None, help="amin,amax")
    p.add_argument("--b-range", type=str, default=None, help="bmin,bmax")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", type=str, default=None, help="write to this file instead of stdout")

    for name, hlp in (("magnetisation", "one-sided magnetisation"),
                      ("correlation", "limiting correlation R(w; z)")):
        p = sub.add_parser(name, help=hlp)
        _two_block_args(p)
        p.add_argument("--kind", choices=["AB", "WB"], default="AB")
        p.add_argument("--w", type=str, required=True, help="eigenvalues of W, comma-separated")

    p = sub.add_parser("exact-check", help="dense diagonalisation against the representation sum")
    _finite_args(p)
    p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("spectrum", help="dense spectrum of a finite Hamiltonian")
    _finite_args(p)

    p = sub.add_parser("mb-free-energy", help="multi-block free energy")
    p.add_argument("--config", type=str, default=None, help="key=value file with r, rhos, beta, a-tables")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--rhos", type=str, default=None, help="block fractions, comma-separated")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--gamma", type=str, default=None, help='cycle couplings, e.g. "2:0.5,3:-0.1"')
    p.add_argument("--no-refine", action="store_true")

    p = sub.add_parser("scaling-study", help="finite-n free energies against the limit")
    _two_block_args(p)
    p.add_argument("--kind", choices=["AB", "WB"], default="AB")
    p.add_argument("--n-values", type=str, default="6,8,10,12")
    return ap


def validate(ns) -> None:
    """Check every numeric flag before any computation starts."""
    get = lambda k: getattr(ns, k, None)  # noqa: E731
    if get("r") is not None and ns.r < 2:
        raise UsageError(f"--r must be at least 2, got {ns.r}")
    if get("rho") is not None and not 0 < ns.rho < 1:
        raise UsageError(f"--rho must lie strictly between 0 and 1, got {ns.rho}")
    if get("beta") is not None and not ns.beta > 0:
        raise UsageError(f"--beta must be positive, got {ns.beta}")
    for k in ("a", "b", "c", "beta", "rho"):
        v = get(k)
        if isinstance(v, float) and not math.isfinite(v):
            raise UsageError(f"--{k} must be finite")
    if get("n") is not None:
        from .oracle import MAX_DIM
        if ns.n < 1 or not 0 <= ns.m <= ns.n:
            raise UsageError(f"need n >= 1 and 0 <= m <= n, got n={ns.n}, m={ns.m}")
        if ns.r ** ns.n > MAX_DIM:
            raise UsageError(f"r^n = {ns.r ** ns.n} exceeds the dense limit {MAX_DIM}; lower --n or --r")
    if get("resolution") is not None and ns.resolution < 2:
        raise UsageError("--resolution must be at least 2")


# ---------------------------------------------------------------- handlers


def _params(ns, keys):
    return {k: getattr(ns, k.replace("-", "_")) for k in keys}


def _tb(ns):
    from .variational import TwoBlockParams
    return TwoBlockParams(ns.r, ns.a, ns.b, ns.c, ns.rho, ns.beta)


def cmd_free_energy(ns):
    from .variational import free_energy, maximize_F
    p = _tb(ns)
    rep = maximize_F(p)
    val = free_energy(p, kind=ns.kind)
    return "free-energy", _params(ns, ["r", "a", "b", "c", "rho", "beta", "kind"]), {
        "free_energy": val, "max_F": rep.value, "n_maximizers": len(rep.points)}


def cmd_beta_crit(ns):
    from .variational import beta_crit
    res = beta_crit(ns.a, ns.b, ns.c, ns.rho, ns.r)
    out = {"beta_crit": res.value, "method": res.method}
    if res.value is None:
        out["reason"] = res.reason
    else:
        out["bounds"] = [res.lower, res.upper]
    return "beta-crit", _params(ns, ["r", "a", "b", "c", "rho"]), out


def cmd_maximize(ns):
    from .variational import maximize_F
    rep = maximize_F(_tb(ns))
    pts = [{"x": x, "y": y} for x, y in rep.points]
    return "maximize", _params(ns, ["r", "a", "b", "c", "rho", "beta"]), {
        "value": rep.value, "maximizers": pts, "kkt_residual": rep.kkt_residual}


def _range(text):
    if text is None:
        return None
    vals = _floats(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise UsageError(f"range must be 'min,max' with min < max, got {text!r}")
    return tuple(vals)


def cmd_phase_diagram(ns):
    from .groundstate import diagram_grid, grid_to_csv
    if ns.c == 0:
        raise UsageError("c must be non-zero")
    if ns.resolution < 2:
        raise UsageError("resolution must be at least 2")
    cells = diagram_grid(ns.c, ns.rho, ns.r, ns.resolution, _range(ns.a_range), _range(ns.b_range))
    params = _params(ns, ["r", "c", "rho", "resolution", "a_range", "b_range"])
    if ns.format == "csv":
        return None, params, grid_to_csv(cells)
    rows = [{k: cell[k] for k in ("a", "b", "region", "k", "maxG")} for cell in cells]
    return "phase-diagram", params, {"cells": rows}


def _w(ns):
    w = _floats(ns.w)
    if len(w) != ns.r:
        raise UsageError(f"--w needs {ns.r} values")
    return w


def cmd_magnetisation(ns):
    from .observables import magnetisation
    m = magnetisation(_tb(ns), ns.kind, _w(ns))
    return "magnetisation", _params(ns, ["r", "a", "b", "c", "rho", "beta", "kind", "w"]), {
        "right": m.right, "left": m.left, "n_maximizers": m.maximizers}


def cmd_correlation(ns):
    from .observables import NonUniqueMaximizer, limit_correlation
    params = _params(ns, ["r", "a", "b", "c", "rho", "beta", "kind", "w"])
    try:
        val = limit_correlation(_tb(ns), ns.kind, _w(ns))
        return "correlation", params, {"R": val, "unique": True}
    except NonUniqueMaximizer as exc:
        return "correlation", params, {"R": None, "unique": False, "candidates": exc.candidates}


def _model(ns):
    from .oracle import ModelInstance
    return ModelInstance(ns.kind, ns.r, ns.n, ns.m, ns.a, ns.b, ns.c)


def cmd_exact_check(ns):
    from .oracle import hamiltonian, log_partition_function
    from .repsum import log_z_exact
    model = _model(ns)
    dense = log_partition_function(hamiltonian(model), ns.beta)
    rep = log_z_exact(model, ns.beta)
    rel = abs(math.expm1(dense - rep))
    return "exact-check", _params(ns, ["kind", "n", "m", "r", "a", "b", "c", "beta"]), {
        "z_dense": math.exp(dense), "z_repsum": math.exp(rep),
        "log_z_dense": dense, "log_z_repsum": rep, "relative_difference": rel,
        "agree": rel <= 1e-9}


def cmd_spectrum(ns):
    import numpy as np
    from .oracle import hamiltonian
    ev = np.linalg.eigvalsh(hamiltonian(_model(ns)))
    return "spectrum", _params(ns, ["kind", "n", "m", "r", "a", "b", "c"]), {"eigenvalues": ev}


def _mb_spec(ns):
    from .variational import MultiBlockSpec
    conf = parse_config(ns.config) if ns.config else {}
    r = ns.r if ns.r is not None else int(conf.get("r", 0) or 0)
    rhos = _floats(ns.rhos) if ns.rhos else _floats(conf.get("rhos", ""))
    beta = ns.beta if ns.beta is not None else float(conf.get("beta", "nan"))
    if not r or not rhos or not math.isfinite(beta):
        raise UsageError("need r, rhos and beta (flags or config)")
    gamma_text = ns.gamma or conf.get("gamma")
    if not gamma_text:
        raise UsageError("need cycle-type couplings (--gamma or gamma= in config)")
    terms = []
    for gamma, c in parse_gamma(gamma_text):
        key = "a." + "+".join(str(g) for g in gamma)
        a_list = _floats(conf[key]) if key in conf else [0.0] * len(rhos)
        if len(a_list) != len(rhos):
            raise UsageError(f"{key} needs {len(rhos)} entries")
        terms.append((gamma, a_list, c))
    return MultiBlockSpec(r, tuple(rhos), terms), beta


def cmd_mb_free_energy(ns):
    from .variational import multi_block_free_energy
    spec, beta = _mb_spec(ns)
    res = multi_block_free_energy(spec, beta, refine=not ns.no_refine)
    params = {"r": spec.r, "rhos": list(spec.rhos), "beta": beta,
              "terms": [[list(g), list(a), c] for g, a, c in spec.terms]}
    return "mb-free-energy", params, {
        "free_energy": res.value, "phi_max": res.phi_max, "spectra": res.spectra,
        "commuting_value": res.commuting_value, "refined_value": res.refined_value,
        "refinement_improved": res.refinement_improved, "converged": res.converged}


def cmd_scaling_study(ns):
    from .oracle import ModelInstance
    from .repsum import log_z_exact
    from .variational import free_energy
    p = _tb(ns)
    limit = free_energy(p, kind=ns.kind)
    rows = []
    for n in (int(v) for v in _floats(ns.n_values)):
        m = round(ns.rho * n)
        kind = "AB" if ns.kind == "AB" else "WB-Q"
        model = ModelInstance(kind, ns.r, n, m, ns.a, ns.b, ns.c)
        val = log_z_exact(model, ns.beta) / n
        rows.append({"n": n, "m": m, "finite": val, "gap": abs(val - limit)})
    return "scaling-study", _params(ns, ["r", "a", "b", "c", "rho", "beta", "kind", "n_values"]), {
        "limit": limit, "rows": rows}


HANDLERS = {
    "free-energy": cmd_free_energy,
    "beta-crit": cmd_beta_crit,
    "maximize": cmd_maximize,
    "phase-diagram": cmd_phase_diagram,
    "magnetisation": cmd_magnetisation,
    "correlation": cmd_correlation,
    "exact-check": cmd_exact_check,
    "spectrum": cmd_spectrum,
    "mb-free-energy": cmd_mb_free_energy,
    "scaling-study": cmd_scaling_study,
}


def main(argv=None) -> int:
    threads = os.environ.get(THREAD_ENV)
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = threads
    ns = build_parser().parse_args(argv)
    try:
        validate(ns)
        schema, params, result = HANDLERS[ns.command](ns)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"blockspin {ns.command}: error: {exc}\n")
        return 2
    if schema is None:
        text = result
    else:
        from . import __version__
        doc = {"schema": f"blockspin.{schema}/1", "version": __version__, "params": params}
        doc.update(result)
        text = json.dumps(_round(doc), sort_keys=True) + "\n"
    if getattr(ns, "out", None):
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
