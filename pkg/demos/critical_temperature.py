"""Where does the uniform state stop being the maximiser?

Walks through the critical inverse temperature of the two-block interchange
model: closed forms where they exist, bisection otherwise, and what the
free-energy functional looks like on either side of the transition.
"""
import math

import numpy as np

from blockspin.variational import (
    F_value,
    TwoBlockParams,
    beta_crit,
    beta_crit_bisect,
    maximize_F,
    omega_one,
    omega_zero,
)

# r = 2 always has a closed form
for a, b, c in [(1, 1, 1), (0, 0, 1), (2, -1, 1)]:
    res = beta_crit(a, b, c, 0.5, 2)
    print(f"r=2  (a,b,c)=({a},{b},{c})  beta_crit = {res.value:.6f}  [{res.method}]")

# r = 3 on the line (a - c) rho = (b - c) rho'
res = beta_crit(1, 1, 1, 0.5, 3)
print(f"\nr=3  a=b=c=1         beta_crit = {res.value:.6f}   4 log 2 = {4 * math.log(2):.6f}")
print(f"     bisection gives  {beta_crit_bisect(1, 1, 1, 0.5, 3, xtol=1e-6):.6f}")

# off that line only bisection is available; the bracket comes from rigorous bounds
res = beta_crit(0.5, -1.0, 1.0, 0.3, 3)
print(f"\nr=3  (a,b,c,rho)=(0.5,-1,1,0.3): beta_crit = {res.value:.5f} in [{res.lower:.4f}, {res.upper:.4f}]")

# no transition when Q is negative semidefinite
print("\nab >= c^2 with a,b < 0:", beta_crit(-1, -1, 1, 0.5, 2))

# F along the segment from omega_0 to omega_1, below / at / above the transition
r, rho = 3, 0.5
bc = 4 * math.log(2)
x0, y0 = omega_zero(r, rho)
x1, y1 = omega_one(r, rho)
ts = np.linspace(0, 1, 11)
print("\n  t   " + "".join(f"{lab:>12s}" for lab in ("0.9 bc", "bc", "1.1 bc")))
for t in ts:
    row = []
    for beta in (0.9 * bc, bc, 1.1 * bc):
        p = TwoBlockParams(r, 1, 1, 1, rho, beta)
        f = F_value(p, x0 + t * (x1 - x0), y0 + t * (y1 - y0)) - F_value(p, x0, y0)
        row.append(f"{f:12.5f}")
    print(f"{t:4.1f} " + "".join(row))
# at bc the two ends tie: that is the first-order jump

for beta in (0.9 * bc, bc, 1.1 * bc):
    rep = maximize_F(TwoBlockParams(r, 1, 1, 1, rho, beta))
    print(f"beta={beta:.4f}: {len(rep.points)} maximiser(s); x = {[np.round(x, 4).tolist() for x, _ in rep.points]}")
