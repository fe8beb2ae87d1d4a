"""Finite systems against the thermodynamic limit.

The representation sum gives (1/n) log Z_n exactly for n far beyond what a
dense matrix allows, so convergence to the variational free energy can be
watched directly.
"""
import time

from blockspin.oracle import ModelInstance, hamiltonian, log_partition_function
from blockspin.repsum import log_z_exact
from blockspin.variational import TwoBlockParams, free_energy

a = b = c = 1.0
rho = 0.5

# the two oracles agree where both are available
model = ModelInstance("AB", 2, 10, 5, a, b, c)
print("n=10 dense     :", log_partition_function(hamiltonian(model), 1.0))
print("n=10 repsum    :", log_z_exact(model, 1.0))

for beta in (1.0, 3.0):
    limit = free_energy(TwoBlockParams(2, a, b, c, rho, beta))
    print(f"\nbeta = {beta}   limit = {limit:.6f}")
    print("    n     (1/n) log Z     gap")
    for n in (6, 8, 10, 12, 20, 40, 80):
        t0 = time.time()
        val = log_z_exact(ModelInstance("AB", 2, n, n // 2, a, b, c), beta) / n
        print(f"{n:5d}   {val:12.6f}   {abs(val - limit):.4f}   ({time.time() - t0:.2f}s)")

# beta = 3 is in the ordered phase: the gap first grows, then decays like log(n)/n
