"""Exact and mean-field tools for two-block and multi-block permutation-invariant
quantum spin systems.

The package is organised bottom-up:

- ``combinatorics``: partitions, characters, Littlewood-Richardson and walled
  Brauer branching numbers, GL(r) dimensions and characters.
- ``oracle``: dense Hamiltonians on (C^r)^n for brute-force checks.
- ``repsum``: exact partition functions as sums over irreducible representations.
- ``variational``: the limiting free-energy functional, its maximisers and the
  critical temperature.
- ``observables``: limiting correlation function and magnetisation.
- ``groundstate``: zero-temperature phase classification.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
