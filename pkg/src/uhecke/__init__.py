"""Exact computations around unequal-parameter Hecke algebras.

Submodules:

* :mod:`uhecke.exactalg`  Laurent polynomials, rational functions, cyclotomic scalars
* :mod:`uhecke.weyl`      signed permutations and parabolic double cosets
* :mod:`uhecke.hecke`     the finite Hecke algebra, its characters and eigenvectors
* :mod:`uhecke.satake`    invariant Laurent polynomials and the theta homomorphisms
* :mod:`uhecke.doubling`  L-, epsilon- and zeta factors, intertwining constants
* :mod:`uhecke.weilrep`   residue-lattice and finite-field Weil representation models
* :mod:`uhecke.cli`       command line front end
"""

__version__ = "0.1.0"
