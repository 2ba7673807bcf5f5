"""Spectra of 2-D magnetic Hamiltonians perturbed by non-local potentials.

The magnetic Hamiltonian with constant field b has spectrum b(2q+1),
q = 0, 1, ...; perturbing it by a pseudo-differential operator with a
phase-space symbol splits eigenvalues off the levels.  This package builds
the truncated matrices, evaluates the explicit radial eigenvalue formulas,
estimates logarithmic capacities, and checks the eigenvalue decay laws.
"""

__version__ = "0.1.0"

from . import asymptotics, capacity, operators, quadrature, specfun, symbols, wigner

__all__ = [
    "__version__",
    "asymptotics",
    "capacity",
    "operators",
    "quadrature",
    "specfun",
    "symbols",
    "wigner",
]
