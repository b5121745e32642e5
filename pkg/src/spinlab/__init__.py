"""Exact diagonalization and entanglement of collective spin models.

The N-qubit symmetric subspace, the LMG Hamiltonian in its parity sectors,
self-contained symmetric eigensolvers, bipartite entanglement of symmetric
states, spectrum-level averages and fits, and the classical fixed-point
analysis of the same model.
"""

__version__ = "0.1.0"
