"""Power residue symbols and Kummer splitting tests in Q(xi, zeta)."""

__version__ = "0.1.0"
