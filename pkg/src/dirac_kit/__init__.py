"""dirac-kit: exact and numerical verification of Dirac-structure,
Courant-algebroid and multiplicative moment-map identities."""

__version__ = "0.1.0"
