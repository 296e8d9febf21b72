"""Exact-arithmetic toolkit for qudit Pauli stabilizer models of twisted
quantum doubles: lattice builders, condensation by measurement, anyon-data
extraction, and cross-validation against abstract anyon-theory, K-matrix,
and fusion-group formalisms."""

__version__ = "0.1.0"
