"""Non-Hermitian discrete-time quantum walk simulator (quantum active particle)."""

__version__ = "0.1.0"
