"""High-precision period computations for hypergeometric and elliptic families."""

__version__ = "0.1.0"
