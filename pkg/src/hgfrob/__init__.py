"""p-adic Frobenius structures on hypergeometric equations and Euler factors of hypergeometric motives."""

__version__ = "0.1.0"
