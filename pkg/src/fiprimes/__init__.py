"""Primes of the form k^2 + (prime)^2: densities, sieves, lattice sums."""

__version__ = "0.1.0"
