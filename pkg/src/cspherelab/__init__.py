"""Harmonic analysis and n-width laboratory on complex spheres.

A library + CLI implementing special functions, harmonic-space
combinatorics, exact orthogonal harmonic bases, zonal identities, Levy-mean
estimation, multiplier families and an exact Hilbert-space width oracle,
with rate fitting used to confirm asymptotic decay laws at desk scale.
"""

__version__ = "0.1.0"
