"""Exact-arithmetic certificate forge.

Subpackages build and verify, with integer/finite-field arithmetic only:
root-system combinatorics, finite-field Frobenius witnesses, generic-element
data with Galois descent, depth/level maps, finite congruence models, and
truncated p-adic cusp-form certificates.
"""

__version__ = "0.1.0"
