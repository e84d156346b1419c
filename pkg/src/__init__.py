"""
RANK FLOW: exact rank identities for matrix polynomials

This package contains the core modules:
- field_core: Q and GF(p) scalars and raw array kernels
- poly_ring: dense polynomials, division and the extended gcd certificate
- exact_matrix: exact dense matrices, rank, Horner evaluation and blocks
- spectral_poly: characteristic and minimal polynomials
- rank_theorem: rank identity certificates and the corollary checks
- classifiers: matrix properties decided by rank statements
- fuzz_harness: seeded randomized contract suite
- metrics_logger: fuzz report aggregation and output
"""

__version__ = "0.1.0"
__author__ = "RANK FLOW Team"
