"""
g2nu

Exact nu-invariants of flat G2-orbifolds T^7/Gamma and of the generalized
Kummer G2-manifolds resolving them.
"""

__version__ = "1.0.0"
