"""
Schiffer Lab - periods, Abel-Jacobi maps and Schiffer variations of hyperelliptic curves
"""

__version__ = "0.1.0"
