# soliton_check is imported by path: it depends on the surfaces and variation layers
from .lll import ReducedBasis, lll_reduce

__all__ = ["ReducedBasis", "lll_reduce"]
