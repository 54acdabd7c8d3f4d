"""Numerical verification toolkit for weighted Hardy, Hardy-Littlewood-
Sobolev, Caffarelli-Kohn-Nirenberg and Trudinger-Moser inequalities on
homogeneous Lie groups (R^n with dilations, Heisenberg groups)."""

__version__ = "0.1.0"
