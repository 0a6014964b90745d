"""Braid relations for involution words in twisted Coxeter systems."""

from .numfield import FieldElement, LinearPoly, make_cos, sign, evaluate
from .coxeter import TwistedSystem, GroupElement, preset, standard_automorphisms

__version__ = "0.1.0"
