"""Difference operators, polymorphisms and Floquet decompositions for group actions"""

__version__ = "1.0.0"
