# This file makes the hybridplan directory a Python package
"""Návrh, simulace a vyúčtování hybridních tarifů ve sdíleném přístupu."""

__version__ = "1.0.0"
