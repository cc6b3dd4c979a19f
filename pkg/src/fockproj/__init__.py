"""Exact phase-space localized projectors in a truncated Fock space."""

__version__ = "0.1.0"
