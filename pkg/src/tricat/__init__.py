"""Finite triangulated categories of type A: rigid objects, mutation, quotients, localisation models."""

__version__ = "0.1.0"
