# mergmkit/__init__.py
"""
mergmkit: exponential random graph models for multilevel networks.

Actors, objects and the ties between them: count statistics, simulate,
estimate, check fit and describe groups from the command line.
"""

__version__ = "0.1.0"
