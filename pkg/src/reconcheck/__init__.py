"""Point-cloud reconstruction checks: weighted complexes, offsets, and
quantitative reconstruction conditions with machine-verified inequalities."""

__version__ = "0.1.0"
