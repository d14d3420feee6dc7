"""Shared numeric defaults."""

DEFAULT_TOL = 1e-9

# Horizon used when an unbounded certification region must be truncated.
DEFAULT_HORIZON = 50.0
