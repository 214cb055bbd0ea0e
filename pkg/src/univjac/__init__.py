"""Universal stability conditions on stable marked graphs."""

__version__ = "0.1.0"
