"""Management module."""
