"""Helper utilities for the management commands."""
