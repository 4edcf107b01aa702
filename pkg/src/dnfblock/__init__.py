"""DnfBlock Python package."""
