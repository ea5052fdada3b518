# hfbgeo/execution_plane/common/connectors/__init__.py
"""Connectors: run records, record numbering, trial seeds, CSV output."""
