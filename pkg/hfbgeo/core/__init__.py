# hfbgeo/core/__init__.py
"""Computational core: every operation is a pure function of its inputs."""
