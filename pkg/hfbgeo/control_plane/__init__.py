# hfbgeo/control_plane/__init__.py
"""
Control Plane

Decides what runs: experiment configuration, the catalog of check components
and the versioned suite manifests that sequence them.
"""
