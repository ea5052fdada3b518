# hfbgeo/execution_plane/__init__.py
"""
Execution Plane

Runs what the control plane decides: resolves check components, derives
per-trial seeds, executes sweeps and writes CSV rows and run records.
"""
