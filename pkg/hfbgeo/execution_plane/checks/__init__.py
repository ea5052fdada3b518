# hfbgeo/execution_plane/checks/__init__.py
"""
Property checks: the Sweep machinery, versioned check components (v1/) and the
suite interpreter that sequences them.
"""
