# hfbgeo/__init__.py
"""
hfbgeo - Bogoliubov orbit geometry at finite truncation dimension.

Planes:
  - core: block-operator kernel, Bogoliubov group, g1-pdms, orbit geometry,
    cocycles and polarizations, Fock-space oracle, HFB minimizer
  - control_plane: experiment configuration, check registry, suite manifests
  - execution_plane: resolver, connectors, property-sweep components
"""
import logging

__version__ = "1.0.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
