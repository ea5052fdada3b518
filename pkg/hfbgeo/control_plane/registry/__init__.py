# hfbgeo/control_plane/registry/__init__.py
"""
Check Registry

Central catalog of the property-sweep components a suite manifest may name:
- Version history
- Interface contracts
- Deprecation status

Paths are relative to the checks package (``v1.fock_checks.run``), the same
form the suite manifests and the runtime resolver use.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

CHECK_INTERFACE = "hfbgeo.interfaces.check.v1"


@dataclass
class ComponentInfo:
    """Metadata about a registered check component."""
    path: str
    version: str
    interface: str
    description: str
    module: str  # core module whose properties the component sweeps
    fock_bound: bool = False  # needs the brute-force Fock space (n <= cap)
    deprecated: bool = False


_REGISTRY: Dict[str, List[ComponentInfo]] = {
    "v1.group_checks.run": [
        ComponentInfo(
            path="v1.group_checks.run",
            version="1.0.0",
            interface=CHECK_INTERFACE,
            description="Group relations, exp/log, Z2 index homomorphism, orthogonal picture",
            module="boggroup",
        )
    ],
    "v1.g1pdm_checks.run": [
        ComponentInfo(
            path="v1.g1pdm_checks.run",
            version="1.0.0",
            interface=CHECK_INTERFACE,
            description="Diagonalization residuals and same-orbit witnesses",
            module="g1pdm",
        )
    ],
    "v1.orbit_checks.run": [
        ComponentInfo(
            path="v1.orbit_checks.run",
            version="1.0.0",
            interface=CHECK_INTERFACE,
            description="Closed-range inequality, norm bound, cross sections, geodesics",
            module="orbitgeo",
        )
    ],
    "v1.symplectic_checks.run": [
        ComponentInfo(
            path="v1.symplectic_checks.run",
            version="1.0.0",
            interface=CHECK_INTERFACE,
            description="Cocycle identities, radical, polarization and complex structure",
            module="sympkahler",
        )
    ],
    "v1.fock_checks.run": [
        ComponentInfo(
            path="v1.fock_checks.run",
            version="1.0.0",
            interface=CHECK_INTERFACE,
            description="CAR, implementers, quasi-free round trip, Wick, number statistics",
            module="fockoracle",
            fock_bound=True,
        )
    ],
    "v1.hfb_checks.run": [
        ComponentInfo(
            path="v1.hfb_checks.run",
            version="1.0.0",
            interface=CHECK_INTERFACE,
            description="HFB minimization against exact diagonalization, gradient check",
            module="hfbopt",
            fock_bound=True,
        )
    ],
}


class Registry:
    """Check registry interface."""

    @staticmethod
    def get(path: str, version: str = None) -> Optional[ComponentInfo]:
        """Get component info by path and optional version."""
        components = _REGISTRY.get(path, [])
        if not components:
            return None

        if version:
            for c in components:
                if c.version == version:
                    return c
            return None

        # Latest is last in list
        return components[-1]

    @staticmethod
    def list_all() -> List[ComponentInfo]:
        """List all registered components."""
        result = []
        for components in _REGISTRY.values():
            result.extend(components)
        return result

    @staticmethod
    def list_by_module(module: str) -> List[ComponentInfo]:
        return [c for c in Registry.list_all() if c.module == module]
