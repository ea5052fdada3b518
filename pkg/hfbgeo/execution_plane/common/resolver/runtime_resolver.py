# hfbgeo/execution_plane/common/resolver/runtime_resolver.py
"""
Runtime Resolver

Translates suite component references into executable check functions.

Path Resolution:
  - Relative paths (e.g., "v1.fock_checks.run") are expanded under the checks package
  - Fully qualified paths ("hfbgeo.execution_plane.checks.v1.fock_checks.run") pass through

Examples:
  path="v1.orbit_checks.run"
  -> hfbgeo.execution_plane.checks.v1.orbit_checks.run
"""
import importlib
import logging
from typing import Callable

from hfbgeo.control_plane.registry import CHECK_INTERFACE, Registry

logger = logging.getLogger(__name__)

METADATA_ATTR = "__hfbgeo_check__"


class RuntimeResolver:
    """
    Binds ComponentRefs to check functions and enforces their declared
    version and interface.
    """

    CHECKS_BASE_PATH = "hfbgeo.execution_plane.checks"

    @staticmethod
    def _is_relative_path(path: str) -> bool:
        """Relative paths start with a version segment: v1., v2., ..."""
        return bool(path) and path[0] == "v" and len(path) > 1 and path[1].isdigit()

    @staticmethod
    def expand(path: str) -> str:
        if RuntimeResolver._is_relative_path(path):
            return f"{RuntimeResolver.CHECKS_BASE_PATH}.{path}"
        return path

    @staticmethod
    def resolve_and_validate(component_ref: dict) -> Callable:
        """
        Resolve a component reference to its ``run(ctx, params)`` function.

        Args:
            component_ref: Dict with 'path' and 'version' keys

        Raises:
            RuntimeError: if the component cannot be imported
            ValueError: missing metadata, version mismatch or wrong interface
        """
        path = component_ref.get("path") or ""
        expected_version = component_ref.get("version")
        resolved_path = RuntimeResolver.expand(path)

        # 1. Resolve: dynamic import of module.function
        try:
            module_path, func_name = resolved_path.rsplit(".", 1)
            module = importlib.import_module(module_path)
            func = getattr(module, func_name)
        except (ImportError, AttributeError, ValueError) as e:
            raise RuntimeError(
                f"HFBGEO RESOLUTION FAILURE: Could not find {path} "
                f"(resolved: {resolved_path}). Error: {e}"
            ) from e

        # 2. Validate identity through the component metadata
        if not hasattr(func, METADATA_ATTR):
            raise ValueError(f"HFBGEO GOVERNANCE FAILURE: Check {path} is missing {METADATA_ATTR} metadata.")

        metadata = getattr(func, METADATA_ATTR)
        actual_version = metadata.get("version")
        if actual_version != expected_version:
            raise ValueError(
                f"HFBGEO VERSION MISMATCH: Suite requested {expected_version}, "
                f"but check at {path} is version {actual_version}."
            )
        if metadata.get("interface") != CHECK_INTERFACE:
            raise ValueError(
                f"HFBGEO GOVERNANCE FAILURE: Check {path} declares interface "
                f"{metadata.get('interface')!r}, expected {CHECK_INTERFACE!r}."
            )

        info = Registry.get(path, actual_version)
        if info is None:
            logger.warning("HFBGEO RESOLVER: %s (v%s) is not in the check registry", path, actual_version)
        elif info.deprecated:
            logger.warning("HFBGEO RESOLVER: %s (v%s) is deprecated", path, actual_version)

        logger.info("HFBGEO RESOLVER: Successfully bound %s (v%s)", path, actual_version)
        return func
