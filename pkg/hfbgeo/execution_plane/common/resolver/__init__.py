from hfbgeo.execution_plane.common.resolver.runtime_resolver import RuntimeResolver

__all__ = ["RuntimeResolver"]
