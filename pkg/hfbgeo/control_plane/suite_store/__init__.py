from hfbgeo.control_plane.suite_store.suite_store import SUITE_STORE_PATH, SuiteParser, SuiteStep, SuiteStore

__all__ = ["SUITE_STORE_PATH", "SuiteParser", "SuiteStep", "SuiteStore"]
