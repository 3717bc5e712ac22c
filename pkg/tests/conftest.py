# tests/conftest.py
import builtins
import os
import sys
import types
import importlib.machinery
import warnings

import pytest

# Ensure we can import project modules from repo root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import config  # noqa: E402

# Some container/CI environments ship a vendored psutil (e.g. via ddtrace) that
# emits noisy RuntimeWarnings on import due to missing /proc/vmstat.
warnings.filterwarnings(
    "ignore",
    message=r".*swap memory stats couldn't be determined.*",
    category=RuntimeWarning,
)


@pytest.fixture(autouse=True)
def _isolate_settings(monkeypatch, tmp_path):
    # Tests should not be affected by a developer's .env or shell.
    monkeypatch.setattr(config, "POLY_OVERRIDES", {}, raising=False)
    monkeypatch.setattr(config, "CACHE_DIR", str(tmp_path / "cache"), raising=False)
    monkeypatch.setattr(config, "WORKERS", 1, raising=False)
    monkeypatch.setattr(config, "SHARDS", 0, raising=False)
    monkeypatch.setattr(config, "LOG_COLOR", False, raising=False)
    monkeypatch.setattr(config, "VERBOSE", False, raising=False)
    monkeypatch.delenv("RSPEC_BUILD", raising=False)


@pytest.fixture(autouse=True)
def _restore_print():
    """main.main() swaps builtins.print; make sure no test leaks the hook."""
    original = builtins.print
    yield
    builtins.print = original


@pytest.fixture(autouse=True)
def _clear_stop_flag():
    import enumerator

    enumerator.clear_stop()
    yield
    enumerator.clear_stop()


# If psutil isn't installed in some environments, provide a tiny stub module.
# (Also ensures __spec__ exists so importlib.util.find_spec("psutil") won't ValueError.)
try:
    import psutil  # noqa: F401
except ImportError:
    stub = types.ModuleType("psutil")
    stub.__spec__ = importlib.machinery.ModuleSpec("psutil", loader=None)
    sys.modules["psutil"] = stub


@pytest.fixture
def field3():
    from gf2n import FieldSpec

    return FieldSpec.of(3)


@pytest.fixture
def field4():
    from gf2n import FieldSpec

    return FieldSpec.of(4)
