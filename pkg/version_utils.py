"""version_utils.py

Display version for `--version` and the startup DEBUG line.

The base version lives in pyproject.toml ([project] version). A build tag from
RSPEC_BUILD is appended as SemVer build metadata: v0.4.0+g3f2a9c1.
"""

from __future__ import annotations

import os
import re
from typing import Optional

PYPROJECT_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "pyproject.toml")

_TABLE_RE = re.compile(r"^\s*\[(?P<name>[^\]]+)\]")
_PROJECT_VERSION_RE = re.compile(r"""^\s*version\s*=\s*(?P<q>["'])(?P<val>.+?)(?P=q)""")
_ILLEGAL_BUILD_CHARS = re.compile(r"[^0-9A-Za-z-]+")


def read_base_version(pyproject_path: str = PYPROJECT_PATH) -> str:
    """`version` of the [project] table, or "Unknown"."""
    try:
        with open(pyproject_path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError:
        return "Unknown"

    in_project = False
    for line in lines:
        table = _TABLE_RE.match(line)
        if table:
            in_project = table.group("name").strip() == "project"
        elif in_project:
            m = _PROJECT_VERSION_RE.match(line)
            if m:
                return m.group("val").strip()
    return "Unknown"


def _sanitize_build(build: str) -> Optional[str]:
    """Dot-separated [0-9A-Za-z-] identifiers, or None when nothing usable is left."""
    text = str(build or "").strip().lstrip("+")
    idents = []
    for chunk in text.split("."):
        ident = re.sub(r"-{2,}", "-", _ILLEGAL_BUILD_CHARS.sub("-", chunk)).strip("-")
        if ident:
            idents.append(ident)
    return ".".join(idents) or None


def get_build_metadata() -> Optional[str]:
    return _sanitize_build(os.getenv("RSPEC_BUILD", ""))


def format_display_version(base_version: str, build: Optional[str] = None, prefix: str = "v") -> str:
    base = str(base_version or "").strip()
    if not base or base == "Unknown":
        return "Unknown"
    return f"{prefix}{base}" + (f"+{build}" if build else "")


def get_display_version(pyproject_path: str = PYPROJECT_PATH, prefix: str = "v") -> str:
    return format_display_version(read_base_version(pyproject_path), get_build_metadata(), prefix=prefix)
