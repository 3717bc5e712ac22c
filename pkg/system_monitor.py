#!/usr/bin/env python3
"""
FILE: system_monitor.py
DESCRIPTION:
  Resource sampling for long sweeps.
  - SystemMonitor.read_stats(): CPU %, system memory %, this process's RSS (MB).
  - default_worker_count(): physical cores (falls back to logical / os.cpu_count()).
  - format_stats(): one-line summary appended to [SWEEP] heartbeats.
  psutil is optional: without it the heartbeat just omits resource figures.
"""
import os
import importlib.util

import config

# --- IMPORTS & DEPENDENCY CHECK ---
# NOTE: conftest may inject a stub "psutil" into sys.modules. Stubs without
# __spec__ make importlib.util.find_spec("psutil") raise ValueError; treat that
# the same as "psutil not available".
PSUTIL_AVAILABLE = False
try:
    try:
        psutil_spec = importlib.util.find_spec("psutil")
    except ValueError:
        psutil_spec = None

    if psutil_spec is not None:
        import psutil
        PSUTIL_AVAILABLE = hasattr(psutil, "Process")
    else:
        print("[WARN] 'psutil' not found. Sweep heartbeats will not report CPU/RAM.")
except ImportError as e:
    PSUTIL_AVAILABLE = False
    print(f"[WARN] Resource monitoring disabled: {e}")


class SystemMonitor:
    def __init__(self):
        # Track this process (each shard worker samples itself)
        self.process = psutil.Process(os.getpid())

    def read_stats(self):
        stats = {}

        try:
            # non-blocking: percentage since the previous call
            stats["cpu"] = psutil.cpu_percent(interval=None)
        except Exception:
            pass

        try:
            stats["mem"] = psutil.virtual_memory().percent
        except Exception:
            pass

        try:
            rss = self.process.memory_info().rss
            stats["rss_mb"] = round(rss / 1024 / 1024, 2)
        except Exception:
            pass

        return stats


def make_monitor():
    """SystemMonitor when psutil works, else None."""
    if not PSUTIL_AVAILABLE:
        return None
    try:
        return SystemMonitor()
    except Exception as e:
        print(f"[WARN] Resource monitor failed to start: {e}")
        return None


def format_stats(stats):
    if not stats:
        return ""
    parts = []
    if "rss_mb" in stats:
        parts.append(f"rss={stats['rss_mb']}MB")
    if "cpu" in stats:
        parts.append(f"cpu={stats['cpu']}%")
    if "mem" in stats:
        parts.append(f"mem={stats['mem']}%")
    return " ".join(parts)


def default_worker_count():
    """Worker processes for sharded sweeps: config.WORKERS, else physical cores."""
    configured = int(getattr(config, "WORKERS", 0) or 0)
    if configured > 0:
        return configured
    if PSUTIL_AVAILABLE:
        try:
            cores = psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True)
            if cores:
                return int(cores)
        except Exception:
            pass
    return os.cpu_count() or 1
