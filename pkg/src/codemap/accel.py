"""Kernel dispatch: numba-accelerated hot loops with a pure-numpy fallback.

The active path is chosen by the ``CODEMAP_NUMBA`` environment variable
(default: use numba when importable). Set ``CODEMAP_NUMBA=0`` to force the
numpy fallback, e.g. for debugging or on platforms without a working LLVM.
Both paths implement the same recurrences; see benchmarks/bench_kernels.py
for a speed and agreement comparison.
"""

from __future__ import annotations

import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    HAVE_NUMBA = False


def _env_enabled() -> bool:
    return os.environ.get("CODEMAP_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


# Re-read the env var at import; tests monkeypatch this flag to pin one path.
NUMBA_ENABLED = HAVE_NUMBA and _env_enabled()


def use_numba() -> bool:
    """True when kernels should run through their numba-compiled variant."""
    return NUMBA_ENABLED
