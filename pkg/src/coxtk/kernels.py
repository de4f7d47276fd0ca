"""Backend selection for the Toda kernels.

The compiled module is used when it imports; setting ``COXTK_PURE_PYTHON=1``
forces the numpy fallback.
"""

from __future__ import annotations

import logging
import os

from . import _toda_py

log = logging.getLogger(__name__)


def _load():
    if os.environ.get("COXTK_PURE_PYTHON", "").strip() not in ("", "0"):
        return _toda_py, "python"
    try:
        from . import _toda_c  # type: ignore[attr-defined]
    except ImportError as exc:  # pragma: no cover - depends on build
        log.debug("compiled Toda kernels unavailable: %s", exc)
        return _toda_py, "python"
    return _toda_c, "cython"


_impl, BACKEND = _load()

residual = _impl.residual
jacobian_banded = _impl.jacobian_banded
slope_correction = _toda_py.slope_correction

__all__ = ["BACKEND", "residual", "jacobian_banded", "slope_correction"]
