"""Outlier removal by thresholding the empirical distance to measure."""
from __future__ import annotations

import numpy as np

from .errors import DegenerateDataError, InputError
from .filters import dtm
from .geometry import DistanceMatrix

__all__ = ["dtm_filter", "parse_denoise_spec"]

MODES = ("keep_low", "keep_high")


def dtm_filter(dm: DistanceMatrix, k: int = 10, tau_frac: float = 0.4, mode: str = "keep_low") -> np.ndarray:
    """Indices kept after comparing each DTM value with ``tau_frac * max DTM``.

    ``keep_low`` drops sparse outliers (high DTM). ``keep_high`` keeps points
    at or above the threshold instead.
    """
    if not 0 <= tau_frac <= 1:
        raise InputError(f"tau_frac must lie in [0, 1], got {tau_frac}")
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    values = dtm(dm, k).values
    tau = tau_frac * float(values.max())
    keep = values <= tau if mode == "keep_low" else values >= tau
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        raise DegenerateDataError(f"DTM threshold tau={tau:.6g} removes every point")
    return idx


def parse_denoise_spec(spec: str) -> tuple[int, float]:
    """``dtm:<k>:<tau_frac>`` -> ``(k, tau_frac)``."""
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] != "dtm":
        raise InputError(f"bad denoise spec {spec!r}; expected dtm:<k>:<tau_frac>")
    try:
        return int(parts[1]), float(parts[2])
    except ValueError:
        raise InputError(f"bad denoise spec {spec!r}; expected dtm:<k>:<tau_frac>") from None
