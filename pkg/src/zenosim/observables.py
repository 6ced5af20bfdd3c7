"""Derived observables of recorded trajectories: entanglement entropy
series, oscillation periods, saturation plateaus, dominant frequency."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory
from .errors import ValidationError
from .states import entropy_from_bloch_radius

__all__ = ["entropy_series", "PeriodEstimate", "measure_period",
           "measure_saturation", "dominant_frequency"]

# A trailing window is declared saturated when its spread is below this (nats).
SATURATION_SPREAD = 1e-3


def entropy_series(traj: Trajectory) -> np.ndarray:
    """Entanglement entropy S(t) (nats) from the first qubit's Bloch radius."""
    r1 = np.sqrt(np.sum(traj.states[:, :3] ** 2, axis=1))
    return np.array([entropy_from_bloch_radius(r) for r in r1])


def _refined_extrema_times(series: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Times of strict three-point local minima, refined by fitting a
    parabola through the three samples (ties resolve to the earlier index
    because the comparison is strict on the left)."""
    s = series
    idx = np.flatnonzero((s[1:-1] < s[:-2]) & (s[1:-1] < s[2:])) + 1
    refined = []
    for i in idx:
        denom = s[i - 1] - 2.0 * s[i] + s[i + 1]
        shift = 0.0 if denom == 0.0 else 0.5 * (s[i - 1] - s[i + 1]) / denom
        # local spacing; grids are uniform in practice but not required
        h = 0.5 * (times[i + 1] - times[i - 1])
        refined.append(times[i] + shift * h)
    return np.array(refined)


@dataclass(frozen=True)
class PeriodEstimate:
    """Mean spacing of successive interpolated minima (and maxima)."""

    min_to_min: float
    max_to_max: float | None
    n_minima: int
    n_maxima: int


def measure_period(series, times) -> PeriodEstimate | None:
    """Oscillation period from minima spacing; None when not periodic.

    Needs at least 3 interior local minima and relative spread of the
    spacings below 10%; the max-to-max estimate is attached when at least
    3 maxima exist (None otherwise).
    """
    s = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    if s.shape != t.shape or s.ndim != 1:
        raise ValidationError("series and times must be equal-length 1-d arrays")
    t_min = _refined_extrema_times(s, t)
    if len(t_min) < 3:
        return None
    gaps = np.diff(t_min)
    mean = float(gaps.mean())
    if mean <= 0 or float(gaps.std()) / mean > 0.10:
        return None
    t_max = _refined_extrema_times(-s, t)
    max_to_max = None
    if len(t_max) >= 3:
        g = np.diff(t_max)
        if g.mean() > 0 and float(g.std()) / float(g.mean()) <= 0.10:
            max_to_max = float(g.mean())
    return PeriodEstimate(min_to_min=mean, max_to_max=max_to_max,
                          n_minima=len(t_min), n_maxima=len(t_max))


def measure_saturation(series, times, window_fraction: float = 0.1) -> float | None:
    """Mean of the trailing window when it has settled; None otherwise.

    The window covers the last `window_fraction` of the time span; settled
    means max - min < 1e-3 nats inside it.
    """
    if not 0.0 < window_fraction < 1.0:
        raise ValidationError("window_fraction must lie in (0, 1)")
    s = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    if s.shape != t.shape or s.ndim != 1 or len(s) == 0:
        raise ValidationError("series and times must be equal-length 1-d arrays")
    cut = t[-1] - window_fraction * (t[-1] - t[0])
    window = s[t >= cut]
    if len(window) == 0 or float(window.max() - window.min()) >= SATURATION_SPREAD:
        return None
    return float(window.mean())


def dominant_frequency(series, times) -> float:
    """Peak of the magnitude spectrum of the mean-removed series (1/ns),
    refined by parabolic interpolation across the peak bin."""
    s = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    if len(s) < 64:
        raise ValidationError("need at least 64 samples for a spectrum")
    if s.shape != t.shape:
        raise ValidationError("series and times must have equal length")
    dt = float(np.mean(np.diff(t)))
    mag = np.abs(np.fft.rfft(s - s.mean()))
    k = int(np.argmax(mag[1:]) + 1)  # skip any residual DC
    if 1 <= k < len(mag) - 1:
        denom = mag[k - 1] - 2.0 * mag[k] + mag[k + 1]
        shift = 0.0 if denom == 0.0 else 0.5 * (mag[k - 1] - mag[k + 1]) / denom
    else:
        shift = 0.0
    return (k + shift) / (len(s) * dt)
