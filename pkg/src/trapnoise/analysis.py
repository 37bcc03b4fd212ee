"""Finite-observation cutoff predictions, Hooge-parameter estimates, and
slope/window fitting helpers.

A finite run of duration T samples only K detrapping rates, so the
smallest rate actually seen — a uniform order statistic with expectation
``(gamma_max - gamma_min)/(K + 1) + gamma_min`` — acts as an effective
low-rate floor and produces a spurious low-frequency plateau.  Averaging
R independent runs multiplies the sample size and pushes the floor down
to ``(R + gamma_max <pulse>)/(R T)``.

The flicker spectrum rewritten in Hooge form ``S = I^2 alpha / (N f)``
gives ``alpha = trapping_rate / gamma_max`` when pulses are long compared
to gaps.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import NonergodicError, detrap_mean
from .simulate import SimConfig
from .spectra import SpectrumEstimate

__all__ = [
    "CutoffPrediction",
    "HoogeEstimate",
    "MaterialParams",
    "expected_min_rate",
    "effective_cutoff",
    "cutoff_by_regime",
    "fitted_floor_rate",
    "flicker_line_level",
    "line_departure_frequency",
    "hooge_alpha_predicted",
    "hooge_alpha_exact",
    "hooge_alpha_fitted",
    "pulse_height_from_material",
    "trapping_rate_from_material",
    "mean_current_from_material",
    "carrier_count",
    "fit_loglog",
    "plateau_onset",
]

_REGIMES = (
    "ergodic_exact",
    "broad_range",
    "nonergodic",
    "long_trapping",
    "multi_experiment",
)


@dataclass(frozen=True)
class CutoffPrediction:
    """Effective minimum detrapping rate and the approximation that produced it."""

    gamma_min_eff: float
    regime: str
    inputs: dict


@dataclass(frozen=True)
class HoogeEstimate:
    """Dimensionless flicker-noise coefficient.

    ``source`` is "predicted" (from rates) or "fitted" (from a measured
    spectrum); fitted estimates carry the window and the deviation of the
    freely fitted slope from -1.
    """

    alpha: float
    source: str
    fit_window: Optional[tuple] = None
    slope_deviation: Optional[float] = None
    in_band: bool = True


@dataclass(frozen=True)
class MaterialParams:
    """Physical sample parameters tying pulse height and trapping rate to
    measurable quantities."""

    charge: float
    drift_speed: float
    thermal_speed: float
    length: float
    cross_section: float
    carrier_density: float
    trap_density: float
    capture_cross_section: float

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0.0:
                raise ValueError(f"{name} must be positive")


def expected_min_rate(gamma_min: float, gamma_max: float, pulse_count: int) -> float:
    """Expected smallest of ``pulse_count`` uniform rate draws.

    The minimum of K uniforms on [0, 1] is Beta(1, K) with mean
    1/(K + 1); rescaling to [gamma_min, gamma_max] gives the result.
    """
    if pulse_count < 1:
        raise ValueError("pulse_count must be >= 1")
    return (gamma_max - gamma_min) / (pulse_count + 1) + gamma_min


def _cutoff_one(config: SimConfig, regime: str) -> float:
    a = config.rates.gamma_min
    b = config.rates.gamma_max
    theta = config.trapping.mean_time
    T = config.horizon
    R = config.n_realizations

    if regime == "ergodic_exact":
        tau = detrap_mean(config.rates)
        cycle = theta + tau
        return (b - a) * cycle / (cycle + R * T) + a
    if regime == "broad_range":
        if a <= 0.0:
            raise NonergodicError("broad_range needs gamma_min > 0")
        log_ratio = np.log(b / a)
        return b * (b * theta + log_ratio) / (b * (theta + T) + log_ratio) + a
    if regime == "nonergodic":
        return (1.0 + b * theta + np.log(b * T)) / T
    if regime == "long_trapping":
        return b * theta / T
    if regime == "multi_experiment":
        return (R + b * theta) / (R * T)
    raise ValueError(f"unknown regime {regime!r}")


def effective_cutoff(config: SimConfig, regime: str = "auto") -> CutoffPrediction:
    """Effective low-rate floor of a finite run.

    ``regime="auto"`` picks the ergodic exact form when
    ``gamma_min * horizon >= 1``, otherwise the nonergodic substitution
    (``gamma_min -> 1/T``), with the multi-experiment form when several
    realizations are averaged.  Every regime can also be requested
    explicitly.
    """
    chosen = regime
    if regime == "auto":
        if config.rates.gamma_min * config.horizon >= 1.0:
            chosen = "ergodic_exact"
        elif config.n_realizations > 1:
            chosen = "multi_experiment"
        else:
            chosen = "nonergodic"
    value = _cutoff_one(config, chosen)
    inputs = {
        "gamma_min": config.rates.gamma_min,
        "gamma_max": config.rates.gamma_max,
        "mean_pulse": config.trapping.mean_time,
        "horizon": config.horizon,
        "n_realizations": config.n_realizations,
    }
    return CutoffPrediction(gamma_min_eff=float(value), regime=chosen, inputs=inputs)


def cutoff_by_regime(config: SimConfig) -> dict:
    """All applicable regime predictions (for reports)."""
    out = {}
    for regime in _REGIMES:
        try:
            out[regime] = float(_cutoff_one(config, regime))
        except NonergodicError:
            out[regime] = None
    return out


def hooge_alpha_predicted(trapping_rate: float, gamma_max: float) -> HoogeEstimate:
    """alpha = trapping_rate / gamma_max; assumes pulses much longer than gaps.

    Warns when the rates are within two orders of magnitude of each
    other, where the long-pulse assumption starts to fail.
    """
    if trapping_rate <= 0.0 or gamma_max <= 0.0:
        raise ValueError("rates must be positive")
    if trapping_rate > 1e-2 * gamma_max:
        warnings.warn(
            "trapping rate not small compared to gamma_max; "
            "long-pulse assumption is weak",
            stacklevel=2,
        )
    return HoogeEstimate(alpha=trapping_rate / gamma_max, source="predicted")


def hooge_alpha_exact(pulse_rate: float, mean_pulse: float, gamma_max: float) -> float:
    """Unapproximated form ``1 / (nu <pulse>^2 gamma_max)``."""
    return 1.0 / (pulse_rate * mean_pulse**2 * gamma_max)


def hooge_alpha_fitted(
    est: SpectrumEstimate,
    mean_current: float,
    n_carriers: int,
    window: tuple,
) -> HoogeEstimate:
    """Invert ``S = I^2 alpha / (N f)`` on a window of the spectrum.

    Least squares on log S vs log f with the slope constrained to -1
    yields the flicker amplitude; a free-slope fit alongside reports the
    deviation, and more than 0.2 flags the window as outside the flicker
    band.
    """
    f1, f2 = window
    sel = (est.freqs >= f1) & (est.freqs <= f2)
    if not np.any(sel):
        raise ValueError("empty fit window")
    logf = np.log(est.freqs[sel])
    logs = np.log(est.values[sel])
    # slope-constrained least squares of log S = c - log f, expressed as
    # per-bin ratios so amplitude rescaling (a -> 2a: S -> 4S, I -> 2I)
    # cancels bit-for-bit
    ratios = n_carriers * est.values[sel] * est.freqs[sel] / mean_current**2
    alpha = np.exp(float(np.mean(np.log(ratios))))
    slope = float(np.polyfit(logf, logs, 1)[0]) if sel.sum() > 1 else -1.0
    deviation = abs(slope + 1.0)
    in_band = deviation <= 0.2
    if not in_band:
        warnings.warn(
            f"fit window not in the flicker regime (slope {slope:.2f})",
            stacklevel=2,
        )
    return HoogeEstimate(
        alpha=float(alpha),
        source="fitted",
        fit_window=(float(f1), float(f2)),
        slope_deviation=deviation,
        in_band=in_band,
    )


def pulse_height_from_material(m: MaterialParams) -> float:
    """Single-carrier current step, charge * drift speed / sample length."""
    return m.charge * m.drift_speed / m.length


def trapping_rate_from_material(m: MaterialParams) -> float:
    """Capture rate, (capture cross-section * thermal speed) * trap density."""
    return m.capture_cross_section * m.thermal_speed * m.trap_density


def carrier_count(m: MaterialParams) -> float:
    """Carriers in the sample, density * length * cross-section."""
    return m.carrier_density * m.length * m.cross_section


def mean_current_from_material(
    m: MaterialParams, pulse_rate: float, mean_pulse: float
) -> float:
    """Average current: the free-drift current scaled by the duty cycle
    ``nu * <pulse>`` of a carrier."""
    v_drift = pulse_rate * mean_pulse * m.drift_speed
    return m.cross_section * m.carrier_density * m.charge * v_drift


def fit_loglog(
    freqs: np.ndarray, values: np.ndarray, window: Optional[tuple] = None
) -> tuple[float, float]:
    """Power-law fit S = C f^slope over a frequency window.

    Returns (slope, C).
    """
    freqs = np.asarray(freqs, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is not None:
        sel = (freqs >= window[0]) & (freqs <= window[1])
        freqs, values = freqs[sel], values[sel]
    if freqs.size < 2:
        raise ValueError("need at least two points to fit")
    slope, intercept = np.polyfit(np.log(freqs), np.log(values), 1)
    return float(slope), float(np.exp(intercept))


def fitted_floor_rate(
    est: SpectrumEstimate,
    pulse_rate: float,
    amplitude: float,
    trapping_rate: float,
    gamma_max: float,
    bounds: tuple,
    n_grid: int = 140,
) -> float:
    """Effective minimum detrapping rate fitted to a measured spectrum.

    Scans a log grid of candidate floors and returns the one whose exact
    closed-form spectrum (uniform rates on [floor, gamma_max], Poisson
    trapping) minimizes the mean squared log residual against
    ``est.values``.  This measures where the finite-observation plateau
    sits; feed a log-binned spectrum restricted to frequencies around and
    below the expected knee.
    """
    from .analytic import ExponentialCharFn, UniformRateCharFn, psd_general_pulse

    lo, hi = bounds
    if not (0.0 < lo < hi < gamma_max):
        raise ValueError("need 0 < lo < hi < gamma_max")
    log_meas = np.log(est.values)
    best = lo
    best_resid = np.inf
    for floor in np.geomspace(lo, hi, n_grid):
        model = psd_general_pulse(
            est.freqs,
            amplitude,
            pulse_rate,
            ExponentialCharFn(trapping_rate),
            UniformRateCharFn(floor, gamma_max),
        )
        resid = float(np.mean((log_meas - np.log(model)) ** 2))
        if resid < best_resid:
            best, best_resid = floor, resid
    return float(best)


def flicker_line_level(est: SpectrumEstimate, window: tuple) -> float:
    """Measured flicker amplitude A of S ~= A/f, the mean of S*f over a
    window inside the 1/f region."""
    f1, f2 = window
    sel = (est.freqs >= f1) & (est.freqs <= f2)
    if not np.any(sel):
        raise ValueError("line window contains no points")
    return float((est.values[sel] * est.freqs[sel]).mean())


def line_departure_frequency(
    freqs: np.ndarray,
    ratio: np.ndarray,
    threshold: float = 2.0**-0.5,
    persistence: int = 2,
) -> float:
    """Highest frequency at which a spectrum drops below its flicker line.

    ``ratio`` is S(f)*f/A, the spectrum in units of the measured 1/f
    line.  Scanning downward in frequency, the crossing is the first
    point below ``threshold`` that stays below for ``persistence``
    consecutive points (so single noisy bins do not trigger), with the
    exact frequency log-interpolated against the last point above.
    Returns NaN if the profile never departs.
    """
    freqs = np.asarray(freqs, dtype=float)
    ratio = np.asarray(ratio, dtype=float)
    for i in range(len(freqs) - 1, -1, -1):
        if not ratio[i] < threshold:
            continue
        lower = ratio[max(0, i - persistence + 1) : i]
        if len(lower) < persistence - 1 or not np.all(lower < threshold):
            continue
        if i + 1 >= len(freqs) or not ratio[i + 1] > 0.0:
            return float(freqs[i])
        lf = np.log(freqs[i : i + 2])
        lr = np.log(ratio[i : i + 2])
        if lr[1] == lr[0]:
            return float(freqs[i])
        t = (np.log(threshold) - lr[0]) / (lr[1] - lr[0])
        return float(np.exp(lf[0] + np.clip(t, 0.0, 1.0) * (lf[1] - lf[0])))
    return float("nan")


def plateau_onset(
    est: SpectrumEstimate,
    line_window: tuple,
    threshold: float = 2.0**-0.5,
    persistence: int = 2,
) -> float:
    """Measured low-frequency cutoff of a flicker spectrum.

    The flicker line is measured on ``line_window`` and the onset is the
    highest frequency (below that window) where the spectrum has fallen
    to ``threshold`` times the line and stays below — the point where 1/f
    behavior gives way to the finite-observation plateau.  Feed a
    log-binned spectrum.
    """
    level = flicker_line_level(est, line_window)
    sel = est.freqs <= line_window[1]
    ratio = est.values[sel] * est.freqs[sel] / level
    return line_departure_frequency(est.freqs[sel], ratio, threshold, persistence)
