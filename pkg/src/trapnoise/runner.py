"""Experiment runner: fan realizations out to workers, merge
deterministically, and write the artifact set.

Artifacts per experiment ``name``:

* ``name[_label]_spectrum.csv``  one per run (f, S, R_eff, estimator)
* ``name_amplitude_pmf.csv``     when the amplitude histogram is requested
* ``name_curves.csv``            for curve-only experiments
* ``name_report.json``           empirical rates, cutoff and Hooge analyses
* ``name_meta.json``             everything needed to re-run exactly
* ``name_plot.py``               plain-text plot script for the CSVs

Results are bit-identical for a given seed regardless of the worker
count: every realization runs on a sub-stream derived from the master
seed by its index, and the reduction is ordered by index.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis as _analysis
from .distributions import NonergodicError, detrap_mean, detrap_pdf
from .presets import FIG2_COMPONENT_RATES, ExperimentSpec, spec_to_dict
from .simulate import SimConfig, simulate_realization, superpose
from .spectra import (
    SpectrumEstimate,
    average_spectra,
    logbin_spectrum,
    natural_frequencies,
    periodogram_fft,
    periodogram_superposed_events,
    write_spectrum_csv,
)

__all__ = ["run", "run_spectrum_config", "RunResult"]

_TWO_PI = 2.0 * np.pi


def _one_realization(args):
    config, estimator, freqs, realization = args
    paths = simulate_realization(config, realization)
    pulse_count = sum(p.pulse_count for p in paths)
    free_time = sum(p.free_time for p in paths)
    hist = None
    if estimator == "sampled_fft":
        signal = superpose(paths, config.amplitude, config.sample_dt)
        est = periodogram_fft(signal)
        counts = np.rint(signal.values / config.amplitude).astype(np.int64)
        hist = np.bincount(counts, minlength=config.n_carriers + 1)
    else:
        est = periodogram_superposed_events(paths, config.amplitude, freqs)
    return est.freqs, est.values, pulse_count, free_time, hist


class RunResult:
    """Averaged spectrum plus the empirical aggregates of one run."""

    def __init__(self, spectrum, nu_bar, mean_current, pulse_count, hist):
        self.spectrum = spectrum
        self.nu_bar = nu_bar
        self.mean_current = mean_current
        self.pulse_count = pulse_count
        self.hist = hist


def run_spectrum_config(
    config: SimConfig,
    estimator: str = "event_exact",
    freqs: Optional[np.ndarray] = None,
    f_min: Optional[float] = None,
    f_max: Optional[float] = None,
    points_per_decade: int = 40,
    workers: Optional[int] = None,
) -> RunResult:
    """Simulate all realizations of one config and average their spectra."""
    if estimator == "sampled_fft" and config.sample_dt is None:
        raise ValueError("sampled_fft estimator needs sample_dt in the config")
    if estimator == "event_exact" and freqs is None:
        top = f_max if f_max is not None else 10.0 * config.rates.gamma_max / _TWO_PI
        freqs = natural_frequencies(
            config.horizon, top, f_min=f_min, points_per_decade=points_per_decade
        )

    n_workers = workers if workers is not None else (os.cpu_count() or 1)
    tasks = [
        (config, estimator, freqs, r) for r in range(config.n_realizations)
    ]
    if n_workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * n_workers))
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_one_realization, tasks, chunksize=chunk))
    else:
        results = [_one_realization(t) for t in tasks]

    estimates = [
        SpectrumEstimate(freqs=f, values=v, n_averaged=1, estimator=estimator)
        for f, v, _, _, _ in results
    ]
    averaged = average_spectra(estimates)
    averaged.metadata.update(
        horizon=config.horizon,
        n_carriers=config.n_carriers,
        seed=config.seed,
    )

    R = config.n_realizations
    total_pulses = sum(r[2] for r in results)
    total_free = sum(r[3] for r in results)
    nu_bar = total_pulses / (R * config.n_carriers * config.horizon)
    mean_current = config.amplitude * total_free / (R * config.horizon)
    hist = None
    if results[0][4] is not None:
        hist = np.sum([r[4] for r in results], axis=0)
    return RunResult(averaged, nu_bar, mean_current, total_pulses, hist)


def _analyze_run(spec, label, config, result) -> dict:
    info = {
        "label": label,
        "nu_bar_empirical": result.nu_bar,
        "mean_current": result.mean_current,
        "pulse_count": result.pulse_count,
    }
    est = result.spectrum
    gamma_max = config.rates.gamma_max

    if "cutoff" in spec.analyses:
        auto = _analysis.effective_cutoff(config)
        info["cutoff"] = {
            "auto_regime": auto.regime,
            "auto_gamma_min_eff": auto.gamma_min_eff,
            "by_regime": _analysis.cutoff_by_regime(config),
        }
        binned = logbin_spectrum(est, 4)
        guess = auto.gamma_min_eff
        window = (10.0 * guess, min(100.0 * guess, binned.freqs[-1]))
        try:
            onset = _analysis.plateau_onset(binned, window)
        except ValueError:
            onset = float("nan")
        info["cutoff"]["measured_onset"] = onset

    if "hooge" in spec.analyses:
        predicted = _analysis.hooge_alpha_predicted(config.trapping.rate, gamma_max)
        hooge = {"predicted": predicted.alpha}
        hooge["exact"] = _analysis.hooge_alpha_exact(
            result.nu_bar, config.trapping.mean_time, gamma_max
        )
        if config.rates.gamma_min > 0.0:
            f_lo = 10.0 * config.rates.gamma_min / _TWO_PI
        else:
            f_lo = 10.0 * _analysis.effective_cutoff(config).gamma_min_eff / _TWO_PI
        f_hi = gamma_max / (10.0 * _TWO_PI)
        if f_lo < f_hi and result.mean_current > 0.0:
            fitted = _analysis.hooge_alpha_fitted(
                est, result.mean_current, config.n_carriers, (f_lo, f_hi)
            )
            hooge["fitted"] = fitted.alpha
            hooge["fit_window"] = list(fitted.fit_window)
            hooge["slope_deviation"] = fitted.slope_deviation
        info["hooge"] = hooge

    if "amplitude_pmf" in spec.analyses and result.hist is not None:
        total = result.hist.sum()
        pmf = result.hist / total
        mean_count = float(np.arange(len(pmf)) @ pmf)
        p_fit = mean_count / config.n_carriers
        amp = {"p_fit": p_fit}
        try:
            tau = detrap_mean(config.rates)
            amp["p_analytic"] = config.trapping.mean_time / (
                config.trapping.mean_time + tau
            )
        except NonergodicError:
            amp["p_analytic"] = None
        info["amplitude"] = amp

    return info


def _plot_script(spec: ExperimentSpec, csv_names: list[str], report_name: str) -> str:
    lines = [
        "#!/usr/bin/env python3",
        f'"""Plot the {spec.name} artifacts (regenerate by re-running the experiment)."""',
        "import json",
        "import numpy as np",
        "import matplotlib.pyplot as plt",
        "",
    ]
    if spec.kind == "curves":
        lines += [
            f'data = np.genfromtxt("{csv_names[0]}", delimiter=",", names=True)',
            "names = data.dtype.names",
            'plt.loglog(data["tau"], data["mixture"], "r-", lw=2, label="rate mixture")',
            "for name in names[2:]:",
            '    plt.loglog(data["tau"], data[name], "k--", lw=0.7)',
            'plt.xlabel("detrapping time")',
            'plt.ylabel("probability density")',
            "plt.ylim(1e-12, 1e2)",
            "plt.legend()",
            f'plt.savefig("{spec.name}.png", dpi=150)',
        ]
    else:
        lines += [f'report = json.load(open("{report_name}"))']
        for csv_name in csv_names:
            lines += [
                f'data = np.genfromtxt("{csv_name}", delimiter=",", names=True, '
                'dtype=None, encoding=None)',
                f'plt.loglog(data["f"], data["S"], label="{csv_name}")',
            ]
        lines += [
            "run0 = report['runs'][0]",
            "nu = run0['nu_bar_empirical']",
            "f = data['f']",
        ]
        _, cfg0 = spec.runs[0]
        amp = cfg0.amplitude**2 * cfg0.n_carriers
        lines += [
            f"ref = {amp} * nu / ({cfg0.rates.gamma_max} * f)",
            'plt.loglog(f, ref, "k--", label="flicker reference")',
            'plt.xlabel("frequency")',
            'plt.ylabel("power spectral density")',
            "plt.legend()",
            f'plt.savefig("{spec.name}.png", dpi=150)',
        ]
    return "\n".join(lines) + "\n"


def _export_events(config: SimConfig, stem: str, outdir: Path) -> dict:
    """Event-level CSV (one row per segment) plus the sampled first
    realization when a sampling interval is configured."""
    from .simulate import write_event_csv, write_signal_csv

    out: dict[str, str] = {}
    realized = [
        simulate_realization(config, r) for r in range(config.n_realizations)
    ]
    ev_name = f"{stem}_events.csv"
    with open(outdir / ev_name, "w") as fh:
        write_event_csv(fh, realized)
    out[ev_name] = str(outdir / ev_name)
    if config.sample_dt is not None:
        signal = superpose(realized[0], config.amplitude, config.sample_dt)
        sig_name = f"{stem}_signal.csv"
        with open(outdir / sig_name, "w") as fh:
            write_signal_csv(fh, signal, config.seed)
        out[sig_name] = str(outdir / sig_name)
    return out


def _write_curves(spec: ExperimentSpec, outdir: Path) -> list[str]:
    from .distributions import UniformRates

    model = UniformRates(1e-3, 10.0)
    tau = np.geomspace(1e-3, 1e4, 281)
    mixture = detrap_pdf(tau, model)
    components = [
        rate * np.exp(-rate * tau) / len(FIG2_COMPONENT_RATES)
        for rate in FIG2_COMPONENT_RATES
    ]
    name = f"{spec.name}_curves.csv"
    with open(outdir / name, "w") as fh:
        header = ["tau", "mixture"] + [
            f"comp_{i}" for i in range(len(FIG2_COMPONENT_RATES))
        ]
        fh.write(",".join(header) + "\n")
        for i, t in enumerate(tau):
            row = [f"{t:.17g}", f"{mixture[i]:.17g}"]
            row += [f"{comp[i]:.17g}" for comp in components]
            fh.write(",".join(row) + "\n")
    return [name]


def run(
    spec: ExperimentSpec,
    outdir,
    workers: Optional[int] = None,
    events_csv: bool = False,
) -> dict:
    """Execute an experiment spec and write its artifact set.

    Returns a dict mapping artifact roles to paths.  ``events_csv``
    additionally writes one row per simulated segment (event-level
    export; large for long horizons).
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()
    artifacts: dict[str, str] = {}
    report: dict = {"name": spec.name, "scale": spec.scale, "runs": []}

    if spec.kind == "curves":
        csv_names = _write_curves(spec, outdir)
        report["component_rates"] = [float(g) for g in FIG2_COMPONENT_RATES]
        report["rate_bounds"] = [1e-3, 10.0]
    else:
        csv_names = []
        for label, config in spec.runs:
            result = run_spectrum_config(
                config,
                estimator=spec.estimator,
                f_min=spec.f_min,
                f_max=spec.f_max,
                points_per_decade=spec.points_per_decade,
                workers=workers,
            )
            est = result.spectrum
            if spec.bins_per_decade:
                est = logbin_spectrum(est, spec.bins_per_decade)
            stem = f"{spec.name}_{label}" if label else spec.name
            csv_name = f"{stem}_spectrum.csv"
            with open(outdir / csv_name, "w") as fh:
                write_spectrum_csv(fh, est)
            csv_names.append(csv_name)
            report["runs"].append(_analyze_run(spec, label, config, result))

            if "amplitude_pmf" in spec.analyses and result.hist is not None:
                pmf_name = f"{stem}_amplitude_pmf.csv"
                pmf = result.hist / result.hist.sum()
                p_fit = report["runs"][-1]["amplitude"]["p_fit"]
                from scipy.stats import binom

                model = binom.pmf(np.arange(len(pmf)), config.n_carriers, p_fit)
                with open(outdir / pmf_name, "w") as fh:
                    fh.write("count,pmf,binomial\n")
                    for k, (p, m) in enumerate(zip(pmf, model)):
                        fh.write(f"{k},{p:.17g},{m:.17g}\n")
                artifacts["amplitude_pmf"] = str(outdir / pmf_name)

            if events_csv:
                for role, path in _export_events(config, stem, outdir).items():
                    artifacts[role] = path

    report_name = f"{spec.name}_report.json"
    with open(outdir / report_name, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")

    plot_name = f"{spec.name}_plot.py"
    with open(outdir / plot_name, "w") as fh:
        fh.write(_plot_script(spec, csv_names, report_name))

    meta_name = f"{spec.name}_meta.json"
    meta = {
        "spec": spec_to_dict(spec),
        "workers": workers,
        "numpy_version": np.__version__,
        "wall_time_s": time.perf_counter() - t_start,
        "artifacts": csv_names + [report_name, plot_name],
    }
    with open(outdir / meta_name, "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")

    for csv_name in csv_names:
        artifacts[csv_name] = str(outdir / csv_name)
    artifacts["report"] = str(outdir / report_name)
    artifacts["meta"] = str(outdir / meta_name)
    artifacts["plot"] = str(outdir / plot_name)
    return artifacts
