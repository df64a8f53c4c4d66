"""Seeded Monte Carlo trials, aggregation and parameter sweeps.

Trials are processed in fixed chunks of ``CHUNK`` consecutive trial indices.
Chunking never depends on the worker count, and per-trial results are
concatenated in trial order before any reduction, so serial and parallel
runs agree to the last bit.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .channel import LinkBudget, direct_channel, path_loss_linear, reflected_sum, sample_batch
from .geometry import Topology, link_distances
from .metrics import outage_indicator, secrecy_rate, snr
from .ris import check_bits, optimal_phase_array, quantize_phase_array

CHUNK = 4096
Z_95 = 1.96

DEFAULT_RATE_TRIALS = 10_000
DEFAULT_OUTAGE_TRIALS = 100_000

AXES = ("theta", "n_elements", "alpha", "d_te", "quantization_bits")


class InvalidConfig(ValueError):
    pass


class InvalidAxisValue(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    topology: Topology = field(default_factory=lambda: Topology(20.0, 30.0, 40.0, math.radians(10)))
    budget: LinkBudget = field(default_factory=LinkBudget)
    n_elements: int = 50
    quantization_bits: int | None = None
    include_ris: bool = True
    include_direct: bool = True
    r_th: float = 2.5
    trials: int = DEFAULT_RATE_TRIALS
    seed: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InvalidConfig(f"trials must be >= 1, got {self.trials}")
        if self.n_elements < 1:
            raise InvalidConfig(f"n_elements must be >= 1, got {self.n_elements}")
        if not (self.include_ris or self.include_direct):
            raise InvalidConfig("at least one of include_ris / include_direct must be set")
        if not self.r_th >= 0:
            raise InvalidConfig(f"r_th must be nonnegative, got {self.r_th}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.quantization_bits is not None:
            check_bits(self.quantization_bits)

    def with_axis(self, axis: str, value) -> "ScenarioConfig":
        """Copy of this config with one sweep axis set (theta in radians)."""
        try:
            if axis == "theta":
                return replace(self, topology=replace(self.topology, theta=float(value)))
            if axis == "d_te":
                return replace(self, topology=replace(self.topology, d_te=float(value)))
            if axis == "alpha":
                return replace(self, budget=replace(self.budget, alpha=float(value)))
            if axis == "n_elements":
                return replace(self, n_elements=int(value))
            if axis == "quantization_bits":
                return replace(self, quantization_bits=None if value is None else int(value))
        except (ValueError, TypeError) as exc:
            raise InvalidAxisValue(f"{axis}={value!r}: {exc}") from exc
        raise InvalidAxisValue(f"unknown sweep axis {axis!r}; expected one of {AXES}")


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    ci_low: float
    ci_high: float
    n_trials: int

    @classmethod
    def from_samples(cls, x) -> "MonteCarloEstimate":
        x = np.asarray(x, dtype=float)
        n = x.size
        if n == 0:
            raise InvalidConfig("cannot estimate from zero trials")
        mean = float(np.mean(x))
        se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean, se, mean - Z_95 * se, mean + Z_95 * se, n)

    def overlaps(self, other: "MonteCarloEstimate") -> bool:
        return self.ci_low <= other.ci_high and other.ci_low <= self.ci_high


class ScenarioResult(NamedTuple):
    rate: MonteCarloEstimate
    outage: MonteCarloEstimate
    gamma_rx: MonteCarloEstimate
    gamma_eve: MonteCarloEstimate

    @property
    def rate_at_mean_snr(self) -> float:
        """Secrecy rate evaluated at the mean SNRs (sensitivity check only)."""
        return float(secrecy_rate(self.gamma_rx.mean, self.gamma_eve.mean))


@dataclass(frozen=True)
class SweepResult:
    axis_name: str
    axis_values: tuple
    results: tuple[ScenarioResult, ...]

    def __post_init__(self) -> None:
        if len(self.axis_values) != len(self.results):
            raise ValueError("one result per axis value is required")

    @property
    def rates(self) -> list[MonteCarloEstimate]:
        return [r.rate for r in self.results]

    @property
    def outages(self) -> list[MonteCarloEstimate]:
        return [r.outage for r in self.results]


def _axis_key(v) -> float:
    # unquantized (None) ranks above every finite bit depth
    return math.inf if v is None else float(v)


def _trial_arrays(cfg: ScenarioConfig, real, sums_cache: dict) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial (gamma_rx, gamma_eve) for one chunk of realizations."""
    budget = cfg.budget
    d = link_distances(cfg.topology)
    y_rx = np.zeros(real.f_rx.shape, dtype=complex)
    y_eve = np.zeros(real.f_eve.shape, dtype=complex)
    if cfg.include_ris:
        bits = cfg.quantization_bits
        if bits not in sums_cache:
            if "phases" not in sums_cache:
                sums_cache["phases"] = optimal_phase_array(real.h, real.g_rx)
            phases = sums_cache["phases"]
            if bits is not None:
                phases = quantize_phase_array(phases, bits)
            # both receivers see the same reflected wavefront
            h_reflected = real.h * np.exp(1j * phases)
            sums_cache[bits] = (reflected_sum(h_reflected, real.g_rx), reflected_sum(h_reflected, real.g_eve))
        s_rx, s_eve = sums_cache[bits]
        pl_in = path_loss_linear(d.d_tx_ris, budget)
        y_rx = y_rx + np.sqrt(pl_in * path_loss_linear(d.d_ris_rx, budget)) * s_rx
        y_eve = y_eve + np.sqrt(pl_in * path_loss_linear(d.d_ris_eve, budget)) * s_eve
    if cfg.include_direct:
        y_rx = y_rx + direct_channel(real.f_rx, path_loss_linear(d.d_tx_rx, budget), budget.blockage_db)
        y_eve = y_eve + direct_channel(real.f_eve, path_loss_linear(d.d_tx_eve, budget), budget.blockage_db)
    p, noise = budget.p_tx_w, budget.noise_w
    return snr(y_rx, p, noise), snr(y_eve, p, noise)


def _run_chunk(configs: Sequence[ScenarioConfig], start: int, stop: int) -> list[tuple[np.ndarray, np.ndarray]]:
    first = configs[0]
    real = sample_batch(first.seed, start, stop, first.n_elements)
    cache: dict = {}
    return [_trial_arrays(cfg, real, cache) for cfg in configs]


def _run_shared(configs: Sequence[ScenarioConfig], workers: int | None) -> list[ScenarioResult]:
    """Evaluate configs that share seed, trials and n_elements on common draws."""
    first = configs[0]
    for cfg in configs[1:]:
        if (cfg.seed, cfg.trials, cfg.n_elements) != (first.seed, first.trials, first.n_elements):
            raise InvalidConfig("configs evaluated on common draws must share seed, trials and n_elements")
    bounds = [(s, min(s + CHUNK, first.trials)) for s in range(0, first.trials, CHUNK)]
    if workers is not None and workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, configs, s, e) for s, e in bounds]
            chunks = [f.result() for f in futures]
    else:
        chunks = [_run_chunk(configs, s, e) for s, e in bounds]

    results = []
    for i, cfg in enumerate(configs):
        g_rx = np.concatenate([c[i][0] for c in chunks])
        g_eve = np.concatenate([c[i][1] for c in chunks])
        c_s = secrecy_rate(g_rx, g_eve)
        results.append(
            ScenarioResult(
                rate=MonteCarloEstimate.from_samples(c_s),
                outage=MonteCarloEstimate.from_samples(outage_indicator(c_s, cfg.r_th)),
                gamma_rx=MonteCarloEstimate.from_samples(g_rx),
                gamma_eve=MonteCarloEstimate.from_samples(g_eve),
            )
        )
    return results


def run_scenario(c: ScenarioConfig, workers: int | None = None) -> ScenarioResult:
    """Mean secrecy rate and outage probability for one configuration.

    Trial ``t`` always uses the fading draws keyed by ``(c.seed, t)``.
    ``workers > 1`` spreads chunks over processes without changing the result.
    """
    return _run_shared([c], workers)[0]


def _check_axis(axis: str, values: Sequence) -> list:
    if axis not in AXES:
        raise InvalidAxisValue(f"unknown sweep axis {axis!r}; expected one of {AXES}")
    values = list(values)
    if not values:
        raise InvalidAxisValue(f"sweep over {axis!r} needs at least one value")
    keys = [_axis_key(v) for v in values]
    if any(b <= a for a, b in zip(keys, keys[1:])):
        raise InvalidAxisValue(f"{axis} values must be strictly increasing, got {values}")
    return values


def sweep(base: ScenarioConfig, axis: str, values: Sequence, workers: int | None = None) -> SweepResult:
    """Run ``base`` at every value of one axis with the same seed.

    Points that keep the element count share their fading draws (common
    random numbers); an ``n_elements`` sweep re-samples at each point.
    """
    return sweep_many([base], axis, values, workers)[0]


def sweep_many(
    bases: Sequence[ScenarioConfig], axis: str, values: Sequence, workers: int | None = None
) -> list[SweepResult]:
    """Sweep several base configs (one curve each) over the same axis values.

    Every point is bit-identical to ``run_scenario`` on that point alone;
    points with equal seed, trials and element count are simply evaluated
    on one shared set of draws.
    """
    values = _check_axis(axis, values)
    grid = [[base.with_axis(axis, v) for v in values] for base in bases]
    groups: dict[tuple, list[tuple[int, int]]] = {}
    for i, row in enumerate(grid):
        for j, cfg in enumerate(row):
            groups.setdefault((cfg.seed, cfg.trials, cfg.n_elements), []).append((i, j))
    results: dict[tuple[int, int], ScenarioResult] = {}
    for members in groups.values():
        for ij, res in zip(members, _run_shared([grid[i][j] for i, j in members], workers)):
            results[ij] = res
    return [
        SweepResult(axis, tuple(values), tuple(results[i, j] for j in range(len(values))))
        for i in range(len(bases))
    ]


def argbest(s: SweepResult, objective: str = "max-rate"):
    """Axis value with the best mean; ties go to the smaller axis value."""
    if not s.axis_values:
        raise ValueError("empty sweep result")
    if objective == "max-rate":
        scores = [-r.rate.mean for r in s.results]
    elif objective == "min-outage":
        scores = [r.outage.mean for r in s.results]
    else:
        raise ValueError(f"objective must be 'max-rate' or 'min-outage', got {objective!r}")
    order = sorted(range(len(scores)), key=lambda i: (scores[i], _axis_key(s.axis_values[i])))
    return s.axis_values[order[0]]
