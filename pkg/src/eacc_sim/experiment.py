"""Monte Carlo coincidence counting and mutual-information estimation.

Each (input state, projection) cell is an independent Poisson draw: the four
projections are acquired in separate, equally long windows. Conditional
probabilities are estimated by normalizing each input's four counts, and the
plug-in mutual information gets an error bar either from first-order
propagation of the Poisson variances or from a parametric Poisson bootstrap.

Random streams are derived from ``(seed, stream)`` through
``numpy.random.SeedSequence``, so a sweep point's counts do not depend on
which worker runs it or in what order.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .channels import LcTimingModel, check_probability, depolarize_qubit_a, effective_noise, timing_to_pexp, werner_input
from .information import (
    ConditionalTable,
    MutualInfoResult,
    eacc,
    mutual_information_gradient,
    mutual_information_uniform,
    mutual_information_uniform_batch,
)
from .quantum_core import BellState, apply_on_qubit_a, bell_measurement_probs

log = logging.getLogger(__name__)

DEFAULT_SEED = 20120601
DEFAULT_MEAN_COUNTS = 4000.0
ERROR_METHODS = ("delta", "bootstrap")

_COUNTS_KEY = 0
_BOOTSTRAP_KEY = 1


class EstimationError(ValueError):
    """Counts do not support an estimate (e.g. an input with no coincidences)."""


def make_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


@dataclass(frozen=True)
class ExperimentConfig:
    """One operating point of the experiment.

    ``p_exp`` may be given directly or as an ``LcTimingModel``; it is stored
    resolved to a probability. ``mean_counts_per_input`` is the expected
    number of coincidences summed over the four projections of one input.
    """

    visibility: float
    p_exp: Union[float, LcTimingModel]
    mean_counts_per_input: float = DEFAULT_MEAN_COUNTS
    seed: int = DEFAULT_SEED
    error_method: str = "delta"
    bootstrap_resamples: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "visibility", check_probability(self.visibility, "visibility"))
        p_exp = timing_to_pexp(self.p_exp) if isinstance(self.p_exp, LcTimingModel) else self.p_exp
        object.__setattr__(self, "p_exp", check_probability(p_exp, "p_exp"))
        if not (self.mean_counts_per_input > 0 and math.isfinite(self.mean_counts_per_input)):
            raise ValueError(f"mean_counts_per_input must be positive, got {self.mean_counts_per_input!r}")
        if self.error_method not in ERROR_METHODS:
            raise ValueError(f"error_method must be one of {ERROR_METHODS}, got {self.error_method!r}")
        if int(self.bootstrap_resamples) < 2:
            raise ValueError("bootstrap_resamples must be at least 2")

    @property
    def p_effective(self) -> float:
        return effective_noise(self.visibility, self.p_exp).p

    def as_dict(self) -> dict:
        return {
            "visibility": self.visibility,
            "p_exp": self.p_exp,
            "mean_counts_per_input": self.mean_counts_per_input,
            "seed": self.seed,
            "error_method": self.error_method,
            "bootstrap_resamples": self.bootstrap_resamples,
        }


@dataclass(frozen=True, eq=False)
class CountsTable:
    counts: np.ndarray
    config: ExperimentConfig
    stream: int = 0

    def __post_init__(self):
        c = np.array(self.counts)
        if c.shape != (4, 4):
            raise ValueError(f"counts table must be 4x4, got shape {c.shape}")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(c == np.round(c)):
                raise ValueError("counts must be integers")
            c = c.astype(np.int64)
        if c.min() < 0:
            raise ValueError("counts must be non-negative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def empty_rows(self) -> list[BellState]:
        return [BellState(i + 1) for i in np.flatnonzero(self.counts.sum(axis=1) == 0)]


@dataclass(frozen=True)
class SweepRecord:
    p_exp: float
    p_effective: float
    i_measured: float
    i_uncertainty: float
    capacity_theory: float
    error: Optional[str] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.error is None


def true_cell_probabilities(config: ExperimentConfig) -> ConditionalTable:
    """Exact p(y|x) from the density-matrix chain.

    Visibility-degraded singlet, encoding Pauli for x on qubit A, channel of
    strength ``p_exp`` on qubit A, then the Bell measurement.
    """
    shared = werner_input(config.visibility)
    rows = []
    for x in BellState:
        encoded = apply_on_qubit_a(shared, x.encoding_pauli)
        rows.append(bell_measurement_probs(depolarize_qubit_a(encoded, config.p_exp)))
    return ConditionalTable(np.array(rows))


def simulate_counts(config: ExperimentConfig, stream: int = 0) -> CountsTable:
    probs = true_cell_probabilities(config).entries
    rng = make_rng(config.seed, _COUNTS_KEY, stream)
    counts = rng.poisson(config.mean_counts_per_input * probs)
    return CountsTable(counts, config, stream)


def estimate_conditionals(counts: CountsTable) -> ConditionalTable:
    if counts.empty_rows:
        names = ", ".join(f"{b.label} (input {int(b)})" for b in counts.empty_rows)
        raise EstimationError(f"no coincidences recorded for {names}; p(y|x) undefined")
    c = counts.counts.astype(float)
    return ConditionalTable(c / c.sum(axis=1, keepdims=True))


def delta_sigma(counts: CountsTable) -> float:
    """First-order Poisson error on the plug-in mutual information.

    Each cell is treated as Poisson with variance equal to its count, and the
    derivative goes through both the cell and its row total.
    """
    table = estimate_conditionals(counts)
    n = counts.counts.astype(float)
    row_total = n.sum(axis=1, keepdims=True)
    g = mutual_information_gradient(table)
    centred = g - (table.entries * g).sum(axis=1, keepdims=True)
    dI_dN = centred / row_total
    return float(math.sqrt((n * dI_dN**2).sum()))


def expected_delta_sigma(table: ConditionalTable, mean_counts_per_input: float) -> float:
    """Delta-method error evaluated at the true probabilities.

    Scales exactly as ``mean_counts_per_input ** -0.5``.
    """
    q = table.entries
    g = mutual_information_gradient(table)
    centred = g - (q * g).sum(axis=1, keepdims=True)
    return float(math.sqrt((q * centred**2).sum() / mean_counts_per_input))


def mean_counts_for_sigma(table: ConditionalTable, target_sigma: float) -> float:
    """Counts per input giving an expected delta-method error of ``target_sigma``."""
    unit = expected_delta_sigma(table, 1.0)
    if unit == 0:
        raise ValueError("delta-method error vanishes at this operating point; cannot tune counts")
    return (unit / target_sigma) ** 2


def bootstrap_sigma(counts: CountsTable, resamples: int, rng: np.random.Generator) -> float:
    """Standard deviation of I over Poisson resamplings of every cell.

    Resamples that leave some input with no counts are dropped.
    """
    draws = rng.poisson(counts.counts.astype(float), size=(resamples, 4, 4))
    totals = draws.sum(axis=2, keepdims=True)
    valid = np.all(totals[..., 0] > 0, axis=1)
    if valid.sum() < 2:
        raise EstimationError("bootstrap produced fewer than two usable resamples")
    if not valid.all():
        log.debug("dropped %d bootstrap resamples with an empty row", int((~valid).sum()))
    tables = draws[valid] / totals[valid]
    return float(np.std(mutual_information_uniform_batch(tables), ddof=1))


def estimate_mutual_information(counts: CountsTable, method: Optional[str] = None) -> MutualInfoResult:
    """Plug-in mutual information of the counts with a one-sigma error.

    ``method`` defaults to the config's ``error_method``. No bias correction
    is applied; the plug-in estimate is biased upward by O(1/counts).
    """
    method = method or counts.config.error_method
    point = mutual_information_uniform(estimate_conditionals(counts)).bits
    if method == "delta":
        sigma = delta_sigma(counts)
    elif method == "bootstrap":
        rng = make_rng(counts.config.seed, _BOOTSTRAP_KEY, counts.stream)
        sigma = bootstrap_sigma(counts, int(counts.config.bootstrap_resamples), rng)
    else:
        raise ValueError(f"unknown error method {method!r}; expected one of {ERROR_METHODS}")
    return MutualInfoResult(point, sigma)


def run_point(config: ExperimentConfig, stream: int = 0) -> tuple[SweepRecord, CountsTable]:
    p_eff = config.p_effective
    capacity = eacc(p_eff)
    counts = simulate_counts(config, stream)
    try:
        result = estimate_mutual_information(counts)
    except EstimationError as exc:
        log.warning("sweep point p_exp=%g failed: %s", config.p_exp, exc)
        return SweepRecord(config.p_exp, p_eff, math.nan, math.nan, capacity, error=str(exc)), counts
    return SweepRecord(config.p_exp, p_eff, result.bits, result.uncertainty, capacity), counts


def run_sweep(configs: Sequence[ExperimentConfig], workers: int = 1) -> list[SweepRecord]:
    """Simulate and estimate every config; point i uses random stream i.

    Failed points are kept in place with NaN estimates and ``error`` set.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("sweep needs at least one configuration")
    jobs = list(enumerate(configs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: run_point(job[1], job[0]), jobs))
    else:
        results = [run_point(cfg, i) for i, cfg in jobs]
    return [rec for rec, _ in results]


def sweep_configs(
    visibility: float,
    p_exp_values: Sequence[float],
    mean_counts_per_input: float = DEFAULT_MEAN_COUNTS,
    seed: int = DEFAULT_SEED,
    error_method: str = "delta",
    bootstrap_resamples: int = 1000,
) -> list[ExperimentConfig]:
    return [
        ExperimentConfig(visibility, float(p), mean_counts_per_input, seed, error_method, bootstrap_resamples)
        for p in p_exp_values
    ]
