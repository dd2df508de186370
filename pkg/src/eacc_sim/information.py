"""Capacity formula and classical mutual information over the Bell alphabet.

All logarithms are base 2 and 0 log 0 is taken as 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import check_probability

ROW_TOL = 1e-9
MAX_BITS = 2.0
UNIFORM_PRIOR = np.full(4, 0.25)


def _xlog2y(x: float, y: float) -> float:
    return 0.0 if x == 0 else x * math.log2(y)


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """4x4 table of p(y|x): row = transmitted Bell state, column = detected one."""

    entries: np.ndarray

    def __post_init__(self):
        t = np.array(self.entries, dtype=float)
        if t.shape != (4, 4):
            raise ValueError(f"conditional table must be 4x4, got shape {t.shape}")
        if not np.all(np.isfinite(t)) or t.min() < 0 or t.max() > 1:
            raise ValueError("conditional table entries must be finite and lie in [0, 1]")
        row_err = np.abs(t.sum(axis=1) - 1)
        if row_err.max() > ROW_TOL:
            bad = int(row_err.argmax()) + 1
            raise ValueError(f"row {bad} of conditional table sums to {t[bad - 1].sum()!r}, not 1")
        t.setflags(write=False)
        object.__setattr__(self, "entries", t)

    def allclose(self, other: ConditionalTable, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, other.entries, rtol=0, atol=atol))


@dataclass(frozen=True)
class MutualInfoResult:
    bits: float
    uncertainty: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "bits", float(self.bits))
        if self.uncertainty is not None:
            object.__setattr__(self, "uncertainty", float(self.uncertainty))
        if not (0.0 <= self.bits <= MAX_BITS):
            raise ValueError(f"mutual information {self.bits!r} outside [0, 2] bits")
        if self.uncertainty is not None and not self.uncertainty >= 0:
            raise ValueError(f"uncertainty must be non-negative, got {self.uncertainty!r}")


def eacc(p: float) -> float:
    """Entanglement-assisted classical capacity of the qubit depolarizing channel, in bits."""
    p = check_probability(p)
    return 2.0 + _xlog2y(1 - p, 1 - p) + _xlog2y(p, p / 3)


def analytic_conditional(p: float) -> ConditionalTable:
    """p(y|x) for a depolarized Bell input: 1-p on the diagonal, p/3 elsewhere."""
    p = check_probability(p)
    t = np.full((4, 4), p / 3)
    np.fill_diagonal(t, 1 - p)
    return ConditionalTable(t)


def _clamp_bits(value: float) -> float:
    # float summation can leave I a few ulps outside [0, 2]
    if -1e-12 < value < 0:
        return 0.0
    if MAX_BITS < value < MAX_BITS + 1e-12:
        return MAX_BITS
    return value


def mutual_information(table: ConditionalTable, prior) -> MutualInfoResult:
    """I(X;Y) in bits for input distribution ``prior`` and channel ``table``."""
    if not isinstance(table, ConditionalTable):
        table = ConditionalTable(table)
    prior = np.asarray(prior, dtype=float)
    if prior.shape != (4,) or prior.min() < 0 or abs(prior.sum() - 1) > ROW_TOL:
        raise ValueError(f"prior must be a length-4 probability vector, got {prior!r}")
    t = table.entries
    p_out = prior @ t
    total = 0.0
    for x in range(4):
        if prior[x] == 0:
            continue
        for y in range(4):
            pyx = t[x, y]
            if pyx == 0:
                continue
            if p_out[y] == 0:
                raise RuntimeError(f"output {y + 1} has zero marginal but p(y|x)={pyx} for input {x + 1}")
            total += prior[x] * pyx * math.log2(pyx / p_out[y])
    return MutualInfoResult(_clamp_bits(total))


def mutual_information_uniform(table: ConditionalTable) -> MutualInfoResult:
    return mutual_information(table, UNIFORM_PRIOR)


def mutual_information_uniform_batch(tables: np.ndarray) -> np.ndarray:
    """Uniform-prior mutual information for a stack of tables, shape (..., 4, 4)."""
    t = np.asarray(tables, dtype=float)
    p_out = t.mean(axis=-2, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(t > 0, t * np.log2(t / p_out), 0.0)
    return np.clip(terms.sum(axis=(-2, -1)) / 4, 0.0, MAX_BITS)


def mutual_information_gradient(table: ConditionalTable) -> np.ndarray:
    """dI/dp(y|x) for the uniform prior, 0 on zero cells.

    The terms from differentiating the output marginal cancel, leaving
    (1/4) log2(p(y|x) / p_out(y)).
    """
    t = table.entries
    p_out = t.mean(axis=0)
    grad = np.zeros((4, 4))
    nz = t > 0
    grad[nz] = 0.25 * np.log2(t[nz] / np.broadcast_to(p_out, (4, 4))[nz])
    return grad


def entropy_bits(prob) -> float:
    prob = np.asarray(prob, dtype=float)
    nz = prob[prob > 0]
    return float(-(nz * np.log2(nz)).sum())
