"""Depolarizing channel on qubit A, visibility-degraded inputs and noise bookkeeping."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantum_core import DensityMatrix, PauliOp, qubit_a_operator, singlet


def check_probability(value: float, name: str = "p") -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class DepolarizingParams:
    """Total error probability ``p``; identity weight 1-p, each Pauli p/3."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", check_probability(self.p, "p"))

    @property
    def weights(self) -> tuple[float, float, float, float]:
        e = self.p / 3
        return (1.0 - self.p, e, e, e)


@dataclass(frozen=True)
class PauliChannelParams:
    """General one-qubit Pauli channel weights (p_I, p_X, p_Y, p_Z).

    Not used by the experiment pipeline, which only covers the isotropic case.
    """

    weights: tuple[float, float, float, float]

    def __post_init__(self):
        w = tuple(check_probability(x, "weight") for x in self.weights)
        if len(w) != 4 or abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"Pauli channel needs 4 weights summing to 1, got {self.weights!r}")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class LcTimingModel:
    """Liquid-crystal switching cycle of period ``T``.

    ``t1``, ``t2``, ``t3`` are the activation windows of X, Y and Z within
    one cycle. Only equal windows give a depolarizing channel.
    """

    t1: float
    t2: float
    t3: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"cycle period T must be positive, got {self.T!r}")
        if min(self.t1, self.t2, self.t3) < 0:
            raise ValueError("activation times must be non-negative")

    @property
    def delta(self) -> float:
        return self.t1 + self.t2 + self.t3

    @property
    def is_isotropic(self) -> bool:
        return math.isclose(self.t1, self.t2, rel_tol=1e-12, abs_tol=1e-15) and math.isclose(
            self.t2, self.t3, rel_tol=1e-12, abs_tol=1e-15
        )


def pauli_channel_qubit_a(state: DensityMatrix, params: PauliChannelParams) -> DensityMatrix:
    rho = state.matrix
    out = np.zeros((4, 4), dtype=complex)
    for op, w in zip(PauliOp, params.weights):
        if w:
            u = qubit_a_operator(op)
            out += w * (u @ rho @ u.conj().T)
    return DensityMatrix(out)


def depolarize_qubit_a(state: DensityMatrix, params: DepolarizingParams | float) -> DensityMatrix:
    """Apply the depolarizing channel to qubit A as an explicit Kraus sum."""
    if not isinstance(params, DepolarizingParams):
        params = DepolarizingParams(params)
    return pauli_channel_qubit_a(state, PauliChannelParams(params.weights))


def werner_input(visibility: float) -> DensityMatrix:
    """Singlet mixed with white noise: v |psi-><psi-| + (1 - v) I/4."""
    v = check_probability(visibility, "visibility")
    return DensityMatrix(v * singlet().matrix + (1 - v) * np.eye(4) / 4)


def residual_noise(visibility: float) -> DepolarizingParams:
    """Depolarizing strength that turns the pure singlet into ``werner_input(v)``."""
    v = check_probability(visibility, "visibility")
    return DepolarizingParams(3 * (1 - v) / 4)


def effective_noise(visibility: float, p_exp: float) -> DepolarizingParams:
    """Single channel equivalent to residual noise followed by a channel of strength ``p_exp``."""
    v = check_probability(visibility, "visibility")
    p_exp = check_probability(p_exp, "p_exp")
    p = v * p_exp + residual_noise(v).p
    # exact for v, p_exp in [0, 1]; a failure here is a bug, not bad input
    assert 0.0 <= p <= 1.0, p
    return DepolarizingParams(p)


def timing_to_pexp(model: LcTimingModel) -> float:
    """Fraction of the cycle during which some Pauli is active."""
    if not model.is_isotropic:
        raise ValueError(
            f"unequal activation times ({model.t1}, {model.t2}, {model.t3}) "
            "do not define a depolarizing channel"
        )
    if model.delta > model.T * (1 + 1e-12):
        raise ValueError(f"total activation {model.delta} exceeds the cycle period {model.T}")
    return min(model.delta / model.T, 1.0)
