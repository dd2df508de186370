"""Analytic-versus-density-matrix consistency checks behind ``eacc-sim verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels, information, quantum_core
from .quantum_core import BellState, PauliOp

TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    worst_at: str
    tol: float = TOL

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation < self.tol)


def _worst(name, deviations):
    """Reduce (label, deviation) pairs to the largest deviation.

    NaN deviations count as infinitely bad.
    """
    worst_label, worst = "", -1.0
    for label, dev in deviations:
        dev = float("inf") if np.isnan(dev) else float(dev)
        if dev > worst:
            worst_label, worst = label, dev
    return CheckResult(name, worst, worst_label)


def check_capacity_endpoints() -> CheckResult:
    return _worst(
        "capacity_endpoints",
        [
            ("p=0", abs(information.eacc(0.0) - 2.0)),
            ("p=0.75", abs(information.eacc(0.75))),
            ("p=1", abs(information.eacc(1.0) - (2 - np.log2(3)))),
        ],
    )


def check_capacity_vs_mutual_information(grid: np.ndarray) -> CheckResult:
    devs = []
    for p in grid:
        mi = information.mutual_information_uniform(information.analytic_conditional(p)).bits
        devs.append((f"p={p:.6g}", abs(mi - information.eacc(p))))
    return _worst("capacity_vs_mutual_information", devs)


def density_matrix_conditional(p: float) -> np.ndarray:
    """p(y|x) from encode -> depolarize -> Bell projection on the pure singlet."""
    rows = []
    for x in BellState:
        encoded = quantum_core.encode_message(x.message)
        noisy = channels.depolarize_qubit_a(encoded, channels.DepolarizingParams(p))
        rows.append(quantum_core.bell_measurement_probs(noisy))
    return np.array(rows)


def check_analytic_vs_density_matrix(grid: np.ndarray) -> CheckResult:
    devs = []
    for p in grid:
        analytic = information.analytic_conditional(p).entries
        devs.append((f"p={p:.6g}", np.abs(density_matrix_conditional(p) - analytic).max()))
    return _worst("analytic_vs_density_matrix", devs)


def composition_deviation(v: float, p_exp: float) -> float:
    sequential = channels.depolarize_qubit_a(channels.werner_input(v), channels.DepolarizingParams(p_exp))
    single = channels.depolarize_qubit_a(quantum_core.singlet(), channels.effective_noise(v, p_exp))
    return sequential.trace_distance(single)


def check_composition_law(grid: np.ndarray) -> CheckResult:
    devs = [(f"v={v:.6g}, p_exp={p:.6g}", composition_deviation(v, p)) for v in grid for p in grid]
    return _worst("composition_law", devs)


def check_bell_permutation() -> CheckResult:
    """Every one-sided Pauli maps each Bell state onto exactly one Bell state."""
    devs = []
    for x in BellState:
        rho = quantum_core.bell_density(x)
        for op in PauliOp:
            out = quantum_core.apply_on_qubit_a(rho, op)
            dists = [np.abs(out.matrix - quantum_core.bell_density(y).matrix).max() for y in BellState]
            dists.sort()
            # closest must match, the rest must be far
            dev = dists[0] if dists[1] > 0.25 else float("inf")
            devs.append((f"{x.label} with {op.name}", dev))
    return _worst("bell_permutation", devs)


def run_checks(grid_points: int = 21) -> list[CheckResult]:
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    grid = np.linspace(0.0, 1.0, grid_points)
    return [
        check_capacity_endpoints(),
        check_capacity_vs_mutual_information(grid),
        check_analytic_vs_density_matrix(grid),
        check_composition_law(grid),
        check_bell_permutation(),
    ]
