"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line that pytest prints in an
"acceptance criteria" section at the end of the run. Tolerances and runtime
budgets are fixed here and are not tuned to results.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from eacc_sim.channels import depolarize_qubit_a, effective_noise, werner_input
from eacc_sim.experiment import (
    ExperimentConfig,
    estimate_mutual_information,
    mean_counts_for_sigma,
    run_sweep,
    simulate_counts,
    sweep_configs,
    true_cell_probabilities,
)
from eacc_sim.information import analytic_conditional, eacc, mutual_information_uniform
from eacc_sim.quantum_core import (
    ATOL,
    PSD_SLACK,
    BellState,
    PauliOp,
    apply_on_qubit_a,
    bell_density,
    bell_measurement_probs,
    encode_message,
    singlet,
)

NOMINAL_VISIBILITY = 0.94
REPORTED_I = 1.655
REPORTED_SIGMA = 0.014


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_capacity_endpoints():
    t0 = time.perf_counter()
    c0, c75, c1 = eacc(0.0), eacc(0.75), eacc(1.0)
    p = np.linspace(0.75, 1.0, 2501)
    rising = np.all(np.diff([eacc(x) for x in p]) > 0)
    elapsed = time.perf_counter() - t0
    ok = c0 == 2.0 and abs(c75) < 1e-12 and rising and abs(c1 - (2 - math.log2(3))) < 1e-12 and elapsed < 0.1
    report(1, "capacity endpoints", ok,
           f"C(0)={c0!r}, C(0.75)={c75:.3g}, increasing on (0.75,1]={rising}, C(1)={c1:.12f}, {elapsed * 1e3:.1f} ms")


def test_2_closed_form_equals_pipeline():
    t0 = time.perf_counter()
    grid = np.linspace(0, 1, 101)
    mi_dev = pipe_dev = 0.0
    for p in grid:
        table = analytic_conditional(p)
        mi_dev = max(mi_dev, abs(mutual_information_uniform(table).bits - eacc(p)))
        pipeline = np.array([bell_measurement_probs(depolarize_qubit_a(encode_message(x), p)) for x in range(4)])
        pipe_dev = max(pipe_dev, np.abs(pipeline - table.entries).max())
    elapsed = time.perf_counter() - t0
    ok = mi_dev < 1e-12 and pipe_dev < 1e-12 and elapsed < 1.0
    report(2, "closed form vs mutual-information and density-matrix pipeline", ok,
           f"max |I - C| = {mi_dev:.2e}, max table deviation = {pipe_dev:.2e} over 101 p, {elapsed:.2f} s")


def test_3_composition_law():
    t0 = time.perf_counter()
    grid = np.linspace(0, 1, 11)
    worst = 0.0
    for v in grid:
        for p_exp in grid:
            seq = depolarize_qubit_a(werner_input(v), p_exp)
            single = depolarize_qubit_a(singlet(), effective_noise(v, p_exp))
            worst = max(worst, seq.trace_distance(single))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 1.0
    report(3, "noise composition law", ok, f"max trace-norm deviation {worst:.2e} on 11x11 grid, {elapsed:.2f} s")


def test_4_headline_reproduction():
    t0 = time.perf_counter()
    analytic = eacc(effective_noise(NOMINAL_VISIBILITY, 0.0).p)
    cfg0 = ExperimentConfig(NOMINAL_VISIBILITY, 0.0)
    mean = mean_counts_for_sigma(true_cell_probabilities(cfg0), REPORTED_SIGMA)
    res = estimate_mutual_information(simulate_counts(ExperimentConfig(NOMINAL_VISIBILITY, 0.0, mean_counts_per_input=mean)))
    elapsed = time.perf_counter() - t0
    in_2sigma = abs(res.bits - analytic) <= 2 * res.uncertainty
    sigma_matched = abs(res.uncertainty - REPORTED_SIGMA) / REPORTED_SIGMA < 0.1
    reported_consistent = abs(REPORTED_I - analytic) <= REPORTED_SIGMA
    ok = abs(analytic - 1.664) < 5e-4 and in_2sigma and sigma_matched and reported_consistent and elapsed < 10
    report(4, "headline point v=0.94, p_exp=0", ok,
           f"analytic {analytic:.4f}; simulated {res.bits:.4f} ± {res.uncertainty:.4f} at {mean:.0f} counts/input "
           f"(2σ contains analytic: {in_2sigma}); reported {REPORTED_I} ± {REPORTED_SIGMA} within 1σ: {reported_consistent}")


def test_5_sweep_reproduction():
    t0 = time.perf_counter()
    recs = run_sweep(sweep_configs(NOMINAL_VISIBILITY, np.linspace(0, 1, 21)))
    elapsed = time.perf_counter() - t0
    z = np.array([abs(r.i_measured - r.capacity_theory) / r.i_uncertainty for r in recs])
    i = np.array([r.i_measured for r in recs])
    k = int(np.argmin([abs(r.p_effective - 0.75) for r in recs]))
    near_zero = abs(recs[k].p_effective - 0.75) < 1e-9 and i[k] < 0.01
    rising = bool(np.all(np.diff(i[k:]) > 0))
    ok = bool(np.all(z < 3)) and near_zero and rising and all(r.ok for r in recs) and elapsed < 10
    report(5, "21-point sweep at v=0.94", ok,
           f"max |I - C|/σ = {z.max():.2f}, I = {i[k]:.4f} at p_eff = {recs[k].p_effective:.3f}, "
           f"rising beyond: {rising}, {elapsed:.2f} s")


def test_6_error_model():
    t0 = time.perf_counter()
    means = np.logspace(2, 6, 9)
    sigmas = [
        estimate_mutual_information(simulate_counts(ExperimentConfig(NOMINAL_VISIBILITY, 0.0, mean_counts_per_input=m))).uncertainty
        for m in means
    ]
    slope = np.polyfit(np.log(means), np.log(sigmas), 1)[0]
    counts = simulate_counts(ExperimentConfig(NOMINAL_VISIBILITY, 0.0, mean_counts_per_input=1e4))
    d = estimate_mutual_information(counts, "delta").uncertainty
    b = estimate_mutual_information(counts, "bootstrap").uncertainty
    rel = abs(b - d) / d
    elapsed = time.perf_counter() - t0
    ok = abs(slope + 0.5) <= 0.1 and rel < 0.2 and elapsed < 30
    report(6, "error model", ok,
           f"log-log slope {slope:.3f} over 1e2..1e6 counts; delta {d:.5f} vs bootstrap {b:.5f} "
           f"({rel:.1%} apart) at 1e4, {elapsed:.2f} s")


def _is_valid_state(m):
    return (
        np.abs(m - m.conj().T).max() <= ATOL
        and abs(np.trace(m) - 1) <= ATOL
        and np.linalg.eigvalsh(m).min() >= -PSD_SLACK
    )


def test_7_structural_invariants():
    t0 = time.perf_counter()
    mapped = 0
    for x in BellState:
        for op in PauliOp:
            out = apply_on_qubit_a(bell_density(x), op)
            hits = [y for y in BellState if np.abs(out.matrix - bell_density(y).matrix).max() < 1e-12]
            mapped += len(hits) == 1
    checked = valid = 0
    rng = np.random.default_rng(0)
    for v in np.linspace(0, 1, 6):
        for p in np.linspace(0, 1, 6):
            for state in (werner_input(v), apply_on_qubit_a(werner_input(v), int(rng.integers(4)))):
                out = depolarize_qubit_a(state, p)
                checked += 1
                valid += _is_valid_state(out.matrix)
    elapsed = time.perf_counter() - t0
    ok = mapped == 16 and valid == checked and elapsed < 1.0
    report(7, "structural invariants", ok,
           f"{mapped}/16 (state, Pauli) pairs map to one Bell state; {valid}/{checked} channel outputs valid, {elapsed:.2f} s")


@pytest.mark.parametrize("seed", ["20120601", "7"])
def test_8_determinism(seed, tmp_path):
    outputs = []
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "eacc_sim", "--seed", seed, "sweep", "--grid", "0:1:21", "--format", "csv"],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(proc.stdout)
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    report(8, f"determinism (seed {seed})", ok, f"two separate runs produced {'identical' if ok else 'different'} CSV bytes")
