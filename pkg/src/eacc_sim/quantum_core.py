"""Two-qubit density matrices, Pauli algebra and Bell-basis measurement.

Qubit ordering is A (x) B, with A the photon that gets encoded and sent
through the noisy channel. Computational basis order is |00>, |01>, |10>, |11>.
Everything is dense 4x4 numpy; global phases never appear because only
density matrices are exposed.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

ATOL = 1e-12
PSD_SLACK = 1e-10


class PauliOp(enum.IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3


class BellState(enum.IntEnum):
    """The four Bell states, indexed 1..4 in measurement order.

    ``message`` is the 2-bit value whose encoding Pauli maps the shared
    singlet onto this state (00 -> identity, 01 -> Z, 10 -> X, 11 -> Y).
    """

    PSI_MINUS = 1
    PSI_PLUS = 2
    PHI_MINUS = 3
    PHI_PLUS = 4

    @property
    def label(self) -> str:
        return _BELL_LABELS[self]

    @property
    def message(self) -> int:
        return int(self) - 1

    @property
    def bits(self) -> str:
        return format(self.message, "02b")

    @property
    def encoding_pauli(self) -> PauliOp:
        return MESSAGE_TO_PAULI[self.message]


_BELL_LABELS = {
    BellState.PSI_MINUS: "ψ⁻",
    BellState.PSI_PLUS: "ψ⁺",
    BellState.PHI_MINUS: "φ⁻",
    BellState.PHI_PLUS: "φ⁺",
}

MESSAGE_TO_PAULI = {0b00: PauliOp.I, 0b01: PauliOp.Z, 0b10: PauliOp.X, 0b11: PauliOp.Y}

_PAULIS = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
for _m in _PAULIS:
    _m.setflags(write=False)

_S = 1 / np.sqrt(2)
_BELL_VECTORS = {
    BellState.PSI_MINUS: np.array([0, _S, -_S, 0], dtype=complex),
    BellState.PSI_PLUS: np.array([0, _S, _S, 0], dtype=complex),
    BellState.PHI_MINUS: np.array([_S, 0, 0, -_S], dtype=complex),
    BellState.PHI_PLUS: np.array([_S, 0, 0, _S], dtype=complex),
}


def pauli_matrix(op: PauliOp | int) -> np.ndarray:
    """Return the 2x2 Pauli matrix for index 0..3 (identity, X, Y, Z)."""
    return _PAULIS[PauliOp(op)]


def qubit_a_operator(op: PauliOp | int) -> np.ndarray:
    return np.kron(pauli_matrix(op), _PAULIS[0])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated, read-only 4x4 two-qubit density matrix.

    Construction checks Hermiticity and unit trace to ``ATOL`` and positive
    semidefiniteness to ``PSD_SLACK``; a ``ValueError`` names the failed
    condition.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix has non-finite entries")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > ATOL:
            raise ValueError(f"density matrix not Hermitian (max deviation {herm_err:.3g})")
        tr = np.trace(m)
        if abs(tr - 1) > ATOL:
            raise ValueError(f"density matrix trace is {tr.real:.15g}, expected 1")
        lam_min = np.linalg.eigvalsh(m).min()
        if lam_min < -PSD_SLACK:
            raise ValueError(f"density matrix not positive semidefinite (min eigenvalue {lam_min:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def allclose(self, other: DensityMatrix, atol: float = ATOL) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0, atol=atol))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def trace_distance(self, other: DensityMatrix) -> float:
        """Trace norm ||rho - sigma||_1 (sum of absolute eigenvalues)."""
        return float(np.abs(np.linalg.eigvalsh(self.matrix - other.matrix)).sum())


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(4) / 4)


def bell_density(state: BellState | int) -> DensityMatrix:
    psi = _BELL_VECTORS[BellState(state)]
    return DensityMatrix(np.outer(psi, psi.conj()))


def singlet() -> DensityMatrix:
    return bell_density(BellState.PSI_MINUS)


def apply_on_qubit_a(state: DensityMatrix, op: PauliOp | int) -> DensityMatrix:
    """Conjugate ``state`` by the Pauli ``op`` acting on qubit A only."""
    u = qubit_a_operator(op)
    return DensityMatrix(u @ state.matrix @ u.conj().T)


def _parse_message(message: int | str) -> int:
    if isinstance(message, str):
        if len(message) != 2 or set(message) - {"0", "1"}:
            raise ValueError(f"message must be a 2-bit string like '01', got {message!r}")
        return int(message, 2)
    if isinstance(message, (int, np.integer)) and 0 <= message <= 3:
        return int(message)
    raise ValueError(f"message must be in 0..3, got {message!r}")


def encode_message(message: int | str, shared: DensityMatrix | None = None) -> DensityMatrix:
    """Encode two classical bits onto the shared pair by a Pauli on qubit A.

    ``message`` may be an int 0..3 or a bit string ("00", "01", "10", "11").
    ``shared`` defaults to the pure singlet.
    """
    if shared is None:
        shared = singlet()
    return apply_on_qubit_a(shared, MESSAGE_TO_PAULI[_parse_message(message)])


def bell_projectors() -> np.ndarray:
    """Stack of the four Bell projectors, shape (4, 4, 4), in BellState order."""
    return np.stack([bell_density(b).matrix for b in BellState])


def bell_measurement_probs(state: DensityMatrix) -> np.ndarray:
    """Outcome probabilities trace(P_k rho) for the complete Bell measurement."""
    probs = np.real(np.einsum("kij,ji->k", bell_projectors(), state.matrix))
    # rounding can leave -1e-17 on an impossible outcome
    return np.clip(probs, 0.0, 1.0)


def identify_bell_state(state: DensityMatrix, atol: float = ATOL) -> BellState | None:
    """Return the Bell state equal to ``state`` entrywise, or None."""
    for b in BellState:
        if state.allclose(bell_density(b), atol=atol):
            return b
    return None
