"""Dense and structured linear algebra for N-qubit statevectors.

This is the substrate of the brute-force engine: statevectors as flat
complex arrays, Pauli strings applied as signed permutations (no matrix is
ever materialized for them), dense Hamiltonian assembly for small N, and two
independent ground-state solvers:

* ``dense``: full-matrix Hermitian eigensolve, capped at N = 12;
* ``block``: the interaction couples each basis state only to its bitwise
  complement, so the Hamiltonian splits into 2x2 blocks labelled by the
  magnetization sector; enumerating the sectors gives the exact spectrum
  floor for N up to 30.

Qubit convention (shared with ``model``): qubit 1 is the most significant
bit; bit value 0 is the Z eigenvalue +1 state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernels
from .errors import DimensionMismatch, NonHermitian, OracleCapExceeded
from .model import (
    DEFAULT_ORACLE_CAP,
    ModelParams,
    ground_state_amplitudes,
    interaction_constant,
    local_constant,
    qubit_bit,
    qubit_mask,
)

#: Sector enumeration works to N = 30; beyond that nothing here is exact.
BLOCK_CAP = 30
#: Largest N for which the block solver will materialize a 2**N amplitude array.
BLOCK_STATE_CAP = 26

_HERMITIAN_ATOL = 1e-12
_IMAG_ATOL = 1e-10


@dataclass
class StateVector:
    """A 2**n complex amplitude array with the package's qubit convention."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise DimensionMismatch(
                f"expected {1 << self.n_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}")

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def ground_state(cls, params: ModelParams) -> "StateVector":
        """The analytic two-amplitude ground state as a dense vector."""
        g = ground_state_amplitudes(params)
        amps = np.zeros(1 << params.n_qubits, dtype=np.complex128)
        amps[0] = g.a_all_zero
        amps[-1] = g.a_all_one
        return cls(params.n_qubits, amps)

    def norm_sq(self) -> float:
        return kernels.norm_sq(self.amplitudes)

    def normalized(self) -> "StateVector":
        n = math.sqrt(self.norm_sq())
        return StateVector(self.n_qubits, self.amplitudes / n)

    def overlap(self, other: "StateVector") -> complex:
        if other.n_qubits != self.n_qubits:
            raise DimensionMismatch("qubit counts differ")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())


_LETTERS = frozenset("IXYZ")


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis with a scalar coefficient.

    ``letters[i]`` acts on qubit i+1. Application is a signed permutation of
    basis indices: X and Y flip the qubit's bit, Z and Y contribute a sign
    from the source bit, and each Y contributes one global factor of i.
    """

    letters: str
    coefficient: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not set(self.letters) <= _LETTERS:
            raise ValueError(f"letters must be drawn from IXYZ, got {self.letters!r}")

    @classmethod
    def from_sites(cls, n_qubits: int, sites: dict[int, str],
                   coefficient: complex = 1.0 + 0.0j) -> "PauliString":
        """Identity everywhere except the given 1-based qubit -> letter map."""
        letters = ["I"] * n_qubits
        for q, letter in sites.items():
            letters[q - 1] = letter
        return cls("".join(letters), coefficient)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def flip_mask(self) -> int:
        return qubit_mask(self.n_qubits,
                          (i + 1 for i, s in enumerate(self.letters) if s in "XY"))

    @property
    def phase_mask(self) -> int:
        return qubit_mask(self.n_qubits,
                          (i + 1 for i, s in enumerate(self.letters) if s in "ZY"))

    @property
    def n_y(self) -> int:
        return self.letters.count("Y")


def apply_pauli_string(state: StateVector, p: PauliString) -> StateVector:
    """Return p|psi> without materializing a matrix; O(2**n)."""
    if p.n_qubits != state.n_qubits:
        raise DimensionMismatch(
            f"Pauli string on {p.n_qubits} qubits vs state on {state.n_qubits}")
    scalar = p.coefficient * (1j ** (p.n_y % 4))
    out = kernels.apply_pauli_signs(state.amplitudes, p.flip_mask, p.phase_mask)
    return StateVector(state.n_qubits, scalar * out)


# ---------------------------------------------------------------------------
# Dense operators
# ---------------------------------------------------------------------------

def _check_cap(n_qubits: int, cap: int):
    if n_qubits > cap:
        raise OracleCapExceeded(
            f"N={n_qubits} exceeds the dense-operator cap of {cap} qubits")


def _z_values(n_qubits: int, qubit: int) -> np.ndarray:
    """Diagonal of Z on one qubit over all 2**n basis indices."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    return 1.0 - 2.0 * ((idx >> qubit_bit(n_qubits, qubit)) & 1)


def qubit_term(params: ModelParams, qubit: int,
               oracle_cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Dense matrix of the single-qubit term h Z_j + N h^2 / c."""
    _check_cap(params.n_qubits, oracle_cap)
    diag = params.h * _z_values(params.n_qubits, qubit) + local_constant(params)
    return np.diag(diag).astype(np.complex128)


def interaction_term(params: ModelParams,
                     oracle_cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Dense matrix of 2k X_1 ... X_N + 4 k^2 / c (anti-diagonal plus constant)."""
    _check_cap(params.n_qubits, oracle_cap)
    dim = 1 << params.n_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    np.fill_diagonal(mat[:, ::-1], 2.0 * params.k)
    mat[np.diag_indices(dim)] += interaction_constant(params)
    return mat


def build_hamiltonian(params: ModelParams,
                      oracle_cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Assemble the full Hamiltonian: diagonal field part plus anti-diagonal flip.

    The additive constants of the individual terms sum to exactly c, so
    H = diag(h * sum_j Z_j + c) + 2k * FlipAll.
    """
    _check_cap(params.n_qubits, oracle_cap)
    n = params.n_qubits
    idx = np.arange(1 << n, dtype=np.int64)
    zsum = n - 2 * kernels.popcount(idx)
    mat = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    np.fill_diagonal(mat[:, ::-1], 2.0 * params.k)
    mat[np.diag_indices(1 << n)] += params.h * zsum + params.c
    return mat


def _check_hermitian(op: np.ndarray):
    scale = max(1.0, float(np.max(np.abs(op)))) if op.size else 1.0
    dev = float(np.max(np.abs(op - op.conj().T)))
    if dev > _HERMITIAN_ATOL * scale:
        raise NonHermitian(f"operator deviates from Hermitian by {dev:g}")


def expectation(state: StateVector, op) -> float:
    """Real expectation value <psi|O|psi>.

    ``op`` may be a dense square array, a ``PauliString``, or a sequence of
    ``PauliString`` (summed). The imaginary part must vanish to 1e-10.
    """
    if isinstance(op, np.ndarray):
        dim = 1 << state.n_qubits
        if op.shape != (dim, dim):
            raise DimensionMismatch(f"operator shape {op.shape}, state dim {dim}")
        _check_hermitian(op)
        val = complex(np.vdot(state.amplitudes, op @ state.amplitudes))
    else:
        terms = [op] if isinstance(op, PauliString) else list(op)
        val = 0.0 + 0.0j
        for p in terms:
            val += state.overlap(apply_pauli_string(state, p))
    if abs(val.imag) > _IMAG_ATOL:
        raise NonHermitian(f"expectation has imaginary part {val.imag:g}")
    return val.real


# ---------------------------------------------------------------------------
# Structured expectations (used per-branch by the protocol engine)
# ---------------------------------------------------------------------------

def site_z_expectations(state: StateVector) -> np.ndarray:
    """<Z_j> for every qubit; entry j-1 belongs to qubit j."""
    per_bit = kernels.z_expectations(state.amplitudes, state.n_qubits)
    return per_bit[::-1].copy()


def flip_all_expectation(state: StateVector) -> float:
    """<X_1 X_2 ... X_N>; real for every state reachable in this protocol."""
    val = kernels.complement_overlap(state.amplitudes)
    if abs(val.imag) > _IMAG_ATOL:
        raise NonHermitian(f"flip-all expectation has imaginary part {val.imag:g}")
    return val.real


def site_energy(state: StateVector, params: ModelParams, qubit: int) -> float:
    """<H_j> = h <Z_j> + N h^2 / c for one qubit."""
    z = site_z_expectations(state)[qubit - 1]
    return params.h * z + local_constant(params)


def interaction_energy(state: StateVector, params: ModelParams) -> float:
    """<V> = 2k <X...X> + 4 k^2 / c."""
    return 2.0 * params.k * flip_all_expectation(state) + interaction_constant(params)


def total_energy(state: StateVector, params: ModelParams) -> float:
    """<H> via the diagonal field sum plus the flip term; no matrix involved."""
    zsum = kernels.diag_z_total(state.amplitudes, state.n_qubits)
    flip = flip_all_expectation(state)
    return params.h * zsum + 2.0 * params.k * flip + params.c


# ---------------------------------------------------------------------------
# Ground-state solvers
# ---------------------------------------------------------------------------

def _dense_ground_state(params: ModelParams, oracle_cap: int):
    _check_cap(params.n_qubits, oracle_cap)
    ham = build_hamiltonian(params, oracle_cap=oracle_cap)
    # The Hamiltonian is real; hand LAPACK the real symmetric view when it is.
    mat = ham.real if not np.any(ham.imag) else ham
    w, v = scipy.linalg.eigh(mat, subset_by_index=[0, 0])
    vec = np.asarray(v[:, 0], dtype=np.complex128)
    return float(w[0]), StateVector(params.n_qubits, vec)


def _block_ground_state(params: ModelParams, with_state: bool):
    n = params.n_qubits
    if n > BLOCK_CAP:
        raise OracleCapExceeded(f"block solver supports N <= {BLOCK_CAP}, got {n}")
    c, h, k = params.c, params.h, params.k
    best = None
    for n_ones in range(n + 1):
        s = n - 2 * n_ones
        block = np.array([[c + s * h, 2.0 * k], [2.0 * k, c - s * h]])
        lo = float(np.linalg.eigvalsh(block)[0])
        if best is None or lo < best[0]:
            best = (lo, n_ones)
    energy, n_ones = best
    if not with_state:
        return energy, None
    if n > BLOCK_STATE_CAP:
        raise OracleCapExceeded(
            f"materializing 2**{n} amplitudes is off (cap {BLOCK_STATE_CAP}); "
            "call with with_state=False for the energy alone")
    # The floor sits in the {|00...0>, |11...1>} pair block.
    s = n - 2 * n_ones
    block = np.array([[c + s * h, 2.0 * k], [2.0 * k, c - s * h]])
    _, v = np.linalg.eigh(block)
    pair = v[:, 0]
    if pair[1] > 0:  # sign convention: amplitude on the all-ones state <= 0
        pair = -pair
    rep = ((1 << n_ones) - 1) << (n - n_ones)  # n_ones most significant bits set
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[rep] = pair[0]
    amps[(1 << n) - 1 - rep] = pair[1]
    return energy, StateVector(n, amps)


def exact_ground_state(params: ModelParams, method: str = "dense", *,
                       with_state: bool = True,
                       oracle_cap: int = DEFAULT_ORACLE_CAP):
    """Lowest eigenpair of the Hamiltonian.

    ``dense`` diagonalizes the full matrix (N capped by ``oracle_cap``);
    ``block`` enumerates the 2x2 complement-pair sectors and is exact for
    N <= 30, returning a materialized statevector only for N <= 26.
    Returns ``(energy, StateVector | None)``.
    """
    if method == "dense":
        energy, state = _dense_ground_state(params, oracle_cap)
        return (energy, state) if with_state else (energy, None)
    if method == "block":
        return _block_ground_state(params, with_state)
    raise ValueError(f"unknown method {method!r}; use 'dense' or 'block'")
