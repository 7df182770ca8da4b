"""Index-space kernels for statevector manipulation.

Every hot loop of the brute-force protocol engine lands here: signed-permutation
application of Pauli strings, X-basis projectors, and the handful of expectation
values the spin Hamiltonian needs. Amplitude arrays are flat ``complex128`` of
length ``2**n``; qubit structure enters only through bit masks, so the kernels
are agnostic of any qubit-ordering convention.

Two interchangeable backends are provided:

* ``numba`` (default when importable): ``@njit``-compiled element loops.
* ``numpy``: vectorised gather/scatter fallback.

Set ``QET_NO_NUMBA=1`` in the environment to force the numpy path. The active
backend is reported in ``BACKEND``, and both implementations stay importable
through ``IMPLEMENTATIONS`` so tests and benchmarks can compare them.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "QET_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

if hasattr(np, "bitwise_count"):

    def popcount(idx):
        """Per-element popcount of a nonnegative integer array."""
        return np.bitwise_count(idx).astype(np.int64)

else:  # SWAR popcount for numpy < 2.0

    def popcount(idx):
        """Per-element popcount of a nonnegative integer array."""
        v = idx.astype(np.uint64)
        v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
        v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
        v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return ((v * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def _apply_pauli_signs_np(amps: np.ndarray, flip_mask: int, phase_mask: int) -> np.ndarray:
    """out[j] = (-1)**popcount((j ^ flip) & phase) * amps[j ^ flip]."""
    idx = np.arange(amps.shape[0], dtype=np.int64)
    src = idx ^ flip_mask
    signs = 1.0 - 2.0 * (popcount(src & phase_mask) & 1)
    return signs * amps[src]


def _project_x_np(amps: np.ndarray, qubit_mask: int, sign: int) -> np.ndarray:
    """Apply (1 + sign * X_qubit) / 2."""
    idx = np.arange(amps.shape[0], dtype=np.int64)
    return 0.5 * (amps + sign * amps[idx ^ qubit_mask])


def _norm_sq_np(amps: np.ndarray) -> float:
    return float(np.real(np.vdot(amps, amps)))


def _z_expectations_np(amps: np.ndarray, n_bits: int) -> np.ndarray:
    """Per-bit <Z> (bit value 0 counts as eigenvalue +1). Index b = bit b."""
    w = np.real(amps) ** 2 + np.imag(amps) ** 2
    total = w.sum()
    idx = np.arange(amps.shape[0], dtype=np.int64)
    out = np.empty(n_bits, dtype=np.float64)
    for b in range(n_bits):
        ones = w[(idx >> b) & 1 == 1].sum()
        out[b] = total - 2.0 * ones
    return out


def _diag_z_total_np(amps: np.ndarray, n_bits: int) -> float:
    """Sum over bits of <Z_b>, computed in one pass via popcounts."""
    w = np.real(amps) ** 2 + np.imag(amps) ** 2
    idx = np.arange(amps.shape[0], dtype=np.int64)
    return float(np.sum(w * (n_bits - 2 * popcount(idx))))


def _complement_overlap_np(amps: np.ndarray) -> complex:
    """<psi| FlipAll |psi> = sum_j conj(a[j]) a[all_ones ^ j]."""
    return complex(np.vdot(amps, amps[::-1]))


_NUMPY_IMPL = {
    "apply_pauli_signs": _apply_pauli_signs_np,
    "project_x": _project_x_np,
    "norm_sq": _norm_sq_np,
    "z_expectations": _z_expectations_np,
    "diag_z_total": _diag_z_total_np,
    "complement_overlap": _complement_overlap_np,
}

IMPLEMENTATIONS: dict[str, dict] = {"numpy": _NUMPY_IMPL}

# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - sandbox always ships numba
    _HAVE_NUMBA = False

if _HAVE_NUMBA:
    _njit = numba.njit(cache=True)

    @_njit
    def _parity_nb(v):
        # Parity of the set bits of v (v >= 0).
        p = 0
        while v:
            v &= v - 1
            p ^= 1
        return p

    @_njit
    def _popcount_nb(v):
        c = 0
        while v:
            v &= v - 1
            c += 1
        return c

    @_njit
    def _apply_pauli_signs_nb(amps, flip_mask, phase_mask):
        n = amps.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for j in range(n):
            src = j ^ flip_mask
            if _parity_nb(src & phase_mask):
                out[j] = -amps[src]
            else:
                out[j] = amps[src]
        return out

    @_njit
    def _project_x_nb(amps, qubit_mask, sign):
        n = amps.shape[0]
        out = np.empty(n, dtype=np.complex128)
        s = float(sign)
        for j in range(n):
            out[j] = 0.5 * (amps[j] + s * amps[j ^ qubit_mask])
        return out

    @_njit
    def _norm_sq_nb(amps):
        acc = 0.0
        for j in range(amps.shape[0]):
            a = amps[j]
            acc += a.real * a.real + a.imag * a.imag
        return acc

    @_njit
    def _z_expectations_nb(amps, n_bits):
        out = np.zeros(n_bits, dtype=np.float64)
        for j in range(amps.shape[0]):
            a = amps[j]
            w = a.real * a.real + a.imag * a.imag
            for b in range(n_bits):
                if (j >> b) & 1:
                    out[b] -= w
                else:
                    out[b] += w
        return out

    @_njit
    def _diag_z_total_nb(amps, n_bits):
        acc = 0.0
        for j in range(amps.shape[0]):
            a = amps[j]
            w = a.real * a.real + a.imag * a.imag
            acc += w * (n_bits - 2 * _popcount_nb(j))
        return acc

    @_njit
    def _complement_overlap_nb(amps):
        n = amps.shape[0]
        acc = 0.0 + 0.0j
        for j in range(n):
            acc += np.conj(amps[j]) * amps[n - 1 - j]
        return acc

    IMPLEMENTATIONS["numba"] = {
        "apply_pauli_signs": _apply_pauli_signs_nb,
        "project_x": _project_x_nb,
        "norm_sq": _norm_sq_nb,
        "z_expectations": _z_expectations_nb,
        "diag_z_total": _diag_z_total_nb,
        "complement_overlap": _complement_overlap_nb,
    }

# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

BACKEND = "numba" if (_HAVE_NUMBA and not _numba_disabled()) else "numpy"

_active = IMPLEMENTATIONS[BACKEND]
apply_pauli_signs = _active["apply_pauli_signs"]
project_x = _active["project_x"]
norm_sq = _active["norm_sq"]
z_expectations = _active["z_expectations"]
diag_z_total = _active["diag_z_total"]
complement_overlap = _active["complement_overlap"]
