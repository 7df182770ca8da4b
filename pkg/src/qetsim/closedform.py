"""Closed-form protocol quantities.

For a partition into N - m measured qubits and m outputs, everything reduces
to two nonnegative coefficients

    A = N m h^2 + 4 k^2      (restoring-force weight of the rotation)
    B = 2 (N - m) h k        (work term unlocked by the measurement record)

and the energy scale c = sqrt(N^2 h^2 + 4 k^2):

    E_in          = (N - m) N h^2 / c
    E_out(theta)  = [B sin 2theta - A (1 - cos 2theta)] / c
    E_out(max)    = (sqrt(A^2 + B^2) - A) / c      at  tan 2theta = B / A
    eta           = E_out(max) / E_in

The sqrt(A^2+B^2) - A difference is evaluated cancellation-free when B << A,
which keeps the strong-coupling tail (k/h up to 1e8 and beyond) smooth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams, Partition

#: Below this B/A the difference form sqrt(1+r^2)-1 cancels digits; use the
#: quotient form there and the overflow-safe hypot form above.
STABLE_R_THRESHOLD = 1.0


@dataclass(frozen=True)
class ThetaChoice:
    """Rotation angle with its doubled-angle cosine and sine.

    Both components are nonnegative, so theta lies in [0, pi/4].
    """

    theta: float
    cos_2theta: float
    sin_2theta: float

    @classmethod
    def from_components(cls, a: float, b: float) -> "ThetaChoice":
        """Normalize (a, b) >= 0 onto the unit circle; theta = atan2(b, a) / 2."""
        d = math.hypot(a, b)
        if d == 0.0:
            return cls(0.0, 1.0, 0.0)
        cos2t = a / d
        sin2t = b / d
        return cls(0.5 * math.atan2(sin2t, cos2t), cos2t, sin2t)


@dataclass(frozen=True)
class ClosedFormReport:
    """Injected energy, best extractable energy, optimal angle, efficiency."""

    e_in: float
    e_out_max: float
    theta_opt: ThetaChoice
    eta: float


def _coefficients(params: ModelParams, part: Partition) -> tuple[float, float]:
    """(A, B) for the given partition; depends only on N and m."""
    n = params.n_qubits
    m = part.m_outputs
    a = n * m * params.h * params.h + 4.0 * params.k * params.k
    b = 2.0 * (n - m) * params.h * params.k
    return a, b


def input_energy(params: ModelParams, part: Partition) -> float:
    """Total measurement energy deposited on the N - m input qubits."""
    n = params.n_qubits
    return (n - part.m_outputs) * n * params.h * params.h / params.c


def output_energy_at_theta(params: ModelParams, part: Partition, theta: float) -> float:
    """Extracted energy for an arbitrary rotation angle (negative if theta is poor).

    1 - cos(2 theta) is written as 2 sin(theta)^2, which matters near the tiny
    optimal angles of the strong-coupling regime where the difference form
    cancels.
    """
    a, b = _coefficients(params, part)
    s = math.sin(theta)
    return (b * math.sin(2.0 * theta) - 2.0 * a * s * s) / params.c


def optimal_theta(params: ModelParams, part: Partition) -> ThetaChoice:
    """The angle maximizing the extracted energy: tan 2theta = B / A."""
    a, b = _coefficients(params, part)
    return ThetaChoice.from_components(a, b)


def _sqrt1pr2m1(r: float) -> float:
    """sqrt(1 + r^2) - 1 to a few ulp for any r >= 0.

    Small r: r^2 / (sqrt(1+r^2) + 1), algebraically identical but free of the
    cancellation that costs ~ log10(2/r^2) digits in the difference form.
    Large r: hypot keeps the square from overflowing and the -1 is benign.
    """
    if r < STABLE_R_THRESHOLD:
        return r * r / (math.sqrt(1.0 + r * r) + 1.0)
    return math.hypot(1.0, r) - 1.0


def max_output_energy(params: ModelParams, part: Partition) -> float:
    """Extracted energy at the optimal angle: (A / c) * (sqrt(1 + (B/A)^2) - 1)."""
    a, b = _coefficients(params, part)
    if b == 0.0:
        return 0.0
    return (a / params.c) * _sqrt1pr2m1(b / a)


def efficiency(params: ModelParams, part: Partition) -> float:
    """Energy transfer efficiency eta = E_out(max) / E_in; 0 in the k = 0 limit."""
    if params.k == 0.0:
        return 0.0
    return max_output_energy(params, part) / input_energy(params, part)


def single_output_efficiency(params: ModelParams) -> float:
    """eta for the best bi-partition, m = 1 (shared code path, bit-for-bit)."""
    return efficiency(params, Partition.last(params.n_qubits, 1))


def asymptotic_efficiency(params: ModelParams, part: Partition) -> float:
    """Strong-coupling limit of eta as k/h -> infinity: (N - m) / (2 N)."""
    n = params.n_qubits
    return (n - part.m_outputs) / (2.0 * n)


def report(params: ModelParams, part: Partition) -> ClosedFormReport:
    """Bundle E_in, E_out(max), theta_opt and eta for one parameter point."""
    e_in = input_energy(params, part)
    e_out = max_output_energy(params, part)
    return ClosedFormReport(
        e_in=e_in,
        e_out_max=e_out,
        theta_opt=optimal_theta(params, part),
        eta=0.0 if params.k == 0.0 else e_out / e_in,
    )
