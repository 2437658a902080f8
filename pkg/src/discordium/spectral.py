"""Eigenvalue spectra, von Neumann entropy (bits), and the H_y helper.

H_y(x) = (1+y+x)log2(1+y+x) + (1+y-x)log2(1+y-x) with 0*log2(0) = 0.
It is even in x and nondecreasing in |x| on the valid domain; H(x) denotes
the y = 0 case. All entropies use log base 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .pauli import DensityMatrix, DiagonalFieldParams, FamilyParams, GhzParams

SOURCE_NUMERIC = "numeric"
SOURCE_3Q = "closed_form_3q"
SOURCE_4Q = "closed_form_4q"
SOURCE_GHZ = "closed_form_ghz"
SOURCE_DIAGONAL = "closed_form_diagonal"


def xlog2(values):
    """Elementwise v*log2(v) with v <= 0 mapped to 0."""
    arr = np.asarray(values, dtype=float)
    out = np.zeros_like(arr)
    mask = arr > 0.0
    out[mask] = arr[mask] * np.log2(arr[mask])
    return float(out) if out.ndim == 0 else out


def binary_h(x: float, y: float = 0.0) -> float:
    """(1+y+x)log2(1+y+x) + (1+y-x)log2(1+y-x), even in x."""
    a, b = 1.0 + y + x, 1.0 + y - x
    if a < -1e-12 or b < -1e-12:
        raise ValueError(f"binary_h domain violation: 1+y+x={a}, 1+y-x={b}")
    return float(xlog2(max(a, 0.0)) + xlog2(max(b, 0.0)))


@dataclass(frozen=True)
class SpectrumResult:
    """Descending real spectrum plus the source that produced it."""

    eigenvalues: np.ndarray
    source: str

    def __post_init__(self):
        ev = np.sort(np.asarray(self.eigenvalues, dtype=float))[::-1]
        object.__setattr__(self, "eigenvalues", ev)

    def entropy_bits(self) -> float:
        return float(-np.sum(xlog2(np.clip(self.eigenvalues, 0.0, None))))


def hermitian_eigenvalues(rho: DensityMatrix) -> SpectrumResult:
    """Full numeric spectrum, descending."""
    arr = rho.entries
    if np.max(np.abs(arr - arr.conj().T)) > 1e-10:
        raise ValueError("input is not Hermitian within 1e-10")
    return SpectrumResult(np.linalg.eigvalsh(arr), SOURCE_NUMERIC)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum lambda log2 lambda in bits; eigenvalues below 1e-14 contribute 0."""
    ev = hermitian_eigenvalues(rho).eigenvalues
    if ev[-1] < -1e-8:
        raise ValueError(f"unphysical state: eigenvalue {ev[-1]} below -1e-8")
    return float(-np.sum(xlog2(np.clip(ev, 0.0, None))))


def closed_form_spectrum_3q(params: FamilyParams) -> SpectrumResult:
    """Three-qubit symmetric-family spectrum.

    Six eigenvalues (1 +- r1)/8 with r1^2 = c1^2+c2^2+(c3-s)^2 (three of each
    sign) and two eigenvalues (1 +- r2)/8 with r2^2 = c1^2+c2^2+(c3+3s)^2.
    """
    if params.n_qubits != 3:
        raise ValueError("closed_form_spectrum_3q needs n_qubits == 3")
    c1, c2, c3, s = params.c1, params.c2, params.c3, params.s
    r1 = np.sqrt(c1**2 + c2**2 + c3**2 - 2 * c3 * s + s**2)
    r2 = np.sqrt(c1**2 + c2**2 + c3**2 + 6 * c3 * s + 9 * s**2)
    ev = [(1 + r1) / 8] * 3 + [(1 - r1) / 8] * 3 + [(1 + r2) / 8, (1 - r2) / 8]
    return SpectrumResult(np.array(ev), SOURCE_3Q)


def closed_form_spectrum_4q(params: FamilyParams) -> SpectrumResult:
    """Four-qubit symmetric-family spectrum (trace-correct form).

    Derived from the 2x2 blocks over computational pairs |b>, |b-flipped>:
    six eigenvalues (1 + c3 +- (c1+c2))/16, eight (1 - c3 +- rk)/16 with
    rk^2 = (c1-c2)^2 + 4 s^2, and two (1 + c3 +- rl)/16 with
    rl^2 = (c1+c2)^2 + 16 s^2.
    """
    if params.n_qubits != 4:
        raise ValueError("closed_form_spectrum_4q needs n_qubits == 4")
    c1, c2, c3, s = params.c1, params.c2, params.c3, params.s
    rk = np.sqrt((c1 - c2) ** 2 + 4 * s**2)
    rl = np.sqrt((c1 + c2) ** 2 + 16 * s**2)
    ev = (
        [(1 + c3 + (c1 + c2)) / 16] * 3
        + [(1 + c3 - (c1 + c2)) / 16] * 3
        + [(1 - c3 + rk) / 16] * 4
        + [(1 - c3 - rk) / 16] * 4
        + [(1 + c3 + rl) / 16, (1 + c3 - rl) / 16]
    )
    return SpectrumResult(np.array(ev), SOURCE_4Q)


def spectrum_4q_printed(params: FamilyParams) -> np.ndarray:
    """Superseded four-qubit spectrum variant with lambda_j = (1 +- (c1+c2+c3))/16.

    Violates unit trace by 6*c3/16 whenever c3 != 0; kept only so the
    discrepancy suite can assert the deficit. Not a valid SpectrumResult.
    """
    if params.n_qubits != 4:
        raise ValueError("spectrum_4q_printed needs n_qubits == 4")
    c1, c2, c3, s = params.c1, params.c2, params.c3, params.s
    rk = np.sqrt((c1 - c2) ** 2 + 4 * s**2)
    rl = np.sqrt((c1 + c2) ** 2 + 16 * s**2)
    ev = (
        [(1 + (c1 + c2 + c3)) / 16] * 3
        + [(1 - (c1 + c2 + c3)) / 16] * 3
        + [(1 - c3 + rk) / 16] * 4
        + [(1 - c3 - rk) / 16] * 4
        + [(1 + c3 + rl) / 16, (1 + c3 - rl) / 16]
    )
    return np.array(ev)


def ghz_spectrum(params: GhzParams) -> SpectrumResult:
    """Noisy GHZ spectrum: (1-mu)/2^N with multiplicity 2^N - 1, plus one
    eigenvalue (1 + (2^N - 1) mu)/2^N."""
    dim = 2**params.n_qubits
    ev = np.full(dim, (1.0 - params.mu) / dim)
    ev[0] = (1.0 + (dim - 1) * params.mu) / dim
    return SpectrumResult(ev, SOURCE_GHZ)


def diagonal_field_spectrum(params: DiagonalFieldParams) -> SpectrumResult:
    """Diagonal-family spectrum: (1 + sum_i (-1)^{b_i} s_i)/2^N over bitstrings b."""
    n = params.n_qubits
    ev = np.empty(2**n)
    for idx, signs in enumerate(product((1.0, -1.0), repeat=n)):
        ev[idx] = (1.0 + sum(sg * s for sg, s in zip(signs, params.fields))) / 2**n
    return SpectrumResult(ev, SOURCE_DIAGONAL)
