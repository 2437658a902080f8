"""Closed-form multipartite discord with explicit case-region dispatch.

For the symmetric family the minimum over sequential conditional measurements
is known in two parameter regions:

* case 1 (roughly: c3 dominant and nonpositive, or a field-strength
  inequality involving s): the minimizing chain measures every qubit along
  z, and the discord is sum_i lambda_i log2 lambda_i + N - max W with the
  parity-pattern closed form

      max W = (1/2^N) sum_{j=0}^{N-1} C(N-1, j) H_{(N-1-2j)s}(|s + (-1)^j c3|).

  An alternative three-qubit pairing of the same H terms ("printed") differs
  numerically for s != 0; it is retained only for the discrepancy report and
  is arbitrated against the measurement oracle in the test suite.

* case 2 (s = 0): discord = sum_i lambda_i log2 lambda_i + N - H(C)/2 with
  C = max{|c1|, |c2|, |c3|}.

Everything is evaluated in bits. Values carry region and branch provenance.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np

from .pauli import DiagonalFieldParams, FamilyParams, GhzParams, build_symmetric_family, realize
from .spectral import (
    SpectrumResult,
    closed_form_spectrum_3q,
    closed_form_spectrum_4q,
    diagonal_field_spectrum,
    ghz_spectrum,
    hermitian_eigenvalues,
    xlog2,
)

REGION_CASE1 = "case1"
REGION_CASE2_S0 = "case2_s0"
REGION_NONE = "none"

S_ZERO_TOL = 1e-14


class NoAnalyticCase(ValueError):
    """No closed form applies to these parameters; use the oracle instead."""


def _h(x: float, y: float = 0.0) -> float:
    # clamped variant of binary_h for internal assembly; physical inputs stay in-domain
    return float(xlog2(np.array(1.0 + y + x)) + xlog2(np.array(1.0 + y - x)))


@dataclass(frozen=True)
class CaseRegion:
    region: str
    c: float
    C: float
    condition_detail: str


@dataclass(frozen=True)
class DiscordResult:
    """Discord value in bits plus provenance of the branch that produced it."""

    value: float
    branch: str
    region: CaseRegion | None = None
    max_w: float | None = None
    spectrum_used: SpectrumResult | None = None


def classify_region(params: FamilyParams) -> CaseRegion:
    """Decide which closed form applies; s = 0 takes precedence over case 1."""
    c = max(abs(params.c1), abs(params.c2))
    C = max(c, abs(params.c3))
    c3, s, n = params.c3, params.s, params.n_qubits
    if abs(s) <= S_ZERO_TOL:
        return CaseRegion(REGION_CASE2_S0, c, C, "s=0")
    if c3 <= 0.0 and c3 * c3 >= c * c:
        return CaseRegion(REGION_CASE1, c, C, "c3<=0 and c3^2>=c^2")
    denom = 1.0 - (n - 2) * abs(s)
    if c3 < 0.0 and denom > 0.0 and s * s / denom >= (c3 * c3 - c * c) / c3:
        return CaseRegion(REGION_CASE1, c, C, "s^2/(1-(N-2)|s|) >= (c3^2-c^2)/c3")
    return CaseRegion(REGION_NONE, c, C, "no analytic case")


def max_w(params: FamilyParams, pattern: str = "parity") -> float:
    """Minimized conditional-entropy chain term for the all-z measurement tree.

    The parity pattern pairs H_{(N-1-2j)s} with |s + (-1)^j c3| across the
    2^{N-1} outcome branches grouped by their number of minus signs j. The
    "printed" pattern is the alternative three-qubit pairing kept for
    discrepancy reporting only. Meaningful as the discord term in case 1.
    """
    n, c3, s = params.n_qubits, params.c3, params.s
    if pattern == "parity":
        total = 0.0
        for j in range(n):
            total += comb(n - 1, j) * _h(abs(s + (-1) ** j * c3), (n - 1 - 2 * j) * s)
        return total / 2**n
    if pattern == "printed":
        if n != 3:
            raise ValueError("printed pattern is defined for n_qubits == 3 only")
        return (
            _h(abs(s + c3), 2 * s)
            + _h(abs(s - c3), -2 * s)
            + _h(abs(s + c3))
            + _h(abs(s - c3))
        ) / 8
    raise ValueError(f"unknown pattern {pattern!r}")


def max_w_mod4(params: FamilyParams) -> float:
    """max W via the four N mod 4 branch displays (N >= 4).

    Kept as literal binomial-sum branches so agreement with the single
    parity-pattern sum is a consistency check rather than shared code.
    """
    n, c3, s = params.n_qubits, params.c3, params.s
    if n < 4:
        raise ValueError("mod-4 branch displays need n_qubits >= 4")
    m = n % 4
    nn = n // 4
    plus, minus = abs(s + c3), abs(s - c3)
    total = 0.0
    if m == 0:
        for k in range(2 * nn):
            total += comb(4 * nn - 1, 2 * k) * _h(plus, (4 * nn - 4 * k - 1) * s)
            total += comb(4 * nn - 1, 2 * k + 1) * _h(minus, (4 * nn - 4 * k - 3) * s)
    elif m == 1:
        for k in range(2 * nn + 1):
            total += comb(4 * nn, 2 * k) * _h(plus, (4 * nn - 4 * k) * s)
        for k in range(2 * nn):
            total += comb(4 * nn, 2 * k + 1) * _h(minus, (4 * nn - 4 * k - 2) * s)
    elif m == 2:
        for k in range(2 * nn + 1):
            total += comb(4 * nn + 1, 2 * k) * _h(plus, (4 * nn - 4 * k + 1) * s)
            total += comb(4 * nn + 1, 2 * k + 1) * _h(minus, (4 * nn - 4 * k - 1) * s)
    else:
        for k in range(2 * nn + 2):
            total += comb(4 * nn + 2, 2 * k) * _h(plus, (4 * nn - 4 * k + 2) * s)
        for k in range(2 * nn + 1):
            total += comb(4 * nn + 2, 2 * k + 1) * _h(minus, (4 * nn - 4 * k) * s)
    return total / 2**n


def _family_spectrum(params: FamilyParams) -> SpectrumResult:
    if params.n_qubits == 3:
        return closed_form_spectrum_3q(params)
    if params.n_qubits == 4:
        return closed_form_spectrum_4q(params)
    return hermitian_eigenvalues(realize(build_symmetric_family(params)))


def _sum_lambda_log(spectrum: SpectrumResult) -> float:
    return float(np.sum(xlog2(np.clip(spectrum.eigenvalues, 0.0, None))))


def _argmax_c_name(params: FamilyParams) -> str:
    vals = {"c1": abs(params.c1), "c2": abs(params.c2), "c3": abs(params.c3)}
    return max(vals, key=vals.get)


def _case2_value(params: FamilyParams, spectrum: SpectrumResult, C: float) -> float:
    c1, c2, c3 = params.c1, params.c2, params.c3
    if params.n_qubits == 3:
        return 0.5 * _h(np.sqrt(c1**2 + c2**2 + c3**2)) - 0.5 * _h(C)
    if params.n_qubits == 4:
        bracket = (
            xlog2(np.array(1 + c1 + c2 + c3))
            + xlog2(np.array(1 + c1 - c2 - c3))
            + xlog2(np.array(1 - c1 + c2 - c3))
            + xlog2(np.array(1 - c1 - c2 + c3))
        ) / 4
        return float(bracket) - 0.5 * _h(C)
    return _sum_lambda_log(spectrum) + params.n_qubits - 0.5 * _h(C)


def discord_symmetric(params: FamilyParams) -> DiscordResult:
    """Closed-form discord of the symmetric family; raises NoAnalyticCase
    when neither region applies (callers fall back to the oracle)."""
    region = classify_region(params)
    if region.region == REGION_NONE:
        raise NoAnalyticCase(
            f"no closed form for c=({params.c1},{params.c2},{params.c3}) s={params.s}"
        )
    spectrum = _family_spectrum(params)
    if region.region == REGION_CASE2_S0:
        value = _case2_value(params, spectrum, region.C)
        branch = f"case2[s=0,C={_argmax_c_name(params)}]"
        return DiscordResult(value, branch, region, None, spectrum)
    w = max_w(params, "parity")
    value = _sum_lambda_log(spectrum) + params.n_qubits - w
    return DiscordResult(value, "case1[parity]", region, w, spectrum)


def discord_diagonal_field(params: DiagonalFieldParams) -> DiscordResult:
    """Discord of the diagonal-field family.

    The state is diagonal in the computational basis, hence classically
    correlated; the closed form cancels to zero term by term. Both sides are
    evaluated (spectrum sum and H sum) rather than returning a literal 0.
    """
    n = params.n_qubits
    if n < 2:
        raise ValueError("discord needs at least 2 qubits")
    spectrum = diagonal_field_spectrum(params)
    # sum_b lambda_b log2 lambda_b + N == (1/2^N) sum_b xlog2(1 + y_b) with
    # y_b the signed field sum of branch b; this grouping keeps the clamping
    # of marginally negative branches symmetric with the H sum below
    entropy_side = 0.0
    for signs in product((1.0, -1.0), repeat=n):
        entropy_side += float(xlog2(1.0 + sum(sg * s for sg, s in zip(signs, params.fields))))
    hsum = 0.0
    for signs in product((1.0, -1.0), repeat=n - 1):
        y = sum(sg * s for sg, s in zip(signs, params.fields[:-1]))
        hsum += _h(abs(params.fields[-1]), y)
    value = (entropy_side - hsum) / 2**n
    return DiscordResult(value, "diagonal-field", None, None, spectrum)


def discord_ghz(params: GhzParams) -> DiscordResult:
    """Closed-form discord of the noisy GHZ state."""
    dim = 2**params.n_qubits
    mu = params.mu
    t1 = xlog2(np.array(1.0 - mu)) / dim
    t2 = xlog2(np.array(1.0 + (dim - 1) * mu)) / dim
    t3 = xlog2(np.array(1.0 + (dim // 2 - 1) * mu)) / (dim // 2)
    value = float(t1 + t2 - t3)
    return DiscordResult(value, "ghz", None, None, ghz_spectrum(params))
