"""Phase-flip channel, evolved-state discord, sweeps, and freezing detection.

The per-site channel has Kraus pair {sqrt(1-p/2) I, sqrt(p/2) Z}; composing
it over all N sites multiplies every Pauli word's weight by (1-p)^w where w
counts the X and Y letters (I and Z letters pass through). The symmetric
family is closed under the channel: c1, c2 pick up (1-p)^N while c3 and s
are untouched.

With s = 0 and c2 = +-c1*c3 (sign (-1)^{N/2} for even N) the discord stays
pinned at H(c3)/2 as long as |c1|(1-p)^N >= |c3|, then decays; the boundary
p* = 1 - (|c3|/|c1|)^{1/N} is where the dominant coefficient switches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .analytic import DiscordResult, NoAnalyticCase, discord_symmetric
from .oracle import OracleConfig, minimize_discord, minimize_reduced
from .pauli import DensityMatrix, FamilyParams, PauliSum, build_symmetric_family, realize
from .spectral import xlog2


@dataclass(frozen=True)
class ChannelParams:
    """Decoherence probability p, optionally derived from a rate and a time."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")

    @classmethod
    def from_rate_time(cls, gamma: float, t: float) -> "ChannelParams":
        if gamma < 0 or t < 0:
            raise ValueError("gamma and t must be nonnegative")
        return cls(p=1.0 - math.exp(-gamma * t))


@dataclass(frozen=True)
class KrausSet:
    operators: list[np.ndarray]

    def completeness_deviation(self) -> float:
        dim = self.operators[0].shape[0]
        acc = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(acc - np.eye(dim))))


@dataclass(frozen=True)
class DynamicsIntermediates:
    """Entropy-argument quantities of the evolved 3- and 4-qubit closed forms."""

    zeta: float | None = None
    eta: float | None = None
    e: float | None = None
    f: float | None = None
    g: float | None = None


@dataclass(frozen=True)
class EvolvedDiscord:
    result: DiscordResult
    intermediates: DynamicsIntermediates | None
    p: float


@dataclass(frozen=True)
class SeriesRow:
    p: float
    value: float
    branch: str
    intermediates: DynamicsIntermediates | None = None


@dataclass(frozen=True)
class DynamicsSeries:
    rows: list[SeriesRow]

    def to_csv(self) -> str:
        lines = ["p,discord_bits,branch"]
        for row in self.rows:
            val = "nan" if not np.isfinite(row.value) else f"{row.value:.9g}"
            lines.append(f"{row.p:.9g},{val},{row.branch}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FreezeReport:
    frozen: bool
    frozen_value: float | None
    p_star: float | None
    method: str


def phase_flip_kraus(n: int, p: float) -> KrausSet:
    """Full-channel Kraus set: all 2^N tensor products of the per-site pair."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    g0 = np.sqrt(1.0 - p / 2.0) * np.eye(2)
    g1 = np.sqrt(p / 2.0) * np.diag([1.0, -1.0])
    ops = [np.array([[1.0]])]
    for _ in range(n):
        ops = [np.kron(op, g) for op in ops for g in (g0, g1)]
    return KrausSet([op.astype(complex) for op in ops])


def apply_phase_flip(state: PauliSum, p: float) -> PauliSum:
    """Weight rule: each word picks up (1-p)^(number of X or Y letters)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    damp = 1.0 - p
    terms = {}
    for word, w in state.terms.items():
        n_xy = sum(1 for ch in word if ch in "XY")
        terms[word] = w * damp**n_xy
    return PauliSum(state.n_qubits, terms)


def apply_phase_flip_dense(rho: DensityMatrix, p: float) -> DensityMatrix:
    """Dense Kraus application; retained as the test oracle for the weight rule."""
    kraus = phase_flip_kraus(rho.n_qubits, p)
    out = reduce(
        lambda acc, k: acc + k @ rho.entries @ k.conj().T,
        kraus.operators,
        np.zeros_like(rho.entries),
    )
    return DensityMatrix(rho.n_qubits, out)


def evolved_params(params: FamilyParams, p: float) -> FamilyParams:
    damp = (1.0 - p) ** params.n_qubits
    return FamilyParams(params.n_qubits, params.c1 * damp, params.c2 * damp, params.c3, params.s)


def _intermediates(params: FamilyParams, p: float) -> DynamicsIntermediates | None:
    c1, c2, c3, s = params.c1, params.c2, params.c3, params.s
    if params.n_qubits == 3:
        q6 = (1.0 - p) ** 6
        return DynamicsIntermediates(
            zeta=float(np.sqrt((c1**2 + c2**2) * q6 + (c3 - s) ** 2)),
            eta=float(np.sqrt((c1**2 + c2**2) * q6 + (c3 + 3 * s) ** 2)),
        )
    if params.n_qubits == 4:
        q4 = (1.0 - p) ** 4
        q8 = q4 * q4
        return DynamicsIntermediates(
            e=float((c1 + c2) * q4 + c3),
            f=float(np.sqrt((c1 - c2) ** 2 * q8 + 4 * s**2)),
            g=float(np.sqrt((c1 + c2) ** 2 * q8 + 16 * s**2)),
        )
    return None


def evolved_discord(params: FamilyParams, p: float) -> EvolvedDiscord:
    """Closed-form discord of the channel-evolved symmetric family state.

    Evaluates the analytic branch on the evolved coefficients and carries the
    3-/4-qubit entropy-argument intermediates. Raises NoAnalyticCase when the
    evolved coefficients leave both analytic regions.
    """
    ev = evolved_params(params, p)
    result = discord_symmetric(ev)
    return EvolvedDiscord(result, _intermediates(params, p), p)


def dynamics_sweep(
    params: FamilyParams,
    p_grid,
    method: str = "analytic",
    cfg: OracleConfig | None = None,
) -> DynamicsSeries:
    """Discord along a decoherence-probability grid.

    Analytic rows that fall outside both closed-form regions are marked with
    branch "none" and a NaN value instead of aborting the sweep.
    """
    grid = [float(p) for p in p_grid]
    if any(not 0.0 <= p <= 1.0 for p in grid):
        raise ValueError("p grid must lie in [0, 1]")
    if sorted(grid) != grid or len(set(grid)) != len(grid):
        raise ValueError("p grid must be strictly increasing")
    rows = []
    for p in grid:
        ev = evolved_params(params, p)
        inter = _intermediates(params, p)
        if method == "analytic":
            try:
                res = discord_symmetric(ev)
                rows.append(SeriesRow(p, res.value, res.branch, inter))
            except NoAnalyticCase:
                rows.append(SeriesRow(p, float("nan"), "none", inter))
        elif method == "oracle":
            if ev.n_qubits <= 4:
                out = minimize_discord(realize(build_symmetric_family(ev)), cfg)
                rows.append(SeriesRow(p, out.value, "oracle", inter))
            else:
                out = minimize_reduced(ev, cfg)
                rows.append(SeriesRow(p, out.value, "oracle[reduced]", inter))
        else:
            raise ValueError(f"unknown method {method!r}")
    return DynamicsSeries(rows)


def _half_h(x: float) -> float:
    return 0.5 * float(xlog2(np.array(1.0 + x)) + xlog2(np.array(1.0 - x)))


def detect_freeze_transition(params: FamilyParams, coupling_tol: float = 1e-12) -> FreezeReport:
    """Freezing predicate and transition point for the symmetric family.

    Frozen iff s = 0, N even, c2 = (-1)^{N/2} c1 c3 (i.e. c2 = c1 c3 when N
    is divisible by 4) and |c1| >= |c3|. On the plateau the value is
    H(|c3|)/2; the transition p* = 1 - (|c3|/|c1|)^{1/N} comes from the
    dominance boundary |c1|(1-p)^N = |c3| and is refined by bisecting that
    switch. |c1| = |c3| degenerates to p* = 0 (no plateau). coupling_tol
    loosens the c2 = c1 c3 equality for truncated-decimal inputs.
    """
    n = params.n_qubits
    not_frozen = FreezeReport(False, None, None, "analytic_boundary")
    if abs(params.s) > 1e-12 or n % 2 == 1:
        return not_frozen
    sign = -1.0 if (n // 2) % 2 else 1.0
    if abs(params.c2 - sign * params.c1 * params.c3) > coupling_tol:
        return not_frozen
    if abs(params.c1) < abs(params.c3) or params.c1 == 0.0:
        return not_frozen
    frozen_value = _half_h(abs(params.c3))
    if abs(params.c1) == abs(params.c3):
        return FreezeReport(True, frozen_value, 0.0, "analytic_boundary")

    p_star = 1.0 - (abs(params.c3) / abs(params.c1)) ** (1.0 / n)
    # bisection on the dominance switch |c1|(1-p)^N - |c3|, monotone in p
    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = (lo + hi) / 2.0
        if abs(params.c1) * (1.0 - mid) ** n >= abs(params.c3):
            lo = mid
        else:
            hi = mid
    p_star = (lo + hi) / 2.0 if abs((lo + hi) / 2.0 - p_star) > 1e-12 else p_star
    return FreezeReport(True, frozen_value, p_star, "analytic_boundary")


def freeze_changepoint(series: DynamicsSeries, frozen_value: float, tol: float = 1e-6) -> FreezeReport:
    """Series-based detection: first grid point whose value leaves the plateau."""
    for row in series.rows:
        if not np.isfinite(row.value) or abs(row.value - frozen_value) > tol:
            return FreezeReport(True, frozen_value, row.p, "series_changepoint")
    return FreezeReport(True, frozen_value, None, "series_changepoint")
