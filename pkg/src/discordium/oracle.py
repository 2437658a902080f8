"""Ground-truth discord via minimization over sequential conditional measurements.

A measurement tree assigns one Bloch direction to every outcome prefix: the
root direction measures qubit 1, the two length-1 prefixes condition the
qubit-2 direction on the first outcome, and so on through qubit N-1. The
objective is the measured conditional-entropy chain

    sum_{k=1}^{N-1} S(A_{k+1} | outcomes of A_1..A_k)  -  [S(rho) - S(rho_{A1})]

minimized over all trees. Branch states are propagated by projecting out the
measured qubit, which halves the dimension at every level, so one objective
evaluation costs a handful of small dense contractions.

A reduced optimizer specialized to the symmetric family works in the z
components of the tree directions only. For that family the transverse
components enter solely through the final-level radicand, where they are
maximized out exactly (the discord objective is monotone in that radicand),
so the reduction loses nothing while extending tractable sizes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .pauli import DensityMatrix, FamilyParams, build_symmetric_family, partial_trace, realize
from .spectral import (
    closed_form_spectrum_3q,
    closed_form_spectrum_4q,
    hermitian_eigenvalues,
    von_neumann_entropy,
    xlog2,
)

PROB_FLOOR = 1e-14
SPREAD_FLAG = 1e-4

AXIS_DIRECTIONS = (
    np.array([0.0, 0.0, 1.0]),
    np.array([1.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, -1.0]),
    np.array([-1.0, 0.0, 0.0]),
    np.array([0.0, -1.0, 0.0]),
)


def _prefixes(n_measured: int) -> list[str]:
    out = [""]
    for length in range(1, n_measured):
        out.extend("".join(bits) for bits in product("01", repeat=length))
    return out


@dataclass(frozen=True)
class MeasurementTree:
    """Conditional Bloch directions indexed by outcome prefix ('' is the root)."""

    n_measured: int
    directions: dict[str, np.ndarray]

    def __post_init__(self):
        if self.n_measured < 1:
            raise ValueError("need at least one measured qubit")
        expected = _prefixes(self.n_measured)
        if set(self.directions) != set(expected):
            raise ValueError(
                f"tree needs exactly the {len(expected)} outcome prefixes of "
                f"length < {self.n_measured}"
            )
        dirs = {}
        for pref, vec in self.directions.items():
            v = np.asarray(vec, dtype=float)
            if v.shape != (3,):
                raise ValueError(f"direction at {pref!r} is not a 3-vector")
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(f"direction at {pref!r} is not unit within 1e-12")
            dirs[pref] = v
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def uniform(cls, n_measured: int, direction) -> "MeasurementTree":
        v = np.asarray(direction, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(n_measured, {p: v.copy() for p in _prefixes(n_measured)})

    @classmethod
    def from_angles(cls, n_measured: int, angles: np.ndarray) -> "MeasurementTree":
        """Directions from a flat (theta, phi) vector in prefix order."""
        prefs = _prefixes(n_measured)
        angles = np.asarray(angles, dtype=float)
        if angles.shape != (2 * len(prefs),):
            raise ValueError(f"expected {2 * len(prefs)} angles, got {angles.shape}")
        dirs = {}
        for i, pref in enumerate(prefs):
            th, ph = angles[2 * i], angles[2 * i + 1]
            dirs[pref] = np.array(
                [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)]
            )
        return cls(n_measured, dirs)

    @classmethod
    def random(cls, n_measured: int, rng: np.random.Generator) -> "MeasurementTree":
        dirs = {}
        for pref in _prefixes(n_measured):
            z = rng.uniform(-1.0, 1.0)
            ph = rng.uniform(0.0, 2 * np.pi)
            r = np.sqrt(1.0 - z * z)
            dirs[pref] = np.array([r * np.cos(ph), r * np.sin(ph), z])
        return cls(n_measured, dirs)


@dataclass(frozen=True)
class OracleConfig:
    starts: int = 64
    max_iters: int = 2000
    f_tol: float = 1e-9
    seed: int = 0
    include_axes_starts: bool = True

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")

    @classmethod
    def from_json(cls, path: str | Path) -> "OracleConfig":
        payload = json.loads(Path(path).read_text())
        return cls(
            starts=int(payload.get("starts", 64)),
            max_iters=int(payload.get("max_iters", 2000)),
            f_tol=float(payload.get("f_tol", 1e-9)),
            seed=int(payload.get("seed", 0)),
            include_axes_starts=bool(payload.get("include_axes_starts", True)),
        )


@dataclass(frozen=True)
class ReducedPoint:
    """z components of a tree, keyed by outcome prefix; optional explicit
    final-level radicand auxiliaries keyed by the parent prefix."""

    z3: dict[str, float]
    phi: dict[str, float] | None = None


@dataclass(frozen=True)
class ReducedObjective:
    G: float | None
    F: float | None
    T: float | None
    W: float
    Y: float


@dataclass(frozen=True)
class OracleResult:
    value: float
    best_tree: MeasurementTree | ReducedPoint | None
    starts_converged: int
    spread: float


@dataclass(frozen=True)
class EnsembleBranch:
    prefix: str
    probability: float
    state: DensityMatrix | None
    negligible: bool


def _vec_pair(direction: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = float(np.clip(direction[2], -1.0, 1.0))
    theta = np.arccos(z)
    phi = float(np.arctan2(direction[1], direction[0]))
    return _angle_pair(theta, phi)


def _angle_pair(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    v_plus = np.array([c, s * e], dtype=complex)
    v_minus = np.array([s, -c * e], dtype=complex)
    return v_plus, v_minus


def _project_out(mat: np.ndarray, v: np.ndarray) -> np.ndarray:
    """<v| mat |v> over the first qubit; returns the half-dimension block sum."""
    d = mat.shape[0] // 2
    c00 = (v[0].conjugate() * v[0]).real
    c11 = (v[1].conjugate() * v[1]).real
    c01 = v[0].conjugate() * v[1]
    return (
        c00 * mat[:d, :d]
        + c01 * mat[:d, d:]
        + c01.conjugate() * mat[d:, :d]
        + c11 * mat[d:, d:]
    )


def _branch_entropy_sum(branches: list[np.ndarray]) -> float:
    """sum_u p_u * S(first qubit of branch u), branches unnormalized."""
    total = 0.0
    for sub in branches:
        d = sub.shape[0] // 2
        a = np.trace(sub[:d, :d]).real
        dd = np.trace(sub[d:, d:]).real
        b = np.trace(sub[:d, d:])
        p = a + dd
        if p < PROB_FLOOR:
            continue
        disc = np.sqrt((a - dd) ** 2 + 4.0 * (b.real**2 + b.imag**2))
        for lam in ((p + disc) / 2.0, (p - disc) / 2.0):
            if lam > PROB_FLOOR:
                total -= lam * np.log2(lam / p)
    return total


def _level_entropies(arr: np.ndarray, n: int, pairs: dict, up_to: int) -> list[float]:
    """Measured conditional-entropy sums for levels 1..up_to."""
    levels = []
    branches = [("", arr)]
    for m in range(1, up_to + 1):
        nxt = []
        for pref, mat in branches:
            vp, vm = pairs[pref]
            nxt.append((pref + "0", _project_out(mat, vp)))
            nxt.append((pref + "1", _project_out(mat, vm)))
        levels.append(_branch_entropy_sum([sub for _, sub in nxt]))
        branches = nxt
    return levels


def _tree_pairs(tree: MeasurementTree) -> dict:
    return {p: _vec_pair(v) for p, v in tree.directions.items()}


def _unmeasured_term(rho: DensityMatrix) -> float:
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, {1}))


def conditional_ensemble(rho: DensityMatrix, tree: MeasurementTree, k: int) -> list[EnsembleBranch]:
    """Exact post-measurement ensemble after measuring qubits 1..k.

    Projectors are built at full dimension (rank-1 on each measured qubit,
    identity elsewhere); branches with probability below 1e-14 are carried
    with state None and flagged negligible.
    """
    n = rho.n_qubits
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    if tree.n_measured != n - 1:
        raise ValueError("tree size does not match the state")
    eye_rest = np.eye(2 ** (n - k), dtype=complex)
    out = []
    for bits in product("01", repeat=k):
        proj = np.array([[1.0 + 0j]])
        for i, bit in enumerate(bits):
            vp, vm = _vec_pair(tree.directions["".join(bits[:i])])
            v = vp if bit == "0" else vm
            proj = np.kron(proj, np.outer(v, v.conjugate()))
        proj = np.kron(proj, eye_rest)
        sandwich = proj @ rho.entries @ proj
        p = float(np.trace(sandwich).real)
        prefix = "".join(bits)
        if p < PROB_FLOOR:
            out.append(EnsembleBranch(prefix, max(p, 0.0), None, True))
        else:
            out.append(EnsembleBranch(prefix, p, DensityMatrix(n, sandwich / p), False))
    return out


def measured_conditional_entropy(rho: DensityMatrix, tree: MeasurementTree, k: int) -> float:
    """sum over length-k outcome prefixes of p * S(qubit k+1 in that branch), in bits."""
    n = rho.n_qubits
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    if tree.n_measured != n - 1:
        raise ValueError("tree size does not match the state")
    return _level_entropies(rho.entries, n, _tree_pairs(tree), k)[-1]


def discord_objective(rho: DensityMatrix, tree: MeasurementTree) -> float:
    """Conditional-entropy chain for one tree minus the unmeasured term."""
    n = rho.n_qubits
    if tree.n_measured != n - 1:
        raise ValueError("tree size does not match the state")
    levels = _level_entropies(rho.entries, n, _tree_pairs(tree), n - 1)
    return float(sum(levels)) - _unmeasured_term(rho)


def _axis_angle_starts(npar: int) -> list[np.ndarray]:
    starts = []
    for v in AXIS_DIRECTIONS:
        th = float(np.arccos(v[2]))
        ph = float(np.arctan2(v[1], v[0]))
        starts.append(np.array([th, ph] * npar))
    return starts


def minimize_discord(rho: DensityMatrix, cfg: OracleConfig | None = None, n_cap: int = 4) -> OracleResult:
    """Multi-start Nelder-Mead over measurement-tree angles.

    Deterministic given cfg.seed: every start has its own spawned substream
    and the reduction takes the minimum with ties broken by start index.
    A spread above 1e-4 across converged starts doubles the start count once.
    """
    cfg = cfg or OracleConfig()
    n = rho.n_qubits
    if n < 2:
        raise ValueError("discord needs at least 2 qubits")
    if n > n_cap:
        raise ValueError(f"n_qubits={n} exceeds oracle cap {n_cap}")
    prefs = _prefixes(n - 1)
    npar = len(prefs)
    arr = rho.entries
    base = _unmeasured_term(rho)

    def objective(x: np.ndarray) -> float:
        pairs = {p: _angle_pair(x[2 * i], x[2 * i + 1]) for i, p in enumerate(prefs)}
        return float(sum(_level_entropies(arr, n, pairs, n - 1)))

    seed_seq = np.random.SeedSequence(cfg.seed)

    def make_starts(count: int, with_axes: bool) -> list[np.ndarray]:
        starts = _axis_angle_starts(npar)[:count] if with_axes else []
        n_random = count - len(starts)
        if n_random > 0:
            for child in seed_seq.spawn(n_random):
                rng = np.random.default_rng(child)
                th = np.arccos(rng.uniform(-1.0, 1.0, npar))
                ph = rng.uniform(0.0, 2 * np.pi, npar)
                x0 = np.empty(2 * npar)
                x0[0::2] = th
                x0[1::2] = ph
                starts.append(x0)
        return starts

    def run_batch(starts: list[np.ndarray]):
        outs = []
        for x0 in starts:
            res = _scipy_minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={"fatol": cfg.f_tol, "xatol": 1e-8, "maxiter": cfg.max_iters},
            )
            outs.append((float(res.fun), res.x.copy(), bool(res.success)))
        return outs

    results = run_batch(make_starts(cfg.starts, cfg.include_axes_starts))
    converged = [f for f, _, ok in results if ok]
    spread = float(max(converged) - min(converged)) if converged else float("nan")
    if converged and spread > SPREAD_FLAG:
        results += run_batch(make_starts(cfg.starts, False))
        converged = [f for f, _, ok in results if ok]
        spread = float(max(converged) - min(converged))

    best_fun, best_x, _ = min(results, key=lambda t: t[0])
    tree = MeasurementTree.from_angles(n - 1, best_x)
    return OracleResult(best_fun - base, tree, sum(1 for _, _, ok in results if ok), spread)


# --- reduced optimizer for the symmetric family ---------------------------


@lru_cache(maxsize=None)
def _reduced_structure(n: int):
    """Per-level ancestor-index and sign arrays for the z-coordinate objective."""
    prefs = _prefixes(n - 1)
    index = {p: i for i, p in enumerate(prefs)}
    levels = []
    for m in range(1, n):
        branches = ["".join(b) for b in product("01", repeat=m)]
        anc = np.array([[index[u[:t]] for t in range(m)] for u in branches])
        sign = np.array([[-1.0 if u[t] == "1" else 1.0 for t in range(m)] for u in branches])
        parity = np.array([1.0 if u.count("1") % 2 == 0 else -1.0 for u in branches])
        last = np.array([1.0 if u[-1] == "0" else -1.0 for u in branches])
        parent = [u[:-1] for u in branches]
        levels.append((anc, sign, parity, last, parent))
    return prefs, levels


def _h_block(x, y) -> float:
    """sum over branches of H_y(x) - H_y(0), vectorized and clamped."""
    one_y = 1.0 + np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    return float(np.sum(xlog2(one_y + x) + xlog2(one_y - x) - 2.0 * xlog2(one_y)))


def _h_scalar(x: float) -> float:
    return float(xlog2(np.array(1.0 + x)) + xlog2(np.array(1.0 - x)))


def _reduced_terms(
    params: FamilyParams,
    zvec: np.ndarray,
    envelope: bool,
    cross_sign: str,
    phi_by_parent: dict[str, float] | None,
) -> list[float]:
    n, s, c3 = params.n_qubits, params.s, params.c3
    c = max(abs(params.c1), abs(params.c2))
    _, levels = _reduced_structure(n)
    terms = []
    for m, (anc, sign, parity, last, parent) in enumerate(levels, start=1):
        zm = zvec[anc]
        y = (sign * (s * zm)).sum(axis=1)
        if m < n - 1:
            x = s
        else:
            p3 = zm.prod(axis=1)
            eps = parity if cross_sign == "parity" else last
            if cross_sign not in ("parity", "printed"):
                raise ValueError(f"unknown cross_sign {cross_sign!r}")
            if phi_by_parent is not None:
                phi = np.array([phi_by_parent[w] for w in parent])
            elif envelope:
                phi = c * c * (1.0 - p3 * p3) + (c3 * p3) ** 2
            else:
                phi = c * c * (1.0 - zm * zm).prod(axis=1) + (c3 * p3) ** 2
            rad = s * s + 2.0 * eps * s * c3 * p3 + phi
            x = np.sqrt(np.clip(rad, 0.0, None))
        terms.append(_h_block(x, y) / 2 ** (m + 1))
    return terms


def reduced_objective(
    params: FamilyParams,
    point: ReducedPoint,
    envelope: bool = False,
    cross_sign: str = "parity",
) -> ReducedObjective:
    """Per-level conditional-entropy gains for a z-component tree.

    G, F, T name the first, second, and third levels where they exist for the
    given size; W is always the final level (the only one involving c1, c2,
    c3 through the radicand); Y is the total. The final-level radicand uses,
    in order of precedence: explicit point.phi values, the loose product
    envelope c^2 (1 - P3^2) + (c3 P3)^2 when envelope=True, or the tight
    attainable maximum c^2 prod(1 - z^2) + (c3 P3)^2.
    """
    n = params.n_qubits
    prefs, _ = _reduced_structure(n)
    if set(point.z3) != set(prefs):
        raise ValueError(f"point must supply z values for exactly the prefixes {prefs}")
    zvec = np.array([float(point.z3[p]) for p in prefs])
    if np.any(np.abs(zvec) > 1.0 + 1e-12):
        raise ValueError("z coordinates must lie in [-1, 1]")
    if point.phi is not None:
        for w, val in point.phi.items():
            if len(w) != n - 2:
                raise ValueError("phi keys must be final-level parent prefixes")
            if val < -1e-12:
                raise ValueError("phi values must be nonnegative")
    terms = _reduced_terms(params, zvec, envelope, cross_sign, point.phi)
    total = float(sum(terms))
    g = terms[0] if n >= 3 else None
    f = terms[1] if n >= 3 else None
    t = terms[2] if n == 4 else None
    return ReducedObjective(g, f, t, terms[-1], total)


def _family_slog(params: FamilyParams) -> float:
    if params.n_qubits == 3:
        spectrum = closed_form_spectrum_3q(params)
    elif params.n_qubits == 4:
        spectrum = closed_form_spectrum_4q(params)
    else:
        spectrum = hermitian_eigenvalues(realize(build_symmetric_family(params)))
    return float(np.sum(xlog2(np.clip(spectrum.eigenvalues, 0.0, None))))


def minimize_reduced(params: FamilyParams, cfg: OracleConfig | None = None, n_cap: int = 6) -> OracleResult:
    """Symmetric-family discord by maximizing the reduced z-coordinate objective.

    Coordinate-wise grid sweeps on [0, 1] (step 0.01, using evenness in each
    coordinate) followed by bounded Powell refinement, from a few deterministic
    and seeded random starting points.
    """
    cfg = cfg or OracleConfig()
    n = params.n_qubits
    if n < 2:
        raise ValueError("discord needs at least 2 qubits")
    if n > n_cap:
        raise ValueError(f"n_qubits={n} exceeds reduced-oracle cap {n_cap}")
    prefs, _ = _reduced_structure(n)
    d = len(prefs)

    def y_of(z: np.ndarray) -> float:
        return float(sum(_reduced_terms(params, z, False, "parity", None)))

    grid = np.linspace(0.0, 1.0, 101)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    starts = [np.ones(d), np.zeros(d), np.full(d, 0.5)]
    for _ in range(max(0, min(cfg.starts, 12) - len(starts))):
        starts.append(rng.uniform(0.0, 1.0, d))

    finals = []
    for idx, z0 in enumerate(starts):
        z = z0.copy()
        best = y_of(z)
        for _ in range(40):
            improved = False
            for i in range(d):
                vals = np.empty_like(grid)
                zi = z.copy()
                for gidx, gv in enumerate(grid):
                    zi[i] = gv
                    vals[gidx] = y_of(zi)
                j = int(np.argmax(vals))
                if vals[j] > best + 1e-13:
                    best = vals[j]
                    z[i] = grid[j]
                    improved = True
            if not improved:
                break
        res = _scipy_minimize(
            lambda zz: -y_of(zz),
            z,
            method="Powell",
            bounds=[(0.0, 1.0)] * d,
            options={"xtol": 1e-10, "ftol": 1e-12, "maxiter": cfg.max_iters},
        )
        val = -float(res.fun) if -float(res.fun) >= best else best
        zbest = res.x if -float(res.fun) >= best else z
        finals.append((val, np.clip(zbest, 0.0, 1.0), bool(res.success), idx))

    converged_vals = [v for v, _, ok, _ in finals if ok]
    spread = float(max(converged_vals) - min(converged_vals)) if converged_vals else float("nan")
    y_max, z_max, _, _ = max(finals, key=lambda t: (t[0], -t[3]))

    value = _family_slog(params) + n - 0.5 * _h_scalar(params.s) - y_max
    point = ReducedPoint({p: float(z_max[i]) for i, p in enumerate(prefs)})
    return OracleResult(value, point, sum(1 for _, _, ok, _ in finals if ok), spread)
