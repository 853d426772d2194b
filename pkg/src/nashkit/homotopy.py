"""Numerical and exact solvers for equilibrium systems.

The main entry point :func:`solve` finds all isolated complex solutions of a
game's equilibrium system by straight-line homotopy continuation.  The start
system is the product-of-linear-forms system whose solutions are indexed by
block derangements, so the path count equals the expected solution count and
no paths diverge for generic targets.  Two exact solvers cover the cases
where numerics are unnecessary: two-player games reduce to rational linear
algebra, and binary three-player games reduce to one binary quadratic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .core import (
    Classification,
    DomainError,
    Format,
    FormatError,
    Game,
    SolveError,
    StartSystemError,
)
from .counting import enumerate_block_derangements
from .eqsystem import difference_coefficient


@dataclass(frozen=True)
class PositiveDimensional:
    """Marker result: the solution set is not a finite list of points."""

    reason: str = "positive-dimensional solution set"


@dataclass(frozen=True)
class TrackerConfig:
    """Tunable knobs of the path tracker; defaults are desk-scale safe."""

    initial_step: float = 0.05
    min_step: float = 1e-14
    max_newton: int = 3
    corrector_tol: float = 1e-11
    max_steps: int = 10_000
    endgame_offset: float = 1e-6
    endgame_tmin: float = 0.999
    endgame_radius: float = 1e-6
    positivity_tol: float = 1e-9
    real_tol: float = 1e-8
    polish_iterations: int = 60
    polish_target: float = 1e-12
    gamma: complex | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if not (0 < self.min_step < self.initial_step <= 0.1):
            raise DomainError("need 0 < min_step < initial_step <= 0.1")


@dataclass(frozen=True)
class Solution:
    """One isolated solution (or solution cluster) of an equilibrium system.

    Coordinates are per-group, each group scaled to unit norm with its
    largest-modulus coordinate rotated to the positive real axis.
    """

    point: tuple[tuple[complex, ...], ...]
    residual: float
    multiplicity: int
    is_real: bool
    simplex_rep: tuple[tuple[float, ...], ...] | None
    condition: float
    nonisolated_suspected: bool = False
    positivity_borderline: bool = False


@dataclass(frozen=True)
class TrackReport:
    n_paths: int
    failures: tuple[tuple[int, str], ...] = ()

    @property
    def n_failed(self) -> int:
        return len(self.failures)

    @property
    def full_success(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class StartSystem:
    """Product start system with one solved start point per block derangement."""

    format: Format
    seed: int
    linears: dict  # (i, j, k) -> tuple of complex coefficients on pi^(k)
    points: tuple[tuple[tuple[complex, ...], ...], ...]
    derangement_count: int


# ---------------------------------------------------------------------------
# flattened multilinear evaluation


class _FlatSystem:
    """Term-indexed view of D multilinear equations for fast numeric loops.

    Coefficient *values* live in external flat arrays so one structure serves
    the start system, the target system, and any homotopy combination of the
    two.  Slot order: equations in canonical (player, strategy) order, each
    equation's foreign coefficient tensor flattened row-major.
    """

    def __init__(self, fmt: Format):
        self.fmt = fmt
        self.nvars = sum(fmt.d)
        offsets = [0]
        for d in fmt.d:
            offsets.append(offsets[-1] + d)
        self.group_offsets = offsets
        self.eq_keys: list[tuple[int, int]] = [
            (i, k) for i in range(1, fmt.n + 1) for k in range(2, fmt.d[i - 1] + 1)
        ]
        self.D = len(self.eq_keys)
        self.terms: list[list[tuple[int, tuple[int, ...]]]] = []
        self.dterms: list[dict[int, list[tuple[int, tuple[int, ...]]]]] = []
        self.eq_foreign_indices: list[list[tuple[int, ...]]] = []
        slot = 0
        for (i, _k) in self.eq_keys:
            foreign = [g for g in range(1, fmt.n + 1) if g != i]
            ranges = [range(1, fmt.d[g - 1] + 1) for g in foreign]
            term_list = []
            dmap: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
            findices = []
            for j_minus in product(*ranges):
                vars_ = tuple(
                    offsets[g - 1] + (jg - 1) for g, jg in zip(foreign, j_minus)
                )
                term_list.append((slot, vars_))
                for pos, v in enumerate(vars_):
                    others = vars_[:pos] + vars_[pos + 1:]
                    dmap.setdefault(v, []).append((slot, others))
                findices.append(j_minus)
                slot += 1
            self.terms.append(term_list)
            self.dterms.append(dmap)
            self.eq_foreign_indices.append(findices)
        self.nslots = slot

    # coefficient arrays -----------------------------------------------------

    def target_coeffs(self, game: Game) -> np.ndarray:
        out = np.zeros(self.nslots, dtype=complex)
        slot = 0
        for (i, k), findices in zip(self.eq_keys, self.eq_foreign_indices):
            for j_minus in findices:
                out[slot] = complex(difference_coefficient(game, i, k, j_minus))
                slot += 1
        return out

    def target_coeffs_exact(self, game: Game) -> list[Fraction]:
        out = []
        for (i, k), findices in zip(self.eq_keys, self.eq_foreign_indices):
            for j_minus in findices:
                out.append(difference_coefficient(game, i, k, j_minus))
        return out

    def start_coeffs(self, linears: dict) -> np.ndarray:
        out = np.zeros(self.nslots, dtype=complex)
        slot = 0
        for (i, k), findices in zip(self.eq_keys, self.eq_foreign_indices):
            j = k - 1  # start equation index within the player's block
            foreign = [g for g in range(1, self.fmt.n + 1) if g != i]
            for j_minus in findices:
                c = 1.0 + 0j
                for g, jg in zip(foreign, j_minus):
                    c *= linears[(i, j, g)][jg - 1]
                out[slot] = c
                slot += 1
        return out

    # evaluation --------------------------------------------------------------

    def residuals(self, coeffs: Sequence[complex], x: Sequence[complex]) -> list[complex]:
        out = []
        for term_list in self.terms:
            s = 0j
            for slot, vars_ in term_list:
                p = coeffs[slot]
                for v in vars_:
                    p = p * x[v]
                s += p
            out.append(s)
        return out

    def jacobian(self, coeffs: Sequence[complex], x: Sequence[complex], cols: Sequence[int]) -> np.ndarray:
        J = np.zeros((self.D, len(cols)), dtype=complex)
        for r, dmap in enumerate(self.dterms):
            for ci, v in enumerate(cols):
                lst = dmap.get(v)
                if not lst:
                    continue
                s = 0j
                for slot, others in lst:
                    p = coeffs[slot]
                    for w in others:
                        p = p * x[w]
                    s += p
                J[r, ci] = s
        return J

    def groups_of(self, x: Sequence) -> list[list]:
        return [
            list(x[self.group_offsets[g]: self.group_offsets[g + 1]])
            for g in range(self.fmt.n)
        ]


def _pivot_cols(flat: _FlatSystem, x: list[complex]) -> tuple[list[int], list[int]]:
    """Largest-modulus pivot per group; returns (pivot var ids, affine var ids)."""
    pivots = []
    for g in range(flat.fmt.n):
        lo, hi = flat.group_offsets[g], flat.group_offsets[g + 1]
        pivots.append(lo + max(range(hi - lo), key=lambda j: abs(x[lo + j])))
    cols = [v for v in range(flat.nvars) if v not in pivots]
    return pivots, cols


def _rechart(flat: _FlatSystem, x: list[complex]) -> tuple[list[complex], list[int]]:
    """Scale every group so its largest coordinate is exactly 1."""
    pivots, cols = _pivot_cols(flat, x)
    y = list(x)
    for g in range(flat.fmt.n):
        lo, hi = flat.group_offsets[g], flat.group_offsets[g + 1]
        p = y[pivots[g]]
        for v in range(lo, hi):
            y[v] = y[v] / p
    return y, cols


# ---------------------------------------------------------------------------
# start system


def _projective_distance(a: Sequence[Sequence[complex]], b: Sequence[Sequence[complex]]) -> float:
    """Max over groups of the chordal distance between projective points."""
    worst = 0.0
    for u, v in zip(a, b):
        nu = math.sqrt(sum(abs(x) ** 2 for x in u))
        nv = math.sqrt(sum(abs(x) ** 2 for x in v))
        if nu == 0 or nv == 0:
            return float("inf")
        inner = abs(sum(x * y.conjugate() for x, y in zip(u, v)))
        c = max(0.0, 1.0 - (inner / (nu * nv)) ** 2)
        worst = max(worst, math.sqrt(c))
    return worst


def build_start_system(fmt: Format, seed: int) -> StartSystem:
    """Random product start system with one start point per block derangement.

    The linear-form coefficients are complex Gaussians; degenerate draws
    (kernel dimension != 1 or coincident points) trigger a redraw with the
    next derived seed, at most 8 times.
    """
    if fmt.classify() is Classification.BEYOND:
        raise FormatError("beyond-boundary format: generic equilibrium scheme is empty")
    derangements = enumerate_block_derangements(fmt)
    for attempt in range(8):
        rng = np.random.default_rng((seed, attempt))
        linears: dict[tuple[int, int, int], tuple[complex, ...]] = {}
        for i in range(1, fmt.n + 1):
            for j in range(1, fmt.d[i - 1]):
                for k in range(1, fmt.n + 1):
                    if k == i:
                        continue
                    dk = fmt.d[k - 1]
                    vec = rng.normal(size=dk) + 1j * rng.normal(size=dk)
                    linears[(i, j, k)] = tuple(complex(z) for z in vec)
        points = []
        ok = True
        for der in derangements:
            blocks = der.blocks()
            groups = []
            for k in range(1, fmt.n + 1):
                rows = [linears[(i, j, k)] for (i, j) in sorted(blocks[k - 1])]
                m = np.array(rows, dtype=complex)
                _, sv, vh = np.linalg.svd(m)
                if sv.size and sv[-1] > 1e-8 * sv[0]:
                    v = vh[-1].conj()
                else:
                    ok = False
                    break
                groups.append(tuple(complex(z) for z in v))
            if not ok:
                break
            for (i, j) in [(i, j) for i in range(1, fmt.n + 1) for j in range(1, fmt.d[i - 1])]:
                val = 1.0 + 0j
                for k in range(1, fmt.n + 1):
                    if k == i:
                        continue
                    val *= sum(c * z for c, z in zip(linears[(i, j, k)], groups[k - 1]))
                if abs(val) > 1e-12:
                    ok = False
                    break
            if not ok:
                break
            points.append(tuple(groups))
        if ok:
            for a in range(len(points)):
                for b in range(a + 1, len(points)):
                    if _projective_distance(points[a], points[b]) < 1e-6:
                        ok = False
        if ok:
            return StartSystem(fmt, seed, linears, tuple(points), len(derangements))
    raise StartSystemError(f"no valid start system after 8 attempts (seed {seed})")


# ---------------------------------------------------------------------------
# path tracking


@dataclass
class _PathEnd:
    x: list[complex]
    success: bool
    reason: str = ""


def _newton(flat: _FlatSystem, coeffs, x: list[complex], cols: list[int],
            tol: float, max_iter: int) -> tuple[bool, list[complex]]:
    y = list(x)
    for _ in range(max_iter):
        res = flat.residuals(coeffs, y)
        J = flat.jacobian(coeffs, y, cols)
        try:
            delta = np.linalg.solve(J, -np.array(res, dtype=complex))
        except np.linalg.LinAlgError:
            return False, y
        if not np.all(np.isfinite(delta)):
            return False, y
        for ci, v in enumerate(cols):
            y[v] += complex(delta[ci])
        if np.max(np.abs(delta)) < tol:
            return True, y
    return False, y


def _track_path(flat: _FlatSystem, G: np.ndarray, F: np.ndarray, gamma: complex,
                start: Sequence[Sequence[complex]], cfg: TrackerConfig) -> _PathEnd:
    x = [z for grp in start for z in grp]
    x, cols = _rechart(flat, x)
    dH_dt = (F - gamma * G).tolist()

    def h_coeffs(t: float) -> list[complex]:
        return (gamma * (1.0 - t) * G + t * F).tolist()

    def velocity(y: list[complex], t: float):
        c = h_coeffs(t)
        J = flat.jacobian(c, y, cols)
        rhs = -np.array(flat.residuals(dH_dt, y), dtype=complex)
        try:
            return np.linalg.solve(J, rhs)
        except np.linalg.LinAlgError:
            return None

    # Stop short of t = 1: a singular endpoint (multiple root) starves the
    # corrector arbitrarily close to 1; the Newton polish covers the gap.
    t_end = 1.0 - cfg.endgame_offset
    t = 0.0
    h = cfg.initial_step
    streak = 0
    steps = 0
    while t < t_end:
        if steps > cfg.max_steps:
            return _PathEnd(x, False, "step budget exhausted")
        steps += 1
        h = min(h, t_end - t)
        # 4th-order predictor on the Davidenko flow dx/dt = -J^-1 dH/dt.
        def apply(y, vel, scale):
            out = list(y)
            for ci, v in enumerate(cols):
                out[v] += scale * complex(vel[ci])
            return out

        k1 = velocity(x, t)
        pred = None
        if k1 is not None:
            k2 = velocity(apply(x, k1, h / 2), t + h / 2)
            if k2 is not None:
                k3 = velocity(apply(x, k2, h / 2), t + h / 2)
                if k3 is not None:
                    k4 = velocity(apply(x, k3, h), t + h)
                    if k4 is not None:
                        vel = (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
                        pred = apply(x, vel, h)
        accepted = False
        if pred is not None:
            ok, corr = _newton(flat, h_coeffs(t + h), pred, cols,
                               cfg.corrector_tol, cfg.max_newton)
            if ok and all(abs(z) < 1e8 for z in corr):
                x = corr
                t += h
                streak += 1
                accepted = True
                if t < 1.0:
                    x, cols = _rechart(flat, x)
                if streak >= 4:
                    h = min(h * 2, cfg.initial_step * 2, 0.1)
                    streak = 0
        if not accepted:
            streak = 0
            h /= 2
            if h < cfg.min_step:
                if t >= cfg.endgame_tmin:
                    break  # close enough for the endgame polish
                return _PathEnd(x, False, "step size underflow")
    # Newton polish on the target system alone.  The loop runs on a
    # step-size criterion: near a multiple root the residual underestimates
    # the distance quadratically, so a residual early-exit would stop a
    # decade too soon while the linear-rate iteration is still contracting.
    x, cols = _rechart(flat, x)
    coeffs = F.tolist()
    best = list(x)
    best_res = max(abs(r) for r in flat.residuals(coeffs, x))
    y = list(x)
    for _ in range(cfg.polish_iterations):
        res = flat.residuals(coeffs, y)
        r = max(abs(v) for v in res)
        if r < best_res:
            best_res = r
            best = list(y)
        J = flat.jacobian(coeffs, y, cols)
        try:
            delta = np.linalg.solve(J, -np.array(res, dtype=complex))
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)):
            break
        for ci, v in enumerate(cols):
            y[v] += complex(delta[ci])
        if np.max(np.abs(delta)) < 1e-15:
            break
    res = flat.residuals(coeffs, y)
    r = max(abs(v) for v in res)
    if r < best_res:
        best = list(y)
    return _PathEnd(best, True)


def _polish_cluster_mp(flat: _FlatSystem, exact_coeffs: list[Fraction],
                       x0: list[complex], iters: int = 80, dps: int = 40) -> list[complex]:
    """High-precision Newton for (near-)multiple roots.

    Plain Newton converges only linearly at a double root, so double
    precision stalls around sqrt(machine epsilon); running the same
    iteration at 40 digits recovers the support point to full double
    accuracy.
    """
    import mpmath as mp

    with mp.workdps(dps):
        coeffs = [mp.mpc(c.numerator) / mp.mpc(c.denominator) for c in exact_coeffs]
        x = [mp.mpc(z) for z in x0]
        pivots, cols = _pivot_cols(flat, [complex(z) for z in x0])
        for g in range(flat.fmt.n):
            lo, hi = flat.group_offsets[g], flat.group_offsets[g + 1]
            p = x[pivots[g]]
            for v in range(lo, hi):
                x[v] = x[v] / p
        for _ in range(iters):
            res = []
            for term_list in flat.terms:
                s = mp.mpc(0)
                for slot, vars_ in term_list:
                    p = coeffs[slot]
                    for v in vars_:
                        p = p * x[v]
                    s += p
                res.append(s)
            J = mp.zeros(flat.D, len(cols))
            for r, dmap in enumerate(flat.dterms):
                for ci, v in enumerate(cols):
                    lst = dmap.get(v)
                    if not lst:
                        continue
                    s = mp.mpc(0)
                    for slot, others in lst:
                        p = coeffs[slot]
                        for w in others:
                            p = p * x[w]
                        s += p
                    J[r, ci] = s
            try:
                delta = mp.lu_solve(J, mp.matrix([-r for r in res]))
            except Exception:
                break
            for ci, v in enumerate(cols):
                x[v] += delta[ci]
            if max(abs(d) for d in delta) < mp.mpf(10) ** (-dps + 8):
                break
        return [complex(z) for z in x]


def _normalize_point(groups: Sequence[Sequence[complex]]) -> tuple[tuple[complex, ...], ...]:
    out = []
    for grp in groups:
        norm = math.sqrt(sum(abs(z) ** 2 for z in grp))
        v = [z / norm for z in grp]
        k = max(range(len(v)), key=lambda j: abs(v[j]))
        phase = v[k] / abs(v[k])
        v = [z / phase for z in v]
        v[k] = complex(v[k].real, 0.0)  # pin the rotated pivot exactly real
        out.append(tuple(v))
    return tuple(out)


def _cluster(points: list[list[complex]], flat: _FlatSystem, radius: float) -> list[list[int]]:
    n = len(points)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    groups = [flat.groups_of(p) for p in points]
    for a in range(n):
        for b in range(a + 1, n):
            if _projective_distance(groups[a], groups[b]) < radius:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    clusters: dict[int, list[int]] = {}
    for a in range(n):
        clusters.setdefault(find(a), []).append(a)
    return [sorted(v) for _, v in sorted(clusters.items())]


def solve(game: Game, cfg: TrackerConfig | None = None, seed: int = 0) -> tuple[list[Solution], TrackReport]:
    """All isolated solutions of the game's equilibrium system.

    Tracks one path per block derangement from the product start system to
    the game's system along ``H = gamma (1-t) G + t F``.  Endpoints are
    deduplicated by projective distance; cluster size is reported as the
    multiplicity.  Identical (game, cfg, seed) inputs reproduce identical
    output bit for bit.
    """
    cfg = cfg or TrackerConfig()
    fmt = game.format
    if fmt.classify() is Classification.BEYOND:
        raise FormatError("beyond-boundary format: use the resultant module instead")
    start = build_start_system(fmt, seed)
    flat = _FlatSystem(fmt)
    G = flat.start_coeffs(start.linears)
    F = flat.target_coeffs(game)
    exact_F = flat.target_coeffs_exact(game)
    if cfg.gamma is not None:
        gamma = complex(cfg.gamma)
    else:
        angle = float(np.random.default_rng((seed, 97)).uniform(0.15, 2 * math.pi - 0.15))
        gamma = cmath.exp(1j * angle)

    def run(idx_point):
        idx, pt = idx_point
        return idx, _track_path(flat, G, F, gamma, pt, cfg)

    tasks = list(enumerate(start.points))
    if cfg.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = dict(pool.map(run, tasks))
        ends = [results[i] for i in range(len(tasks))]
    else:
        ends = [run(t)[1] for t in tasks]

    failures = tuple((i, e.reason) for i, e in enumerate(ends) if not e.success)
    good = [e.x for e in ends if e.success]
    if not good:
        raise SolveError("all continuation paths failed")
    report = TrackReport(n_paths=len(ends), failures=failures)

    clusters = _cluster(good, flat, cfg.endgame_radius)
    solutions = []
    Fc = F.tolist()
    for members in clusters:
        rep = good[members[0]]
        mult = len(members)
        if mult > 1:
            rep = _polish_cluster_mp(flat, exact_F, rep)
        groups = _normalize_point(flat.groups_of(rep))
        flat_pt = [z for grp in groups for z in grp]
        residual = max(abs(v) for v in flat.residuals(Fc, flat_pt))
        _, cols = _pivot_cols(flat, flat_pt)
        J = flat.jacobian(Fc, flat_pt, cols)
        sv = np.linalg.svd(J, compute_uv=False)
        smax = float(sv[0]) if sv.size else 0.0
        tol_rank = max(smax, 1.0) * 1e-8
        rank_drop = int(np.sum(sv < tol_rank))
        condition = float("inf") if sv[-1] == 0 else float(smax / sv[-1])
        is_real = all(abs(z.imag) < cfg.real_tol for grp in groups for z in grp)
        simplex = None
        borderline = False
        if is_real:
            mins = min(z.real for grp in groups for z in grp)
            if mins > cfg.positivity_tol:
                simplex = tuple(
                    tuple(z.real / sum(w.real for w in grp) for z in grp) for grp in groups
                )
            elif abs(mins) <= cfg.positivity_tol:
                borderline = True
        solutions.append(
            Solution(
                point=groups,
                residual=residual,
                multiplicity=mult,
                is_real=is_real,
                simplex_rep=simplex,
                condition=condition,
                nonisolated_suspected=rank_drop >= 2,
                positivity_borderline=borderline,
            )
        )
    solutions.sort(key=lambda s: tuple((round(z.real, 9), round(z.imag, 9)) for grp in s.point for z in grp))
    return solutions, report


# ---------------------------------------------------------------------------
# exact two-player solver


@dataclass(frozen=True)
class TwoPlayerSolution:
    """Exact projective solution of a two-player system."""

    pi1: tuple[Fraction, ...]
    pi2: tuple[Fraction, ...]
    simplex_rep: tuple[tuple[Fraction, ...], ...] | None


def _difference_rows(game: Game, i: int) -> list[list[Fraction]]:
    """Rows Delta f^(i)_{1,k}, k = 2..d_i, as linear forms on the other group."""
    fmt = game.format
    other = 2 if i == 1 else 1
    rows = []
    for k in range(2, fmt.d[i - 1] + 1):
        row = []
        for j in range(1, fmt.d[other - 1] + 1):
            row.append(difference_coefficient(game, i, k, (j,)))
        rows.append(row)
    return rows


def _exact_simplex(vec: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    if any(v == 0 for v in vec):
        return None
    pos = all(v > 0 for v in vec)
    neg = all(v < 0 for v in vec)
    if not (pos or neg):
        return None
    total = sum(vec)
    return tuple(v / total for v in vec)


def solve_two_player(game: Game) -> list[TwoPlayerSolution] | PositiveDimensional:
    """Exact solutions for n = 2; rank deficiency is reported, not raised."""
    from . import linalg

    fmt = game.format
    if fmt.n != 2:
        raise FormatError("two-player solver needs exactly two players")
    # player 1's differences constrain pi^(2) and vice versa
    k2 = linalg.kernel_basis(linalg.mat(_difference_rows(game, 1)))
    k1 = linalg.kernel_basis(linalg.mat(_difference_rows(game, 2)))
    if len(k1) == 0 or len(k2) == 0:
        return []
    if len(k1) > 1 or len(k2) > 1:
        return PositiveDimensional("a payoff-difference matrix is rank-deficient")
    pi1, pi2 = tuple(k1[0]), tuple(k2[0])
    s1, s2 = _exact_simplex(pi1), _exact_simplex(pi2)
    simplex = (s1, s2) if (s1 is not None and s2 is not None) else None
    return [TwoPlayerSolution(pi1, pi2, simplex)]


# ---------------------------------------------------------------------------
# exact binary three-player solver


@dataclass(frozen=True)
class QuadraticRoot:
    root: tuple  # [u : v], exact Fractions when rational, else complex
    multiplicity: int
    point: tuple | None  # reconstructed (pi1, pi2, pi3), None when undetermined


@dataclass(frozen=True)
class Quadratic222:
    """Reduction of a (2,2,2) system to one binary quadratic in pi^(3)."""

    coefficients: tuple[Fraction, Fraction, Fraction]  # A u^2 + B uv + C v^2
    discriminant: Fraction
    roots: tuple[QuadraticRoot, ...]

    @property
    def is_double(self) -> bool:
        return self.discriminant == 0


def _section_coeffs(game: Game) -> list[list[list[Fraction]]]:
    """The three 2x2 payoff-difference matrices of a (2,2,2) game."""
    a = []
    for i in (1, 2, 3):
        rows = []
        for r in (1, 2):
            rows.append([difference_coefficient(game, i, 2, (r, c)) for c in (1, 2)])
        a.append(rows)
    return a


def _kernel_dir_2(c0: Fraction, c1: Fraction) -> tuple[Fraction, Fraction] | None:
    """Projective zero of the binary linear form c0*u + c1*v."""
    if c0 == 0 and c1 == 0:
        return None
    return (c1, -c0)


def _sqrt_exact(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def solve_222_exact(game: Game) -> Quadratic222 | PositiveDimensional:
    """Exact reduction of a binary three-player game to a binary quadratic.

    Eliminates pi^(1) and pi^(2) through the first two equations, leaving a
    quadratic in pi^(3); its discriminant vanishes exactly when the scheme
    is a double point, and an identically zero quadratic flags a
    positive-dimensional scheme.
    """
    fmt = game.format
    if fmt.d != (2, 2, 2):
        raise FormatError("exact quadratic reduction needs format (2,2,2)")
    a1, a2, a3 = _section_coeffs(game)
    if all(c == 0 for row in a1 for c in row) or all(c == 0 for row in a2 for c in row):
        raise DomainError("first two payoff-difference forms must be nonzero")

    # pi^(1), pi^(2) as linear functions of pi^(3) = (u, v)
    def pi1_of(u, v):
        return (a2[1][0] * u + a2[1][1] * v, -(a2[0][0] * u + a2[0][1] * v))

    def pi2_of(u, v):
        return (a1[1][0] * u + a1[1][1] * v, -(a1[0][0] * u + a1[0][1] * v))

    # expand f3(pi1(u,v), pi2(u,v)) = A u^2 + B uv + C v^2
    A = Fraction(0)
    B = Fraction(0)
    C = Fraction(0)
    for i in (0, 1):
        for j in (0, 1):
            c = a3[i][j]
            if c == 0:
                continue
            # (p u + q v)(r u + s v)
            p, q = (a2[1][0], a2[1][1]) if i == 0 else (-a2[0][0], -a2[0][1])
            r, s = (a1[1][0], a1[1][1]) if j == 0 else (-a1[0][0], -a1[0][1])
            A += c * p * r
            B += c * (p * s + q * r)
            C += c * q * s
    disc = B * B - 4 * A * C
    if A == 0 and B == 0 and C == 0:
        return PositiveDimensional("quadratic vanishes identically")

    roots: list[tuple[tuple, int]] = []
    if A != 0:
        sq = _sqrt_exact(disc)
        if disc == 0:
            roots.append(((-B / (2 * A), Fraction(1)), 2))
        elif sq is not None:
            roots.append((((-B + sq) / (2 * A), Fraction(1)), 1))
            roots.append((((-B - sq) / (2 * A), Fraction(1)), 1))
        else:
            z = cmath.sqrt(complex(disc))
            roots.append((((-complex(B) + z) / (2 * complex(A)), 1.0 + 0j), 1))
            roots.append((((-complex(B) - z) / (2 * complex(A)), 1.0 + 0j), 1))
    elif B != 0:
        roots.append(((Fraction(1), Fraction(0)), 1))
        roots.append(((-C / B, Fraction(1)), 1))
    else:  # A = B = 0, C != 0: double root at v = 0
        roots.append(((Fraction(1), Fraction(0)), 2))

    outerroots = []
    for (u, v), mult in roots:
        point = _reconstruct_222(a1, a2, a3, u, v)
        outerroots.append(QuadraticRoot((u, v), mult, point))
    return Quadratic222((A, B, C), disc, tuple(outerroots))


def _reconstruct_222(a1, a2, a3, u, v):
    """Recover (pi1, pi2, pi3) over a root [u:v] of the eliminant quadratic.

    The elimination formulas can degenerate to the zero vector when a form
    is reducible and the root kills its second factor; the remaining
    equations then still pin the point, so fall back on them.
    """
    exact = isinstance(u, Fraction) and isinstance(v, Fraction)

    def lin_zero(c0, c1):
        if exact:
            return _kernel_dir_2(Fraction(c0), Fraction(c1))
        if abs(c0) < 1e-12 and abs(c1) < 1e-12:
            return None
        return (c1, -c0)

    # f1(., pi3) is linear in pi^(2); f2(., pi3) linear in pi^(1)
    pi2 = lin_zero(a1[0][0] * u + a1[0][1] * v, a1[1][0] * u + a1[1][1] * v)
    pi1 = lin_zero(a2[0][0] * u + a2[0][1] * v, a2[1][0] * u + a2[1][1] * v)
    if pi1 is None and pi2 is not None:
        pi1 = lin_zero(
            a3[0][0] * pi2[0] + a3[0][1] * pi2[1],
            a3[1][0] * pi2[0] + a3[1][1] * pi2[1],
        )
    if pi2 is None and pi1 is not None:
        pi2 = lin_zero(
            a3[0][0] * pi1[0] + a3[1][0] * pi1[1],
            a3[0][1] * pi1[0] + a3[1][1] * pi1[1],
        )
    if pi1 is None or pi2 is None:
        return None
    return (tuple(pi1), tuple(pi2), (u, v))
