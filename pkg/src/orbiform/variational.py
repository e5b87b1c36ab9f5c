"""The constrained quadratic functional whose minimizers are bang-bang.

State is the curvature-radius deviation from its constant-width mean, sampled
on a grid. The admissible set combines a linear subspace (odd harmonics of
degree >= 3: antipodally antisymmetric, orthogonal to the translation modes)
with a pointwise box |value| <= (dim-1) * width / 2. The functional is the
Green quadratic form, strictly negative definite on the subspace, so its
minimum over the box sits at extreme points: a.e. on the boundary of the box
wherever the gradient (twice the mean-free support function) is nonzero.

Projection onto the intersection is Dykstra's alternating scheme between the
spectral subspace projector and the clip; minimization is projected gradient
descent with a doubling/halving step.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from . import shapeio
from .body2d import area_spectral, body_from_deviation
from .harmonic_core import (
    GridFn,
    SpectralCoeffs,
    SphereGrid,
    _basis_matrix,
    analyze,
    apply_green,
    coeff_degrees,
    green_multipliers,
    project_linear_H,
    quadratic_form_green,
    synthesize,
)

__all__ = [
    "AdmissibleR",
    "BangBangReport",
    "MinimizeConfig",
    "NumericalFailure",
    "OptimizationResult",
    "box_bound",
    "project_admissible",
    "phi",
    "phi_gradient",
    "support_deviation",
    "minimize",
    "minimize_restarts",
    "bang_bang_report",
    "canonical_align",
    "result_to_json",
]

DYKSTRA_TOL = 1e-12
DYKSTRA_MAX_SWEEPS = 10000
STEP_GROWTH_CAP = 2.0**10  # line-search eta never exceeds this multiple of eta0


class NumericalFailure(RuntimeError):
    """An iterative scheme failed to converge within its sweep budget."""


def box_bound(dim: int, width: float) -> float:
    """Pointwise bound on the curvature deviation: (dim - 1) * width / 2."""
    return 0.5 * (dim - 1) * width


@dataclass(frozen=True)
class AdmissibleR:
    """Admissible curvature deviation: grid samples plus their spectral form.

    Invariants, enforced at construction: |values| within 1e-12 of the box
    bound, antipodal antisymmetry within 1e-12, degree-1 coefficients below
    1e-12 of the norm. The samples themselves are unrestricted beyond that;
    clipped and other rough states are first-class members, and coeffs is
    their analysis window at the stated band limit, not a reconstruction.
    """

    width: float
    grid: SphereGrid
    max_degree: int
    values: np.ndarray
    coeffs: SpectralCoeffs

    def __post_init__(self):
        if not np.isfinite(self.width) or self.width <= 0:
            raise ValueError(f"width must be finite and > 0, got {self.width}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.size,):
            raise ValueError("values shape does not match the grid")
        bound = box_bound(self.grid.dim, self.width)
        excess = float(np.max(np.abs(vals))) - bound
        if excess > 1e-12:
            raise ValueError(f"box bound violated by {excess:.3e}")
        anti = float(np.max(np.abs(vals + vals[self.grid.antipode_index])))
        if anti > 1e-12:
            raise ValueError(f"antipodal antisymmetry violated by {anti:.3e}")
        sl = self.coeffs.degree_slice(1)
        block = self.coeffs.values[sl]
        if block.size:
            lim = 1e-12 * max(self.coeffs.norm(), np.finfo(float).tiny)
            if float(np.max(np.abs(block))) > lim:
                raise ValueError("degree-1 component violates orthogonality to translations")

    @property
    def dim(self) -> int:
        return self.grid.dim


def admissible_from_values(
    width: float, grid: SphereGrid, max_degree: int, values: GridFn
) -> AdmissibleR:
    """Wrap grid samples as an AdmissibleR, computing the cached transform."""
    vals = np.asarray(values, dtype=float)
    return AdmissibleR(width, grid, max_degree, vals, analyze(grid, vals, max_degree))


class _Workspace:
    """Cached matrices for one (grid, max_degree) pair.

    Two different linear objects live here. The functional only sees the
    analysis window: basis columns at odd degrees >= 3 up to max_degree, with
    their Green multipliers, give phi and its gradient. The constraint
    subspace for the projection is much bigger: all antipodally antisymmetric
    sample vectors orthogonal to the degree-1 harmonics. Samples are not
    forced to be band-limited; a clipped square wave is a perfectly good
    admissible point whose high harmonics simply fall outside the window.
    """

    def __init__(self, grid: SphereGrid, max_degree: int):
        if max_degree < 3:
            raise ValueError("the admissible subspace needs max_degree >= 3")
        if grid.resolution < 2 * max_degree + 2:
            raise ValueError(
                f"grid resolution {grid.resolution} cannot carry degree {max_degree}"
            )
        self.grid = grid
        self.max_degree = max_degree
        basis = _basis_matrix(grid.dim, grid.resolution, max_degree)
        degs = coeff_degrees(grid.dim, max_degree)
        mask = (degs % 2 == 1) & (degs >= 3)
        self.basis_h = np.ascontiguousarray(basis[:, mask])
        self.basis_h_w = np.ascontiguousarray(basis[:, mask] * grid.weights[:, None])
        self.green = green_multipliers(grid.dim, max_degree).values[degs[mask]]
        mask1 = degs == 1
        self.basis_1 = np.ascontiguousarray(basis[:, mask1])
        self.basis_1_w = np.ascontiguousarray(basis[:, mask1] * grid.weights[:, None])
        self.antipode = grid.antipode_index

    def to_subspace(self, values: GridFn) -> np.ndarray:
        return self.basis_h_w.T @ values

    def from_subspace(self, coeffs_h: np.ndarray) -> GridFn:
        return self.basis_h @ coeffs_h

    def project_s(self, values: GridFn) -> GridFn:
        """Orthogonal projection onto {antisymmetric} ∩ {degree-1 component 0}."""
        x = 0.5 * (values - values[self.antipode])
        return x - self.basis_1 @ (self.basis_1_w.T @ x)

    def phi_of(self, coeffs_h: np.ndarray) -> float:
        return float(np.dot(self.green * coeffs_h, coeffs_h))

    def gradient_values(self, coeffs_h: np.ndarray) -> GridFn:
        # gradient of phi in the grid L2 metric: 2 * (Green applied to the state)
        return 2.0 * self.from_subspace(self.green * coeffs_h)


def _dykstra_core(
    ws: _Workspace,
    values: GridFn,
    bound: float,
    tol: float,
    max_sweeps: int,
    q: np.ndarray | None = None,
) -> tuple[GridFn, np.ndarray, np.ndarray, bool, int]:
    """Dykstra's alternating projections onto subspace-and-box.

    The subspace is affine, so only the box keeps a correction increment q;
    passing a q from a previous call with a nearby input warm-starts the dual
    variables. Stagnation is measured on the subspace-step outputs (the box
    outputs can park on a vertex while the increments still move). The final
    point is the last subspace output with any residual box excess clipped,
    so it satisfies the admissibility invariants with margin.
    Returns (values, window coefficients, q, converged flag, sweeps used).
    """
    x = np.array(values, dtype=float, copy=True)
    q = np.zeros_like(x) if q is None else np.array(q, dtype=float, copy=True)
    converged = False
    sweeps = 0
    y = None
    y_prev = None
    feas_gate = bound + 10.0 * tol
    for sweeps in range(1, max_sweeps + 1):
        y = ws.project_s(x)
        # stagnation alone is not enough: the box output can park on a vertex
        # for a stretch of sweeps while y holds still far outside the box
        if (
            y_prev is not None
            and float(np.max(np.abs(y - y_prev))) <= tol
            and float(np.max(np.abs(y))) <= feas_gate
        ):
            converged = True
            break
        y_prev = y
        t = y + q
        x = np.clip(t, -bound, bound)
        np.subtract(t, x, out=q)
    # terminal polish: alternate plain projections until the subspace-side
    # point is inside the box up to the admissibility tolerance, then hand
    # that point back (its antisymmetry and degree-1 component are exact)
    for _ in range(256):
        if float(np.max(np.abs(y))) - bound <= tol:
            break
        y = ws.project_s(np.clip(y, -bound, bound))
    return y, ws.to_subspace(y), q, converged, sweeps


def project_admissible(
    values: GridFn,
    width: float,
    grid: SphereGrid,
    max_degree: int,
    tol: float = DYKSTRA_TOL,
    max_sweeps: int = DYKSTRA_MAX_SWEEPS,
) -> AdmissibleR:
    """Nearest admissible point in the (weighted) L2 sense, by Dykstra sweeps."""
    ws = _workspace_for(grid, max_degree)
    bound = box_bound(grid.dim, width)
    projected, _, _, converged, _ = _dykstra_core(ws, values, bound, tol, max_sweeps)
    if not converged:
        raise NumericalFailure(
            f"Dykstra projection did not converge in {max_sweeps} sweeps "
            "(this normally signals a grid or antipode-table defect)"
        )
    return admissible_from_values(width, grid, max_degree, projected)


_WORKSPACES: dict[tuple[int, int, int], _Workspace] = {}


def _workspace_for(grid: SphereGrid, max_degree: int) -> _Workspace:
    key = (grid.dim, grid.resolution, max_degree)
    ws = _WORKSPACES.get(key)
    if ws is None or ws.grid is not grid:
        ws = _Workspace(grid, max_degree)
        if len(_WORKSPACES) > 8:
            _WORKSPACES.clear()
        _WORKSPACES[key] = ws
    return ws


def phi(r: AdmissibleR) -> float:
    """The Green quadratic form of the deviation; <= 0, and 0 only at zero."""
    return quadratic_form_green(project_linear_H(r.coeffs))


def support_deviation(r: AdmissibleR) -> GridFn:
    """Mean-free support function generated by the deviation (Green applied)."""
    return synthesize(apply_green(project_linear_H(r.coeffs)), r.grid)


def phi_gradient(r: AdmissibleR) -> GridFn:
    """L2 gradient of phi at r: twice the mean-free support function."""
    return 2.0 * support_deviation(r)


@dataclass(frozen=True)
class BangBangReport:
    """Measure fractions describing how bang-bang a deviation is.

    violation: mass where the support deviation is decisively nonzero yet the
    state is strictly inside the box. sign_consistency: mass where the sign
    pairing (positive support <-> lower box face, negative <-> upper) holds,
    counting the undecided band as consistent.
    """

    epsilon: float
    violation: float
    sign_consistency: float


def bang_bang_report(r: AdmissibleR, epsilon: float = 1e-3) -> BangBangReport:
    """Classify nodes with thresholds epsilon * width on both fields."""
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    B = r.width
    eps = epsilon * B
    bound = box_bound(r.dim, B)
    pbar = support_deviation(r)
    w = r.grid.weights
    total = float(np.sum(w))

    decided_pos = pbar > eps
    decided_neg = pbar < -eps
    interior = np.abs(r.values) < bound - eps

    violation = float(np.sum(w[(decided_pos | decided_neg) & interior])) / total

    ok_pos = decided_pos & (np.abs(r.values + bound) <= eps)
    ok_neg = decided_neg & (np.abs(r.values - bound) <= eps)
    consistent = (~decided_pos & ~decided_neg) | ok_pos | ok_neg
    sign_consistency = float(np.sum(w[consistent])) / total
    return BangBangReport(epsilon, violation, sign_consistency)


def canonical_align(r: AdmissibleR) -> AdmissibleR:
    """Shift the angular origin so the support-deviation maximum sits at node 0.

    Implemented as an exact circular node shift (a grid-aligned rotation): the
    box and antisymmetry invariants are preserved exactly and the operation is
    idempotent. Alignment accuracy is one grid step. Dim 2 only; a zero
    deviation is returned unchanged. Ties break toward the smallest
    nonnegative rotation.
    """
    if r.dim != 2:
        raise ValueError("canonical_align is defined for dim 2 only")
    pbar = support_deviation(r)
    if float(np.max(np.abs(pbar))) <= 1e-14 * max(1.0, r.width):
        return r
    shift = int(np.argmax(pbar))
    if shift == 0:
        return r
    rolled = np.roll(r.values, -shift)
    return admissible_from_values(r.width, r.grid, r.max_degree, rolled)


@dataclass(frozen=True)
class MinimizeConfig:
    """Knobs for the multi-restart projected descent."""

    restarts: int = 16
    max_iterations: int = 50000
    rel_tol: float = 1e-12
    init_max_degree: int = 15
    threads: int | None = None  # None: read ORBIFORM_THREADS, default 1


@dataclass(frozen=True)
class OptimizationResult:
    minimizer: AdmissibleR
    phi_value: float
    area: float | None
    iterations: int
    seed: int
    restart_index: int
    bangbang_violation: float
    sign_consistency: float
    converged: bool
    equivalence_warning: bool = False

    def __post_init__(self):
        if self.phi_value > 1e-12:
            raise ValueError(f"phi must be <= 0, got {self.phi_value}")


def _initial_values(ws: _Workspace, width: float, rng: np.random.Generator) -> GridFn:
    """Uniform random coefficients on odd degrees 3..init cap, synthesized."""
    degs = coeff_degrees(ws.grid.dim, ws.max_degree)
    mask = (degs % 2 == 1) & (degs >= 3)
    sub_degs = degs[mask]
    cap = min(15, ws.max_degree)
    c = np.zeros(sub_degs.size)
    active = sub_degs <= cap
    c[active] = rng.uniform(-0.5 * width, 0.5 * width, size=int(np.sum(active)))
    return ws.from_subspace(c)


def _descend(
    ws: _Workspace,
    width: float,
    start_values: GridFn,
    cfg: MinimizeConfig,
) -> tuple[GridFn, float, int, bool]:
    """Projected gradient descent with doubling/halving step control."""
    bound = box_bound(ws.grid.dim, width)
    g3 = abs(ws.green[0])  # first kept degree is 3: the flattest multiplier
    eta0 = 1.0 / (2.0 * g3)
    eta = eta0
    eta_max = STEP_GROWTH_CAP * eta0

    x, c, q, x_ok, _ = _dykstra_core(
        ws, start_values, bound, DYKSTRA_TOL, DYKSTRA_MAX_SWEEPS
    )
    phi_cur = ws.phi_of(c)
    iterations = 0
    converged = False

    while iterations < cfg.max_iterations:
        iterations += 1
        grad = ws.gradient_values(c)
        # warm-start the box increments: successive inputs are close, and the
        # dual creep they drive is the expensive part of each projection
        candidate, c_new, q, proj_ok, _ = _dykstra_core(
            ws, x - eta * grad, bound, DYKSTRA_TOL, DYKSTRA_MAX_SWEEPS, q=q
        )
        phi_new = ws.phi_of(c_new)
        if phi_new < phi_cur:
            rel_dec = (phi_cur - phi_new) / max(abs(phi_cur), np.finfo(float).tiny)
            x, c, phi_cur, x_ok = candidate, c_new, phi_new, proj_ok
            eta = min(eta * 2.0, eta_max)
            if rel_dec < cfg.rel_tol:
                converged = True
                break
        else:
            # candidate == x at a converged projection is a projected-gradient
            # fixed point; the same point is the output for every smaller eta
            if proj_ok and float(np.max(np.abs(candidate - x))) <= 1e-13 * max(1.0, bound):
                converged = True
                break
            eta *= 0.5
            if eta < 1e-18 * eta0:
                converged = True
                break
    if not x_ok:
        # the accepted point slipped through a capped projection; the final
        # answer must satisfy the admissibility invariants, so reproject from
        # scratch (near-feasible input, converges in a handful of sweeps)
        x, c, _, x_ok, _ = _dykstra_core(
            ws, x, bound, DYKSTRA_TOL, DYKSTRA_MAX_SWEEPS
        )
        if not x_ok:
            raise NumericalFailure(
                "final admissibility projection did not converge"
            )
        phi_cur = ws.phi_of(c)
    return x, phi_cur, iterations, converged


def _threads_from_env(cfg: MinimizeConfig) -> int:
    if cfg.threads is not None:
        return max(1, cfg.threads)
    raw = os.environ.get("ORBIFORM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _finish_result(
    ws: _Workspace,
    width: float,
    values: GridFn,
    phi_value: float,
    iterations: int,
    converged: bool,
    seed: int,
    index: int,
    equivalence_warning: bool,
) -> OptimizationResult:
    r = admissible_from_values(width, ws.grid, ws.max_degree, values)
    report = bang_bang_report(r)
    area = None
    if ws.grid.dim == 2:
        body = body_from_deviation(width, apply_green(project_linear_H(r.coeffs)))
        area = area_spectral(body)
    return OptimizationResult(
        minimizer=r,
        phi_value=phi_value,
        area=area,
        iterations=iterations,
        seed=seed,
        restart_index=index,
        bangbang_violation=report.violation,
        sign_consistency=report.sign_consistency,
        converged=converged,
        equivalence_warning=equivalence_warning,
    )


def minimize_restarts(
    width: float,
    grid: SphereGrid,
    max_degree: int,
    seed: int,
    config: MinimizeConfig | None = None,
    equivalence_warning: bool = False,
) -> list[OptimizationResult]:
    """Run every restart and return the per-restart results, index order.

    Restart i draws from default_rng([seed, i]), so results are reproducible
    and independent of execution order; ORBIFORM_THREADS (or config.threads)
    caps how many restarts run concurrently.
    """
    cfg = config or MinimizeConfig()
    if cfg.restarts < 1:
        raise ValueError("restarts must be >= 1")
    ws = _workspace_for(grid, max_degree)

    def run(i: int) -> tuple[GridFn, float, int, bool]:
        rng = np.random.default_rng([seed, i])
        return _descend(ws, width, _initial_values(ws, width, rng), cfg)

    threads = min(_threads_from_env(cfg), cfg.restarts)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(run, range(cfg.restarts)))
    else:
        raw = [run(i) for i in range(cfg.restarts)]

    return [
        _finish_result(ws, width, vals, ph, its, conv, seed, i, equivalence_warning)
        for i, (vals, ph, its, conv) in enumerate(raw)
    ]


def minimize(
    width: float,
    grid: SphereGrid,
    max_degree: int,
    seed: int,
    config: MinimizeConfig | None = None,
    equivalence_warning: bool = False,
) -> OptimizationResult:
    """Best restart by phi; ties break toward the smallest restart index."""
    results = minimize_restarts(width, grid, max_degree, seed, config, equivalence_warning)
    best = results[0]
    for r in results[1:]:
        if r.phi_value < best.phi_value:
            best = r
    return best


def result_to_json(result: OptimizationResult, timestamp: str | None = None) -> str:
    """Serialize a result; key order and float reprs are deterministic."""
    coeffs = project_linear_H(result.minimizer.coeffs)
    payload: dict = {
        "phi": result.phi_value,
        "area": result.area,
        "iterations": result.iterations,
        "seed": result.seed,
        "violation": result.bangbang_violation,
        "sign_consistency": result.sign_consistency,
        "coeffs": shapeio.coeffs_to_entries(coeffs),
    }
    if result.equivalence_warning:
        payload["equivalence_warning"] = True
    if timestamp is not None:
        payload["timestamp"] = timestamp
    return json.dumps(payload, indent=2) + "\n"
