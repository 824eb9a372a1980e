"""Fixed-point computation of the interpolation operator.

The vector interpolant f = (f1, f2) is the fixed point of the operator
(Th)(t) = F_j(L_j^{-1}(t), h(L_j^{-1}(t))) for t in the j-th subinterval.
Functions are represented by samples on a uniform-per-interval grid with
piecewise-linear reads; Picard iteration from the piecewise-linear
interpolant of the data runs until the sup Manhattan distance between
successive iterates drops below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ConvergenceError, OperatorDomainError
from .system import HiddenIFS, InterpolationData

KNOT_AGREEMENT_TOL = 1e-9


@dataclass
class SolverConfig:
    grid_points_per_interval: int = 4096
    tol: float = 1e-10
    max_iter: int = 2000

    def __post_init__(self):
        if self.grid_points_per_interval < 2:
            raise ConfigError("grid_points_per_interval must be >= 2")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")


@dataclass
class SampledVectorFunction:
    """Grid samples of an R^2-valued function on [t0, tN].

    The grid contains every knot t_j exactly; values[:, 0] is the visible
    component f1, values[:, 1] the hidden component f2.
    """

    grid: np.ndarray
    values: np.ndarray

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.grid[0] - 1e-12) or np.any(t > self.grid[-1] + 1e-12):
            raise ConfigError("evaluation point outside the interpolation interval")
        f1 = np.interp(t, self.grid, self.values[:, 0])
        f2 = np.interp(t, self.grid, self.values[:, 1])
        if f1.ndim == 0:
            return float(f1), float(f2)
        return f1, f2

    def copy(self) -> "SampledVectorFunction":
        return SampledVectorFunction(self.grid, self.values.copy())


def make_grid(data: InterpolationData, points_per_interval: int) -> np.ndarray:
    """Uniform grid per subinterval; knots are exact grid points."""
    if points_per_interval < 2:
        raise ConfigError("points_per_interval must be >= 2")
    parts = [
        np.linspace(data.t[j - 1], data.t[j], points_per_interval + 1)
        for j in range(1, data.n_intervals + 1)
    ]
    pieces = [parts[0]] + [p[1:] for p in parts[1:]]
    return np.concatenate(pieces)


def initial_guess(data: InterpolationData, grid: np.ndarray) -> SampledVectorFunction:
    """Piecewise-linear interpolant through all (t_j, v_j, w_j)."""
    values = np.column_stack(
        [np.interp(grid, data.t, data.v), np.interp(grid, data.t, data.w)]
    )
    return SampledVectorFunction(grid=grid, values=values)


def sup_manhattan_distance(a: SampledVectorFunction, b: SampledVectorFunction) -> float:
    return float(np.abs(a.values - b.values).sum(axis=1).max())


def apply_operator(ifs: HiddenIFS, h: SampledVectorFunction) -> SampledVectorFunction:
    """One application of the interpolation operator on the sample grid.

    Interior knots belong to two subintervals; both one-sided values are
    computed and must agree within 1e-9 (they equal the data when h matches
    the interval endpoints), then are reconciled by averaging.
    """
    grid = h.grid
    n = ifs.n_maps
    m = (len(grid) - 1) // n
    data = ifs.data
    out = np.empty_like(h.values)
    left_knot_vals = []
    right_knot_vals = []
    for j in range(1, n + 1):
        lo, hi = (j - 1) * m, j * m
        seg = grid[lo : hi + 1]
        lm = ifs.interval_maps[j - 1]
        u = np.clip(lm.inverse(seg), data.t0, data.tN)
        hv = np.interp(u, grid, h.values[:, 0])
        hw = np.interp(u, grid, h.values[:, 1])
        fv, fw = ifs.eval_F(j, u, hv, hw)
        out[lo : hi + 1, 0] = fv
        out[lo : hi + 1, 1] = fw
        left_knot_vals.append(np.array([fv[0], fw[0]]))
        right_knot_vals.append(np.array([fv[-1], fw[-1]]))
    # reconcile interior knots: right end of interval j vs left end of j+1
    for j in range(1, n):
        k = j * m
        right_of_j = right_knot_vals[j - 1]
        left_of_next = left_knot_vals[j]
        gap = float(np.abs(right_of_j - left_of_next).sum())
        if gap > KNOT_AGREEMENT_TOL:
            raise OperatorDomainError(
                "operator left C(I); input h violated endpoint membership",
                knot=j,
                mismatch=gap,
            )
        out[k] = 0.5 * (right_of_j + left_of_next)
    return SampledVectorFunction(grid=grid, values=out)


@dataclass
class SolveDiagnostics:
    iterations: int = 0
    converged: bool = False
    step_distances: list = field(default_factory=list)
    residual: float = float("nan")
    node_residual: float = float("nan")

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "final_step_distance": self.step_distances[-1] if self.step_distances else None,
            "residual": self.residual,
            "node_residual": self.node_residual,
            "step_distances": self.step_distances,
        }


def node_residual(ifs: HiddenIFS, f: SampledVectorFunction) -> float:
    """Max l1 error of f at the knots against the data points."""
    n = ifs.n_maps
    m = (len(f.grid) - 1) // n
    idx = np.arange(0, len(f.grid), m)
    target = np.column_stack([ifs.data.v, ifs.data.w])
    return float(np.abs(f.values[idx] - target).sum(axis=1).max())


def iterate_to_fixed_point(
    ifs: HiddenIFS, cfg: SolverConfig | None = None
) -> tuple[SampledVectorFunction, SolveDiagnostics]:
    """Picard iteration from the data interpolant until sup-change < tol.

    The strict-contraction property gives no a-priori rate, so the full
    per-iteration distance trace is recorded; non-convergence raises
    ConvergenceError carrying the diagnostics.
    """
    cfg = cfg or SolverConfig()
    grid = make_grid(ifs.data, cfg.grid_points_per_interval)
    h = initial_guess(ifs.data, grid)
    diag = SolveDiagnostics()
    for it in range(1, cfg.max_iter + 1):
        h_next = apply_operator(ifs, h)
        d = sup_manhattan_distance(h_next, h)
        diag.step_distances.append(d)
        diag.iterations = it
        h = h_next
        if d < cfg.tol:
            diag.converged = True
            break
    diag.residual = sup_manhattan_distance(apply_operator(ifs, h), h)
    diag.node_residual = node_residual(ifs, h)
    if not diag.converged:
        raise ConvergenceError(
            f"no convergence after {cfg.max_iter} iterations "
            f"(last step {diag.step_distances[-1]:.3g}, tol {cfg.tol:.3g})",
            diagnostics=diag,
        )
    return h, diag
