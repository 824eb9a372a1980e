"""Smoothness and box-counting analysis of the visible component f1.

Box counts use half-open mesh cells anchored at (t_min, y_min); graphs of
sampled functions additionally mark every cell crossed by the linear span
between consecutive samples so thin oscillations are not undercounted. The
Hoelder exponent is fitted from the scaling of the maximal window
oscillation; the dimension estimate is the least-squares slope of
log N_eps against log(1/eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .errors import AnalysisError, ConfigError, ConvergenceError

_BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class BoxCountTable:
    """Rows of (eps, count) with eps strictly decreasing."""

    eps: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        if len(self.eps) != len(self.counts):
            raise AnalysisError("eps and counts must have equal length")
        if not np.all(np.diff(self.eps) < 0):
            raise AnalysisError("eps must be strictly decreasing")

    def rows(self):
        return list(zip(self.eps.tolist(), self.counts.tolist()))


def _validate_eps(eps_list) -> np.ndarray:
    eps = np.asarray(eps_list, dtype=float)
    if len(eps) == 0 or np.any(eps <= 0):
        raise AnalysisError("eps values must be positive")
    if not np.all(np.diff(eps) < 0):
        raise AnalysisError("eps values must be strictly decreasing")
    return eps


def _check_density(t_sorted: np.ndarray, eps_min: float):
    gap = float(np.diff(t_sorted).max()) if len(t_sorted) > 1 else float("inf")
    if gap > eps_min / 4.0:
        raise AnalysisError(
            f"samples too sparse for eps={eps_min:g}: max spacing {gap:.3g} "
            f"exceeds eps/4 = {eps_min / 4.0:.3g}; supply spacing <= eps/4",
            required_spacing=eps_min / 4.0,
        )


def _col_index(x: np.ndarray, x0: float, eps: float, n_cols: int) -> np.ndarray:
    c = np.floor((x - x0) / eps).astype(int)
    return np.clip(c, 0, n_cols - 1)


def _n_cells(span: float, eps: float) -> int:
    n = span / eps
    n_int = round(n)
    if abs(n - n_int) < _BOUNDARY_EPS and n_int >= 1:
        return int(n_int)
    return max(1, int(math.ceil(n)))


def _graph_cells(t, y, eps, anchor):
    """Cells met by the piecewise-linear graph through the samples.

    Cells are half-open; a point exactly on the far edge of the bounding box
    (right edge in t, top edge in y) is assigned to the last cell. When a
    segment crosses a column boundary the crossing value splits the vertical
    span: it is attained in the right column (closed) and only approached in
    the left one (open), so an exact row-boundary hit there does not mark
    the upper row.
    """
    t0, y0 = anchor
    n_cols = _n_cells(float(t[-1] - t0), eps)
    n_rows = _n_cells(float(y.max() - y0), eps)
    col = _col_index(t, t0, eps, n_cols)
    cells = set()

    def row_of(val, open_from_below=False):
        r = (val - y0) / eps
        if open_from_below:
            # value only approached from below: an exact boundary hit stays
            # in the lower row
            r_near = round(r)
            if abs(r - r_near) < _BOUNDARY_EPS:
                return min(int(r_near) - 1, n_rows - 1)
        return min(int(math.floor(r)), n_rows - 1)

    def mark(c, r_lo, r_hi):
        for r in range(r_lo, r_hi + 1):
            cells.add((c, r))

    row = [row_of(float(v)) for v in y]
    for i in range(len(t) - 1):
        c1, c2 = int(col[i]), int(col[i + 1])
        y1, y2 = float(y[i]), float(y[i + 1])
        if c1 == c2:
            mark(c1, min(row[i], row[i + 1]), max(row[i], row[i + 1]))
        else:
            tb = t0 + c2 * eps
            yb = y1 + (y2 - y1) * (tb - t[i]) / (t[i + 1] - t[i])
            # left column: y1 (closed) to yb (open)
            if yb > y1:
                mark(c1, row[i], max(row[i], row_of(yb, open_from_below=True)))
            else:
                mark(c1, min(row[i], row_of(yb)), row[i])
            # right column: yb (closed, attained at tb) to y2
            rb = row_of(yb)
            mark(c2, min(rb, row[i + 1]), max(rb, row[i + 1]))
    return cells


def box_count(
    points: np.ndarray,
    eps_list,
    connect: bool = True,
    anchor: tuple[float, float] | None = None,
) -> BoxCountTable:
    """Count mesh cells met by a planar set for each eps.

    points is an (n, 2) array. With connect=True the rows are treated as
    ordered samples of a function graph and vertical spans between
    consecutive samples are filled; with connect=False each point counts
    individually (scatter clouds). The mesh is anchored at
    (min t, min y) unless an explicit anchor is given.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise AnalysisError("box_count needs an (n, 2) array with n >= 2")
    eps = _validate_eps(eps_list)
    order = np.argsort(pts[:, 0], kind="stable")
    pts = pts[order]
    t, y = pts[:, 0], pts[:, 1]
    if connect:
        _check_density(t, float(eps[-1]))
    if anchor is None:
        anchor = (float(t[0]), float(y.min()))
    counts = []
    for e in eps:
        e = float(e)
        if connect:
            counts.append(len(_graph_cells(t, y, e, anchor)))
        else:
            n_cols = _n_cells(float(t[-1] - anchor[0]), e)
            n_rows = _n_cells(float(y.max() - anchor[1]), e)
            c = _col_index(t, anchor[0], e, n_cols)
            r = np.minimum(np.floor((y - anchor[1]) / e).astype(int), n_rows - 1)
            counts.append(len(set(zip(c.tolist(), r.tolist()))))
    return BoxCountTable(eps=eps, counts=np.asarray(counts, dtype=int))


@dataclass(frozen=True)
class DimensionFit:
    dim: float
    r_squared: float
    local_slopes: list[float]
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "r_squared": self.r_squared,
            "local_slopes": self.local_slopes,
            "degenerate": self.degenerate,
        }


def estimate_box_dimension(table: BoxCountTable) -> DimensionFit:
    """Least-squares slope of log N_eps against log(1/eps)."""
    if len(table.eps) < 4:
        raise AnalysisError("need at least 4 rows to fit a dimension")
    if np.all(table.counts == table.counts[0]):
        return DimensionFit(dim=0.0, r_squared=1.0, local_slopes=[], degenerate=True)
    x = np.log(1.0 / table.eps)
    ylog = np.log(table.counts.astype(float))
    slope, intercept = np.polyfit(x, ylog, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((ylog - pred) ** 2))
    ss_tot = float(np.sum((ylog - ylog.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    local = (np.diff(ylog) / np.diff(x)).tolist()
    return DimensionFit(dim=float(slope), r_squared=r2, local_slopes=local)


@dataclass(frozen=True)
class HolderEstimate:
    alpha: float
    constant: float
    scales: list[float]
    oscillations: list[float]
    fit_residual: float
    monotone_warning: bool = False
    audit_fraction: float = float("nan")

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "constant": self.constant,
            "scales": self.scales,
            "oscillations": self.oscillations,
            "fit_residual": self.fit_residual,
            "monotone_warning": self.monotone_warning,
            "audit_fraction": self.audit_fraction,
        }


def default_dyadic_scales(span: float, n: int = 7, coarsest_frac: float = 0.25) -> list[float]:
    """Scales span*coarsest_frac, halved n times (decreasing)."""
    return [span * coarsest_frac * 0.5**i for i in range(n)]


def _window_oscillation(y: np.ndarray, width: int) -> float:
    mx = maximum_filter1d(y, size=width, mode="nearest")
    mn = minimum_filter1d(y, size=width, mode="nearest")
    half = width // 2
    lo, hi = half, len(y) - (width - 1 - half)
    if hi <= lo:
        return float(y.max() - y.min())
    return float((mx[lo:hi] - mn[lo:hi]).max())


def estimate_holder(
    grid: np.ndarray, y: np.ndarray, scales: list[float] | None = None
) -> HolderEstimate:
    """Fit |f(t) - f(t')| <= K |t - t'|^alpha from window-oscillation scaling.

    For each scale delta the maximal oscillation over length-delta windows
    is computed on a uniform resampling; log osc against log delta gives
    alpha (clamped to (0, 1]). The constant is inflated so the inequality
    holds for all pair separations inside the fitted scale range.
    """
    grid = np.asarray(grid, dtype=float)
    y = np.asarray(y, dtype=float)
    span = float(grid[-1] - grid[0])
    m = len(grid) - 1
    uni = np.linspace(grid[0], grid[-1], m + 1)
    yu = np.interp(uni, grid, y)
    h = span / m
    if scales is None:
        scales = default_dyadic_scales(span)
    scales = sorted((float(s) for s in scales), reverse=True)
    if scales[0] > span / 4.0 + 1e-12 or scales[-1] <= h:
        raise AnalysisError(
            "scales must lie within (grid spacing, span/4]",
            spacing=h,
            span=span,
        )
    osc = []
    for delta in scales:
        width = max(2, int(round(delta / h)) + 1)
        osc.append(_window_oscillation(yu, width))
    osc = np.asarray(osc)
    if np.any(osc <= 0):
        # flat function: Lipschitz with any constant; report alpha = 1
        return HolderEstimate(
            alpha=1.0, constant=1e-12, scales=list(scales),
            oscillations=osc.tolist(), fit_residual=0.0,
        )
    # oscillation should shrink with the scale; restrict to the monotone head
    warning = False
    keep = len(osc)
    for i in range(1, len(osc)):
        if osc[i] > osc[i - 1] * (1 + 1e-9):
            keep = i
            warning = True
            break
    use_scales = np.asarray(scales[:keep])
    use_osc = osc[:keep]
    if len(use_osc) < 2:
        raise AnalysisError("not enough monotone oscillation scales to fit")
    lx, ly = np.log(use_scales), np.log(use_osc)
    slope, intercept = np.polyfit(lx, ly, 1)
    alpha = float(min(max(slope, 1e-3), 1.0))
    pred = slope * lx + intercept
    residual = float(np.sqrt(np.mean((ly - pred) ** 2)))
    constant = 1.05 * float(np.exp(intercept))
    return HolderEstimate(
        alpha=alpha,
        constant=constant,
        scales=list(scales),
        oscillations=osc.tolist(),
        fit_residual=residual,
        monotone_warning=warning,
    )


def audit_holder(
    grid: np.ndarray,
    y: np.ndarray,
    est: HolderEstimate,
    n_pairs: int = 100_000,
    seed: int = 0,
) -> float:
    """Fraction of random pairs inside the fitted scale range that satisfy
    |f(t) - f(t')| <= K |t - t'|^alpha."""
    rng = np.random.default_rng(seed)
    lo, hi = min(est.scales), max(est.scales)
    t1 = rng.uniform(grid[0], grid[-1], n_pairs)
    sep = rng.uniform(lo, hi, n_pairs) * rng.choice([-1.0, 1.0], n_pairs)
    t2 = np.clip(t1 + sep, grid[0], grid[-1])
    good = np.abs(t2 - t1) >= lo
    t1, t2 = t1[good], t2[good]
    f1 = np.interp(t1, grid, y)
    f2 = np.interp(t2, grid, y)
    ok = np.abs(f1 - f2) <= est.constant * np.abs(t2 - t1) ** est.alpha
    return float(ok.mean())


@dataclass(frozen=True)
class BoundCheck:
    dim: float
    alpha: float
    slack: float
    bound: float
    margin: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "alpha": self.alpha,
            "slack": self.slack,
            "bound": self.bound,
            "margin": self.margin,
            "passed": self.passed,
        }


def check_dimension_bound(dim: float, alpha: float, slack: float = 0.1) -> BoundCheck:
    """Verdict for dim <= 2 - alpha + slack."""
    bound = 2.0 - alpha + slack
    return BoundCheck(
        dim=dim,
        alpha=alpha,
        slack=slack,
        bound=bound,
        margin=bound - dim,
        passed=dim <= bound,
    )


def classic_fif_oracle(
    t_knots,
    v_knots,
    b_consts,
    k: float,
    grid: np.ndarray | None = None,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> tuple[np.ndarray, np.ndarray]:
    """Scalar fractal interpolant via an independent Picard loop.

    Solves f(L_j(t)) = b_j * k * f(t) + p_j(t) for constant b_j and the
    linear contraction x -> k*x, with affine p_j pinned by the scalar
    endpoint conditions. Shares no evaluation code with the vector solver;
    used as the equivalence oracle for the decoupled configuration.
    """
    tk = np.asarray(t_knots, dtype=float)
    vk = np.asarray(v_knots, dtype=float)
    n = len(tk) - 1
    b = np.asarray(b_consts, dtype=float)
    if b.shape == ():
        b = np.full(n, float(b))
    if np.any(np.abs(b) * abs(k) >= 1.0):
        raise ConfigError("oracle needs |b_j|*k < 1 for convergence")
    t0, tN = tk[0], tk[-1]
    a = (tk[1:] - tk[:-1]) / (tN - t0)
    off = tk[:-1] - a * t0
    p_left = vk[:-1] - b * k * vk[0]
    p_right = vk[1:] - b * k * vk[-1]
    if grid is None:
        grid = np.linspace(t0, tN, 257)
    grid = np.asarray(grid, dtype=float)
    f = np.interp(grid, tk, vk)
    for _ in range(max_iter):
        f_new = np.empty_like(f)
        for j in range(n):
            mask = (grid >= tk[j] - 1e-12) & (grid <= tk[j + 1] + 1e-12)
            u = np.clip((grid[mask] - off[j]) / a[j], t0, tN)
            frac = (u - t0) / (tN - t0)
            p_u = p_left[j] + (p_right[j] - p_left[j]) * frac
            f_new[mask] = b[j] * k * np.interp(u, grid, f) + p_u
        change = float(np.abs(f_new - f).max())
        f = f_new
        if change < tol:
            return grid, f
    raise ConvergenceError("scalar oracle did not converge")
