"""Assembly and validation of the hidden-variable interpolation IFS.

Given data (t_j, v_j, w_j), interval maps L_j and vertical maps
F_j(t, v, w) = D_j(t) (s_j(v), r_j(w))^T + (p_j(t), q_j(t))^T are derived so
that the system maps g_j(t, v, w) = (L_j(t), F_j(t, v, w)) join up at the
data points. The shift functions p_j, q_j are the unique affine functions
matching the endpoint conditions. A compact invariant rectangle for the
(v, w) coordinates is found by expand-and-verify, and the strict-contraction
property of the F_j in the Manhattan metric is checked by seeded sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ValidationFailure
from .funcs import Affine, Contraction, ScalarFunc

ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class InterpolationData:
    """The generalized data set: abscissae, visible and hidden ordinates."""

    t: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @classmethod
    def from_lists(cls, t, v, w) -> "InterpolationData":
        t = np.asarray(t, dtype=float)
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        if not (len(t) == len(v) == len(w)):
            raise ConfigError(
                f"t, v, w must have equal length, got {len(t)}, {len(v)}, {len(w)}"
            )
        if len(t) < 3:
            raise ConfigError(
                "need at least 3 data points: with 2 the single interval map "
                "is non-contractive, |a| = 1"
            )
        if not np.all(np.diff(t) > 0):
            raise ConfigError("abscissae t must be strictly increasing")
        return cls(t=t, v=v, w=w)

    @property
    def n_intervals(self) -> int:
        return len(self.t) - 1

    @property
    def t0(self) -> float:
        return float(self.t[0])

    @property
    def tN(self) -> float:
        return float(self.t[-1])


@dataclass(frozen=True)
class IntervalMap:
    """L_j(t) = a*t + f mapping [t0, tN] onto the j-th subinterval."""

    a: float
    f: float
    j: int

    def __call__(self, t):
        return self.a * t + self.f

    def inverse(self, t):
        return (t - self.f) / self.a


def derive_interval_maps(data: InterpolationData) -> list[IntervalMap]:
    """Affine interval maps forced by L_j(t0) = t_{j-1}, L_j(tN) = t_j."""
    t = data.t
    span = data.tN - data.t0
    maps = []
    for j in range(1, len(t)):
        a = (t[j] - t[j - 1]) / span
        if abs(a) >= 1.0:
            raise ConfigError(f"non-contractive interval map: |a_{j}| = {abs(a)} >= 1")
        f = t[j - 1] - a * data.t0
        maps.append(IntervalMap(a=float(a), f=float(f), j=j))
    return maps


@dataclass(frozen=True)
class VerticalMap:
    """F_j(t, v, w) = D_j(t) (s(v), r(w))^T + (p(t), q(t))^T."""

    b: ScalarFunc
    c: ScalarFunc
    d: ScalarFunc
    e: ScalarFunc
    s: Contraction
    r: Contraction
    p: Affine
    q: Affine
    j: int

    def __call__(self, t, v, w):
        sv = self.s(v)
        rw = self.r(w)
        fv = self.b(t) * sv + self.c(t) * rw + self.p(t)
        fw = self.d(t) * sv + self.e(t) * rw + self.q(t)
        return fv, fw


def derive_shift_functions(
    data: InterpolationData,
    coeffs: list[dict],
    contractions: list[tuple[Contraction, Contraction]],
) -> list[tuple[Affine, Affine]]:
    """Unique affine shifts (p_j, q_j) pinning F_j to the data endpoints.

    coeffs[j-1] is a dict with keys b, c, d, e (ScalarFunc); contractions is
    the per-interval (s, r) pair.
    """
    t0, tN = data.t0, data.tN
    v, w = data.v, data.w
    out = []
    for j in range(1, data.n_intervals + 1):
        cf = coeffs[j - 1]
        s, r = contractions[j - 1]
        s0, r0 = s(v[0]), r(w[0])
        sN, rN = s(v[-1]), r(w[-1])
        p0 = v[j - 1] - cf["b"](t0) * s0 - cf["c"](t0) * r0
        p1 = v[j] - cf["b"](tN) * sN - cf["c"](tN) * rN
        q0 = w[j - 1] - cf["d"](t0) * s0 - cf["e"](t0) * r0
        q1 = w[j] - cf["d"](tN) * sN - cf["e"](tN) * rN
        out.append(
            (Affine.through(t0, p0, tN, p1), Affine.through(t0, q0, tN, q1))
        )
    return out


@dataclass(frozen=True)
class NormReport:
    """Per-interval column sums of the scaling matrix sup-norms."""

    first_column: list[float]
    second_column: list[float]
    passed: bool
    violations: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "first_column_sums": self.first_column,
            "second_column_sums": self.second_column,
            "passed": self.passed,
            "violations": self.violations,
        }


def validate_norm_conditions(
    coeffs: list[dict], lo: float, hi: float, tol: float = 1e-12
) -> NormReport:
    """Check ||b_j|| + ||d_j|| <= 1 and ||c_j|| + ||e_j|| <= 1 on [lo, hi]."""
    col1, col2, violations = [], [], []
    for idx, cf in enumerate(coeffs, start=1):
        s1 = cf["b"].sup_norm(lo, hi) + cf["d"].sup_norm(lo, hi)
        s2 = cf["c"].sup_norm(lo, hi) + cf["e"].sup_norm(lo, hi)
        col1.append(s1)
        col2.append(s2)
        if s1 > 1.0 + tol:
            violations.append(f"interval {idx}: ||b||+||d|| = {s1:.6g} > 1")
        if s2 > 1.0 + tol:
            violations.append(f"interval {idx}: ||c||+||e|| = {s2:.6g} > 1")
    return NormReport(col1, col2, passed=not violations, violations=violations)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle for the (v, w) coordinates."""

    v_lo: float
    v_hi: float
    w_lo: float
    w_hi: float

    def contains(self, v, w, tol: float = 1e-12) -> bool:
        return bool(
            np.all(v >= self.v_lo - tol)
            and np.all(v <= self.v_hi + tol)
            and np.all(w >= self.w_lo - tol)
            and np.all(w <= self.w_hi + tol)
        )

    def as_dict(self) -> dict:
        return {
            "v_lo": self.v_lo,
            "v_hi": self.v_hi,
            "w_lo": self.w_lo,
            "w_hi": self.w_hi,
        }


def compute_invariant_rect(
    data: InterpolationData,
    vertical_maps: list[VerticalMap],
    margin_growth: float = 1.3,
    max_attempts: int = 40,
    n_t: int = 65,
    n_vw: int = 33,
) -> tuple[Rect, int]:
    """Find a rectangle K with F_j(I x K) inside K by expand-and-verify.

    Invariance is checked on a deterministic lattice (n_t t-samples crossed
    with an n_vw x n_vw grid over the rectangle, boundary included). On
    failure the rectangle absorbs the observed image box and its half-widths
    grow by margin_growth before the next attempt.
    """
    if margin_growth <= 1.0:
        raise ConfigError(f"margin_growth must exceed 1, got {margin_growth}")
    pad_v = max(1e-6, 0.05 * (np.ptp(data.v) + np.ptp(data.w)))
    rect = Rect(
        float(data.v.min() - pad_v),
        float(data.v.max() + pad_v),
        float(data.w.min() - pad_v),
        float(data.w.max() + pad_v),
    )
    ts = np.linspace(data.t0, data.tN, n_t)
    for attempt in range(1, max_attempts + 1):
        vs = np.linspace(rect.v_lo, rect.v_hi, n_vw)
        ws = np.linspace(rect.w_lo, rect.w_hi, n_vw)
        T, V, W = np.meshgrid(ts, vs, ws, indexing="ij")
        ok = True
        img_v_lo = img_v_hi = img_w_lo = img_w_hi = None
        for vm in vertical_maps:
            fv, fw = vm(T, V, W)
            if not rect.contains(fv, fw):
                ok = False
            lo_v, hi_v = float(fv.min()), float(fv.max())
            lo_w, hi_w = float(fw.min()), float(fw.max())
            img_v_lo = lo_v if img_v_lo is None else min(img_v_lo, lo_v)
            img_v_hi = hi_v if img_v_hi is None else max(img_v_hi, hi_v)
            img_w_lo = lo_w if img_w_lo is None else min(img_w_lo, lo_w)
            img_w_hi = hi_w if img_w_hi is None else max(img_w_hi, hi_w)
        if ok:
            return rect, attempt
        v_lo = min(rect.v_lo, img_v_lo)
        v_hi = max(rect.v_hi, img_v_hi)
        w_lo = min(rect.w_lo, img_w_lo)
        w_hi = max(rect.w_hi, img_w_hi)
        cv, cw = 0.5 * (v_lo + v_hi), 0.5 * (w_lo + w_hi)
        hv = 0.5 * (v_hi - v_lo) * margin_growth
        hw = 0.5 * (w_hi - w_lo) * margin_growth
        rect = Rect(cv - hv, cv + hv, cw - hw, cw + hw)
    raise ValidationFailure(
        "no invariant rectangle found; choose bounded contractions or smaller norms",
        attempts=max_attempts,
    )


@dataclass(frozen=True)
class HiddenIFS:
    """The assembled system {I x K; (L_j, F_j)} plus its invariant rectangle."""

    data: InterpolationData
    interval_maps: list[IntervalMap]
    vertical_maps: list[VerticalMap]
    rect: Rect
    rect_attempts: int = 1

    @property
    def n_maps(self) -> int:
        return len(self.interval_maps)

    def _check_j(self, j: int):
        if not 1 <= j <= self.n_maps:
            raise ConfigError(f"map index {j} out of range 1..{self.n_maps}")

    def eval_F(self, j: int, t, v, w):
        self._check_j(j)
        return self.vertical_maps[j - 1](t, v, w)

    def eval_g(self, j: int, t, v, w):
        self._check_j(j)
        fv, fw = self.vertical_maps[j - 1](t, v, w)
        return self.interval_maps[j - 1](t), fv, fw


def assemble_ifs(
    data: InterpolationData,
    coeffs: list[dict],
    contractions: list[tuple[Contraction, Contraction]],
    margin_growth: float = 1.3,
) -> HiddenIFS:
    """Build the full system: interval maps, shifts, invariant rectangle.

    Raises ValidationFailure if the column-sum conditions fail or the
    endpoint identities do not close up to tolerance.
    """
    interval_maps = derive_interval_maps(data)
    norm_report = validate_norm_conditions(coeffs, data.t0, data.tN)
    if not norm_report.passed:
        raise ValidationFailure(
            "scaling matrix norm conditions violated: "
            + "; ".join(norm_report.violations),
            report=norm_report.as_dict(),
        )
    shifts = derive_shift_functions(data, coeffs, contractions)
    vertical_maps = [
        VerticalMap(
            b=cf["b"], c=cf["c"], d=cf["d"], e=cf["e"],
            s=sr[0], r=sr[1], p=pq[0], q=pq[1], j=idx,
        )
        for idx, (cf, sr, pq) in enumerate(zip(coeffs, contractions, shifts), start=1)
    ]
    rect, attempts = compute_invariant_rect(data, vertical_maps, margin_growth)
    ifs = HiddenIFS(data, interval_maps, vertical_maps, rect, attempts)
    _check_endpoint_identities(ifs)
    return ifs


def _check_endpoint_identities(ifs: HiddenIFS):
    data = ifs.data
    for j in range(1, ifs.n_maps + 1):
        lm = ifs.interval_maps[j - 1]
        if abs(lm(data.t0) - data.t[j - 1]) > ENDPOINT_TOL or abs(
            lm(data.tN) - data.t[j]
        ) > ENDPOINT_TOL:
            raise ValidationFailure(f"interval map {j} misses its endpoints")
        fv0, fw0 = ifs.eval_F(j, data.t0, data.v[0], data.w[0])
        fvN, fwN = ifs.eval_F(j, data.tN, data.v[-1], data.w[-1])
        err = max(
            abs(fv0 - data.v[j - 1]),
            abs(fw0 - data.w[j - 1]),
            abs(fvN - data.v[j]),
            abs(fwN - data.w[j]),
        )
        if err > 1e-9:
            raise ValidationFailure(
                f"vertical map {j} endpoint conditions fail by {err:.3g}"
            )


@dataclass(frozen=True)
class EdelsteinReport:
    """Max sampled Manhattan contraction ratio of the vertical maps."""

    max_ratio: float
    witness: dict
    passed: bool
    n_pairs: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "witness": self.witness,
            "passed": self.passed,
            "n_pairs": self.n_pairs,
            "seed": self.seed,
        }


def verify_edelstein(ifs: HiddenIFS, n_pairs: int = 4096, seed: int = 0) -> EdelsteinReport:
    """Sample contraction ratios of every F_j in (v, w) with the l1 metric.

    Draws n_pairs random (t, (v,w), (v',w')) in I x K x K, discarding
    degenerate pairs (l1 distance < 1e-14), and reports the largest ratio
    ||F_j(t,v,w) - F_j(t,v',w')||_1 / ||(v,w) - (v',w')||_1 with its witness.
    Passes iff the maximum is strictly below 1.
    """
    rng = np.random.default_rng(seed)
    rect = ifs.rect

    def draw(n):
        t = rng.uniform(ifs.data.t0, ifs.data.tN, n)
        v = rng.uniform(rect.v_lo, rect.v_hi, n)
        w = rng.uniform(rect.w_lo, rect.w_hi, n)
        v2 = rng.uniform(rect.v_lo, rect.v_hi, n)
        w2 = rng.uniform(rect.w_lo, rect.w_hi, n)
        return t, v, w, v2, w2

    t, v, w, v2, w2 = draw(n_pairs)
    dist = np.abs(v - v2) + np.abs(w - w2)
    for _ in range(100):
        bad = dist < 1e-14
        if not bad.any():
            break
        nb = int(bad.sum())
        t[bad], v[bad], w[bad], v2[bad], w2[bad] = draw(nb)
        dist = np.abs(v - v2) + np.abs(w - w2)

    max_ratio = -1.0
    witness: dict = {}
    for j in range(1, ifs.n_maps + 1):
        fv, fw = ifs.eval_F(j, t, v, w)
        fv2, fw2 = ifs.eval_F(j, t, v2, w2)
        ratio = (np.abs(fv - fv2) + np.abs(fw - fw2)) / dist
        k = int(np.argmax(ratio))
        if ratio[k] > max_ratio:
            max_ratio = float(ratio[k])
            witness = {
                "j": j,
                "t": float(t[k]),
                "pair_a": [float(v[k]), float(w[k])],
                "pair_b": [float(v2[k]), float(w2[k])],
            }
    return EdelsteinReport(
        max_ratio=max_ratio,
        witness=witness,
        passed=max_ratio < 1.0,
        n_pairs=n_pairs,
        seed=seed,
    )
