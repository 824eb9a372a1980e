"""Scalar coefficient functions and the contraction catalog.

Coefficient functions are restricted to closed forms (constant, affine,
cosine) whose sup-norm and Lipschitz constant on an interval are exact, so
the column-sum conditions on the scaling matrix can be checked without
estimation. Contractions are strict on the reals: |s(x) - s(y)| < |x - y|
whenever x != y, except for the deliberately admissible boundary case
linear(1.0) which the sampling verifier exists to reject.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_TWO_PI = 2.0 * math.pi


def _abs_trig_sup(theta0: float, theta1: float, crit_offset: float) -> float:
    """Sup of |cos(theta)| (crit_offset=0) or |sin(theta)| (crit_offset=pi/2)
    over [theta0, theta1]: 1 if a peak lies inside, else an endpoint value."""
    if theta1 < theta0:
        theta0, theta1 = theta1, theta0
    # peaks of |cos| at k*pi, of |sin| at pi/2 + k*pi
    k_lo = math.ceil((theta0 - crit_offset) / math.pi)
    if crit_offset + k_lo * math.pi <= theta1 + 1e-15:
        return 1.0
    if crit_offset == 0.0:
        return max(abs(math.cos(theta0)), abs(math.cos(theta1)))
    return max(abs(math.sin(theta0)), abs(math.sin(theta1)))


class ScalarFunc:
    """A real Lipschitz function on an interval with exact norm data."""

    def __call__(self, t):
        raise NotImplementedError

    def sup_norm(self, lo: float, hi: float) -> float:
        raise NotImplementedError

    def lipschitz(self, lo: float, hi: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(ScalarFunc):
    value: float

    def __call__(self, t):
        if isinstance(t, np.ndarray):
            return np.full_like(t, self.value, dtype=float)
        return self.value

    def sup_norm(self, lo, hi):
        return abs(self.value)

    def lipschitz(self, lo, hi):
        return 0.0


@dataclass(frozen=True)
class Affine(ScalarFunc):
    slope: float
    intercept: float

    @classmethod
    def through(cls, t0: float, y0: float, t1: float, y1: float) -> "Affine":
        slope = (y1 - y0) / (t1 - t0)
        return cls(slope=slope, intercept=y0 - slope * t0)

    def __call__(self, t):
        return self.slope * t + self.intercept

    def sup_norm(self, lo, hi):
        # |affine| on an interval peaks at an endpoint
        return max(abs(self(lo)), abs(self(hi)))

    def lipschitz(self, lo, hi):
        return abs(self.slope)


@dataclass(frozen=True)
class Cosine(ScalarFunc):
    """amplitude * cos(frequency * t + phase)."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __call__(self, t):
        return self.amplitude * np.cos(self.frequency * t + self.phase)

    def sup_norm(self, lo, hi):
        th0 = self.frequency * lo + self.phase
        th1 = self.frequency * hi + self.phase
        return abs(self.amplitude) * _abs_trig_sup(th0, th1, 0.0)

    def lipschitz(self, lo, hi):
        th0 = self.frequency * lo + self.phase
        th1 = self.frequency * hi + self.phase
        return abs(self.amplitude * self.frequency) * _abs_trig_sup(
            th0, th1, math.pi / 2.0
        )


class Contraction:
    """A map on the reals intended to shrink distances strictly."""

    def __call__(self, x):
        raise NotImplementedError


@dataclass(frozen=True)
class Linear(Contraction):
    """s(x) = k*x. Strict for k < 1; k = 1.0 is constructible so that the
    sampling verifier can demonstrate the rejection."""

    k: float

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise ConfigError(f"linear contraction needs 0 <= k <= 1, got {self.k}")

    def __call__(self, x):
        return self.k * x


@dataclass(frozen=True)
class BoundedRational(Contraction):
    """s(x) = x / (1 + |x|); strict, image in (-1, 1)."""

    def __call__(self, x):
        return x / (1.0 + np.abs(x))


@dataclass(frozen=True)
class ArctanScaled(Contraction):
    """s(x) = scale * arctan(x) with 0 < scale <= 1."""

    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.scale <= 1.0:
            raise ConfigError(f"arctan contraction needs 0 < scale <= 1, got {self.scale}")

    def __call__(self, x):
        return self.scale * np.arctan(x)


@dataclass(frozen=True)
class TanhLike(Contraction):
    """s(x) = scale * tanh(x) with 0 < scale <= 1."""

    scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.scale <= 1.0:
            raise ConfigError(f"tanh contraction needs 0 < scale <= 1, got {self.scale}")

    def __call__(self, x):
        return self.scale * np.tanh(x)


def scalar_func_from_dict(spec: dict) -> ScalarFunc:
    """Build a coefficient function from a config mapping."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"scalar function spec must be a mapping with 'kind': {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "constant":
            return Constant(float(spec["value"]))
        if kind == "affine":
            return Affine(float(spec["slope"]), float(spec.get("intercept", 0.0)))
        if kind == "cosine":
            return Cosine(
                float(spec["amplitude"]),
                float(spec["frequency"]),
                float(spec.get("phase", 0.0)),
            )
    except KeyError as exc:
        raise ConfigError(f"scalar function spec missing field {exc} in {spec!r}")
    raise ConfigError(f"unknown scalar function kind {kind!r}")


def contraction_from_dict(spec: dict) -> Contraction:
    """Build a catalog contraction from a config mapping."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"contraction spec must be a mapping with 'kind': {spec!r}")
    kind = spec["kind"]
    try:
        if kind == "linear":
            return Linear(float(spec["k"]))
        if kind == "rational":
            return BoundedRational()
        if kind == "arctan":
            return ArctanScaled(float(spec.get("scale", 1.0)))
        if kind == "tanh":
            return TanhLike(float(spec.get("scale", 1.0)))
    except KeyError as exc:
        raise ConfigError(f"contraction spec missing field {exc} in {spec!r}")
    raise ConfigError(f"unknown contraction kind {kind!r}")
