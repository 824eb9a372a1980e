"""Declarative run configuration.

A run is described by one document (YAML on disk, JSON over the service
API). Per-interval coefficient and contraction specs may be given once and
broadcast to every interval, or listed per interval.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError
from .funcs import contraction_from_dict, scalar_func_from_dict
from .system import InterpolationData


class DataBlock(BaseModel):
    t: list[float]
    v: list[float]
    w: list[float]


SpecDict = dict
PerInterval = Union[SpecDict, list[SpecDict]]


class MapsBlock(BaseModel):
    b: PerInterval = Field(default={"kind": "constant", "value": 0.0})
    c: PerInterval = Field(default={"kind": "constant", "value": 0.0})
    d: PerInterval = Field(default={"kind": "constant", "value": 0.0})
    e: PerInterval = Field(default={"kind": "constant", "value": 0.0})
    s: PerInterval = Field(default={"kind": "rational"})
    r: PerInterval = Field(default={"kind": "rational"})


class SolverBlock(BaseModel):
    grid_points_per_interval: int = 4096
    tol: float = 1e-10
    max_iter: int = 2000


class VerifyBlock(BaseModel):
    edelstein_pairs: int = 4096
    seed: int = 7
    margin_growth: float = 1.3


class AttractorBlock(BaseModel):
    depth: int = 12
    cap: int = 200_000
    chaos_points: int = 200_000
    burn_in: int = 100
    seed: int = 0


class AnalysisBlock(BaseModel):
    eps: Optional[list[float]] = None  # default: dyadic 2^-3..2^-9 of |I|
    scales: Optional[list[float]] = None
    slack: float = 0.1
    audit_pairs: int = 100_000
    audit_seed: int = 0


class OutputBlock(BaseModel):
    directory: str = "out"
    formats: list[str] = Field(default_factory=lambda: ["csv", "svg"])


class RunConfig(BaseModel):
    data: DataBlock
    maps: MapsBlock = Field(default_factory=MapsBlock)
    solver: SolverBlock = Field(default_factory=SolverBlock)
    verify: VerifyBlock = Field(default_factory=VerifyBlock)
    attractor: AttractorBlock = Field(default_factory=AttractorBlock)
    analysis: AnalysisBlock = Field(default_factory=AnalysisBlock)
    output: OutputBlock = Field(default_factory=OutputBlock)


def load_config(path: str | Path) -> RunConfig:
    """Parse a YAML config file into a validated RunConfig."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}")
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        locs = "; ".join(
            ".".join(str(p) for p in e["loc"]) + ": " + e["msg"] for e in exc.errors()
        )
        raise ConfigError(f"invalid config: {locs}")


def _broadcast(spec: PerInterval, n: int, name: str) -> list[dict]:
    if isinstance(spec, list):
        if len(spec) != n:
            raise ConfigError(
                f"maps.{name} lists {len(spec)} specs but there are {n} intervals"
            )
        return spec
    return [spec] * n


def build_components(cfg: RunConfig):
    """Materialize data, coefficient functions and contractions from config.

    Returns (data, coeffs, contractions) ready for system assembly.
    """
    data = InterpolationData.from_lists(cfg.data.t, cfg.data.v, cfg.data.w)
    n = data.n_intervals
    coeffs = []
    for b, c, d, e in zip(
        _broadcast(cfg.maps.b, n, "b"),
        _broadcast(cfg.maps.c, n, "c"),
        _broadcast(cfg.maps.d, n, "d"),
        _broadcast(cfg.maps.e, n, "e"),
    ):
        coeffs.append(
            {
                "b": scalar_func_from_dict(b),
                "c": scalar_func_from_dict(c),
                "d": scalar_func_from_dict(d),
                "e": scalar_func_from_dict(e),
            }
        )
    contractions = [
        (contraction_from_dict(s), contraction_from_dict(r))
        for s, r in zip(
            _broadcast(cfg.maps.s, n, "s"), _broadcast(cfg.maps.r, n, "r")
        )
    ]
    return data, coeffs, contractions
