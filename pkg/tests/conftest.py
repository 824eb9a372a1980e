import numpy as np
import pytest

from hvfractal.config import load_config
from hvfractal.funcs import BoundedRational, Constant, Linear
from hvfractal.pipeline import build_system
from hvfractal.solver import SolverConfig, iterate_to_fixed_point
from hvfractal.system import InterpolationData, assemble_ifs

CONFIG_DIR = "configs"


def constant_coeffs(b, c, d, e):
    return {
        "b": Constant(b),
        "c": Constant(c),
        "d": Constant(d),
        "e": Constant(e),
    }


def canonical_data():
    return InterpolationData.from_lists([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0])


def canonical_ifs():
    data = canonical_data()
    coeffs = [constant_coeffs(0.5, 0.2, 0.2, 0.5)] * 2
    contractions = [(BoundedRational(), BoundedRational())] * 2
    return assemble_ifs(data, coeffs, contractions)


def zero_contraction_ifs():
    data = canonical_data()
    coeffs = [constant_coeffs(0.5, 0.2, 0.2, 0.5)] * 2
    contractions = [(Linear(0.0), Linear(0.0))] * 2
    return assemble_ifs(data, coeffs, contractions)


@pytest.fixture(scope="session")
def canonical_cfg():
    return load_config(f"{CONFIG_DIR}/canonical.yaml")


@pytest.fixture(scope="session")
def degenerate_cfg():
    return load_config(f"{CONFIG_DIR}/degenerate.yaml")


@pytest.fixture(scope="session")
def classic_cfg():
    return load_config(f"{CONFIG_DIR}/classic.yaml")


@pytest.fixture(scope="session")
def canonical_solution(canonical_cfg):
    """Converged canonical fixed point at full resolution."""
    ifs = build_system(canonical_cfg)
    f, diag = iterate_to_fixed_point(ifs, SolverConfig())
    return ifs, f, diag


@pytest.fixture(scope="session")
def canonical_f1(canonical_solution):
    _, f, _ = canonical_solution
    return f.grid, f.values[:, 0]
