"""Attractor sampling for the hidden-variable system.

Two independent samplers approximate the attractor of {I x K; g_j}: the
deterministic set-map iteration A -> union_j g_j(A) (with stride decimation
under a size cap) and a seeded chaos game. Projections drop one of the
vertical coordinates; Hausdorff distances between point clouds use KD-tree
nearest neighbors in the Euclidean metric.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigError
from .system import HiddenIFS


def seed_cloud(ifs: HiddenIFS) -> np.ndarray:
    """The data triples; they lie on the attractor by the join-up conditions."""
    d = ifs.data
    return np.column_stack([d.t, d.v, d.w])


def set_map_step(ifs: HiddenIFS, cloud: np.ndarray, cap: int) -> np.ndarray:
    """One application of A -> union_j g_j(A), decimated by stride to cap."""
    if len(cloud) == 0:
        raise ConfigError("set-map step needs a non-empty cloud")
    images = []
    t, v, w = cloud[:, 0], cloud[:, 1], cloud[:, 2]
    for j in range(1, ifs.n_maps + 1):
        tj, fv, fw = ifs.eval_g(j, t, v, w)
        images.append(np.column_stack([tj, fv, fw]))
    out = np.concatenate(images)
    if len(out) > cap:
        stride = -(-len(out) // cap)  # ceil division
        out = out[::stride]
    return out


def iterate_set_map(
    ifs: HiddenIFS, depth: int, cap: int = 200_000
) -> tuple[np.ndarray, list[float]]:
    """Iterate the set map from the data triples.

    Returns the final cloud and the trace of Hausdorff distances between
    successive clouds (the last entry is the final-step displacement).
    """
    if depth < 0:
        raise ConfigError("depth must be >= 0")
    cloud = seed_cloud(ifs)
    trace = []
    for _ in range(depth):
        nxt = set_map_step(ifs, cloud, cap)
        trace.append(hausdorff_distance(cloud, nxt))
        cloud = nxt
    return cloud, trace


def chaos_game(
    ifs: HiddenIFS, n_points: int, burn_in: int = 100, seed: int = 0
) -> np.ndarray:
    """Random-orbit sampling: x_{k+1} = g_{j_k}(x_k) with uniform j_k.

    Deterministic given the seed; the first burn_in points are discarded.
    """
    if n_points <= burn_in:
        raise ConfigError("n_points must exceed burn_in")
    rng = np.random.default_rng(seed)
    symbols = rng.integers(0, ifs.n_maps, size=n_points)
    d = ifs.data
    t, v, w = float(d.t[0]), float(d.v[0]), float(d.w[0])
    out = np.empty((n_points - burn_in, 3))
    lms = ifs.interval_maps
    vms = ifs.vertical_maps
    k = 0
    for i in range(n_points):
        j = symbols[i]
        fv, fw = vms[j](t, v, w)
        t = lms[j].a * t + lms[j].f
        v, w = float(fv), float(fw)
        if i >= burn_in:
            out[k, 0] = t
            out[k, 1] = v
            out[k, 2] = w
            k += 1
    return out


def project_graph(cloud: np.ndarray, component: int = 1) -> np.ndarray:
    """Keep (t, v) for component 1 or (t, w) for component 2."""
    if component not in (1, 2):
        raise ConfigError("component must be 1 or 2")
    return cloud[:, [0, component]]


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between point clouds, Euclidean metric."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ConfigError("Hausdorff distance needs non-empty clouds")
    if a.shape[1] != b.shape[1]:
        raise ConfigError("clouds must have the same dimensionality")
    d_ab = cKDTree(b).query(a, workers=-1)[0].max()
    d_ba = cKDTree(a).query(b, workers=-1)[0].max()
    return float(max(d_ab, d_ba))
