"""Shared builders for the test suite.

The pair suite cycles the three exact-commutation generators over a range
of dimensions with deterministic seeds, so every test run sees the same
population.
"""

from __future__ import annotations

import numpy as np
import pytest

import andovar as av
import andovar.matrix_core as mc
from andovar.pair_analysis import GENERATOR_KINDS


def make_suite(count: int, dims=(2, 3, 4, 5, 6, 7, 8), seed0: int = 0,
               radius: float = 0.9):
    """Deterministic list of (kind, dim, T1, T2) across all generator kinds."""
    out = []
    for i in range(count):
        kind = GENERATOR_KINDS[i % len(GENERATOR_KINDS)]
        dim = dims[i % len(dims)]
        T1, T2 = av.generate_pair(kind, dim, seed0 + i, radius=radius)
        out.append((kind, dim, T1, T2))
    return out


def build_pipeline(T1, T2):
    """pair -> defects -> colligation -> split, with default tolerances."""
    pair = av.ContractionPair.create(T1, T2)
    d1 = av.defect(pair.T1, pair.tol.rank)
    d2 = av.defect(pair.T2, pair.tol.rank)
    coll = av.build_colligation(pair, d1, d2)
    split = av.canonical_split(mc.adjoint(coll.A), tol_pure=pair.tol.pure)
    return pair, d1, d2, coll, split


def random_unit_vectors(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    H = rng.normal(size=(n, count)) + 1j * rng.normal(size=(n, count))
    return H / np.linalg.norm(H, axis=0)


def interior_points(count: int, seed: int, radius: float = 0.95) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (radius * np.sqrt(rng.uniform(size=count))
            * np.exp(2j * np.pi * rng.uniform(size=count)))


@pytest.fixture(scope="session")
def zero_pair_m2():
    Z = np.zeros((2, 2), complex)
    return build_pipeline(Z, Z)


@pytest.fixture(scope="session")
def scalar_half_pair():
    return build_pipeline(np.array([[0.5]], complex), np.array([[0.5]], complex))
