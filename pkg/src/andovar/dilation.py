"""Isometric dilation on a truncated vector-valued Hardy space.

The embedding Pi sends h to the Taylor coefficient stack of
D_T1 (I - z T1*)^{-1} h, expressed in defect coordinates; M_z is the block
down-shift and M_Psi the block lower-triangular Toeplitz operator whose
symbols are the Taylor coefficients of the inner multiplier Psi.

All infinite-dimensional identities acquire explicit truncation tails here;
every residual is paired with a computed bound derived from the measured
power norms ||T1*^k|| and the symbol decay, never an assumed one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .colligation import Colligation
from .errors import InputError, PurityError
from .pair_analysis import (
    TRUNCATION_CAP,
    ContractionPair,
    DefectData,
    truncation_degree,
)
from .transfer import adjoint_transfer, taylor_symbols

__all__ = [
    "TruncatedDilation",
    "build_dilation",
    "intertwining_residuals",
    "compression_residuals",
    "minimality_defect",
    "mpsi_isometry_residual",
]

_DENSE_ROWS_WARN = 100_000


@dataclass(frozen=True)
class TruncatedDilation:
    """Degree-N truncation of the Hardy-space dilation of a pure pair."""

    N: int
    r1: int
    n: int
    Pi: np.ndarray
    Mz: np.ndarray
    MPsi: np.ndarray
    tail_bound: float            # ||T1*^(N+1)||
    tail_bound_prev: float       # ||T1*^N||
    d1_norm: float               # ||D_T1||
    symbol_norms: np.ndarray     # ||Psi_q|| for q = 0..N

    @property
    def rows(self) -> int:
        return (self.N + 1) * self.r1


def build_dilation(pair: ContractionPair, coll: Colligation, d1: DefectData,
                   N: int | None = None, tol_trunc: float = 1e-9,
                   tol_pure: float = 1e-8) -> TruncatedDilation:
    """Materialize Pi, M_z and M_Psi at truncation degree N.

    ``N=None`` selects the smallest degree whose tail norm falls below
    ``tol_trunc``.  An explicit N must dominate that degree and stay under
    the global cap.
    """
    T1 = pair.T1
    rho = mc.spectral_radius(T1)
    if rho >= 1.0 - tol_pure:
        raise PurityError("dilation requires a pure T1", spectral_radius=rho)
    n_min = truncation_degree(T1, tol_trunc=tol_trunc, tol_pure=tol_pure)
    if N is None:
        N = n_min
    elif N > TRUNCATION_CAP:
        raise InputError(f"truncation degree {N} exceeds the cap {TRUNCATION_CAP}")
    elif N < n_min:
        raise InputError(
            f"truncation degree {N} is below the required minimum {n_min} "
            f"for tol_trunc={tol_trunc:g}"
        )
    r1 = d1.rank
    n = pair.dim
    rows = (N + 1) * r1
    if rows > _DENSE_ROWS_WARN:
        warnings.warn(
            f"dense dilation assembly with {rows} rows; expect heavy memory use",
            stacklevel=2,
        )

    E1s_D1 = mc.adjoint(d1.basis) @ d1.D
    Pi = np.zeros((rows, n), complex)
    block = E1s_D1.copy()
    T1s = mc.adjoint(T1)
    for k in range(N + 1):
        Pi[k * r1:(k + 1) * r1, :] = block
        block = block @ T1s

    Mz = np.zeros((rows, rows), complex)
    eye_r = np.eye(r1)
    for k in range(N):
        Mz[(k + 1) * r1:(k + 2) * r1, k * r1:(k + 1) * r1] = eye_r

    psi = adjoint_transfer(coll)
    symbols = taylor_symbols(psi, N + 1)
    MPsi = np.zeros((rows, rows), complex)
    for q, sym in enumerate(symbols):
        if not sym.size or not np.any(sym):
            continue
        for k in range(N + 1 - q):
            MPsi[(k + q) * r1:(k + q + 1) * r1, k * r1:(k + 1) * r1] = sym

    return TruncatedDilation(
        N=N, r1=r1, n=n, Pi=Pi, Mz=Mz, MPsi=MPsi,
        tail_bound=mc.matrix_power_norm(T1s, N + 1),
        tail_bound_prev=mc.matrix_power_norm(T1s, N),
        d1_norm=mc.operator_norm(d1.D),
        symbol_norms=np.array([mc.operator_norm(s) for s in symbols]),
    )


@dataclass(frozen=True)
class IntertwiningReport:
    res_z: float
    res_psi: float
    bound_z: float
    bound_psi: float


def intertwining_residuals(dil: TruncatedDilation, pair: ContractionPair) -> IntertwiningReport:
    """Residuals of Pi T1* = Mz* Pi and Pi T2* = MPsi* Pi with tail bounds.

    Only the dropped top row feeds res_z, so it is bounded by
    ||D_T1|| * ||T1*^(N+1)||; the Toeplitz truncation gives res_psi at most
    sqrt(N+1) times the tail norm.
    """
    res_z = mc.operator_norm(dil.Pi @ mc.adjoint(pair.T1) - mc.adjoint(dil.Mz) @ dil.Pi)
    res_psi = mc.operator_norm(dil.Pi @ mc.adjoint(pair.T2) - mc.adjoint(dil.MPsi) @ dil.Pi)
    return IntertwiningReport(
        res_z=res_z,
        res_psi=res_psi,
        bound_z=dil.d1_norm * dil.tail_bound,
        bound_psi=float(np.sqrt(dil.N + 1)) * dil.tail_bound,
    )


@dataclass(frozen=True)
class CompressionReport:
    res_t1: float
    res_t2: float
    bound_t1: float
    bound_t2: float


def compression_residuals(dil: TruncatedDilation, pair: ContractionPair) -> CompressionReport:
    """How well Pi* Mz Pi and Pi* MPsi Pi recover T1 and T2."""
    res_t1 = mc.operator_norm(mc.adjoint(dil.Pi) @ dil.Mz @ dil.Pi - pair.T1)
    res_t2 = mc.operator_norm(mc.adjoint(dil.Pi) @ dil.MPsi @ dil.Pi - pair.T2)
    inter = intertwining_residuals(dil, pair)
    return CompressionReport(
        res_t1=res_t1,
        res_t2=res_t2,
        bound_t1=dil.tail_bound * dil.tail_bound_prev,
        bound_t2=dil.tail_bound ** 2 + inter.res_psi,
    )


def minimality_defect(dil: TruncatedDilation, rank_tol: float | None = None) -> int:
    """(N+1) r1 minus the numeric rank of [Pi, Mz Pi, ..., Mz^N Pi].

    Zero means the shifted copies of ran(Pi) fill the truncated space, the
    finite-degree shadow of dilation minimality.
    """
    blocks = []
    current = dil.Pi
    for _ in range(dil.N + 1):
        blocks.append(current)
        current = dil.Mz @ current
    K = np.hstack(blocks)
    if rank_tol is None:
        rank = np.linalg.matrix_rank(K)
    else:
        s = np.linalg.svd(K, compute_uv=False)
        rank = int(np.sum(s > rank_tol * (s[0] if s.size else 1.0)))
    return dil.rows - int(rank)


@dataclass(frozen=True)
class MPsiIsometryReport:
    raw: float
    restricted: float
    q_eff: int


def mpsi_isometry_residual(dil: TruncatedDilation, coll: Colligation,
                           sym_tol: float = 1e-5) -> MPsiIsometryReport:
    """Deviation of MPsi from an isometry, raw and tail-restricted.

    The raw residual ||MPsi* MPsi - I|| always carries the chopped Toeplitz
    corner.  The restricted residual confines both indices to the first
    (N + 1 - q_eff) coefficient blocks, where q_eff is the symbol-decay
    horizon read off the power norms of the D-block; there the isometry
    identity holds up to the decayed tail, which is quadratic in the symbol
    envelope (hence the loose default for ``sym_tol``).  If the symbols do
    not decay inside the truncation window the restricted residual is NaN.
    """
    rows = dil.rows
    G = mc.adjoint(dil.MPsi) @ dil.MPsi - np.eye(rows)
    raw = mc.operator_norm(G)
    # symbol envelope ||Psi_q|| <= ||B|| ||C|| ||D^(q-1)||, monotone in q
    Dstar = mc.adjoint(coll.D)
    bc = mc.operator_norm(coll.B) * mc.operator_norm(coll.C)
    q_eff = dil.N + 1
    power = np.eye(Dstar.shape[0], dtype=complex)
    for q in range(1, dil.N + 2):
        if bc * mc.operator_norm(power) <= sym_tol:
            q_eff = q
            break
        power = Dstar @ power
    keep = (dil.N + 1 - q_eff) * dil.r1
    restricted = mc.operator_norm(G[:keep, :keep]) if keep > 0 else float("nan")
    return MPsiIsometryReport(raw=raw, restricted=restricted, q_eff=q_eff)
