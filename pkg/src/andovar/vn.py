"""Certified norm chain ||p(T1,T2)|| <= ||p||_variety <= ||p||_torus.

The left side uses exact polynomial functional calculus on the matrices,
independent of the dilation machinery it validates.  The two sups are grid
maxima paired with an explicit Lipschitz slack computed from the polynomial
coefficients, so every reported inequality is an honest epsilon-statement
about sampled quantities rather than a silently undersampled one.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import matrix_core as mc
from .colligation import Colligation, build_colligation
from .errors import (
    BoundaryPoleError,
    ChainViolationError,
    InputError,
    NumericError,
    PurityError,
)
from .pair_analysis import ContractionPair, defect
from .transfer import (
    CanonicalSplit,
    adjoint_transfer,
    canonical_split,
    cnu_part,
    eval_tau,
)

__all__ = [
    "BivariatePolynomial",
    "VNReport",
    "eval_poly_pair",
    "sup_on_variety",
    "sup_on_bidisc",
    "vn_report",
]

DEFAULT_N_THETA = 720
DEFAULT_TORUS_GRID = 512


@dataclass(frozen=True)
class BivariatePolynomial:
    """p(z1, z2) = sum c[j][k] z1^j z2^k with trailing zero rows/cols trimmed."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise InputError("coefficient grid must be 2-dimensional")
        if c.size and not np.all(np.isfinite(c)):
            raise InputError("polynomial coefficients must be finite")
        c = _trim(c)
        object.__setattr__(self, "coeffs", c)

    @property
    def deg1(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg2(self) -> int:
        return self.coeffs.shape[1] - 1

    def __call__(self, z1, z2):
        """Vectorized scalar evaluation (Horner in z2 inside, z1 outside)."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        acc = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for row in self.coeffs[::-1]:
            inner = np.zeros_like(acc)
            for c in row[::-1]:
                inner = inner * z2 + c
            acc = acc * z1 + inner
        return acc if acc.shape else complex(acc)

    def lipschitz_bound(self) -> float:
        """Coefficient bound on |grad p| over the closed bidisc."""
        j = np.arange(self.coeffs.shape[0])[:, None]
        k = np.arange(self.coeffs.shape[1])[None, :]
        a = np.abs(self.coeffs)
        return float(np.sum(a * j) + np.sum(a * k))

    def to_dict(self) -> dict:
        from .serialize import matrix_to_nested

        return {"coeffs": matrix_to_nested(self.coeffs)}


def _trim(c: np.ndarray) -> np.ndarray:
    if c.size == 0:
        return np.zeros((1, 1), complex)
    rows = np.where(np.any(c != 0, axis=1))[0]
    cols = np.where(np.any(c != 0, axis=0))[0]
    if rows.size == 0:
        return np.zeros((1, 1), complex)
    return np.ascontiguousarray(c[: rows[-1] + 1, : cols[-1] + 1])


def eval_poly_pair(p: BivariatePolynomial, T1, T2) -> np.ndarray:
    """p(T1, T2) by two-stage Horner, powers of T2 innermost."""
    A = mc.as_matrix(T1, "T1")
    B = mc.as_matrix(T2, "T2")
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise InputError("T1, T2 must be square of equal dimension")
    n = A.shape[0]
    eye = np.eye(n, dtype=complex)
    acc = np.zeros((n, n), complex)
    for row in p.coeffs[::-1]:
        inner = np.zeros((n, n), complex)
        for c in row[::-1]:
            inner = inner @ B + c * eye
        acc = A @ acc + inner
    return acc


@dataclass(frozen=True)
class SupEstimate:
    value: float
    slack: float
    grid: int
    skipped: int = 0


def sup_on_variety(p: BivariatePolynomial, coll: Colligation,
                   split: CanonicalSplit, n_theta: int = DEFAULT_N_THETA) -> SupEstimate:
    """Max of |p| over the sampled variety boundary.

    V1 contributes (e^{i theta}, eig(Psi_cnu(e^{i theta}))); V0 contributes
    (e^{i theta}, lambda) for lambda in sigma(W), the maximum principle
    having pushed the first coordinate of V0 to the circle.
    """
    if n_theta < 1:
        raise InputError("n_theta must be >= 1")
    psi_cnu = cnu_part(adjoint_transfer(coll), split)
    lambdas = np.asarray(split.lambdas)
    best = -np.inf
    skipped = 0
    for j in range(n_theta):
        z1 = np.exp(2j * np.pi * j / n_theta)
        vals = []
        if lambdas.size:
            vals.append(lambdas)
        if psi_cnu.dim:
            try:
                vals.append(mc.eigvals(eval_tau(psi_cnu, z1)))
            except BoundaryPoleError:
                skipped += 1
                continue
        if not vals:
            raise NumericError("variety has no sheets (empty multiplier)")
        z2 = np.concatenate(vals)
        best = max(best, float(np.max(np.abs(p(z1, z2)))))
    if not np.isfinite(best):
        raise NumericError("every boundary sample hit a resolvent pole")
    slack = p.lipschitz_bound() * (2.0 * np.pi / n_theta) + 1e-9
    return SupEstimate(value=best, slack=slack, grid=n_theta, skipped=skipped)


def sup_on_bidisc(p: BivariatePolynomial, n_grid: int = DEFAULT_TORUS_GRID) -> SupEstimate:
    """Max of |p| over an n_grid x n_grid torus grid (maximum principle)."""
    min_grid = 4 * (p.deg1 + p.deg2)
    if n_grid < max(min_grid, 1):
        raise InputError(f"torus grid {n_grid} too coarse; need >= {max(min_grid, 1)}")
    theta = 2.0 * np.pi * np.arange(n_grid) / n_grid
    z = np.exp(1j * theta)
    vals = np.abs(p(z[:, None], z[None, :]))
    slack = p.lipschitz_bound() * (np.pi / n_grid) + 1e-9
    return SupEstimate(value=float(np.max(vals)), slack=slack, grid=n_grid)


@dataclass(frozen=True)
class VNReport:
    lhs: float
    sup_variety: float
    sup_bidisc: float
    slack: float
    margins: tuple[float, float]
    sampling: dict = field(default_factory=dict)
    pair_digest: str = ""
    skipped_thetas: int = 0

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "sup_variety": self.sup_variety,
            "sup_bidisc": self.sup_bidisc,
            "slack": self.slack,
            "margins": list(self.margins),
            "grids": dict(self.sampling),
            "pair_digest": self.pair_digest,
            "skipped_thetas": self.skipped_thetas,
        }


def _pair_digest(pair: ContractionPair) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(pair.T1).tobytes())
    h.update(np.ascontiguousarray(pair.T2).tobytes())
    return h.hexdigest()[:16]


def vn_report(pair: ContractionPair, p: BivariatePolynomial,
              n_theta: int = DEFAULT_N_THETA,
              torus_grid: int = DEFAULT_TORUS_GRID,
              coll: Colligation | None = None,
              split: CanonicalSplit | None = None) -> VNReport:
    """Full certification run for one pair and one polynomial.

    The chain lhs <= sup_variety <= sup_bidisc is asserted up to the
    sampling slack; a violation beyond slack raises
    :class:`ChainViolationError` since the underlying inequality is exact.
    """
    tol = pair.tol
    if mc.spectral_radius(pair.T1) >= 1.0 - tol.pure:
        raise PurityError("the certified bound requires T1 pure",
                          spectral_radius=mc.spectral_radius(pair.T1))
    if coll is None or split is None:
        d1 = defect(pair.T1, tol.rank)
        d2 = defect(pair.T2, tol.rank)
        coll = build_colligation(pair, d1, d2)
        split = canonical_split(mc.adjoint(coll.A), tol_pure=tol.pure)
    lhs = mc.operator_norm(eval_poly_pair(p, pair.T1, pair.T2))
    sv = sup_on_variety(p, coll, split, n_theta=n_theta)
    sb = sup_on_bidisc(p, n_grid=torus_grid)
    slack = sv.slack
    if lhs > sv.value + slack or sv.value > sb.value + slack:
        raise ChainViolationError(
            f"certified chain violated beyond slack: lhs={lhs:.12e}, "
            f"sup_variety={sv.value:.12e}, sup_bidisc={sb.value:.12e}, "
            f"slack={slack:.3e}"
        )
    return VNReport(
        lhs=lhs,
        sup_variety=sv.value,
        sup_bidisc=sb.value,
        slack=slack,
        margins=(sv.value - lhs, sb.value - sv.value),
        sampling={"n_theta": n_theta, "torus_grid": torus_grid},
        pair_digest=_pair_digest(pair),
        skipped_thetas=sv.skipped,
    )
