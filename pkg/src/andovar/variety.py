"""Sampling of the determinantal variety det(Psi(z1) - z2 I) = 0.

The fiber over z1 splits into V0 points (the unimodular spectrum of the
constant unitary part, independent of z1) and V1 points (eigenvalues of the
c.n.u. transfer function).  Boundary fibers sit on the unit circle by
innerness; interior fibers of pure-pure pairs stay strictly inside the
bidisc.  Membership is measured by eigenvalue distance rather than raw
determinant magnitude, which keeps tolerances dimension-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .colligation import Colligation, build_colligation
from .errors import BoundaryPoleError, InputError, NumericError, PurityError
from .pair_analysis import ContractionPair, defect
from .transfer import CanonicalSplit, TransferFunction, adjoint_transfer, canonical_split, cnu_part

__all__ = [
    "VarietySample",
    "variety_fiber",
    "membership_residual",
    "boundary_samples",
    "joint_eig_membership",
    "symmetry_residual",
    "sample_to_csv",
    "sample_to_svg",
]

_JOINT_EIG_SEED = 0x5EED
_SYMMETRY_SEED = 20260808


@dataclass(frozen=True)
class VarietySample:
    """Point cloud on the variety plus per-point diagnostics."""

    points: list          # (z1, z2) complex pairs
    kinds: list           # "V0" | "V1" per point
    residuals: list       # membership residual per point
    theta_grid: np.ndarray
    skipped_thetas: list

    def __len__(self) -> int:
        return len(self.points)


def _fiber_values(coll: Colligation, split: CanonicalSplit, z1: complex):
    psi = adjoint_transfer(coll)
    sub = cnu_part(psi, split)
    v0 = [(complex(lam), "V0") for lam in split.lambdas]
    val = sub.eval(z1)
    v1 = [(complex(lam), "V1") for lam in mc.eigvals(val)] if val.size else []
    return v0 + v1


def variety_fiber(coll: Colligation, split: CanonicalSplit, z1: complex):
    """All r1 fiber values over z1, tagged V0/V1, deterministically ordered."""
    if abs(z1) > 1.0 + 1e-12:
        raise InputError("fiber requested outside the closed disc")
    fiber = _fiber_values(coll, split, z1)
    if not fiber:
        raise NumericError(
            "empty fiber: the first defect space is trivial (T1 unitary)"
        )
    return fiber


def membership_residual(coll: Colligation, split: CanonicalSplit,
                        z1: complex, z2: complex) -> float:
    """Distance from z2 to the fiber over z1 (eigenvalue distance)."""
    fiber = variety_fiber(coll, split, z1)
    return float(min(abs(z2 - f) for f, _ in fiber))


def boundary_samples(coll: Colligation, split: CanonicalSplit,
                     n_theta: int) -> VarietySample:
    """Fibers over the unit circle; pole thetas are skipped and reported."""
    if n_theta < 1:
        raise InputError("n_theta must be >= 1")
    points, kinds, residuals = [], [], []
    kept_thetas, skipped = [], []
    for j in range(n_theta):
        theta = 2.0 * np.pi * j / n_theta
        z1 = np.exp(1j * theta)
        try:
            fiber = variety_fiber(coll, split, z1)
        except BoundaryPoleError:
            skipped.append(theta)
            continue
        kept_thetas.append(theta)
        for z2, kind in fiber:
            points.append((complex(z1), z2))
            kinds.append(kind)
            residuals.append(float(min(abs(z2 - f) for f, _ in fiber)))
    return VarietySample(
        points=points, kinds=kinds, residuals=residuals,
        theta_grid=np.asarray(kept_thetas), skipped_thetas=skipped,
    )


@dataclass(frozen=True)
class JointEigReport:
    """Joint eigenvalue pairs of (T1*, T2*) with their variety residuals."""

    entries: list        # (lambda1, lambda2, residual)
    failures: int        # eigenvectors that failed joint verification


def joint_eig_membership(pair: ContractionPair, coll: Colligation,
                         split: CanonicalSplit,
                         vec_tol: float = 1e-8) -> JointEigReport:
    """Check that joint eigenvalues of (T1*, T2*) land on the variety.

    Joint eigenvectors are found from a generic linear combination
    T1* + mu T2* and verified against both factors; mu is redrawn at most
    three times (deterministic seed) if verification fails.
    """
    T1s, T2s = mc.adjoint(pair.T1), mc.adjoint(pair.T2)
    n = pair.dim
    rng = np.random.default_rng(_JOINT_EIG_SEED)
    best_entries, best_failures = [], n
    for _ in range(3):
        mu = complex(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0))
        _, V = mc.eig(T1s + mu * T2s)
        entries, failures = [], 0
        for i in range(n):
            v = V[:, i]
            l1c = complex(v.conj() @ T1s @ v)
            l2c = complex(v.conj() @ T2s @ v)
            ok = (np.linalg.norm(T1s @ v - l1c * v) <= vec_tol
                  and np.linalg.norm(T2s @ v - l2c * v) <= vec_tol)
            if not ok:
                failures += 1
                continue
            lam1, lam2 = np.conj(l1c), np.conj(l2c)
            if abs(lam1) < 1.0 and abs(lam2) <= 1.0 + 1e-10:
                res = membership_residual(coll, split, lam1, lam2)
                entries.append((complex(lam1), complex(lam2), res))
        if failures < best_failures:
            best_entries, best_failures = entries, failures
        if failures == 0:
            break
    return JointEigReport(entries=best_entries, failures=best_failures)


def _pipeline(T1, T2, pair_tol):
    pair = ContractionPair.create(T1, T2, pair_tol)
    d1 = defect(pair.T1, pair.tol.rank)
    d2 = defect(pair.T2, pair.tol.rank)
    coll = build_colligation(pair, d1, d2)
    split = canonical_split(mc.adjoint(coll.A), tol_pure=pair.tol.pure)
    return coll, split


def symmetry_residual(pair: ContractionPair, n_samples: int = 16,
                      tol_pure: float = 1e-8) -> float:
    """Agreement of the variety with its swapped-pair counterpart.

    Samples fibers of Psi over random interior z1 and measures how far z1
    sits from the fiber of the swapped multiplier over z2, in both swap
    directions; returns the worst residual.  Requires both contractions
    pure, the only case where the two constructions describe one variety.
    """
    for j, T in enumerate((pair.T1, pair.T2), start=1):
        if mc.spectral_radius(T) >= 1.0 - tol_pure:
            raise PurityError(f"symmetry check requires T{j} pure",
                              spectral_radius=mc.spectral_radius(T))
    coll, split = _pipeline(pair.T1, pair.T2, pair.tol)
    coll_s, split_s = _pipeline(pair.T2, pair.T1, pair.tol)
    psi = adjoint_transfer(coll)
    psi_s = adjoint_transfer(coll_s)
    rng = np.random.default_rng(_SYMMETRY_SEED)
    worst = 0.0
    for forward, backward in ((psi, psi_s), (psi_s, psi)):
        for _ in range(n_samples):
            z1 = 0.95 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            for z2 in mc.eigvals(forward.eval(z1)):
                back = mc.eigvals(backward.eval(z2))
                if back.size == 0:
                    raise NumericError("swapped multiplier has empty fiber")
                worst = max(worst, float(np.min(np.abs(back - z1))))
    return worst


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------

def sample_to_csv(sample: VarietySample) -> str:
    lines = ["theta,re_z1,im_z1,re_z2,im_z2,kind,residual"]
    idx = 0
    per_theta = len(sample.points) // len(sample.theta_grid) if len(sample.theta_grid) else 0
    for t_i, theta in enumerate(sample.theta_grid):
        for _ in range(per_theta):
            z1, z2 = sample.points[idx]
            lines.append(
                f"{theta:.12e},{z1.real:.12e},{z1.imag:.12e},"
                f"{z2.real:.12e},{z2.imag:.12e},{sample.kinds[idx]},"
                f"{sample.residuals[idx]:.12e}"
            )
            idx += 1
    return "\n".join(lines) + "\n"


def _svg_color(theta: float) -> str:
    hue = int(round(np.degrees(theta))) % 360
    return f"hsl({hue},70%,45%)"


def sample_to_svg(sample: VarietySample) -> str:
    """Static two-panel scatter: z1 samples and their fiber values."""
    size, margin = 400, 20
    half = size // 2
    scale = half - margin

    def pt(z: complex, x0: int) -> tuple[float, float]:
        return (x0 + half + scale * z.real, half - scale * z.imag)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * size + 40}" '
        f'height="{size}" viewBox="0 0 {2 * size + 40} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for panel, label in ((0, "z1"), (size + 40, "z2")):
        parts.append(
            f'<circle cx="{panel + half}" cy="{half}" r="{scale}" '
            'fill="none" stroke="#888" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{panel + 10}" y="20" font-family="monospace" '
            f'font-size="14">{label}</text>'
        )
    per_theta = len(sample.points) // len(sample.theta_grid) if len(sample.theta_grid) else 0
    idx = 0
    for theta in sample.theta_grid:
        color = _svg_color(float(theta))
        for _ in range(per_theta):
            z1, z2 = sample.points[idx]
            kind = sample.kinds[idx]
            x1, y1 = pt(z1, 0)
            x2, y2 = pt(z2, size + 40)
            parts.append(f'<circle cx="{x1:.2f}" cy="{y1:.2f}" r="2" fill="{color}"/>')
            stroke = ' stroke="black" stroke-width="0.6"' if kind == "V0" else ""
            parts.append(
                f'<circle cx="{x2:.2f}" cy="{y2:.2f}" r="2" fill="{color}"{stroke}/>'
            )
            idx += 1
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
