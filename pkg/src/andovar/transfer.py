"""Transfer functions of a unitary colligation and canonical splitting.

For U = [[A, B], [C, D]] unitary, tau_U(z) = A + z B (I - z D)^{-1} C is a
rational matrix inner function: contractive on the disc and unitary on the
circle away from resolvent poles.  The multiplier driving the dilation is
the adjoint-direction transfer function

    Psi(z) = tau_{U*}(z) = A* + z C* (I - z D*)^{-1} B*.

The canonical split separates the top-left block into its unitary part W
and completely non-unitary part; the transfer function then decomposes as
a constant unitary summand W plus the transfer function of the reduced
colligation on the c.n.u. subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .colligation import Colligation
from .errors import BoundaryPoleError, InputError, NumericError, ValidationError

__all__ = [
    "TransferFunction",
    "forward_transfer",
    "adjoint_transfer",
    "eval_tau",
    "schur_identity_residual",
    "CanonicalSplit",
    "canonical_split",
    "cnu_part",
    "split_residual",
    "check_no_unimodular_eigs",
    "boundary_scan",
    "taylor_symbols",
]

_COND_LIMIT = 1e14


@dataclass(frozen=True)
class TransferFunction:
    """Realization blocks (A, B, C, D) of z -> A + z B (I - z D)^{-1} C."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def eval(self, z: complex) -> np.ndarray:
        return eval_tau(self, z)


def forward_transfer(coll: Colligation) -> TransferFunction:
    """tau_U for the colligation unitary U."""
    return TransferFunction(coll.A, coll.B, coll.C, coll.D)


def adjoint_transfer(coll: Colligation) -> TransferFunction:
    """Psi = tau_{U*}; the inner multiplier acting on the first defect space."""
    return TransferFunction(
        mc.adjoint(coll.A), mc.adjoint(coll.C), mc.adjoint(coll.B), mc.adjoint(coll.D)
    )


def eval_tau(tf: TransferFunction, z: complex) -> np.ndarray:
    """Evaluate the transfer function at |z| <= 1.

    At boundary points where I - z D is numerically singular the value is a
    genuine pole of the resolvent formula; this raises
    :class:`BoundaryPoleError` and the caller is expected to skip or perturb.
    """
    z = complex(z)
    if abs(z) > 1.0 + 1e-12:
        raise InputError(f"transfer function evaluated outside the closed disc: |z|={abs(z)}")
    k = tf.D.shape[0]
    if k == 0:
        return tf.A.copy()
    R = np.eye(k) - z * tf.D
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise BoundaryPoleError(
            f"resolvent numerically singular at z={z} (cond={cond:.3e})", z=z, cond=cond
        )
    try:
        S = np.linalg.solve(R, tf.C)
    except np.linalg.LinAlgError as exc:
        raise BoundaryPoleError(f"resolvent solve failed at z={z}", z=z, cond=cond) from exc
    return tf.A + z * tf.B @ S


def schur_identity_residual(tf: TransferFunction, z: complex) -> float:
    """Residual of I - tau(z)* tau(z) = (1-|z|^2) C*(I-zbar D*)^{-1}(I-z D)^{-1} C."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise InputError("the isometry identity is an interior-point statement")
    val = eval_tau(tf, z)
    m = tf.dim
    lhs = np.eye(m) - mc.adjoint(val) @ val
    k = tf.D.shape[0]
    if k == 0:
        rhs = np.zeros((m, m), complex)
    else:
        inner = np.linalg.solve(np.eye(k) - z * tf.D, tf.C)
        outer = np.linalg.solve(np.eye(k) - np.conj(z) * mc.adjoint(tf.D), inner)
        rhs = (1.0 - abs(z) ** 2) * mc.adjoint(tf.C) @ outer
    return mc.operator_norm(lhs - rhs)


@dataclass(frozen=True)
class CanonicalSplit:
    """Unitary/c.n.u. splitting of a contraction.

    ``H0`` and ``H1`` are isometric column bases of the unitary and c.n.u.
    subspaces, W = H0* M H0 is unitary, E_cnu = H1* M H1 has spectrum
    strictly inside the disc, and ``lambdas`` lists the unimodular
    eigenvalues sigma(W) in deterministic order.
    """

    H0: np.ndarray
    H1: np.ndarray
    W: np.ndarray
    E_cnu: np.ndarray
    lambdas: np.ndarray

    @property
    def k(self) -> int:
        return self.H0.shape[1]


def canonical_split(M, tol_pure: float = 1e-8,
                    offdiag_tol: float = 1e-8) -> CanonicalSplit:
    """Split a contraction into unitary (+) completely-non-unitary parts.

    The unitary subspace is spanned by eigenvectors whose eigenvalue modulus
    is at least 1 - tol_pure; for a contraction these eigenspaces reduce the
    operator, which is verified and enforced via the off-diagonal residual.
    """
    A = mc.as_matrix(M, "contraction")
    if A.shape[0] != A.shape[1]:
        raise InputError("canonical_split needs a square matrix")
    r = A.shape[0]
    if mc.operator_norm(A) > 1.0 + 1e-8:
        raise ValidationError("canonical_split input is not a contraction",
                              norm=mc.operator_norm(A))
    w, V = mc.eig(A)
    selected = np.abs(w) >= 1.0 - tol_pure
    k = int(np.sum(selected))
    if k == 0:
        H0 = np.zeros((r, 0), complex)
        H1 = np.eye(r, dtype=complex)
    else:
        vecs = V[:, selected]
        q, rr = np.linalg.qr(vecs)
        if np.min(np.abs(np.diag(rr))) < 1e-8:
            raise NumericError(
                "unimodular eigenvectors are numerically dependent; "
                "cannot orthonormalize the unitary subspace"
            )
        H0 = mc.phase_fix_columns(q)
        # complement basis: eigenvectors of I - H0 H0* at eigenvalue 1
        wp, vp = mc.herm_eig(np.eye(r) - H0 @ mc.adjoint(H0))
        H1 = vp[:, k:]
    W = mc.adjoint(H0) @ A @ H0
    E_cnu = mc.adjoint(H1) @ A @ H1
    off = max(
        mc.operator_norm(mc.adjoint(H0) @ A @ H1),
        mc.operator_norm(mc.adjoint(H1) @ A @ H0),
    )
    if off > offdiag_tol:
        raise ValidationError(
            "unitary-part subspace does not reduce the matrix; input is not "
            "a contraction within tolerance",
            offdiagonal_residual=float(off),
        )
    lambdas = mc.eigvals(W)
    if E_cnu.size and mc.spectral_radius(E_cnu) >= 1.0 - tol_pure:
        raise NumericError("c.n.u. part retained a near-unimodular eigenvalue")
    return CanonicalSplit(H0=H0, H1=H1, W=W, E_cnu=E_cnu, lambdas=lambdas)


def cnu_part(tf: TransferFunction, split: CanonicalSplit) -> TransferFunction:
    """Reduced transfer function on the c.n.u. subspace of the A-block."""
    H1 = split.H1
    return TransferFunction(
        A=mc.adjoint(H1) @ tf.A @ H1,
        B=mc.adjoint(H1) @ tf.B,
        C=tf.C @ H1,
        D=tf.D,
    )


def split_residual(tf: TransferFunction, split: CanonicalSplit, z: complex) -> float:
    """||tau(z) - (H0 W H0* + H1 tau_cnu(z) H1*)||; the block-diagonal law."""
    full = eval_tau(tf, z)
    sub = eval_tau(cnu_part(tf, split), z)
    recomposed = (split.H0 @ split.W @ mc.adjoint(split.H0)
                  + split.H1 @ sub @ mc.adjoint(split.H1))
    return mc.operator_norm(full - recomposed)


def check_no_unimodular_eigs(tf: TransferFunction, z: complex,
                             tol: float = 1e-9) -> tuple[bool, float]:
    """True iff every eigenvalue of tau(z) has modulus <= 1 - tol.

    Diagnostic for interior points of transfer functions whose A-block is
    completely non-unitary; returns the maximal eigenvalue modulus as well.
    """
    val = eval_tau(tf, z)
    if val.size == 0:
        return True, 0.0
    max_mod = float(np.max(np.abs(mc.eigvals(val))))
    return max_mod <= 1.0 - tol, max_mod


@dataclass(frozen=True)
class BoundaryScan:
    thetas: np.ndarray
    sigma_min: np.ndarray
    sigma_max: np.ndarray
    skipped: list

    @property
    def skip_rate(self) -> float:
        total = len(self.thetas) + len(self.skipped)
        return len(self.skipped) / total if total else 0.0

    def max_deviation(self) -> float:
        if self.sigma_min.size == 0:
            return 0.0
        return float(max(np.max(np.abs(self.sigma_min - 1.0)),
                         np.max(np.abs(self.sigma_max - 1.0))))


def boundary_scan(tf: TransferFunction, n_theta: int = 720) -> BoundaryScan:
    """Singular-value sweep of tau(e^{i theta}) over a uniform grid.

    Boundary poles of the resolvent are skipped and reported rather than
    extrapolated.
    """
    if n_theta < 1:
        raise InputError("n_theta must be >= 1")
    thetas, smin, smax, skipped = [], [], [], []
    for j in range(n_theta):
        theta = 2.0 * np.pi * j / n_theta
        try:
            val = eval_tau(tf, np.exp(1j * theta))
        except BoundaryPoleError:
            skipped.append(theta)
            continue
        if val.size == 0:
            thetas.append(theta)
            smin.append(1.0)
            smax.append(1.0)
            continue
        s = np.linalg.svd(val, compute_uv=False)
        thetas.append(theta)
        smin.append(float(s[-1]))
        smax.append(float(s[0]))
    return BoundaryScan(
        thetas=np.asarray(thetas),
        sigma_min=np.asarray(smin),
        sigma_max=np.asarray(smax),
        skipped=skipped,
    )


def taylor_symbols(tf: TransferFunction, count: int) -> list[np.ndarray]:
    """First ``count`` Taylor coefficients: [A, B C, B D C, B D^2 C, ...]."""
    if count < 1:
        raise InputError("count must be >= 1")
    out = [tf.A.copy()]
    if count == 1:
        return out
    m = tf.dim
    k = tf.D.shape[0]
    if k == 0:
        out.extend(np.zeros((m, m), complex) for _ in range(count - 1))
        return out
    acc = tf.C.copy()
    for _ in range(count - 1):
        out.append(tf.B @ acc)
        acc = tf.D @ acc
    return out
