"""Truncated Hardy-space dilation: assembly, intertwining, minimality."""

from __future__ import annotations

import numpy as np
import pytest

import andovar as av
import andovar.matrix_core as mc
from andovar.errors import InputError, PurityError

from conftest import build_pipeline, make_suite


def assemble_pi_oracle(T1, d1, N):
    """Independent assembly: each block row from a fresh matrix power."""
    r1, n = d1.rank, T1.shape[0]
    Pi = np.zeros(((N + 1) * r1, n), complex)
    for k in range(N + 1):
        Pi[k * r1:(k + 1) * r1] = (
            d1.basis.conj().T @ d1.D
            @ np.linalg.matrix_power(T1.conj().T, k))
    return Pi


class TestAssembly:
    @pytest.mark.parametrize("m", [1, 2])
    def test_zero_pair_structure(self, m):
        Z = np.zeros((m, m), complex)
        pair, d1, d2, coll, _ = build_pipeline(Z, Z)
        dil = av.build_dilation(pair, coll, d1, N=3)
        # embedding is the inclusion into the constant coefficients
        np.testing.assert_allclose(dil.Pi[:m], np.eye(m), atol=1e-14)
        np.testing.assert_allclose(dil.Pi[m:], 0.0, atol=1e-14)
        # multiplier is the block shift times W* = I
        np.testing.assert_allclose(dil.MPsi, dil.Mz, atol=1e-14)

    def test_nilpotent_exact_isometry(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        pair, d1, d2, coll, _ = build_pipeline(J, J)
        dil = av.build_dilation(pair, coll, d1, N=2)
        np.testing.assert_allclose(
            dil.Pi.conj().T @ dil.Pi, np.eye(2), atol=1e-12)
        assert dil.tail_bound == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_oracle_assembly(self, seed):
        T1, T2 = av.generate_pair("triangular-commuting", 3, seed=seed)
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        dil = av.build_dilation(pair, coll, d1)
        np.testing.assert_allclose(
            dil.Pi, assemble_pi_oracle(pair.T1, d1, dil.N), atol=1e-12)
        assert mc.operator_norm(
            dil.Pi.conj().T @ dil.Pi - np.eye(pair.dim)
        ) <= dil.tail_bound ** 2 + 1e-10

    def test_truncation_degree_floor_enforced(self):
        T1, T2 = av.generate_pair("diag", 3, seed=1)
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        n_min = av.truncation_degree(pair.T1, 1e-9)
        with pytest.raises(InputError):
            av.build_dilation(pair, coll, d1, N=n_min - 1)
        with pytest.raises(InputError):
            av.build_dilation(pair, coll, d1, N=5000)

    def test_rejects_nonpure(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        pair, d1, d2, coll, _ = build_pipeline(J, np.eye(2, dtype=complex))
        pair_swapped = av.ContractionPair.create(pair.T2, pair.T1)
        d1s = av.defect(pair_swapped.T1)
        with pytest.raises(PurityError):
            av.build_dilation(pair_swapped, coll, d1s)


class TestIntertwining:
    def test_nilpotent_zero_residuals(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        pair, d1, d2, coll, _ = build_pipeline(J, J)
        dil = av.build_dilation(pair, coll, d1, N=3)
        rep = av.intertwining_residuals(dil, pair)
        assert rep.res_z <= 1e-10
        assert rep.res_psi <= 1e-10

    def test_zero_pair_zero_residuals(self, zero_pair_m2):
        pair, d1, d2, coll, _ = zero_pair_m2
        dil = av.build_dilation(pair, coll, d1, N=2)
        rep = av.intertwining_residuals(dil, pair)
        assert rep.res_z <= 1e-12
        assert rep.res_psi <= 1e-12

    @pytest.mark.parametrize("idx", range(8))
    def test_residuals_below_computed_bounds(self, idx):
        kind, dim, T1, T2 = make_suite(8, dims=(2, 3, 4), seed0=60, radius=0.8)[idx]
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        dil = av.build_dilation(pair, coll, d1)
        rep = av.intertwining_residuals(dil, pair)
        assert rep.res_z <= rep.bound_z + 1e-9
        assert rep.res_psi <= rep.bound_psi + 1e-9

    @pytest.mark.parametrize("idx", range(4))
    def test_compressions_recover_the_pair(self, idx):
        kind, dim, T1, T2 = make_suite(4, dims=(2, 3), seed0=70, radius=0.75)[idx]
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        dil = av.build_dilation(pair, coll, d1)
        rep = av.compression_residuals(dil, pair)
        assert rep.res_t1 <= rep.bound_t1 + 1e-9
        assert rep.res_t2 <= rep.bound_t2 + 1e-9


class TestMinimality:
    def test_zero_pair_full_rank(self, zero_pair_m2):
        pair, d1, d2, coll, _ = zero_pair_m2
        dil = av.build_dilation(pair, coll, d1, N=3)
        assert av.minimality_defect(dil) == 0

    def test_jordan_full_defect_space(self):
        # I - T1 T1* = diag(3/4, 1) has rank 2
        J = np.array([[0, 0.5], [0, 0]], complex)
        pair, d1, d2, coll, _ = build_pipeline(J, J)
        assert d1.rank == 2
        dil = av.build_dilation(pair, coll, d1, N=2)
        # oracle: rank via raw SVD of the stacked Krylov blocks
        blocks, cur = [], dil.Pi
        for _ in range(dil.N + 1):
            blocks.append(cur)
            cur = dil.Mz @ cur
        s = np.linalg.svd(np.hstack(blocks), compute_uv=False)
        assert int(np.sum(s > 1e-10)) == dil.rows
        assert av.minimality_defect(dil) == 0

    @pytest.mark.parametrize("idx", range(4))
    def test_generated_pairs_minimal(self, idx):
        kind, dim, T1, T2 = make_suite(4, dims=(2, 3), seed0=80, radius=0.75)[idx]
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        dil = av.build_dilation(pair, coll, d1)
        assert av.minimality_defect(dil) == 0


class TestMultiplierIsometry:
    def test_shift_times_unitary(self, zero_pair_m2):
        pair, d1, d2, coll, _ = zero_pair_m2
        dil = av.build_dilation(pair, coll, d1, N=4)
        rep = av.mpsi_isometry_residual(dil, coll)
        assert rep.restricted <= 1e-12

    def test_constant_identity_multiplier(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        pair, d1, d2, coll, _ = build_pipeline(J, np.eye(2, dtype=complex))
        dil = av.build_dilation(pair, coll, d1, N=3)
        np.testing.assert_allclose(dil.MPsi, np.eye(dil.rows), atol=1e-12)
        rep = av.mpsi_isometry_residual(dil, coll)
        assert rep.raw <= 1e-12

    @pytest.mark.parametrize("idx", range(4))
    def test_restricted_residual_small(self, idx):
        kind, dim, T1, T2 = make_suite(4, dims=(2, 3), seed0=90, radius=0.7)[idx]
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        # window generous enough for the multiplier symbols to decay
        dil = av.build_dilation(pair, coll, d1, N=120)
        rep = av.mpsi_isometry_residual(dil, coll)
        assert rep.q_eff <= dil.N
        assert rep.restricted <= 1e-6


class TestAlgebra:
    @pytest.mark.parametrize("idx", range(3))
    def test_multiplier_commutes_with_shift(self, idx):
        kind, dim, T1, T2 = make_suite(3, dims=(2, 3), seed0=95, radius=0.75)[idx]
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        dil = av.build_dilation(pair, coll, d1)
        assert mc.operator_norm(dil.Mz @ dil.MPsi - dil.MPsi @ dil.Mz) <= 1e-12

    def test_symbols_match_transfer_eval(self):
        T1, T2 = av.generate_pair("triangular-commuting", 3, seed=17, radius=0.7)
        pair, d1, d2, coll, _ = build_pipeline(T1, T2)
        dil = av.build_dilation(pair, coll, d1)
        psi = av.adjoint_transfer(coll)
        symbols = av.taylor_symbols(psi, dil.N + 1)
        z = 0.6 - 0.2j
        total = sum(sym * z ** q for q, sym in enumerate(symbols))
        dnorm = mc.operator_norm(coll.D)
        tail = abs(z) ** (dil.N + 1) / max(1e-12, 1 - abs(z) * dnorm)
        assert mc.operator_norm(total - psi.eval(z)) <= tail + 1e-12
