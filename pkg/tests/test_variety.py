"""Variety sampling: fibers, membership, boundary, joint eigenvalues,
swap symmetry."""

from __future__ import annotations

import numpy as np
import pytest

import andovar as av
import andovar.matrix_core as mc
from andovar.errors import InputError, PurityError

from conftest import build_pipeline, interior_points, make_suite


class TestFibers:
    def test_zero_pair_diagonal_fiber(self, zero_pair_m2):
        _, _, _, coll, split = zero_pair_m2
        fiber = av.variety_fiber(coll, split, 0.3)
        assert len(fiber) == 2
        for z2, kind in fiber:
            assert kind == "V1"
            assert abs(z2 - 0.3) <= 1e-12

    def test_identity_second_entry_constant_fiber(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        _, _, _, coll, split = build_pipeline(J, np.eye(2, dtype=complex))
        for z1 in (0.0, 0.4, -0.2 + 0.6j):
            fiber = av.variety_fiber(coll, split, z1)
            assert all(kind == "V0" for _, kind in fiber)
            assert all(abs(z2 - 1.0) <= 1e-12 for z2, _ in fiber)

    def test_scalar_half_fiber_at_origin(self, scalar_half_pair):
        _, _, _, coll, split = scalar_half_pair
        fiber = av.variety_fiber(coll, split, 0.0)
        assert len(fiber) == 1
        assert abs(fiber[0][0] - complex(coll.A.conj().T[0, 0])) <= 1e-14

    def test_fiber_cardinality_is_r1(self):
        for idx, (kind, dim, T1, T2) in enumerate(make_suite(6, seed0=10)):
            _, d1, _, coll, split = build_pipeline(T1, T2)
            for z1 in interior_points(5, seed=idx):
                assert len(av.variety_fiber(coll, split, z1)) == d1.rank

    def test_rejects_outside_disc(self, zero_pair_m2):
        _, _, _, coll, split = zero_pair_m2
        with pytest.raises(InputError):
            av.variety_fiber(coll, split, 1.2)


class TestMembership:
    def test_on_fiber_point(self, zero_pair_m2):
        _, _, _, coll, split = zero_pair_m2
        assert av.membership_residual(coll, split, 0.4, 0.4) <= 1e-10

    def test_distance_to_diagonal(self, zero_pair_m2):
        _, _, _, coll, split = zero_pair_m2
        assert av.membership_residual(coll, split, 0.3, 0.9) == pytest.approx(0.6, abs=1e-10)

    @pytest.mark.parametrize("idx", range(5))
    def test_sampled_points_are_members(self, idx):
        kind, dim, T1, T2 = make_suite(5, seed0=20)[idx]
        _, _, _, coll, split = build_pipeline(T1, T2)
        psi = av.adjoint_transfer(coll)
        for z1 in interior_points(5, seed=idx):
            for z2 in mc.eigvals(psi.eval(z1)):
                assert av.membership_residual(coll, split, z1, z2) <= 1e-8


class TestBoundary:
    def test_zero_pair_boundary_is_diagonal(self, zero_pair_m2):
        _, _, _, coll, split = zero_pair_m2
        sample = av.boundary_samples(coll, split, 64)
        assert len(sample) == 64 * 2
        assert all(abs(z2 - z1) <= 1e-10 for z1, z2 in sample.points)

    def test_identity_second_entry_boundary(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        _, _, _, coll, split = build_pipeline(J, np.eye(2, dtype=complex))
        sample = av.boundary_samples(coll, split, 32)
        assert all(k == "V0" for k in sample.kinds)
        assert all(abs(z2 - 1.0) <= 1e-10 for _, z2 in sample.points)

    @pytest.mark.parametrize("idx", range(6))
    def test_boundary_values_unimodular(self, idx):
        kind, dim, T1, T2 = make_suite(6, seed0=30)[idx]
        _, _, _, coll, split = build_pipeline(T1, T2)
        sample = av.boundary_samples(coll, split, 90)
        assert not sample.skipped_thetas
        for _, z2 in sample.points:
            assert abs(abs(z2) - 1.0) <= 1e-6

    @pytest.mark.parametrize("idx", range(4))
    def test_interior_fibers_stay_inside(self, idx):
        kind, dim, T1, T2 = make_suite(4, seed0=35)[idx]
        _, _, _, coll, split = build_pipeline(T1, T2)
        assert split.k == 0  # pure-pure pairs have no unitary sheet
        for z1 in interior_points(10, seed=idx, radius=0.9):
            for z2, _ in av.variety_fiber(coll, split, z1):
                assert abs(z2) < 1.0


class TestJointEigenvalues:
    def test_explicit_diagonal_pair(self):
        T1 = np.diag([0.3, 0.4]).astype(complex)
        T2 = np.diag([0.2, -0.5]).astype(complex)
        pair, d1, d2, coll, split = build_pipeline(T1, T2)
        rep = av.joint_eig_membership(pair, coll, split)
        assert rep.failures == 0
        got = {(round(l1.real, 8), round(l2.real, 8)) for l1, l2, _ in rep.entries}
        assert got == {(0.3, 0.2), (0.4, -0.5)}
        assert all(res <= 1e-8 for _, _, res in rep.entries)

    def test_zero_pair_origin(self, zero_pair_m2):
        pair, _, _, coll, split = zero_pair_m2
        rep = av.joint_eig_membership(pair, coll, split)
        assert rep.failures == 0
        assert all(res <= 1e-10 for _, _, res in rep.entries)

    def test_identity_second_entry_boundary_pair(self):
        T1 = np.diag([0.5]).astype(complex)
        pair, d1, d2, coll, split = build_pipeline(T1, np.eye(1, dtype=complex))
        rep = av.joint_eig_membership(pair, coll, split)
        assert rep.failures == 0
        assert len(rep.entries) == 1
        l1, l2, res = rep.entries[0]
        assert (l1, l2) == pytest.approx((0.5, 1.0), abs=1e-12)
        assert res <= 1e-10

    @pytest.mark.parametrize("idx", range(8))
    def test_generated_pairs(self, idx):
        kind, dim, T1, T2 = make_suite(8, seed0=45)[idx]
        pair, d1, d2, coll, split = build_pipeline(T1, T2)
        rep = av.joint_eig_membership(pair, coll, split)
        for _, _, res in rep.entries:
            assert res <= 1e-7


class TestSymmetry:
    def test_zero_pair(self):
        Z = np.zeros((2, 2), complex)
        pair = av.ContractionPair.create(Z, Z)
        assert av.symmetry_residual(pair, 6) <= 1e-10

    def test_scalar_half(self):
        pair = av.ContractionPair.create([[0.5]], [[0.5]])
        assert av.symmetry_residual(pair, 8) <= 1e-8

    def test_diagonal_dim3(self):
        T1, T2 = av.generate_pair("diag", 3, seed=2)
        pair = av.ContractionPair.create(T1, T2)
        assert av.symmetry_residual(pair, 8) <= 1e-8

    def test_rejects_nonpure(self):
        J = np.array([[0, 0.5], [0, 0]], complex)
        pair = av.ContractionPair.create(J, np.eye(2, dtype=complex))
        with pytest.raises(PurityError):
            av.symmetry_residual(pair, 4)


class TestOutputs:
    def test_csv_shape_and_determinism(self, zero_pair_m2):
        _, _, _, coll, split = zero_pair_m2
        sample = av.boundary_samples(coll, split, 16)
        from andovar.variety import sample_to_csv, sample_to_svg

        csv1 = sample_to_csv(sample)
        csv2 = sample_to_csv(av.boundary_samples(coll, split, 16))
        assert csv1 == csv2
        lines = csv1.strip().split("\n")
        assert lines[0] == "theta,re_z1,im_z1,re_z2,im_z2,kind,residual"
        assert len(lines) == 1 + 16 * 2
        svg = sample_to_svg(sample)
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
