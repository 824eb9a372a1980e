import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import canonical_data, canonical_ifs, constant_coeffs, zero_contraction_ifs
from hvfractal.errors import ConfigError, ValidationFailure
from hvfractal.funcs import Affine, BoundedRational, Constant, Linear
from hvfractal.system import (
    InterpolationData,
    assemble_ifs,
    compute_invariant_rect,
    derive_interval_maps,
    derive_shift_functions,
    validate_norm_conditions,
    verify_edelstein,
)


class TestIntervalMaps:
    def test_uniform_two_intervals(self):
        maps = derive_interval_maps(canonical_data())
        assert maps[0].a == pytest.approx(0.5, abs=1e-15)
        assert maps[0].f == pytest.approx(0.0, abs=1e-15)
        assert maps[1].a == pytest.approx(0.5, abs=1e-15)
        assert maps[1].f == pytest.approx(0.5, abs=1e-15)

    def test_nonuniform(self):
        data = InterpolationData.from_lists([1, 2, 4], [0, 1, 0], [0, 0, 0])
        maps = derive_interval_maps(data)
        assert maps[0].a == pytest.approx(1 / 3)
        assert maps[0].f == pytest.approx(2 / 3)
        assert maps[0](4.0) == pytest.approx(2.0, abs=1e-12)

    def test_single_interval_rejected(self):
        with pytest.raises(ConfigError, match="non-contractive"):
            InterpolationData.from_lists([0, 1], [0, 1], [0, 0])

    def test_non_monotone_rejected(self):
        with pytest.raises(ConfigError, match="strictly increasing"):
            InterpolationData.from_lists([0, 0.7, 0.5, 1], [0, 1, 2, 3], [0, 0, 0, 0])

    @given(
        knots=st.lists(
            st.floats(-10, 10, allow_nan=False), min_size=3, max_size=8, unique=True
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_endpoint_identities(self, knots):
        t = sorted(knots)
        if min(np.diff(t)) < 1e-6:
            return
        data = InterpolationData.from_lists(t, [0.0] * len(t), [0.0] * len(t))
        for j, lm in enumerate(derive_interval_maps(data), start=1):
            assert abs(lm(data.t0) - t[j - 1]) < 1e-12 * max(1, abs(t[j - 1]))
            assert abs(lm(data.tN) - t[j]) < 1e-12 * max(1, abs(t[j]))
            assert abs(lm.a) < 1


class TestShiftFunctions:
    def test_worked_example(self):
        # b=0.5, c=d=0, e=0.5, rational contractions: shifts pinned by data
        data = canonical_data()
        coeffs = [constant_coeffs(0.5, 0.0, 0.0, 0.5)] * 2
        contractions = [(BoundedRational(), BoundedRational())] * 2
        (p1, q1), _ = derive_shift_functions(data, coeffs, contractions)
        assert p1(0.0) == pytest.approx(0.0, abs=1e-15)
        assert p1(1.0) == pytest.approx(1.0, abs=1e-15)
        assert p1(0.3) == pytest.approx(0.3, abs=1e-15)  # p1 is the identity line
        assert q1(0.0) == pytest.approx(0.0, abs=1e-15)
        assert q1(1.0) == pytest.approx(-1.0, abs=1e-15)

    @pytest.mark.parametrize(
        "coeffs,contraction",
        [
            (constant_coeffs(0, 0, 0, 0), BoundedRational()),
            (constant_coeffs(0.5, 0.2, 0.2, 0.5), Linear(0.0)),
        ],
    )
    def test_vanishing_terms_give_data_interpolant(self, coeffs, contraction):
        # with D or S zero, p_j joins v_{j-1} to v_j affinely
        data = canonical_data()
        shifts = derive_shift_functions(
            data, [coeffs] * 2, [(contraction, contraction)] * 2
        )
        for j, (p, q) in enumerate(shifts, start=1):
            assert p(data.t0) == pytest.approx(data.v[j - 1], abs=1e-14)
            assert p(data.tN) == pytest.approx(data.v[j], abs=1e-14)
            assert q(data.t0) == pytest.approx(data.w[j - 1], abs=1e-14)
            assert q(data.tN) == pytest.approx(data.w[j], abs=1e-14)


class TestNormConditions:
    def test_pass(self):
        rep = validate_norm_conditions([constant_coeffs(0.5, 0, 0, 0)], 0, 1)
        assert rep.passed
        assert rep.first_column == [0.5]

    def test_fail_names_interval_and_sum(self):
        rep = validate_norm_conditions([constant_coeffs(0.8, 0, 0.3, 0)], 0, 1)
        assert not rep.passed
        assert "interval 1" in rep.violations[0]
        assert "1.1" in rep.violations[0]

    def test_affine_boundary_case(self):
        coeffs = {
            "b": Affine(0.4, 0.0),
            "c": Constant(0.0),
            "d": Constant(0.6),
            "e": Constant(0.0),
        }
        rep = validate_norm_conditions([coeffs], 0.0, 1.0)
        assert rep.first_column[0] == pytest.approx(1.0)
        assert rep.passed


class TestVerticalMaps:
    def test_endpoint_worked_example(self):
        data = canonical_data()
        coeffs = [constant_coeffs(0.5, 0.0, 0.0, 0.5)] * 2
        contractions = [(BoundedRational(), BoundedRational())] * 2
        ifs = assemble_ifs(data, coeffs, contractions)
        fv, fw = ifs.eval_F(1, 1.0, 0.0, 0.0)
        assert fv == pytest.approx(1.0, abs=1e-12)
        assert fw == pytest.approx(-1.0, abs=1e-12)

    def test_zero_contraction_ignores_vw(self):
        ifs = zero_contraction_ifs()
        rng = np.random.default_rng(0)
        for j in (1, 2):
            vals = {
                ifs.eval_F(j, 0.37, v, w)
                for v, w in rng.uniform(-3, 3, (5, 2))
            }
            assert len(vals) == 1

    def test_join_up_conditions_all_j(self):
        ifs = canonical_ifs()
        d = ifs.data
        for j in (1, 2):
            fv, fw = ifs.eval_F(j, d.t0, d.v[0], d.w[0])
            assert fv == pytest.approx(d.v[j - 1], abs=1e-12)
            assert fw == pytest.approx(d.w[j - 1], abs=1e-12)
            fv, fw = ifs.eval_F(j, d.tN, d.v[-1], d.w[-1])
            assert fv == pytest.approx(d.v[j], abs=1e-12)
            assert fw == pytest.approx(d.w[j], abs=1e-12)

    def test_eval_g_fixed_points(self):
        ifs = canonical_ifs()
        d = ifs.data
        assert ifs.eval_g(1, d.t0, d.v[0], d.w[0]) == pytest.approx(
            (d.t0, d.v[0], d.w[0]), abs=1e-12
        )
        n = ifs.n_maps
        assert ifs.eval_g(n, d.tN, d.v[-1], d.w[-1]) == pytest.approx(
            (d.tN, d.v[-1], d.w[-1]), abs=1e-12
        )
        for j in (1, 2):
            tj, fv, fw = ifs.eval_g(j, d.tN, d.v[-1], d.w[-1])
            assert (tj, fv, fw) == pytest.approx(
                (d.t[j], d.v[j], d.w[j]), abs=1e-12
            )

    def test_bad_index_rejected(self):
        ifs = canonical_ifs()
        with pytest.raises(ConfigError):
            ifs.eval_F(0, 0.5, 0, 0)
        with pytest.raises(ConfigError):
            ifs.eval_g(3, 0.5, 0, 0)


class TestInvariantRect:
    def test_zero_contraction_one_pass(self):
        ifs = zero_contraction_ifs()
        assert ifs.rect_attempts == 1
        d = ifs.data
        assert ifs.rect.contains(d.v, d.w)

    def test_bounded_contractions_invariant(self):
        ifs = canonical_ifs()
        rng = np.random.default_rng(1)
        t = rng.uniform(0, 1, 2000)
        v = rng.uniform(ifs.rect.v_lo, ifs.rect.v_hi, 2000)
        w = rng.uniform(ifs.rect.w_lo, ifs.rect.w_hi, 2000)
        for j in (1, 2):
            fv, fw = ifs.eval_F(j, t, v, w)
            assert ifs.rect.contains(fv, fw)

    def test_near_isometric_needs_growth(self):
        data = InterpolationData.from_lists(
            [0, 0.5, 1], [0, 40.0, 0], [0, -40.0, 0]
        )
        coeffs = [constant_coeffs(1.0, 0.0, 0.0, 1.0)] * 2
        contractions = [(Linear(0.99), Linear(0.99))] * 2
        maps = derive_interval_maps(data)
        shifts = derive_shift_functions(data, coeffs, contractions)
        from hvfractal.system import VerticalMap

        vms = [
            VerticalMap(**coeffs[i], s=contractions[i][0], r=contractions[i][1],
                        p=shifts[i][0], q=shifts[i][1], j=i + 1)
            for i in range(2)
        ]
        rect, attempts = compute_invariant_rect(data, vms, margin_growth=1.3)
        assert attempts > 1

    def test_margin_growth_validated(self):
        ifs = zero_contraction_ifs()
        with pytest.raises(ConfigError):
            compute_invariant_rect(ifs.data, ifs.vertical_maps, margin_growth=1.0)


class TestEdelsteinVerifier:
    def test_zero_contraction_ratio_zero(self):
        rep = verify_edelstein(zero_contraction_ifs(), n_pairs=512, seed=3)
        assert rep.max_ratio == pytest.approx(0.0, abs=1e-15)
        assert rep.passed

    def test_linear_half_bounded_by_half(self):
        data = canonical_data()
        coeffs = [constant_coeffs(0.5, 0.2, 0.2, 0.5)] * 2
        contractions = [(Linear(0.5), Linear(0.5))] * 2
        ifs = assemble_ifs(data, coeffs, contractions)
        rep = verify_edelstein(ifs, n_pairs=2048, seed=5)
        assert rep.passed
        assert rep.max_ratio <= 0.5 * 0.7 + 1e-12

    def test_identity_config_fails(self):
        # flat data keeps the shifts at zero, so the identity maps admit an
        # invariant rectangle and the failure is the sampled ratio itself
        data = InterpolationData.from_lists([0, 0.5, 1], [0, 0, 0], [0, 0, 0])
        coeffs = [constant_coeffs(1.0, 0.0, 0.0, 1.0)] * 2
        contractions = [(Linear(1.0), Linear(1.0))] * 2
        ifs = assemble_ifs(data, coeffs, contractions)
        rep = verify_edelstein(ifs, n_pairs=1024, seed=5)
        assert not rep.passed
        assert rep.max_ratio == pytest.approx(1.0, abs=1e-12)

    def test_seed_reproducibility(self):
        ifs = canonical_ifs()
        a = verify_edelstein(ifs, n_pairs=256, seed=9)
        b = verify_edelstein(ifs, n_pairs=256, seed=9)
        assert a.max_ratio == b.max_ratio
        assert a.witness == b.witness

    def test_canonical_strict(self):
        rep = verify_edelstein(canonical_ifs(), n_pairs=4096, seed=7)
        assert rep.passed
        assert rep.max_ratio < 1.0


class TestAssemblyValidation:
    def test_norm_violation_raises(self):
        data = canonical_data()
        coeffs = [constant_coeffs(0.8, 0.0, 0.3, 0.0)] * 2
        contractions = [(Linear(0.5), Linear(0.5))] * 2
        with pytest.raises(ValidationFailure, match="interval 1"):
            assemble_ifs(data, coeffs, contractions)
