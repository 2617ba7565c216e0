import math

import numpy as np
import pytest

from helicity_lab import (
    DiffeoChain,
    InternalInconsistencyError,
    PathPreconditionError,
    ScalarField,
    ShearMap,
    SpectralField,
    VOLUME,
    abc_field,
    basis_field,
    choose_basis_mode,
    constant_path,
    energy,
    expansion_coefficient,
    export_path,
    helical_field,
    helicity_spectral,
    linear_combination,
    negative_path,
    positive_path,
    pushforward,
    rescale_to_level,
    zero_path,
)

TS = np.linspace(0.0, 1.0, 101)


def max_diff(a, b):
    return linear_combination([(1.0, a), (-1.0, b)]).max_amplitude()


def abc_shear_pair():
    """The documented endpoint pair: ABC and its image under an x-shear,
    snapped onto the exact common helicity level."""
    w0 = abc_field(1, 1, 1)
    g = ScalarField.from_modes(1, {(0, 0, 1): -0.25j, (0, 0, -1): 0.25j})  # 0.5 sin z
    w1_raw, _ = pushforward(
        DiffeoChain((ShearMap("x", g),)), w0, 9, 48, residual_bound=None
    )
    h0 = helicity_spectral(w0)
    w1 = linear_combination([(math.sqrt(h0 / helicity_spectral(w1_raw)), w1_raw)])
    return w0, w1, h0


class TestBasisModes:
    def test_basis_fields_have_unit_norm_and_real_coefficients(self):
        w = abc_field(1, 1, 1)
        for sign in (+1, -1):
            m = choose_basis_mode(w, +1)
            v = basis_field(m)
            assert abs(energy(v) - 1.0) < 1e-12
            c = expansion_coefficient(w, m)
            assert isinstance(c, float)

    def test_coefficient_recovers_pair_helicity(self):
        # cos and sin quadrature coefficients at (k,+) recover the
        # two-mode helicity contribution 2 (2 pi)^3 |a|^2 / |k|
        w = abc_field(1, 0, 0)
        from helicity_lab import helical_decompose
        from helicity_lab.paths import COS, SIN, BasisMode

        a = helical_decompose(w).amplitude((0, 0, 1), +1)
        ca = expansion_coefficient(w, BasisMode((0, 0, 1), +1, COS))
        cb = expansion_coefficient(w, BasisMode((0, 0, 1), +1, SIN))
        assert abs(ca - math.sqrt(2 * VOLUME) * a.real) < 1e-12
        assert abs(cb - math.sqrt(2 * VOLUME) * a.imag) < 1e-12
        assert abs((ca**2 + cb**2) - 2 * VOLUME * abs(a) ** 2) < 1e-9

    def test_zero_amplitude_of_required_sign_raises(self):
        w = helical_field((0, 0, 1), -1, 1.0)  # purely negative-helical
        with pytest.raises(InternalInconsistencyError):
            choose_basis_mode(w, +1)


class TestPositivePath:
    def test_endpoints_exact(self):
        w0, w1, _ = abc_shear_pair()
        path = positive_path(w0, w1)
        assert max_diff(path.evaluate(0.0), w0) == 0.0
        assert max_diff(path.evaluate(1.0), w1) == 0.0

    def test_trace_matches_closed_form(self):
        w0, w1, h0 = abc_shear_pair()
        path = positive_path(w0, w1)
        raw = path.raw_helicity_trace(TS)
        formula = path.formula_trace(TS)
        assert np.min(raw) > 0.0
        assert np.max(np.abs(raw - formula)) < 1e-10 * abs(h0)

    def test_same_endpoint_uses_single_mode_formula(self):
        w = helical_field((0, 0, 1), +1, 0.8)
        path = positive_path(w, w)
        assert path.mode0 == path.mode1
        raw = path.raw_helicity_trace(TS)
        formula = path.formula_trace(TS)
        assert np.max(np.abs(raw - formula)) < 1e-12 * abs(path.h0)
        assert np.min(raw) > 0.0

    def test_distinct_modes_mid_segment_orthogonality(self):
        w0 = helical_field((0, 0, 1), +1, 0.9)
        w1 = helical_field((0, 1, 0), +1, 1.1)
        path = positive_path(w0, w1)
        assert path.mode0 != path.mode1
        raw = path.raw_helicity_trace(TS)
        assert np.max(np.abs(raw - path.formula_trace(TS))) < 1e-12 * abs(path.h0)

    def test_nonpositive_endpoint_rejected(self):
        w0 = abc_field(1, 1, 1)
        bad = helical_field((0, 0, 1), -1, 1.0)
        with pytest.raises(PathPreconditionError):
            positive_path(w0, bad)


class TestRescale:
    def test_level_held_everywhere(self):
        w0, w1, h0 = abc_shear_pair()
        path = rescale_to_level(positive_path(w0, w1), h0)
        trace = path.helicity_trace(TS)
        assert np.max(np.abs(trace - h0)) < 1e-10 * abs(h0)
        assert max_diff(path.evaluate(0.0), w0) < 1e-12
        assert max_diff(path.evaluate(1.0), w1) < 1e-12

    def test_constant_path_scale_is_one(self):
        w = abc_field(1, 1, 1)
        path = rescale_to_level(constant_path(w), helicity_spectral(w))
        for t in (0.0, 0.3, 0.77, 1.0):
            assert abs(path.scale(t) - 1.0) < 1e-12
            assert max_diff(path.evaluate(t), w) < 1e-12

    def test_mis_specified_level_rejected(self):
        w0, w1, h0 = abc_shear_pair()
        with pytest.raises(PathPreconditionError):
            rescale_to_level(positive_path(w0, w1), 2.0 * h0)

    def test_sign_mismatch_rejected(self):
        w0, w1, h0 = abc_shear_pair()
        with pytest.raises(PathPreconditionError):
            rescale_to_level(positive_path(w0, w1), -h0)


class TestNegativePath:
    def test_mirror_trace(self):
        w = helical_field((0, 0, 1), -1, 0.8)
        path = negative_path(w, w)
        raw = path.raw_helicity_trace(TS)
        assert np.max(raw) < 0.0
        assert np.max(np.abs(raw - path.formula_trace(TS))) < 1e-12 * abs(path.h0)

    def test_rescaled_negative_level(self):
        w0 = helical_field((0, 0, 1), -1, 0.7)
        w1_raw = helical_field((1, 0, 0), -1, 0.9)
        c = helicity_spectral(w0)
        w1 = linear_combination(
            [(math.sqrt(c / helicity_spectral(w1_raw)), w1_raw)]
        )
        path = rescale_to_level(negative_path(w0, w1), c)
        trace = path.helicity_trace(TS)
        assert np.max(np.abs(trace - c)) < 1e-10 * abs(c)

    def test_mixed_sign_endpoints_rejected(self):
        pos = helical_field((0, 0, 1), +1, 1.0)
        neg = helical_field((0, 0, 1), -1, 1.0)
        with pytest.raises(PathPreconditionError):
            negative_path(pos, neg)
        with pytest.raises(PathPreconditionError):
            positive_path(neg, pos)


class TestZeroPath:
    def za(self):
        return SpectralField.from_modes(
            1, {(0, 0, 1): np.array([-0.5j, 0, 0]), (0, 0, -1): np.array([0.5j, 0, 0])}
        )

    def zb(self):
        return SpectralField.from_modes(
            1, {(1, 0, 0): np.array([0, -0.5j, 0]), (-1, 0, 0): np.array([0, 0.5j, 0])}
        )

    def test_trace_identically_zero(self):
        path = zero_path(self.za(), self.zb())
        trace = path.helicity_trace(TS)
        assert np.max(np.abs(trace)) < 1e-10 * energy(self.za())

    def test_midpoint_is_zero_field(self):
        path = zero_path(self.za(), self.zb())
        assert path.evaluate(0.5).n_modes == 0

    def test_zero_endpoints_trivial(self):
        zero = SpectralField(1, np.zeros((0, 3), np.int64), np.zeros((0, 3), np.complex128))
        path = zero_path(zero, zero)
        for t in (0.0, 0.25, 0.5, 1.0):
            assert path.evaluate(t).n_modes == 0

    def test_nonzero_helicity_rejected(self):
        with pytest.raises(PathPreconditionError):
            zero_path(self.za(), abc_field(1, 1, 1))


class TestContinuity:
    def test_step_distance_shrinks_with_refinement(self):
        w0, w1, h0 = abc_shear_pair()
        path = rescale_to_level(positive_path(w0, w1), h0)
        coarse = path.continuity_report(np.linspace(0, 1, 11))
        fine = path.continuity_report(np.linspace(0, 1, 41))
        assert fine["max_step_distance"] < coarse["max_step_distance"]
        # Lipschitz estimates agree within a factor of two once resolved
        assert fine["lipschitz_estimate"] < 2.0 * coarse["lipschitz_estimate"]

    def test_parameter_domain(self):
        w = abc_field(1, 1, 1)
        path = positive_path(w, w)
        with pytest.raises(PathPreconditionError):
            path.evaluate(1.5)


def test_export_path(tmp_path):
    w = abc_field(1, 1, 1)
    path = rescale_to_level(positive_path(w, w), helicity_spectral(w), samples=11)
    out = tmp_path / "path"
    export_path(path, out, np.linspace(0, 1, 11))
    trace = (out / "trace.csv").read_text().strip().splitlines()
    assert trace[0] == "t,H_raw,scale,H_rescaled"
    assert len(trace) == 12
    assert len(list(out.glob("field_*.json"))) == 11
