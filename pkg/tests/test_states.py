import numpy as np
import pytest

from coherentlab import (
    CoherentPoint,
    ModeBasis,
    QuadratureGrid,
    SuperposedState,
    SupportTruncationError,
    amplitude,
    evolve_free,
    identity_check,
    overlap,
    single_mode,
    v_value,
)

E_MINUS_1 = 0.36787944117144233  # exp(-(4+0+0)/4) for a 2-quadrature-unit offset


def _pt(q, p):
    return CoherentPoint(q=np.atleast_1d(q), p=np.atleast_1d(p))


def _random_point(rng, n, scale=4.0):
    return CoherentPoint(q=rng.normal(0, scale, n), p=rng.normal(0, scale, n))


class TestOverlap:
    def test_identity_case_exact(self):
        basis = ModeBasis(omegas=[1.0, 0.5], weights=[1.0, 2.0])
        rng = np.random.default_rng(0)
        for _ in range(5):
            a = _random_point(rng, 2)
            b = CoherentPoint(q=a.q.copy(), p=a.p.copy())
            assert overlap(a, b, basis) == 1.0 + 0.0j

    def test_q_offset_magnitude(self):
        basis = single_mode()
        val = overlap(_pt(0.0, 0.0), _pt(2.0, 0.0), basis)
        assert abs(val) == pytest.approx(E_MINUS_1, abs=1e-15)
        assert val.imag == pytest.approx(0.0, abs=1e-15)

    def test_p_offset_magnitude_and_vanishing_cross_term(self):
        basis = single_mode()
        val = overlap(_pt(0.0, 0.0), _pt(0.0, 2.0), basis)
        assert abs(val) == pytest.approx(E_MINUS_1, abs=1e-15)
        # cross term 2i<p-p'.q+q'> vanishes because q + q' = 0
        assert val.imag == pytest.approx(0.0, abs=1e-15)

    def test_dimension_mismatch_rejected(self):
        basis = single_mode()
        with pytest.raises(ValueError):
            overlap(_pt([0.0, 0.0], [0.0, 0.0]), _pt(0.0, 0.0), basis)

    def test_hermitian_symmetry(self):
        rng = np.random.default_rng(1)
        basis = ModeBasis(omegas=[1.0, 2.0, 0.3], weights=[0.7, 1.0, 1.9])
        for _ in range(50):
            a, b = _random_point(rng, 3), _random_point(rng, 3)
            assert abs(overlap(a, b, basis) - np.conj(overlap(b, a, basis))) < 1e-14

    def test_magnitude_bounded(self):
        rng = np.random.default_rng(2)
        basis = ModeBasis(omegas=[0.0, 1.0], weights=[1.3, 0.4])
        for _ in range(50):
            a, b = _random_point(rng, 2, scale=8.0), _random_point(rng, 2, scale=8.0)
            assert abs(overlap(a, b, basis)) <= 1.0 + 1e-15

    def test_far_separated_flushed_to_zero(self):
        basis = single_mode()
        assert overlap(_pt(0.0, 0.0), _pt(1e6, 0.0), basis) == 0.0


class TestGram:
    def test_positive_semidefinite_random_clouds(self):
        rng = np.random.default_rng(3)
        basis = ModeBasis(omegas=[1.0, 0.5], weights=[1.0, 2.5])
        worst = np.inf
        for _ in range(200):
            m = int(rng.integers(2, 7))
            pts = [_random_point(rng, 2, scale=rng.uniform(0.2, 5.0)) for _ in range(m)]
            state = SuperposedState(np.ones(m), pts, basis)
            worst = min(worst, float(np.linalg.eigvalsh(state.gram()).min()))
        assert worst >= -1e-10


class TestSuperposedState:
    def test_zero_coefficients_rejected(self):
        basis = single_mode()
        with pytest.raises(ValueError):
            SuperposedState([0.0, 0.0], [_pt(0.0, 0.0), _pt(3.0, 0.0)], basis)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            SuperposedState([], [], single_mode())

    def test_basis_mismatch_rejected(self):
        with pytest.raises(ValueError):
            SuperposedState([1.0], [_pt([0.0, 0.0], [0.0, 0.0])], single_mode())

    def test_norm_of_orthogonal_like_superposition(self):
        basis = single_mode()
        state = SuperposedState([0.6, 0.8], [_pt(0.0, 0.0), _pt(14.0, 0.0)], basis)
        assert state.norm_sq == pytest.approx(1.0, abs=1e-12)

    def test_components_round_trip(self):
        basis = single_mode()
        state = SuperposedState([0.5j, 1.0], [_pt(1.0, 2.0), _pt(-3.0, 0.5)], basis)
        comps = state.components()
        assert comps[0][0] == 0.5j
        assert np.array_equal(comps[1][1].q, [-3.0])


class TestAmplitude:
    def test_single_component_at_center(self):
        basis = single_mode()
        a = _pt(0.0, 0.0)
        state = SuperposedState.single(a, basis)
        assert amplitude(state, a) == pytest.approx(1.0)

    def test_two_far_components(self):
        basis = single_mode()
        a, b = _pt(0.0, 0.0), _pt(14.0, 0.0)
        state = SuperposedState([0.6, 0.8], [a, b], basis)
        # cross term bounded by 0.8 exp(-49)
        assert amplitude(state, a) == pytest.approx(0.6, abs=1e-12)
        assert amplitude(state, b) == pytest.approx(0.8, abs=1e-12)

    def test_linear_in_coefficients(self):
        rng = np.random.default_rng(4)
        basis = ModeBasis(omegas=[1.0, 1.0], weights=[1.0, 0.8])
        pts = [_random_point(rng, 2) for _ in range(3)]
        probe = _random_point(rng, 2)
        c1 = rng.normal(size=3) + 1j * rng.normal(size=3)
        c2 = rng.normal(size=3) + 1j * rng.normal(size=3)
        s1 = SuperposedState(c1, pts, basis)
        s2 = SuperposedState(c2, pts, basis)
        s12 = SuperposedState(c1 + 2j * c2, pts, basis)
        lhs = amplitude(s12, probe)
        rhs = amplitude(s1, probe) + 2j * amplitude(s2, probe)
        assert lhs == pytest.approx(rhs, abs=1e-13)


class TestLandscapeValue:
    def test_peak_value_one(self):
        basis = single_mode()
        a = _pt(0.7, -0.3)
        assert v_value(SuperposedState.single(a, basis), a) == pytest.approx(1.0)

    def test_q_offset_two(self):
        basis = single_mode()
        state = SuperposedState.single(_pt(0.0, 0.0), basis)
        assert v_value(state, _pt(2.0, 0.0)) == pytest.approx(np.exp(-2.0), abs=1e-14)

    def test_equal_superposition_half(self):
        basis = single_mode()
        a, b = _pt(0.0, 0.0), _pt(14.0, 0.0)
        state = SuperposedState([2 ** -0.5, 2 ** -0.5], [a, b], basis)
        assert v_value(state, a) == pytest.approx(0.5, abs=1e-12)

    def test_cauchy_schwarz_bound(self):
        rng = np.random.default_rng(6)
        basis = ModeBasis(omegas=[1.0, 2.0], weights=[1.5, 0.5])
        for _ in range(100):
            m = int(rng.integers(1, 5))
            pts = [_random_point(rng, 2) for _ in range(m)]
            coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
            try:
                state = SuperposedState(coeffs, pts, basis)
            except ValueError:
                continue
            v = v_value(state, _random_point(rng, 2))
            assert 0.0 <= v <= 1.0


class TestFreeEvolution:
    def test_zero_dt_identity(self):
        basis = ModeBasis(omegas=[1.0, 0.5], weights=[1.0, 1.0])
        rng = np.random.default_rng(7)
        state = SuperposedState([1.0, 0.5j], [_random_point(rng, 2), _random_point(rng, 2)], basis)
        out = evolve_free(state, 0.0)
        assert np.allclose(out.q, state.q)
        assert np.allclose(out.p, state.p)
        assert np.allclose(out.coeffs, state.coeffs)

    def test_full_rotation_returns(self):
        basis = single_mode(omega=1.0)
        rng = np.random.default_rng(8)
        pts = [_random_point(rng, 1) for _ in range(3)]
        state = SuperposedState([1.0, 0.3, -0.2j], pts, basis)
        out = evolve_free(state, 2 * np.pi)
        g0, g1 = state.gram(), out.gram()
        assert np.max(np.abs(g0 - g1)) < 1e-12
        assert np.max(np.abs(out.q - state.q)) < 1e-12

    def test_quarter_turn_point(self):
        basis = single_mode(omega=1.0)
        state = SuperposedState.single(_pt(1.0, 0.0), basis)
        out = evolve_free(state, np.pi / 2)
        assert out.q[0, 0] == pytest.approx(0.0, abs=1e-15)
        assert out.p[0, 0] == pytest.approx(-1.0, abs=1e-15)

    def test_norm_preserved(self):
        rng = np.random.default_rng(9)
        basis = ModeBasis(omegas=[1.3, 0.4, 2.0], weights=[1.0, 0.6, 1.8])
        for _ in range(20):
            m = int(rng.integers(1, 5))
            pts = [_random_point(rng, 3) for _ in range(m)]
            state = SuperposedState(rng.normal(size=m) + 1j * rng.normal(size=m), pts, basis)
            out = evolve_free(state, rng.uniform(-5, 5))
            assert abs(out.norm_sq - state.norm_sq) < 1e-12

    def test_coevolved_overlaps_invariant(self):
        rng = np.random.default_rng(10)
        basis = ModeBasis(omegas=[1.0, 0.7], weights=[1.2, 0.9])
        for _ in range(20):
            a, b = _random_point(rng, 2), _random_point(rng, 2)
            ca = complex(rng.normal(), rng.normal())
            cb = complex(rng.normal(), rng.normal())
            sa = SuperposedState([ca], [a], basis)
            sb = SuperposedState([cb], [b], basis)
            dt = rng.uniform(-4, 4)
            ea, eb = evolve_free(sa, dt), evolve_free(sb, dt)
            before = np.conj(ca) * cb * overlap(a, b, basis)
            after = np.conj(ea.coeffs[0]) * eb.coeffs[0] * overlap(
                ea.points()[0], eb.points()[0], basis
            )
            assert abs(before - after) < 1e-12


class TestIdentityCheck:
    def test_single_component_converges(self):
        state = SuperposedState.single(_pt(0.3, -0.8), single_mode())
        val = identity_check(state, QuadratureGrid(spacing=0.25, margin=8.0))
        assert val == pytest.approx(1.0, abs=1e-3)

    def test_two_far_components(self):
        basis = single_mode()
        state = SuperposedState(
            [2 ** -0.5, 2 ** -0.5], [_pt(0.0, 0.0), _pt(14.0, 0.0)], basis
        )
        val = identity_check(state, QuadratureGrid(spacing=0.25, margin=8.0))
        assert val == pytest.approx(1.0, abs=1e-2)

    def test_non_unit_weight(self):
        basis = ModeBasis(omegas=[1.0], weights=[2.7])
        state = SuperposedState.single(_pt(1.0, 1.0), basis)
        val = identity_check(state, QuadratureGrid(spacing=0.2, margin=7.0))
        assert val == pytest.approx(1.0, abs=1e-3)

    def test_two_mode_state(self):
        basis = ModeBasis(omegas=[1.0, 0.5], weights=[1.0, 1.5])
        state = SuperposedState.single(
            CoherentPoint(q=[0.5, -0.5], p=[0.0, 1.0]), basis
        )
        val = identity_check(state, QuadratureGrid(spacing=0.5, margin=8.0))
        assert val == pytest.approx(1.0, abs=1e-2)

    def test_clipped_grid_raises(self):
        state = SuperposedState.single(_pt(0.0, 0.0), single_mode())
        with pytest.raises(SupportTruncationError):
            identity_check(state, QuadratureGrid(spacing=0.25, margin=1.0))

    def test_three_modes_rejected(self):
        basis = ModeBasis(omegas=[1.0, 1.0, 1.0], weights=[1.0, 1.0, 1.0])
        state = SuperposedState.single(
            CoherentPoint(q=[0.0, 0.0, 0.0], p=[0.0, 0.0, 0.0]), basis
        )
        with pytest.raises(ValueError):
            identity_check(state)

    def test_trapezoid_refinement_faster_than_algebraic(self):
        state = SuperposedState.single(_pt(0.0, 0.0), single_mode())
        err_coarse = abs(identity_check(state, QuadratureGrid(spacing=1.5, margin=9.0)) - 1.0)
        err_fine = abs(identity_check(state, QuadratureGrid(spacing=0.75, margin=9.0)) - 1.0)
        assert err_coarse > 1e-6
        assert err_fine < err_coarse / 100.0


class TestRayOperations:
    def test_scaled_keeps_normalized_landscape(self):
        basis = single_mode()
        a, b = _pt(0.0, 0.0), _pt(14.0, 0.0)
        state = SuperposedState([0.8, 0.6], [a, b], basis)
        scaled = state.scaled(2.0 - 3.0j)
        assert v_value(scaled, a) == pytest.approx(v_value(state, a), abs=1e-14)

    def test_scale_by_zero_rejected(self):
        state = SuperposedState.single(_pt(0.0, 0.0), single_mode())
        with pytest.raises(ValueError):
            state.scaled(0.0)
