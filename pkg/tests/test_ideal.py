"""Pure effects, ideal measurement enumeration, eigenstates, fuzzing, psi map."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from gptlab.ideal import (
    binary_ideal_measurement,
    enumerate_ideal_measurements,
    eigenstate,
    fuzzify,
    indecomposable_pure_effects,
    perpendicular_ideal_pair,
    psi_map_measurement,
    psi_transform,
)
from gptlab.model import (
    Measurement,
    effect_eval,
    in_state_space,
    make_classical,
    make_polygon,
    validate_measurement,
)
from gptlab.symmetry import canonicalize

SQ2 = math.sqrt(2)


class TestPureEffects:
    def test_triangle_matches_closed_form(self):
        t = make_polygon(3)
        es = indecomposable_pure_effects(t)
        for i, e in enumerate(es):
            a = 2 * math.pi * i / 3
            assert e == pytest.approx((SQ2 * math.cos(a) / 3, SQ2 * math.sin(a) / 3, 1 / 3))

    def test_delta_on_vertices_triangle(self):
        t = make_polygon(3)
        es = indecomposable_pure_effects(t)
        for i, e in enumerate(es):
            for j, v in enumerate(t.vertices):
                expect = 1.0 if i == j else 0.0
                # triangle = simplex: effects are dual to vertices
                assert effect_eval(t, e, v) == pytest.approx(expect, abs=1e-12)

    def test_classical_canonical_dual_to_vertices(self):
        form = canonicalize(make_classical(2))
        t = form.theory
        es = indecomposable_pure_effects(t)
        for i, e in enumerate(es):
            for j, v in enumerate(t.vertices):
                assert effect_eval(t, e, v) == pytest.approx(1.0 if i == j else 0.0, abs=1e-9)

    def test_classical_raw_self_dual_formula(self):
        t = make_classical(2)
        es = indecomposable_pure_effects(t)
        assert es == t.vertices  # unit vertex norm makes effects equal states

    def test_even_polygon_needs_no_self_duality(self):
        t = make_polygon(4)
        es = indecomposable_pure_effects(t)
        r = math.sqrt(SQ2)
        assert es[0] == pytest.approx((r * math.cos(-math.pi / 4) / 2,
                                       r * math.sin(-math.pi / 4) / 2, 0.5))

    def test_unit_sum_only_for_triangle(self):
        # sum of all pure effects is the unit effect exactly when n = 3
        t3 = make_polygon(3)
        total = [0.0, 0.0, 0.0]
        for e in indecomposable_pure_effects(t3):
            total = [a + b for a, b in zip(total, e)]
        assert tuple(total) == pytest.approx(t3.unit_effect, abs=1e-12)
        t5 = make_polygon(5)
        total5 = [0.0, 0.0, 0.0]
        for e in indecomposable_pure_effects(t5):
            total5 = [a + b for a, b in zip(total5, e)]
        assert total5[2] != pytest.approx(1.0)

    def test_bookkeeping_norms_and_unit_mass(self):
        # for a sum of k distinct pure effects in a self-dual theory, the
        # self-pairing and the unit-effect pairing both equal k / |omega_0|^2
        for t in (make_polygon(5), make_polygon(7)):
            norm2 = t.inner.norm2(t.vertices[0])
            for m in enumerate_ideal_measurements(t, 2):
                for e, (tag, idx) in zip(m.effects, m.provenance):
                    k = len(idx)
                    if tag == "sum":
                        assert t.inner.norm2(e) == pytest.approx(k / norm2)
                        assert t.inner.pair(t.unit_effect, e) == pytest.approx(k / norm2)
                    else:
                        assert t.inner.pair(t.unit_effect, e) == pytest.approx(1 - k / norm2)


class TestEnumeration:
    def test_square_psi_two_binary(self):
        t = psi_transform(make_polygon(4))
        ms = enumerate_ideal_measurements(t, 2)
        assert len(ms) == 2
        for m in ms:
            assert m.n_outcomes == 2
            s = tuple(a + b for a, b in zip(*m.effects))
            assert s == pytest.approx(t.unit_effect, abs=1e-12)

    def test_classical_trit_fine_and_coarse(self):
        t = make_classical(2)
        ms = enumerate_ideal_measurements(t, 3)
        sizes = sorted(m.n_outcomes for m in ms)
        assert sizes == [2, 2, 2, 3]  # three coarse-grainings plus fine-grained

    def test_pentagon_binary_family(self):
        t = make_polygon(5)
        ms = enumerate_ideal_measurements(t, 2)
        assert len(ms) == 5
        for m in ms:
            assert sorted(len(idx) for _tag, idx in m.provenance) == [1, 1]

    def test_all_enumerated_are_valid(self):
        for t in (make_polygon(5), make_classical(2), psi_transform(make_polygon(6))):
            for m in enumerate_ideal_measurements(t, 3):
                assert validate_measurement(t, m)

    def test_relabelings_deduplicated(self):
        t = make_polygon(5)
        ms = enumerate_ideal_measurements(t, 2)
        keys = {tuple(sorted(tuple(round(x, 9) for x in e) for e in m.effects)) for m in ms}
        assert len(keys) == len(ms)


class TestEigenstate:
    def test_triangle_pure_effect(self):
        t = make_polygon(3)
        es = indecomposable_pure_effects(t)
        assert eigenstate(t, es[0], ideal=True) == pytest.approx(t.vertices[0])

    def test_unit_effect_gives_mixed_state(self):
        t = make_polygon(5)
        assert eigenstate(t, t.unit_effect) == pytest.approx((0.0, 0.0, 1.0), abs=1e-12)

    def test_square_psi_edge_midpoint(self):
        t = psi_transform(make_polygon(4))
        es = indecomposable_pure_effects(t)
        for i in (0, 1, 2, 3):
            state = eigenstate(t, es[i], ideal=True)
            a = (2 * i - 1) * math.pi / 4
            assert state == pytest.approx((math.cos(a), math.sin(a), 1.0))
            assert in_state_space(t, state)

    def test_raw_even_polygon_fails_membership(self):
        t = make_polygon(4)
        es = indecomposable_pure_effects(t)
        with pytest.raises(ValueError, match="not a state"):
            eigenstate(t, es[0])

    def test_zero_mass_rejected(self):
        t = make_polygon(5)
        with pytest.raises(ValueError, match="zero mass"):
            eigenstate(t, (0.1, 0.0, 0.0))


class TestFuzzify:
    def test_lambda_one_identity(self):
        t = make_polygon(6)
        f = binary_ideal_measurement(t, 0)
        out = fuzzify(t, f, 1.0)
        for e, d in zip(out.effects, f.effects):
            assert e == pytest.approx(d)

    def test_lambda_zero_trivial(self):
        t = make_polygon(6)
        f = binary_ideal_measurement(t, 0)
        out = fuzzify(t, f, 0.0)
        for e in out.effects:
            assert e == pytest.approx((0.0, 0.0, 0.5))

    def test_half_formula(self):
        t = make_polygon(5)
        f = binary_ideal_measurement(t, 2)
        out = fuzzify(t, f, 0.5)
        for e, d in zip(out.effects, f.effects):
            expect = tuple(0.5 * a + 0.25 * u for a, u in zip(d, t.unit_effect))
            assert e == pytest.approx(expect)

    def test_out_of_range_rejected(self):
        t = make_polygon(5)
        f = binary_ideal_measurement(t, 0)
        with pytest.raises(ValueError):
            fuzzify(t, f, 1.5)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
    def test_valid_for_all_lambda(self, lam):
        t = make_polygon(7)
        f = binary_ideal_measurement(t, 3)
        assert validate_measurement(t, fuzzify(t, f, lam))


class TestPsiTransform:
    def test_square_vertices(self):
        t = psi_transform(make_polygon(4))
        for i, v in enumerate(t.vertices):
            a = math.pi * i / 2
            assert v == pytest.approx((SQ2 * math.cos(a), SQ2 * math.sin(a), 1.0), abs=1e-12)

    def test_pure_effects_sum_to_unit(self):
        t = psi_transform(make_polygon(4))
        es = indecomposable_pure_effects(t)
        s = tuple(a + b for a, b in zip(es[0], es[2]))
        assert s == pytest.approx((0.0, 0.0, 1.0), abs=1e-12)

    def test_probability_preservation(self):
        for n in (4, 6, 8):
            raw = make_polygon(n)
            hat = psi_transform(raw)
            meas = Measurement(outcomes=(0, 1), effects=(
                indecomposable_pure_effects(raw)[1],
                tuple(u - e for u, e in zip(raw.unit_effect, indecomposable_pure_effects(raw)[1])),
            ))
            meas_hat = psi_map_measurement(meas, n)
            for v_raw, v_hat in zip(raw.vertices, hat.vertices):
                for e_raw, e_hat in zip(meas.effects, meas_hat.effects):
                    assert effect_eval(raw, e_raw, v_raw) == pytest.approx(
                        effect_eval(hat, e_hat, v_hat), abs=1e-12
                    )

    def test_round_trip_bitwise_float(self):
        raw = make_polygon(6)
        back = psi_transform(psi_transform(raw), inverse=True)
        for v, w in zip(raw.vertices, back.vertices):
            assert v == pytest.approx(w, abs=1e-12)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            psi_transform(make_polygon(5))


class TestPerpendicularPair:
    def test_octagon_angles(self):
        t = psi_transform(make_polygon(8))
        f, g = perpendicular_ideal_pair(t)
        af = math.atan2(f.effects[0][1], f.effects[0][0])
        ag = math.atan2(g.effects[0][1], g.effects[0][0])
        assert af == pytest.approx(math.pi / 8)
        assert ag == pytest.approx(5 * math.pi / 8)

    def test_square_pair_is_both_binaries(self):
        t = psi_transform(make_polygon(4))
        f, g = perpendicular_ideal_pair(t)
        ms = enumerate_ideal_measurements(t, 2)
        keys = {tuple(sorted(tuple(round(x, 9) for x in e) for e in m.effects)) for m in ms}
        for m in (f, g):
            k = tuple(sorted(tuple(round(x, 9) for x in e) for e in m.effects))
            assert k in keys

    def test_bloch_vectors_orthogonal(self):
        for n in (4, 8, 12, 16):
            t = psi_transform(make_polygon(n))
            f, g = perpendicular_ideal_pair(t)
            dot2 = f.effects[0][0] * g.effects[0][0] + f.effects[0][1] * g.effects[0][1]
            assert dot2 == pytest.approx(0.0, abs=1e-12)

    def test_non_multiple_of_four_rejected(self):
        with pytest.raises(ValueError):
            perpendicular_ideal_pair(psi_transform(make_polygon(6)))
