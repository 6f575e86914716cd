import math

import numpy as np
import pytest

from gausscap import (
    ChannelKind,
    ChannelSpec,
    ModePartition,
    amplifier_symplectic,
    apply_channel,
    beam_splitter_symplectic,
    channel_outputs,
    channel_symplectic,
    complementary,
    direct_sum,
    entropy,
    mean_photon_number,
    output_entropies,
    partial_trace,
    purify,
    random_gaussian_state,
    squeezed_thermal_state,
    thermal_state,
    vacuum_state,
    weak_complementary,
)
from gausscap.core import PHASE_FLIP, embed_two_mode, symplectic_residual
from helpers import fc_entropy_thermal_amp, fc_entropy_thermal_bs, g_direct


def _random_spec(seed: int) -> ChannelSpec:
    rng = np.random.default_rng(seed)
    env = random_gaussian_state(1, 2.0, 0.8, rng)
    if rng.uniform() < 0.5:
        return ChannelSpec.beam_splitter(rng.uniform(0.0, 1.0), env)
    return ChannelSpec.amplifier(rng.uniform(1.0, 10.0), env)


class TestChannelSpec:
    def test_transmissivity_range(self):
        env = thermal_state(1)
        with pytest.raises(ValueError):
            ChannelSpec.beam_splitter(1.5, env)
        with pytest.raises(ValueError):
            ChannelSpec.beam_splitter(-0.1, env)

    def test_gain_range(self):
        env = thermal_state(1)
        with pytest.raises(ValueError):
            ChannelSpec.amplifier(0.99, env)
        with pytest.raises(ValueError):
            ChannelSpec.amplifier(2e6, env)

    def test_environment_must_be_single_mode(self):
        with pytest.raises(ValueError):
            ChannelSpec.beam_splitter(0.5, vacuum_state(2))


class TestSymplectics:
    def test_transparent_splitter_is_identity(self):
        np.testing.assert_allclose(beam_splitter_symplectic(1.0).data, np.eye(4))

    def test_fully_reflecting_splitter_swaps_env_onto_output(self):
        s = beam_splitter_symplectic(0.0).data
        joint = direct_sum(thermal_state(2), thermal_state(0.5)).data
        out = s @ joint @ s.T
        np.testing.assert_allclose(out[:2, :2], thermal_state(0.5).data, atol=1e-14)
        np.testing.assert_allclose(out[2:, 2:], thermal_state(2).data, atol=1e-14)

    def test_unit_gain_amplifier_is_identity(self):
        np.testing.assert_allclose(amplifier_symplectic(1.0).data, np.eye(4))

    @pytest.mark.parametrize("transmissivity", np.linspace(0, 1, 11))
    def test_beam_splitter_symplecticity(self, transmissivity):
        assert symplectic_residual(beam_splitter_symplectic(transmissivity).data) < 1e-12

    @pytest.mark.parametrize("gain", np.arange(1.0, 10.5, 0.5))
    def test_amplifier_symplecticity(self, gain):
        assert symplectic_residual(amplifier_symplectic(gain).data) < 1e-12

    def test_figure_parameters(self):
        assert symplectic_residual(beam_splitter_symplectic(0.85).data) < 1e-12
        assert symplectic_residual(amplifier_symplectic(5.0).data) < 1e-12

    def test_amplifier_block_structure(self):
        s = amplifier_symplectic(2.0).data
        np.testing.assert_allclose(s[:2, :2], math.sqrt(2) * np.eye(2))
        np.testing.assert_allclose(s[:2, 2:], PHASE_FLIP)
        np.testing.assert_allclose(s[2:, :2], PHASE_FLIP)


class TestApplyChannel:
    def test_vacuum_fixed_point(self):
        for t in (0.0, 0.3, 1.0):
            spec = ChannelSpec.beam_splitter(t, vacuum_state())
            np.testing.assert_allclose(apply_channel(vacuum_state(), spec).data, np.eye(2), atol=1e-14)

    def test_beam_splitter_mixes_photon_numbers(self):
        spec = ChannelSpec.beam_splitter(0.85, thermal_state(1))
        out = apply_channel(thermal_state(2), spec)
        assert mean_photon_number(out) == pytest.approx(0.85 * 2 + 0.15 * 1, abs=1e-12)

    def test_amplifier_adds_gain_noise(self):
        spec = ChannelSpec.amplifier(5.0, thermal_state(1))
        out = apply_channel(thermal_state(1), spec)
        assert mean_photon_number(out) == pytest.approx(5 * 1 + 4 * (1 + 1), abs=1e-12)

    def test_two_photon_vacuum_amplifier(self):
        spec = ChannelSpec.amplifier(2.0, vacuum_state())
        out = apply_channel(vacuum_state(), spec)
        np.testing.assert_allclose(out.data, 3 * np.eye(2), atol=1e-13)
        assert mean_photon_number(out) == pytest.approx(1.0, abs=1e-13)

    def test_unit_gain_is_identity_channel(self):
        spec = ChannelSpec.amplifier(1.0, thermal_state(3))
        state = squeezed_thermal_state(0.5, 0.7)
        np.testing.assert_allclose(apply_channel(state, spec).data, state.data, atol=1e-13)

    def test_rejects_multimode_input(self):
        spec = ChannelSpec.beam_splitter(0.5, thermal_state(1))
        with pytest.raises(ValueError):
            apply_channel(vacuum_state(2), spec)

    @pytest.mark.parametrize("seed", range(50))
    def test_closed_form_agreement(self, seed):
        rng = np.random.default_rng(seed)
        state = random_gaussian_state(1, 3.0, 1.0, rng)
        spec = _random_spec(seed + 1000)
        gamma_a, gamma_e = state.data, spec.environment.data
        if spec.kind is ChannelKind.BEAM_SPLITTER:
            t = spec.parameter
            closed_out = t * gamma_a + (1 - t) * gamma_e
            closed_weak = (1 - t) * gamma_a + t * gamma_e
        else:
            k = spec.parameter
            closed_out = k * gamma_a + (k - 1) * PHASE_FLIP @ gamma_e @ PHASE_FLIP
            closed_weak = (k - 1) * PHASE_FLIP @ gamma_a @ PHASE_FLIP + k * gamma_e
        scale = max(1.0, np.max(np.abs(closed_out)), np.max(np.abs(closed_weak)))
        assert np.max(np.abs(apply_channel(state, spec).data - closed_out)) < 1e-12 * scale
        assert np.max(np.abs(weak_complementary(state, spec).data - closed_weak)) < 1e-12 * scale


class TestWeakComplementary:
    def test_transparent_splitter_leaks_nothing(self):
        env = squeezed_thermal_state(1, 0.5)
        spec = ChannelSpec.beam_splitter(1.0, env)
        out = weak_complementary(thermal_state(2), spec)
        np.testing.assert_allclose(out.data, env.data, atol=1e-13)

    def test_photon_mixing(self):
        spec = ChannelSpec.beam_splitter(0.85, thermal_state(1))
        out = weak_complementary(thermal_state(2), spec)
        assert mean_photon_number(out) == pytest.approx(0.15 * 2 + 0.85 * 1, abs=1e-12)

    @pytest.mark.parametrize("env", [vacuum_state(), squeezed_thermal_state(0, 0.9)])
    def test_pure_environment_weak_equals_complementary(self, env):
        spec = ChannelSpec.beam_splitter(0.6, env)
        state = thermal_state(1.5)
        weak = weak_complementary(state, spec)
        comp = complementary(state, spec)
        # reference mode stays in vacuum and decouples
        np.testing.assert_allclose(comp.data[:2, :2], weak.data, atol=1e-12)
        np.testing.assert_allclose(comp.data[:2, 2:], np.zeros((2, 2)), atol=1e-12)
        np.testing.assert_allclose(comp.data[2:, 2:], np.eye(2), atol=1e-12)
        assert entropy(comp) == pytest.approx(entropy(weak), abs=1e-10)


class TestComplementary:
    @pytest.mark.parametrize("seed", range(40))
    def test_partial_trace_over_reference_gives_weak_complement(self, seed):
        spec = _random_spec(seed)
        state = random_gaussian_state(1, 3.0, 1.0, seed + 2000)
        comp = complementary(state, spec)
        reduced = partial_trace(comp, ModePartition.keeping([0], 2))
        np.testing.assert_allclose(reduced.data, weak_complementary(state, spec).data, atol=1e-10)

    def test_contract_example(self):
        spec = ChannelSpec.beam_splitter(0.85, thermal_state(1))
        state = thermal_state(2)
        comp = complementary(state, spec)
        reduced = partial_trace(comp, ModePartition.keeping([0], 2))
        np.testing.assert_allclose(reduced.data, weak_complementary(state, spec).data, atol=1e-10)

    def test_pure_input_pure_env_balance(self):
        spec = ChannelSpec.beam_splitter(0.5, vacuum_state())
        s_b, s_f, s_fc = output_entropies(vacuum_state(), spec)
        assert abs(s_b) < 1e-10 and abs(s_f) < 1e-10 and abs(s_fc) < 1e-10

    @pytest.mark.parametrize("seed", range(30))
    def test_pure_pure_entropy_balance(self, seed):
        pure_in = random_gaussian_state(1, 0.0, 1.2, seed)
        pure_env = random_gaussian_state(1, 0.0, 1.2, seed + 500)
        rng = np.random.default_rng(seed)
        if seed % 2:
            spec = ChannelSpec.beam_splitter(rng.uniform(0, 1), pure_env)
        else:
            spec = ChannelSpec.amplifier(rng.uniform(1, 8), pure_env)
        s_b, s_f, _ = output_entropies(pure_in, spec)
        assert abs(s_b - s_f) < 1e-8


class TestOutputEntropies:
    def test_all_vacuum(self):
        spec = ChannelSpec.beam_splitter(0.3, vacuum_state())
        assert output_entropies(vacuum_state(), spec) == (0.0, 0.0, 0.0)

    def test_channel_entropy_matches_thermal_formula(self):
        spec = ChannelSpec.beam_splitter(0.85, thermal_state(1))
        s_b, _, _ = output_entropies(thermal_state(2), spec)
        assert s_b == pytest.approx(g_direct(1.85), rel=1e-12)

    def test_complement_entropy_matches_block_formula_bs(self):
        spec = ChannelSpec.beam_splitter(0.85, thermal_state(1))
        _, _, s_fc = output_entropies(thermal_state(2), spec)
        assert s_fc == pytest.approx(fc_entropy_thermal_bs(0.85, 2, 1), rel=1e-10)

    def test_complement_entropy_matches_block_formula_amp(self):
        spec = ChannelSpec.amplifier(5.0, thermal_state(1))
        _, _, s_fc = output_entropies(thermal_state(2), spec)
        assert s_fc == pytest.approx(fc_entropy_thermal_amp(5.0, 2, 1), rel=1e-10)

    @pytest.mark.parametrize("seed", range(0, 100, 1))
    def test_purified_input_balance(self, seed):
        """S(F, C) equals S(B, A') when the input purification A' rides along."""
        state = random_gaussian_state(1, 3.0, 1.0, seed)
        spec = _random_spec(seed + 4000)
        global_in = direct_sum(purify(state), purify(spec.environment))  # (A, A', E, C)
        s = embed_two_mode(channel_symplectic(spec).data, 4, 0, 2)
        out = s @ global_in.data @ s.T
        transformed = type(global_in)(0.5 * (out + out.T))
        s_fc = entropy(partial_trace(transformed, ModePartition.keeping([2, 3], 4)))
        s_ba = entropy(partial_trace(transformed, ModePartition.keeping([0, 1], 4)))
        assert abs(s_fc - s_ba) < 1e-8
        # and the (F, C) block agrees with the complementary construction
        comp = complementary(state, spec)
        np.testing.assert_allclose(
            partial_trace(transformed, ModePartition.keeping([2, 3], 4)).data,
            comp.data,
            atol=1e-10,
        )

    def test_channel_outputs_bundle(self):
        spec = ChannelSpec.beam_splitter(0.4, thermal_state(0.5))
        outs = channel_outputs(thermal_state(1), spec)
        assert outs.complement is not None and outs.complement.n_modes == 2
        lean = channel_outputs(thermal_state(1), spec, include_complement=False)
        assert lean.complement is None
