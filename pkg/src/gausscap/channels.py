"""Beam-splitter and amplifier channels in phase space.

A channel mixes a single-mode input with a single-mode Gaussian
environment through a two-mode symplectic; tracing one output mode gives
the channel, tracing the other gives the weak-complementary map.  The
complementary map first purifies a mixed environment with a reference
mode, so its output covers two modes (environment output F, reference C).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import block_diag

from .core import (
    PHASE_FLIP,
    CovarianceMatrix,
    SymplecticMatrix,
    direct_sum,
    entropy,
    mixing_symplectic,
    purify,
)

MAX_GAIN = 1e6
_CROSSCHECK_ATOL = 1e-12


class ChannelKind(Enum):
    BEAM_SPLITTER = "beam_splitter"
    AMPLIFIER = "amplifier"


@dataclass(frozen=True)
class ChannelSpec:
    """Channel family, mixing parameter, and single-mode environment state.

    Beam splitters take a transmissivity in [0, 1]; amplifiers a gain in
    [1, MAX_GAIN], where gain 1 degenerates to the identity channel.
    """

    kind: ChannelKind
    parameter: float
    environment: CovarianceMatrix

    def __post_init__(self) -> None:
        if self.environment.n_modes != 1:
            raise ValueError("environment must be a single-mode state")
        if self.kind is ChannelKind.BEAM_SPLITTER:
            if not 0.0 <= self.parameter <= 1.0:
                raise ValueError("beam-splitter transmissivity must lie in [0, 1]")
        elif self.kind is ChannelKind.AMPLIFIER:
            if not 1.0 <= self.parameter <= MAX_GAIN:
                raise ValueError(f"amplifier gain must lie in [1, {MAX_GAIN:g}]")
        else:
            raise ValueError(f"unknown channel kind: {self.kind!r}")

    @classmethod
    def beam_splitter(cls, transmissivity: float, environment: CovarianceMatrix) -> "ChannelSpec":
        return cls(ChannelKind.BEAM_SPLITTER, float(transmissivity), environment)

    @classmethod
    def amplifier(cls, gain: float, environment: CovarianceMatrix) -> "ChannelSpec":
        return cls(ChannelKind.AMPLIFIER, float(gain), environment)


@dataclass(frozen=True)
class ChannelOutput:
    """Covariances of the three channel outputs for one input state."""

    output: CovarianceMatrix
    weak_complement: CovarianceMatrix
    complement: CovarianceMatrix | None = None


def beam_splitter_symplectic(transmissivity: float) -> SymplecticMatrix:
    """Two-mode beam-splitter symplectic at the given transmissivity."""
    return SymplecticMatrix(mixing_symplectic(transmissivity))


def amplifier_symplectic(gain: float) -> SymplecticMatrix:
    """Two-mode amplifier symplectic [[sqrt(k) I, sqrt(k-1) Z], [sqrt(k-1) Z, sqrt(k) I]]."""
    if gain < 1.0:
        raise ValueError("amplifier gain must be >= 1")
    a = np.sqrt(gain) * np.eye(2)
    b = np.sqrt(gain - 1.0) * PHASE_FLIP
    return SymplecticMatrix(np.block([[a, b], [b, a]]))


def channel_symplectic(spec: ChannelSpec) -> SymplecticMatrix:
    """Two-mode symplectic realising the channel's input-environment coupling."""
    if spec.kind is ChannelKind.BEAM_SPLITTER:
        return beam_splitter_symplectic(spec.parameter)
    return amplifier_symplectic(spec.parameter)


def _closed_form_output(spec: ChannelSpec, gamma_a: np.ndarray) -> np.ndarray:
    gamma_e = spec.environment.data
    if spec.kind is ChannelKind.BEAM_SPLITTER:
        t = spec.parameter
        return t * gamma_a + (1.0 - t) * gamma_e
    k = spec.parameter
    return k * gamma_a + (k - 1.0) * (PHASE_FLIP @ gamma_e @ PHASE_FLIP)


def _closed_form_weak(spec: ChannelSpec, gamma_a: np.ndarray) -> np.ndarray:
    gamma_e = spec.environment.data
    if spec.kind is ChannelKind.BEAM_SPLITTER:
        t = spec.parameter
        return (1.0 - t) * gamma_a + t * gamma_e
    k = spec.parameter
    return (k - 1.0) * (PHASE_FLIP @ gamma_a @ PHASE_FLIP) + k * gamma_e


def _conjugated_pair(state: CovarianceMatrix, spec: ChannelSpec) -> np.ndarray:
    if state.n_modes != 1:
        raise ValueError("channel input must be a single-mode state")
    s = channel_symplectic(spec).data
    joint = direct_sum(state, spec.environment).data
    out = s @ joint @ s.T
    return 0.5 * (out + out.T)


def _checked(block: np.ndarray, reference: np.ndarray) -> CovarianceMatrix:
    scale = max(1.0, float(np.max(np.abs(reference))))
    assert float(np.max(np.abs(block - reference))) <= _CROSSCHECK_ATOL * scale, (
        "conjugate-and-trace output disagrees with the closed-form map"
    )
    return CovarianceMatrix(block)


def apply_channel(state: CovarianceMatrix, spec: ChannelSpec) -> CovarianceMatrix:
    """Channel output covariance (transmitted mode B)."""
    out = _conjugated_pair(state, spec)[:2, :2]
    return _checked(out, _closed_form_output(spec, state.data))


def weak_complementary(state: CovarianceMatrix, spec: ChannelSpec) -> CovarianceMatrix:
    """Environment-side output covariance (mode F) without purifying the environment."""
    out = _conjugated_pair(state, spec)[2:, 2:]
    return _checked(out, _closed_form_weak(spec, state.data))


def complementary(state: CovarianceMatrix, spec: ChannelSpec) -> CovarianceMatrix:
    """Two-mode complementary output on (F, C), where C purifies the environment.

    Tracing out C recovers the weak-complementary output; the two maps
    coincide whenever the environment is pure.
    """
    if state.n_modes != 1:
        raise ValueError("channel input must be a single-mode state")
    env_pure = purify(spec.environment)  # modes (E, C)
    joint = direct_sum(state, env_pure)  # modes (A, E, C)
    s = block_diag(channel_symplectic(spec).data, np.eye(2))
    out = s @ joint.data @ s.T
    out = 0.5 * (out + out.T)
    return CovarianceMatrix(out[2:, 2:])  # keep (F, C)


def channel_outputs(state: CovarianceMatrix, spec: ChannelSpec, include_complement: bool = True) -> ChannelOutput:
    """Bundle the transmitted, weak-complementary and complementary outputs."""
    return ChannelOutput(
        output=apply_channel(state, spec),
        weak_complement=weak_complementary(state, spec),
        complement=complementary(state, spec) if include_complement else None,
    )


def output_entropies(state: CovarianceMatrix, spec: ChannelSpec) -> tuple[float, float, float]:
    """Entropies (S_B, S_F, S_FC) of the three channel outputs, in nats."""
    outs = channel_outputs(state, spec)
    return entropy(outs.output), entropy(outs.weak_complement), entropy(outs.complement)
