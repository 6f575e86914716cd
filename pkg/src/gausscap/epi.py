"""Monte Carlo checks of entropy power inequalities on Gaussian states.

Each check evaluates one inequality instance exactly and records the
slack lhs - rhs; a trial counts as a violation when the slack drops
below -tolerance (default 1e-9).  Near the degenerate amplifier gain
k -> 1 the slack itself shrinks to the scale of k - 1, so checks pinned
there should use a correspondingly wider band.  Campaign results are
reproducible: trial i draws all of its randomness from a generator
seeded with (seed, i), so serial and parallel runs aggregate identically.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channels import ChannelKind, ChannelSpec, apply_channel, complementary
from .core import (
    PHASE_FLIP,
    CovarianceMatrix,
    ModePartition,
    conditional_entropy,
    direct_sum,
    embed_two_mode,
    entropy,
    mixing_symplectic,
    partial_trace,
    random_gaussian_state,
    thermal_entropy,
    thermal_state,
    two_mode_squeezing_symplectic,
)

DEFAULT_TOLERANCE = 1e-9


class Inequality(Enum):
    QEPI_BS = "qepi-bs"
    QEPI_AMP = "qepi-amp"
    CQEPI_BS = "cqepi-bs"
    CQEPI_AMP = "cqepi-amp"
    MOE_CHAIN_BS = "moe-chain-bs"
    WC_CHAIN_BS = "wc-chain-bs"


@dataclass(frozen=True)
class EpiTrial:
    """One evaluated inequality instance."""

    inequality: Inequality
    parameter: float
    inputs: tuple[CovarianceMatrix, ...]
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    def is_violation(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.slack < -tolerance


@dataclass(frozen=True)
class EpiReport:
    """Aggregate of a Monte Carlo campaign for one inequality family."""

    inequality: str
    trials: int
    violations: int
    min_slack: float
    mean_slack: float
    seed: int
    tolerance: float


def check_qepi_bs(state1: CovarianceMatrix, state2: CovarianceMatrix, transmissivity: float) -> EpiTrial:
    """Beam-splitter entropy power inequality on two single-mode inputs.

    lhs = S(t G1 + (1-t) G2), rhs = t S(G1) + (1-t) S(G2).
    """
    _require_single_mode(state1, state2)
    t = transmissivity
    if not 0.0 <= t <= 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    mixed = CovarianceMatrix(t * state1.data + (1.0 - t) * state2.data)
    lhs = entropy(mixed)
    rhs = t * entropy(state1) + (1.0 - t) * entropy(state2)
    return EpiTrial(Inequality.QEPI_BS, t, (state1, state2), lhs, rhs)


def check_qepi_amp(state1: CovarianceMatrix, state2: CovarianceMatrix, gain: float) -> EpiTrial:
    """Amplifier entropy power inequality on two single-mode inputs.

    lhs = S(k G1 + (k-1) Z G2 Z),
    rhs = k/(2k-1) S(G1) + (k-1)/(2k-1) S(G2) + ln(2k-1).
    """
    _require_single_mode(state1, state2)
    k = gain
    if k < 1.0:
        raise ValueError("gain must be >= 1")
    mixed = CovarianceMatrix(k * state1.data + (k - 1.0) * (PHASE_FLIP @ state2.data @ PHASE_FLIP))
    lhs = entropy(mixed)
    rhs = (
        k / (2.0 * k - 1.0) * entropy(state1)
        + (k - 1.0) / (2.0 * k - 1.0) * entropy(state2)
        + math.log(2.0 * k - 1.0)
    )
    return EpiTrial(Inequality.QEPI_AMP, k, (state1, state2), lhs, rhs)


def _conditional_mix(pair1: CovarianceMatrix, pair2: CovarianceMatrix, two_mode: np.ndarray) -> tuple[float, float]:
    """Conditional lhs for (X1,Z1) x (X2,Z2) inputs mixed on (X1, X2).

    Builds the four-mode product (X1, Z1, X2, Z2), applies the two-mode
    symplectic to (X1, X2), discards the second output, and returns
    (S(out, Z1, Z2), S(Z1, Z2)).
    """
    joint = direct_sum(pair1, pair2)  # modes (X1, Z1, X2, Z2)
    s = embed_two_mode(two_mode, 4, 0, 2)
    out = s @ joint.data @ s.T
    transformed = CovarianceMatrix(0.5 * (out + out.T))
    kept = partial_trace(transformed, ModePartition.keeping((0, 1, 3), 4))
    conditioner = partial_trace(transformed, ModePartition.keeping((1, 3), 4))
    return entropy(kept), entropy(conditioner)


def _conditional_rhs_terms(pair1: CovarianceMatrix, pair2: CovarianceMatrix) -> tuple[float, float]:
    cond = ModePartition(kept=(0,), traced=(1,))
    return conditional_entropy(pair1, cond), conditional_entropy(pair2, cond)


def check_cqepi_bs(pair1: CovarianceMatrix, pair2: CovarianceMatrix, transmissivity: float) -> EpiTrial:
    """Conditional beam-splitter EPI on two-mode inputs (X_i, Z_i).

    lhs = S(out | Z1 Z2), rhs = t S(X1|Z1) + (1-t) S(X2|Z2).
    """
    _require_two_mode(pair1, pair2)
    t = transmissivity
    s_joint, s_cond = _conditional_mix(pair1, pair2, mixing_symplectic(t))
    lhs = s_joint - s_cond
    c1, c2 = _conditional_rhs_terms(pair1, pair2)
    rhs = t * c1 + (1.0 - t) * c2
    return EpiTrial(Inequality.CQEPI_BS, t, (pair1, pair2), lhs, rhs)


def check_cqepi_amp(pair1: CovarianceMatrix, pair2: CovarianceMatrix, gain: float) -> EpiTrial:
    """Conditional amplifier EPI on two-mode inputs (X_i, Z_i).

    lhs = S(out | Z1 Z2),
    rhs = k/(2k-1) S(X1|Z1) + (k-1)/(2k-1) S(X2|Z2) + ln(2k-1).
    """
    _require_two_mode(pair1, pair2)
    k = gain
    if k < 1.0:
        raise ValueError("gain must be >= 1")
    a = np.sqrt(k) * np.eye(2)
    b = np.sqrt(k - 1.0) * PHASE_FLIP
    amp = np.block([[a, b], [b, a]])
    s_joint, s_cond = _conditional_mix(pair1, pair2, amp)
    lhs = s_joint - s_cond
    c1, c2 = _conditional_rhs_terms(pair1, pair2)
    rhs = k / (2.0 * k - 1.0) * c1 + (k - 1.0) / (2.0 * k - 1.0) * c2 + math.log(2.0 * k - 1.0)
    return EpiTrial(Inequality.CQEPI_AMP, k, (pair1, pair2), lhs, rhs)


def check_moe_chain(state: CovarianceMatrix, spec: ChannelSpec) -> EpiTrial:
    """Single-use output-entropy floor S(channel(G)) >= (1-t) g(Ne)."""
    ne = _thermal_chain_env(spec)
    lhs = entropy(apply_channel(state, spec))
    rhs = (1.0 - spec.parameter) * thermal_entropy(ne)
    return EpiTrial(Inequality.MOE_CHAIN_BS, spec.parameter, (state,), lhs, rhs)


def check_wc_chain(state: CovarianceMatrix, spec: ChannelSpec) -> EpiTrial:
    """Complementary-side floor S(complement(G)) >= (1-t) g(Ne)."""
    ne = _thermal_chain_env(spec)
    lhs = entropy(complementary(state, spec))
    rhs = (1.0 - spec.parameter) * thermal_entropy(ne)
    return EpiTrial(Inequality.WC_CHAIN_BS, spec.parameter, (state,), lhs, rhs)


def _thermal_chain_env(spec: ChannelSpec) -> float:
    if spec.kind is not ChannelKind.BEAM_SPLITTER:
        raise ValueError("chain inequalities are checked for the beam splitter")
    gamma = spec.environment.data
    if abs(gamma[0, 1]) > 1e-12 or abs(gamma[0, 0] - gamma[1, 1]) > 1e-12:
        raise ValueError("chain inequalities assume a thermal environment")
    return (float(gamma[0, 0]) - 1.0) / 2.0


def _require_single_mode(*states: CovarianceMatrix) -> None:
    if any(s.n_modes != 1 for s in states):
        raise ValueError("expected single-mode input states")


def _require_two_mode(*states: CovarianceMatrix) -> None:
    if any(s.n_modes != 2 for s in states):
        raise ValueError("expected two-mode (X, Z) input states")


def fock_entropy_oracle(mean_photon: float, cutoff: int) -> float:
    """Entropy of the truncated geometric photon-number distribution of a
    thermal state, renormalised; converges to thermal_entropy as the cutoff grows."""
    if mean_photon < 0:
        raise ValueError("mean photon number must be nonnegative")
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    if mean_photon == 0:
        return 0.0
    k = np.arange(cutoff)
    log_p = k * math.log(mean_photon) - (k + 1) * math.log(mean_photon + 1.0)
    p = np.exp(log_p)
    p = p / p.sum()
    p = p[p > 0.0]  # underflowed tail terms contribute nothing
    return float(-np.sum(p * np.log(p)))


def _sample_two_mode_squeezed_thermal(rng: np.random.Generator, max_photon: float, max_squeeze: float) -> CovarianceMatrix:
    """Two-mode squeezed thermal state with random occupation and squeezing."""
    n = rng.uniform(0.0, max_photon)
    r = rng.uniform(0.0, max_squeeze)
    s = two_mode_squeezing_symplectic(r)
    base = direct_sum(thermal_state(n), thermal_state(n))
    out = s @ base.data @ s.T
    return CovarianceMatrix(0.5 * (out + out.T))


_DEFAULT_RANGES = {
    Inequality.QEPI_BS: (0.0, 1.0),
    Inequality.CQEPI_BS: (0.0, 1.0),
    Inequality.MOE_CHAIN_BS: (0.0, 1.0),
    Inequality.WC_CHAIN_BS: (0.0, 1.0),
    Inequality.QEPI_AMP: (1.0, 10.0),
    Inequality.CQEPI_AMP: (1.0, 10.0),
}


def _run_trial(
    inequality: Inequality,
    index: int,
    seed: int,
    max_photon: float,
    max_squeeze: float,
    parameter_range: tuple[float, float],
    env_photon: float | None,
) -> EpiTrial:
    rng = np.random.default_rng((seed, index))
    lo, hi = parameter_range
    parameter = lo if lo == hi else rng.uniform(lo, hi)
    if inequality in (Inequality.QEPI_BS, Inequality.QEPI_AMP):
        s1 = random_gaussian_state(1, max_photon, max_squeeze, rng)
        s2 = random_gaussian_state(1, max_photon, max_squeeze, rng)
        if inequality is Inequality.QEPI_BS:
            return check_qepi_bs(s1, s2, parameter)
        return check_qepi_amp(s1, s2, parameter)
    if inequality in (Inequality.CQEPI_BS, Inequality.CQEPI_AMP):
        p1 = _sample_two_mode_squeezed_thermal(rng, max_photon, max_squeeze)
        p2 = _sample_two_mode_squeezed_thermal(rng, max_photon, max_squeeze)
        if inequality is Inequality.CQEPI_BS:
            return check_cqepi_bs(p1, p2, parameter)
        return check_cqepi_amp(p1, p2, parameter)
    ne = rng.uniform(0.0, max_photon) if env_photon is None else env_photon
    spec = ChannelSpec.beam_splitter(parameter, thermal_state(ne))
    state = random_gaussian_state(1, max_photon, max_squeeze, rng)
    if inequality is Inequality.MOE_CHAIN_BS:
        return check_moe_chain(state, spec)
    return check_wc_chain(state, spec)


def monte_carlo_verify(
    inequality: Inequality | str,
    trials: int,
    *,
    max_photon: float = 5.0,
    max_squeeze: float = 1.5,
    parameter_range: tuple[float, float] | None = None,
    env_photon: float | None = None,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    workers: int = 1,
) -> EpiReport:
    """Run ``trials`` random instances of one inequality family.

    Deterministic for a fixed seed; with ``workers`` > 1 the trials run on a
    thread pool and the report is identical to the single-threaded one
    because each trial owns a sub-seeded generator and the mean is an
    exactly rounded sum.
    """
    inequality = Inequality(inequality) if not isinstance(inequality, Inequality) else inequality
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    prange = parameter_range if parameter_range is not None else _DEFAULT_RANGES[inequality]

    def run(index: int) -> EpiTrial:
        try:
            return _run_trial(inequality, index, seed, max_photon, max_squeeze, prange, env_photon)
        except Exception as exc:
            raise RuntimeError(
                f"trial {index} of {inequality.value} failed (seed={seed}): {exc}"
            ) from exc

    if workers == 1:
        results = [run(i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(trials)))

    slacks = [trial.slack for trial in results]
    violations = sum(1 for s in slacks if s < -tolerance)
    return EpiReport(
        inequality=inequality.value,
        trials=trials,
        violations=violations,
        min_slack=min(slacks),
        mean_slack=math.fsum(slacks) / trials,
        seed=seed,
        tolerance=tolerance,
    )
