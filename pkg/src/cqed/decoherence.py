"""Decay, dephasing and two-qubit correlation experiments.

Monte-Carlo experiments here are stochastic but exactly reproducible: every
trajectory draws from its own pseudo-random stream derived from a 64-bit
master seed and the trajectory index through `RngSpec` (splitmix64 mixing,
PCG64 streams).  Fixed (seed, trials) therefore gives bit-identical output
regardless of how trajectories might be scheduled, and trajectories are
always reduced in index order.

Mixed states never appear as density matrices in this module: ensembles are
weighted lists of pure states, which is all the experiments below need.

Conventions: hbar = 1; a qubit with gap ``delta`` accumulates relative phase
delta * t between |0> and |1> during free evolution; Ramsey fringes are
read out as p_plus, the probability of finding |+>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .fitting import dominant_frequency, fit_exponential_envelope
from .qubit import (
    KET_0,
    KET_1,
    KET_MINUS,
    KET_MINUS_I,
    KET_PLUS,
    KET_PLUS_I,
    ramsey_trace,
)
from .timeseries import TimeSeries

__all__ = [
    "RngSpec",
    "NoiseModel",
    "TwoQubitKet",
    "JointProbabilityTable",
    "OUTCOME_LABELS",
    "t1_curves",
    "ramsey_ensemble",
    "two_offset_fringe",
    "general_fringe",
    "decay_limited_ramsey",
    "bell_state",
    "joint_table",
    "marginal_table",
    "ensemble_marginal",
]

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN64 = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    """One splitmix64 output step; the documented 64-bit mixing function."""
    x = (x + _GOLDEN64) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class RngSpec:
    """Master seed plus the per-trajectory stream derivation rule.

    Trajectory ``i`` uses ``PCG64(splitmix64(seed XOR (i * GOLDEN64)))``
    where GOLDEN64 = 0x9E3779B97F4A7C15.  Identical (seed, i) always yields
    the identical stream.
    """

    seed: int

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)

    def stream(self, trajectory: int) -> np.random.Generator:
        key = _splitmix64((self.seed ^ (trajectory * _GOLDEN64)) & _MASK64)
        return np.random.Generator(np.random.PCG64(key))


@dataclass(frozen=True)
class NoiseModel:
    """White Gaussian frequency noise on a qubit gap.

    ``sigma`` is scaled so the accumulated random phase over [0, t] is
    Gaussian with variance sigma^2 * t (rad^2), i.e. each step of length dt
    adds a kick sigma * sqrt(dt) * xi with xi standard normal.  This is a
    modelling choice (the gap noise is not otherwise specified); it is the
    one distribution with the closed-form fringe envelope
    exp(-sigma^2 t / 2), hence a dephasing time T2 = 2 / sigma^2.
    """

    sigma: float
    kind: str = "white-gaussian"

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.kind != "white-gaussian":
            raise ValueError(f"unsupported noise kind {self.kind!r}")


def t1_curves(
    t1: float,
    times: np.ndarray,
    mc: dict | None = None,
) -> dict[str, TimeSeries | None]:
    """Excited-state decay p_e(t) = exp(-t / t1), optionally Monte-Carlo.

    The protocol behind the estimator: prepare |1>, wait t, measure, repeat.
    With ``mc = {"dt": ..., "trials": ..., "rng": RngSpec(...)}`` each
    trajectory decays with per-step probability 1 - exp(-dt / t1) and the
    estimate at each requested time is the surviving fraction.  ``dt`` must
    resolve the decay (dt <= t1 / 100).
    """
    if not t1 > 0:
        raise ValueError("t1 must be positive")
    times = np.asarray(times, dtype=np.float64)
    analytic = TimeSeries(times, np.exp(-times / t1), label="p_e")
    if mc is None:
        return {"analytic": analytic, "monte_carlo": None}

    dt, trials, rng = mc["dt"], int(mc["trials"]), mc["rng"]
    if dt > t1 / 100.0:
        raise ValueError("Monte-Carlo step must satisfy dt <= t1 / 100")
    nsteps = int(np.ceil(times.max() / dt))
    p_step = 1.0 - np.exp(-dt / t1)
    decay_times = np.empty(trials)
    for i in range(trials):
        u = rng.stream(i).random(nsteps)
        hits = u < p_step
        decay_times[i] = (int(np.argmax(hits)) + 1) * dt if hits.any() else np.inf
    estimate = (decay_times[None, :] > times[:, None]).mean(axis=1)
    return {
        "analytic": analytic,
        "monte_carlo": TimeSeries(times, estimate, label="p_e_mc"),
    }


def ramsey_ensemble(
    delta0: float,
    noise: NoiseModel,
    dt: float,
    horizon: float,
    trials: int,
    rng: RngSpec,
) -> dict[str, object]:
    """Ramsey fringes averaged over stochastic frequency-noise trajectories.

    Trajectory i accumulates phase phi_i(t_k) = delta0 t_k + sum_j xi_j
    sigma sqrt(dt) and contributes cos(phi_i); the ensemble mean gives
    p_plus(t) = (1 + <cos phi>) / 2.  The fringe envelope is fitted as
    A exp(-t / T2) by log-linear regression on the oscillation extrema;
    white Gaussian noise has the exact envelope exp(-sigma^2 t / 2).

    With sigma = 0 no stochastic path is taken at all: the return is the
    closed-form fringe and ``fitted_t2`` is None (infinite lifetime).
    ``fitted_freq`` is angular, from the FFT peak of the averaged fringe.
    """
    if dt * delta0 > 0.1 + 1e-12:
        raise ValueError("need dt * delta0 <= 0.1 to resolve the fringe phase")
    nsteps = int(np.round(horizon / dt))
    if nsteps < 2:
        raise ValueError("horizon too short")
    times = np.arange(1, nsteps + 1) * dt

    if noise.sigma == 0.0:
        series = ramsey_trace(delta0, times)
        p_plus = TimeSeries(times, series.values, label="p_plus")
        return {
            "p_plus": p_plus,
            "fitted_t2": None,
            "fitted_freq": 2.0 * np.pi * dominant_frequency(p_plus),
        }

    if trials < 1000:
        raise ValueError("ensemble averaging needs at least 1e3 trajectories")
    kick_scale = noise.sigma * np.sqrt(dt)
    acc = np.zeros(nsteps)
    base_phase = delta0 * times
    for i in range(trials):
        kicks = rng.stream(i).standard_normal(nsteps) * kick_scale
        acc += np.cos(base_phase + np.cumsum(kicks))
    p_plus = TimeSeries(times, 0.5 * (1.0 + acc / trials), label="p_plus")
    fit = fit_exponential_envelope(p_plus, delta0)
    return {
        "p_plus": p_plus,
        "fitted_t2": fit["t2"],
        "fitted_freq": 2.0 * np.pi * dominant_frequency(p_plus),
    }


def two_offset_fringe(delta: float, offset: float, times: np.ndarray) -> TimeSeries:
    """Equal-weight average of two fringes with phase offsets 0 and ``offset``.

    Averaging the two cosines directly reproduces the single-fringe form
    (1 + cos(offset/2) * cos(delta t - offset/2)) / 2: a fringe at the mean
    offset with amplitude reduced by cos(offset/2).
    """
    times = np.asarray(times, dtype=np.float64)
    p_a = 0.5 * (1.0 + np.cos(delta * times))
    p_b = 0.5 * (1.0 + np.cos(delta * times - offset))
    return TimeSeries(times, 0.5 * (p_a + p_b), label="p_plus")


def general_fringe(
    theta: float, phi: float, delta: float, times: np.ndarray
) -> dict[str, object]:
    """Fringe of the superposition cos(theta)|0> + e^{i phi} sin(theta)|1>.

    p_plus(t) = 1/2 + (1/2) sin(2 theta) cos(delta t - phi) while the
    excited population stays sin^2(theta): for small theta the oscillation
    amplitude is linear in theta but the population only quadratic, which
    is why pure decay lets fringes outlive populations by a factor 2.
    """
    times = np.asarray(times, dtype=np.float64)
    values = 0.5 + 0.5 * np.sin(2.0 * theta) * np.cos(delta * times - phi)
    return {
        "p_plus": TimeSeries(times, values, label="p_plus"),
        "p_excited": float(np.sin(theta) ** 2),
    }


def decay_limited_ramsey(
    t1: float,
    delta: float,
    dt: float,
    horizon: float,
    trials: int,
    rng: RngSpec,
) -> dict[str, object]:
    """Ramsey experiment limited purely by decay; fringes decay with T2 = 2 T1.

    Quantum-jump trajectories from |+>: between jumps the excited amplitude
    is deterministically damped by exp(-dt / 2 t1) (and the state
    renormalized), and each step jumps to |0> with probability
    p_e(t) dt / t1 weighted by the instantaneous excited population.  A
    jumped trajectory contributes p_plus = 1/2 and no excitation.  The
    ensemble reproduces p_e(t) = exp(-t/t1)/2 and fringe amplitude
    exp(-t / 2 t1), the T2 = 2 T1 limit.

    Returns the averaged fringe and excitation series, the fitted T2, and
    the fitted excited-state decay rate (a 1/t1 control).
    """
    if delta * t1 < 20.0:
        raise ValueError("need delta * t1 >= 20 so fringes fit inside the decay")
    if dt * delta > 0.1 + 1e-12:
        raise ValueError("need dt * delta <= 0.1 to resolve the fringe phase")
    nsteps = int(np.round(horizon / dt))
    times = np.arange(1, nsteps + 1) * dt

    # No-jump history is common to every trajectory: amplitudes (a_k, b_k)
    # with b damped then renormalized, and per-step jump hazard h_k.
    a = np.empty(nsteps)
    b = np.empty(nsteps)
    hazard = np.empty(nsteps)
    ak, bk = 1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)
    damp = np.exp(-dt / (2.0 * t1))
    for k in range(nsteps):
        hazard[k] = (bk * bk) * dt / t1
        bk *= damp
        nrm = np.hypot(ak, bk)
        ak, bk = ak / nrm, bk / nrm
        a[k], b[k] = ak, bk

    # Each trajectory is summarized by its first jump step (or none).
    jump_counts = np.zeros(nsteps, dtype=np.int64)
    for i in range(trials):
        u = rng.stream(i).random(nsteps)
        hits = u < hazard
        if hits.any():
            jump_counts[int(np.argmax(hits))] += 1
    alive = trials - np.cumsum(jump_counts)

    frac_alive = alive / trials
    p_plus_vals = frac_alive * (0.5 + a * b * np.cos(delta * times)) + (1 - frac_alive) * 0.5
    p_exc_vals = frac_alive * (b * b)
    p_plus = TimeSeries(times, p_plus_vals, label="p_plus")
    p_excited = TimeSeries(times, p_exc_vals, label="p_e")

    fit = fit_exponential_envelope(p_plus, delta)
    window = p_exc_vals > 0.02  # rate fit on the statistically solid part
    rate = -np.polyfit(times[window], np.log(p_exc_vals[window]), 1)[0]
    return {
        "p_plus": p_plus,
        "p_excited": p_excited,
        "fitted_t2": fit["t2"],
        "excited_rate": float(rate),
    }


# ---------------------------------------------------------------------------
# Two-qubit states and correlation tables
# ---------------------------------------------------------------------------

#: Measurement outcomes in table order: computational, real, circular bases.
OUTCOME_LABELS = ("0", "1", "plus", "minus", "plus_i", "minus_i")

_OUTCOME_KETS = (
    KET_0.amps,
    KET_1.amps,
    KET_PLUS.amps,
    KET_MINUS.amps,
    KET_PLUS_I.amps,
    KET_MINUS_I.amps,
)

#: The three standard bases as index pairs into OUTCOME_LABELS.
_BASIS_PAIRS = ((0, 1), (2, 3), (4, 5))

_NORM_TOL = 1e-10


@dataclass(frozen=True)
class TwoQubitKet:
    """Pure two-qubit state over (|00>, |01>, |10>, |11>), first qubit Alice."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape != (4,):
            raise DimensionMismatch("two-qubit state needs exactly 4 amplitudes")
        if abs(np.linalg.norm(amps) - 1.0) > _NORM_TOL:
            raise ValueError("two-qubit state must be normalized")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def overlap(self, other: "TwoQubitKet") -> complex:
        return complex(np.vdot(self.amps, other.amps))


_BELL_AMPS = {
    "phi+": np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=np.complex128) / np.sqrt(2),
    "psi+": np.array([0, 1, 1, 0], dtype=np.complex128) / np.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=np.complex128) / np.sqrt(2),
}


def bell_state(kind: str) -> TwoQubitKet:
    """One of the four maximally entangled Bell states.

    phi+- = (|00> +- |11>)/sqrt2, psi+- = (|01> +- |10>)/sqrt2.
    """
    try:
        return TwoQubitKet(_BELL_AMPS[kind])
    except KeyError:
        raise ValueError(f"kind must be one of {sorted(_BELL_AMPS)}, got {kind!r}") from None


@dataclass(frozen=True)
class JointProbabilityTable:
    """6x6 grid of joint outcome probabilities p(a, b) = |(<a| (x) <b|) psi|^2.

    Rows are Alice's outcome, columns Bob's, both ordered as OUTCOME_LABELS.
    Each 2x2 same- or cross-basis cell describes one choice of measurement
    bases and sums to 1.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (6, 6):
            raise DimensionMismatch("joint table must be 6x6")
        if probs.min() < -1e-12 or probs.max() > 1.0 + 1e-12:
            raise ValueError("probabilities out of [0, 1]")
        for ra, rb in _BASIS_PAIRS:
            for ca, cb in _BASIS_PAIRS:
                cell = probs[ra : rb + 1, ca : cb + 1].sum()
                if abs(cell - 1.0) > 1e-12:
                    raise ValueError(f"basis-pair cell sums to {cell!r}, not 1")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def cell(self, alice: str, bob: str) -> float:
        return float(
            self.probs[OUTCOME_LABELS.index(alice), OUTCOME_LABELS.index(bob)]
        )


def joint_table(state: TwoQubitKet) -> JointProbabilityTable:
    """Joint probabilities of all 36 outcome pairs over the standard bases."""
    psi = state.amps.reshape(2, 2)
    probs = np.empty((6, 6))
    for i, alice in enumerate(_OUTCOME_KETS):
        for j, bob in enumerate(_OUTCOME_KETS):
            amp = alice.conj() @ psi @ bob.conj()
            probs[i, j] = abs(amp) ** 2
    return JointProbabilityTable(probs)


def marginal_table(state: TwoQubitKet) -> dict[str, float]:
    """Bob's outcome probabilities ignoring Alice entirely.

    Computed by summing the joint table over Alice's outcomes in each of
    her three possible bases; all three must agree within 1e-12 (Alice's
    remote choice of basis cannot steer Bob's marginals), and the common
    value is returned per Bob outcome.
    """
    probs = joint_table(state).probs
    per_alice_basis = np.stack([probs[a : b + 1, :].sum(axis=0) for a, b in _BASIS_PAIRS])
    spread = per_alice_basis.max(axis=0) - per_alice_basis.min(axis=0)
    if spread.max() > 1e-12:
        raise AssertionError("marginals depend on Alice's basis; joint table is broken")
    return dict(zip(OUTCOME_LABELS, per_alice_basis[0]))


def ensemble_marginal(
    states: list[TwoQubitKet], weights: list[float]
) -> dict[str, float]:
    """Bob's marginals for an ensemble mixture (weighted pure states)."""
    if len(states) != len(weights) or not states:
        raise ValueError("need matching, non-empty states and weights")
    w = np.asarray(weights, dtype=np.float64)
    if abs(w.sum() - 1.0) > 1e-12 or w.min() < 0:
        raise ValueError("weights must be a probability distribution")
    acc = {label: 0.0 for label in OUTCOME_LABELS}
    for state, wk in zip(states, w):
        for label, p in marginal_table(state).items():
            acc[label] += wk * p
    return acc
