"""Cooper-pair box / transmon engine.

The box Hamiltonian in the Cooper-pair number basis |N>, N = -ncut..ncut:

    H = sum_N  E_C (N - N_g)^2 |N><N|  -  (E_J/2) (|N><N+1| + |N+1><N|)

with the pair charging energy E_C = (2e)^2 / 2 C_Sigma as the reference
unit.  Everything here reduces to diagonalizing that tridiagonal matrix on
gate-charge grids: spectra, the two-level reduction and its exact gap, the
sweet-spot/charge-dispersion analysis that motivates the transmon, the
second-order avoided crossings, and the sudden/adiabatic gate protocols.

Spectra are periodic in N_g with period 1 and symmetric about N_g = 1/2,
so every scan below uses a single period.  Truncation: states near |+-ncut|
are polluted by the hard cutoff, so callers never get more than 2 ncut - 1
levels, and the dispersion scan re-runs itself at doubled ncut to prove the
cutoff is irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooSmall
from .linalg import Ket, hermitian_eigen, hermitian_eigen_batch
from .qubit import pauli
from .timeseries import TimeSeries

__all__ = [
    "CPBParams",
    "ChargeBasis",
    "SpectrumSweep",
    "cpb_hamiltonian",
    "spectrum_sweep",
    "reduced_qubit",
    "exact_gap",
    "charge_dispersion",
    "second_order_gap",
    "sudden_gate_sim",
    "adiabatic_sweep_sim",
]

#: Gate-charge samples per unit N_g in dispersion scans.
_SCAN_POINTS = 201


@dataclass(frozen=True)
class CPBParams:
    """Charging energy, Josephson energy and gate charge of one box."""

    ec: float
    ej: float
    ng: float = 0.0

    def __post_init__(self):
        if not self.ec > 0:
            raise ValueError("ec must be positive")
        if self.ej < 0:
            raise ValueError("ej must be non-negative")


@dataclass(frozen=True)
class ChargeBasis:
    """Charge states |-ncut> ... |+ncut|; dimension 2 ncut + 1."""

    ncut: int

    def __post_init__(self):
        if self.ncut < 2:
            raise ValueError("ncut must be at least 2")

    @property
    def dim(self) -> int:
        return 2 * self.ncut + 1

    @property
    def charges(self) -> np.ndarray:
        return np.arange(-self.ncut, self.ncut + 1)


@dataclass(frozen=True)
class SpectrumSweep:
    """k lowest eigenvalues on a gate-charge grid (levels[i, k] ascending)."""

    ng_values: np.ndarray
    levels: np.ndarray


def cpb_hamiltonian(params: CPBParams, basis: ChargeBasis) -> np.ndarray:
    """Real symmetric tridiagonal box Hamiltonian (dimension 2 ncut + 1)."""
    charges = basis.charges
    h = np.diag(params.ec * (charges - params.ng) ** 2).astype(np.float64)
    hop = -0.5 * params.ej * np.ones(basis.dim - 1)
    h += np.diag(hop, 1) + np.diag(hop, -1)
    return h


def _hamiltonian_stack(ec, ej, ng_values, basis: ChargeBasis) -> np.ndarray:
    charges = basis.charges
    npts = len(ng_values)
    stack = np.zeros((npts, basis.dim, basis.dim))
    diag = ec * (charges[None, :] - np.asarray(ng_values)[:, None]) ** 2
    stack[:, np.arange(basis.dim), np.arange(basis.dim)] = diag
    rows = np.arange(basis.dim - 1)
    stack[:, rows, rows + 1] = -0.5 * ej
    stack[:, rows + 1, rows] = -0.5 * ej
    return stack


def spectrum_sweep(
    ec: float, ej: float, ng_values: np.ndarray, ncut: int, k: int
) -> SpectrumSweep:
    """k lowest levels of the box at each gate charge (one batched solve)."""
    basis = ChargeBasis(ncut)
    if not 1 <= k <= 2 * ncut - 1:
        raise ValueError(f"k must be within [1, {2 * ncut - 1}]; top levels are cutoff-polluted")
    ng_values = np.asarray(ng_values, dtype=np.float64)
    vals, _ = hermitian_eigen_batch(
        _hamiltonian_stack(ec, ej, ng_values, basis), compute_vectors=False
    )
    return SpectrumSweep(ng_values=ng_values, levels=vals[:, :k].copy())


def reduced_qubit(ec: float, ej: float, dg: float) -> dict[str, object]:
    """Two-level box Hamiltonian at gate charge N_g = 1/2 + dg.

    Keeping only |0> and |1> gives h2 = E_C dg sigma_z - (E_J/2) sigma_x in
    the ordered basis (|0>, |1>); the identity part E_C (1/4 + dg^2), equal
    for both states, is returned separately as ``offset``.
    """
    if not abs(dg) < 0.5:
        raise ValueError("two-level reduction needs |dg| < 1/2")
    h2 = ec * dg * pauli("z") - 0.5 * ej * pauli("x")
    return {"h2": h2.real, "offset": ec * (0.25 + dg * dg)}


def exact_gap(ec: float, ej: float, dg: float) -> float:
    """Two-level gap E_J sqrt(1 + 4 E_C^2 dg^2 / E_J^2) at N_g = 1/2 + dg.

    Written as 2 sqrt((E_C dg)^2 + (E_J/2)^2) so the E_J = 0 limit
    (2 E_C |dg|, the bare parabola separation) is handled exactly.  Minimum
    E_J at dg = 0; crossover to the linear regime near |dg| ~ E_J / 2 E_C.
    """
    return 2.0 * np.hypot(ec * dg, 0.5 * ej)


def _gap_scan(ec, ej, ncut, levels, ng_values):
    lo, hi = levels
    vals, _ = hermitian_eigen_batch(
        _hamiltonian_stack(ec, ej, ng_values, ChargeBasis(ncut)), compute_vectors=False
    )
    return vals[:, hi] - vals[:, lo]


def charge_dispersion(
    ec: float, ej: float, ncut: int, levels: tuple[int, int] = (0, 1)
) -> dict[str, float]:
    """Gate-charge dispersion of a level gap over one period of N_g.

    Scans N_g over [0, 1] on a 201-point grid and returns the extremes of
    the gap between the two requested levels plus their difference (the
    dispersion).  The scan is repeated at doubled ncut; if that changes the
    dispersion by more than 1e-8 relative to the gap scale the truncation
    is inadequate and TruncationTooSmall is raised.  (The gap scale, not
    the dispersion itself, is the reference: deep in the transmon regime
    the dispersion underflows any fixed relative tolerance.)
    """
    lo, hi = levels
    if not 0 <= lo < hi <= 2 * ncut - 2:
        raise ValueError("level pair out of the clean part of the spectrum")
    ng_values = np.linspace(0.0, 1.0, _SCAN_POINTS)
    gaps_a = _gap_scan(ec, ej, ncut, levels, ng_values)
    gaps_b = _gap_scan(ec, ej, 2 * ncut, levels, ng_values)
    disp_a = gaps_a.max() - gaps_a.min()
    disp_b = gaps_b.max() - gaps_b.min()
    scale = max(abs(disp_b), float(gaps_b.mean()))
    if abs(disp_b - disp_a) > 1e-8 * scale:
        raise TruncationTooSmall(
            f"dispersion moved by {abs(disp_b - disp_a):.3e} when doubling ncut={ncut}"
        )
    return {
        "max_gap": float(gaps_b.max()),
        "min_gap": float(gaps_b.min()),
        "dispersion": float(disp_b),
        "ng_at_min": float(ng_values[int(np.argmin(gaps_b))]),
    }


def _min_gap_near(ec, ej, ncut, levels, ng_star, half_width=0.05, tol=1e-10):
    """Golden-section minimum of the inter-level gap around ng_star."""
    golden = (np.sqrt(5.0) - 1.0) / 2.0

    def gap(ng):
        return float(_gap_scan(ec, ej, ncut, levels, np.array([ng]))[0])

    a, b = ng_star - half_width, ng_star + half_width
    c = b - golden * (b - a)
    d = a + golden * (b - a)
    fc, fd = gap(c), gap(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - golden * (b - a)
            fc = gap(c)
        else:
            a, c, fc = c, d, fd
            d = a + golden * (b - a)
            fd = gap(d)
    return gap(0.5 * (a + b))


def second_order_gap(
    ec: float, ej_values: np.ndarray, ncut: int = 10
) -> dict[str, object]:
    """Avoided-crossing gap where the |0> and |2> parabolas meet, vs E_J.

    The bare parabolas E_C (N - N_g)^2 for N = 0 and N = 2 cross at
    N_g = 1 (the midpoint), where |1> lies below them, so the crossing is
    between the second and third levels.  The coupling connecting |0> to
    |2> appears only at second order in the tunnelling, so the minimal gap
    scales as (E_J/2)^2; the log-log slope over ``ej_values`` is returned,
    along with the first-order sweet-spot gap (slope 1) as a control.
    """
    ej_values = np.asarray(ej_values, dtype=np.float64)
    if np.any(ej_values > 0.2 * ec):
        raise ValueError("second-order scaling needs E_J << E_C")
    ng_star = 1.0  # (0 + 2) / 2: the bare-parabola crossing
    gaps = np.array(
        [_min_gap_near(ec, ej, ncut, (1, 2), ng_star) for ej in ej_values]
    )
    first_order = np.array(
        [_min_gap_near(ec, ej, ncut, (0, 1), 0.5) for ej in ej_values]
    )
    slope = float(np.polyfit(np.log(ej_values), np.log(gaps), 1)[0])
    control = float(np.polyfit(np.log(ej_values), np.log(first_order), 1)[0])
    return {
        "ng_star": ng_star,
        "gaps": gaps,
        "slope": slope,
        "first_order_gaps": first_order,
        "first_order_slope": control,
    }


def _ground_state(ec, ej, ng, ncut) -> Ket:
    eig = hermitian_eigen(cpb_hamiltonian(CPBParams(ec, ej, ng), ChargeBasis(ncut)))
    return Ket(eig.vectors[:, 0], basis="charge")


def sudden_gate_sim(
    ec: float, ej: float, t_hold: np.ndarray, ncut: int = 10
) -> dict[str, TimeSeries]:
    """Sudden-switch single-qubit gate: prepare at N_g = 0, hold at 1/2.

    The box relaxes to the ground state at N_g = 0; the gate charge is then
    switched instantly to the degeneracy point and the state evolves under
    the full Hamiltonian there.  Reported is the survival probability
    p0(t) = |<psi(0)|psi(t)>|^2, which for E_J << E_C follows the two-level
    Rabi form (1 + cos(E_J t))/2; the two-level prediction is returned
    alongside for comparison.
    """
    t_hold = np.asarray(t_hold, dtype=np.float64)
    psi0 = _ground_state(ec, ej, 0.0, ncut)
    eig = hermitian_eigen(cpb_hamiltonian(CPBParams(ec, ej, 0.5), ChargeBasis(ncut)))
    weights = eig.vectors.conj().T @ psi0.amps
    phases = np.exp(-1j * np.outer(t_hold, eig.values))
    overlaps = (phases * weights[None, :]) @ weights.conj()
    p0 = np.abs(overlaps) ** 2
    return {
        "p0": TimeSeries(t_hold, p0, label="p0"),
        "two_level": TimeSeries(t_hold, 0.5 * (1.0 + np.cos(ej * t_hold)), label="p0_2lvl"),
    }


def adiabatic_sweep_sim(
    ec: float, ej: float, ramp_time: float, steps: int, ncut: int = 10
) -> dict[str, float]:
    """Adiabatic gate: ramp N_g linearly from 0 to 1/2, track the ground state.

    The ramp is discretized into piecewise-constant segments (midpoint gate
    charge, spectral propagator per segment); per-segment change of N_g must
    stay below 1e-3, which bounds ``steps`` from below.  Returns the fidelity
    of the final state to the instantaneous ground state at N_g = 1/2 - the
    |+>-like superposition the adiabatic theorem promises for slow ramps.
    A sudden ramp (ramp_time -> 0) leaves the N_g = 0 ground state behind,
    whose fidelity to the target is about 1/2.
    """
    if steps < 1:
        raise ValueError("need at least one segment")
    if 0.5 / steps > 1e-3:
        raise ValueError("per-step gate-charge change exceeds 1e-3; raise steps")
    basis = ChargeBasis(ncut)
    dt = ramp_time / steps
    midpoints = (np.arange(steps) + 0.5) * (0.5 / steps)
    vals, vecs = hermitian_eigen_batch(_hamiltonian_stack(ec, ej, midpoints, basis))
    psi = _ground_state(ec, ej, 0.0, ncut).amps
    for k in range(steps):
        v = vecs[k]
        psi = v @ (np.exp(-1j * vals[k] * dt) * (v.conj().T @ psi))
    target = _ground_state(ec, ej, 0.5, ncut).amps
    return {"fidelity_to_plus": float(abs(np.vdot(target, psi)) ** 2)}
