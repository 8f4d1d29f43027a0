"""Semiclassical Josephson junction toolset.

Reduced units throughout: the flux quantum is 1 (so the reduced flux
quantum is 1/2pi), currents are quoted in units of the critical current
I0 = 2 pi E_J / Phi_0, and washboard energies in units of I0 Phi0 / 2pi
(= E_J).  In these units the tilted washboard is

    u(phi) = -(I/I0) phi - cos(phi)

and every formula below is a pure ratio, so a `JunctionSpec` is only needed
where an absolute scale enters (DC current, inductances).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InductanceSingular, NoMinimum, StepUnstable
from .timeseries import TimeSeries

__all__ = [
    "JunctionSpec",
    "WashboardPoint",
    "TwoIslandState",
    "TwoIslandTrajectory",
    "dc_current",
    "washboard",
    "washboard_u",
    "first_minimum",
    "first_minimum_numeric",
    "inductances",
    "taylor_regime",
    "squid_effective",
    "flux_qubit_potential",
    "fluxoid_residual",
    "two_island_dynamics",
]

#: Grid step used to bracket minima before golden-section refinement.
_SCAN_STEP = np.pi / 200

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class JunctionSpec:
    """Physical junction: Josephson energy, critical current, capacitance.

    With the flux quantum set to 1, i0 = 2 pi ej; the charging energy of
    the junction capacitance is ec = (2e)^2 / (2 cj) when needed.
    """

    ej: float
    cj: float = 1.0

    def __post_init__(self):
        if not (self.ej > 0 and self.cj > 0):
            raise ValueError("ej and cj must be positive")

    @property
    def i0(self) -> float:
        return 2.0 * np.pi * self.ej


@dataclass(frozen=True)
class WashboardPoint:
    """One sample of the tilted washboard, u in units of I0 Phi0 / 2pi."""

    phi: float
    u: float


def dc_current(spec: JunctionSpec, phi: float) -> float:
    """DC Josephson relation I = I0 sin(phi)."""
    return spec.i0 * np.sin(phi)


def washboard_u(bias: float, phis: np.ndarray) -> np.ndarray:
    """Reduced washboard u(phi) = -bias phi - cos(phi), vectorized."""
    phis = np.asarray(phis, dtype=np.float64)
    return -bias * phis - np.cos(phis)


def washboard(bias: float, phis: np.ndarray) -> list[WashboardPoint]:
    """Pointwise washboard samples at relative bias I/I0."""
    us = washboard_u(bias, phis)
    return [WashboardPoint(float(p), float(u)) for p, u in zip(np.asarray(phis), us)]


def _golden_section(f, lo: float, hi: float, tol: float = 1e-7) -> float:
    """Minimum of a unimodal f on [lo, hi]: golden section + parabolic polish.

    Pure golden section cannot resolve the minimum below the flat-basin
    width sqrt(eps |f| / f''), about 1e-8 for order-one washboards, so the
    bracket is finished with one parabolic vertex fit, which averages the
    roundoff away and reaches ~1e-10.
    """
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    m = 0.5 * (a + b)
    h = max(b - a, 1e-7)
    fa, fm, fb = f(m - h), f(m), f(m + h)
    denom = fa - 2.0 * fm + fb
    if denom <= 0.0:  # flat to roundoff: the midpoint is as good as it gets
        return m
    vertex = m + 0.5 * h * (fa - fb) / denom
    return min(max(vertex, a - h), b + h)


def first_minimum_numeric(bias: float) -> float:
    """First washboard minimum located by grid scan plus golden section.

    Independent of the arcsin closed form: brackets the minimum of u(phi)
    on [-pi/2, pi/2] from a pi/200 grid and refines by golden section.
    """
    grid = np.arange(-np.pi / 2, np.pi / 2 + _SCAN_STEP, _SCAN_STEP)
    us = washboard_u(bias, grid)
    k = int(np.argmin(us))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    return _golden_section(lambda p: -bias * p - np.cos(p), lo, hi)


def first_minimum(bias: float) -> float:
    """Location of the first washboard minimum, phi = arcsin(I/I0).

    Raises NoMinimum for |bias| > 1, where the tilt removes every local
    minimum.  For |bias| <= 0.95 the closed form is cross-checked against
    the numerical minimizer to 1e-8 on every call; closer to the critical
    tilt the potential flattens (u'' = sqrt(1 - bias^2) -> 0) and any
    function-value minimizer loses the resolution needed for that check.
    """
    if abs(bias) > 1.0:
        raise NoMinimum(f"|I/I0| = {abs(bias):.4g} > 1: washboard has no local minima")
    phi = float(np.arcsin(bias))
    if abs(bias) <= 0.95:
        numeric = first_minimum_numeric(bias)
        if abs(numeric - phi) > 1e-8:
            raise AssertionError(
                f"arcsin({bias}) = {phi} disagrees with minimizer {numeric}"
            )
    return phi


def inductances(spec: JunctionSpec, flux: float) -> dict[str, float]:
    """Linear and nonlinear Josephson inductance at ``flux`` (in Phi0 units).

    linear = Phi0^2 / (4 pi^2 E_J) (Phi0 = 1 here); nonlinear divides by
    cos(2 pi flux) and diverges at flux = 1/4 + k/2, reported as
    InductanceSingular.
    """
    linear = 1.0 / (4.0 * np.pi**2 * spec.ej)
    cosf = np.cos(2.0 * np.pi * flux)
    if abs(cosf) < 1e-9:
        raise InductanceSingular(f"cos(2 pi {flux}) vanishes: inductance diverges")
    return {"linear": linear, "nonlinear": linear / cosf}


def taylor_regime(regime: str, bias: float) -> dict[str, object]:
    """Cubic Taylor data of the reduced washboard for the two qubit regimes.

    Returns the expansion point and coefficients [c0, c1, c2, c3] of
    u(phi) = -bias phi - cos(phi) in powers of (phi - point):

    * ``small-bias``: point 0; approximately quadratic (c2 = 1/2), the
      harmonic-oscillator regime.
    * ``critical-bias``: point pi/2; the quadratic term is exactly zero and
      the cubic coefficient is -1/6, the purely nonlinear regime.

    Coefficients are the exact derivatives of u, so they agree with finite
    differences of `washboard_u` at the expansion point.
    """
    if regime == "small-bias":
        if abs(bias) > 0.2:
            raise ValueError("small-bias expansion expects |I/I0| << 1")
        point = 0.0
        coeffs = [-1.0, -bias, 0.5, 0.0]
    elif regime == "critical-bias":
        if not 0.0 <= bias < 1.0:
            raise ValueError("critical-bias expansion expects 0 <= I/I0 < 1")
        point = np.pi / 2.0
        coeffs = [-bias * np.pi / 2.0, 1.0 - bias, 0.0, -1.0 / 6.0]
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return {"point": point, "coeffs": coeffs}


def squid_effective(i0_each: float, phi_ext: float, n: int = 0) -> dict[str, object]:
    """Split junction (SQUID) as one flux-tunable junction.

    For two identical junctions of critical current ``i0_each`` in a loop
    threaded by ``phi_ext`` (Phi0 units) on fluxoid branch ``n``, the pair
    obeys I = 2 I0 cos(pi (n - phi_ext)) sin(dphi): a single junction whose
    critical current is tunable through zero at half-integer flux.  The
    balanced phase is what both junction phases equal at I = 0.
    """
    critical = 2.0 * i0_each * np.cos(np.pi * (n - phi_ext))
    return {
        "critical": float(critical),
        "magnitude": float(abs(critical)),
        "balanced_phase": float(np.pi * (n - phi_ext)),
        "relation": "I = 2*I0*cos(pi*(n - phi_ext/Phi0)) * sin(dphi)",
    }


def flux_qubit_potential(
    l: float, ej: float, phi_ext: float, phis: np.ndarray
) -> dict[str, object]:
    """Flux-qubit potential u(phi) = phi^2/2L - E_J cos(2 pi (phi - phi_ext)).

    ``phis`` is a sorted grid of loop flux values in Phi0 units.  Returns the
    samples together with every interior local minimum, located by a sign
    change of the numerical derivative and refined by golden section.
    At phi_ext = 1/2 the potential is even in phi and the two lowest minima
    are degenerate, symmetric about the midpoint phi = 0.
    """
    phis = np.asarray(phis, dtype=np.float64)
    if phis.ndim != 1 or len(phis) < 3:
        raise ValueError("need a 1-D grid of at least 3 points")
    if np.any(np.diff(phis) <= 0):
        raise ValueError("grid must be strictly increasing")

    def u(phi):
        return phi * phi / (2.0 * l) - ej * np.cos(2.0 * np.pi * (phi - phi_ext))

    samples = u(phis)
    minima = []
    slope = np.diff(samples)
    for k in range(len(slope) - 1):
        if slope[k] < 0.0 <= slope[k + 1]:
            p = _golden_section(u, phis[k], phis[k + 2])
            minima.append((float(p), float(u(p))))
    return {"phis": phis, "u": samples, "minima": minima}


def fluxoid_residual(total_flux: float) -> dict[str, float]:
    """Distance of a loop flux (Phi0 units) from the nearest fluxoid level.

    Quantization forces the fluxoid to integer multiples of Phi0; the
    residual is flux - n with n the nearest integer.  Exact half-integer
    ties round to even n (numpy's rint), so |residual| <= 1/2 always.
    """
    n = float(np.rint(total_flux))
    return {"n": n, "residual": float(total_flux - n)}


@dataclass(frozen=True)
class TwoIslandState:
    """Semiclassical condensates sqrt(n_j) exp(i theta_j) on two islands."""

    n1: float
    n2: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not (self.n1 > 0 and self.n2 > 0):
            raise ValueError("pair numbers must be positive")

    @property
    def delta(self) -> float:
        """Condensate phase difference theta2 - theta1 across the junction."""
        return self.theta2 - self.theta1


@dataclass(frozen=True)
class TwoIslandTrajectory:
    times: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    current: TimeSeries
    i0: float

    @property
    def delta(self) -> np.ndarray:
        return self.theta2 - self.theta1


def _two_island_rhs(y: np.ndarray, e: float) -> np.ndarray:
    n1, n2, th1, th2 = y
    if n1 <= 0.0 or n2 <= 0.0:
        raise StepUnstable("pair number reached zero during integration")
    delta = th2 - th1
    s = e * np.sqrt(n1 * n2) * np.sin(delta)
    cos_d = np.cos(delta)
    return np.array(
        [
            s,
            -s,
            -0.5 * e * np.sqrt(n2 / n1) * cos_d,
            -0.5 * e * np.sqrt(n1 / n2) * cos_d,
        ]
    )


def two_island_dynamics(
    state0: TwoIslandState, e_coupling: float, dt: float, steps: int
) -> TwoIslandTrajectory:
    """Integrate the coupled tunnel equations with fixed-step RK4.

    The equations (hbar = 1, Cooper-pair charge 1) are

        dn1/dt = E sqrt(n1 n2) sin(delta)        dn2/dt = -dn1/dt
        dtheta_j/dt = -(E/2) sqrt(n_k/n_j) cos(delta)

    with delta = theta2 - theta1.  The emitted current is dn1/dt, to be
    compared against I0 sin(delta) with I0 = n0 E and n0 the geometric mean
    of the initial pair numbers.  Both number derivatives come from a single
    evaluation, so n1 + n2 is conserved to roundoff.  Raises StepUnstable
    if a pair number is driven to zero.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("need at least one step")
    y = np.array([state0.n1, state0.n2, state0.theta1, state0.theta2])
    out = np.empty((steps + 1, 4))
    out[0] = y
    for k in range(steps):
        k1 = _two_island_rhs(y, e_coupling)
        k2 = _two_island_rhs(y + 0.5 * dt * k1, e_coupling)
        k3 = _two_island_rhs(y + 0.5 * dt * k2, e_coupling)
        k4 = _two_island_rhs(y + dt * k3, e_coupling)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if y[0] <= 0.0 or y[1] <= 0.0:
            raise StepUnstable(f"pair number went non-positive at step {k + 1}")
        out[k + 1] = y
    times = np.arange(steps + 1) * dt
    n1, n2, th1, th2 = out.T
    delta = th2 - th1
    current = e_coupling * np.sqrt(n1 * n2) * np.sin(delta)
    n0 = float(np.sqrt(state0.n1 * state0.n2))
    return TwoIslandTrajectory(
        times=times,
        n1=n1,
        n2=n2,
        theta1=th1,
        theta2=th2,
        current=TimeSeries(times, current, label="current"),
        i0=n0 * e_coupling,
    )
