"""Squeezing figures of merit.

Everything here reduces to the first moments <I_a> and the symmetrized second
moments <I_a I_b + I_b I_a>/2 of a state: the minimum/maximum transverse
variances, the optimal quadrature angle, the squeezing parameter xi_S and its
metrological companion xi_R, the closed-form initial squeezing rate, the
orthogonalization-time bound, and trajectory-level statistics (duty cycle,
min/mean/max bands, revival and beat-envelope detectors).

Samples whose mean spin length falls below ``MEAN_SPIN_EPS`` have no defined
transverse plane; they are flagged and their xi values are NaN rather than
fabricated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.signal import hilbert

from .algebra import SpinQuantumNumber, hermitian_eig, spin_operators
from .errors import InfiniteBoundError
from .states import BlochDirection, QuantumState

#: Mean-spin length below which the mean-spin direction (and hence xi_S) is
#: treated as undefined.
MEAN_SPIN_EPS = 1e-8


@dataclass(frozen=True)
class SqueezingRecord:
    """Squeezing metrics of one state (one time sample).

    ``var_diff``, ``var_cross`` and ``var_sum`` are the transverse quadratic
    moments <I1^2 - I2^2>, <I1 I2 + I2 I1> and <I1^2 + I2^2> from which the
    variance extrema derive.  ``flagged`` marks samples with undefined
    mean-spin direction (xi values are NaN there).
    """

    t: float
    xi_s: float
    xi_r: float
    mean_spin: tuple[float, float, float]
    var_min: float
    var_max: float
    optimal_angle: float
    purity: float
    var_diff: float
    var_cross: float
    var_sum: float
    flagged: bool


@dataclass(frozen=True)
class SqueezingSeries:
    """Column-oriented squeezing records for a uniformly sampled trajectory."""

    t: np.ndarray
    xi_s: np.ndarray
    xi_r: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    var_min: np.ndarray
    var_max: np.ndarray
    optimal_angle: np.ndarray
    purity: np.ndarray
    var_diff: np.ndarray
    var_cross: np.ndarray
    var_sum: np.ndarray
    flagged: np.ndarray

    def __len__(self) -> int:
        return self.t.size

    def record(self, k: int) -> SqueezingRecord:
        return SqueezingRecord(
            t=float(self.t[k]), xi_s=float(self.xi_s[k]), xi_r=float(self.xi_r[k]),
            mean_spin=(float(self.sx[k]), float(self.sy[k]), float(self.sz[k])),
            var_min=float(self.var_min[k]), var_max=float(self.var_max[k]),
            optimal_angle=float(self.optimal_angle[k]), purity=float(self.purity[k]),
            var_diff=float(self.var_diff[k]), var_cross=float(self.var_cross[k]),
            var_sum=float(self.var_sum[k]), flagged=bool(self.flagged[k]),
        )


def _moment_operators(spin: SpinQuantumNumber):
    ops = spin_operators(spin)
    firsts = (ops.ix, ops.iy, ops.iz)
    seconds = [[0.5 * (firsts[a] @ firsts[b] + firsts[b] @ firsts[a])
                for b in range(3)] for a in range(3)]
    return firsts, seconds


def _batched_moments(spin, vectors=None, densities=None):
    """First-moment vectors v (n,3) and second-moment matrices M (n,3,3)."""
    firsts, seconds = _moment_operators(spin)
    n = vectors.shape[0] if vectors is not None else densities.shape[0]
    v = np.empty((n, 3))
    m = np.empty((n, 3, 3))
    for a in range(3):
        if vectors is not None:
            v[:, a] = np.einsum("td,de,te->t", vectors.conj(), firsts[a], vectors).real
        else:
            v[:, a] = np.einsum("tij,ji->t", densities, firsts[a]).real
        for b in range(a, 3):
            if vectors is not None:
                vals = np.einsum("td,de,te->t", vectors.conj(), seconds[a][b], vectors).real
            else:
                vals = np.einsum("tij,ji->t", densities, seconds[a][b]).real
            m[:, a, b] = m[:, b, a] = vals
    return v, m


def _series_from_moments(spin, times, v, m, pur):
    i = spin.i
    n = times.size
    length = np.linalg.norm(v, axis=1)
    flagged = length <= MEAN_SPIN_EPS

    xi_s = np.full(n, np.nan)
    xi_r = np.full(n, np.nan)
    var_min = np.full(n, np.nan)
    var_max = np.full(n, np.nan)
    angle = np.full(n, np.nan)
    a_ = np.full(n, np.nan)
    b_ = np.full(n, np.nan)
    c_ = np.full(n, np.nan)

    ok = ~flagged
    if np.any(ok):
        lv = length[ok]
        theta = np.arccos(np.clip(v[ok, 2] / lv, -1.0, 1.0))
        phi = np.arctan2(v[ok, 1], v[ok, 0])
        st, ct = np.sin(theta), np.cos(theta)
        sp, cp = np.sin(phi), np.cos(phi)
        u1 = np.stack([-sp, cp, np.zeros_like(sp)], axis=1)
        u2 = np.stack([-ct * cp, -ct * sp, st], axis=1)
        m11 = np.einsum("ta,tab,tb->t", u1, m[ok], u1)
        m22 = np.einsum("ta,tab,tb->t", u2, m[ok], u2)
        m12 = np.einsum("ta,tab,tb->t", u1, m[ok], u2)
        a = m11 - m22
        b = 2.0 * m12
        c = m11 + m22
        hyp = np.hypot(a, b)
        vmin = (c - hyp) / 2.0
        vmax = (c + hyp) / 2.0
        xs = np.sqrt(np.maximum(vmin, 0.0) / (i / 2.0))
        # Half-angle minimizing var(I1 sin(alpha) + I2 cos(alpha)), mapped to [0, pi).
        al = 0.5 * np.arctan2(-b, a)
        al = np.mod(al, np.pi)
        a_[ok], b_[ok], c_[ok] = a, b, c
        var_min[ok], var_max[ok] = vmin, vmax
        xi_s[ok] = xs
        xi_r[ok] = (i / lv) * xs
        angle[ok] = al

    return SqueezingSeries(
        t=np.asarray(times, dtype=float),
        xi_s=xi_s, xi_r=xi_r,
        sx=v[:, 0], sy=v[:, 1], sz=v[:, 2],
        var_min=var_min, var_max=var_max, optimal_angle=angle,
        purity=pur, var_diff=a_, var_cross=b_, var_sum=c_,
        flagged=flagged,
    )


def squeezing_parameter(state: QuantumState, spin: SpinQuantumNumber,
                        t: float = 0.0) -> SqueezingRecord:
    """Squeezing metrics of a single state.

    Flags the record (xi values NaN) when the mean spin length is below
    ``MEAN_SPIN_EPS`` so the transverse plane is undefined.
    """
    if state.is_pure:
        v, m = _batched_moments(spin, vectors=state.vector[None, :])
    else:
        v, m = _batched_moments(spin, densities=state.density()[None, :, :])
    series = _series_from_moments(
        spin, np.array([t]), v, m, np.array([state.purity()])
    )
    return series.record(0)


def trajectory_metrics(trajectory, spin: SpinQuantumNumber) -> SqueezingSeries:
    """Per-sample squeezing metrics for a whole trajectory (vectorized)."""
    vectors = trajectory.vector_array
    if vectors is not None:
        v, m = _batched_moments(spin, vectors=vectors)
        pur = np.ones(vectors.shape[0])
    else:
        densities = trajectory.density_array
        v, m = _batched_moments(spin, densities=densities)
        pur = np.einsum("tij,tji->t", densities, densities).real
    return _series_from_moments(spin, trajectory.times, v, m, pur)


class DutyCycle(NamedTuple):
    fraction: float
    n_squeezed: int
    n_used: int
    n_flagged: int


def duty_cycle(series: SqueezingSeries) -> DutyCycle:
    """Fraction of samples with xi_S <= 1 (inclusive).

    Flagged samples are excluded from both numerator and denominator and
    reported separately.
    """
    ok = ~series.flagged
    n_used = int(np.count_nonzero(ok))
    n_flagged = len(series) - n_used
    if n_used == 0:
        return DutyCycle(math.nan, 0, 0, n_flagged)
    n_squeezed = int(np.count_nonzero(series.xi_s[ok] <= 1.0))
    return DutyCycle(n_squeezed / n_used, n_squeezed, n_used, n_flagged)


class BandStatistics(NamedTuple):
    xi_min: float
    xi_max: float
    xi_mean: float
    n_flagged: int


def band_statistics(series: SqueezingSeries) -> BandStatistics:
    """Min/max/mean of xi_S over the unflagged samples of a trajectory."""
    ok = ~series.flagged
    n_flagged = len(series) - int(np.count_nonzero(ok))
    if not np.any(ok):
        return BandStatistics(math.nan, math.nan, math.nan, n_flagged)
    xs = series.xi_s[ok]
    return BandStatistics(float(xs.min()), float(xs.max()), float(xs.mean()), n_flagged)


def squeezing_rate(spin: SpinQuantumNumber, eta: float,
                   direction: BlochDirection) -> float:
    """Closed-form initial squeezing rate of a coherent state under twisting.

    Q = 2I sqrt{[eta cos(2 phi)(1 + cos^2 theta) + 3 sin^2 theta]^2
                + 4 eta^2 cos^2 theta sin^2(2 phi)}.
    Dimensionless comparative indicator; linear in I.
    """
    return float(rate_map(spin, eta, np.array([direction.theta]),
                          np.array([direction.phi]))[0, 0])


def rate_map(spin: SpinQuantumNumber, eta: float,
             thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """squeezing_rate evaluated on a (theta x phi) grid; shape (n_theta, n_phi)."""
    th = np.asarray(thetas, dtype=float)[:, None]
    ph = np.asarray(phis, dtype=float)[None, :]
    ct2 = np.cos(th) ** 2
    term1 = eta * np.cos(2.0 * ph) * (1.0 + ct2) + 3.0 * np.sin(th) ** 2
    term2sq = 4.0 * eta**2 * ct2 * np.sin(2.0 * ph) ** 2
    return 2.0 * spin.i * np.sqrt(term1**2 + term2sq)


class SpeedBound(NamedTuple):
    energy: float         # <H> above the ground level, rad/s
    energy_spread: float  # std deviation of H, rad/s
    tau_min: float        # orthogonalization-time lower bound, seconds


def speed_bound(state: QuantumState, hamiltonian) -> SpeedBound:
    """Orthogonalization-time lower bound max(pi/2E, pi/2dE) (hbar = 1).

    E is the mean energy measured from the ground level and dE the energy
    spread.  Raises :class:`InfiniteBoundError` when both vanish (the state is
    the ground eigenstate and never evolves anywhere).
    """
    w, _ = hermitian_eig(hamiltonian)
    h = np.asarray(hamiltonian)
    e_mean = state.expect(h).real
    e_sq = state.expect(h @ h).real
    energy = e_mean - w[0]
    spread = math.sqrt(max(e_sq - e_mean**2, 0.0))
    if energy <= 1e-12 and spread <= 1e-12:
        raise InfiniteBoundError("ground eigenstate: E and dE both vanish")
    bound_e = math.pi / (2.0 * energy) if energy > 0 else math.inf
    bound_de = math.pi / (2.0 * spread) if spread > 0 else math.inf
    return SpeedBound(energy, spread, max(bound_e, bound_de))


def first_revival_time(xi_of_tau: Callable[[float], float], tau_max: float,
                       *, threshold: float = 1.0 - 1e-6,
                       departure: float = 0.9,
                       coarse_step: float = 1.0 / 400.0) -> float | None:
    """First return of xi_S to ~1 after the state has left its coherent start.

    Scans ``xi_of_tau`` coarsely for the first dip below ``departure`` and the
    next recovery above ``threshold``, then bisects the recovery crossing.
    Returns None when no revival occurs before ``tau_max``.
    """
    n = int(math.floor(tau_max / coarse_step)) + 1
    taus = np.arange(n) * coarse_step
    values = np.array([xi_of_tau(t) for t in taus])
    below = np.nonzero(values < departure)[0]
    if below.size == 0:
        return None
    start = below[0]
    above = np.nonzero(values[start:] >= threshold)[0]
    if above.size == 0:
        return None
    hi_idx = start + above[0]
    lo, hi = taus[hi_idx - 1], taus[hi_idx]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if xi_of_tau(mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def minimum_xi(xi_of_tau: Callable[[float], float], tau_lo: float, tau_hi: float,
               *, coarse_step: float = 1.0 / 200.0) -> tuple[float, float]:
    """Minimum of xi_S(tau) over an interval, refined below grid resolution.

    The squeezing dips can be arbitrarily narrow (and the exact minimum may sit
    at a flagged point where the mean spin vanishes), so a coarse scan is
    followed by a bounded scalar minimization around the best bracket; flagged
    evaluations count as +inf.  Returns (tau_min, xi_min).
    """
    from scipy.optimize import minimize_scalar

    def safe(tau: float) -> float:
        value = xi_of_tau(float(tau))
        return value if math.isfinite(value) else math.inf

    n = int(math.floor((tau_hi - tau_lo) / coarse_step)) + 1
    taus = tau_lo + np.arange(n) * coarse_step
    values = np.array([safe(t) for t in taus])
    k = int(np.argmin(values))
    lo = max(tau_lo, taus[k] - 2 * coarse_step)
    hi = min(tau_hi, taus[k] + 2 * coarse_step)
    result = minimize_scalar(safe, bounds=(lo, hi), method="bounded",
                             options={"xatol": 1e-12})
    best_tau, best_val = float(result.x), float(result.fun)
    if values[k] < best_val:
        best_tau, best_val = float(taus[k]), float(values[k])
    return best_tau, best_val


def analytic_envelope(xi: np.ndarray) -> np.ndarray:
    """Magnitude of the analytic signal of the mean-subtracted series."""
    xi = np.asarray(xi, dtype=float)
    return np.abs(hilbert(xi - xi.mean()))


def envelope_modulation_ratio(xi: np.ndarray, trim_fraction: float = 0.05) -> float:
    """Max/min ratio of the analytic envelope, edges trimmed against end effects."""
    env = analytic_envelope(xi)
    k = max(1, int(round(trim_fraction * env.size)))
    core = env[k:-k]
    return float(core.max() / core.min())


def fraction_anti_squeezed(series: SqueezingSeries) -> float:
    """Fraction of unflagged samples with xi_S > 1."""
    ok = ~series.flagged
    return float(np.count_nonzero(series.xi_s[ok] > 1.0) / np.count_nonzero(ok))
