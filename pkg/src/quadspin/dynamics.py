"""Time evolution: closed-system propagation and phase-damping master equation.

The master equation integrated here is

    d rho / dt = -i [H, rho] + W (Iz rho Iz - {Iz^2, rho}/2)      (hbar = 1)

with a fixed dephasing axis Iz and rate W in rad/s.  Three integrators are
available:

``eigenpropagator``
    For unitary runs, exact eigenbasis phases.  For open runs, one matrix
    exponential of the (time-independent) Liouvillian per uniform sample step,
    then repeated application; exact at the sample points up to the accuracy
    of ``scipy.linalg.expm``.  This is the only practical choice for the long
    steady-state horizons.
``rk45``
    Adaptive Dormand-Prince via ``scipy.integrate.solve_ivp`` with dense
    output onto the sample grid (rtol from the spec, atol 1e-12).
``rk4``
    Fixed-step classic Runge-Kutta, the deterministic regression fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .algebra import SpinQuantumNumber, hermitian_eig, require_hermitian, spin_operators
from .errors import IntegratorDivergedError
from .metrics import squeezing_parameter
from .states import QuantumState

INTEGRATORS = ("eigenpropagator", "rk4", "rk45")

TRACE_ATOL = 1e-9
HERM_ATOL = 1e-9
PSD_ATOL = 1e-7


@dataclass(frozen=True)
class EvolutionSpec:
    """What to evolve under and how to sample it.

    ``hamiltonian`` is an angular-frequency matrix (rad/s), ``dephasing_rate``
    is W in rad/s (0 switches the dissipator off), times are seconds.
    ``rk4_substep`` bounds the fixed step of the rk4 integrator; it defaults
    to a quarter of the sample step.
    """

    hamiltonian: np.ndarray
    t_max: float
    dt_sample: float
    dephasing_rate: float = 0.0
    integrator: str = "rk45"
    rk_tolerance: float = 1e-9
    rk4_substep: float | None = None

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.dt_sample <= 0:
            raise ValueError(f"dt_sample must be positive, got {self.dt_sample}")
        if self.dephasing_rate < 0:
            raise ValueError(f"dephasing_rate must be >= 0, got {self.dephasing_rate}")
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}")

    def sample_times(self) -> np.ndarray:
        n = int(math.floor(self.t_max / self.dt_sample + 1e-9)) + 1
        return np.arange(n) * self.dt_sample


@dataclass(frozen=True)
class Trajectory:
    """States on a uniform time grid; pure (vectors) or mixed (densities)."""

    times: np.ndarray
    vector_array: np.ndarray | None = None   # (n, d) complex
    density_array: np.ndarray | None = None  # (n, d, d) complex

    def __len__(self) -> int:
        return self.times.size

    @property
    def pure(self) -> bool:
        return self.vector_array is not None

    @property
    def dim(self) -> int:
        if self.pure:
            return self.vector_array.shape[1]
        return self.density_array.shape[1]

    def state(self, k: int) -> QuantumState:
        if self.pure:
            return QuantumState.pure(self.vector_array[k], validate=False)
        return QuantumState.mixed(self.density_array[k], validate=False)

    @property
    def states(self) -> list[QuantumState]:
        return [self.state(k) for k in range(len(self))]


class UnitaryPropagator:
    """exp(-i H t) applied to a fixed initial vector, evaluable at any t."""

    def __init__(self, hamiltonian, initial_vector):
        w, v = hermitian_eig(hamiltonian)
        self._w = w
        self._v = v
        self._c0 = v.conj().T @ np.asarray(initial_vector, dtype=complex)

    def state_at(self, t: float) -> np.ndarray:
        return self._v @ (np.exp(-1j * self._w * t) * self._c0)

    def batch(self, times: np.ndarray) -> np.ndarray:
        phases = np.exp(-1j * np.outer(np.asarray(times), self._w))
        return (phases * self._c0) @ self._v.T  # (n, d) vectors


def evolve_unitary(initial: QuantumState, spec: EvolutionSpec) -> Trajectory:
    """Closed-system evolution of a pure state via the eigenpropagator."""
    if spec.dephasing_rate != 0.0:
        raise ValueError("unitary evolution requires dephasing_rate = 0")
    prop = UnitaryPropagator(spec.hamiltonian, initial.vector)
    times = spec.sample_times()
    vectors = prop.batch(times)
    norms = np.linalg.norm(vectors, axis=1)
    if np.abs(norms - 1.0).max() > 1e-10:
        raise IntegratorDivergedError("norm drift exceeded 1e-10")
    vectors.flags.writeable = False
    return Trajectory(times=times, vector_array=vectors)


def _iz_diag(dim: int) -> np.ndarray:
    return spin_operators(SpinQuantumNumber(dim - 1)).iz.diagonal().real


def liouvillian(hamiltonian, dephasing_rate: float) -> np.ndarray:
    """Dense matrix of the generator acting on row-major vec(rho)."""
    h = require_hermitian(hamiltonian)
    d = h.shape[0]
    eye = np.eye(d)
    lv = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    if dephasing_rate:
        m = _iz_diag(d)
        iz = np.diag(m)
        izsq = np.diag(m * m)
        lv = lv + dephasing_rate * (
            np.kron(iz, iz)
            - 0.5 * (np.kron(izsq, eye) + np.kron(eye, izsq))
        )
    return lv


def _lindblad_rhs(h, w_phi, dim):
    # Iz is diagonal, so the dissipator acts entrywise:
    # (Iz rho Iz - {Iz^2, rho}/2)_{ab} = -(m_a - m_b)^2 / 2 * rho_{ab}.
    m = _iz_diag(dim)
    damp = -0.5 * w_phi * (m[:, None] - m[None, :]) ** 2

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        drho = -1j * (h @ rho - rho @ h) + damp * rho
        return drho.reshape(-1)

    return rhs


def _integrate_rk45(h, w_phi, rho0, times, rtol):
    rhs = _lindblad_rhs(h, w_phi, rho0.shape[0])
    sol = solve_ivp(
        rhs, (times[0], times[-1]), rho0.reshape(-1),
        method="RK45", t_eval=times, rtol=rtol, atol=1e-12,
    )
    if not sol.success:
        raise IntegratorDivergedError(f"rk45: {sol.message}")
    d = rho0.shape[0]
    return sol.y.T.reshape(-1, d, d)


def _integrate_rk4(h, w_phi, rho0, times, substep):
    rhs = _lindblad_rhs(h, w_phi, rho0.shape[0])
    dt = times[1] - times[0] if times.size > 1 else substep
    n_sub = max(1, int(math.ceil(dt / substep - 1e-12)))
    hstep = dt / n_sub
    out = np.empty((times.size,) + rho0.shape, dtype=complex)
    out[0] = rho0
    y = rho0.reshape(-1).astype(complex)
    t = 0.0
    for k in range(1, times.size):
        for _ in range(n_sub):
            k1 = rhs(t, y)
            k2 = rhs(t + hstep / 2, y + hstep / 2 * k1)
            k3 = rhs(t + hstep / 2, y + hstep / 2 * k2)
            k4 = rhs(t + hstep, y + hstep * k3)
            y = y + (hstep / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += hstep
        out[k] = y.reshape(rho0.shape)
    return out


def _integrate_expm(h, w_phi, rho0, times):
    lv = liouvillian(h, w_phi)
    dt = times[1] - times[0] if times.size > 1 else times[0]
    step = expm(lv * dt)
    out = np.empty((times.size,) + rho0.shape, dtype=complex)
    out[0] = rho0
    y = rho0.reshape(-1).astype(complex)
    for k in range(1, times.size):
        y = step @ y
        out[k] = y.reshape(rho0.shape)
    return out


def _validate_densities(rhos, times):
    traces = np.einsum("tii->t", rhos).real
    drift = np.abs(traces - 1.0).max()
    if drift > TRACE_ATOL:
        raise IntegratorDivergedError(f"trace drift {drift:.3e} exceeds {TRACE_ATOL}")
    herm = np.abs(rhos - rhos.conj().transpose(0, 2, 1)).max()
    if herm > HERM_ATOL:
        raise IntegratorDivergedError(f"Hermiticity defect {herm:.3e} exceeds {HERM_ATOL}")
    wmin = np.linalg.eigvalsh((rhos + rhos.conj().transpose(0, 2, 1)) / 2).min()
    if wmin < -PSD_ATOL:
        raise IntegratorDivergedError(f"negative eigenvalue {wmin:.3e} below -{PSD_ATOL}")


def evolve_lindblad(initial: QuantumState, spec: EvolutionSpec) -> Trajectory:
    """Phase-damping master-equation evolution sampled on a uniform grid.

    With ``dephasing_rate = 0`` this reduces to unitary evolution in
    density-matrix form.  Trace, Hermiticity and positivity are checked at
    every sample; violations raise :class:`IntegratorDivergedError`.
    """
    h = require_hermitian(spec.hamiltonian)
    rho0 = initial.density()
    times = spec.sample_times()
    w = spec.dephasing_rate
    if spec.integrator == "rk45":
        rhos = _integrate_rk45(h, w, rho0, times, spec.rk_tolerance)
    elif spec.integrator == "rk4":
        substep = spec.rk4_substep or spec.dt_sample / 4.0
        rhos = _integrate_rk4(h, w, rho0, times, substep)
    else:
        rhos = _integrate_expm(h, w, rho0, times)
    _validate_densities(rhos, times)
    rhos.flags.writeable = False
    return Trajectory(times=times, density_array=rhos)


@dataclass(frozen=True)
class SteadyStateResult:
    state: QuantumState
    converged: bool
    converged_at: float | None  # seconds; None when t_max was hit first
    record: object              # SqueezingRecord of the terminal state

    @property
    def xi_s(self) -> float:
        return self.record.xi_s


def steady_state(initial: QuantumState, spec: EvolutionSpec) -> SteadyStateResult:
    """Integrate until the state stops changing between comparison windows.

    The state is propagated on the ``dt_sample`` grid; every window of
    ``10 / dephasing_rate`` seconds the current density matrix is compared
    with the one a full window earlier, and the run stops once the Frobenius
    distance falls below 1e-8 (converged) or ``t_max`` is reached
    (``converged = False``, terminal state returned regardless).
    """
    if spec.dephasing_rate <= 0:
        raise ValueError("steady_state requires dephasing_rate > 0")
    h = require_hermitian(spec.hamiltonian)
    w = spec.dephasing_rate
    d = h.shape[0]
    spin = SpinQuantumNumber(d - 1)
    window = 10.0 / w
    steps_per_window = max(1, int(math.ceil(window / spec.dt_sample - 1e-12)))
    n_max = int(math.floor(spec.t_max / spec.dt_sample + 1e-9))

    rho = initial.density().astype(complex)
    if spec.integrator == "eigenpropagator":
        step_op = expm(liouvillian(h, w) * spec.dt_sample)

        def advance(rho, t0, n_steps):
            y = rho.reshape(-1)
            for _ in range(n_steps):
                y = step_op @ y
            return y.reshape(d, d)
    else:
        def advance(rho, t0, n_steps):
            times = t0 + np.arange(n_steps + 1) * spec.dt_sample
            if spec.integrator == "rk45":
                return _integrate_rk45(h, w, rho, times, spec.rk_tolerance)[-1]
            substep = spec.rk4_substep or spec.dt_sample / 4.0
            return _integrate_rk4(h, w, rho, times - times[0], substep)[-1]

    converged = False
    converged_at = None
    previous = rho
    steps_done = 0
    while steps_done < n_max:
        n_steps = min(steps_per_window, n_max - steps_done)
        rho = advance(rho, steps_done * spec.dt_sample, n_steps)
        steps_done += n_steps
        if n_steps == steps_per_window:
            if np.linalg.norm(rho - previous) < 1e-8:
                converged = True
                converged_at = steps_done * spec.dt_sample
                break
            previous = rho

    t_final = steps_done * spec.dt_sample
    state = QuantumState.mixed(rho, herm_atol=HERM_ATOL, trace_atol=TRACE_ATOL,
                               psd_atol=PSD_ATOL)
    record = squeezing_parameter(state, spin, t=t_final)
    return SteadyStateResult(state=state, converged=converged,
                             converged_at=converged_at, record=record)


def stationary_states(hamiltonian, dephasing_rate: float,
                      tol: float = 1e-9) -> list[np.ndarray]:
    """Null space of the Liouvillian as Hermitian, trace-normalized matrices.

    Cross-check utility; the production path reproduces the transient by
    integration instead.  Kernel directions with zero trace are returned
    Hermitized but unnormalized.
    """
    lv = liouvillian(hamiltonian, dephasing_rate)
    d = int(round(math.sqrt(lv.shape[0])))
    w, v = np.linalg.eig(lv)
    scale = np.abs(w).max()
    kernel = [v[:, k].reshape(d, d) for k in np.nonzero(np.abs(w) <= tol * scale)[0]]
    out = []
    for x in kernel:
        x = (x + x.conj().T) / 2.0
        tr = np.trace(x).real
        if abs(tr) > 1e-12:
            x = x / tr
        out.append(x)
    return out
