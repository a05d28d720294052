"""Coherent spin states, pure/mixed state handling, projection amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    SpinQuantumNumber,
    expectation,
    expm_unitary,
    hermitian_eig,
    spin_operators,
)
from .errors import DimensionMismatchError, MixedStateUnsupportedError

PURE_NORM_ATOL = 1e-10
MIXED_HERM_ATOL = 1e-10
MIXED_TRACE_ATOL = 1e-10
MIXED_PSD_ATOL = 1e-9


@dataclass(frozen=True)
class BlochDirection:
    """Polar/azimuthal direction on the Bloch sphere, radians."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")

    def unit_vector(self) -> np.ndarray:
        st, ct = math.sin(self.theta), math.cos(self.theta)
        sp, cp = math.sin(self.phi), math.cos(self.phi)
        return np.array([st * cp, st * sp, ct])

    def transverse_axes(self) -> tuple[np.ndarray, np.ndarray]:
        """The two unit vectors spanning the plane perpendicular to this one.

        Axis 1 is (-sin(phi), cos(phi), 0) and axis 2 is
        (-cos(theta)cos(phi), -cos(theta)sin(phi), sin(theta)); together with
        the direction itself they form a right-handed triad.
        """
        st, ct = math.sin(self.theta), math.cos(self.theta)
        sp, cp = math.sin(self.phi), math.cos(self.phi)
        u1 = np.array([-sp, cp, 0.0])
        u2 = np.array([-ct * cp, -ct * sp, st])
        return u1, u2


class QuantumState:
    """A pure state vector or a density matrix of a single spin.

    Amplitudes follow the global basis order m = I, ..., -I.  Instances are
    immutable; the underlying arrays are read-only.
    """

    __slots__ = ("_vector", "_rho")

    def __init__(self, *, _vector=None, _rho=None):
        self._vector = _vector
        self._rho = _rho

    @classmethod
    def pure(cls, amplitudes, *, validate: bool = True,
             norm_atol: float = PURE_NORM_ATOL) -> "QuantumState":
        vec = np.array(amplitudes, dtype=complex).reshape(-1)
        if validate:
            norm = np.linalg.norm(vec)
            if abs(norm - 1.0) > norm_atol:
                raise ValueError(f"pure state norm {norm} deviates from 1 "
                                 f"by more than {norm_atol}")
        vec.flags.writeable = False
        return cls(_vector=vec)

    @classmethod
    def mixed(cls, rho, *, validate: bool = True,
              herm_atol: float = MIXED_HERM_ATOL,
              trace_atol: float = MIXED_TRACE_ATOL,
              psd_atol: float = MIXED_PSD_ATOL) -> "QuantumState":
        rho = np.array(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got {rho.shape}")
        if validate:
            herm = np.abs(rho - rho.conj().T).max()
            if herm > herm_atol:
                raise ValueError(f"density matrix Hermiticity defect {herm:.3e}")
            tr = np.trace(rho)
            if abs(tr - 1.0) > trace_atol:
                raise ValueError(f"density matrix trace {tr} deviates from 1")
            wmin = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min()
            if wmin < -psd_atol:
                raise ValueError(f"density matrix has eigenvalue {wmin:.3e} < -{psd_atol}")
        rho.flags.writeable = False
        return cls(_rho=rho)

    @property
    def is_pure(self) -> bool:
        return self._vector is not None

    @property
    def dim(self) -> int:
        return self._vector.size if self.is_pure else self._rho.shape[0]

    @property
    def vector(self) -> np.ndarray:
        if not self.is_pure:
            raise MixedStateUnsupportedError("state has no amplitude vector")
        return self._vector

    def density(self) -> np.ndarray:
        """The density matrix (|psi><psi| for pure states)."""
        if self.is_pure:
            return np.outer(self._vector, self._vector.conj())
        return self._rho

    def purity(self) -> float:
        if self.is_pure:
            return 1.0
        return float(np.einsum("ij,ji->", self._rho, self._rho).real)

    def expect(self, op) -> complex:
        return expectation(op, self._vector if self.is_pure else self._rho)

    def fidelity_with(self, other: "QuantumState") -> float:
        """|<a|b>| for two pure states (global-phase insensitive)."""
        return float(abs(np.vdot(self.vector, other.vector)))


def css(spin: SpinQuantumNumber, direction: BlochDirection) -> QuantumState:
    """Coherent spin state along ``direction``.

    Built by rotating the highest-weight state |I, +I> with
    exp(-i phi Iz) exp(-i theta Iy), which pins <I> = I * n(theta, phi).
    """
    ops = spin_operators(spin)
    e_top = np.zeros(spin.dim, dtype=complex)
    e_top[0] = 1.0
    vec = expm_unitary(ops.iz, direction.phi) @ (
        expm_unitary(ops.iy, direction.theta) @ e_top
    )
    return QuantumState.pure(vec, validate=False)


def amplitudes(state: QuantumState) -> list[tuple[float, float]]:
    """(m, |C_m|^2) pairs in basis order; pure states only."""
    if not state.is_pure:
        raise MixedStateUnsupportedError(
            "projection amplitudes are defined for pure states; "
            "use the diagonal of the density matrix for populations"
        )
    i = (state.dim - 1) / 2.0
    probs = np.abs(state.vector) ** 2
    return [(i - k, float(p)) for k, p in enumerate(probs)]


def to_density(state: QuantumState) -> QuantumState:
    return QuantumState.mixed(state.density(), validate=False)


def purity(state: QuantumState) -> float:
    return state.purity()


def rotate_quadrature_basis(state: QuantumState, mean_dir: BlochDirection,
                            angle: float) -> list[tuple[float, float]]:
    """Probabilities of ``state`` in the eigenbasis of a transverse quadrature.

    The quadrature operator is I1*sin(angle) + I2*cos(angle) where (I1, I2)
    are the spin components along ``mean_dir.transverse_axes()``.  Its
    spectrum is m = I, ..., -I; the output pairs each m (descending) with the
    corresponding projection probability.
    """
    if not state.is_pure:
        raise MixedStateUnsupportedError("quadrature amplitudes need a pure state")
    spin = SpinQuantumNumber(state.dim - 1)
    ops = spin_operators(spin)
    u1, u2 = mean_dir.transverse_axes()
    axis = math.sin(angle) * u1 + math.cos(angle) * u2
    quad = axis[0] * ops.ix + axis[1] * ops.iy + axis[2] * ops.iz
    w, v = hermitian_eig(quad)
    probs = np.abs(v.conj().T @ state.vector) ** 2
    order = np.argsort(w)[::-1]  # descending eigenvalue = basis order m = I..-I
    m = spin.projections()
    return [(float(m[k]), float(probs[j])) for k, j in enumerate(order)]
