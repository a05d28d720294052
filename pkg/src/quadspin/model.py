"""Hamiltonian constructors and field-gradient conventions.

Unit convention: hbar = 1 throughout, so every Hamiltonian returned here is an
angular-frequency matrix in rad/s.  The quadrupole strength enters through the
linear frequency f_Q (Hz); time series are reported externally on the
dimensionless axis tau = f_Q * t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SpinQuantumNumber, spin_operators
from .errors import DegenerateEfgError, DimensionMismatchError, SpinTooSmallError
from .states import BlochDirection


@dataclass(frozen=True)
class EfgParameters:
    """Electric-field-gradient coupling: linear frequency f_q (Hz), biaxiality eta."""

    f_q: float
    eta: float = 0.0

    def __post_init__(self):
        if not self.f_q > 0:
            raise ValueError(f"f_q must be positive, got {self.f_q}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class ZeemanParameters:
    """Static field: Larmor linear frequency omega0/2pi (Hz) and orientation."""

    larmor_frequency: float
    direction: BlochDirection

    def __post_init__(self):
        if self.larmor_frequency < 0:
            raise ValueError(f"larmor_frequency must be >= 0, got {self.larmor_frequency}")


@dataclass(frozen=True)
class StrainDiagonal:
    """Diagonal strain components and the gradient-elastic coefficient S11."""

    eps_xx: float
    eps_yy: float
    eps_zz: float
    s11: float = 1.0


@dataclass(frozen=True)
class EfgPrincipal:
    """Principal field-gradient values after relabeling |V_xx| <= |V_yy| <= |V_zz|."""

    v_xx: float
    v_yy: float
    v_zz: float
    eta: float
    permutation: tuple[int, int, int]  # positions of the relabeled axes in the input


def _require_quadrupolar(spin: SpinQuantumNumber):
    if spin.two_i < 2:
        raise SpinTooSmallError(
            f"I = {spin} has no quadrupole coupling; need I >= 1"
        )


def mat_hamiltonian(spin: SpinQuantumNumber, efg: EfgParameters) -> np.ndarray:
    """Biaxial quadrupole (mixed-axis twisting) Hamiltonian.

    H/hbar = (2 pi f_q / 6) [3 Iz^2 + eta (I+^2 + I-^2)/2]; the constant I^2
    term is dropped.  eta = 0 is pure one-axis twisting about z, eta = 1 is
    pure two-axis countertwisting about z and y.
    """
    _require_quadrupolar(spin)
    ops = spin_operators(spin)
    diag = (math.pi * efg.f_q) * (ops.iz @ ops.iz)
    ladder = (math.pi * efg.f_q / 6.0) * (ops.iplus @ ops.iplus + ops.iminus @ ops.iminus)
    return diag + efg.eta * ladder


def oat_hamiltonian(spin: SpinQuantumNumber, chi: float) -> np.ndarray:
    """One-axis twisting H/hbar = chi * Iz^2 (chi in rad/s)."""
    ops = spin_operators(spin)
    return chi * (ops.iz @ ops.iz)


def tac_hamiltonian(spin: SpinQuantumNumber, chi: float) -> np.ndarray:
    """Two-axis countertwisting H/hbar = chi (Ix^2 - Iy^2) = chi (I+^2 + I-^2)/2."""
    ops = spin_operators(spin)
    return chi * (ops.iplus @ ops.iplus + ops.iminus @ ops.iminus) / 2.0


def zeeman_hamiltonian(spin: SpinQuantumNumber, zeeman: ZeemanParameters) -> np.ndarray:
    """H/hbar = -omega0 (Ix sin(t)cos(p) + Iy sin(t)sin(p) + Iz cos(t))."""
    ops = spin_operators(spin)
    omega0 = 2.0 * math.pi * zeeman.larmor_frequency
    n = zeeman.direction.unit_vector()
    return -omega0 * (n[0] * ops.ix + n[1] * ops.iy + n[2] * ops.iz)


def total_hamiltonian(parts: list[np.ndarray]) -> np.ndarray:
    """Entrywise sum of same-dimension Hamiltonian terms."""
    if not parts:
        raise ValueError("need at least one Hamiltonian term")
    shape = np.asarray(parts[0]).shape
    total = np.zeros(shape, dtype=complex)
    for p in parts:
        p = np.asarray(p)
        if p.shape != shape:
            raise DimensionMismatchError(f"term shape {p.shape} != {shape}")
        total = total + p
    return total


def coupling_to_fq(e2qq_over_h: float, spin: SpinQuantumNumber) -> float:
    """Linear quadrupolar frequency f_q = 3 (e^2 q Q / h) / [2 I (2I - 1)]."""
    _require_quadrupolar(spin)
    i = spin.i
    return 3.0 * e2qq_over_h / (2.0 * i * (2.0 * i - 1.0))


def efg_from_strain(strain: StrainDiagonal) -> EfgPrincipal:
    """Principal field-gradient values from diagonal strain.

    V_ii = S11 [eps_ii - (eps_jj + eps_kk)/2] for cyclic (i, j, k); the axes
    are then relabeled so |V_xx| <= |V_yy| <= |V_zz| and the biaxiality
    eta = (V_xx - V_yy)/V_zz is reported.  The construction is trace-free, so
    eta always lands in [0, 1].
    """
    e = (strain.eps_xx, strain.eps_yy, strain.eps_zz)
    raw = np.array([
        strain.s11 * (e[0] - (e[1] + e[2]) / 2.0),
        strain.s11 * (e[1] - (e[2] + e[0]) / 2.0),
        strain.s11 * (e[2] - (e[0] + e[1]) / 2.0),
    ])
    order = np.argsort(np.abs(raw), kind="stable")
    v = raw[order]
    if v[2] == 0.0:
        raise DegenerateEfgError("all principal values vanish (isotropic strain)")
    eta = (v[0] - v[1]) / v[2]
    # Trace-free algebra guarantees eta in [0, 1]; shave off rounding spill.
    if -1e-12 < eta < 0.0:
        eta = 0.0
    elif 1.0 < eta < 1.0 + 1e-12:
        eta = 1.0
    return EfgPrincipal(
        v_xx=float(v[0]), v_yy=float(v[1]), v_zz=float(v[2]),
        eta=float(eta), permutation=tuple(int(k) for k in order),
    )
