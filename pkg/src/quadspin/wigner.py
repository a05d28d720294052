"""Spin Wigner quasi-probability distribution on the sphere.

The distribution is reconstructed from the multipole (spherical-tensor)
expansion of the density matrix,

    W(theta, phi) ~ sum_{k=0}^{2I} sum_{q=-k}^{k} Tr(rho T_kq^dagger) Y_kq(theta, phi),

where the T_kq are the orthonormal irreducible tensor operators with matrix
elements <I m|T_kq|I m'> = sqrt((2k+1)/(2I+1)) <I m'; k q | I m>.  Hermiticity
of rho makes the double sum real; the field is normalized so its quadrature
integral over the sphere is exactly 1, which pins the maximally mixed state at
the uniform value 1/(4 pi).

Clebsch-Gordan coefficients are evaluated with exact integer factorial
arithmetic (spins enter as doubled integers) and rounded once at the end, so
no recursion or cancellation noise enters the basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import sph_harm_y

from .algebra import SpinQuantumNumber
from .states import QuantumState

WIGNER_IMAG_ATOL = 1e-10


def clebsch_gordan(two_j1: int, two_m1: int, two_j2: int, two_m2: int,
                   two_j: int, two_m: int) -> float:
    """<j1 m1; j2 m2 | j m> with all angular momenta passed as doubled integers."""
    return _cg_cached(two_j1, two_m1, two_j2, two_m2, two_j, two_m)


def _half(x: int) -> int:
    # x is an even (possibly negative) doubled value
    return x // 2


@lru_cache(maxsize=None)
def _cg_cached(two_j1, two_m1, two_j2, two_m2, two_j, two_m) -> float:
    if two_m1 + two_m2 != two_m:
        return 0.0
    if (two_j1 + two_j2 + two_j) % 2 != 0:
        return 0.0
    if not abs(two_j1 - two_j2) <= two_j <= two_j1 + two_j2:
        return 0.0
    if abs(two_m1) > two_j1 or abs(two_m2) > two_j2 or abs(two_m) > two_j:
        return 0.0
    if (two_j1 + two_m1) % 2 or (two_j2 + two_m2) % 2 or (two_j + two_m) % 2:
        return 0.0

    pref = Fraction(
        (two_j + 1)
        * factorial(_half(two_j1 + two_j2 - two_j))
        * factorial(_half(two_j1 - two_j2 + two_j))
        * factorial(_half(-two_j1 + two_j2 + two_j)),
        factorial(_half(two_j1 + two_j2 + two_j) + 1),
    )
    pref *= (
        factorial(_half(two_j1 + two_m1)) * factorial(_half(two_j1 - two_m1))
        * factorial(_half(two_j2 + two_m2)) * factorial(_half(two_j2 - two_m2))
        * factorial(_half(two_j + two_m)) * factorial(_half(two_j - two_m))
    )

    t1 = _half(two_j1 + two_j2 - two_j)
    t2 = _half(two_j1 - two_m1)
    t3 = _half(two_j2 + two_m2)
    t4 = _half(two_j - two_j2 + two_m1)
    t5 = _half(two_j - two_j1 - two_m2)
    k_min = max(0, -t4, -t5)
    k_max = min(t1, t2, t3)
    if k_max < k_min:
        return 0.0
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        den = (
            factorial(k) * factorial(t1 - k) * factorial(t2 - k)
            * factorial(t3 - k) * factorial(t4 + k) * factorial(t5 + k)
        )
        total += Fraction(-1 if k % 2 else 1, den)
    if total == 0:
        return 0.0
    magnitude = math.sqrt(float(pref * total * total))
    return magnitude if total > 0 else -magnitude


@lru_cache(maxsize=None)
def _tensor_basis(two_i: int) -> dict:
    spin = SpinQuantumNumber(two_i)
    d = spin.dim
    m = spin.projections()
    basis = {}
    for k in range(0, two_i + 1):
        norm = math.sqrt((2 * k + 1) / d)
        for q in range(-k, k + 1):
            t = np.zeros((d, d), dtype=complex)
            for c in range(d):
                r = c - q  # m_row = m_col + q
                if 0 <= r < d:
                    t[r, c] = norm * clebsch_gordan(
                        two_i, int(round(2 * m[c])), 2 * k, 2 * q,
                        two_i, int(round(2 * m[r])),
                    )
            t.flags.writeable = False
            basis[(k, q)] = t
    return basis


def spherical_tensor_basis(spin: SpinQuantumNumber) -> dict:
    """Orthonormal tensor operators T_kq, keyed by (k, q), memoized per spin."""
    return _tensor_basis(spin.two_i)


@dataclass(frozen=True)
class SphereGrid:
    """Regular latitude/longitude grid with quadrature weights summing to 4 pi."""

    thetas: np.ndarray   # n_theta points, uniform on [0, pi] inclusive
    phis: np.ndarray     # n_phi points, uniform on [0, 2 pi)
    weights: np.ndarray  # (n_theta, n_phi)

    @classmethod
    def regular(cls, n_theta: int = 91, n_phi: int = 180) -> "SphereGrid":
        if n_theta < 2:
            raise ValueError("need n_theta >= 2")
        if n_phi < 4:
            raise ValueError("need n_phi >= 4")
        thetas = np.linspace(0.0, math.pi, n_theta)
        phis = np.arange(n_phi) * (2.0 * math.pi / n_phi)
        w_theta = np.sin(thetas) * (math.pi / (n_theta - 1))
        w_theta[0] *= 0.5
        w_theta[-1] *= 0.5
        weights = np.outer(w_theta, np.full(n_phi, 2.0 * math.pi / n_phi))
        # Rescale so the discrete measure resolves the unit integral exactly.
        weights *= 4.0 * math.pi / weights.sum()
        for a in (thetas, phis, weights):
            a.flags.writeable = False
        return cls(thetas=thetas, phis=phis, weights=weights)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.thetas.size, self.phis.size)


@dataclass(frozen=True)
class WignerField:
    """Real quasi-probability density (1/sr) sampled on a sphere grid."""

    grid: SphereGrid
    values: np.ndarray  # (n_theta, n_phi)

    def integral(self) -> float:
        return float((self.values * self.grid.weights).sum())

    def max_location(self) -> tuple[float, float]:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.grid.thetas[i]), float(self.grid.phis[j])


def wigner_distribution(state: QuantumState, grid: SphereGrid) -> WignerField:
    """Wigner field of a state on the given grid, normalized to unit integral."""
    d = state.dim
    two_i = d - 1
    rho = state.density()
    basis = spherical_tensor_basis(SpinQuantumNumber(two_i))

    w = np.zeros((grid.thetas.size, grid.phis.size), dtype=complex)
    for (k, q), t_op in basis.items():
        moment = complex((rho * t_op.conj()).sum())  # Tr(rho T_kq^dagger)
        if moment == 0:
            continue
        # Y_kq separates: Y_kq(theta, phi) = Y_kq(theta, 0) exp(i q phi).
        col = sph_harm_y(k, q, grid.thetas, 0.0)
        w += moment * np.outer(col, np.exp(1j * q * grid.phis))
    w *= math.sqrt(d / (4.0 * math.pi))

    imag_max = np.abs(w.imag).max()
    if imag_max > WIGNER_IMAG_ATOL:
        raise ValueError(f"Wigner field has imaginary residue {imag_max:.3e}")
    values = w.real
    values = values / float((values * grid.weights).sum())
    values.flags.writeable = False
    return WignerField(grid=grid, values=values)
