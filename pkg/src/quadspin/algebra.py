"""Spin operators for arbitrary I and the dense Hermitian linear algebra they need.

Operators are plain complex ndarrays in the |I, m> basis ordered m = I, I-1,
..., -I (descending).  That ordering is fixed globally: every module and every
file written by the harness uses it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError

#: Relative tolerance (in the operator's own max-norm scale) for treating a
#: matrix as Hermitian.
HERMITICITY_RTOL = 1e-10


@dataclass(frozen=True)
class SpinQuantumNumber:
    """Spin I stored as the integer 2I so half-integer spins stay exact."""

    two_i: int

    def __post_init__(self):
        if not isinstance(self.two_i, (int, np.integer)) or self.two_i < 1:
            raise ValueError(f"two_i must be a positive integer, got {self.two_i!r}")

    @property
    def i(self) -> float:
        return self.two_i / 2.0

    @property
    def dim(self) -> int:
        return self.two_i + 1

    def projections(self) -> np.ndarray:
        """m values in basis order I, I-1, ..., -I."""
        return self.i - np.arange(self.dim)

    def __str__(self):
        return f"{self.two_i}/2" if self.two_i % 2 else str(self.two_i // 2)


class SpinOperators(NamedTuple):
    ix: np.ndarray
    iy: np.ndarray
    iz: np.ndarray
    iplus: np.ndarray
    iminus: np.ndarray
    isq: np.ndarray


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def _spin_operators(two_i: int) -> SpinOperators:
    spin = SpinQuantumNumber(two_i)
    i, d = spin.i, spin.dim
    m = spin.projections()
    iz = np.diag(m).astype(complex)
    iplus = np.zeros((d, d), dtype=complex)
    for r in range(d - 1):
        mm = m[r + 1]  # I+ |I, m> -> sqrt(I(I+1) - m(m+1)) |I, m+1>
        iplus[r, r + 1] = np.sqrt(i * (i + 1) - mm * (mm + 1))
    iminus = iplus.conj().T
    ix = (iplus + iminus) / 2.0
    iy = (iplus - iminus) / 2.0j
    isq = ix @ ix + iy @ iy + iz @ iz
    return SpinOperators(*(_readonly(a) for a in (ix, iy, iz, iplus, iminus, isq)))


def spin_operators(spin: SpinQuantumNumber) -> SpinOperators:
    """Ix, Iy, Iz, I+, I-, I^2 for the given spin (memoized, read-only arrays)."""
    return _spin_operators(spin.two_i)


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray   # ascending, real
    eigenvectors: np.ndarray  # unitary, columns


def require_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def require_hermitian(a, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """Return ``a`` as a complex array after checking A = A^dagger.

    The deviation is measured entrywise against the matrix's own max-norm, so
    the check is scale free.  Raises :class:`NotHermitianError` on failure.
    """
    a = require_square(a)
    scale = np.abs(a).max()
    deviation = np.abs(a - a.conj().T).max()
    if deviation > rtol * scale:
        raise NotHermitianError(
            f"max |A - A^dagger| = {deviation:.3e} exceeds {rtol:.1e} * {scale:.3e}"
        )
    return a


def hermitian_eig(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    a = require_hermitian(a)
    w, v = np.linalg.eigh(a)
    return EigenDecomposition(w, v)


def expm_unitary(h, t: float) -> np.ndarray:
    """U = exp(-i H t) built from the eigendecomposition of Hermitian ``h``.

    Unitary by construction; ``h`` is an angular-frequency matrix (hbar = 1)
    and ``t`` is in seconds.
    """
    w, v = hermitian_eig(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def expectation(a, state) -> complex:
    """<A> for a state vector (1-D array) or a density matrix (2-D array)."""
    a = require_square(a)
    s = np.asarray(state, dtype=complex)
    if s.ndim == 1:
        if a.shape[0] != s.size:
            raise DimensionMismatchError(
                f"operator dim {a.shape[0]} vs state dim {s.size}"
            )
        return complex(np.vdot(s, a @ s))
    if s.ndim == 2:
        if a.shape != s.shape:
            raise DimensionMismatchError(
                f"operator shape {a.shape} vs density-matrix shape {s.shape}"
            )
        return complex(np.einsum("ij,ji->", s, a))
    raise DimensionMismatchError(f"state must be 1-D or 2-D, got ndim={s.ndim}")


def commutator(a, b) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b) - np.asarray(b) @ np.asarray(a)


def anticommutator(a, b) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b) + np.asarray(b) @ np.asarray(a)
