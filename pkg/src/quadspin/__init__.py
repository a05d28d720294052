"""Desk-scale squeezing simulations for a single quadrupolar nuclear spin.

Core layers: exact spin algebra, twisting/Zeeman Hamiltonians, coherent-state
construction, unitary and phase-damping evolution, the squeezing metric suite,
and sphere quasi-probability distributions.  The ``quadspin.harness``
subpackage adds configuration files, figure-reproduction scenarios, sweeps,
and the command line.
"""

__version__ = "0.1.0"

from .algebra import (
    EigenDecomposition,
    SpinOperators,
    SpinQuantumNumber,
    commutator,
    expectation,
    expm_unitary,
    hermitian_eig,
    spin_operators,
)
from .dynamics import (
    EvolutionSpec,
    SteadyStateResult,
    Trajectory,
    UnitaryPropagator,
    evolve_lindblad,
    evolve_unitary,
    liouvillian,
    steady_state,
)
from .model import (
    EfgParameters,
    EfgPrincipal,
    StrainDiagonal,
    ZeemanParameters,
    coupling_to_fq,
    efg_from_strain,
    mat_hamiltonian,
    oat_hamiltonian,
    tac_hamiltonian,
    total_hamiltonian,
    zeeman_hamiltonian,
)
from .metrics import (
    BandStatistics,
    DutyCycle,
    SpeedBound,
    SqueezingRecord,
    SqueezingSeries,
    band_statistics,
    duty_cycle,
    first_revival_time,
    rate_map,
    speed_bound,
    squeezing_parameter,
    squeezing_rate,
    trajectory_metrics,
)
from .states import (
    BlochDirection,
    QuantumState,
    amplitudes,
    css,
    purity,
    rotate_quadrature_basis,
    to_density,
)
from .wigner import (
    SphereGrid,
    WignerField,
    clebsch_gordan,
    spherical_tensor_basis,
    wigner_distribution,
)
