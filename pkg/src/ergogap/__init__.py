"""Ergotropic-gap measures of multipartite entanglement for small pure and mixed states."""

from .errors import ErgoError, MismatchFound, NumericalFailure, ValidationError
from .ergotropy import GapEngine, GapReport, all_gaps, ergotropy, k_gap, passive_energy
from .locc import complete_measure_check, majorization_check, monotonicity_probe
from .measures import (
    concurrence,
    concurrence_fill,
    delta_avg,
    delta_fill,
    delta_min,
    delta_volume,
    gmc,
    measure_report,
)
from .model import (
    DensityOperator,
    LocalHamiltonian,
    MixedState,
    Partition,
    StateVector,
    default_hamiltonian,
    validate_density,
    validate_hamiltonian,
    validate_mixed,
    validate_state,
)
from .partitions import bipartitions, k_partitions, refinements
from .roof import RoofEstimate, roof_upper_bound
from .states import SchmidtParams, build_schmidt, closed_form_gaps, named_state

__version__ = "0.1.0"
