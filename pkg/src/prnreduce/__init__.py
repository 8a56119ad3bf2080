"""Goal-oriented reduction of parametric regulatory networks."""

from .cover import (
    RegulationCoverSet,
    ValueChange,
    compute_cover_set,
    format_partial,
    spec_count,
    verify_cover_set,
)
from .dynamics import (
    BudgetExceeded,
    Objective,
    SearchMode,
    Trace,
    TraceError,
    enumerate_minimal_traces,
    objective_valid,
    reachable,
    trace_realisable,
)
from .modelfile import Model, ParseError, load_model, parse_model, print_model
from .network import PRN, ModelError, Transition, all_transitions, regulator_states, validate_model
from .parametrisation import (
    CapExceeded,
    ParametrisationLattice,
    ParametrisationSet,
    enabled_by_lattice,
    enumerate_parametrisations,
    initial_lattice,
    lattice_of,
    psi_abstract,
    psi_concrete,
    restrict_lattice,
    satisfies_constraints,
)
from .reduction import DPRN, ReductionResult, preservation_check, reduce, run_reduction

__version__ = "0.1.0"
