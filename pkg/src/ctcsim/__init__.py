"""Quantum circuits threaded through a closed timelike curve.

A single channel (an N-level clock plus a vacuum level marking its absence)
is sent past a loop in time.  If a copy of the system is trapped on the loop
they collide and swap; the trapped copy then free-evolves by the loop delay
before meeting the next input.  The package solves this circuit under the
two standard prescriptions: the Deutsch model, which demands a trapped
density operator consistent with its own history, and postselected
teleportation, which sums the loop out of the circuit and renormalizes.
"""

from .clock import (
    ClockSpec,
    EvolvedClockLabel,
    clock_overlap,
    clock_state,
    embed_clock_operator,
    evolution,
    evolved_clock,
    vacuum_clock,
    vacuum_extend,
)
from .dctc import (
    ConvergenceError,
    DctcClockProbabilities,
    EcpResult,
    FixedPointFamily,
    FixedPointQuery,
    analytic_cv,
    analytic_output,
    cv_map,
    cv_superoperator,
    dctc_clock_probabilities,
    ecp_solve,
    fixed_space,
    is_degenerate_delay,
    output_map,
    winding_weights,
)
from .gates import CircuitSpec, circuit_unitary, swap, vacuum_swap
from .hilbert import (
    basis_state,
    check_density,
    dagger,
    fidelity_pure,
    partial_trace,
    projector,
    random_density,
    tensor,
    trace_distance,
    unitarity_defect,
)
from .pctc import (
    BipartiteState,
    ConstraintParams,
    ForbiddenInitialData,
    PctcObservables,
    RecordExperimentResult,
    pctc_apply,
    pctc_normalization,
    pctc_observables,
    record_experiment,
    reduced_operator,
)
from .sweep import (
    ConfigError,
    RunConfig,
    SweepResult,
    SweepRow,
    parse_config,
    run_sweep,
)
from .verify import CheckResult, available_suites, run_suite

__version__ = "0.1.0"
