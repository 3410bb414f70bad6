"""qsvlab: a numerical laboratory for cut-and-choose quantum state verification.

The package splits into dense quantum-information kernels (`kernels`), the
abort-sector state algebra (`states`), the exact protocol engine
(`protocol`), attack constructors (`attacks`), security evaluation
(`security`), closed-form trade-off bounds (`bounds`), and a brute-force
verification battery (`oracle`). The `cli` module drives experiments from
the command line.
"""

from .attacks import (
    AttackRecipe,
    iid_composable_attack,
    iid_standalone_attack,
    naive_attack,
    support_complement_direction,
)
from .bounds import (
    canonical_security_values,
    composable_attack_floor,
    composable_bound,
    iid_copies_distance,
    iid_copies_distance_bound,
    separable_attack_floor,
    standalone_attack_floor,
    standalone_bound,
    variable_round_bounds,
)
from .kernels import (
    DEFAULT_TOL,
    BinaryMeasurement,
    DensityOperator,
    PureState,
    Tolerances,
    direct_sum,
    distinguishing_advantage,
    fidelity,
    fidelity_psd,
    helstrom_measurement,
    orthogonal_pure_state,
    rotate_overlap,
    tensor,
    tensor_all,
    tensor_power,
    trace_distance,
    trace_norm,
)
from .oracle import (
    CheckResult,
    OracleConfig,
    available_checks,
    entangled_attack_sweep,
    exact_multicopy_distance,
    grid_max_ideal_p,
    haar_random_pure,
    inequality_sweep,
    random_density,
    random_measurement,
    run_check,
    run_checks,
)
from .protocol import (
    Attack,
    EntangledAttack,
    FixedProtocol,
    HonestSource,
    IIDAttack,
    SeparableAttack,
    VariableProtocol,
    accept_prob,
    canonical_protocol,
    canonical_variable_protocol,
    point_mass_rounds,
    run_fixed,
    run_variable,
    truncated_geometric_rounds,
    uniform_rounds,
)
from .security import (
    CrossoverRow,
    SecurityReport,
    crossover_scan,
    evaluate_composable,
    evaluate_standalone,
)
from .states import (
    AbortingState,
    OptimizedValue,
    TargetState,
    composable_distance_dishonest,
    composable_distance_honest,
    mix,
    standalone_fidelity_dishonest,
    standalone_fidelity_honest,
)

__version__ = "0.1.0"
