"""Classical surrogates of parametrized quantum circuits.

Two surrogate constructions over the same lattice oracle: Taylor models from
arbitrary-order shift-rule derivatives at the origin, and kernel interpolants
on low-support lattice nodes that are exact orthogonal projections onto the
trigonometric space the circuit function lives in.
"""

from .errors import (
    ConditioningWarning,
    NumericError,
    SizeError,
    ValidationError,
)
from .experiments import (
    BenchmarkSpec,
    CurveSpec,
    MCResult,
    ScanRow,
    build_benchmark_circuit,
    curve_point,
    enrich_nodes_second_center,
    mc_relative_l2,
    scan_curve,
)
from .grid import GridPoint
from .io import (
    format_circuit_text,
    format_observable_text,
    load_surrogate,
    parse_circuit_text,
    parse_observable_text,
    save_surrogate,
    write_mc_csv,
    write_scan_csv,
)
from .kernel import (
    KernelSpace,
    KernelSurrogate,
    build_kernel_surrogate,
    eval_kernel_surrogate,
    grid_nodes,
    interpolate_on_nodes,
    kernel_sample_bound,
    kernel_scaled,
    kernel_unscaled,
    pi_node_reduction_check,
    reconstruct_exact,
    unscaled_factor,
)
from .multiindex import (
    count_multiindices,
    distinct_shift_points,
    enumerate_multiindices,
    shift_assignments,
    shift_point,
    sign_product,
)
from .pauli import Observable, PauliString, decompose_dense, one_norm
from .simulator import (
    EvaluationCache,
    FixedGate,
    GridOracle,
    ParametrizedCircuit,
    RotationGate,
    cnot,
    custom,
    expectation,
    f_eval,
    f_eval_many,
    fixed,
    oracle_eval,
    rp,
    rx,
    ry,
    rz,
    simulate,
)
from .taylor import (
    TaylorSurrogate,
    build_taylor,
    eval_taylor,
    partial_at_zero,
    taylor_error_bound,
    taylor_sample_bound,
)

__version__ = "0.1.0"
