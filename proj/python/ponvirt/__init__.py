"""VM and cloudlet placement for IoT over PON (bindings to the C++ core)."""

from ._core import (
    PonvirtError,
    PowerReport,
    TopologyConfig,
    ModelParams,
    NetworkInstance,
    build_instance,
    read_instance_csv,
    solve_exact,
    run_eepiv,
    model_counts,
    export_model,
    validate_solution_file,
    run_sweep,
)

__all__ = [
    "PonvirtError",
    "PowerReport",
    "TopologyConfig",
    "ModelParams",
    "NetworkInstance",
    "build_instance",
    "read_instance_csv",
    "solve_exact",
    "run_eepiv",
    "model_counts",
    "export_model",
    "validate_solution_file",
    "run_sweep",
]
