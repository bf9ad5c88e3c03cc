"""feller-kit: semigroup/resolvent numerics and a regularity battery.

Build Markov semigroups and resolvents on discretized state spaces from
rate matrices or explicit kernels, reconstruct the semigroup from
resolvents through the alternating inverse-Laplace series with
compensated summation, and audit the standard regularity conditions
with an executable check battery.
"""

from .feller_battery import (
    BatteryConfig,
    CheckResult,
    CHECK_IDS,
    FellerReport,
    make_probes,
    run_battery,
)
from .inversion import (
    CancellationError,
    InversionConfig,
    InversionResult,
    SweepRow,
    inversion_apply,
    inversion_convergence_sweep,
)
from .operators import (
    Generator,
    KernelSemigroup,
    OperatorFamily,
    QuadratureResult,
    commutation_residual,
    expm,
    resolvent_apply_exact,
    resolvent_apply_quadrature,
    resolvent_identity_residual,
    semigroup_apply,
    semigroup_law_residual,
)
from .process_catalog import (
    CatalogEntry,
    ENTRY_NAMES,
    build_entry,
    list_entries,
    make_birth_death,
    make_heat_kernel,
    make_killed_chain,
    make_non_feller_drift,
    make_two_state,
)
from .state_model import C0Verdict, GridFunction, StateSpace, c0_verdict, sup_norm

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BatteryConfig",
    "C0Verdict",
    "CancellationError",
    "CatalogEntry",
    "CheckResult",
    "CHECK_IDS",
    "ENTRY_NAMES",
    "FellerReport",
    "Generator",
    "GridFunction",
    "InversionConfig",
    "InversionResult",
    "KernelSemigroup",
    "OperatorFamily",
    "QuadratureResult",
    "StateSpace",
    "SweepRow",
    "build_entry",
    "c0_verdict",
    "commutation_residual",
    "expm",
    "inversion_apply",
    "inversion_convergence_sweep",
    "list_entries",
    "make_birth_death",
    "make_heat_kernel",
    "make_killed_chain",
    "make_non_feller_drift",
    "make_probes",
    "make_two_state",
    "resolvent_apply_exact",
    "resolvent_apply_quadrature",
    "resolvent_identity_residual",
    "run_battery",
    "semigroup_apply",
    "semigroup_law_residual",
    "sup_norm",
]
