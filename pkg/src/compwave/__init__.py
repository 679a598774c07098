"""compwave: composite shock/rarefaction waves of the isentropic p-system
with degenerate viscosity — exact wave algebra, viscous profiles, a scaled
Navier-Stokes solver, weighted relative-entropy functionals with a dynamic
shift, and vanishing-viscosity experiments."""

from .errors import ConfigError, NumericalAbort
from .gas import (GasParams, State, lambda1, lambda2, potential_Q, pressure,
                  pressure_derivative, relative_Q, relative_eta, relative_p)
from .riemann import (RiemannSetup, hugoniot_state, rc2_velocity,
                      riemann_sample, shock_speed, solve_intermediate)
from .shock_profile import (ProfileFields, ShockProfile, build_profile,
                            derivative_bounds_check, eval_shifted, profile_rhs)
from .rarefaction import (BurgersFields, RarefactionFields, RarefactionParams,
                          burgers_exact, burgers_initial, fan_state,
                          lp_decay_report, smooth_rarefaction,
                          smooth_rarefaction_derivatives)
from .entropy import (FunctionalFrame, FunctionalReport, WeightParams,
                      compute_B_G, compute_F, compute_Jbad_Jgood, compute_Y,
                      evaluate_functionals, identity_residual,
                      interaction_diagnostics, nonnegativity_violations,
                      truncate_vbar, truncate_vk, weight, weight_derivative)
from .shift import ShiftTrace, advance_shift, shift_rhs
from .solver import (CheckpointRecord, CompositeFields, CompositeWave,
                     EnergyProbe, Grid1D, RunConfig, RunResult, SimState,
                     cfl_limit, composite_eval, initial_data, rhs, run,
                     scale_map, step)
from .harness import (SweepConfig, SweepReport, auto_domain, build_wave,
                      config_hash, emit_report, l1_metrics, parse_config,
                      report_energy_lhs, run_simulation, run_sweep)

__version__ = "0.1.0"
