"""semnet: knowledge-sharing hybrid semantic/bit network simulator and solvers."""

from .accuracy import AccuracyModel, fit_accuracy_model, raw_accuracy
from .assoc import (Assignment, AssociationInstance, brute_force_association,
                    build_instance, solve_association)
from .harness import (SweepConfig, SweepResult, SweepRow, apply_override,
                      emit_csv, preset_sweep, run_point, run_sweep)
from .kuer import (PairSolution, evaluate_partition, make_pair_context,
                   solve_pair_efficient, solve_pair_no_sharing,
                   solve_pair_optimum, two_tier_sort)
from .monoopt import (PolyblockResult, ReducedProblem, feasible_xi_interval,
                      grid_oracle, maximize_reduced, polyblock_maximize,
                      project_to_boundary, transform_reduced)
from .ratetime import (PairContext, Partition, TimeBreakdown, check_delay,
                       compute_ratio, semantic_rate, shannon_rate,
                       time_breakdown)
from .scenario import (BaseStation, ChannelModel, KnowledgeClassProfile,
                       MobileDevice, Scenario, ScenarioConfig, SystemParams,
                       generate_scenario, link_gain, scenario_1_config,
                       scenario_2_config)

__version__ = "0.1.0"
