"""Binary naming-game dynamics on random networks.

Stochastic agent-based simulation side by side with the homogeneous
pair-approximation ODEs (6D symmetric, 9D with committed agents) and
their infinite-degree mean-field limit, plus tipping-point analysis and
independent first-principles oracles.
"""

__version__ = "0.1.0"

from .analysis import (SweepRow, TippingNotFoundError, TippingResult,
                       consensus_time_curve, consensus_time_vs_n,
                       find_tipping, pc_vs_k, stable_pb, trajectory_compare)
from .naming_game import EnsembleStats, SimConfig, SimResult, ensemble, run, step
from .network import (DegenerateNetworkError, LinkCensus, Network,
                      OpinionState, assign_opinions, complete_network,
                      generate_er, link_census, load_edgelist, save_edgelist)
from .pair_ode import (all_b_committed_state, effective_fields, embed_product,
                       node_fractions, rhs6, rhs9, rhs_meanfield)
from .rk4 import (IntegrationError, OdeConfig, Trajectory,
                  detect_eta_crossing, integrate, steady_state)

__all__ = [
    "__version__",
    "DegenerateNetworkError", "EnsembleStats", "IntegrationError",
    "LinkCensus", "Network", "OdeConfig", "OpinionState", "SimConfig",
    "SimResult", "SweepRow", "TippingNotFoundError", "TippingResult",
    "Trajectory",
    "all_b_committed_state", "assign_opinions", "complete_network",
    "consensus_time_curve", "consensus_time_vs_n", "detect_eta_crossing",
    "effective_fields", "embed_product", "ensemble", "find_tipping",
    "generate_er", "integrate", "link_census", "load_edgelist",
    "node_fractions", "pc_vs_k", "rhs6", "rhs9", "rhs_meanfield", "run",
    "save_edgelist", "stable_pb", "steady_state", "step",
    "trajectory_compare",
]
