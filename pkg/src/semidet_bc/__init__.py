"""Capacity regions of semideterministic broadcast channels with state.

The transmitter knows the channel state noncausally; one receiver sees a
deterministic function Y = f(x, S), the other a noisy output Z ~ W(z|x, s).
"""

from .binary_example import (
    BinaryExampleParams,
    build_channel,
    bsc_policy,
    causal_region,
    noncausal_region,
    write_figure1,
)
from .capacity import SearchConfig, bound_triple, inner_region, joint_from_policy, policy_triples
from .channels import (
    AuxPolicy,
    GeneralChannel,
    SelectionPolicy,
    SemiDetChannel,
    parse_general,
    parse_policy,
    parse_semidet,
)
from .errors import GuardError, NumericalError, SpecParseError
from .geometry import (
    BoundTriple,
    ConvexRegion2D,
    RatePair,
    hausdorff,
    hull_of_triples,
    polytope_from_triple,
    region_contains,
)
from .outer import causal_outer_region, outer_region_estimate, outer_triple
from .prob import JointDist, conditional_entropy, entropy, marginalize, mutual_info
from .sim import SimConfig, SimReport, run_trials, selection_from_policy
from .support import reduce_support

__version__ = "0.1.0"

__all__ = [
    "AuxPolicy", "BinaryExampleParams", "BoundTriple", "ConvexRegion2D", "GeneralChannel",
    "GuardError", "JointDist", "NumericalError", "RatePair", "SearchConfig", "SelectionPolicy",
    "SemiDetChannel", "SimConfig", "SimReport", "SpecParseError", "bound_triple", "bsc_policy",
    "build_channel", "causal_outer_region", "causal_region", "conditional_entropy", "entropy",
    "hausdorff", "hull_of_triples", "inner_region", "joint_from_policy", "marginalize",
    "mutual_info", "noncausal_region", "outer_region_estimate", "outer_triple", "parse_general",
    "parse_policy", "parse_semidet", "policy_triples", "polytope_from_triple", "reduce_support",
    "region_contains", "run_trials", "selection_from_policy", "write_figure1",
]
