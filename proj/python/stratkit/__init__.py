"""Stratified control data and smooth retraction toolkit."""

from ._core import (
    BumpSpec,
    Pipeline,
    StratkitError,
    bump,
    crit_residual,
    exp_h_s,
    flow_linear,
    hilbert_d3,
    list_scenarios,
    moment,
    norm_sq_gradient_flow,
    run_scenario,
)

__all__ = [
    "BumpSpec",
    "Pipeline",
    "StratkitError",
    "bump",
    "crit_residual",
    "exp_h_s",
    "flow_linear",
    "hilbert_d3",
    "list_scenarios",
    "moment",
    "norm_sq_gradient_flow",
    "run_scenario",
]
