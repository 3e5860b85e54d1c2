"""Rewriting engine for capped gropes and Whitney towers."""

from gropes._core import (
    BudgetError,
    EngineError,
    Model,
    OracleScaleError,
    ParseError,
    PlanError,
    PreconditionError,
    ShapeError,
    attach_pair_handles,
    attach_stage_handles,
    certify,
    discharge_all,
    discharge_obligation,
    fig_cycle_model,
    pipeline,
    random_chain_model,
    random_grope,
    random_pair_model,
    split_to_distance,
    split_to_dyadic,
    split_transverse_pair,
    unravel,
)

__all__ = [
    "BudgetError",
    "EngineError",
    "Model",
    "OracleScaleError",
    "ParseError",
    "PlanError",
    "PreconditionError",
    "ShapeError",
    "attach_pair_handles",
    "attach_stage_handles",
    "certify",
    "discharge_all",
    "discharge_obligation",
    "fig_cycle_model",
    "pipeline",
    "random_chain_model",
    "random_grope",
    "random_pair_model",
    "split_to_distance",
    "split_to_dyadic",
    "split_transverse_pair",
    "unravel",
]

__version__ = "0.1.0"
