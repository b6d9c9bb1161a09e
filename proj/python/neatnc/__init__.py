"""Navigation-cell neuroevolution: encoder, simulator, NEAT and statistics."""

import json

from ._core import (
    AgentState,
    ContractError,
    Scenario,
    TestResult,
    chi_square_sf,
    chi_square_success,
    default_config,
    dunn_posthoc,
    encode,
    evaluate_genome,
    grid_index,
    holm_adjust,
    kruskal_wallis,
    load_scenario,
    normal_sf,
    obstacle_position,
    radar_scan,
    run_experiment,
    run_single,
    scenario_from_json,
    step,
    step_reward,
    terminal_reward,
)


def config(algorithm, scenario, **overrides):
    """Default experiment config as a dict; nested keys via evolution={...} etc."""
    cfg = json.loads(default_config(algorithm, str(scenario)))
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict):
            cfg[key].update(value)
        else:
            cfg[key] = value
    return cfg


def evolve(cfg, seed=0):
    """One seeded evolution run. `cfg` is a dict from config()."""
    return run_single(json.dumps(cfg), seed)


__all__ = [name for name in dir() if not name.startswith("_")]
