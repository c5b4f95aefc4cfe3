"""Exact optimal n-towns and n-block cities under the Manhattan metric."""

__version__ = "0.1.0"

from .dp import DpConfig, OptResult, solve_all
from .geometry import (
    CITY,
    PSI,
    TOWN,
    GridPoint,
    Town,
    block_city_cost,
    canonical_form,
    lambda_adjust,
    town_cost,
)
from .oracle import brute_force_optimum, greedy_upper_bound

__all__ = [
    "CITY",
    "PSI",
    "TOWN",
    "DpConfig",
    "GridPoint",
    "OptResult",
    "Town",
    "block_city_cost",
    "brute_force_optimum",
    "canonical_form",
    "greedy_upper_bound",
    "lambda_adjust",
    "solve_all",
    "town_cost",
]
