"""Population oracle for simulated SEMs."""

from causal_reg.population.oracle import (
    PopulationQuantities,
    algorithm_worst_risk,
    compute_population,
    monte_carlo_worst_risk,
    population_beta_lambda,
    population_rdiff,
    population_risk,
    population_rsum,
    population_worst_risk,
)

__all__ = [
    "PopulationQuantities",
    "algorithm_worst_risk",
    "compute_population",
    "monte_carlo_worst_risk",
    "population_beta_lambda",
    "population_rdiff",
    "population_risk",
    "population_rsum",
    "population_worst_risk",
]
