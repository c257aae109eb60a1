"""Linear structural equation models with covariate shifts."""

from causal_reg.sem.sampling import sample_pair, sample_sem
from causal_reg.sem.structure import (
    NoiseSpec,
    SemStructure,
    ShiftSpec,
    benchmark_structure,
    load_structure,
    validate_structure,
)

__all__ = [
    "NoiseSpec",
    "SemStructure",
    "ShiftSpec",
    "benchmark_structure",
    "load_structure",
    "sample_pair",
    "sample_sem",
    "validate_structure",
]
