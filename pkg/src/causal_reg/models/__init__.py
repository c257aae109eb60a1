"""Domain data types."""

from causal_reg.models.data import Dataset, EnvPair

__all__ = ["Dataset", "EnvPair"]
