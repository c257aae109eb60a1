"""causal-reg: causal regularization for two-environment linear SEMs."""

__version__ = "0.1.0"
