"""Configuration system."""

from causal_reg.config.loader import apply_overrides, load_config
from causal_reg.config.schema import AppConfig

__all__ = ["AppConfig", "apply_overrides", "load_config"]
