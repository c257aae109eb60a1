"""Experiment registry: decorated classes are auto-registered."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, ClassVar

from causal_reg.errors import ConfigError

if TYPE_CHECKING:
    from causal_reg.experiments.context import RunContext
    from causal_reg.experiments.plotting import PlotSpec
    from causal_reg.experiments.results import ResultTable


class Experiment(ABC):
    """A simulation study producing one long-format result table."""

    name: ClassVar[str]
    plot: ClassVar[PlotSpec | None] = None

    def plot_spec(self, ctx: RunContext) -> PlotSpec | None:
        return self.plot

    @abstractmethod
    def run(self, ctx: RunContext) -> ResultTable:
        ...


EXPERIMENT_REGISTRY: dict[str, type[Experiment]] = {}


def register(cls: type[Experiment]) -> type[Experiment]:
    """Class decorator that adds an experiment to the global registry."""
    if not getattr(cls, "name", None):
        raise ValueError(f"Experiment class {cls.__name__} must define a 'name' attribute")
    if cls.name in EXPERIMENT_REGISTRY:
        raise ValueError(f"Duplicate experiment name: {cls.name!r}")
    EXPERIMENT_REGISTRY[cls.name] = cls
    return cls


def get_experiment(name: str) -> Experiment:
    # drivers register on import
    import causal_reg.experiments.drivers  # noqa: F401

    cls = EXPERIMENT_REGISTRY.get(name)
    if cls is None:
        known = ", ".join(sorted(EXPERIMENT_REGISTRY))
        raise ConfigError(f"unknown experiment {name!r} (known: {known})")
    return cls()
