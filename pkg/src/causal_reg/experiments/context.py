"""Objects every command and experiment builds from the configuration."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from causal_reg.config import AppConfig
from causal_reg.estimation import LambdaValue
from causal_reg.experiments.ingest import ingest_csv
from causal_reg.models import EnvPair
from causal_reg.rng import derive_seed
from causal_reg.selection import ResamplingPlan, make_split, make_vfold
from causal_reg.sem import (
    NoiseSpec,
    SemStructure,
    ShiftSpec,
    benchmark_structure,
    load_structure,
    sample_pair,
)


class Stream(IntEnum):
    """Independent seed streams derived from the master seed."""

    DATA = 1
    PLAN = 2
    BOOTSTRAP = 3
    TEST = 4
    SELECTION = 5


@dataclass(frozen=True, eq=False)
class RunContext:
    config: AppConfig
    structure: SemStructure
    noise: NoiseSpec
    shift: ShiftSpec
    grid: list[LambdaValue]

    @classmethod
    def from_config(cls, config: AppConfig) -> RunContext:
        if config.structure.source == "file":
            structure = load_structure(config.structure.path)
        else:
            structure = benchmark_structure()
        sim = config.simulation
        return cls(
            config=config,
            structure=structure,
            noise=NoiseSpec.identity(structure.p, sim.noise_scale),
            shift=ShiftSpec.identity(structure.p, sim.shift_scale),
            grid=config.grid.lambdas(),
        )

    @property
    def p(self) -> int:
        return self.structure.p

    @property
    def threads(self) -> int:
        return self.config.threads

    def seed(self, stream: Stream, *keys: int) -> int:
        return derive_seed(self.config.seed, int(stream), *keys)

    @property
    def simulated(self) -> bool:
        return self.config.data.path is None

    def simulate(
        self,
        n_e: int,
        n_o: int,
        *keys: int,
        shift: ShiftSpec | None = None,
    ) -> EnvPair:
        return sample_pair(
            self.structure, self.noise, shift or self.shift, n_e, n_o,
            self.seed(Stream.DATA, *keys),
        )

    def load_pair(self) -> EnvPair:
        """The configured CSV if one is given, otherwise a simulated pair."""
        data = self.config.data
        if data.path is not None:
            return ingest_csv(data.path, data.env_column, data.env_labels, data.center)
        return self.simulate(*self.config.simulation.sizes)

    def selection_plan(self, n_e: int, n_o: int, *keys: int, folds: int | None = None) -> ResamplingPlan:
        sel = self.config.selection
        seed = self.seed(Stream.PLAN, *keys)
        if sel.method == "split":
            return make_split(n_e, n_o, sel.test_fraction, seed, paired=sel.paired)
        return make_vfold(n_e, n_o, folds or sel.folds, seed, paired=sel.paired)

    def bootstrap_split(self, n_e: int, n_o: int, *keys: int) -> ResamplingPlan:
        return make_split(
            n_e, n_o, self.config.bootstrap.test_fraction,
            self.seed(Stream.BOOTSTRAP, *keys), paired=self.config.selection.paired,
        )
