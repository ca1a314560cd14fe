"""Configuration and record types for experiment runs."""

from __future__ import annotations

from dataclasses import dataclass

CSV_HEADER = "experiment,N,L,trial,seed_path,statistic,value,certified,wall_time_ms"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment invocation: suite name, grid, and resource knobs."""

    experiment: str
    dims: tuple = ()
    L: int = 2
    trials: int = 0
    seed: int = 42
    enum_budget: int = 2_000_000
    restarts: int = 0
    output_dir: str | None = None
    workers: int = 0
    allow_heuristic: bool = False

    def validated(self) -> "ExperimentConfig":
        from .suites import SUITES

        if self.experiment not in SUITES:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; "
                f"registered: {', '.join(SUITES)}"
            )
        spec = SUITES[self.experiment]
        dims = tuple(int(n) for n in self.dims) or spec.default_dims
        trials = int(self.trials) if self.trials else spec.default_trials
        if trials < 1:
            raise ValueError("trials must be at least 1")
        if not dims:
            raise ValueError("dims must be nonempty")
        if any(n < spec.min_dim for n in dims):
            raise ValueError(f"{self.experiment} needs N >= {spec.min_dim}")
        if self.L < max(1, spec.min_L):
            raise ValueError(f"{self.experiment} needs L >= {max(1, spec.min_L)}")
        if self.enum_budget < 1:
            raise ValueError("enum_budget must be at least 1")
        if spec.needs_exact and not self.allow_heuristic:
            if max(dims) > 6:
                raise ValueError(
                    f"{self.experiment} needs certified-exact profiles, which "
                    "pins N <= 6; pass allow_heuristic to run larger dims "
                    "with heuristic (lower-bound) profiles"
                )
            need = max(spec.exact_need(n, self.L) for n in dims)
            if need > self.enum_budget:
                raise ValueError(
                    f"{self.experiment} requires certification but the "
                    f"enumeration budget {self.enum_budget} is below the "
                    f"{need} needed at these dims; raise enum_budget or pass "
                    "allow_heuristic"
                )
        restarts = int(self.restarts) if self.restarts else spec.default_restarts
        if restarts < 1:
            raise ValueError("restarts must be at least 1")
        return ExperimentConfig(
            experiment=self.experiment,
            dims=dims,
            L=self.L,
            trials=trials,
            seed=self.seed,
            enum_budget=self.enum_budget,
            restarts=restarts,
            output_dir=self.output_dir,
            workers=self.workers,
            allow_heuristic=self.allow_heuristic,
        )


@dataclass(frozen=True)
class ExperimentRecord:
    """One statistic from one trial."""

    experiment: str
    N: int
    L: int
    trial: int
    seed_path: str
    statistic: str
    value: float
    certified: bool
    wall_time_ms: float

    def csv_row(self) -> str:
        # float() guards against numpy scalars, whose repr is not parseable.
        return (
            f"{self.experiment},{self.N},{self.L},{self.trial},{self.seed_path},"
            f"{self.statistic},{float(self.value)!r},{str(self.certified).lower()},"
            f"{self.wall_time_ms:.3f}"
        )

    @staticmethod
    def from_csv_row(row: str) -> "ExperimentRecord":
        parts = row.rstrip("\n").split(",")
        if len(parts) != 9:
            raise ValueError(f"malformed record row: {row!r}")
        return ExperimentRecord(
            experiment=parts[0],
            N=int(parts[1]),
            L=int(parts[2]),
            trial=int(parts[3]),
            seed_path=parts[4],
            statistic=parts[5],
            value=float(parts[6]),
            certified=parts[7] == "true",
            wall_time_ms=float(parts[8]),
        )
