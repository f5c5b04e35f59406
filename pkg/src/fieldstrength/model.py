"""Domain types: field taxonomy, researcher records, cost model, run settings.

Money is carried at full precision everywhere; rounding to integer euro
is a rendering concern and happens only in the report layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import ConfigurationError

RANK_ASSISTANT = "assistant"
RANK_ASSOCIATE = "associate"
RANK_FULL = "full"
RANKS = (RANK_ASSISTANT, RANK_ASSOCIATE, RANK_FULL)

# National average yearly salary per academic rank (euro) and yearly
# capital endowment per professor (euro PPP), the default production
# factor costs. Overridable through the run configuration.
DEFAULT_SALARY = {
    RANK_ASSISTANT: 54628.0,
    RANK_ASSOCIATE: 66821.0,
    RANK_FULL: 101301.0,
}
DEFAULT_CAPITAL = 42693.0
DEFAULT_RESEARCH_TIME_SHARE = 0.5
DEFAULT_REPORTING_SCALE = 1e8  # indicators reported per 100 M euro
DEFAULT_FENCE_MULTIPLIER = 1.5
DEFAULT_PERCENTILES = (5.0, 10.0)
DEFAULT_MIN_YEARS = 3

FALLBACK_UDA_THEN_NATIONAL = "uda_then_national"
FALLBACK_NATIONAL_ONLY = "national_only"
RESCALE_FALLBACKS = (FALLBACK_UDA_THEN_NATIONAL, FALLBACK_NATIONAL_ONLY)


@dataclass(frozen=True)
class Taxonomy:
    """The two-level field classification: fine-grained fields (SDS)
    grouped into disciplines (UDA)."""

    sds_to_uda: Mapping[str, str]
    sds_names: Mapping[str, str]
    uda_names: Mapping[str, str]

    def __post_init__(self):
        orphans = sorted(set(self.sds_to_uda.values()) - set(self.uda_names))
        if orphans:
            raise ConfigurationError(f"taxonomy references unknown discipline codes: {orphans}")

    @property
    def sds_codes(self) -> list[str]:
        return sorted(self.sds_to_uda)

    @property
    def uda_codes(self) -> list[str]:
        return sorted(self.uda_names)

    def uda_of(self, sds: str) -> str:
        return self.sds_to_uda[sds]


@dataclass(frozen=True)
class ResearcherRecord:
    """One professor: field, per-year rank, and active years in the window."""

    researcher_id: str
    sds: str
    rank_by_year: Mapping[int, str]

    @property
    def active_years(self) -> frozenset[int]:
        return frozenset(self.rank_by_year)

    @property
    def n_years(self) -> int:
        return len(self.rank_by_year)

    @property
    def latest_rank(self) -> str:
        return self.rank_by_year[max(self.rank_by_year)]


@dataclass(frozen=True)
class CostModel:
    """Labor + capital cost per professor-year.

    Labor counts only the research share of salary (the remainder goes
    to teaching, administration, technology transfer); capital is the
    same for every rank.
    """

    salary: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SALARY))
    capital: float = DEFAULT_CAPITAL
    research_time_share: float = DEFAULT_RESEARCH_TIME_SHARE
    reporting_scale: float = DEFAULT_REPORTING_SCALE

    def __post_init__(self):
        for rank, value in self.salary.items():
            if rank not in RANKS:
                raise ConfigurationError(f"unknown rank in salary table: {rank!r}")
            # zero is allowed so the capital-only degenerate case stays expressible
            if value < 0:
                raise ConfigurationError(f"salary for {rank!r} must be >= 0, got {value}")
        missing = [rank for rank in RANKS if rank not in self.salary]
        if missing:
            raise ConfigurationError(f"salary table missing ranks: {missing}")
        if self.capital <= 0:
            raise ConfigurationError(f"capital must be > 0, got {self.capital}")
        if not 0 < self.research_time_share <= 1:
            raise ConfigurationError(
                f"research_time_share must be in (0, 1], got {self.research_time_share}"
            )
        if self.reporting_scale <= 0:
            raise ConfigurationError(f"reporting_scale must be > 0, got {self.reporting_scale}")


@dataclass(frozen=True)
class AnalysisConfig:
    """Window, thresholds, and policy knobs for one analysis run."""

    window: tuple[int, int] = (2012, 2016)
    hca_percentiles: tuple[float, ...] = DEFAULT_PERCENTILES
    min_years: int = DEFAULT_MIN_YEARS
    census_date: Optional[str] = None
    ts_fence_multiplier: float = DEFAULT_FENCE_MULTIPLIER
    rescale_fallback: str = FALLBACK_UDA_THEN_NATIONAL
    roster_only_baseline: bool = False

    def __post_init__(self):
        object.__setattr__(self, "window", (int(self.window[0]), int(self.window[1])))
        object.__setattr__(self, "hca_percentiles", tuple(float(p) for p in self.hca_percentiles))
        start, end = self.window
        if start > end:
            raise ConfigurationError(f"window start {start} > end {end}")
        for p in self.hca_percentiles:
            if not 0 < p < 100:
                raise ConfigurationError(f"percentile must be in (0, 100), got {p}")
        if len(set(self.hca_percentiles)) != len(self.hca_percentiles):
            raise ConfigurationError("duplicate percentiles")
        if self.min_years < 1:
            raise ConfigurationError(f"min_years must be >= 1, got {self.min_years}")
        if self.ts_fence_multiplier < 0:
            raise ConfigurationError(
                f"ts_fence_multiplier must be >= 0, got {self.ts_fence_multiplier}"
            )
        if self.rescale_fallback not in RESCALE_FALLBACKS:
            raise ConfigurationError(
                f"rescale_fallback must be one of {RESCALE_FALLBACKS}, got {self.rescale_fallback!r}"
            )

    @property
    def years(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    @property
    def sorted_percentiles(self) -> tuple[float, ...]:
        return tuple(sorted(self.hca_percentiles))


def cost_per_year(rank: str, cost_model: CostModel) -> float:
    """Yearly research cost of one professor of the given rank."""
    if rank not in cost_model.salary:
        raise ConfigurationError(f"unknown rank: {rank!r}")
    return cost_model.salary[rank] * cost_model.research_time_share + cost_model.capital


def normalization_factor(rank: str, cost_model: CostModel) -> float:
    """Yearly cost relative to an assistant professor's."""
    return cost_per_year(rank, cost_model) / cost_per_year(RANK_ASSISTANT, cost_model)


def researcher_cost(researcher: ResearcherRecord, cost_model: CostModel) -> float:
    """Total cost over the researcher's active years, rank resolved per year."""
    if not researcher.rank_by_year:
        raise ConfigurationError(
            f"researcher {researcher.researcher_id} has no active years"
        )
    return sum(cost_per_year(rank, cost_model) for rank in researcher.rank_by_year.values())
