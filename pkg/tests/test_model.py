from __future__ import annotations

import random

import pytest

from fieldstrength.errors import ConfigurationError
from fieldstrength.model import (
    AnalysisConfig,
    CostModel,
    ResearcherRecord,
    Taxonomy,
    cost_per_year,
    normalization_factor,
    researcher_cost,
)

REFERENCE_COSTS = {"assistant": 70007.0, "associate": 76103.5, "full": 93343.5}


def test_cost_per_year_reference_values():
    cm = CostModel()
    for rank, expected in REFERENCE_COSTS.items():
        assert cost_per_year(rank, cm) == expected


def test_cost_per_year_published_roundings_within_half_euro():
    cm = CostModel()
    published = {"assistant": 70007, "associate": 76104, "full": 93344}
    for rank, value in published.items():
        assert abs(cost_per_year(rank, cm) - value) <= 0.5


def test_cost_per_year_capital_only():
    cm = CostModel(salary={"assistant": 0, "associate": 0, "full": 0},
                   capital=42693, research_time_share=1.0)
    assert cost_per_year("full", cm) == 42693


def test_cost_per_year_unknown_rank():
    with pytest.raises(ConfigurationError):
        cost_per_year("emeritus", CostModel())


def test_normalization_factor_reference():
    cm = CostModel()
    assert normalization_factor("assistant", cm) == 1.0
    assert normalization_factor("associate", cm) == pytest.approx(76103.5 / 70007)
    assert normalization_factor("associate", cm) == pytest.approx(1.0871, abs=1e-4)
    # published table prints 1.23 for full professors; the cost ratio does not
    assert normalization_factor("full", cm) == pytest.approx(93343.5 / 70007)
    assert normalization_factor("full", cm) == pytest.approx(1.3334, abs=1e-4)


def test_normalization_factor_assistant_is_one_for_any_model():
    rng = random.Random(7)
    for _ in range(50):
        cm = CostModel(
            salary={r: rng.uniform(1, 2e5) for r in ("assistant", "associate", "full")},
            capital=rng.uniform(1, 1e5),
            research_time_share=rng.uniform(0.01, 1.0),
        )
        assert normalization_factor("assistant", cm) == 1.0


def test_cost_monotone_in_salary_and_capital():
    base = CostModel()
    higher_salary = CostModel(salary={**base.salary, "assistant": 60000})
    assert cost_per_year("assistant", higher_salary) > cost_per_year("assistant", base)
    higher_capital = CostModel(capital=50000)
    assert cost_per_year("associate", higher_capital) > cost_per_year("associate", base)


def test_researcher_cost_examples():
    cm = CostModel()
    five_years = ResearcherRecord("r1", "S1", {y: "assistant" for y in range(2012, 2017)})
    assert researcher_cost(five_years, cm) == 350035.0

    mixed = ResearcherRecord(
        "r2", "S1",
        {2012: "assistant", 2013: "assistant", 2014: "assistant",
         2015: "associate", 2016: "associate"},
    )
    assert researcher_cost(mixed, cm) == 362228.0


def test_researcher_cost_no_years_is_an_error():
    with pytest.raises(ConfigurationError):
        researcher_cost(ResearcherRecord("r0", "S1", {}), CostModel())


def test_researcher_cost_additive_over_disjoint_years():
    cm = CostModel()
    a = ResearcherRecord("ra", "S1", {2012: "assistant", 2013: "associate"})
    b = ResearcherRecord("rb", "S1", {2014: "full", 2015: "full", 2016: "assistant"})
    joined = ResearcherRecord("rc", "S1", {**a.rank_by_year, **b.rank_by_year})
    assert researcher_cost(joined, cm) == pytest.approx(
        researcher_cost(a, cm) + researcher_cost(b, cm), rel=1e-12
    )


def test_cost_model_validation():
    with pytest.raises(ConfigurationError):
        CostModel(salary={"assistant": -1, "associate": 1, "full": 1})
    with pytest.raises(ConfigurationError):
        CostModel(capital=0)
    with pytest.raises(ConfigurationError):
        CostModel(research_time_share=0)
    with pytest.raises(ConfigurationError):
        CostModel(research_time_share=1.2)
    with pytest.raises(ConfigurationError):
        CostModel(salary={"assistant": 1})  # missing ranks


def test_analysis_config_validation():
    with pytest.raises(ConfigurationError):
        AnalysisConfig(window=(2016, 2012))
    with pytest.raises(ConfigurationError):
        AnalysisConfig(hca_percentiles=(0,))
    with pytest.raises(ConfigurationError):
        AnalysisConfig(hca_percentiles=(100,))
    with pytest.raises(ConfigurationError):
        AnalysisConfig(hca_percentiles=(5, 5))
    with pytest.raises(ConfigurationError):
        AnalysisConfig(ts_fence_multiplier=-0.1)
    with pytest.raises(ConfigurationError):
        AnalysisConfig(rescale_fallback="nearest_field")
    cfg = AnalysisConfig(hca_percentiles=(10, 1, 5))
    assert cfg.sorted_percentiles == (1.0, 5.0, 10.0)


def test_taxonomy_rejects_orphan_uda():
    with pytest.raises(ConfigurationError):
        Taxonomy(sds_to_uda={"S1": "U9"}, sds_names={"S1": "x"}, uda_names={"U1": "y"})
