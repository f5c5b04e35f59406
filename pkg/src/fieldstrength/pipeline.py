"""End-to-end computation: corpus -> flags -> scores -> scoreboards -> analytics.

Pure compute; all file writing stays in the cli layer so the pipeline
can be exercised and compared in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .analytics import (
    AverageRankResult,
    CorrelationMatrix,
    IndicatorRanking,
    QuadrantResult,
    average_rank_extremes,
    correlation_matrix,
    indicator_values,
    quadrant_classify,
    rank_indicator,
)
from .hca import HcaFlagSet, build_cells, flag_hcas
from .indicators import (
    DisciplineScoreboard,
    FieldScoreboard,
    build_discipline_scoreboards,
    build_field_scoreboards,
    indicator_id,
    p_label,
)
from .ingest import Corpus, SummaryTable, corpus_summary
from .model import CostModel
from .reporting import ReportBundle
from .scoring import RESCALE_FROM_FIELD, ResearcherScore, score_researchers


@dataclass
class PipelineResult:
    corpus: Corpus
    flag_sets: dict[float, HcaFlagSet]
    summary: SummaryTable
    scores: list[ResearcherScore]
    boards: list[FieldScoreboard]
    discipline_rows: list[DisciplineScoreboard]
    discipline_overall: Optional[DisciplineScoreboard]
    rankings: list[IndicatorRanking]
    correlations: CorrelationMatrix
    quadrant: QuadrantResult
    avg_rank: AverageRankResult
    bundle: ReportBundle
    counts: dict[str, int]
    warnings: list[str]


def indicator_ids(percentiles) -> list[str]:
    ids = [indicator_id("fss_ts", p) for p in percentiles]
    ids += [indicator_id("fss_fhca", p) for p in percentiles]
    return ids


def run_pipeline(corpus: Corpus, cost_model: CostModel, top_bottom_k: int = 10) -> PipelineResult:
    percentiles = list(corpus.config.sorted_percentiles)
    cells = build_cells(corpus.publications.values())
    flag_sets = {p: flag_hcas(cells, p) for p in percentiles}
    summary = corpus_summary(corpus, flag_sets)
    scores = score_researchers(corpus, flag_sets, cost_model)
    boards = build_field_scoreboards(corpus, scores, flag_sets, cost_model)
    if boards:
        discipline_rows, discipline_overall = build_discipline_scoreboards(boards, percentiles)
    else:
        discipline_rows, discipline_overall = [], None

    ids = indicator_ids(percentiles)
    rankings = [rank_indicator(boards, i) for i in ids]
    correlations = correlation_matrix(rankings)
    quadrant = quadrant_classify(boards, percentiles)
    avg_rank = average_rank_extremes(rankings, top_bottom_k)

    roster_pubs = set(corpus.authors_by_pub)
    counts = {
        "researchers": len(corpus.researchers),
        "publications": len(corpus.publications),
        "baseline_only_publications": len(corpus.baseline_only_pubs),
        "authorships": len(corpus.authorships),
        "citation_cells": len(cells),
        "fields": len(boards),
        "disciplines": len(discipline_rows),
    }
    for p in percentiles:
        pl = p_label(p)
        counts[f"hca_{pl}_flagged"] = len(flag_sets[p].flagged)
        counts[f"hca_{pl}_roster"] = len(flag_sets[p].flagged & roster_pubs)
        counts[f"ts_{pl}"] = sum(b.ts_count(p) for b in boards)

    warnings = list(corpus.report.warnings)
    for board in boards:
        for p in percentiles:
            source = board.rescale_provenance[p]
            if source != RESCALE_FROM_FIELD:
                warnings.append(
                    f"field {board.sds}: rescaling at p={p_label(p)} used {source}"
                )
    if avg_rank.truncated:
        warnings.append(
            f"average-rank lists truncated: requested {top_bottom_k}, have {len(boards)} fields"
        )
    if quadrant.ambiguous:
        warnings.append(
            "fields strong at one percentile but weak at another, in neither union: "
            + ", ".join(sorted(quadrant.ambiguous))
        )

    bundle = _build_bundle(
        corpus, summary, boards, discipline_rows, discipline_overall,
        rankings, correlations, quadrant, avg_rank, top_bottom_k,
    )
    return PipelineResult(
        corpus=corpus,
        flag_sets=flag_sets,
        summary=summary,
        scores=scores,
        boards=boards,
        discipline_rows=discipline_rows,
        discipline_overall=discipline_overall,
        rankings=rankings,
        correlations=correlations,
        quadrant=quadrant,
        avg_rank=avg_rank,
        bundle=bundle,
        counts=counts,
        warnings=warnings,
    )


def _summary_row_dict(row, percentiles) -> dict[str, Any]:
    out = {
        "uda": row.uda,
        "uda_name": row.uda_name,
        "n_sds": row.n_sds,
        "n_professors": row.n_professors,
        "n_publications": row.n_publications,
    }
    for p in percentiles:
        out[f"hca_{p_label(p)}"] = row.hca_counts[p]
    return out


def _discipline_row_dict(row: DisciplineScoreboard, percentiles) -> dict[str, Any]:
    out = {
        "uda": row.uda,
        "n_sds": row.n_sds,
        "n_professors": row.n_professors,
        "total_cost": row.total_cost,
    }
    for p in percentiles:
        pl = p_label(p)
        out[f"ts_{pl}"] = row.ts_count[p]
        out[f"ts_{pl}_share"] = row.ts_share[p]
    for p in percentiles:
        out[f"fss_ts_{p_label(p)}"] = row.fss_ts[p]
    for p in percentiles:
        out[f"fss_fhca_{p_label(p)}"] = row.fss_fhca[p]
    return out


def _field_row_dict(board: FieldScoreboard, percentiles) -> dict[str, Any]:
    out = {
        "sds": board.sds,
        "uda": board.uda,
        "n_assistant": board.n_by_rank["assistant"],
        "n_associate": board.n_by_rank["associate"],
        "n_full": board.n_by_rank["full"],
        "n_professors": board.n_professors,
        "total_cost": board.total_cost,
    }
    for p in percentiles:
        out[f"ts_{p_label(p)}"] = board.ts_count(p)
    for p in percentiles:
        out[f"fss_ts_{p_label(p)}"] = board.fss_ts[p]
    for p in percentiles:
        out[f"fss_fhca_{p_label(p)}"] = board.fss_fhca[p]
    out["fallback_flags"] = board.fallback_flags()
    return out


def _build_bundle(corpus, summary, boards, discipline_rows, discipline_overall,
                  rankings, correlations, quadrant, avg_rank, top_bottom_k) -> ReportBundle:
    percentiles = list(corpus.config.sorted_percentiles)
    ids = [r.indicator_id for r in rankings]
    value_maps = {i: dict(indicator_values(boards, i)) for i in ids}
    uda_of = {b.sds: b.uda for b in boards}

    def quadrant_entries(members) -> list[dict[str, Any]]:
        entries = []
        for sds in sorted(members):
            entry: dict[str, Any] = {"sds": sds, "uda": uda_of[sds]}
            entry.update({i: value_maps[i][sds] for i in ids})
            entries.append(entry)
        return entries

    def avg_entry(entry) -> dict[str, Any]:
        out: dict[str, Any] = {
            "sds": entry.sds,
            "uda": uda_of[entry.sds],
            "avg_rank": entry.avg_rank,
            "position": entry.position,
        }
        for i in ids:
            out[f"{i}_value"] = entry.values[i]
            out[f"{i}_rank"] = entry.ranks[i]
        return out

    return ReportBundle(
        percentiles=[p_label(p) for p in percentiles],
        summary_rows=[_summary_row_dict(r, percentiles) for r in summary.rows],
        summary_overall=_summary_row_dict(summary.overall, percentiles),
        discipline_rows=[_discipline_row_dict(r, percentiles) for r in discipline_rows],
        discipline_overall=(
            _discipline_row_dict(discipline_overall, percentiles)
            if discipline_overall is not None else None
        ),
        field_rows=[_field_row_dict(b, percentiles) for b in boards],
        correlation={
            "indicator_ids": list(correlations.indicator_ids),
            "matrix": [list(line) for line in correlations.values],
        },
        quadrant={
            "medians": dict(sorted(quadrant.medians.items())),
            "strong": quadrant_entries(quadrant.strong_union),
            "weak": quadrant_entries(quadrant.weak_union),
            "ambiguous": sorted(quadrant.ambiguous),
        },
        avg_rank={
            "entries": [avg_entry(e) for e in avg_rank.entries],
            "top": [avg_entry(e) for e in avg_rank.top],
            "bottom": [avg_entry(e) for e in avg_rank.bottom],
            "truncated": avg_rank.truncated,
        },
        rankings={
            r.indicator_id: [
                {"sds": sds, "value": value, "rank": rank} for sds, value, rank in r.ranked
            ]
            for r in rankings
        },
        top_bottom_k=top_bottom_k,
    )


def analytics_payload(result: PipelineResult) -> dict[str, Any]:
    """Full-precision analytics export (rankings, correlations, quadrants,
    average ranks); the report tables carry the rounded views."""
    k = result.bundle.top_bottom_k
    rankings = result.bundle.rankings
    return {
        "indicator_ids": list(result.correlations.indicator_ids),
        "rankings": rankings,
        "strongest": {i: entries[:k] for i, entries in rankings.items()},
        "weakest": {i: entries[-k:] for i, entries in rankings.items()},
        "spearman": {
            "indicator_ids": list(result.correlations.indicator_ids),
            "matrix": [list(line) for line in result.correlations.values],
        },
        "quadrants": {
            "medians": dict(sorted(result.quadrant.medians.items())),
            "strong_union": sorted(result.quadrant.strong_union),
            "weak_union": sorted(result.quadrant.weak_union),
            "ambiguous": sorted(result.quadrant.ambiguous),
        },
        "average_rank": result.bundle.avg_rank,
    }
