"""Per-researcher fractional scores and outlier-based top-scientist detection.

A researcher's score at percentile p is the sum of 1/author_count over
their highly cited articles; top scientists are the researchers whose
score strictly exceeds the Tukey fence (q3 + multiplier * iqr) of their
field's full score distribution, zero scorers included.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .hca import HcaFlagSet, fractional_value
from .ingest import Corpus
from .model import CostModel, researcher_cost

RESCALE_FROM_FIELD = "field"
RESCALE_FROM_UDA = "uda_fallback"
RESCALE_FROM_NATIONAL = "national_fallback"
RESCALE_EXHAUSTED = "no_ts_anywhere"


@dataclass(frozen=True)
class ResearcherScore:
    researcher_id: str
    sds: str
    fhca_score: Mapping[float, float]
    frac_pub_output: float
    cost: float


@dataclass(frozen=True)
class TukeyFence:
    q1: float
    q3: float
    iqr: float
    threshold: float


def score_researchers(corpus: Corpus, flag_sets: Mapping[float, HcaFlagSet],
                      cost_model: CostModel) -> list[ResearcherScore]:
    """Fractional HCA score per percentile plus total fractional output
    and cost, for every roster researcher (zero scorers included).

    Output is sorted by (sds, researcher_id).
    """
    percentiles = sorted(flag_sets)
    pubs_by_researcher = corpus.pubs_by_researcher
    scores = []
    for researcher in corpus.researchers.values():
        fhca = dict.fromkeys(percentiles, 0.0)
        output = 0.0
        for pub_id in pubs_by_researcher.get(researcher.researcher_id, ()):
            share = fractional_value(corpus.publications[pub_id])
            output += share
            for p in percentiles:
                if pub_id in flag_sets[p].flagged:
                    fhca[p] += share
        scores.append(
            ResearcherScore(
                researcher_id=researcher.researcher_id,
                sds=researcher.sds,
                fhca_score=fhca,
                frac_pub_output=output,
                cost=researcher_cost(researcher, cost_model),
            )
        )
    scores.sort(key=lambda s: (s.sds, s.researcher_id))
    return scores


def tukey_fence(values: Sequence[float], multiplier: float = 1.5) -> TukeyFence:
    """Outlier fence from linearly interpolated quartiles.

    Quartiles sit at position (n-1)*q in the sorted data, interpolated
    between neighbouring order statistics (numpy's default "linear"
    method); the brute-force oracle pins the same convention.
    """
    if len(values) == 0:
        raise ValueError("tukey_fence of empty sequence")
    q1, q3 = np.quantile(np.asarray(values, dtype=float), [0.25, 0.75], method="linear")
    iqr = q3 - q1
    return TukeyFence(q1=float(q1), q3=float(q3), iqr=float(iqr),
                      threshold=float(q3 + multiplier * iqr))


def detect_top_scientists(field_scores: Sequence[ResearcherScore], p: float,
                          multiplier: float = 1.5) -> set[str]:
    """Researchers of one field whose score at p strictly exceeds the fence.

    field_scores must cover every professor of the field: the fence is a
    property of the whole distribution, non-producers included. With a
    degenerate all-equal distribution the fence equals the common value
    and nobody is an outlier.
    """
    if not field_scores:
        return set()
    fence = tukey_fence([s.fhca_score[p] for s in field_scores], multiplier)
    return {s.researcher_id for s in field_scores if s.fhca_score[p] > fence.threshold}


@dataclass(frozen=True)
class RescaleContext:
    """Fallback means for fields whose own top-scientist set is empty.

    Pooled mean fractional output of top scientists per (uda, p) and
    nationally per p; None where the pool itself is empty.
    """

    uda_mean: Mapping[tuple[str, float], Optional[float]]
    national_mean: Mapping[float, Optional[float]]
    use_uda: bool


def build_rescale_context(scores_by_sds: Mapping[str, Sequence[ResearcherScore]],
                          ts_by_sds: Mapping[str, Mapping[float, set[str]]],
                          sds_to_uda: Mapping[str, str],
                          percentiles: Sequence[float],
                          use_uda: bool) -> RescaleContext:
    pooled_uda: dict[tuple[str, float], list[float]] = {}
    pooled_national: dict[float, list[float]] = {p: [] for p in percentiles}
    for sds, scores in scores_by_sds.items():
        uda = sds_to_uda[sds]
        for p in percentiles:
            ts = ts_by_sds[sds][p]
            outputs = [s.frac_pub_output for s in scores if s.researcher_id in ts]
            pooled_uda.setdefault((uda, p), []).extend(outputs)
            pooled_national[p].extend(outputs)

    def mean(values: list[float]) -> Optional[float]:
        return sum(values) / len(values) if values else None

    return RescaleContext(
        uda_mean={key: mean(vals) for key, vals in pooled_uda.items()},
        national_mean={p: mean(vals) for p, vals in pooled_national.items()},
        use_uda=use_uda,
    )


def avg_ts_fractional_output(field_scores: Sequence[ResearcherScore], ts_set: set[str],
                             context: RescaleContext, uda: str, p: float,
                             ) -> tuple[float, str]:
    """Mean fractional publication output of the field's top scientists.

    Falls back to the discipline pool and then the national pool when
    the field has no top scientist; returns (0.0, "no_ts_anywhere") when
    every pool is empty. The second element records provenance.
    """
    outputs = [s.frac_pub_output for s in field_scores if s.researcher_id in ts_set]
    if outputs:
        return sum(outputs) / len(outputs), RESCALE_FROM_FIELD
    if context.use_uda:
        uda_mean = context.uda_mean.get((uda, p))
        if uda_mean is not None:
            return uda_mean, RESCALE_FROM_UDA
    national = context.national_mean.get(p)
    if national is not None:
        return national, RESCALE_FROM_NATIONAL
    return 0.0, RESCALE_EXHAUSTED


def write_researcher_scores_csv(scores: Sequence[ResearcherScore],
                                ts_ids_by_sds: Mapping[str, Mapping[float, frozenset[str]]],
                                path: Path) -> int:
    """Export one row per (researcher, percentile) with the TS verdict."""
    percentiles = sorted(scores[0].fhca_score) if scores else []
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["researcher_id", "sds", "p", "fhca_score", "frac_pub_output", "is_ts"])
        n = 0
        labels = {p: str(int(p)) if float(p).is_integer() else str(p) for p in percentiles}
        for score in scores:
            for p in percentiles:
                is_ts = score.researcher_id in ts_ids_by_sds[score.sds][p]
                writer.writerow([
                    score.researcher_id, score.sds, labels[p],
                    repr(score.fhca_score[p]), repr(score.frac_pub_output),
                    str(is_ts).lower(),
                ])
                n += 1
    return n
