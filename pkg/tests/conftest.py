from __future__ import annotations

from pathlib import Path

import pytest

from fieldstrength.indicators import FieldScoreboard
from fieldstrength.ingest import (
    AuthorshipLink,
    Corpus,
    CorpusPaths,
    LoadReport,
    PublicationRecord,
    load_corpus,
)
from fieldstrength.model import AnalysisConfig, CostModel, ResearcherRecord, Taxonomy
from fieldstrength.pipeline import PipelineResult, run_pipeline
from fieldstrength.synth import SynthParams, generate


def mk_taxonomy(sds_to_uda: dict[str, str]) -> Taxonomy:
    return Taxonomy(
        sds_to_uda=sds_to_uda,
        sds_names={s: f"Field {s}" for s in sds_to_uda},
        uda_names={u: f"Discipline {u}" for u in sds_to_uda.values()},
    )


def mk_corpus(researchers, pubs, links, sds_to_uda, config=None) -> Corpus:
    """Assemble a Corpus directly, bypassing the CSV layer.

    researchers: (id, sds, {year: rank}); pubs: (id, year, citations,
    author_count, [categories]); links: (pub_id, researcher_id).
    """
    config = config or AnalysisConfig()
    return Corpus(
        taxonomy=mk_taxonomy(sds_to_uda),
        researchers={
            rid: ResearcherRecord(researcher_id=rid, sds=sds, rank_by_year=dict(ranks))
            for rid, sds, ranks in researchers
        },
        publications={
            pid: PublicationRecord(
                pub_id=pid, year=year, citations=cits, author_count=n,
                subject_categories=tuple(sorted(cats)),
            )
            for pid, year, cits, n, cats in pubs
        },
        authorships=tuple(AuthorshipLink(p, r) for p, r in sorted(links)),
        config=config,
        report=LoadReport(),
    )


def mk_board(sds: str, uda: str, fss_ts: dict[float, float], fss_fhca: dict[float, float],
             total_cost: float = 1e6, n_professors: int = 10,
             provenance: dict[float, str] | None = None) -> FieldScoreboard:
    percentiles = sorted(fss_ts)
    return FieldScoreboard(
        sds=sds,
        uda=uda,
        n_professors=n_professors,
        n_by_rank={"assistant": n_professors, "associate": 0, "full": 0},
        total_cost=total_cost,
        ts_ids={p: frozenset() for p in percentiles},
        fhca_total={p: 0.0 for p in percentiles},
        fhca_rescaled={p: 0.0 for p in percentiles},
        fss_ts=dict(fss_ts),
        fss_fhca=dict(fss_fhca),
        rescale_provenance=provenance or {p: "field" for p in percentiles},
    )


def write_csvs(tmp: Path, taxonomy: list[str], researchers: list[str],
               publications: list[str], authorships: list[str]) -> CorpusPaths:
    """Write raw CSV lines (without headers) to a temp corpus."""
    headers = {
        "taxonomy": "sds_code,sds_name,uda_code,uda_name",
        "researchers": "researcher_id,sds_code,year,rank",
        "publications": "pub_id,year,citations,author_count,subject_categories",
        "authorships": "pub_id,researcher_id",
    }
    rows = {
        "taxonomy": taxonomy,
        "researchers": researchers,
        "publications": publications,
        "authorships": authorships,
    }
    paths = {}
    for name, header in headers.items():
        path = tmp / f"{name}.csv"
        path.write_text("\n".join([header] + rows[name]) + "\n", encoding="utf-8")
        paths[name] = path
    return CorpusPaths(**paths)


MINI_TAXONOMY = ["S1,Field one,U1,Discipline one"]
MINI_RESEARCHERS = ["r1,S1,2012,assistant", "r1,S1,2013,assistant", "r1,S1,2014,associate"]
MINI_PUBLICATIONS = ["p1,2013,7,2,A"]
MINI_AUTHORSHIPS = ["p1,r1"]


@pytest.fixture
def mini_paths(tmp_path) -> CorpusPaths:
    return write_csvs(tmp_path, MINI_TAXONOMY, MINI_RESEARCHERS,
                      MINI_PUBLICATIONS, MINI_AUTHORSHIPS)


@pytest.fixture(scope="session")
def default_synth_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("synth-default")
    generate(SynthParams(), out)
    return out


@pytest.fixture(scope="session")
def default_corpus(default_synth_dir) -> Corpus:
    paths = CorpusPaths(
        taxonomy=default_synth_dir / "taxonomy.csv",
        researchers=default_synth_dir / "researchers.csv",
        publications=default_synth_dir / "publications.csv",
        authorships=default_synth_dir / "authorships.csv",
    )
    return load_corpus(paths, AnalysisConfig())


@pytest.fixture(scope="session")
def default_result(default_corpus) -> PipelineResult:
    return run_pipeline(default_corpus, CostModel(), top_bottom_k=10)
