"""Citation cells and highly-cited-article flagging.

Publications are compared only against publications of the same year and
subject category (one "cell" per pair). A publication is highly cited at
percentile p when fewer than p% of its cell rank strictly above it; ties
share the better outcome. Multi-category publications are judged in
every one of their cells and keep the most favourable result.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .ingest import PublicationRecord


@dataclass(frozen=True)
class CitationCell:
    """All publications of one (year, subject category) pair."""

    year: int
    category: str
    pub_ids: tuple[str, ...]
    citations: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.pub_ids)

    @property
    def members(self) -> list[tuple[str, int]]:
        return list(zip(self.pub_ids, self.citations))


@dataclass(frozen=True)
class HcaFlagSet:
    """Publications flagged as highly cited at one percentile threshold.

    best_category records, for each flagged publication, the category in
    which it achieved its best cell standing (smallest share of members
    strictly above it; ties broken by category code).
    """

    p: float
    flagged: frozenset[str]
    best_category: Mapping[str, str]


def build_cells(publications: Iterable[PublicationRecord]) -> list[CitationCell]:
    """Group publications into (year, category) cells.

    A publication with several categories appears in one cell per
    category. Cells come back sorted by (year, category) with members
    sorted by pub_id, so the output is independent of input order.
    """
    groups: dict[tuple[int, str], list[tuple[str, int]]] = {}
    for pub in publications:
        for category in pub.subject_categories:
            groups.setdefault((pub.year, category), []).append((pub.pub_id, pub.citations))
    cells = []
    for (year, category), members in sorted(groups.items()):
        members.sort()
        cells.append(
            CitationCell(
                year=year,
                category=category,
                pub_ids=tuple(m[0] for m in members),
                citations=tuple(m[1] for m in members),
            )
        )
    return cells


def is_top_p(pub_id: str, cell: CitationCell, p: float) -> bool:
    """True iff pub_id places in the top p% of its cell.

    The criterion is rank-based: with b = number of cell members with
    strictly more citations, the publication qualifies iff
    100*b < p*size. Every member of a tie group gets the same b, so the
    whole group is either in or out together; a singleton cell always
    qualifies (b = 0). p = 100 is the all-flagged limit.
    """
    if not 0 < p <= 100:
        raise ValueError(f"percentile must be in (0, 100], got {p}")
    try:
        idx = cell.pub_ids.index(pub_id)
    except ValueError:
        raise ValueError(f"publication {pub_id!r} is not in cell ({cell.year}, {cell.category})")
    own = cell.citations[idx]
    b = sum(1 for c in cell.citations if c > own)
    return 100.0 * b < p * cell.size


def _strictly_above_counts(citations: np.ndarray) -> np.ndarray:
    """For each entry, how many entries of the same cell are strictly larger."""
    ordered = np.sort(citations)
    return citations.size - np.searchsorted(ordered, citations, side="right")


def flag_hcas(cells: Iterable[CitationCell], p: float) -> HcaFlagSet:
    """Flag publications highly cited at percentile p across all cells.

    A multi-category publication is flagged if it qualifies in at least
    one of its cells (the most favourable category counts).
    """
    if not 0 < p <= 100:
        raise ValueError(f"percentile must be in (0, 100], got {p}")
    flagged: set[str] = set()
    # (share strictly above, category) per pub; smaller share = better standing
    best: dict[str, tuple[float, str]] = {}
    for cell in cells:
        counts = _strictly_above_counts(np.asarray(cell.citations, dtype=np.int64))
        for pub_id, b in zip(cell.pub_ids, counts):
            standing = (b / cell.size, cell.category)
            prev = best.get(pub_id)
            if prev is None or standing < prev:
                best[pub_id] = standing
            if 100.0 * b < p * cell.size:
                flagged.add(pub_id)
    return HcaFlagSet(
        p=p,
        flagged=frozenset(flagged),
        best_category={pub_id: best[pub_id][1] for pub_id in flagged},
    )


def fractional_value(pub: PublicationRecord) -> float:
    """Each author's share of one publication: 1 / author_count."""
    if pub.author_count < 1:
        raise ValueError(f"publication {pub.pub_id} has author_count {pub.author_count}")
    return 1.0 / pub.author_count


def write_flags_csv(flag_sets: Mapping[float, HcaFlagSet], path: Path) -> int:
    """Export flagged publications with the category of their best standing."""
    rows = []
    for p in sorted(flag_sets):
        flags = flag_sets[p]
        label = str(int(p)) if float(p).is_integer() else str(p)
        for pub_id in sorted(flags.flagged):
            rows.append((pub_id, label, flags.best_category[pub_id]))
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["pub_id", "p", "category_of_best_rank"])
        writer.writerows(rows)
    return len(rows)
