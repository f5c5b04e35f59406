"""Field-level research strength scoreboards.

Computes, from researcher rosters, publications, and citation counts:
highly cited articles by year and subject category, fractional author
scores, outlier-based top-scientist detection, two cost-normalized field
strength indicators, and the derived rankings, correlations, quadrant
classifications, and report tables.
"""

__version__ = "0.1.0"

from .model import AnalysisConfig, CostModel, ResearcherRecord, Taxonomy  # noqa: F401
from .ingest import Corpus, CorpusPaths, load_corpus  # noqa: F401
