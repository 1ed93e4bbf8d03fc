"""viscorpus: corpus engineering for visualization-query/text datasets.

Pipeline pieces: VQL parsing/normalization (``viscorpus.vql``), schema
filtration and linearization (``viscorpus.schema``), table linearization
(``viscorpus.table``), dataset ingestion and partitioning
(``viscorpus.dataset``), pre-training corpus construction
(``viscorpus.corpus``), and evaluation metrics (``viscorpus.metrics``).
"""

__version__ = "0.1.0"
