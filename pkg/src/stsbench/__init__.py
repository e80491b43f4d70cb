"""Sentence similarity measures and a reproducible benchmark harness.

The package is organised as a small library plus a CLI:

* :mod:`stsbench.core` -- dataset ingestion, annotations, raw-score files
* :mod:`stsbench.preprocess` -- the five-stage sentence pre-processing pipeline
* :mod:`stsbench.strsim` -- string-based sentence similarity measures
* :mod:`stsbench.ontosim` -- taxonomy-based sentence similarity measures
* :mod:`stsbench.vecsim` -- pooled word-embedding sentence similarity
* :mod:`stsbench.stats` -- correlation metrics, significance tests, error analysis
* :mod:`stsbench.bench` -- benchmark orchestration used by the ``stsbench`` CLI
"""

__version__ = "0.1.0"
