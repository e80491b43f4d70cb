"""Benchmark orchestration: plans, scorers, runs, reports and throughput."""

from __future__ import annotations

import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import median

from . import ontosim, strsim, vecsim
from .core import (
    BenchmarkRun,
    Dataset,
    RawSentence,
    attach_annotations,
    load_annotations,
    load_dataset,
    write_raw_scores,
)
from .preprocess import PreprocessConfig, config_grid, preprocess
from .stats import DegenerateDataError, harmonic, pearson, spearman


class PlanError(ValueError):
    """Invalid benchmark plan or unresolvable resource."""


STRING_MEASURES = ("qgram", "jaccard", "block", "liblock", "levenshtein", "overlap")
ONTOLOGY_MEASURES = ("wbsm-rada", "wbsm-jc", "ubsm-rada", "ubsm-jc", "com")
SWEM_PREFIX = "swem:"


def known_measure(measure_id: str) -> bool:
    return (
        measure_id in STRING_MEASURES
        or measure_id in ONTOLOGY_MEASURES
        or (measure_id.startswith(SWEM_PREFIX) and measure_id[len(SWEM_PREFIX):] in vecsim.POOLING_MODES)
    )


@dataclass
class Resources:
    """Shared immutable models loaded once per plan."""

    vectors: vecsim.VectorModel | None = None
    taxonomy: ontosim.Taxonomy | None = None
    lexicon: dict[str, frozenset[str]] | None = None


class PairScorer:
    """Scores raw sentence pairs for one (measure, preprocessing) choice.

    Pre-processed token sequences are cached per sentence so grids over
    many measures do not re-tokenize; the cache is verified against fresh
    recomputation in the test suite.
    """

    def __init__(self, measure_id: str, config: PreprocessConfig, resources: Resources):
        if not known_measure(measure_id):
            raise PlanError(f"unknown measure id {measure_id!r}")
        self.measure_id = measure_id
        self.config = config
        self.resources = resources
        self.signed = measure_id.startswith(SWEM_PREFIX)
        self._cache: dict[tuple[RawSentence, PreprocessConfig], tuple[str, ...]] = {}
        self._word_measures: dict[str, ontosim.WordSimMeasure] = {}
        if measure_id.startswith(SWEM_PREFIX) and resources.vectors is None:
            raise PlanError(f"measure {measure_id!r} requires a word-vector model")
        if measure_id in ONTOLOGY_MEASURES and (resources.taxonomy is None or resources.lexicon is None):
            raise PlanError(f"measure {measure_id!r} requires a taxonomy and lexicon")

    def _tokens(self, sentence: RawSentence, config: PreprocessConfig) -> tuple[str, ...]:
        key = (sentence, config)
        if key not in self._cache:
            self._cache[key] = preprocess(sentence, config)
        return self._cache[key]

    def clear_cache(self) -> None:
        self._cache.clear()

    def _word_measure(self, kind: str) -> ontosim.WordSimMeasure:
        if kind not in self._word_measures:
            self._word_measures[kind] = ontosim.WordSimMeasure(
                kind, self.resources.taxonomy, self.resources.lexicon)
        return self._word_measures[kind]

    def score(self, s1: RawSentence, s2: RawSentence) -> float:
        mid = self.measure_id
        if mid in ONTOLOGY_MEASURES:
            return self._score_ontology(s1, s2)
        t1 = self._tokens(s1, self.config)
        t2 = self._tokens(s2, self.config)
        if mid == "qgram":
            return strsim.qgram_sim(t1, t2)
        if mid == "jaccard":
            return strsim.jaccard_sim(t1, t2)
        if mid == "block":
            return strsim.block_distance_sim(t1, t2)
        if mid == "liblock":
            return strsim.liblock_sim(t1, t2)
        if mid == "levenshtein":
            return strsim.levenshtein_sim(t1, t2)
        if mid == "overlap":
            return strsim.overlap_sim(t1, t2)
        mode = mid[len(SWEM_PREFIX):]
        raw = vecsim.swem_sim(t1, t2, self.resources.vectors, mode)
        return vecsim.rescale_signed(raw)

    def _score_ontology(self, s1: RawSentence, s2: RawSentence) -> float:
        mid = self.measure_id
        word_cfg = replace(self.config, ner="none")
        concept_cfg = replace(self.config, ner="annotations")
        if mid == "com":
            rada = self._word_measure("rada")
            w = ontosim.wbsm(self._tokens(s1, word_cfg), self._tokens(s2, word_cfg), rada)
            u = ontosim.ubsm(self._tokens(s1, concept_cfg), self._tokens(s2, concept_cfg), rada)
            return ontosim.com(w, u)
        family, kind = mid.split("-")
        measure = self._word_measure("rada" if kind == "rada" else "jiang-conrath")
        cfg = word_cfg if family == "wbsm" else concept_cfg
        return ontosim.wbsm(self._tokens(s1, cfg), self._tokens(s2, cfg), measure)


@dataclass
class MeasureSpec:
    measure_id: str
    configs: list[PreprocessConfig]


@dataclass
class BenchmarkPlan:
    datasets: dict[str, Path]
    measures: list[MeasureSpec]
    out_dir: Path = Path("results")
    threads: int = 1
    vectors: Path | None = None
    taxonomy: Path | None = None
    lexicon: Path | None = None
    annotations: dict[str, Path] = field(default_factory=dict)


def _effective_threads(plan: BenchmarkPlan) -> int:
    env = os.environ.get("STSBENCH_THREADS")
    if env:
        return max(1, int(env))
    return max(1, plan.threads)


def validate_plan(plan: BenchmarkPlan) -> Resources:
    """Fail-fast resolution of every named resource in the plan."""
    if not plan.datasets:
        raise PlanError("plan names no datasets")
    if not plan.measures:
        raise PlanError("plan names no measures")
    for name, path in plan.datasets.items():
        if not Path(path).is_file():
            raise PlanError(f"dataset {name!r}: no such file {path}")
    for name, path in plan.annotations.items():
        if name not in plan.datasets:
            raise PlanError(f"annotations given for unknown dataset {name!r}")
        if not Path(path).is_file():
            raise PlanError(f"annotations for {name!r}: no such file {path}")
    seen: set[tuple[str, PreprocessConfig]] = set()
    for spec in plan.measures:
        if not known_measure(spec.measure_id):
            raise PlanError(f"unknown measure id {spec.measure_id!r}")
        for cfg in spec.configs:
            key = (spec.measure_id, cfg)
            if key in seen:
                raise PlanError(f"duplicate measure entry {spec.measure_id!r} ({cfg.label()})")
            seen.add(key)
    resources = Resources()
    if plan.vectors is not None:
        resources.vectors = vecsim.load_vectors(plan.vectors)
    if plan.taxonomy is not None:
        resources.taxonomy = ontosim.load_taxonomy(plan.taxonomy)
    if plan.lexicon is not None:
        resources.lexicon = ontosim.load_lexicon(plan.lexicon)
    # constructing a scorer re-checks per-measure resource requirements
    for spec in plan.measures:
        for cfg in spec.configs:
            PairScorer(spec.measure_id, cfg, resources)
    return resources


def load_plan_datasets(plan: BenchmarkPlan) -> dict[str, Dataset]:
    datasets = {}
    for name, path in plan.datasets.items():
        ds = load_dataset(path, name=name)
        if name in plan.annotations:
            ds = attach_annotations(ds, load_annotations(plan.annotations[name]))
        datasets[name] = ds
    return datasets


def score_dataset(scorer: PairScorer, dataset: Dataset, threads: int = 1) -> BenchmarkRun:
    """Score every pair of a dataset; deterministic for any thread count."""

    def one(indexed):
        i, pair = indexed
        try:
            return scorer.score(pair.s1, pair.s2)
        except Exception as exc:
            raise RuntimeError(
                f"{scorer.measure_id} failed on pair {i} of {dataset.name!r}: {exc}") from exc

    items = list(enumerate(dataset.pairs))
    if threads <= 1:
        scores = [one(it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(one, items))
    return BenchmarkRun(dataset.name, scorer.measure_id, scorer.config.label(), tuple(scores))


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    measure_id: str
    config: str
    r: float
    rho: float
    h: float


@dataclass
class EvalReport:
    rows: list[ReportRow]

    def average_h(self, measure_id: str, config: str) -> float:
        hs = [row.h for row in self.rows if row.measure_id == measure_id and row.config == config]
        if not hs:
            raise ValueError(f"no rows for {measure_id!r} with config {config!r}")
        return sum(hs) / len(hs)

    def configs_for(self, measure_id: str) -> list[str]:
        seen: list[str] = []
        for row in self.rows:
            if row.measure_id == measure_id and row.config not in seen:
                seen.append(row.config)
        return seen

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("dataset,method,config,r,rho,h\n")
            for row in self.rows:
                fh.write(f"{row.dataset},{row.measure_id},\"{row.config}\","
                         f"{row.r:.6f},{row.rho:.6f},{row.h:.6f}\n")

    def format_table(self) -> str:
        header = f"{'dataset':<12} {'method':<12} {'r':>8} {'rho':>8} {'h':>8}  config"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            lines.append(f"{row.dataset:<12} {row.measure_id:<12} "
                         f"{row.r:8.3f} {row.rho:8.3f} {row.h:8.3f}  {row.config}")
        return "\n".join(lines)


def best_config(report: EvalReport, measure_id: str) -> str:
    """Config label maximizing the mean harmonic score across datasets.

    Exact ties resolve to the earlier config in grid order, with a warning.
    """
    configs = report.configs_for(measure_id)
    if not configs:
        raise ValueError(f"report has no rows for measure {measure_id!r}")
    scores = [report.average_h(measure_id, c) for c in configs]
    finite = [s for s in scores if s == s]
    if not finite:
        raise ValueError(f"every config of {measure_id!r} was degenerate")
    best = max(finite)
    winners = [c for c, s in zip(configs, scores) if s == best]
    if len(winners) > 1:
        warnings.warn(f"{measure_id}: {len(winners)} configs tie at h={best:.6f}; "
                      "keeping the earliest in grid order")
    return winners[0]


def _run_file_name(run: BenchmarkRun) -> str:
    safe_cfg = run.preprocess_config.replace("=", "-").replace(",", "_")
    return f"{run.dataset_name}__{run.measure_id.replace(':', '-')}__{safe_cfg}.csv"


def run(plan: BenchmarkPlan) -> tuple[list[BenchmarkRun], EvalReport]:
    """Execute a validated plan: score, persist raw CSVs, build the report."""
    resources = validate_plan(plan)
    datasets = load_plan_datasets(plan)
    threads = _effective_threads(plan)
    out_dir = Path(plan.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runs: list[BenchmarkRun] = []
    rows: list[ReportRow] = []
    for spec in plan.measures:
        for cfg in spec.configs:
            scorer = PairScorer(spec.measure_id, cfg, resources)
            for name, dataset in datasets.items():
                result = score_dataset(scorer, dataset, threads)
                write_raw_scores(result, out_dir / _run_file_name(result))
                try:
                    r = pearson(result.scores, dataset.human_scores())
                    rho = spearman(result.scores, dataset.human_scores())
                    h = harmonic(r, rho)
                except DegenerateDataError as exc:
                    warnings.warn(f"{spec.measure_id} on {name!r} ({cfg.label()}): {exc}; "
                                  "reporting nan")
                    r = rho = h = float("nan")
                rows.append(ReportRow(name, spec.measure_id, cfg.label(), r, rho, h))
                runs.append(result)
    return runs, EvalReport(rows)


def grid_specs(measure_id: str, ner: str = "none") -> MeasureSpec:
    """A measure paired with the full 48-point pre-processing grid."""
    grid = config_grid(
        {
            "ner": [ner],
            "tokenizer": ["whitespace", "treebank-rules"],
            "lowercase": [True, False],
            "char_filter": ["none", "default", "biosses", "blagec2019"],
            "stopwords": ["none", "biosses", "nltk2018"],
        }
    )
    return MeasureSpec(measure_id, grid)


def throughput(scorer: PairScorer, dataset: Dataset, repeats: int = 3) -> float:
    """Median pairs/second over repeats, timing pre-processing plus scoring."""
    if repeats < 3:
        raise ValueError(f"repeats must be >= 3, got {repeats}")
    times = []
    for _ in range(repeats):
        scorer.clear_cache()
        start = time.perf_counter()
        for pair in dataset.pairs:
            scorer.score(pair.s1, pair.s2)
        times.append(time.perf_counter() - start)
    return len(dataset) / median(times)
