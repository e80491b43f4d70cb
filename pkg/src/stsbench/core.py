"""Domain types, dataset ingestion and raw-score persistence.

File formats handled here:

* Dataset TSV: ``sentence1<TAB>sentence2<TAB>score`` per line, UTF-8, LF.
  A header line is auto-detected when the third field is not numeric.
  Extra trailing columns are ignored with a warning.
* Annotation sidecar TSV: ``row_index<TAB>s1|s2<TAB>start<TAB>end<TAB>code``.
* Raw-score CSV: header ``pair_index,score``, one row per pair, scores
  rendered with 17 significant digits so that a read/write round trip is
  bit-exact.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path


class DatasetError(ValueError):
    """Malformed dataset, annotation or raw-score file."""


@dataclass(frozen=True)
class Annotation:
    """A character span of a sentence labelled with an opaque concept code."""

    start: int
    end: int
    code: str

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise DatasetError(f"invalid span ({self.start}, {self.end})")
        if not self.code:
            raise DatasetError("empty concept code")


def _check_spans(text: str, annotations: tuple[Annotation, ...]) -> None:
    ordered = sorted(annotations, key=lambda a: a.start)
    prev_end = 0
    for ann in ordered:
        if ann.end > len(text):
            raise DatasetError(f"span ({ann.start}, {ann.end}) exceeds text length {len(text)}")
        if ann.start < prev_end:
            raise DatasetError(f"overlapping annotation span at {ann.start}")
        prev_end = ann.end


@dataclass(frozen=True)
class RawSentence:
    """A raw input sentence, optionally carrying concept annotations."""

    text: str
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self):
        _check_spans(self.text, self.annotations)


@dataclass(frozen=True)
class SentencePair:
    s1: RawSentence
    s2: RawSentence
    human_score: float

    def __post_init__(self):
        if not 0.0 <= self.human_score <= 1.0:
            raise DatasetError(f"human score {self.human_score} outside [0, 1]")


@dataclass(frozen=True)
class Dataset:
    """An ordered, non-empty collection of scored sentence pairs."""

    name: str
    pairs: tuple[SentencePair, ...]

    def __post_init__(self):
        if not self.pairs:
            raise DatasetError(f"dataset {self.name!r} is empty")

    def __len__(self) -> int:
        return len(self.pairs)

    def human_scores(self) -> list[float]:
        return [p.human_score for p in self.pairs]


@dataclass(frozen=True)
class BenchmarkRun:
    """Raw per-pair scores of one measure over one dataset."""

    dataset_name: str
    measure_id: str
    preprocess_config: str
    scores: tuple[float, ...]

    def __post_init__(self):
        if not self.scores:
            raise DatasetError("benchmark run has no scores")


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def load_dataset(path: str | Path, name: str | None = None) -> Dataset:
    """Load a sentence-pair dataset from a TSV file.

    If any score exceeds 1, the whole score column is min-max normalized to
    [0, 1] and a warning is emitted.
    """
    path = Path(path)
    rows: list[tuple[str, str, float]] = []
    warned_extra = False
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise DatasetError(f"{path}:{lineno}: expected >= 3 tab-separated fields, got {len(fields)}")
            if lineno == 1 and not _is_number(fields[2]):
                continue  # header line
            if len(fields) > 3 and not warned_extra:
                warnings.warn(f"{path}: ignoring extra trailing columns (first seen at line {lineno})")
                warned_extra = True
            if not _is_number(fields[2]):
                raise DatasetError(f"{path}:{lineno}: score {fields[2]!r} is not a number")
            rows.append((fields[0], fields[1], float(fields[2])))
    if not rows:
        raise DatasetError(f"{path}: no sentence pairs")
    scores = [r[2] for r in rows]
    if max(scores) > 1.0:
        lo, hi = min(scores), max(scores)
        warnings.warn(f"{path}: scores exceed 1, min-max normalizing column from [{lo}, {hi}] to [0, 1]")
        if hi == lo:
            scores = [1.0 for _ in scores]
        else:
            scores = [(s - lo) / (hi - lo) for s in scores]
    pairs = tuple(
        SentencePair(RawSentence(s1), RawSentence(s2), sc)
        for (s1, s2, _), sc in zip(rows, scores)
    )
    return Dataset(name or path.stem, pairs)


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset back to canonical TSV (sentence1, sentence2, score)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for p in dataset.pairs:
            fh.write(f"{p.s1.text}\t{p.s2.text}\t{_render_score(p.human_score)}\n")


SentenceId = tuple[int, str]  # (row index, "s1" | "s2")

_SIDES = ("s1", "s2")


def load_annotations(path: str | Path) -> dict[SentenceId, list[Annotation]]:
    """Load an annotation sidecar file.

    Span bounds can only be checked against sentence text at attach time
    (see :func:`attach_annotations`); overlap and ordering are checked here.
    """
    path = Path(path)
    out: dict[SentenceId, list[Annotation]] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise DatasetError(f"{path}:{lineno}: expected 5 fields, got {len(fields)}")
            row_s, side, start_s, end_s, code = fields
            if side not in _SIDES:
                raise DatasetError(f"{path}:{lineno}: sentence selector must be s1 or s2, got {side!r}")
            try:
                row, start, end = int(row_s), int(start_s), int(end_s)
            except ValueError as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from None
            try:
                ann = Annotation(start, end, code)
            except DatasetError as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from None
            out.setdefault((row, side), []).append(ann)
    for key, anns in out.items():
        ordered = sorted(anns, key=lambda a: a.start)
        for prev, cur in zip(ordered, ordered[1:]):
            if cur.start < prev.end:
                raise DatasetError(f"{path}: overlapping spans for sentence {key}")
        out[key] = ordered
    return out


def attach_annotations(dataset: Dataset, annotations: dict[SentenceId, list[Annotation]]) -> Dataset:
    """Return a copy of the dataset with sidecar annotations attached.

    Rejects sentence ids outside the dataset; span bounds are validated by
    the RawSentence constructor.
    """
    for (row, side) in annotations:
        if not 0 <= row < len(dataset):
            raise DatasetError(f"annotation refers to unknown row {row}")
    pairs = []
    for i, pair in enumerate(dataset.pairs):
        s1 = pair.s1
        s2 = pair.s2
        if (i, "s1") in annotations:
            s1 = RawSentence(s1.text, tuple(annotations[(i, "s1")]))
        if (i, "s2") in annotations:
            s2 = RawSentence(s2.text, tuple(annotations[(i, "s2")]))
        pairs.append(replace(pair, s1=s1, s2=s2))
    return Dataset(dataset.name, tuple(pairs))


def _render_score(x: float) -> str:
    return format(x, ".17g")


def write_raw_scores(run: BenchmarkRun, path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["pair_index", "score"])
            for i, score in enumerate(run.scores):
                writer.writerow([i, _render_score(score)])
    except OSError as exc:
        raise DatasetError(f"cannot write raw scores to {path}: {exc}") from exc


def read_raw_scores(path: str | Path, dataset_name: str = "", measure_id: str = "",
                    preprocess_config: str = "") -> BenchmarkRun:
    path = Path(path)
    scores: list[float] = []
    try:
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["pair_index", "score"]:
                raise DatasetError(f"{path}: unexpected header {header}")
            for row in reader:
                if len(row) != 2:
                    raise DatasetError(f"{path}: malformed row {row}")
                scores.append(float(row[1]))
    except OSError as exc:
        raise DatasetError(f"cannot read raw scores from {path}: {exc}") from exc
    return BenchmarkRun(dataset_name, measure_id, preprocess_config, tuple(scores))
