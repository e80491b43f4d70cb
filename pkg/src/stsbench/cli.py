"""Command-line benchmark driver.

Subcommands::

    stsbench run             score measures over datasets, write reports
    stsbench grid            sweep the full pre-processing grid per measure
    stsbench significance    pairwise t-tests over uniform dataset splits
    stsbench error-analysis  per-pair errors and their density estimate
    stsbench throughput      median pairs/second of one measure
    stsbench validate        fail-fast plan and resource check

Datasets, annotations, resources and measures come either from repeatable
flags or from a plan file (see the README for the plan grammar). Flags
override plan entries.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, stats
from .bench import BenchmarkPlan, MeasureSpec, PairScorer, PlanError
from .preprocess import PreprocessConfig


def _parse_bool(value: str) -> bool:
    if value in ("yes", "true", "1"):
        return True
    if value in ("no", "false", "0"):
        return False
    raise PlanError(f"expected yes/no, got {value!r}")


_CONFIG_KEYS = ("ner", "tokenizer", "lowercase", "char_filter", "stopwords")


def _config_from_items(items: dict[str, str], base: PreprocessConfig | None = None) -> PreprocessConfig:
    kwargs = {}
    for key, value in items.items():
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise PlanError(f"unknown pre-processing option {key!r}")
        kwargs[key] = _parse_bool(value) if key == "lowercase" else value
    if base is not None:
        merged = {k: getattr(base, k) for k in _CONFIG_KEYS}
        merged.update(kwargs)
        kwargs = merged
    return PreprocessConfig(**kwargs)


def _parse_measure_entry(entry: str, base: PreprocessConfig) -> MeasureSpec:
    """``id`` or ``id @ key=value,...`` with the inline part overriding base."""
    if "@" in entry:
        mid, _, cfg_part = entry.partition("@")
        items = {}
        for piece in cfg_part.strip().split(","):
            if "=" not in piece:
                raise PlanError(f"bad measure config fragment {piece!r} in {entry!r}")
            k, _, v = piece.partition("=")
            items[k.strip()] = v.strip()
        return MeasureSpec(mid.strip(), [_config_from_items(items, base)])
    return MeasureSpec(entry.strip(), [base])


def parse_plan_file(path: str | Path) -> dict:
    """Parse the flat ``key = value`` plan grammar into a raw dict.

    Repeatable keys (``measure``) accumulate; ``dataset.NAME`` and
    ``annotations.NAME`` populate per-dataset maps.
    """
    raw = {"datasets": {}, "annotations": {}, "measures": [], "options": {}}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise PlanError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("dataset."):
            raw["datasets"][key[len("dataset."):]] = value
        elif key.startswith("annotations."):
            raw["annotations"][key[len("annotations."):]] = value
        elif key == "measure":
            raw["measures"].append(value)
        else:
            raw["options"][key] = value
    return raw


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--plan", help="plan file; flags override its entries")
    p.add_argument("--dataset", action="append", default=[], metavar="NAME=PATH",
                   help="dataset TSV, repeatable")
    p.add_argument("--annotations", action="append", default=[], metavar="NAME=PATH",
                   help="annotation sidecar TSV for a named dataset, repeatable")
    p.add_argument("--measure", action="append", default=[], metavar="ID",
                   help="measure id, optionally 'id @ key=value,...', repeatable")
    p.add_argument("--vectors", help="word-vector text file")
    p.add_argument("--taxonomy", help="taxonomy edge file (child<TAB>parent)")
    p.add_argument("--lexicon", help="surface-form lexicon file")
    p.add_argument("--out", help="output directory (default: results)")
    p.add_argument("--threads", type=int, help="worker threads (STSBENCH_THREADS overrides)")
    p.add_argument("--ner", choices=("none", "annotations"))
    p.add_argument("--tokenizer", choices=("whitespace", "treebank-rules"))
    p.add_argument("--lowercase", choices=("yes", "no"))
    p.add_argument("--char-filter", choices=("none", "default", "biosses", "blagec2019"))
    p.add_argument("--stopwords", choices=("none", "biosses", "nltk2018"))


def _split_name_path(values: list[str], flag: str) -> dict[str, str]:
    out = {}
    for v in values:
        if "=" not in v:
            raise PlanError(f"--{flag} expects NAME=PATH, got {v!r}")
        name, _, path = v.partition("=")
        out[name] = path
    return out


def build_plan(args: argparse.Namespace, grid: bool = False) -> BenchmarkPlan:
    """Merge plan file and flags into a validated-shape BenchmarkPlan."""
    raw = parse_plan_file(args.plan) if args.plan else {
        "datasets": {}, "annotations": {}, "measures": [], "options": {}}
    options = raw["options"]
    datasets = dict(raw["datasets"])
    datasets.update(_split_name_path(args.dataset, "dataset"))
    annotations = dict(raw["annotations"])
    annotations.update(_split_name_path(args.annotations, "annotations"))
    measure_entries = list(raw["measures"]) + list(args.measure)

    cfg_items = {k: options[k] for k in _CONFIG_KEYS if k in options}
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg_items[key] = flag
    base = _config_from_items(cfg_items)

    grid = grid or _parse_bool(options.get("grid", "no"))
    specs = []
    for entry in measure_entries:
        spec = _parse_measure_entry(entry, base)
        if grid:
            spec = bench.grid_specs(spec.measure_id, ner=base.ner)
        specs.append(spec)

    def opt(flag_name, plan_key):
        v = getattr(args, flag_name, None)
        return v if v is not None else options.get(plan_key)

    vectors = opt("vectors", "vectors")
    taxonomy = opt("taxonomy", "taxonomy")
    lexicon = opt("lexicon", "lexicon")
    out = opt("out", "out") or "results"
    threads = opt("threads", "threads") or 1
    return BenchmarkPlan(
        datasets={k: Path(v) for k, v in datasets.items()},
        measures=specs,
        out_dir=Path(out),
        threads=int(threads),
        vectors=Path(vectors) if vectors else None,
        taxonomy=Path(taxonomy) if taxonomy else None,
        lexicon=Path(lexicon) if lexicon else None,
        annotations={k: Path(v) for k, v in annotations.items()},
    )


def _cmd_run(args) -> int:
    plan = build_plan(args)
    runs, report = bench.run(plan)
    report.write_csv(Path(plan.out_dir) / "report.csv")
    print(report.format_table())
    print(f"\n{len(runs)} runs written to {plan.out_dir}")
    return 0


def _cmd_grid(args) -> int:
    plan = build_plan(args, grid=True)
    _, report = bench.run(plan)
    report.write_csv(Path(plan.out_dir) / "report.csv")
    for spec in plan.measures:
        best = bench.best_config(report, spec.measure_id)
        h = report.average_h(spec.measure_id, best)
        print(f"{spec.measure_id}: best config {best} (mean h = {h:.4f})")
    return 0


def _single_dataset(plan: BenchmarkPlan):
    datasets = bench.load_plan_datasets(plan)
    if len(datasets) != 1:
        raise PlanError(f"this command needs exactly one dataset, got {len(datasets)}")
    return next(iter(datasets.values()))


def _cmd_significance(args) -> int:
    plan = build_plan(args)
    resources = bench.validate_plan(plan)
    dataset = _single_dataset(plan)
    parts = stats.uniform_split(dataset, args.splits)
    per_method: dict[str, list[float]] = {}
    for spec in plan.measures:
        for cfg in spec.configs:
            scorer = PairScorer(spec.measure_id, cfg, resources)
            hs = []
            for part in parts:
                result = bench.score_dataset(scorer, part)
                r = stats.pearson(result.scores, part.human_scores())
                rho = stats.spearman(result.scores, part.human_scores())
                hs.append(stats.harmonic(r, rho))
            per_method[spec.measure_id] = hs
    matrix = stats.significance_matrix(per_method)
    out = Path(plan.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "significance.csv"
    with dest.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("method," + ",".join(matrix.methods) + "\n")
        for i, mi in enumerate(matrix.methods):
            cells = []
            for j in range(len(matrix.methods)):
                v = matrix.p_values[i, j]
                cells.append("" if v != v else f"{v:.6g}")
            fh.write(mi + "," + ",".join(cells) + "\n")
    print(f"significance matrix over {args.splits} splits written to {dest}")
    if matrix.degenerate.any():
        print("warning: some comparisons were degenerate (zero-variance differences)")
    return 0


def _cmd_error_analysis(args) -> int:
    plan = build_plan(args)
    if len(plan.measures) != 1 or len(plan.measures[0].configs) != 1:
        raise PlanError("error-analysis needs exactly one measure")
    resources = bench.validate_plan(plan)
    dataset = _single_dataset(plan)
    spec = plan.measures[0]
    scorer = PairScorer(spec.measure_id, spec.configs[0], resources)
    result = bench.score_dataset(scorer, dataset)
    analysis = stats.error_analysis(result, dataset)
    out = Path(plan.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "error_kde.csv"
    with dest.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,density\n")
        for x, d in zip(analysis.kde_x, analysis.kde_density):
            fh.write(f"{x:.10g},{d:.10g}\n")
    print(f"mean error {analysis.mean:+.4f}, bandwidth {analysis.bandwidth:.5f}"
          + (" (fallback)" if analysis.bandwidth_fallback else ""))
    print(f"closest pair {analysis.idx_min_abs}, farthest pair {analysis.idx_max_abs}")
    print(f"density estimate written to {dest}")
    return 0


def _cmd_throughput(args) -> int:
    plan = build_plan(args)
    if len(plan.measures) != 1 or len(plan.measures[0].configs) != 1:
        raise PlanError("throughput needs exactly one measure")
    resources = bench.validate_plan(plan)
    dataset = _single_dataset(plan)
    spec = plan.measures[0]
    scorer = PairScorer(spec.measure_id, spec.configs[0], resources)
    rate = bench.throughput(scorer, dataset, repeats=args.repeats)
    print(f"{spec.measure_id}: {rate:.2f} pairs/sec "
          f"({len(dataset)} pairs, median of {args.repeats} repeats)")
    return 0


def _cmd_validate(args) -> int:
    plan = build_plan(args)
    bench.validate_plan(plan)
    n_runs = sum(len(s.configs) for s in plan.measures) * len(plan.datasets)
    print(f"plan OK: {len(plan.datasets)} dataset(s), "
          f"{len(plan.measures)} measure(s), {n_runs} run(s)")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="stsbench",
                                     description="sentence-similarity benchmark driver")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("run", _cmd_run),
        ("grid", _cmd_grid),
        ("significance", _cmd_significance),
        ("error-analysis", _cmd_error_analysis),
        ("throughput", _cmd_throughput),
        ("validate", _cmd_validate),
    ):
        p = sub.add_parser(name)
        _add_common_args(p)
        if name == "significance":
            p.add_argument("--splits", type=int, default=10)
        if name == "throughput":
            p.add_argument("--repeats", type=int, default=3)
        p.set_defaults(func=fn)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PlanError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
