"""Count-table workflow and command-line front end.

The data model is a :class:`Dataset`: named groups (cities,
territories, ...) each holding one vector of category counts.  On top
of it sit the steps of a typical ranking analysis — ingest a CSV/JSON
count table, optionally merge rare categories into an "Other" bucket,
build rank confidence sets with any registered method, compare methods
by interval width, select top-/bottom-tau categories, and emit
plot-ready CSVs.

Every step is importable and pure; the CLI subcommands (``analyze``,
``simulate``, ``tau-best``, ``compare``, ``plotdata``) are thin
argument-parsing wrappers.  Exit codes: 0 on success, 1 on bad input
(unreadable/malformed data, unknown names, invalid flag values), 2 on
an internal invariant violation.  The environment variable
``RANKSETS_SEED``, when set, overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ._dispatch import METHOD_NAMES, normalize_method, rank_cs
from .boot import BootstrapConfig
from .core import KINDS, InvalidTestFamilyError, MultinomialSample, compute_ranks
from .projections import tau_best, tau_worst
from .sim import SimDesign, aes_design, erratic_design, run_design, uniform_design

__all__ = [
    "DataError",
    "Dataset",
    "AnalysisRow",
    "AnalysisReport",
    "ComparisonMatrix",
    "ingest",
    "emit_dataset",
    "group_small",
    "analyze",
    "compare_methods",
    "emit_plotdata",
    "main",
]

_SCOPES = ("marginal", "simultaneous")


class DataError(ValueError):
    """User-facing problem with input data or parameters (exit code 1)."""


@dataclass(frozen=True)
class Dataset:
    """Named groups of category counts.

    ``samples`` preserves file order of both groups and categories;
    ``source`` records where the data came from.
    """

    samples: Mapping[str, MultinomialSample]
    source: str = ""

    def __post_init__(self) -> None:
        if not self.samples:
            raise DataError("dataset contains no groups")

    @property
    def groups(self) -> tuple[str, ...]:
        return tuple(self.samples)

    def identity(self) -> tuple:
        """Hashable fingerprint of groups, labels, and counts."""
        return tuple(
            (g, s.labels, s.counts) for g, s in self.samples.items()
        )


# ---------------------------------------------------------------------------
# ingestion / emission


def _rows_from_csv(text: str) -> list[tuple[int, str, str, int]]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty file: expected header group,category,count") from None
    if [h.strip().lower() for h in header] != ["group", "category", "count"]:
        raise DataError(
            f"line 1: header must be group,category,count, got {','.join(header)!r}"
        )
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not field.strip() for field in row):
            continue
        if len(row) != 3:
            raise DataError(f"line {lineno}: expected 3 fields, got {len(row)}")
        group, category, raw = (field.strip() for field in row)
        if not group or not category:
            raise DataError(f"line {lineno}: empty group or category name")
        try:
            count = int(raw)
        except ValueError:
            raise DataError(
                f"line {lineno}: count {raw!r} is not an integer"
            ) from None
        if count < 0:
            raise DataError(f"line {lineno}: negative count {count}")
        rows.append((lineno, group, category, count))
    return rows


def _rows_from_json(text: str) -> list[tuple[int, str, str, int]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc}") from None
    if not isinstance(payload, list):
        raise DataError("JSON must be a list of {group, category, count} objects")
    rows = []
    for idx, item in enumerate(payload, start=1):
        where = f"entry {idx}"
        if not isinstance(item, dict) or set(item) != {"group", "category", "count"}:
            raise DataError(f"{where}: expected keys group, category, count")
        group, category, count = item["group"], item["category"], item["count"]
        if not isinstance(group, str) or not isinstance(category, str):
            raise DataError(f"{where}: group and category must be strings")
        if isinstance(count, bool) or not isinstance(count, int):
            raise DataError(f"{where}: count {count!r} is not an integer")
        if count < 0:
            raise DataError(f"{where}: negative count {count}")
        rows.append((idx, group, category, count))
    return rows


def ingest(path, format: str | None = None, drop_zero: bool = False) -> Dataset:
    """Read a count table into a :class:`Dataset`.

    Parameters
    ----------
    path : str or Path
        File to read.
    format : {'csv', 'json'}, optional
        Input format; inferred from the extension by default.  CSV
        needs the exact header ``group,category,count``; JSON is a
        list of objects with those keys.
    drop_zero : bool
        Drop zero-count categories after validation, mirroring
        analyses restricted to categories with positive support.

    Raises
    ------
    DataError
        On unreadable files, malformed rows (reported with their line
        number or entry index), negative counts, duplicated
        (group, category) pairs, or groups left with fewer than two
        categories.
    """
    p = Path(path)
    if format is None:
        format = "json" if p.suffix.lower() == ".json" else "csv"
    if format not in ("csv", "json"):
        raise DataError(f"unknown format {format!r}")
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {p}: {exc}") from None
    rows = _rows_from_json(text) if format == "json" else _rows_from_csv(text)

    labels: dict[str, list[str]] = {}
    counts: dict[str, list[int]] = {}
    seen: set[tuple[str, str]] = set()
    for lineno, group, category, count in rows:
        if (group, category) in seen:
            raise DataError(
                f"line {lineno}: duplicate category {category!r} in group {group!r}"
            )
        seen.add((group, category))
        if drop_zero and count == 0:
            continue
        labels.setdefault(group, []).append(category)
        counts.setdefault(group, []).append(count)

    samples: dict[str, MultinomialSample] = {}
    for group in labels:
        try:
            samples[group] = MultinomialSample(
                counts=tuple(counts[group]), labels=tuple(labels[group])
            )
        except ValueError as exc:
            raise DataError(f"group {group!r}: {exc}") from None
    if not samples:
        raise DataError("no data rows found")
    return Dataset(samples=samples, source=str(path))


def emit_dataset(dataset: Dataset, path=None, format: str = "csv") -> str:
    """Serialize a dataset back to CSV or JSON.

    ``ingest(emit_dataset(ds))`` reproduces groups, labels, and counts
    exactly.
    """
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["group", "category", "count"])
        for group, sample in dataset.samples.items():
            for label, count in zip(sample.labels, sample.counts):
                writer.writerow([group, label, count])
        text = buf.getvalue()
    elif format == "json":
        text = json.dumps(
            [
                {"group": group, "category": label, "count": count}
                for group, sample in dataset.samples.items()
                for label, count in zip(sample.labels, sample.counts)
            ],
            indent=2,
        )
    else:
        raise DataError(f"unknown format {format!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# ---------------------------------------------------------------------------
# grouping


def group_small(
    sample: MultinomialSample,
    threshold_or_list,
    other_label: str = "Other",
) -> MultinomialSample:
    """Merge rare categories into a single bucket.

    Parameters
    ----------
    sample : MultinomialSample
        Input counts.
    threshold_or_list : float or sequence of str
        A share threshold in (0, 1) — categories with observed share
        strictly below it are merged — or an explicit list of category
        labels to merge.  An empty list is the identity.
    other_label : str
        Name of the merged category, appended after the survivors (or
        added into an existing category of that name).

    Raises
    ------
    DataError
        Unknown labels, a threshold outside (0, 1), or a merge that
        would swallow every category.
    """
    if isinstance(threshold_or_list, (int, float)) and not isinstance(
        threshold_or_list, bool
    ):
        threshold = float(threshold_or_list)
        if not (0.0 < threshold < 1.0):
            raise DataError(f"threshold must lie strictly in (0, 1), got {threshold}")
        shares = sample.theta_hat
        merge = {
            label
            for label, share in zip(sample.labels, shares)
            if share < threshold
        }
    else:
        merge = set()
        for label in threshold_or_list:
            if label not in sample.labels:
                raise DataError(f"unknown category {label!r}")
            merge.add(label)
    if not merge:
        return sample
    if len(merge) == sample.p:
        raise DataError("grouping would merge every category")

    kept_labels: list[str] = []
    kept_counts: list[int] = []
    other = 0
    for label, count in zip(sample.labels, sample.counts):
        if label in merge:
            other += count
        else:
            kept_labels.append(label)
            kept_counts.append(count)
    if other_label in kept_labels:
        kept_counts[kept_labels.index(other_label)] += other
    else:
        kept_labels.append(other_label)
        kept_counts.append(other)
    return MultinomialSample(counts=tuple(kept_counts), labels=tuple(kept_labels))


# ---------------------------------------------------------------------------
# analysis reports


@dataclass(frozen=True)
class AnalysisRow:
    """One (group, category) line of an analysis report."""

    group: str
    category: str
    theta_hat: float
    se: float
    rank: int
    lo: int
    hi: int


@dataclass(frozen=True)
class AnalysisReport:
    """Rank confidence sets for every group of a dataset, one method."""

    method: str
    kind: str
    alpha: float
    scope: str
    j0: str
    rows: tuple[AnalysisRow, ...]
    dataset_id: tuple

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["group", "category", "theta_hat", "se", "rank", "method", "lo", "hi"]
        )
        for r in self.rows:
            writer.writerow(
                [r.group, r.category, f"{r.theta_hat:.6f}", f"{r.se:.6f}",
                 r.rank, self.method, r.lo, r.hi]
            )
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text


def _j0_indices(sample: MultinomialSample, j0: str) -> tuple[int, ...]:
    if j0 == "all":
        return tuple(range(sample.p))
    if j0.startswith("single:"):
        label = j0[len("single:"):]
        if label not in sample.labels:
            raise DataError(f"unknown category {label!r} in J0 spec")
        return (sample.labels.index(label),)
    raise DataError(f"J0 spec must be 'all' or 'single:<name>', got {j0!r}")


def _analyze_group(
    group: str,
    sample: MultinomialSample,
    method: str,
    kind: str,
    alpha: float,
    scope: str,
    j0: str,
    config: BootstrapConfig,
) -> list[AnalysisRow]:
    targets = _j0_indices(sample, j0)
    theta = sample.theta_hat
    triples = compute_ranks(theta)
    if scope == "simultaneous":
        rs = rank_cs(method, sample, J0=targets, kind=kind, alpha=alpha, config=config)
        intervals = {j: rs.interval(j) for j in targets}
    else:
        intervals = {}
        for j in targets:
            rs = rank_cs(
                method, sample, J0=(j,), kind=kind, alpha=alpha, config=config
            )
            intervals[j] = rs.interval(j)
    rows = []
    for j in targets:
        lo, hi = intervals[j]
        rows.append(
            AnalysisRow(
                group=group,
                category=sample.labels[j],
                theta_hat=float(theta[j]),
                se=math.sqrt(float(theta[j]) * (1.0 - float(theta[j])) / sample.n),
                rank=triples[j].r,
                lo=lo,
                hi=hi,
            )
        )
    return rows


def analyze(
    dataset: Dataset,
    method: str,
    kind: str = "two_sided",
    alpha: float = 0.05,
    scope: str = "marginal",
    j0: str = "all",
    config: BootstrapConfig | None = None,
) -> AnalysisReport:
    """Build rank confidence sets for every group of a dataset.

    Parameters
    ----------
    dataset : Dataset
        Groups of counts.
    method : str
        One of the registered methods (see ``METHOD_NAMES``).
    kind : {'lower', 'upper', 'two_sided'}
        Sidedness of the rank bounds.
    alpha : float
        One minus the nominal coverage level.
    scope : {'marginal', 'simultaneous'}
        Marginal treats each target category as its own inference
        problem (one rank set per category); simultaneous builds a
        single joint set over all targets, giving weakly wider
        intervals.
    j0 : str
        ``'all'`` or ``'single:<category label>'``.
    config : BootstrapConfig, optional
        Bootstrap knobs for the resampling methods; the same seed is
        used for every group, so reports are deterministic given it.

    Returns
    -------
    AnalysisReport
        One row per (group, target category) with the point estimate,
        its standard error, the estimated (best) rank, and the rank
        interval.  Groups are processed in parallel; row order follows
        the dataset.
    """
    method = normalize_method(method)
    if scope not in _SCOPES:
        raise DataError(f"scope must be one of {_SCOPES}, got {scope!r}")
    if kind not in KINDS:
        raise DataError(f"kind must be one of {KINDS}, got {kind!r}")
    if config is None:
        config = BootstrapConfig()
    items = list(dataset.samples.items())
    if len(items) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(items))) as pool:
            per_group = list(
                pool.map(
                    lambda it: _analyze_group(
                        it[0], it[1], method, kind, alpha, scope, j0, config
                    ),
                    items,
                )
            )
    else:
        per_group = [
            _analyze_group(g, s, method, kind, alpha, scope, j0, config)
            for g, s in items
        ]
    rows = tuple(row for rows_ in per_group for row in rows_)
    return AnalysisReport(
        method=method, kind=kind, alpha=alpha, scope=scope, j0=j0,
        rows=rows, dataset_id=dataset.identity(),
    )


@dataclass(frozen=True)
class ComparisonMatrix:
    """Pairwise interval-width comparison across methods.

    ``percent[i][j]`` is the percentage of (group, category) cells in
    which method ``i``'s interval is strictly longer than method
    ``j``'s; the diagonal is ``None``.
    """

    methods: tuple[str, ...]
    percent: tuple[tuple[float | None, ...], ...]
    cells: int

    def wider_percent(self, row, col) -> float:
        i = self.methods.index(row) if isinstance(row, str) else int(row)
        j = self.methods.index(col) if isinstance(col, str) else int(col)
        if i == j:
            raise ValueError("diagonal cells are undefined")
        return self.percent[i][j]

    def to_text(self) -> str:
        header = ("",) + self.methods
        body = []
        for i, m in enumerate(self.methods):
            body.append(
                (m,)
                + tuple(
                    "-" if v is None else f"{v:.1f}" for v in self.percent[i]
                )
            )
        return _render_table(header, body)


def compare_methods(reports: Sequence[AnalysisReport]) -> ComparisonMatrix:
    """Percentage of cells in which one method's interval is wider.

    All reports must cover the identical dataset (same groups,
    categories, and counts).  Lengths compare as ``hi - lo``; only a
    strict inequality counts, so two methods returning identical
    intervals score 0 in both directions.
    """
    if len(reports) < 2:
        raise DataError("need at least two reports to compare")
    base = reports[0]
    for rep in reports[1:]:
        if rep.dataset_id != base.dataset_id:
            raise DataError("reports cover different datasets")
        if [(r.group, r.category) for r in rep.rows] != [
            (r.group, r.category) for r in base.rows
        ]:
            raise DataError("reports cover different cells")
    lengths = [[row.hi - row.lo for row in rep.rows] for rep in reports]
    m = len(reports)
    cells = len(base.rows)
    percent: list[tuple[float | None, ...]] = []
    for i in range(m):
        row: list[float | None] = []
        for j in range(m):
            if i == j:
                row.append(None)
            else:
                wider = sum(
                    li > lj for li, lj in zip(lengths[i], lengths[j])
                )
                row.append(100.0 * wider / cells)
        percent.append(tuple(row))
    return ComparisonMatrix(
        methods=tuple(rep.method for rep in reports),
        percent=tuple(percent),
        cells=cells,
    )


def emit_plotdata(reports, path=None) -> str:
    """Plot-ready CSV: group, category, theta_hat, se, method, lo, hi.

    Accepts a single report or a sequence; rows are concatenated in
    report order.
    """
    if isinstance(reports, AnalysisReport):
        reports = [reports]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["group", "category", "theta_hat", "se", "method", "lo", "hi"])
    for rep in reports:
        for r in rep.rows:
            writer.writerow(
                [r.group, r.category, f"{r.theta_hat:.6f}", f"{r.se:.6f}",
                 rep.method, r.lo, r.hi]
            )
    text = buf.getvalue()
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc}") from None
    return text


# ---------------------------------------------------------------------------
# rendering helpers


def _render_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    table = [tuple(str(c) for c in header)] + [
        tuple(str(c) for c in row) for row in rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for idx, row in enumerate(table):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _fmt_rank_set(lo: int, hi: int) -> str:
    return f"{{{lo}}}" if lo == hi else f"{{{lo}..{hi}}}"


def _print_report(report: AnalysisReport, dataset: Dataset, out) -> None:
    for group in dataset.groups:
        sample = dataset.samples[group]
        rows = [r for r in report.rows if r.group == group]
        print(
            f"group={group}  n={sample.n}  method={report.method}  "
            f"kind={report.kind}  alpha={report.alpha:g}  scope={report.scope}",
            file=out,
        )
        body = [
            (
                r.category,
                sample.counts[sample.labels.index(r.category)],
                f"{r.theta_hat:.3f}",
                f"{r.se:.4f}",
                r.rank,
                _fmt_rank_set(r.lo, r.hi),
            )
            for r in rows
        ]
        print(
            _render_table(
                ("category", "count", "theta_hat", "se", "rank", "ranks"), body
            ),
            file=out,
        )


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage problems as DataError (exit 1)."""

    def error(self, message):  # noqa: A003 - argparse API
        raise DataError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _alpha_value(text: str) -> float:
    value = float(text)
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError("alpha must lie strictly in (0, 1)")
    return value


def _resolve_seed(flag_value: int | None) -> int | None:
    env = os.environ.get("RANKSETS_SEED")
    if env is not None and env.strip() != "":
        try:
            return int(env)
        except ValueError:
            raise DataError(
                f"RANKSETS_SEED must be an integer, got {env!r}"
            ) from None
    return flag_value


def _group_small_spec(text: str):
    try:
        return float(text)
    except ValueError:
        return [label.strip() for label in text.split(",") if label.strip()]


def _method_list(text: str) -> list[str]:
    return [normalize_method(m) for m in text.split(",") if m.strip()]


def _parse_design(text: str) -> dict:
    name, _, arg_text = text.partition(":")
    kwargs = {}
    if arg_text:
        for part in arg_text.split(","):
            key, eq, value = part.partition("=")
            if not eq:
                raise DataError(f"design argument {part!r} is not key=value")
            kwargs[key.strip()] = value.strip()
    return {"name": name.strip(), "kwargs": kwargs}


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="ranksets",
        description="Confidence sets for ranks of multinomial categories.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    data_common = argparse.ArgumentParser(add_help=False)
    data_common.add_argument("data", help="count table (CSV or JSON)")
    data_common.add_argument(
        "--format", choices=("csv", "json"), default=None,
        help="input format (default: infer from extension)",
    )
    data_common.add_argument(
        "--drop-zero", action="store_true",
        help="drop zero-count categories after validation",
    )
    data_common.add_argument(
        "--group-small", metavar="SPEC", default=None,
        help="merge categories into 'Other': share threshold in (0,1) "
             "or comma-separated labels",
    )
    data_common.add_argument(
        "--alpha", type=_alpha_value, default=0.05,
        help="one minus the nominal coverage level (default 0.05)",
    )
    data_common.add_argument(
        "--boot-samples", type=_positive_int, default=2000, metavar="B",
        help="bootstrap resamples (default 2000)",
    )
    data_common.add_argument(
        "--seed", type=int, default=0,
        help="bootstrap seed (env RANKSETS_SEED overrides)",
    )
    data_common.add_argument(
        "--out", default=None, help="also write machine-readable CSV here"
    )

    p_analyze = sub.add_parser(
        "analyze", parents=[data_common],
        help="rank confidence sets per group and category",
    )
    p_analyze.add_argument(
        "--method", type=_method_list, default=["exactHolm"], metavar="M[,M...]",
        help=f"methods, comma-separated from {', '.join(METHOD_NAMES)}",
    )
    p_analyze.add_argument(
        "--kind", choices=KINDS, default="two_sided",
        help="sidedness of the rank bounds",
    )
    p_analyze.add_argument(
        "--scope", choices=_SCOPES, default="marginal",
        help="marginal: one set per category; simultaneous: one joint set",
    )
    p_analyze.add_argument(
        "--j0", default="all", metavar="SPEC",
        help="'all' or 'single:<category>' (default all)",
    )

    p_tau = sub.add_parser(
        "tau-best", parents=[data_common],
        help="categories whose rank set reaches the top (or bottom) tau",
    )
    p_tau.add_argument("--tau", type=_positive_int, required=True)
    p_tau.add_argument(
        "--worst", action="store_true",
        help="select bottom-tau instead of top-tau",
    )
    p_tau.add_argument(
        "--method", default="exactHolm",
        help="any registered method except naive",
    )

    p_compare = sub.add_parser(
        "compare", parents=[data_common],
        help="percentage of cells where one method's interval is wider",
    )
    p_compare.add_argument(
        "--method", type=_method_list, default=["exactHolm", "bootStud"],
        metavar="M,M[,M...]", help="two or more methods, comma-separated",
    )
    p_compare.add_argument(
        "--kind", choices=KINDS, default="two_sided",
    )
    p_compare.add_argument(
        "--scope", choices=_SCOPES, default="marginal",
    )

    p_plot = sub.add_parser(
        "plotdata", parents=[data_common],
        help="plot-ready CSV (group, category, theta_hat, se, method, lo, hi)",
    )
    p_plot.add_argument(
        "--method", type=_method_list, default=["exactHolm"], metavar="M[,M...]",
    )
    p_plot.add_argument("--kind", choices=KINDS, default="two_sided")
    p_plot.add_argument("--scope", choices=_SCOPES, default="marginal")
    p_plot.add_argument("--j0", default="all", metavar="SPEC")

    p_sim = sub.add_parser(
        "simulate", help="Monte Carlo coverage/length study for one design"
    )
    p_sim.add_argument(
        "design",
        help="aes:kappa=K,tau_n=T | erratic:pi=P,n=N | uniform:p=P,n=N",
    )
    p_sim.add_argument("--method", type=_method_list, default=None,
                       metavar="M[,M...]", help="override the design's methods")
    p_sim.add_argument("--reps", type=_positive_int, default=1000)
    p_sim.add_argument("--boot-samples", type=_positive_int, default=2000,
                       metavar="B")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--alpha", type=_alpha_value, default=0.05)
    p_sim.add_argument("--scope", choices=_SCOPES, default="marginal")
    p_sim.add_argument(
        "--categories", default=None, metavar="I[,I...]",
        help="1-based category indices to track (default: design-specific)",
    )
    p_sim.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="report format on stdout (default csv)",
    )
    p_sim.add_argument("--out", default=None, help="also write the report here")
    return parser


# ---------------------------------------------------------------------------
# subcommand runners


def _load_dataset(args) -> Dataset:
    dataset = ingest(args.data, format=args.format, drop_zero=args.drop_zero)
    if args.group_small is not None:
        spec = _group_small_spec(args.group_small)
        samples = {
            group: group_small(sample, spec)
            for group, sample in dataset.samples.items()
        }
        dataset = Dataset(samples=samples, source=dataset.source)
    return dataset


def _run_analyze(args, out) -> int:
    dataset = _load_dataset(args)
    config = BootstrapConfig(B=args.boot_samples, seed=_resolve_seed(args.seed))
    reports = [
        analyze(dataset, m, kind=args.kind, alpha=args.alpha,
                scope=args.scope, j0=args.j0, config=config)
        for m in args.method
    ]
    for report in reports:
        _print_report(report, dataset, out)
    if args.out:
        text = "".join(
            rep.to_csv() if i == 0 else "".join(rep.to_csv().splitlines(True)[1:])
            for i, rep in enumerate(reports)
        )
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def _run_tau(args, out) -> int:
    dataset = _load_dataset(args)
    config = BootstrapConfig(B=args.boot_samples, seed=_resolve_seed(args.seed))
    select = tau_worst if args.worst else tau_best
    direction = "worst" if args.worst else "best"
    csv_rows = []
    for group, sample in dataset.samples.items():
        result = select(sample, args.tau, alpha=args.alpha,
                        method=args.method, config=config)
        members = [sample.labels[j] for j in sorted(result.members)]
        print(
            f"group={group}  direction={direction}  tau={args.tau}  "
            f"method={result.method}  alpha={args.alpha:g}",
            file=out,
        )
        print(
            f"selected ({len(members)}): " + (", ".join(members) or "(none)"),
            file=out,
        )
        rs = result.rank_set
        bound_name = "lo" if direction == "best" else "hi"
        body = []
        for j in range(sample.p):
            bound = rs.interval(j)[0 if direction == "best" else 1]
            member = "yes" if j in result.members else "no"
            body.append((sample.labels[j], bound, member))
            csv_rows.append(
                [group, direction, args.tau, sample.labels[j], bound, member]
            )
        print(_render_table(("category", bound_name, "member"), body), file=out)
    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["group", "direction", "tau", "category", "bound", "member"])
        writer.writerows(csv_rows)
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def _run_compare(args, out) -> int:
    if len(args.method) < 2:
        raise DataError("compare needs at least two methods")
    dataset = _load_dataset(args)
    config = BootstrapConfig(B=args.boot_samples, seed=_resolve_seed(args.seed))
    reports = [
        analyze(dataset, m, kind=args.kind, alpha=args.alpha,
                scope=args.scope, j0="all", config=config)
        for m in args.method
    ]
    matrix = compare_methods(reports)
    print(
        f"% of {matrix.cells} group x category cells where the row method's "
        f"interval is strictly wider (alpha={args.alpha:g}, scope={args.scope})",
        file=out,
    )
    print(matrix.to_text(), file=out)
    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["method"] + list(matrix.methods))
        for i, m in enumerate(matrix.methods):
            writer.writerow(
                [m] + ["" if v is None else f"{v:.3f}" for v in matrix.percent[i]]
            )
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def _run_plotdata(args, out) -> int:
    dataset = _load_dataset(args)
    config = BootstrapConfig(B=args.boot_samples, seed=_resolve_seed(args.seed))
    reports = [
        analyze(dataset, m, kind=args.kind, alpha=args.alpha,
                scope=args.scope, j0=args.j0, config=config)
        for m in args.method
    ]
    text = emit_plotdata(reports, path=args.out)
    if not args.out:
        print(text, end="", file=out)
    return 0


def _run_simulate(args, out) -> int:
    parsed = _parse_design(args.design)
    name, kw = parsed["name"], parsed["kwargs"]
    seed = _resolve_seed(args.seed)
    common = dict(
        alpha=args.alpha, reps=args.reps, B=args.boot_samples,
        master_seed=0 if seed is None else seed, scope=args.scope,
    )
    if args.method:
        common["methods"] = tuple(args.method)
    try:
        if name == "aes":
            design = aes_design(
                kappa=float(kw.pop("kappa")), tau_n=float(kw.pop("tau_n")), **common
            )
        elif name == "erratic":
            design = erratic_design(
                pi=float(kw.pop("pi")), n=int(kw.pop("n")), **common
            )
        elif name == "uniform":
            design = uniform_design(
                p=int(kw.pop("p")), n=int(kw.pop("n")), **common
            )
        else:
            raise DataError(
                f"unknown design {name!r}; expected aes, erratic, or uniform"
            )
    except KeyError as exc:
        raise DataError(f"design {name!r} is missing argument {exc}") from None
    except ValueError as exc:
        raise DataError(f"bad design argument: {exc}") from None
    if kw:
        raise DataError(f"unknown design arguments: {', '.join(sorted(kw))}")
    if args.categories is not None:
        try:
            cats = tuple(
                int(c) - 1 for c in args.categories.split(",") if c.strip()
            )
        except ValueError:
            raise DataError(
                f"--categories must be 1-based integers, got {args.categories!r}"
            ) from None
        design = SimDesign(
            name=design.name, theta=design.theta, n=design.n,
            methods=design.methods, alpha=design.alpha, reps=design.reps,
            B=design.B, master_seed=design.master_seed, scope=design.scope,
            categories=cats, notes=design.notes,
        )
    report = run_design(design)
    text = report.to_json() if args.format == "json" else report.to_csv()
    print(text, end="" if text.endswith("\n") else "\n", file=out)
    if args.out:
        if args.out.endswith(".json") or args.format == "json":
            report.to_json(args.out)
        else:
            report.to_csv(args.out)
    return 0


_RUNNERS = {
    "analyze": _run_analyze,
    "tau-best": _run_tau,
    "compare": _run_compare,
    "plotdata": _run_plotdata,
    "simulate": _run_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _RUNNERS[args.command](args, sys.stdout)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvalidTestFamilyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - invariant violations
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
