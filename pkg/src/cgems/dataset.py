"""Corpus orchestration: run every metric over a manifest of programs,
label each one, and read/write the metric CSV."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from cgems import schema
from cgems.dynamic_runner import (
    ExecutionError,
    RunnerConfig,
    RunnerError,
    check_compiles,
    measure_coverage,
    measure_execution,
)
from cgems.similarity import compare
from cgems.source_model import PYTHON_PROFILE, LanguageProfile
from cgems.static_metrics import analyze_source

log = logging.getLogger(__name__)

MAX_EDITS_FOR_ACCEPTANCE = 3

MANIFEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cgems corpus manifest",
    "type": "array",
    "items": {
        "type": "object",
        "required": ["id", "generated_path", "functionality"],
        "additionalProperties": False,
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "generated_path": {"type": "string"},
            "reference_path": {"type": ["string", "null"]},
            "corrected_path": {"type": ["string", "null"]},
            "functionality": {"enum": [0, 1, 2]},
            "corrected_functionality": {"enum": [0, 1, 2]},
            "comments_valid": {"type": ["boolean", "null"]},
            "nl_description": {"type": ["string", "null"]},
        },
    },
}


class ManifestError(ValueError):
    pass


class CsvParseError(ValueError):
    def __init__(self, message: str, row: int | None = None, column: str | None = None) -> None:
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    generated_path: Path
    functionality: int
    reference_path: Path | None = None
    corrected_path: Path | None = None
    # corrections aim at working code, so a corrected version is assumed fully
    # functional unless annotated otherwise
    corrected_functionality: int = 2
    comments_valid: bool | None = None
    nl_description: str | None = None


def load_manifest(path: str | Path) -> list[CorpusEntry]:
    import jsonschema

    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        jsonschema.validate(data, MANIFEST_SCHEMA)
    except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    base = path.parent
    entries = []
    seen = set()
    for item in data:
        if item["id"] in seen:
            raise ManifestError(f"duplicate id {item['id']!r}")
        seen.add(item["id"])
        kwargs = dict(item)
        for key in ("generated_path", "reference_path", "corrected_path"):
            if kwargs.get(key):
                kwargs[key] = base / kwargs[key]
            else:
                kwargs.pop(key, None)
        entries.append(CorpusEntry(**kwargs))
    return entries


@dataclass(frozen=True)
class FeatureRecord:
    program: str
    features: dict[str, float]
    functionality: int
    cc_grade: str
    label: int | None = None
    compile_errors: int = 0
    cc_module_level: bool = False
    incomplete: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        missing = set(schema.FEATURE_COLUMNS) - set(self.features)
        if missing:
            raise ValueError(f"missing features: {sorted(missing)}")

    def vector(self) -> list[float]:
        return [float(self.features[c]) for c in schema.FEATURE_COLUMNS]


@dataclass(frozen=True)
class CodeStatus:
    compiling: int
    functionality: int
    comments_valid: bool

    @property
    def acceptable(self) -> bool:
        return self.compiling == 1 and self.functionality >= 1 and self.comments_valid


def assign_label(record: FeatureRecord, entry: CorpusEntry, corrected: CodeStatus | None = None) -> int:
    """Class 1 when the code compiles, works at least partially and carries
    valid comments, or when at most three edits turn it into such code."""
    comments_valid = entry.comments_valid
    if comments_valid is None:
        comments_valid = record.features[schema.COMMENTS] > 0
    own = CodeStatus(int(record.features[schema.COMPILING]), record.functionality, bool(comments_valid))
    if own.acceptable:
        return 1
    if corrected is not None and record.features[schema.EDITS] <= MAX_EDITS_FOR_ACCEPTANCE and corrected.acceptable:
        return 1
    return 0


@dataclass
class CollectResult:
    records: list[FeatureRecord]
    errors: list[str] = field(default_factory=list)


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _dynamic(path: Path, cfg: RunnerConfig | None) -> tuple[dict[str, float], set[str], int]:
    """Compiling / execution time / coverage, with the incomplete set."""
    values = {schema.COMPILING: 0, schema.EXECUTION_TIME: 0.0, schema.COVERAGE: 0.0}
    incomplete = {schema.EXECUTION_TIME, schema.COVERAGE}
    if cfg is None:
        return values, incomplete | {schema.COMPILING}, 0
    try:
        compiling, errors = check_compiles(path, cfg)
    except RunnerError as exc:
        log.warning("%s: %s", path, exc)
        return values, incomplete | {schema.COMPILING}, 0
    values[schema.COMPILING] = compiling
    if not compiling:
        return values, incomplete, errors
    try:
        values[schema.EXECUTION_TIME] = measure_execution(path, cfg)
        incomplete.discard(schema.EXECUTION_TIME)
    except (ExecutionError, RunnerError) as exc:
        log.info("%s: execution failed: %s", path, exc)
    try:
        values[schema.COVERAGE] = measure_coverage(path, cfg)
        incomplete.discard(schema.COVERAGE)
    except (ExecutionError, RunnerError) as exc:
        log.info("%s: coverage failed: %s", path, exc)
    return values, incomplete, errors


def _collect_one(entry: CorpusEntry, profile: LanguageProfile, cfg: RunnerConfig | None) -> FeatureRecord:
    text = _read(entry.generated_path)
    static = analyze_source(text, profile)
    incomplete: set[str] = set()

    if entry.reference_path is not None:
        reference = _read(entry.reference_path)
    else:
        reference = ""
        incomplete.update(c for c in schema.SIMILARITY_COLUMNS if c not in (schema.EDITS, schema.SEQUENCE_RATIO))
    corrected_text = _read(entry.corrected_path) if entry.corrected_path is not None else None
    sim = compare(text, reference, corrected_text)

    dynamic, dyn_incomplete, compile_errors = _dynamic(entry.generated_path, cfg)
    incomplete |= dyn_incomplete

    features: dict[str, float] = {}
    features.update(static.features())
    features.update(sim.features())
    features.update(dynamic)
    if corrected_text is None:
        features[schema.EDITS] = 0
        features[schema.SEQUENCE_RATIO] = 1.0
    features = {c: features[c] for c in schema.FEATURE_COLUMNS}

    record = FeatureRecord(
        program=entry.id,
        features=features,
        functionality=entry.functionality,
        cc_grade=static.cyclomatic.grade,
        compile_errors=compile_errors,
        cc_module_level=static.cyclomatic.module_level,
        incomplete=frozenset(incomplete),
    )

    corrected_status = None
    if corrected_text is not None and cfg is not None:
        try:
            compiles, _ = check_compiles(entry.corrected_path, cfg)
        except RunnerError:
            compiles = 0
        corrected_static = analyze_source(corrected_text, profile)
        corrected_status = CodeStatus(compiles, entry.corrected_functionality, corrected_static.raw.comments > 0)
    return replace(record, label=assign_label(record, entry, corrected_status))


def collect(
    manifest: list[CorpusEntry],
    profile: LanguageProfile = PYTHON_PROFILE,
    runner: RunnerConfig | None = None,
    jobs: int = 1,
) -> CollectResult:
    """Compute one labelled record per manifest entry.

    Entries whose files are missing or unreadable are reported in
    ``errors`` and skipped; the rest are still processed.
    """

    def work(entry: CorpusEntry) -> FeatureRecord | str:
        try:
            return _collect_one(entry, profile, runner)
        except (OSError, UnicodeDecodeError) as exc:
            return f"{entry.id}: {exc}"

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        outcomes = list(pool.map(work, manifest))
    result = CollectResult(records=[])
    for outcome in outcomes:
        if isinstance(outcome, str):
            result.errors.append(outcome)
        else:
            result.records.append(outcome)
    return result


# -- CSV -------------------------------------------------------------------


def _fmt(column: str, value: float) -> str:
    if column in schema.INTEGER_COLUMNS:
        return str(int(value))
    return repr(float(value))


def write_csv(records: list[FeatureRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(schema.CSV_HEADER)
        for rec in records:
            row = []
            for column in schema.CSV_HEADER:
                if column == schema.PROGRAM:
                    row.append(rec.program)
                elif column == schema.CC_GRADE:
                    row.append(rec.cc_grade)
                elif column == schema.FUNCTIONALITY:
                    row.append(str(rec.functionality))
                elif column == schema.LABEL:
                    row.append("" if rec.label is None else str(rec.label))
                elif column == schema.COMPILE_ERRORS:
                    row.append(str(rec.compile_errors))
                elif column == schema.CC_MODULE_LEVEL:
                    row.append("1" if rec.cc_module_level else "0")
                elif column == schema.INCOMPLETE:
                    row.append("|".join(sorted(rec.incomplete)))
                else:
                    row.append(_fmt(column, rec.features[column]))
            writer.writerow(row)


def _number(text: str, column: str, row: int, integer: bool = False) -> float:
    try:
        return int(text) if integer else float(text)
    except ValueError:
        raise CsvParseError(f"not a number: {text!r}", row, column) from None


def read_csv(path: str | Path) -> list[FeatureRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("empty file") from None
        missing = [c for c in schema.CSV_HEADER if c not in header]
        if missing:
            raise CsvParseError(f"missing column(s): {', '.join(missing)}", column=missing[0])
        unknown = [c for c in header if c not in schema.CSV_HEADER]
        if unknown:
            raise CsvParseError(f"unknown column(s): {', '.join(unknown)}", column=unknown[0])
        index = {c: header.index(c) for c in schema.CSV_HEADER}
        records = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CsvParseError(f"expected {len(header)} cells, got {len(row)}", rownum)

            def cell(column: str) -> str:
                return row[index[column]]

            features = {
                c: _number(cell(c), c, rownum, c in schema.INTEGER_COLUMNS)
                for c in schema.FEATURE_COLUMNS
            }
            label_text = cell(schema.LABEL)
            label = None if label_text == "" else int(_number(label_text, schema.LABEL, rownum, True))
            if label not in (None, 0, 1):
                raise CsvParseError(f"label must be 0 or 1, got {label}", rownum, schema.LABEL)
            incomplete = frozenset(x for x in cell(schema.INCOMPLETE).split("|") if x)
            records.append(
                FeatureRecord(
                    program=cell(schema.PROGRAM),
                    features=features,
                    functionality=int(_number(cell(schema.FUNCTIONALITY), schema.FUNCTIONALITY, rownum, True)),
                    cc_grade=cell(schema.CC_GRADE),
                    label=label,
                    compile_errors=int(_number(cell(schema.COMPILE_ERRORS), schema.COMPILE_ERRORS, rownum, True)),
                    cc_module_level=cell(schema.CC_MODULE_LEVEL) == "1",
                    incomplete=incomplete,
                )
            )
    return records
