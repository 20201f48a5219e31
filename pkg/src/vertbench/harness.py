"""Dataset ingestion, attack campaigns across feedback/target classifier
pairs, accuracy and transferability metrics, and report files."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

from .attack import attack
from .core import AttackConfig, Document, make_pair_document, tokenize
from .defense import UnigramTable, make_defense
from .gateway import ClassifierHandle, GatewayError, QueryLedger, classify, with_preprocess

RECORDS_FILE = "records.jsonl"
SUMMARY_FILE = "summary.json"
TRANSFER_FILE = "transfer.csv"


class DataError(Exception):
    """Unusable dataset or report input."""


@dataclass(frozen=True)
class Example:
    """One labeled dataset entry: plain text or a premise/hypothesis pair."""

    id: str
    gold_label: str
    text: str | None = None
    premise: str | None = None
    hypothesis: str | None = None

    def __post_init__(self) -> None:
        if not self.gold_label:
            raise DataError(f"example {self.id!r}: empty gold label")
        has_text = self.text is not None
        has_pair = self.premise is not None and self.hypothesis is not None
        if has_text == has_pair:
            raise DataError(f"example {self.id!r}: need exactly one of text or premise+hypothesis")

    def document(self) -> Document:
        if self.text is not None:
            return tokenize(self.text, gold_label=self.gold_label)
        assert self.premise is not None and self.hypothesis is not None
        return make_pair_document(self.premise, self.hypothesis, gold_label=self.gold_label)

    def combined_text(self) -> str:
        return self.document().raw


def _example_from_fields(fields: dict[str, str], default_id: str) -> Example:
    label = fields.get("label")
    if label is None:
        raise DataError("missing 'label'")
    ex_id = fields.get("id") or default_id
    if "text" in fields:
        return Example(id=ex_id, gold_label=label, text=fields["text"])
    if "premise" in fields and "hypothesis" in fields:
        return Example(id=ex_id, gold_label=label,
                       premise=fields["premise"], hypothesis=fields["hypothesis"])
    raise DataError("need 'text' or 'premise'+'hypothesis'")


def load_dataset(path: str, format: str = "jsonl", strict: bool = True) -> list[Example]:
    """Read a jsonl or tsv dataset; malformed lines abort in strict mode and
    are skipped (with a note on stderr) otherwise."""
    if format not in ("jsonl", "tsv"):
        raise DataError(f"unknown dataset format {format!r}")
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read dataset {path}: {exc}") from exc
    examples: list[Example] = []
    problems: list[str] = []

    def ingest(lineno: int, fields: dict[str, str]) -> None:
        try:
            examples.append(_example_from_fields(fields, default_id=str(lineno)))
        except DataError as exc:
            problems.append(f"{path}:{lineno}: {exc}")

    if format == "jsonl":
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"{path}:{lineno}: invalid JSON: {exc}")
                continue
            if not isinstance(obj, dict):
                problems.append(f"{path}:{lineno}: expected a JSON object")
                continue
            ingest(lineno, {k: str(v) for k, v in obj.items()})
    else:
        rows = list(csv.reader(lines, delimiter="\t"))
        if not rows:
            raise DataError(f"empty dataset: {path}")
        header = rows[0]
        for lineno, row in enumerate(rows[1:], start=2):
            if not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                problems.append(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
                continue
            ingest(lineno, dict(zip(header, row)))

    if problems and strict:
        raise DataError("; ".join(problems))
    if not examples:
        raise DataError(f"no valid examples in {path}" + (f" ({problems[0]} ...)" if problems else ""))
    return examples


def take_examples(examples: list[Example], limit: int | None = None,
                  sample: int | None = None, sample_seed: int = 0) -> list[Example]:
    """First-N or seeded-sample subsetting for campaigns."""
    if sample is not None:
        if sample >= len(examples):
            return list(examples)
        return random.Random(sample_seed).sample(examples, sample)
    if limit is not None:
        return examples[:limit]
    return list(examples)


def evaluate(handle: ClassifierHandle, examples: list[Example], preprocess: str = "none",
             table: UnigramTable | None = None, strict: bool = True) -> float:
    """Accuracy against gold labels after running each text through a defense."""
    if not examples:
        raise DataError("cannot evaluate an empty example list")
    defense = make_defense(preprocess, table)
    ledger = QueryLedger()
    correct = 0
    for example in examples:
        try:
            verdict = classify(handle, defense(example.combined_text()), ledger)
        except GatewayError:
            if strict:
                raise
            continue
        if verdict.label == example.gold_label:
            correct += 1
    return correct / len(examples)


@dataclass(frozen=True)
class ExampleRecord:
    """Per-(feedback, example) attack outcome plus every target's label on the result."""

    id: str
    feedback: str
    original_label: str
    attacked_label: str
    success: bool
    skipped: bool
    queries: int
    perturbed_fraction: float
    elapsed: float
    selected: tuple[int, ...]
    perturbed_text: str
    target_labels: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class DecileBucket:
    lo: float
    hi: float
    count: int
    accuracy: float | None


@dataclass(frozen=True)
class CampaignReport:
    per_example: tuple[ExampleRecord, ...]
    accuracy_original: dict[str, float]
    accuracy_attacked: dict[str, float]
    transfer_matrix: dict[str, dict[str, float]]
    histogram: tuple[DecileBucket, ...]


def _stream_seed(campaign_seed: int, example_id: str) -> int:
    digest = hashlib.sha256(example_id.encode("utf-8")).digest()
    return (campaign_seed ^ int.from_bytes(digest[:8], "big")) % 2**64


def _attack_one(example: Example, feedback: ClassifierHandle, config: AttackConfig,
                targets: list[tuple[ClassifierHandle, object]]) -> ExampleRecord:
    doc = example.document()
    cfg = replace(config, rng_seed=_stream_seed(config.rng_seed, example.id))
    ledger = QueryLedger()
    outcome, trace = attack(doc, feedback, cfg, ledger=ledger)
    if outcome.success and trace.iterations:
        attacked_label = trace.iterations[-1].verdict_after_transform.label
    else:
        attacked_label = trace.original_verdict.label
    target_labels = {}
    for handle, defense in targets:
        target_ledger = QueryLedger()
        target_labels[handle.name] = classify(
            handle, defense(outcome.perturbed_text), target_ledger).label
    return ExampleRecord(
        id=example.id,
        feedback=feedback.name,
        original_label=trace.original_verdict.label,
        attacked_label=attacked_label,
        success=outcome.success,
        skipped=trace.gold_mismatch,
        queries=outcome.queries_used,
        perturbed_fraction=outcome.perturbed_fraction,
        elapsed=outcome.elapsed_seconds,
        selected=tuple(sorted(outcome.selected)),
        perturbed_text=outcome.perturbed_text,
        target_labels=target_labels,
    )


def _accuracy(flags: list[bool]) -> float:
    return sum(flags) / len(flags) if flags else 0.0


def compute_histogram(records: list[ExampleRecord], examples: dict[str, Example],
                      target_name: str) -> tuple[DecileBucket, ...]:
    """Bucket attacked examples by perturbed fraction into the ten deciles
    and measure the target's accuracy inside each bucket."""
    attacked = [r for r in records if not r.skipped]
    buckets = []
    for d in range(10):
        lo, hi = d / 10, (d + 1) / 10
        if d == 9:
            members = [r for r in attacked if lo <= r.perturbed_fraction <= 1.0]
        else:
            members = [r for r in attacked if lo <= r.perturbed_fraction < hi]
        if members:
            acc = _accuracy([
                r.target_labels.get(target_name) == examples[r.id].gold_label
                for r in members
            ])
        else:
            acc = None
        buckets.append(DecileBucket(lo=lo, hi=hi, count=len(members), accuracy=acc))
    return tuple(buckets)


def run_campaign(examples: list[Example], feedback_handles: list[ClassifierHandle],
                 target_handles: list[ClassifierHandle], config: AttackConfig,
                 target_preprocess: list[str] | None = None,
                 feedback_preprocess: str = "none",
                 table: UnigramTable | None = None,
                 workers: int = 1,
                 out_dir: str | None = None,
                 resume: bool = False) -> CampaignReport:
    """Attack every example once per feedback classifier and grade every
    target classifier (behind its own defense) on the results.

    The transfer matrix rows are feedback classifiers, columns targets; gold
    labels decide correctness. Per-example randomness comes from the campaign
    seed XORed with a stable hash of the example id, so worker scheduling
    cannot change results. With ``out_dir`` set, records are flushed as they
    finish and a re-run with ``resume=True`` skips the ones already on disk
    (resume assumes the same classifier/defense configuration as the
    original run).
    """
    if not feedback_handles or not target_handles:
        raise DataError("campaign needs at least one feedback and one target classifier")
    if not examples:
        raise DataError("campaign needs at least one example")
    if target_preprocess is None:
        target_preprocess = ["none"] * len(target_handles)
    if len(target_preprocess) != len(target_handles):
        raise DataError("target_preprocess must align with target handles")
    targets = [(handle, make_defense(method, table))
               for handle, method in zip(target_handles, target_preprocess)]
    if feedback_preprocess != "none":
        feedback_defense = make_defense(feedback_preprocess, table)
        feedback_handles = [with_preprocess(h, feedback_defense, suffix=f"+{feedback_preprocess}")
                            for h in feedback_handles]

    by_id = {example.id: example for example in examples}
    done: dict[tuple[str, str], ExampleRecord] = {}
    records_path = os.path.join(out_dir, RECORDS_FILE) if out_dir else None
    if records_path and resume and os.path.exists(records_path):
        for record in _read_records(records_path):
            done[(record.feedback, record.id)] = record
    sink = None
    if records_path:
        os.makedirs(out_dir, exist_ok=True)
        sink = open(records_path, "a" if resume else "w", encoding="utf-8")

    records: list[ExampleRecord] = []
    try:
        for feedback in feedback_handles:
            pending = [ex for ex in examples if (feedback.name, ex.id) not in done]
            fresh: list[ExampleRecord]
            if workers > 1 and len(pending) > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    fresh = list(pool.map(
                        lambda ex: _attack_one(ex, feedback, config, targets), pending))
            else:
                fresh = [_attack_one(ex, feedback, config, targets) for ex in pending]
            if sink:
                for record in fresh:
                    sink.write(json.dumps(asdict(record)) + "\n")
                    sink.flush()
            ordered = [done.get((feedback.name, ex.id)) for ex in examples]
            fresh_by_id = {r.id: r for r in fresh}
            records.extend(r if r is not None else fresh_by_id[ex.id]
                           for r, ex in zip(ordered, examples))
    finally:
        if sink:
            sink.close()

    accuracy_original = {}
    for handle, defense in targets:
        ledger = QueryLedger()
        accuracy_original[handle.name] = _accuracy([
            classify(handle, defense(example.combined_text()), ledger).label == example.gold_label
            for example in examples
        ])

    transfer_matrix: dict[str, dict[str, float]] = {}
    for feedback in feedback_handles:
        row = {}
        feedback_records = [r for r in records if r.feedback == feedback.name]
        for handle, _ in targets:
            row[handle.name] = _accuracy([
                r.target_labels.get(handle.name) == by_id[r.id].gold_label
                for r in feedback_records
            ])
        transfer_matrix[feedback.name] = row

    accuracy_attacked = {}
    for handle, _ in targets:
        matching = next((f.name for f in feedback_handles if f.name == handle.name),
                        feedback_handles[0].name)
        accuracy_attacked[handle.name] = transfer_matrix[matching][handle.name]

    first_feedback = feedback_handles[0].name
    hist_target = next((h.name for h, _ in targets if h.name == first_feedback),
                       targets[0][0].name)
    histogram = compute_histogram(
        [r for r in records if r.feedback == first_feedback], by_id, hist_target)

    report = CampaignReport(
        per_example=tuple(records),
        accuracy_original=accuracy_original,
        accuracy_attacked=accuracy_attacked,
        transfer_matrix=transfer_matrix,
        histogram=histogram,
    )
    if out_dir:
        save_report(report, out_dir)
    return report


def perturbation_report(report: CampaignReport) -> list[dict[str, object]]:
    """Decile rows plus cumulative counts over how much of each text was rewritten."""
    attacked_total = sum(bucket.count for bucket in report.histogram)
    if attacked_total == 0:
        return []
    rows = []
    cumulative = 0
    for bucket in report.histogram:
        cumulative += bucket.count
        rows.append({
            "decile": f"[{bucket.lo:.1f},{bucket.hi:.1f}{']' if bucket.hi == 1.0 else ')'}",
            "count": bucket.count,
            "accuracy": bucket.accuracy,
            "cumulative_count": cumulative,
            "cumulative_fraction": cumulative / attacked_total,
        })
    return rows


def save_report(report: CampaignReport, out_dir: str) -> None:
    """records.jsonl + summary.json + a feedback-by-target accuracy table."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, RECORDS_FILE), "w", encoding="utf-8") as fh:
        for record in report.per_example:
            fh.write(json.dumps(asdict(record)) + "\n")
    summary = {
        "accuracy_original": report.accuracy_original,
        "accuracy_attacked": report.accuracy_attacked,
        "transfer_matrix": report.transfer_matrix,
        "histogram": [asdict(bucket) for bucket in report.histogram],
    }
    with open(os.path.join(out_dir, SUMMARY_FILE), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    targets = list(report.accuracy_original)
    with open(os.path.join(out_dir, TRANSFER_FILE), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feedback"] + targets)
        writer.writerow(["original"] + [report.accuracy_original[t] for t in targets])
        for feedback, row in report.transfer_matrix.items():
            writer.writerow([feedback] + [row.get(t, "") for t in targets])


def _read_records(path: str) -> list[ExampleRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            obj["selected"] = tuple(obj["selected"])
            records.append(ExampleRecord(**obj))
    return records


def load_report(out_dir: str) -> CampaignReport:
    records_path = os.path.join(out_dir, RECORDS_FILE)
    summary_path = os.path.join(out_dir, SUMMARY_FILE)
    try:
        records = _read_records(records_path)
        with open(summary_path, encoding="utf-8") as fh:
            summary = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot load campaign report from {out_dir}: {exc}") from exc
    return CampaignReport(
        per_example=tuple(records),
        accuracy_original=summary["accuracy_original"],
        accuracy_attacked=summary["accuracy_attacked"],
        transfer_matrix=summary["transfer_matrix"],
        histogram=tuple(DecileBucket(**b) for b in summary["histogram"]),
    )
