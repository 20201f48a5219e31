"""Command-line interface: attack, evaluate, campaign, defend, render,
unrender, and report subcommands."""

from __future__ import annotations

import argparse
import os
import sys

from .core import AttackConfig, InvalidInputError
from .defense import load_unigrams, make_defense
from .gateway import GatewayError, parse_classifier_spec
from .harness import (
    DataError,
    RECORDS_FILE,
    evaluate,
    load_dataset,
    load_report,
    perturbation_report,
    run_campaign,
    take_examples,
)
from .render import RecognitionError, read_pgm, render, unrender, write_pgm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GATEWAY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", required=True, help="dataset file path")
    parser.add_argument("--format", choices=["jsonl", "tsv"], default=None,
                        help="dataset format (default: by file extension)")
    parser.add_argument("--limit", type=int, default=None, help="take the first N examples")
    parser.add_argument("--sample", type=int, default=None, help="take a seeded random sample of N")
    parser.add_argument("--sample-seed", type=int, default=0)
    parser.add_argument("--lenient", action="store_true", help="skip malformed dataset lines")


def _add_attack_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--width", type=int, default=10)
    parser.add_argument("--chaff-p", type=float, default=0.0)
    parser.add_argument("--max-queries", type=int, default=5000)
    parser.add_argument("--max-seconds", type=float, default=60.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--success", choices=["flip", "gold"], default="flip")
    parser.add_argument("--unigrams", default=None, help="unigram table for segment preprocessing")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vertbench",
                     description="Vertical-rewrite attacks on text classifiers, with defenses.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_attack = sub.add_parser("attack", help="attack a dataset with one feedback classifier")
    _add_dataset_args(p_attack)
    _add_attack_args(p_attack)
    p_attack.add_argument("--feedback", required=True, help="lexicon:PATH or remote:URL")
    p_attack.add_argument("--feedback-preprocess", choices=["none", "simple", "segment", "reverse"],
                          default="none")
    p_attack.add_argument("--out", required=True, help="output directory")

    p_eval = sub.add_parser("evaluate", help="accuracy of a classifier on a dataset")
    _add_dataset_args(p_eval)
    p_eval.add_argument("--classifier", required=True, help="lexicon:PATH or remote:URL")
    p_eval.add_argument("--preprocess", choices=["none", "simple", "segment", "reverse"],
                        default="none")
    p_eval.add_argument("--unigrams", default=None)

    p_camp = sub.add_parser("campaign", help="attack with every feedback, grade every target")
    _add_dataset_args(p_camp)
    _add_attack_args(p_camp)
    p_camp.add_argument("--feedback", required=True, help="comma-separated classifier specs")
    p_camp.add_argument("--targets", required=True, help="comma-separated classifier specs")
    p_camp.add_argument("--target-preprocess", default=None,
                        help="comma-separated defenses aligned with --targets")
    p_camp.add_argument("--feedback-preprocess", choices=["none", "simple", "segment", "reverse"],
                        default="none")
    p_camp.add_argument("--workers", type=int, default=1)
    p_camp.add_argument("--resume", action="store_true", help="skip examples already in --out")
    p_camp.add_argument("--out", required=True)

    p_defend = sub.add_parser("defend", help="run one defense over a text file")
    p_defend.add_argument("--in", dest="in_path", required=True)
    p_defend.add_argument("--method", choices=["simple", "segment", "reverse"], required=True)
    p_defend.add_argument("--unigrams", default=None)
    p_defend.add_argument("--out", required=True)

    p_render = sub.add_parser("render", help="rasterize a text file into a PGM image")
    p_render.add_argument("--in", dest="in_path", required=True)
    p_render.add_argument("--out", required=True)
    p_render.add_argument("--binary", action="store_true", help="write P5 instead of plain P2")

    p_unrender = sub.add_parser("unrender", help="recover text from a PGM image")
    p_unrender.add_argument("--in", dest="in_path", required=True)
    p_unrender.add_argument("--out", required=True)

    p_report = sub.add_parser("report", help="print campaign summary tables")
    p_report.add_argument("--campaign", required=True, help="campaign output directory")
    p_report.add_argument("--histogram", action="store_true",
                          help="include the perturbed-fraction decile table")

    return parser


def _sniff_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "tsv" if path.endswith(".tsv") else "jsonl"


def _load_examples(args: argparse.Namespace) -> list:
    examples = load_dataset(args.dataset, format=_sniff_format(args.dataset, args.format),
                            strict=not args.lenient)
    return take_examples(examples, limit=args.limit, sample=args.sample,
                         sample_seed=args.sample_seed)


def _attack_config(args: argparse.Namespace) -> AttackConfig:
    return AttackConfig(
        width=args.width,
        chaff_p=args.chaff_p,
        max_queries=args.max_queries,
        max_seconds=args.max_seconds,
        rng_seed=args.seed,
        success_criterion="beat_gold" if args.success == "gold" else "flip_prediction",
    )


def _table(path: str | None):
    return load_unigrams(path) if path else None


def _cmd_attack(args: argparse.Namespace) -> int:
    examples = _load_examples(args)
    feedback = parse_classifier_spec(args.feedback)
    report = run_campaign(
        examples, [feedback], [feedback], _attack_config(args),
        feedback_preprocess=args.feedback_preprocess,
        table=_table(args.unigrams), out_dir=args.out,
    )
    successes = sum(1 for r in report.per_example if r.success)
    print(f"attacked {len(report.per_example)} examples, {successes} successful "
          f"({os.path.join(args.out, RECORDS_FILE)})")
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    examples = _load_examples(args)
    handle = parse_classifier_spec(args.classifier)
    accuracy = evaluate(handle, examples, preprocess=args.preprocess,
                        table=_table(args.unigrams), strict=not args.lenient)
    print(f"accuracy: {accuracy:.4f} ({len(examples)} examples, preprocess={args.preprocess})")
    return EXIT_OK


def _cmd_campaign(args: argparse.Namespace) -> int:
    examples = _load_examples(args)
    feedbacks = [parse_classifier_spec(s) for s in args.feedback.split(",") if s]
    targets = [parse_classifier_spec(s) for s in args.targets.split(",") if s]
    preprocess = args.target_preprocess.split(",") if args.target_preprocess else None
    report = run_campaign(
        examples, feedbacks, targets, _attack_config(args),
        target_preprocess=preprocess,
        feedback_preprocess=args.feedback_preprocess,
        table=_table(args.unigrams),
        workers=args.workers,
        out_dir=args.out,
        resume=args.resume,
    )
    for feedback, row in report.transfer_matrix.items():
        cells = ", ".join(f"{t}={acc:.3f}" for t, acc in row.items())
        print(f"{feedback}: {cells}")
    print(f"report written to {args.out}")
    return EXIT_OK


def _cmd_defend(args: argparse.Namespace) -> int:
    with open(args.in_path, encoding="utf-8") as fh:
        text = fh.read()
    if text.endswith("\n"):
        text = text[:-1]
    defense = make_defense(args.method, _table(args.unigrams))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(defense(text) + "\n")
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    with open(args.in_path, encoding="utf-8") as fh:
        text = fh.read()
    if text.endswith("\n"):
        text = text[:-1]
    write_pgm(render(text), args.out, binary=args.binary)
    return EXIT_OK


def _cmd_unrender(args: argparse.Namespace) -> int:
    text = unrender(read_pgm(args.in_path))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    report = load_report(args.campaign)
    targets = list(report.accuracy_original)
    print("feedback," + ",".join(targets))
    print("original," + ",".join(f"{report.accuracy_original[t]:.4f}" for t in targets))
    for feedback, row in report.transfer_matrix.items():
        print(feedback + "," + ",".join(f"{row.get(t, float('nan')):.4f}" for t in targets))
    if args.histogram:
        rows = perturbation_report(report)
        print("decile,count,accuracy,cumulative_count,cumulative_fraction")
        for row in rows:
            acc = "-" if row["accuracy"] is None else f"{row['accuracy']:.4f}"
            print(f"{row['decile']},{row['count']},{acc},"
                  f"{row['cumulative_count']},{row['cumulative_fraction']:.4f}")
    return EXIT_OK


_COMMANDS = {
    "attack": _cmd_attack,
    "evaluate": _cmd_evaluate,
    "campaign": _cmd_campaign,
    "defend": _cmd_defend,
    "render": _cmd_render,
    "unrender": _cmd_unrender,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DataError, InvalidInputError, RecognitionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except GatewayError as exc:
        print(f"gateway error: {exc}", file=sys.stderr)
        return EXIT_GATEWAY


if __name__ == "__main__":
    sys.exit(main())
