"""Single entry point: every pipeline stage as a subcommand.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 blocked awaiting
review (distinct so scripts can branch to the review service). All
randomness flows from --rng-seed, which is snapshotted into the run
manifest at ingest time.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .augmentation.config import PipelineConfig, derive_seed
from .augmentation.rounds import (
    finish,
    init_state_dir,
    load_all_dialogues,
    load_config,
    run_round,
    run_until_stop,
    should_stop,
)
from .augmentation.state import StateDir
from .curation.dedup import dedup
from .curation.types import QuestionRecord
from .errors import PipelineError
from .gateway.cassette import Cassette
from .gateway.client import Gateway, GatewayConfig
from .judge.evaluate import evaluate, report_markdown
from .judge.types import CandidateAnswer, EvalQuestion
from .stats.metrics import dataset_stats
from .stats.topics import topic_report, topics_markdown
from .store.export import export_dataset, export_training_config
from .store.jsonl import iter_records, write_atomic, write_text_atomic
from .textvec.cluster import default_k, kmeans
from .textvec.tfidf import fit_vocabulary, vectorize

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_AWAITING_REVIEW = 3


class UsageError(Exception):
    def __init__(self, message: str, parser: argparse.ArgumentParser):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise UsageError(message, self)


def _parse_overrides(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key] = value
    return overrides


def build_parser() -> _Parser:
    parser = _Parser(prog="findialog", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest documents and chunk them into a new state dir")
    p.add_argument("--in", dest="input", required=True, help="directory of .txt files or a .jsonl manifest")
    p.add_argument("--out", dest="state", required=True, help="state directory to create")
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--rng-seed", type=int, default=None)
    p.add_argument("--set", dest="sets", action="append", metavar="KEY=VALUE",
                   help="override any config key (JSON-typed value)")

    for name, help_text in (("round", "run a single augmentation round"),
                            ("run", "loop rounds until a stop condition")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--state", required=True)
        p.add_argument("--auto-keep", action="store_true",
                       help="adjudicate every pending question as kept (unattended runs)")
        p.add_argument("--mode", default="replay",
                       choices=["replay", "record", "live", "replay_or_live"])
        p.add_argument("--cassette", help="cassette path (default <state>/cassette.jsonl)")
        if name == "run":
            p.add_argument("--target", type=int, default=None, help="stop at this many dialogues")
            p.add_argument("--max-rounds", type=int, default=None)

    p = sub.add_parser("review-serve", help="serve the expert review API and UI")
    p.add_argument("--state", required=True)
    p.add_argument("--bind", default="127.0.0.1:8787")
    p.add_argument("--token", default=None, help="require X-Review-Token on /api/*")
    p.add_argument("--ui-dir", default=None, help="static UI bundle directory")

    p = sub.add_parser("stats", help="dataset statistics and topic distribution reports")
    p.add_argument("--state", required=True)
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("dedup", help="standalone near-duplicate scan over a questions file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--threshold", type=float, default=0.99)
    p.add_argument("--json", action="store_true", dest="as_json")
    p.add_argument("--out", help="write removals JSONL here")

    p = sub.add_parser("eval", help="LLM-judge evaluation of candidate answers")
    p.add_argument("--questions", required=True)
    p.add_argument("--answers", required=True)
    p.add_argument("--judge-model", default="gpt-4")
    p.add_argument("--mode", default="replay",
                   choices=["replay", "record", "live", "replay_or_live"])
    p.add_argument("--cassette", help="cassette path (default <out>/judge_cassette.jsonl)")
    p.add_argument("--retries", type=int, default=2)
    p.add_argument("--out", default=".", help="output directory for scores and reports")

    p = sub.add_parser("export", help="export the dataset for finetuning stacks")
    p.add_argument("--state", required=True)
    p.add_argument("--format", default="chat_jsonl", choices=["chat_jsonl"])
    p.add_argument("--out", help="output path (default <state>/dataset_chat.jsonl)")

    p = sub.add_parser("export-train-config", help="emit the tuning hyperparameter file")
    p.add_argument("--state", required=True)
    p.add_argument("--method", default="lora", choices=["lora", "full_finetune"])
    p.add_argument("--out", help="output path (default <state>/training_config.json)")

    return parser


def _gateway(statedir: StateDir, cassette_arg: str | None) -> Gateway:
    cassette_path = Path(cassette_arg) if cassette_arg else statedir.cassette_path
    return Gateway(GatewayConfig(), Cassette(cassette_path))


def _cmd_ingest(args) -> int:
    overrides = _parse_overrides(args.sets)
    if args.rng_seed is not None:
        overrides["rng_seed"] = args.rng_seed
    config = PipelineConfig.load(args.config, overrides)
    statedir = StateDir(args.state)
    state, result = init_state_dir(statedir, config, args.input)
    for issue in result.issues:
        print(f"warning: {issue.kind}: {issue.source}: {issue.detail}", file=sys.stderr)
    print(f"ingested {len(result.docs)} documents into {statedir.root} "
          f"(run {state.run_id})")
    return EXIT_OK if result.docs else EXIT_RUNTIME


def _cmd_round(args) -> int:
    statedir = StateDir(args.state)
    config = load_config(statedir)
    with statedir.acquire_lock():
        state = run_round(statedir, config, _gateway(statedir, args.cassette),
                          mode=args.mode, auto_keep=args.auto_keep)
    if state.phase == "awaiting_review":
        print(f"round {state.round} awaiting review: "
              f"run `findialog review-serve --state {args.state}`", file=sys.stderr)
        return EXIT_AWAITING_REVIEW
    print(f"round {state.round} complete (phase {state.phase}, "
          f"{state.counters['dialogues_total']} dialogues total)")
    return EXIT_OK


def _cmd_run(args) -> int:
    statedir = StateDir(args.state)
    config = load_config(statedir)
    if args.target is not None:
        config.target_dialogues = args.target
    if args.max_rounds is not None:
        config.max_rounds = args.max_rounds
    with statedir.acquire_lock():
        state = run_until_stop(statedir, config, _gateway(statedir, args.cassette),
                               mode=args.mode, auto_keep=args.auto_keep)
        if state.phase == "review_done" and should_stop(state, config):
            state = finish(statedir, state)
    if state.phase == "awaiting_review":
        print(f"round {state.round} awaiting review: "
              f"run `findialog review-serve --state {args.state}`", file=sys.stderr)
        return EXIT_AWAITING_REVIEW
    print(f"run {state.phase} after round {state.round}: "
          f"{state.counters['dialogues_total']} dialogues, "
          f"{state.counters['questions_kept']} kept questions")
    return EXIT_OK


def _cmd_review_serve(args) -> int:
    from .service.app import serve

    statedir = StateDir(args.state)
    with statedir.acquire_lock():
        serve(args.state, args.bind, token=args.token, ui_dir=args.ui_dir)
    return EXIT_OK


def _cmd_stats(args) -> int:
    statedir = StateDir(args.state)
    config = load_config(statedir)
    dialogues = load_all_dialogues(statedir)
    report = dataset_stats(dialogues)
    write_text_atomic(statedir.root / "stats.md", report.to_markdown())
    write_text_atomic(statedir.root / "stats.json",
                      json.dumps(report.to_record(), ensure_ascii=False, sort_keys=True,
                                 indent=2) + "\n")

    from .curation.review import QuestionStore
    store = QuestionStore(statedir.questions_path, autosave=False)
    kept = store.kept()
    topics_payload = []
    if kept:
        vocab = fit_vocabulary([q.effective_text for q in kept], min_df=config.min_df)
        vectors = [vectorize(q.effective_text, vocab) for q in kept]
        rows = [i for i, v in enumerate(vectors) if not v.is_zero]
        if rows:
            questions = [kept[i] for i in rows]
            vecs = [vectors[i] for i in rows]
            k = min(config.k or default_k(len(rows)), len(rows))
            clustering = kmeans(vecs, k, derive_seed(config.rng_seed, "stats", "kmeans"),
                                dim=len(vocab))
            topic_rows = topic_report(questions, vecs, clustering, vocab,
                                      rng_seed=derive_seed(config.rng_seed, "stats", "reps"))
            topics_payload = [r.to_record() for r in topic_rows]
            write_text_atomic(statedir.root / "topic_report.md", topics_markdown(topic_rows))
            write_text_atomic(statedir.root / "topic_report.json",
                              json.dumps(topics_payload, ensure_ascii=False, sort_keys=True,
                                         indent=2) + "\n")
    if args.as_json:
        print(json.dumps({"stats": report.to_record(), "topics": topics_payload},
                         ensure_ascii=False, sort_keys=True))
    else:
        print(report.to_markdown())
        print(f"reports written to {statedir.root}")
    return EXIT_OK


def _cmd_dedup(args) -> int:
    questions = [QuestionRecord.from_record(rec) for rec in iter_records(args.input)]
    kept, removals = dedup(questions, threshold=args.threshold)
    if args.out:
        write_atomic(args.out, (r.to_record() for r in removals))
    if args.as_json:
        print(json.dumps({
            "total": len(questions),
            "kept": len(kept),
            "removed": [r.to_record() for r in removals],
        }, ensure_ascii=False, sort_keys=True))
    else:
        print(f"{len(questions)} questions, {len(kept)} kept, {len(removals)} removed "
              f"at threshold {args.threshold}")
        for r in removals:
            print(f"  {r.removed_id} -> {r.surviving_id} (sim {r.similarity:.4f})")
    return EXIT_OK


def _cmd_eval(args) -> int:
    questions = [EvalQuestion(rec["id"], rec["text"]) for rec in iter_records(args.questions)]
    answers = [CandidateAnswer(rec["question_id"], rec["model_name"], rec["text"])
               for rec in iter_records(args.answers)]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cassette_path = Path(args.cassette) if args.cassette else out_dir / "judge_cassette.jsonl"
    gateway = Gateway(GatewayConfig(), Cassette(cassette_path))
    report, _records = evaluate(questions, answers, gateway, retries=args.retries,
                                mode=args.mode, judge_model=args.judge_model,
                                scores_path=out_dir / "scores.jsonl")
    write_text_atomic(out_dir / "report.md", report_markdown(report))
    write_text_atomic(out_dir / "report.json",
                      json.dumps(report.to_record(), ensure_ascii=False, sort_keys=True,
                                 indent=2) + "\n")
    print(report_markdown(report))
    return EXIT_OK


def _cmd_export(args) -> int:
    statedir = StateDir(args.state)
    out = Path(args.out) if args.out else statedir.root / "dataset_chat.jsonl"
    count = export_dataset(load_all_dialogues(statedir), out, fmt=args.format)
    print(f"exported {count} dialogues to {out}")
    return EXIT_OK


def _cmd_export_train_config(args) -> int:
    statedir = StateDir(args.state)
    state = statedir.load_state()
    out = Path(args.out) if args.out else statedir.root / "training_config.json"
    dataset_path = str(statedir.root / "dataset_chat.jsonl")
    export_training_config(state.phase, args.method, dataset_path, out)
    print(f"training config ({args.method}) written to {out}")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "round": _cmd_round,
    "run": _cmd_run,
    "review-serve": _cmd_review_serve,
    "stats": _cmd_stats,
    "dedup": _cmd_dedup,
    "eval": _cmd_eval,
    "export": _cmd_export,
    "export-train-config": _cmd_export_train_config,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        exc.parser.print_usage(sys.stderr)
        print(f"{exc.parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except PipelineError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
