"""Multi-round augmentation loop.

Each round: pick seeds (report chunks for round 0, sampled kept questions
after), synthesize dialogues, extract questions, dedup against the whole
kept+pending pool, cluster what is pending, build the review batch, then
wait for expert adjudication (or auto-keep when unattended). Every phase
boundary writes its files atomically and commits state.json last, and every
phase re-reads its inputs from disk, so resuming after a crash retraces the
identical trajectory.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

from ..corpus.chunking import Chunk, chunk as chunk_doc
from ..corpus.ingest import IngestResult, ingest
from ..curation.dedup import dedup
from ..curation.extract import extract_questions
from ..curation.review import QuestionStore, build_review_batch
from ..curation.types import ReviewBatch, Verdict
from ..dialogue.synth import SynthConfig, synthesize
from ..dialogue.types import DialogueRecord, Seed
from ..errors import PoolExhausted, SynthesisFailed
from ..gateway.client import Gateway
from ..store.jsonl import read_records, write_atomic, write_text_atomic
from ..store.manifest import RunManifest, config_digest
from ..textvec.cluster import default_k, kmeans, top_terms
from ..textvec.tfidf import fit_vocabulary, vectorize
from .config import PipelineConfig, derive_seed
from .seeds import select_seeds
from .state import CheckpointHook, PhaseContext, RunState, StateDir

log = logging.getLogger(__name__)


def init_state_dir(statedir: StateDir, config: PipelineConfig, input_path: str | Path,
                   on_checkpoint: Optional[CheckpointHook] = None) -> tuple[RunState, IngestResult]:
    """The `ingest` operation: documents + chunks + empty pool + fresh state."""
    statedir.root.mkdir(parents=True, exist_ok=True)
    result = ingest(input_path, language=config.language)
    chunks: list[Chunk] = []
    for doc in result.docs:
        chunks.extend(chunk_doc(doc, config.max_units, config.overlap_units))
    digest = config_digest(config.to_dict())
    state = RunState(run_id=f"run-{digest[:12]}", round=0, phase="ingested",
                     config_digest=digest)
    write_atomic(statedir.docs_path, (d.to_record() for d in result.docs))
    write_atomic(statedir.chunks_path, (c.to_record() for c in chunks))
    write_atomic(statedir.questions_path, ())
    manifest = RunManifest(state.run_id, config.to_dict())
    manifest.log_phase(0, "ingested", {"docs": len(result.docs), "chunks": len(chunks)})
    manifest.save(statedir.manifest_path)
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state, result


def load_config(statedir: StateDir) -> PipelineConfig:
    manifest = RunManifest.load(statedir.manifest_path)
    return PipelineConfig.from_dict(manifest.config)


def _load_store(statedir: StateDir) -> QuestionStore:
    return QuestionStore(statedir.questions_path, autosave=False)


def _refresh_pool_counters(state: RunState, store: QuestionStore) -> None:
    state.counters["questions_pending"] = len(store.by_status("pending"))
    state.counters["questions_kept"] = len(store.by_status("kept", "edited"))
    state.counters["questions_removed"] = len(store.by_status("removed"))


def _round_counters(state: RunState, round_no: int) -> dict:
    return state.counters["per_round"].setdefault(str(round_no), {})


def load_round_dialogues(statedir: StateDir, round_no: int) -> list[DialogueRecord]:
    return [DialogueRecord.from_record(rec)
            for rec in read_records(statedir.dialogues_path(round_no))]


def load_all_dialogues(statedir: StateDir) -> list[DialogueRecord]:
    dialogues: list[DialogueRecord] = []
    rounds_root = statedir.root / "rounds"
    if rounds_root.is_dir():
        for path in sorted(rounds_root.glob("*/dialogues.jsonl")):
            dialogues.extend(DialogueRecord.from_record(rec) for rec in read_records(path))
    return dialogues


def _phase_synthesize(statedir: StateDir, state: RunState, config: PipelineConfig,
                      gateway: Gateway, mode: str,
                      on_checkpoint: Optional[CheckpointHook]) -> RunState:
    round_no = state.round if state.phase == "ingested" else state.round + 1
    store = _load_store(statedir)
    if round_no == 0:
        chunks = [Chunk.from_record(rec) for rec in read_records(statedir.chunks_path)]
        seeds = [Seed("report_chunk", c.id, c.text) for c in chunks[: config.seeds_per_round]]
        selected_ids: list[str] = []
    else:
        try:
            seeds = select_seeds(store.kept(), config.seeds_per_round, config.max_uses,
                                 derive_seed(config.rng_seed, round_no, "seeds"))
        except PoolExhausted:
            state.pool_exhausted = True
            PhaseContext(statedir, state, on_checkpoint).commit()
            return state
        selected_ids = [s.ref_id for s in seeds]

    synth_cfg = SynthConfig(
        model=config.model, target_pairs=config.target_pairs, min_pairs=config.min_pairs,
        max_parse_retries=config.max_parse_retries, temperature=config.temperature,
        max_output_units=config.max_output_units)
    dialogues: list[DialogueRecord] = []
    failures = 0
    for seq, seed in enumerate(seeds):
        try:
            dialogues.append(synthesize(seed, synth_cfg, gateway, mode=mode,
                                        round_no=round_no, seq=seq))
        except SynthesisFailed as exc:
            failures += 1
            log.warning("seed %d failed in round %d: %s", seq, round_no, exc)
    if seeds and not dialogues:
        raise SynthesisFailed(f"round {round_no}: all {len(seeds)} seeds failed")

    times = []
    dialogue_records = []
    for dlg in dialogues:
        rec = dlg.to_record()
        times.append({"id": dlg.id, "created_at": rec.pop("created_at")})
        dialogue_records.append(rec)
    write_atomic(statedir.seeds_path(round_no),
                 ({"seq": i, **s.to_record()} for i, s in enumerate(seeds)))
    write_atomic(statedir.dialogues_path(round_no), dialogue_records)
    write_atomic(statedir.times_path(round_no), times)
    if selected_ids:
        store.save()

    state.round = round_no
    state.phase = "synthesized"
    state.counters["dialogues_total"] += len(dialogues)
    _round_counters(state, round_no).update({
        "seeds": len(seeds), "dialogues": len(dialogues), "synthesis_failures": failures})
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state


def _phase_curate(statedir: StateDir, state: RunState, config: PipelineConfig,
                  on_checkpoint: Optional[CheckpointHook]) -> RunState:
    round_no = state.round
    store = _load_store(statedir)
    dialogues = load_round_dialogues(statedir, round_no)
    new_questions = extract_questions(dialogues)
    new_ids = {q.id for q in new_questions}
    store.add(new_questions, persist=False)

    pool = store.by_status("pending", "kept", "edited")
    _, removals = dedup(pool, threshold=config.dedup_threshold)
    applied = 0
    for removal in removals:
        if removal.removed_id not in new_ids:
            log.warning("dedup flagged pre-existing question %s against %s; skipping",
                        removal.removed_id, removal.surviving_id)
            continue
        store.mark_removed_as_duplicate(removal.removed_id, removal.surviving_id,
                                        removal.similarity)
        applied += 1

    write_atomic(statedir.round_questions_path(round_no),
                 (q.to_record() for q in sorted(new_questions, key=lambda q: q.id)))
    write_atomic(statedir.verdicts_path(round_no), store.drain_audit())
    store.save()

    state.phase = "curated"
    _round_counters(state, round_no).update({
        "questions_extracted": len(new_questions), "dedup_removed": applied})
    _refresh_pool_counters(state, store)
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state


def _phase_batch(statedir: StateDir, state: RunState, config: PipelineConfig,
                 on_checkpoint: Optional[CheckpointHook]) -> RunState:
    round_no = state.round
    store = _load_store(statedir)
    pending = store.pending()
    batch = ReviewBatch(id=f"batch-{round_no:04d}", round=round_no)
    if pending:
        vocab = fit_vocabulary([q.effective_text for q in pending], min_df=config.min_df)
        vectors = [vectorize(q.effective_text, vocab) for q in pending]
        rows = [i for i, v in enumerate(vectors) if not v.is_zero]
        if rows:
            cluster_questions = [pending[i] for i in rows]
            cluster_vectors = [vectors[i] for i in rows]
            k = min(config.k or default_k(len(rows)), len(rows))
            clustering = kmeans(cluster_vectors, k,
                                derive_seed(config.rng_seed, round_no, "kmeans"),
                                dim=len(vocab))
            store.assign_clusters([q.id for q in cluster_questions],
                                  clustering.assignments, persist=False)
            themes = {j: "/".join(top_terms(clustering.centroids[j], vocab, 5))
                      for j in range(clustering.k)}
            batch = build_review_batch(
                cluster_questions, cluster_vectors, clustering, config.per_cluster,
                derive_seed(config.rng_seed, round_no, "reps"),
                batch_id=f"batch-{round_no:04d}", themes=themes)
            write_text_atomic(statedir.themes_path(round_no),
                              _themes_markdown(batch, store))
    write_text_atomic(statedir.batch_path(round_no), _batch_json(batch))
    store.save()

    state.phase = "awaiting_review"
    _round_counters(state, round_no)["batch_entries"] = len(batch.entries)
    _refresh_pool_counters(state, store)
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state


def _batch_json(batch: ReviewBatch) -> str:
    return json.dumps(batch.to_record(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def load_batch(statedir: StateDir, round_no: int) -> ReviewBatch:
    return ReviewBatch.from_record(
        json.loads(statedir.batch_path(round_no).read_text(encoding="utf-8")))


def _themes_markdown(batch: ReviewBatch, store: QuestionStore) -> str:
    """One-column table per theme with its representative questions."""
    lines: list[str] = []
    by_cluster: dict[int, list[str]] = {}
    for entry in batch.entries:
        by_cluster.setdefault(entry.cluster, []).append(entry.question_id)
    for cluster_idx in sorted(by_cluster):
        label = batch.themes.get(cluster_idx, f"cluster {cluster_idx}")
        lines.append(f"| **Theme: {label}** |")
        lines.append("| --- |")
        for qid in by_cluster[cluster_idx][:3]:
            text = store.get(qid).effective_text.replace("|", "\\|")
            lines.append(f"| *{text}* |")
        lines.append("")
    return "\n".join(lines) + "\n"


def _phase_auto_review(statedir: StateDir, state: RunState,
                       on_checkpoint: Optional[CheckpointHook]) -> RunState:
    round_no = state.round
    store = _load_store(statedir)
    existing_audit = read_records(statedir.verdicts_path(round_no)) \
        if statedir.verdicts_path(round_no).exists() else []
    for q in store.pending():
        store.apply_verdict(Verdict(question_id=q.id, action="keep",
                                    reviewer="auto-keep", expected_revision=q.revision))
    write_atomic(statedir.verdicts_path(round_no), existing_audit + store.drain_audit())
    store.save()

    state.phase = "review_done"
    _refresh_pool_counters(state, store)
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state


def complete_review(statedir: StateDir, state: RunState,
                    on_checkpoint: Optional[CheckpointHook] = None) -> RunState:
    """Flip awaiting_review -> review_done (used by the review service)."""
    if state.phase != "awaiting_review":
        raise ValueError(f"cannot complete review from phase {state.phase}")
    store = _load_store(statedir)
    state.phase = "review_done"
    _refresh_pool_counters(state, store)
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state


def run_round(statedir: StateDir, config: PipelineConfig, gateway: Gateway, *,
              mode: str = "replay", auto_keep: bool = False,
              on_checkpoint: Optional[CheckpointHook] = None) -> RunState:
    """Advance the run through one round (resuming mid-round when needed)."""
    state = statedir.load_state()
    if state.phase == "finished":
        return state
    if state.phase in ("ingested", "review_done"):
        state = _phase_synthesize(statedir, state, config, gateway, mode, on_checkpoint)
        if state.pool_exhausted:
            return state
    if state.phase == "synthesized":
        state = _phase_curate(statedir, state, config, on_checkpoint)
    if state.phase == "curated":
        state = _phase_batch(statedir, state, config, on_checkpoint)
    if state.phase == "awaiting_review":
        batch = load_batch(statedir, state.round)
        if auto_keep or not batch.entries:
            state = _phase_auto_review(statedir, state, on_checkpoint)
    return state


def should_stop(state: RunState, config: PipelineConfig) -> bool:
    completed = state.round + (1 if state.phase in ("review_done", "finished") else 0)
    return (state.counters.get("dialogues_total", 0) >= config.target_dialogues
            or completed >= config.max_rounds
            or state.pool_exhausted)


def finish(statedir: StateDir, state: RunState,
           on_checkpoint: Optional[CheckpointHook] = None) -> RunState:
    if state.phase not in ("review_done", "ingested"):
        raise ValueError(f"cannot finish from phase {state.phase}")
    state.phase = "finished"
    PhaseContext(statedir, state, on_checkpoint).commit()
    return state


def run_until_stop(statedir: StateDir, config: PipelineConfig, gateway: Gateway, *,
                   mode: str = "replay", auto_keep: bool = False,
                   on_checkpoint: Optional[CheckpointHook] = None) -> RunState:
    """Loop rounds until a stop condition; returns with phase awaiting_review
    when a round needs human adjudication."""
    state = statedir.load_state()
    while True:
        if state.phase == "finished":
            return state
        if state.phase in ("ingested", "review_done") and should_stop(state, config):
            return finish(statedir, state, on_checkpoint)
        state = run_round(statedir, config, gateway, mode=mode, auto_keep=auto_keep,
                          on_checkpoint=on_checkpoint)
        if state.phase == "awaiting_review":
            return state
