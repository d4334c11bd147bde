"""Dataset and training-config exports.

The chat export uses the conversations/from/value convention so the dataset
drops into existing finetuning stacks. The training-config export pins the
tuning constants this dataset was designed around: LoRA r=8, alpha=8,
dropout 0.05 on attention query/value, AdamW at lr 2e-5, 2048 max tokens.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from ..dialogue.types import INVESTOR, DialogueRecord
from ..errors import EmptyInput, RunNotFinished
from .jsonl import write_atomic

LORA_R = 8
LORA_ALPHA = 8
LORA_DROPOUT = 0.05
LORA_TARGETS = ["attention query", "attention value"]
LEARNING_RATE = 2e-5
OPTIMIZER = "AdamW"
MAX_TOKENS = 2048


def export_dataset(dialogues: Sequence[DialogueRecord], path: str | Path,
                   fmt: str = "chat_jsonl") -> int:
    if fmt != "chat_jsonl":
        raise ValueError(f"unknown export format: {fmt!r}")
    if not dialogues:
        raise EmptyInput("no dialogues to export")
    records = []
    for dlg in sorted(dialogues, key=lambda d: d.id):
        records.append({
            "id": dlg.id,
            "conversations": [
                {"from": "human" if t.role == INVESTOR else "assistant", "value": t.text}
                for t in dlg.turns
            ],
            "meta": {"seed_kind": dlg.seed.kind, "round": dlg.round},
        })
    write_atomic(path, records)
    return len(records)


def training_config(method: str, dataset_path: str, overrides: dict | None = None) -> dict:
    if method not in ("lora", "full_finetune"):
        raise ValueError(f"unknown method: {method!r}")
    config = {
        "method": method,
        "learning_rate": LEARNING_RATE,
        "optimizer": OPTIMIZER,
        "max_tokens": MAX_TOKENS,
        "dataset_path": dataset_path,
    }
    if method == "lora":
        config.update({
            "lora_r": LORA_R,
            "lora_alpha": LORA_ALPHA,
            "lora_dropout": LORA_DROPOUT,
            "lora_targets": list(LORA_TARGETS),
        })
    if overrides:
        config.update(overrides)
    return config


def export_training_config(run_phase: str, method: str, dataset_path: str,
                           path: str | Path, overrides: dict | None = None) -> dict:
    if run_phase != "finished":
        raise RunNotFinished(f"run phase is {run_phase}, not finished")
    config = training_config(method, dataset_path, overrides)
    Path(path).write_text(
        json.dumps(config, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    return config
