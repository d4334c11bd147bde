from .config import DEFAULT_TARGET_DIALOGUES, PipelineConfig, derive_seed
from .rounds import (
    complete_review,
    finish,
    init_state_dir,
    load_all_dialogues,
    load_batch,
    load_config,
    load_round_dialogues,
    run_round,
    run_until_stop,
    should_stop,
)
from .seeds import select_seeds
from .state import PHASES, PhaseContext, RunState, StateDir, StateLock

__all__ = [
    "DEFAULT_TARGET_DIALOGUES",
    "PipelineConfig",
    "derive_seed",
    "complete_review",
    "finish",
    "init_state_dir",
    "load_all_dialogues",
    "load_batch",
    "load_config",
    "load_round_dialogues",
    "run_round",
    "run_until_stop",
    "should_stop",
    "select_seeds",
    "PHASES",
    "PhaseContext",
    "RunState",
    "StateDir",
    "StateLock",
]
