from .evaluate import aggregate, evaluate, report_from_means, report_markdown
from .prompts import JUDGE_TEMPERATURE, parse_score, render_judge_prompt
from .types import CandidateAnswer, EvalQuestion, EvalReport, JudgeScoreRecord, ModelAggregate

__all__ = [
    "aggregate",
    "evaluate",
    "report_from_means",
    "report_markdown",
    "JUDGE_TEMPERATURE",
    "parse_score",
    "render_judge_prompt",
    "CandidateAnswer",
    "EvalQuestion",
    "EvalReport",
    "JudgeScoreRecord",
    "ModelAggregate",
]
