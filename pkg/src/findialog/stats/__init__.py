from .metrics import (
    FOOTNOTE,
    METRICS,
    MetricSummary,
    StatsReport,
    dataset_stats,
    quantile,
    word_count,
)
from .topics import TopicRow, topic_report, topics_markdown

__all__ = [
    "FOOTNOTE",
    "METRICS",
    "MetricSummary",
    "StatsReport",
    "dataset_stats",
    "quantile",
    "word_count",
    "TopicRow",
    "topic_report",
    "topics_markdown",
]
