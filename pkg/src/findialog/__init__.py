"""findialog: synthesize, curate, and evaluate a multi-turn financial
instruction-tuning dataset from a document corpus."""

__version__ = "0.1.0"
