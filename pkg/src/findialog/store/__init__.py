from .jsonl import (
    append_record,
    dumps_record,
    iter_records,
    read_records,
    write_atomic,
    write_text_atomic,
)
from .manifest import RunManifest, config_digest

# findialog.store.export depends on dialogue types; import it directly to
# avoid a package-level import cycle through the gateway.

__all__ = [
    "append_record",
    "dumps_record",
    "iter_records",
    "read_records",
    "write_atomic",
    "write_text_atomic",
    "RunManifest",
    "config_digest",
]
