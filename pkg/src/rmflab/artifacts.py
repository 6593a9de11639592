"""Reproducible result files: CSV/JSONL writers and the run manifest.

All files are written atomically (temp file in the target directory, then
rename), UTF-8 with LF line endings and '.' decimal separator. Floats are
serialized with repr() so values round-trip exactly; identical configs and
seeds therefore produce byte-identical artifacts. The manifest carries the
effective config, versions, timestamps, and per-file checksums; it is the
only file whose bytes vary between runs (timestamps).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(
    path: Path,
    schema: str,
    columns: list[str],
    rows: list[tuple],
    provenance: str | None = None,
) -> None:
    lines = [f"# rmflab-csv schema={schema}"]
    if provenance:
        lines.append(f"# {provenance}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def write_jsonl(path: Path, records: list[dict], provenance: str | None = None) -> None:
    lines = []
    if provenance:
        lines.append(json.dumps({"provenance": provenance}, sort_keys=True))
    for rec in records:
        lines.append(json.dumps(rec, sort_keys=True))
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    config: dict
    tool_version: str
    scheme_version: str
    backend: str
    started: str = ""
    finished: str = ""
    files: dict = field(default_factory=dict)

    def start(self) -> None:
        self.started = datetime.now(timezone.utc).isoformat()

    def finish(self, paths: list[Path]) -> None:
        self.finished = datetime.now(timezone.utc).isoformat()
        self.files = {str(p.name): sha256_file(p) for p in paths}

    def write(self, path: Path) -> None:
        _atomic_write_text(
            Path(path), json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"
        )
