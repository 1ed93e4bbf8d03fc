"""JSON-lines reading/writing shared by the dataset and corpus modules.

Writes are atomic (temp file in the target directory, then rename) so a
crashed or concurrent run never leaves a half-written output.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Iterator
from pathlib import Path

from .errors import FormatViolationError


def iter_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, object) for each non-blank line.

    Raises FormatViolationError naming the line on malformed JSON or on a
    line that is not a JSON object.
    """
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise FormatViolationError(f"invalid JSON: {exc.msg}", str(path), line_no) from exc
            if not isinstance(obj, dict):
                raise FormatViolationError("line is not a JSON object", str(path), line_no)
            yield line_no, obj


def dump_jsonl(path: str | Path, objects: Iterable[dict]) -> int:
    """Write one compact JSON object per line; returns the object count."""
    return atomic_write_text(
        path, "".join(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n" for obj in objects)
    )


def atomic_write_text(path: str | Path, text: str) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return text.count("\n")
