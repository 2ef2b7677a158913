"""Line-delimited record files, schema checks, atomic writes and run manifests.

Every file written here starts with a header record
``{"schema": "phantom-probe/<kind>", "version": N}``. Readers accept files
without a header (corpora and model outputs often come from elsewhere) but
reject a header for the wrong kind or version.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Iterable, Iterator

SCHEMA_VERSION = 1
SCHEMA_PREFIX = "phantom-probe/"

_INT_LIST = "list[int]"

# kind -> field -> (type, required)
SCHEMAS: dict[str, dict[str, tuple[Any, bool]]] = {
    "corpus": {"doc_id": (str, True), "text": (str, True)},
    "annotated": {
        "doc_id": (str, True),
        "original_text": (str, True),
        "targets": (list, True),
        "bracketed_text": (str, True),
        "prompt": (str, True),
    },
    "outputs": {"doc_id": (str, True), "output_text": (str, True), "output_ids": (_INT_LIST, False)},
    "trials": {
        "doc_id": (str, True),
        "target_index": (int, True),
        "input_word": (str, True),
        "output_surface": (str, True),
        "input_ids": (_INT_LIST, True),
        "output_ids": (_INT_LIST, True),
        "outcome": (str, True),
        "error_type": (str, False),
        "fired": (int, False),
        "brackets_present": (bool, False),
    },
    "labels": {
        "doc_id": (str, True),
        "target_index": (int, True),
        "word": (str, True),
        "behaviour": (str, True),
        "outcome": (str, True),
        "input_ids": (_INT_LIST, True),
        "output_ids": (_INT_LIST, True),
    },
}


class SchemaError(ValueError):
    def __init__(self, path: str | Path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path, self.line, self.message = str(path), line, message


def _type_ok(value: Any, expected: Any) -> bool:
    if expected == _INT_LIST:
        return isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    if expected is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, expected)


def validate(kind: str, record: Any) -> str | None:
    """Problem description, or None when ``record`` fits the schema."""
    if not isinstance(record, dict):
        return f"expected an object, got {type(record).__name__}"
    for name, (typ, required) in SCHEMAS[kind].items():
        if name not in record:
            if required:
                return f"missing field {name!r}"
            continue
        if record[name] is None and not required:
            continue
        if not _type_ok(record[name], typ):
            return f"field {name!r} has the wrong type"
    if kind == "annotated":
        for t in record["targets"]:
            if not (isinstance(t, list) and len(t) == 3 and _type_ok(t[:2], _INT_LIST) and isinstance(t[2], str)):
                return "targets must be [start, end, word] triples"
    return None


def header(kind: str) -> dict:
    return {"schema": SCHEMA_PREFIX + kind, "version": SCHEMA_VERSION}


def read_records(path: str | Path, kind: str) -> Iterator[dict]:
    """Yield validated records; raises SchemaError naming the offending line."""
    if kind not in SCHEMAS:
        raise ValueError(f"unknown record kind {kind!r}")
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(path, lineno, f"malformed record ({exc.msg})") from None
            if isinstance(rec, dict) and "schema" in rec:
                if lineno != 1:
                    raise SchemaError(path, lineno, "header record must be the first line")
                if rec["schema"] != SCHEMA_PREFIX + kind:
                    raise SchemaError(path, lineno, f"expected a {kind} file, found {rec['schema']!r}")
                if rec.get("version") != SCHEMA_VERSION:
                    raise SchemaError(path, lineno, f"unsupported schema version {rec.get('version')!r}")
                continue
            problem = validate(kind, rec)
            if problem:
                raise SchemaError(path, lineno, problem)
            yield rec


def _dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False)


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_records(path: str | Path, kind: str, records: Iterable[dict]) -> int:
    lines = [_dumps(header(kind))]
    for rec in records:
        problem = validate(kind, rec)
        if problem:
            raise ValueError(f"refusing to write invalid {kind} record: {problem}")
        lines.append(_dumps(rec))
    atomic_write_text(path, "\n".join(lines) + "\n")
    return len(lines) - 1


def write_json(path: str | Path, obj: Any) -> None:
    atomic_write_text(path, json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(path, exc.lineno, f"malformed JSON ({exc.msg})") from None


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def tool_version() -> str:
    try:
        return metadata.version("phantom-probe")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines a run's outputs; no timestamps, so equal manifests mean equal files."""

    command: str
    seed: int
    config: dict = field(default_factory=dict)
    vocab_path: str | None = None
    vocab_sha256: str | None = None
    tool_version: str = field(default_factory=tool_version)

    @classmethod
    def create(cls, command: str, seed: int, config: dict, vocab_path: str | Path | None = None) -> "RunManifest":
        digest = file_sha256(vocab_path) if vocab_path else None
        return cls(command, seed, dict(config), str(vocab_path) if vocab_path else None, digest)

    @property
    def run_id(self) -> str:
        body = asdict(self)
        body.pop("vocab_path")  # location does not affect outputs; content hash does
        canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def to_record(self) -> dict:
        return {"run_id": self.run_id, **asdict(self)}

    @classmethod
    def from_record(cls, rec: dict) -> "RunManifest":
        body = {k: v for k, v in rec.items() if k != "run_id"}
        manifest = cls(**body)
        if "run_id" in rec and rec["run_id"] != manifest.run_id:
            raise ValueError("manifest run_id does not match its contents")
        return manifest
