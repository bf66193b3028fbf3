"""Append-only JSON Lines checkpoints keyed by a hash of the job parameters."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any, Iterator, Optional

__all__ = ["CheckpointError", "params_hash", "Checkpoint"]


class CheckpointError(RuntimeError):
    pass


def params_hash(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class Checkpoint:
    """One header line ``{"kind": ..., "hash": ...}`` then one record per finished unit.

    A torn final line (a crash mid-write) is dropped on load; any other
    malformed line, or a header for different parameters, is refused.
    """

    def __init__(self, path: os.PathLike | str, kind: str, params: dict) -> None:
        self.path = Path(path)
        self.kind = kind
        self.params = params
        self.hash = params_hash(params)
        self.records: list[dict] = []
        if self.path.exists() and self.path.stat().st_size:
            self._load()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w") as fh:
                fh.write(json.dumps({"kind": kind, "hash": self.hash, "params": params}) + "\n")

    def _load(self) -> None:
        lines = self.path.read_text().split("\n")
        torn = lines[-1] != ""
        lines = [ln for ln in lines if ln]
        try:
            header = json.loads(lines[0])
        except (json.JSONDecodeError, IndexError) as exc:
            raise CheckpointError(f"{self.path}: unreadable header") from exc
        if header.get("kind") != self.kind or header.get("hash") != self.hash:
            raise CheckpointError(
                f"{self.path}: checkpoint belongs to different parameters "
                f"(hash {header.get('hash')} != {self.hash})"
            )
        body = lines[1:]
        if torn and body:
            body = body[:-1]
            self._rewrite(header, body)
        for i, ln in enumerate(body, start=2):
            try:
                rec = json.loads(ln)
            except json.JSONDecodeError as exc:
                raise CheckpointError(f"{self.path}:{i}: corrupt record") from exc
            if not isinstance(rec, dict) or "lo" not in rec or "hi" not in rec:
                raise CheckpointError(f"{self.path}:{i}: record lacks an interval")
            self.records.append(rec)

    def _rewrite(self, header: dict, body: list[str]) -> None:
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text("\n".join([json.dumps(header)] + body) + "\n")
        tmp.replace(self.path)

    def done(self) -> set[tuple[int, int]]:
        return {(r["lo"], r["hi"]) for r in self.records}

    def get(self, lo: int, hi: int) -> Optional[dict]:
        for r in self.records:
            if r["lo"] == lo and r["hi"] == hi:
                return r
        return None

    def append(self, record: dict[str, Any]) -> None:
        with self.path.open("a") as fh:
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.records.append(record)

    def __iter__(self) -> Iterator[dict]:
        return iter(self.records)
