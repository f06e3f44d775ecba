"""On-disk cache of enumerated basis blocks.

One JSON-lines file per ``(labels, mode, degree, internal count)`` block,
each line a graph record (affine keys add an ``eta`` field), plus a
``manifest.json`` holding the block counts and a format version.  The
default directory comes from ``PINWHEEL_CACHE_DIR``.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Iterable

from .complexes import AffineElement
from .graph import AFFINE, PROJECTIVE, GraphError, SignedCanonicalGraph, from_record, to_record

FORMAT_VERSION = 1
ENV_VAR = "PINWHEEL_CACHE_DIR"


class CacheError(RuntimeError):
    """A cache file is missing, truncated or inconsistent with the manifest."""


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def _orientation(mode: str) -> str:
    return AFFINE if mode in (AFFINE, "kontsevich") else PROJECTIVE


class BasisCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.manifest_path = self.directory / "manifest.json"
        self.manifest = self._read_manifest()

    def _read_manifest(self) -> dict:
        if not self.manifest_path.exists():
            return {"format_version": FORMAT_VERSION, "blocks": {}}
        try:
            data = json.loads(self.manifest_path.read_text())
        except (OSError, ValueError) as exc:
            raise CacheError(f"unreadable manifest {self.manifest_path}: {exc}") from exc
        if data.get("format_version") != FORMAT_VERSION:
            raise CacheError(f"cache format {data.get('format_version')!r} is not {FORMAT_VERSION}")
        return data

    @staticmethod
    def block_name(labels: Iterable, mode: str, degree: int, m: int) -> str:
        params = json.dumps([list(labels), mode, degree, m], separators=(",", ":"))
        digest = hashlib.sha256(params.encode()).hexdigest()[:16]
        return f"{mode}-d{degree}-m{m}-{digest}.jsonl"

    def load(self, labels: Iterable, mode: str, degree: int, m: int) -> list | None:
        name = self.block_name(tuple(labels), mode, degree, m)
        expected = self.manifest["blocks"].get(name)
        if expected is None:
            return None
        path = self.directory / name
        try:
            lines = path.read_text().splitlines()
            keys = [self._decode(json.loads(line)) for line in lines if line]
        except (OSError, ValueError, KeyError, TypeError, GraphError) as exc:
            raise CacheError(f"corrupt cache block {path}: {exc}") from exc
        if len(keys) != expected:
            raise CacheError(f"cache block {path} has {len(keys)} entries, manifest says {expected}")
        return keys

    def store(self, labels: Iterable, mode: str, degree: int, m: int, keys: list) -> None:
        name = self.block_name(tuple(labels), mode, degree, m)
        text = "".join(json.dumps(self._encode(k, mode), separators=(",", ":")) + "\n" for k in keys)
        tmp = self.directory / (name + ".tmp")
        tmp.write_text(text)
        tmp.replace(self.directory / name)
        self.manifest["blocks"][name] = len(keys)
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.manifest, indent=1, sort_keys=True))
        tmp.replace(self.manifest_path)

    @staticmethod
    def _encode(key, mode: str) -> dict:
        if isinstance(key, AffineElement):
            rec = to_record(SignedCanonicalGraph(key.graph, 1, AFFINE))
            rec["eta"] = list(key.eta)
            return rec
        return to_record(SignedCanonicalGraph(key, 1, _orientation(mode)))

    @staticmethod
    def _decode(rec: dict):
        g = from_record(rec).graph
        if "eta" in rec:
            return AffineElement(g, tuple(rec["eta"]))
        return g
