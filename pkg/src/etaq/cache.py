"""On-disk cache for series and statistic tables.

Layout: ``<dir>/<kind>/<param-hash>.json``.  The hash covers the parameters
that identify an object but not its precision, so one file holds the best
precision computed so far and a lookup hits whenever the stored precision
covers the request.  Writes go to a temporary file that is then renamed.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import qseries
from .partitions import StatTable

FORMAT_VERSION = 1
KINDS = ("g", "f", "eta", "eisenstein", "stats", "hseries")
ENV_VAR = "ETAQ_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    if sys.platform == "win32":
        base = Path(os.environ.get("LOCALAPPDATA", Path.home() / "AppData" / "Local"))
    elif sys.platform == "darwin":
        base = Path.home() / "Library" / "Caches"
    else:
        base = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache"))
    return base / "etaq"


def param_hash(kind: str, params: dict) -> str:
    blob = json.dumps({"kind": kind, "params": params, "v": FORMAT_VERSION}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


@dataclass
class CacheEntry:
    kind: str
    params: dict
    precision: int
    payload: dict
    version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "precision": self.precision,
            "payload": self.payload,
            "version": self.version,
        }


class Cache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def path(self, kind: str, params: dict) -> Path:
        if kind not in KINDS:
            raise ValueError(f"unknown cache kind {kind!r}")
        return self.root / kind / f"{param_hash(kind, params)}.json"

    def load(self, kind: str, params: dict, precision: int) -> CacheEntry | None:
        """The stored entry if its parameters match and its precision is at least ``precision``."""
        p = self.path(kind, params)
        try:
            doc = json.loads(p.read_text())
        except (OSError, ValueError):
            return None
        if doc.get("version") != FORMAT_VERSION or doc.get("params") != params or doc.get("kind") != kind:
            return None
        if doc["precision"] < precision:
            return None
        return CacheEntry(kind, doc["params"], doc["precision"], doc["payload"], doc["version"])

    def store(self, entry: CacheEntry) -> Path:
        p = self.path(entry.kind, entry.params)
        p.parent.mkdir(parents=True, exist_ok=True)
        old = self.load(entry.kind, entry.params, entry.precision + 1)
        if old is not None:
            return p  # never replace with a shorter entry
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry.to_dict(), fh, separators=(",", ":"))
            os.replace(tmp, p)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return p

    # typed helpers

    def series(self, kind: str, params: dict, precision: int, build) -> qseries.Q24Series:
        """Load a series known below ``precision`` or build, store and return it."""
        hit = self.load(kind, params, precision)
        if hit is not None:
            return qseries.from_dict(hit.payload).truncate(precision)
        f = build()
        self.store(CacheEntry(kind, params, f.precision, qseries.to_dict(f)))
        return f

    def stats(self, order: int, n_max: int, build) -> StatTable:
        params = {"order": order}
        hit = self.load("stats", params, n_max)
        if hit is not None:
            return StatTable.from_dict(hit.payload)
        table = build()
        self.store(CacheEntry("stats", params, table.n_max, table.to_dict()))
        return table
