"""Persistent JSON cache of exact degree results."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock

from . import __version__
from .core import FormatProfile
from .degree import DegreeResult

log = logging.getLogger(__name__)

ENV_VAR = "SUBSPACE_DEGREE_CACHE"
DEFAULT_PATH = "./.degree-cache.json"


def resolve_path(flag: str | None = None) -> Path:
    """The environment variable wins over the flag, which wins over the default."""
    return Path(os.environ.get(ENV_VAR) or flag or DEFAULT_PATH)


@dataclass
class ResultCacheEntry:
    key: str
    degree: str
    f: str
    grass_degrees: list[str]
    engine_version: str
    timestamp: str
    result: dict = field(default_factory=dict)

    @classmethod
    def from_result(cls, res: DegreeResult) -> "ResultCacheEntry":
        rec = res.to_record()
        return cls(
            key=res.profile.key,
            degree=rec["degree"],
            f=rec["f"],
            grass_degrees=rec["grass_degrees"],
            engine_version=__version__,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            result=rec,
        )

    def to_result(self) -> DegreeResult:
        return DegreeResult.from_record(self.result)


class ResultCache:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = FileLock(str(self.path) + ".lock")

    def _read(self) -> dict[str, dict]:
        try:
            with open(self.path, encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            return {}
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache %s: %s", self.path, exc)
            return {}
        if not isinstance(data, dict) or not isinstance(data.get("entries"), dict):
            log.warning("ignoring malformed cache %s", self.path)
            return {}
        return data["entries"]

    def get(self, profile: FormatProfile) -> DegreeResult | None:
        with self._lock:
            raw = self._read().get(profile.key)
        if raw is None:
            return None
        try:
            entry = ResultCacheEntry(**raw)
            if entry.engine_version != __version__:
                return None
            return entry.to_result()
        except (TypeError, KeyError, ValueError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", profile.key, exc)
            return None

    def put(self, res: DegreeResult) -> None:
        entry = ResultCacheEntry.from_result(res)
        with self._lock:
            entries = self._read()
            entries[entry.key] = entry.__dict__
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".degree-cache-")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"entries": entries}, fh, indent=1, sort_keys=True)
            os.replace(tmp, self.path)
