"""Append-only JSON-lines cache of point counts.

One record per line, keyed by (sha of the canonical variety spec, p, k).
The path comes from the CFZ_CACHE environment variable, defaulting to
.cfz-cache.jsonl in the working directory.  Counts are deterministic, so
duplicate keys are harmless and the first hit wins.
"""

import json
import os

from .counting import CountRecord

DEFAULT_CACHE_PATH = ".cfz-cache.jsonl"


def cache_path() -> str:
    return os.environ.get("CFZ_CACHE", DEFAULT_CACHE_PATH)


class CountCache:
    def __init__(self, path=None):
        self.path = path or cache_path()

    def get(self, sha: str, p: int, k: int):
        if not os.path.exists(self.path):
            return None
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    d = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if d.get("sha") == sha and d.get("p") == p and d.get("k") == k:
                    return CountRecord(d["name"], d["p"], d["k"], d["count"], d["method"])
        return None

    def put(self, sha: str, record: CountRecord):
        d = {"sha": sha}
        d.update(record.to_json())
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(d, sort_keys=True) + "\n")
