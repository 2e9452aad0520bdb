"""Run artifacts on disk: atomic writes, content hashes, manifests.

Every file a run produces is written atomically (temp file + rename) so a
killed process never leaves a half-written artifact, and is listed in a
manifest with its sha256 so a run directory can be verified byte for byte
later.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path


def atomic_write_text(path, text):
    """Write text to path through a temp file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def sha256_of_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def canonical_json(obj):
    """Deterministic JSON: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


MANIFEST_NAME = "manifest.json"


def write_manifest(directory, meta=None):
    """Hash every artifact in a run directory into manifest.json."""
    directory = Path(directory)
    files = {}
    for p in sorted(directory.rglob("*")):
        if p.is_file() and p.name != MANIFEST_NAME and not p.name.startswith("."):
            files[p.relative_to(directory).as_posix()] = sha256_of_file(p)
    payload = {"files": files, "meta": meta or {}}
    atomic_write_text(directory / MANIFEST_NAME, canonical_json(payload))
    return payload


def load_manifest(directory):
    with open(Path(directory) / MANIFEST_NAME, encoding="utf-8") as fh:
        return json.load(fh)


def verify_manifest(directory):
    """Re-hash a run directory against its manifest.

    Returns a list of problem strings; empty means everything matches.
    """
    directory = Path(directory)
    try:
        manifest = load_manifest(directory)
    except FileNotFoundError:
        return [f"missing {MANIFEST_NAME}"]
    problems = []
    recorded = manifest.get("files", {})
    for rel, digest in sorted(recorded.items()):
        p = directory / rel
        if not p.is_file():
            problems.append(f"missing file: {rel}")
        elif sha256_of_file(p) != digest:
            problems.append(f"hash mismatch: {rel}")
    for p in sorted(directory.rglob("*")):
        if p.is_file() and p.name != MANIFEST_NAME and not p.name.startswith("."):
            rel = p.relative_to(directory).as_posix()
            if rel not in recorded:
                problems.append(f"unlisted file: {rel}")
    return problems
