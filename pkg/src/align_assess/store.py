"""File-backed versioned store for models and sessions.

Layout: one directory per record (`<root>/<kind>/<id>/`) holding one JSON
file per version plus a small index with the latest version number.
Every write goes to a temp file in the same directory, is fsynced, then
renamed into place, so an interrupted write can never damage an existing
version. The index is a convenience; when it is missing or unreadable the
store falls back to scanning the version files.

Payloads carry a SHA-256 checksum; a mismatch on read signals on-disk
corruption rather than returning bad data. Deletion is a tombstone flag,
never file removal.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from pathlib import Path

from .errors import (
    ChecksumMismatchError,
    ImmutabilityViolationError,
    NotFoundError,
    ValidationError,
)

KINDS = ("model", "session")
_VERSION_FILE = re.compile(r"^v(\d{4})\.json$")

# Characters allowed in record ids (they become directory names).
_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def checksum_of(payload: dict) -> str:
    return hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()


def _atomic_write(path: Path, data: bytes):
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".tmp-",
                                    suffix=path.suffix)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    dir_fd = os.open(path.parent, os.O_RDONLY)
    try:
        os.fsync(dir_fd)
    finally:
        os.close(dir_fd)


class Store:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    # -- paths -----------------------------------------------------------------

    def _record_dir(self, kind: str, record_id: str) -> Path:
        if kind not in KINDS:
            raise ValidationError(f"unknown record kind {kind!r}", path=kind)
        if not _SAFE_ID.match(record_id):
            raise ValidationError(
                f"record id {record_id!r} contains unsafe characters",
                path=record_id)
        return self.root / kind / record_id

    def _version_path(self, rdir: Path, version: int) -> Path:
        return rdir / f"v{version:04d}.json"

    # -- index handling ----------------------------------------------------------

    def _scan_versions(self, rdir: Path) -> list[int]:
        if not rdir.is_dir():
            return []
        versions = []
        for name in os.listdir(rdir):
            m = _VERSION_FILE.match(name)
            if m:
                versions.append(int(m.group(1)))
        return sorted(versions)

    def _read_index(self, rdir: Path) -> dict | None:
        index_path = rdir / "index.json"
        try:
            with open(index_path, encoding="utf-8") as handle:
                data = json.load(handle)
            if not isinstance(data, dict) or "latest" not in data:
                return None
            return data
        except (OSError, json.JSONDecodeError, ValueError):
            return None

    def _latest_version(self, rdir: Path) -> int:
        index = self._read_index(rdir)
        if index is not None:
            latest = int(index["latest"])
            if self._version_path(rdir, latest).exists():
                return latest
        # Index missing or stale; recover from the version files themselves.
        versions = self._scan_versions(rdir)
        return versions[-1] if versions else 0

    def _is_tombstoned(self, rdir: Path) -> bool:
        index = self._read_index(rdir)
        return bool(index and index.get("tombstone"))

    def _write_index(self, rdir: Path, latest: int, tombstone: bool = False):
        _atomic_write(rdir / "index.json", json.dumps(
            {"latest": latest, "tombstone": tombstone},
            sort_keys=True).encode("utf-8"))

    # -- core ---------------------------------------------------------------------

    def put(self, kind: str, record_id: str, payload: dict) -> int:
        rdir = self._record_dir(kind, record_id)
        rdir.mkdir(parents=True, exist_ok=True)
        latest = self._latest_version(rdir)
        if kind == "session" and latest > 0:
            self._check_session_immutability(rdir, latest, payload)
        version = latest + 1
        envelope = {
            "kind": kind,
            "id": record_id,
            "version": version,
            "checksum": checksum_of(payload),
            "payload": payload,
        }
        data = json.dumps(envelope, sort_keys=True, indent=2,
                          ensure_ascii=False).encode("utf-8")
        _atomic_write(self._version_path(rdir, version), data)
        self._write_index(rdir, version, tombstone=False)
        return version

    def _check_session_immutability(self, rdir: Path, latest: int, new_payload: dict):
        previous = self._load_envelope(rdir, latest)["payload"]
        prev_phase = previous.get("phase")
        new_phase = new_payload.get("phase")
        if prev_phase == "reported":
            raise ImmutabilityViolationError(
                "session is reported; no further versions allowed",
                path=str(rdir.name))
        if prev_phase == "finalized":
            if new_phase != "reported":
                raise ImmutabilityViolationError(
                    "finalized session may only transition to reported",
                    path=str(rdir.name))
            # Everything but the phase flip and its audit entry must be frozen.
            frozen_prev = {k: v for k, v in previous.items()
                           if k not in ("phase", "audit_log")}
            frozen_new = {k: v for k, v in new_payload.items()
                          if k not in ("phase", "audit_log")}
            if _canonical(frozen_prev) != _canonical(frozen_new):
                raise ImmutabilityViolationError(
                    "finalized session content changed beyond the reported "
                    "transition", path=str(rdir.name))

    def _load_envelope(self, rdir: Path, version: int) -> dict:
        path = self._version_path(rdir, version)
        try:
            with open(path, encoding="utf-8") as handle:
                envelope = json.load(handle)
        except FileNotFoundError:
            raise NotFoundError(
                f"{rdir.parent.name} {rdir.name!r} version {version} not found",
                path=rdir.name)
        except (OSError, json.JSONDecodeError, ValueError) as err:
            raise ChecksumMismatchError(
                f"record {rdir.name!r} version {version} unreadable: {err}",
                path=rdir.name)
        payload = envelope.get("payload")
        if not isinstance(payload, dict) or \
                envelope.get("checksum") != checksum_of(payload):
            raise ChecksumMismatchError(
                f"checksum mismatch for {rdir.name!r} version {version}",
                path=rdir.name)
        return envelope

    def get(self, kind: str, record_id: str, version: int | None = None) -> dict:
        """Return the payload; latest version when none requested."""
        rdir = self._record_dir(kind, record_id)
        if version is None:
            if self._is_tombstoned(rdir):
                raise NotFoundError(f"{kind} {record_id!r} is deleted",
                                    path=record_id)
            version = self._latest_version(rdir)
            if version == 0:
                raise NotFoundError(f"{kind} {record_id!r} not found",
                                    path=record_id)
        return self._load_envelope(rdir, version)["payload"]

    def latest_version(self, kind: str, record_id: str) -> int:
        rdir = self._record_dir(kind, record_id)
        version = self._latest_version(rdir)
        if version == 0:
            raise NotFoundError(f"{kind} {record_id!r} not found", path=record_id)
        return version

    def exists(self, kind: str, record_id: str) -> bool:
        rdir = self._record_dir(kind, record_id)
        return not self._is_tombstoned(rdir) and self._latest_version(rdir) > 0

    def list(self, kind: str) -> list[dict]:
        """Latest payload per live record id, sorted by id."""
        kind_dir = self.root / kind
        if not kind_dir.is_dir():
            return []
        out = []
        for record_id in sorted(os.listdir(kind_dir)):
            rdir = kind_dir / record_id
            if not rdir.is_dir() or self._is_tombstoned(rdir):
                continue
            version = self._latest_version(rdir)
            if version == 0:
                continue
            out.append({"id": record_id, "version": version,
                        "payload": self._load_envelope(rdir, version)["payload"]})
        return out

    def delete(self, kind: str, record_id: str):
        """Tombstone; version files stay on disk for audit."""
        rdir = self._record_dir(kind, record_id)
        version = self._latest_version(rdir)
        if version == 0:
            raise NotFoundError(f"{kind} {record_id!r} not found", path=record_id)
        self._write_index(rdir, version, tombstone=True)
