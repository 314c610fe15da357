"""UTC timestamps for audit records and reports.

Honors SOURCE_DATE_EPOCH (the reproducible-builds convention) so scripted
runs can produce byte-identical stored state. Ordering guarantees inside a
session come from audit sequence numbers, never from the clock.
"""

from __future__ import annotations

import os
from datetime import datetime, timezone


def utc_now() -> datetime:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    return datetime.now(timezone.utc)


def isoformat(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def now_iso() -> str:
    return isoformat(utc_now())
