"""Service time source: real system clock or a settable fixed clock.

The fixed clock exists for deterministic deadline and breach testing; its
state persists under the data directory so a restarted service sees the same
time it was stopped at.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .timeutil import ensure_utc, format_timestamp, parse_timestamp


class SystemClock:
    mode = "system"

    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class FixedClock:
    mode = "fixed"

    def __init__(self, initial: datetime, state_path: Optional[Path] = None):
        self._state_path = state_path
        self._now = ensure_utc(initial)
        if state_path is not None and state_path.exists():
            saved = json.loads(state_path.read_text())
            self._now = parse_timestamp(saved["now"])

    def now(self) -> datetime:
        return self._now

    def set(self, ts: datetime) -> None:
        self._now = ensure_utc(ts)
        if self._state_path is not None:
            self._state_path.write_text(json.dumps({"now": format_timestamp(self._now)}))


def make_clock(mode: str, data_dir: Optional[Path] = None,
               initial: Optional[datetime] = None):
    if mode == "system":
        return SystemClock()
    if mode == "fixed":
        state = data_dir / "clock.json" if data_dir else None
        return FixedClock(initial or datetime(2026, 1, 1, tzinfo=timezone.utc), state)
    raise ValueError(f"unknown clock mode {mode!r}")
