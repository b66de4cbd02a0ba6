"""UTC timestamp helpers and calendar-month deadline arithmetic."""

from __future__ import annotations

import calendar
from datetime import datetime, timezone


def utc(year: int, month: int, day: int, hour: int = 0, minute: int = 0,
        second: int = 0, microsecond: int = 0) -> datetime:
    return datetime(year, month, day, hour, minute, second, microsecond, tzinfo=timezone.utc)


def ensure_utc(ts: datetime) -> datetime:
    """Normalize to an aware UTC datetime; naive input is rejected."""
    if ts.tzinfo is None:
        raise ValueError("timestamps must be timezone-aware")
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    """ISO 8601 with a Z suffix; sub-second digits only when present."""
    ts = ensure_utc(ts)
    if ts.microsecond:
        return ts.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(text: str) -> datetime:
    """Inverse of format_timestamp; accepts an explicit offset as well."""
    normalized = text.strip()
    if normalized.endswith(("Z", "z")):
        normalized = normalized[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(normalized)
    except ValueError:
        raise ValueError(f"malformed timestamp: {text!r}")
    return ensure_utc(ts)


def add_calendar_months(ts: datetime, months: int) -> datetime:
    """Same day-of-month in the target month, clamped to that month's last day.

    Jan 31 + 1 month is Feb 28 (29 in leap years); the time of day is kept.
    This is the legal-deadline convention used for the 1-month response
    deadline and the 2-month extension.
    """
    ts = ensure_utc(ts)
    month_index = ts.year * 12 + (ts.month - 1) + months
    year, month = divmod(month_index, 12)
    month += 1
    day = min(ts.day, calendar.monthrange(year, month)[1])
    return ts.replace(year=year, month=month, day=day)
