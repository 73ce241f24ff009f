"""Resource availability schedules.

A schedule maps each resource to the closed minute intervals during which it
is available.  The file format has one resource per line::

    CT_machine:[10,25];[35,40]
    radiologist:[0,15];[30,40]

``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TimeInterval:
    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.start > self.end:
            raise ScheduleError(f"invalid interval [{self.start},{self.end}]")

    def __contains__(self, t: int) -> bool:
        return self.start <= t <= self.end

    def __str__(self):
        return f"[{self.start},{self.end}]"


def normalize(intervals: Iterable[TimeInterval]) -> tuple[TimeInterval, ...]:
    """Sort intervals and merge any that share at least one minute."""
    merged: list[TimeInterval] = []
    for iv in sorted(intervals):
        if merged and iv.start <= merged[-1].end:
            last = merged[-1]
            merged[-1] = TimeInterval(last.start, max(last.end, iv.end))
        else:
            merged.append(iv)
    return tuple(merged)


class AvailabilityMap(Mapping[str, tuple[TimeInterval, ...]]):
    """Immutable resource -> normalized intervals map."""

    def __init__(self, entries: Mapping[str, Iterable] | None = None):
        self._data: dict[str, tuple[TimeInterval, ...]] = {}
        for name, ivs in (entries or {}).items():
            ivs = [iv if isinstance(iv, TimeInterval) else TimeInterval(*iv) for iv in ivs]
            self._data[name] = normalize(ivs)
        self._starts = {n: [iv.start for iv in ivs] for n, ivs in self._data.items()}

    def __getitem__(self, name):
        return self._data[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, AvailabilityMap):
            return self._data == other._data
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._data.items()))

    def __repr__(self):
        body = ", ".join(f"{n!r}: [{', '.join(map(str, ivs))}]" for n, ivs in self._data.items())
        return f"AvailabilityMap({{{body}}})"

    def is_available(self, resource: str, t: int) -> bool:
        starts = self._starts.get(resource)
        if not starts:
            return False
        i = bisect.bisect_right(starts, t) - 1
        return i >= 0 and t <= self._data[resource][i].end

    def horizon(self) -> int:
        return max((ivs[-1].end for ivs in self._data.values() if ivs), default=0)


def is_available(schedule: AvailabilityMap, resource: str, t: int) -> bool:
    """True iff some interval of *resource* contains minute *t*.

    Unknown resources are never available.
    """
    return schedule.is_available(resource, t)


def horizon(schedule: AvailabilityMap) -> int:
    return schedule.horizon()


_LINE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$")
_INTERVAL_RE = re.compile(r"^\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*$")


def parse_schedule(text: str) -> AvailabilityMap:
    entries: dict[str, list[TimeInterval]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise ScheduleError(f"line {lineno}: expected 'resource:[a,b];...'")
        name, rest = m.group(1), m.group(2).strip()
        if name in entries:
            raise ScheduleError(f"line {lineno}: duplicate resource {name!r}")
        ivs = []
        for part in rest.split(";") if rest else []:
            im = _INTERVAL_RE.match(part)
            if im is None:
                raise ScheduleError(f"line {lineno}: malformed interval {part.strip()!r}")
            start, end = int(im.group(1)), int(im.group(2))
            if start > end:
                raise ScheduleError(
                    f"line {lineno}: interval start {start} is after end {end}"
                )
            ivs.append(TimeInterval(start, end))
        entries[name] = ivs
    return AvailabilityMap(entries)


def format_schedule(schedule: AvailabilityMap) -> str:
    lines = [f"{name}:" + ";".join(map(str, ivs)) for name, ivs in schedule.items()]
    return "".join(line + "\n" for line in lines)


def load_schedule(path) -> AvailabilityMap:
    with open(path, encoding="utf-8") as fh:
        return parse_schedule(fh.read())
