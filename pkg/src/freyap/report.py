"""Run reports: a flat list of named checks plus a config echo, serialized as JSON."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from freyap import __version__

PASS, FAIL, INFO = "pass", "fail", "info"


def _plain(x: Any) -> Any:
    """Convert to JSON-safe values; rationals as 'a/b', non-finite floats as strings."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        # ints beyond double range are kept exact as strings
        return x if abs(x) < 2**53 else str(x)
    if hasattr(x, "item") and callable(x.item):  # numpy scalar
        return _plain(x.item())
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "__dataclass_fields__"):
        return _plain(asdict(x))
    return str(x)


@dataclass
class Check:
    name: str
    status: str
    observed: Any = None
    expected: Any = None
    inputs: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class RunReport:
    command: str
    config: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__
    _t0: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    def add(self, name: str, ok: Optional[bool], observed=None, expected=None, note: str = "", **inputs) -> Check:
        """Record a check; ok=None marks it informational."""
        status = INFO if ok is None else (PASS if ok else FAIL)
        c = Check(name, status, _plain(observed), _plain(expected), _plain(inputs), note)
        self.checks.append(c)
        return c

    def info(self, name: str, observed=None, note: str = "", **inputs) -> Check:
        return self.add(name, None, observed, None, note, **inputs)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def finish(self) -> "RunReport":
        self.wall_time = time.perf_counter() - self._t0
        return self

    def to_dict(self) -> dict:
        return {"command": self.command, "version": self.version, "wall_time": self.wall_time,
                "config": _plain(self.config), "checks": [asdict(c) for c in self.checks]}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        r = cls(d["command"], d.get("config", {}), [Check(**c) for c in d.get("checks", [])],
                d.get("wall_time", 0.0), d.get("version", __version__))
        return r

    @classmethod
    def from_json(cls, s: str) -> "RunReport":
        return cls.from_dict(json.loads(s))

    def summary(self) -> str:
        counts = {s: sum(c.status == s for c in self.checks) for s in (PASS, FAIL, INFO)}
        lines = [f"{self.command}: {counts[PASS]} pass, {counts[FAIL]} fail, {counts[INFO]} info "
                 f"({self.wall_time:.2f}s)"]
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.name}: {c.observed}"
                         + (f" (expected {c.expected})" if c.expected is not None else ""))
        return "\n".join(lines)


def write_csv(path: str, header: Iterable[str], rows: Iterable[Iterable[Any]]) -> int:
    """Comma-separated, header row, plain decimal points. Returns the row count."""
    n = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(header))
        for row in rows:
            w.writerow([_plain(v) for v in row])
            n += 1
    return n
