"""Experiment configuration and parameter sweeps over the array bounds.

A config is a flat ``key = value`` text file.  Sweep ranges are written as
``8..12`` (inclusive), ``1,2,5`` or a single integer::

    # nonexistence sweep
    n = 8..12
    K = 2
    s = 0
    k = 1,2
    m = 1
    search = false
    budget_nodes = 1000000
    format = csv

Every sweep report starts with the fully resolved config, so a report is
enough to rerun the experiment.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import time
from dataclasses import dataclass, fields, replace

from .conditions import Condition, Scale
from .errors import BudgetExceeded, ConfigError, RegimeError
from .warray import brute_force_search_array, contradiction_check, lower_bound, search_budget, upper_bound

COLUMNS = ["n", "K", "s", "k", "m", "lower", "upper", "ratio", "contradiction", "search"]
FORMATS = ("json", "csv")


def parse_range(text: str) -> tuple[int, ...]:
    """``"8..12"`` -> (8, 9, 10, 11, 12); ``"1,3"`` -> (1, 3); ``""`` is an error."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"bad range {text!r}") from None
    if not out:
        raise ConfigError(f"empty range {text!r}")
    return tuple(sorted(set(out)))


def format_range(values: tuple[int, ...]) -> str:
    if len(values) > 1 and list(values) == list(range(values[0], values[-1] + 1)):
        return f"{values[0]}..{values[-1]}"
    return ",".join(str(v) for v in values)


def _parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: tuple[int, ...] = (8,)
    K: tuple[int, ...] = (2,)
    s: tuple[int, ...] = (0,)
    k: tuple[int, ...] = (1,)
    m: tuple[int, ...] = (1,)
    seed: int = 0
    search: bool = False
    budget_nodes: int = 1_000_000
    time_limit: float = 600.0  # seconds for all searches together
    format: str = "json"

    def __post_init__(self):
        for name in ("n", "K", "s", "k", "m"):
            values = getattr(self, name)
            if not values:
                raise ConfigError(f"sweep range {name} is empty")
            if any(v < 0 for v in values):
                raise ConfigError(f"sweep range {name} has negative values")
        if self.budget_nodes <= 0 or self.time_limit <= 0:
            raise ConfigError("budgets must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")

    @classmethod
    def from_mapping(cls, values: dict, base: "ExperimentConfig | None" = None) -> "ExperimentConfig":
        """Apply string (or typed) ``values`` on top of ``base``; unknown keys are errors."""
        base = base or cls(budget_nodes=search_budget())
        known = {f.name: f for f in fields(cls)}
        changes = {}
        for key, raw in values.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if raw is None:
                continue
            if key in ("n", "K", "s", "k", "m"):
                changes[key] = raw if isinstance(raw, tuple) else parse_range(raw)
            elif key == "search":
                changes[key] = raw if isinstance(raw, bool) else _parse_bool(raw)
            elif key in ("seed", "budget_nodes"):
                changes[key] = int(raw)
            elif key == "time_limit":
                changes[key] = float(raw)
            else:
                changes[key] = str(raw).strip()
        try:
            return replace(base, **changes)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_text(cls, text: str, base: "ExperimentConfig | None" = None) -> "ExperimentConfig":
        values = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value")
            key, value = (x.strip() for x in line.split("=", 1))
            values[key] = value
        return cls.from_mapping(values, base)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = format_range(v) if isinstance(v, tuple) else v
        return out

    def to_text(self) -> str:
        lines = []
        for key, v in self.to_dict().items():
            if isinstance(v, bool):
                v = str(v).lower()
            lines.append(f"{key} = {v}")
        return "\n".join(lines) + "\n"

    def points(self):
        return itertools.product(self.n, self.K, self.s, self.k, self.m)


def sweep_point(n: int, K: int, s: int, k: int, m: int, search: bool, budget: int) -> dict:
    row = dict(n=n, K=K, s=s, k=k, m=m, lower="", upper="", ratio="", contradiction="", search="")
    if not 0 <= k <= n - s:
        row["search"] = "out-of-domain"
        return row
    row["lower"] = lower_bound(n, s, k, m)
    row["upper"] = upper_bound(n, s, k, m)
    flag, ratio = contradiction_check(n, s, k)
    row["ratio"] = str(ratio)
    row["contradiction"] = flag
    if not search:
        row["search"] = "skipped"
    elif s != 0 or not 1 <= K <= n or m < 1:
        # the search runs over sigma = {} only
        row["search"] = "not-applicable"
    else:
        try:
            found = brute_force_search_array(Scale(n, K), m, k, Condition(), budget=budget)
        except BudgetExceeded:
            row["search"] = f"budget-exceeded({budget})"
        except RegimeError:
            row["search"] = "not-applicable"
        else:
            row["search"] = "none found" if found is None else "found"
    return row


def sweep(config: ExperimentConfig) -> list[dict]:
    """One row per parameter point, in lexicographic ``(n, K, s, k, m)`` order."""
    rows = []
    start = time.monotonic()
    for n, K, s, k, m in config.points():
        search = config.search and time.monotonic() - start < config.time_limit
        row = sweep_point(n, K, s, k, m, search, config.budget_nodes)
        if config.search and not search:
            row["search"] = "time-limit"
        rows.append(row)
    return rows


def render(config: ExperimentConfig, rows: list[dict], fmt: str | None = None) -> str:
    fmt = fmt or config.format
    if fmt == "json":
        return json.dumps({"config": config.to_dict(), "columns": COLUMNS, "rows": rows}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        for key, v in config.to_dict().items():
            buf.write(f"# {key} = {str(v).lower() if isinstance(v, bool) else v}\n")
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: (str(row[c]).lower() if isinstance(row[c], bool) else row[c]) for c in COLUMNS})
        return buf.getvalue()
    raise ConfigError(f"unknown format {fmt!r}")
