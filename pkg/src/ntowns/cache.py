"""Newline-delimited JSON cache of solver results."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field

from . import __version__
from .geometry import OBJECTIVES, TOWN, Town, cost as shape_cost, to_thirds

SCHEMA_VERSION = 1


class CacheError(Exception):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CacheVersionError(CacheError):
    pass


class CacheFormatError(CacheError):
    pass


class CacheInvariantError(CacheError):
    pass


class CacheStaleError(CacheError):
    pass


def config_hash(objective: str, width_limit: int, solver_version: str = __version__) -> str:
    payload = json.dumps({"objective": objective, "width_limit": width_limit, "solver_version": solver_version}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class ResultRecord:
    n: int
    objective: str
    cost_times_3: int
    multiplicity: int | None
    shapes: list[list[list[int]]] = field(default_factory=list)
    solver_version: str = __version__
    config_hash: str = ""

    def to_json(self) -> str:
        return json.dumps({"schema": SCHEMA_VERSION, **asdict(self)}, separators=(",", ":"))

    def validate(self, line: int | None = None) -> None:
        if self.objective not in OBJECTIVES:
            raise CacheInvariantError(f"unknown objective {self.objective!r}", line)
        if self.n < 1:
            raise CacheInvariantError("n must be positive", line)
        if self.objective == TOWN and self.cost_times_3 % 3:
            raise CacheInvariantError("town cost_times_3 must be divisible by 3", line)
        if self.shapes:
            if self.multiplicity != len(self.shapes):
                raise CacheInvariantError("multiplicity does not match number of shapes", line)
            for pts in self.shapes:
                try:
                    town = Town(tuple(p) for p in pts)
                except (TypeError, ValueError) as exc:
                    raise CacheInvariantError(f"bad shape: {exc}", line) from None
                if town.n != self.n:
                    raise CacheInvariantError(f"shape has {town.n} points, expected {self.n}", line)
                if to_thirds(shape_cost(town, self.objective)) != self.cost_times_3:
                    raise CacheInvariantError("shape cost does not match cost_times_3", line)


_FIELDS = ("n", "objective", "cost_times_3", "multiplicity", "shapes", "solver_version", "config_hash")


def write_records(path: str, records) -> None:
    """Write records atomically: temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".ntowns-cache-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for rec in records:
                rec.validate()
                fh.write(rec.to_json() + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def read_records(path: str, expected_hash: dict[str, str] | None = None) -> list[ResultRecord]:
    """Read and validate a cache file.

    ``expected_hash`` maps objective -> config hash; records of a listed
    objective with a different hash raise :class:`CacheStaleError`.
    """
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CacheFormatError(f"malformed row ({exc.msg})", lineno) from None
            if not isinstance(obj, dict) or next(iter(obj), None) != "schema":
                raise CacheFormatError("row must be an object starting with 'schema'", lineno)
            if obj["schema"] != SCHEMA_VERSION:
                raise CacheVersionError(f"schema version {obj['schema']} != {SCHEMA_VERSION}", lineno)
            if set(obj) != {"schema", *_FIELDS}:
                raise CacheFormatError(f"unexpected fields {sorted(set(obj) ^ {'schema', *_FIELDS})}", lineno)
            rec = ResultRecord(**{k: obj[k] for k in _FIELDS})
            if not isinstance(rec.n, int) or not isinstance(rec.cost_times_3, int):
                raise CacheFormatError("n and cost_times_3 must be integers", lineno)
            rec.validate(lineno)
            if expected_hash and rec.objective in expected_hash and rec.config_hash != expected_hash[rec.objective]:
                raise CacheStaleError(f"config hash {rec.config_hash} is stale", lineno)
            out.append(rec)
    return out


def records_from_results(results, width_limit: int) -> list[ResultRecord]:
    out = []
    for n in sorted(results):
        r = results[n]
        out.append(
            ResultRecord(
                n=n,
                objective=r.objective,
                cost_times_3=r.cost3,
                multiplicity=r.multiplicity,
                shapes=[t.as_lists() for t in (r.shapes or [])],
                config_hash=config_hash(r.objective, width_limit),
            )
        )
    return out

