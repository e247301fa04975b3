"""Experiment configs, graph specs and reports."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import asdict, dataclass, field
from typing import Any

from ..errors import InvalidParams
from ..graph_core import Network, generate, read_graph

KINDS = ("local_limit", "foster", "tail", "diameter", "verify")

ALIASES = {
    "k33": ("complete_bipartite", {"a": 3, "b": 3}),
    "petersen": None,  # built below
}

_PATTERNS = [
    (re.compile(r"^k(\d+)_(\d+)$"), "complete_bipartite", ("a", "b")),
    (re.compile(r"^k(\d+)$"), "complete", ("n",)),
    (re.compile(r"^c(\d+)$"), "cycle", ("n",)),
    (re.compile(r"^p(\d+)$"), "path", ("n",)),
    (re.compile(r"^q(\d+)$"), "hypercube", ("dim",)),
]


def _petersen() -> Network:
    from ..graph_core import build_network

    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_network(outer + spokes + inner, 10)


def parse_graph_spec(spec) -> dict:
    """Normalise a graph spec to ``{"family", "params"}`` or ``{"path"}``.

    Accepts dicts, aliases (``k4``, ``c5``, ``k33``, ``k3_5``, ``q3``,
    ``petersen``), ``family:key=val,...`` strings and file paths.
    """
    if isinstance(spec, dict):
        if "path" in spec or "alias" in spec:
            return dict(spec)
        if "family" not in spec:
            raise InvalidParams("graph spec needs 'family' or 'path'")
        return {"family": spec["family"], "params": dict(spec.get("params", {}))}
    if not isinstance(spec, str) or not spec:
        raise InvalidParams(f"bad graph spec {spec!r}")
    low = spec.lower()
    if low in ALIASES:
        if ALIASES[low] is None:
            return {"alias": low}
        fam, params = ALIASES[low]
        return {"family": fam, "params": dict(params)}
    for pat, fam, names in _PATTERNS:
        m = pat.match(low)
        if m:
            return {"family": fam, "params": {k: int(x) for k, x in zip(names, m.groups())}}
    if ":" in spec and not os.path.exists(spec):
        fam, _, rest = spec.partition(":")
        params = {}
        for part in filter(None, rest.split(",")):
            k, eq, v = part.partition("=")
            if not eq:
                raise InvalidParams(f"bad parameter {part!r} in {spec!r}")
            params[k.strip()] = int(v)
        return {"family": fam.strip(), "params": params}
    if os.path.exists(spec):
        return {"path": spec}
    raise InvalidParams(f"unknown graph {spec!r}")


def graph_name(spec: dict) -> str:
    if "path" in spec:
        return os.path.basename(spec["path"])
    if "alias" in spec:
        return spec["alias"]
    params = ",".join(f"{k}={v}" for k, v in spec["params"].items())
    return f"{spec['family']}({params})"


def resolve_graph(spec, seed=None) -> tuple[Network, str]:
    spec = parse_graph_spec(spec)
    if "path" in spec:
        return read_graph(spec["path"]), graph_name(spec)
    if "alias" in spec:
        return _petersen(), spec["alias"]
    return generate(spec["family"], spec["params"], seed=seed), graph_name(spec)


@dataclass
class ExperimentConfig:
    graph: Any
    kind: str = "local_limit"
    radius: int = 1
    samples: int = 50
    seed: int = 0
    threads: int = 1
    tolerances: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    out: str | None = None
    csv_out: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParams(f"unknown experiment kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.radius < 0:
            raise InvalidParams("radius must be >= 0")
        if self.samples < 1:
            raise InvalidParams("samples must be >= 1")
        self.graph = parse_graph_spec(self.graph)

    def tol(self, key: str, default):
        return self.tolerances.get(key, default)

    def opt(self, key: str, default):
        return self.options.get(key, default)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        raw = json.loads(text)
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidParams(f"unknown config keys {sorted(unknown)}")
        return cls(**raw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


@dataclass
class CheckRecord:
    name: str
    observed: float
    predicted: float
    sigma: float | None
    passed: bool
    gated: bool = True
    note: str = ""

    def as_row(self) -> dict:
        return {
            "check": self.name,
            "observed": _num(self.observed),
            "predicted": _num(self.predicted),
            "sigma": _num(self.sigma),
            "pass": self.passed,
        }


@dataclass
class ExperimentReport:
    kind: str
    graph: str
    records: list[CheckRecord] = field(default_factory=list)
    wall_clock: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if r.gated)

    def add(self, name, observed, predicted, sigma, passed, gated=True, note="") -> CheckRecord:
        rec = CheckRecord(name, float(observed), float(predicted), None if sigma is None else float(sigma), bool(passed), gated, note)
        self.records.append(rec)
        return rec

    def get(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "graph": self.graph,
            "passed": self.passed,
            "records": [{**r.as_row(), "gated": r.gated, "note": r.note} for r in self.records],
            "data": self.data,
        }
        if timing:
            out["wall_clock"] = self.wall_clock
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=1, default=_num)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["check", "observed", "predicted", "sigma", "pass"], lineterminator="\n")
        w.writeheader()
        for r in self.records:
            w.writerow(r.as_row())
        return buf.getvalue()

    def write(self, json_path=None, csv_path=None) -> None:
        if json_path:
            with open(json_path, "w") as fh:
                fh.write(self.to_json())
        if csv_path:
            with open(csv_path, "w") as fh:
                fh.write(self.to_csv())


def write_rows(path, rows: list[dict]) -> None:
    """Plot-ready CSV (tail curves, census histograms)."""
    if not rows:
        return
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
