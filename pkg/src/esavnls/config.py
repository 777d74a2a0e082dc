"""Flat ``key = value`` run configuration with command-line overrides."""
from __future__ import annotations

import ast
import logging
import math
import operator
from dataclasses import dataclass, fields
from pathlib import Path

log = logging.getLogger(__name__)

_OPS = {
    ast.Add: operator.add, ast.Sub: operator.sub,
    ast.Mult: operator.mul, ast.Div: operator.truediv,
    ast.USub: operator.neg, ast.UAdd: operator.pos,
}


def parse_number(text: str) -> float:
    """Float literal or simple arithmetic in ``pi`` (``2*pi``, ``pi/2``)."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported numeric expression: {text!r}")

    return ev(ast.parse(text.strip(), mode="eval").body)


def _tuple(text: str, conv) -> tuple:
    parts = text.split(",") if "," in text else text.split()
    return tuple(conv(part) for part in parts if part.strip())


@dataclass(frozen=True)
class RunConfig:
    dims: int = 2
    lengths: tuple[float, ...] | None = None
    nodes: tuple[int, ...] | None = None
    beta: float = 5.0
    c0: float = 1.0
    stages: str = "2"
    tau: float = 0.01
    t_final: float = 1.0
    ic: str = "plane_wave"
    k1: int = 1
    k2: int = 1
    k3: int = 1
    tol: float = 1e-13
    max_iters: int = 200
    stride: int = 1
    outdir: str = "out"
    taus: tuple[float, ...] = ()

    def __post_init__(self):
        if self.dims not in (2, 3):
            raise ValueError(f"dims must be 2 or 3, got {self.dims}")
        if self.lengths is None:
            object.__setattr__(self, "lengths", (2 * math.pi,) * self.dims)
        if self.nodes is None:
            object.__setattr__(self, "nodes", (16,) * self.dims)
        object.__setattr__(self, "stages", str(self.stages).strip().lower())
        if len(self.lengths) != self.dims or len(self.nodes) != self.dims:
            raise ValueError(f"lengths and nodes need {self.dims} entries")
        if not self.tau > 0 or not self.t_final > 0:
            raise ValueError("tau and t_final must be positive")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.ic == "plane_wave":
            for a, m in enumerate(self.wave_indices):
                if not abs(m) < self.nodes[a] / 2:
                    raise ValueError(f"wave index {m} not resolvable with {self.nodes[a]} nodes")

    @property
    def wave_indices(self) -> tuple[int, ...]:
        return (self.k1, self.k2, self.k3)[: self.dims]

    def steps_for(self, tau: float) -> int:
        ratio = self.t_final / tau
        n = round(ratio)
        if n >= 1 and abs(ratio - n) <= 1e-9 * max(1.0, n):
            return n
        n = max(1, math.floor(ratio))
        log.warning("t_final/tau = %.17g is not an integer; truncating to %d steps", ratio, n)
        return n

    @property
    def steps(self) -> int:
        return self.steps_for(self.tau)


_CONVERTERS = {
    "dims": int,
    "lengths": lambda s: _tuple(s, parse_number),
    "nodes": lambda s: _tuple(s, int),
    "beta": parse_number,
    "c0": parse_number,
    "stages": str,
    "tau": parse_number,
    "t_final": parse_number,
    "ic": str,
    "k1": int, "k2": int, "k3": int,
    "tol": parse_number,
    "max_iters": int,
    "stride": int,
    "outdir": str,
    "taus": lambda s: _tuple(s, parse_number),
}
KEYS = tuple(f.name for f in fields(RunConfig))


def parse_pairs(pairs: dict[str, str], base: RunConfig | None = None) -> RunConfig:
    values = {}
    for key, raw in pairs.items():
        key = key.strip().replace("-", "_")
        if key not in _CONVERTERS:
            raise KeyError(f"unknown config key {key!r}")
        values[key] = _CONVERTERS[key](str(raw).strip())
    if base is None:
        return RunConfig(**values)
    merged = {f: getattr(base, f) for f in KEYS}
    # changing dims invalidates per-axis defaults inherited from the base
    if "dims" in values and values["dims"] != base.dims:
        merged["lengths"] = merged["nodes"] = None
    merged.update(values)
    return RunConfig(**merged)


def parse_text(text: str) -> dict[str, str]:
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def load(path: str | Path, overrides: dict[str, str] | None = None) -> RunConfig:
    pairs = parse_text(Path(path).read_text())
    pairs.update(overrides or {})
    return parse_pairs(pairs)


def serialize(cfg: RunConfig) -> str:
    lines = []
    for key in KEYS:
        v = getattr(cfg, key)
        if isinstance(v, tuple):
            v = ", ".join(repr(x) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{key} = {v}")
    return "\n".join(lines) + "\n"
