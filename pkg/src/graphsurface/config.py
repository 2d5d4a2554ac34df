"""Experiment configuration (JSON, versioned)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .ensemble import EnsembleSpec, block_capacity, edge_budget
from .errors import DomainError
from .moments import as_probability
from .motif import Motif, load_motif

SCHEMA_VERSION = 1
ENSEMBLES = ("dependent", "independent", "both", "block_dependent", "block_independent")


class ConfigError(DomainError):
    pass


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ConfigError(f"not a number: {x!r}")
    if isinstance(x, float):
        return Fraction(repr(x))
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise ConfigError(f"not a rational number: {x!r}") from None


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class BlockConfig:
    """Block sizes are ``weights[i] * n`` for each n on the grid."""

    weights: list[int]
    p: list[list[Fraction]]

    @classmethod
    def from_dict(cls, d: dict) -> "BlockConfig":
        try:
            weights = [int(w) for w in d["weights"]]
            p = [[parse_rational(x) for x in row] for row in d["p"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"block section needs 'weights' and 'p': {exc}") from None
        if any(w <= 0 for w in weights):
            raise ConfigError("block weights must be positive")
        if len(p) != len(weights) or any(len(row) != len(weights) for row in p):
            raise ConfigError("block 'p' must be a BxB matrix matching 'weights'")
        return cls(weights, p)

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "p": [[format_rational(x) for x in row] for row in self.p]}

    def sizes(self, n: int) -> tuple[int, ...]:
        return tuple(w * n for w in self.weights)

    def spec(self, kind: str, n: int) -> EnsembleSpec:
        sizes = self.sizes(n)
        B = len(sizes)
        if kind == "block_independent":
            return EnsembleSpec(kind, sizes=sizes, matrix=tuple(tuple(row) for row in self.p))
        # fixed per-pair counts: round(p_ab * capacity), halves up
        mat = [[0] * B for _ in range(B)]
        for a in range(B):
            for b in range(a, B):
                cap = block_capacity(sizes, a, b)
                mat[a][b] = mat[b][a] = math.floor(self.p[a][b] * cap + Fraction(1, 2))
        return EnsembleSpec(kind, sizes=sizes, matrix=tuple(tuple(r) for r in mat))


@dataclass
class ExperimentConfig:
    motifs: list[str]
    ensemble: str = "both"
    p: Fraction = Fraction(3, 10)
    E: int | None = None
    n_grid: list[int] = field(default_factory=lambda: [16, 32])
    replicas: int = 1000
    master_seed: int = 0
    output_dir: str = "out"
    threads: int = 1
    block: BlockConfig | None = None
    dump_samples: int = 0
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {self.schema_version}")
        if not self.motifs:
            raise ConfigError("at least one motif is required")
        if self.ensemble not in ENSEMBLES:
            raise ConfigError(f"ensemble must be one of {ENSEMBLES}")
        if not self.n_grid:
            raise ConfigError("n_grid must be nonempty")
        if any(int(n) < 0 for n in self.n_grid):
            raise ConfigError("n_grid entries must be nonnegative")
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 bits")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        try:
            self.p = as_probability(self.p)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        if self.E is not None and len(self.n_grid) != 1:
            raise ConfigError("an explicit E needs a single-entry n_grid")
        if self.ensemble.startswith("block") and self.block is None:
            raise ConfigError(f"ensemble {self.ensemble} needs a 'block' section")
        for spec in self.motifs:
            self._load(spec)

    @staticmethod
    def _load(spec: str) -> Motif:
        try:
            return load_motif(spec)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    def load_motifs(self) -> list[Motif]:
        return [self._load(s) for s in self.motifs]

    def families(self) -> list[str]:
        if self.ensemble == "both":
            return ["dependent", "independent"]
        return [self.ensemble]

    def edge_count(self, n: int) -> int:
        return self.E if self.E is not None else edge_budget(n, self.p)

    def spec(self, family: str, n: int) -> EnsembleSpec:
        try:
            if family == "dependent":
                return EnsembleSpec("dependent", n=n, E=self.edge_count(n))
            if family == "independent":
                return EnsembleSpec("independent", n=n, p=self.p)
            return self.block.spec(family, n)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {
            "schema_version", "motifs", "ensemble", "p", "E", "n_grid", "replicas",
            "master_seed", "output_dir", "threads", "block", "dump_samples",
        }
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "motifs" not in d:
            raise ConfigError("config needs 'motifs'")
        kw = dict(d)
        try:
            kw["motifs"] = [str(m) for m in d["motifs"]]
            if "p" in d:
                kw["p"] = parse_rational(d["p"])
            if d.get("E") is not None:
                kw["E"] = int(d["E"])
            if "n_grid" in d:
                kw["n_grid"] = [int(n) for n in d["n_grid"]]
            for key in ("replicas", "master_seed", "threads", "dump_samples", "schema_version"):
                if key in d:
                    kw[key] = int(d[key])
            if d.get("block") is not None:
                kw["block"] = BlockConfig.from_dict(d["block"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config value: {exc}") from None
        return cls(**kw)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "motifs": list(self.motifs),
            "ensemble": self.ensemble,
            "p": format_rational(self.p),
            "E": self.E,
            "n_grid": list(self.n_grid),
            "replicas": self.replicas,
            "master_seed": self.master_seed,
            "output_dir": self.output_dir,
            "threads": self.threads,
            "block": self.block.to_dict() if self.block else None,
            "dump_samples": self.dump_samples,
        }

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"
