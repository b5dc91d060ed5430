"""Planted-community synthetic citation data.

Physical nodes are split into equal-size a-priori communities; each
timestep emits a fixed number of citation links whose targets stay inside
the source's community with probability p and land in a recent sliding
time window.  Output is deterministic for a given seed.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .temporal_graph import RawLink

PlantedAssignment = dict[str, int]

SWEEPABLE_PARAMETERS = ("p", "d")


class ConfigError(ValueError):
    """Invalid generator configuration."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Benchmark parameters.

    n_c a-priori communities of m members each (n = m * n_c physical
    nodes), t_max timesteps, sliding window of w timesteps, average
    out-degree d per temporal node per timestep (d * n links emitted per
    timestep), intra-community citation probability p.
    """

    n_c: int
    m: int
    t_max: int
    w: int
    d: float
    p: float
    seed: int

    def __post_init__(self) -> None:
        if self.n_c < 1 or self.m < 1:
            raise ConfigError("n_c and m must be positive")
        if self.t_max < 1:
            raise ConfigError("t_max must be positive")
        if self.w < 1:
            raise ConfigError("window w must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.d <= 0:
            raise ConfigError("average out-degree d must be positive")
        per_step = self.d * self.n
        if abs(per_step - round(per_step)) > 1e-9 or round(per_step) < 1:
            raise ConfigError(
                f"d*n must be a positive integer link count per timestep, got {per_step}"
            )
        # Degenerate corners where a branch has no valid target: the intra
        # branch needs a community mate at t=1, the inter branch needs a
        # second community.
        if self.p > 0 and self.m < 2:
            raise ConfigError("p > 0 requires communities of at least 2 members")
        if self.p < 1 and self.n_c < 2:
            raise ConfigError("p < 1 requires at least 2 communities")

    @property
    def n(self) -> int:
        return self.n_c * self.m

    @property
    def links_per_step(self) -> int:
        return round(self.d * self.n)

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "GeneratorConfig":
        required = {"n_c", "m", "t_max", "w", "d", "p", "seed"}
        missing = required - set(data)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        try:
            return cls(
                n_c=int(data["n_c"]),
                m=int(data["m"]),
                t_max=int(data["t_max"]),
                w=int(data["w"]),
                d=float(data["d"]),
                p=float(data["p"]),
                seed=int(data["seed"]),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"non-numeric config value: {exc}") from None

    @classmethod
    def from_json_file(cls, path: str | Path) -> "GeneratorConfig":
        with open(path, encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid config JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        return cls.from_mapping(data)


def planted_assignment(config: GeneratorConfig) -> PlantedAssignment:
    """Labels "0".."n-1" in contiguous blocks of m per community."""
    return {str(i): i // config.m for i in range(config.n)}


def generate(config: GeneratorConfig) -> tuple[list[RawLink], PlantedAssignment]:
    """Generate the raw link list and its planted community assignment.

    Per timestep t in 1..t_max, emits exactly d*n links: source drawn
    uniformly; target node drawn within the source community with
    probability p, otherwise uniformly over the other communities; target
    time drawn uniformly over {max(1, t-w), ..., t}.  A draw equal to the
    emitting temporal node itself is rejected and redrawn, so a node never
    cites its own instant.
    """
    rng = random.Random(config.seed)
    n, m = config.n, config.m
    labels = [str(i) for i in range(n)]
    links: list[RawLink] = []
    for t in range(1, config.t_max + 1):
        lo = max(1, t - config.w)
        for _ in range(config.links_per_step):
            src = rng.randrange(n)
            block = (src // m) * m
            if rng.random() < config.p:
                tgt = block + rng.randrange(m)
            else:
                tgt = rng.randrange(n - m)
                if tgt >= block:
                    tgt += m
            t2 = rng.randint(lo, t)
            if tgt == src and t2 == t:
                if lo < t:
                    while t2 == t:
                        t2 = rng.randint(lo, t)
                else:
                    # t == 1: the window is {1}, so redraw the community mate.
                    while tgt == src:
                        tgt = block + rng.randrange(m)
            links.append(((labels[src], t), (labels[tgt], t2)))
    return links, planted_assignment(config)


@dataclass(frozen=True)
class SweepCell:
    value: float
    seed: int
    links: list[RawLink]
    assignment: PlantedAssignment


def cell_seed(seed: int, parameter: str, value: float) -> int:
    """Stable 64-bit seed for one sweep cell, independent of run order."""
    digest = hashlib.sha256(
        f"{parameter}={float(value)!r};seed={seed}".encode()
    ).digest()
    return int.from_bytes(digest[:8], "big")


def sweep(
    base: GeneratorConfig,
    parameter: str,
    values: Sequence[float],
    seeds: Sequence[int],
) -> list[SweepCell]:
    """Generate one dataset per (value, seed) pair of a parameter sweep."""
    if parameter not in SWEEPABLE_PARAMETERS:
        raise ConfigError(f"sweep parameter must be one of {SWEEPABLE_PARAMETERS}")
    if not values:
        raise ConfigError("sweep requires at least one parameter value")
    if not seeds:
        raise ConfigError("sweep requires at least one seed")
    cells = []
    for value in values:
        for seed in seeds:
            config = replace(
                base, **{parameter: value, "seed": cell_seed(seed, parameter, value)}
            )
            links, assignment = generate(config)
            cells.append(SweepCell(float(value), seed, links, assignment))
    return cells


def write_assignment(assignment: PlantedAssignment, out: IO[str] | str | Path) -> None:
    """Write the `label community_index` sidecar, one node per line."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as handle:
            write_assignment(assignment, handle)
        return
    for label, community in assignment.items():
        out.write(f"{label} {community}\n")


def read_assignment(source: Iterable[str] | str | Path) -> PlantedAssignment:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return read_assignment(handle)
    assignment: PlantedAssignment = {}
    for lineno, line in enumerate(source, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected `label community_index`")
        assignment[fields[0]] = int(fields[1])
    return assignment
