"""Shared-task dataset assembly: splits, context sampling and gold mappings."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping as TMapping, Sequence

from semsketch.corpus import Context, Mapping, SemSketchError, SenseKey, ingest_contexts, load_mapping, save_mapping, write_contexts
from semsketch.rng import SplitMix64
from semsketch.sketches import Sketch, read_sketches, strip_sense, write_sketches

log = logging.getLogger(__name__)

SPLIT_NAMES = ("trial", "dev", "manual_dev")


class DatasetError(SemSketchError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    """Size of one split.

    ``max_contexts`` optionally caps the split's total context count after
    per-sketch sampling (the manually validated split keeps fewer contexts
    than ``n_sketches * contexts_per_sketch``).
    """

    name: str
    n_sketches: int
    contexts_per_sketch: int
    publish_mapping: bool | None = None
    max_contexts: int | None = None

    def __post_init__(self) -> None:
        if self.name not in SPLIT_NAMES:
            raise ValueError(f"unknown split {self.name!r}; expected one of {SPLIT_NAMES}")
        if self.n_sketches < 1 or self.contexts_per_sketch < 1:
            raise ValueError(f"split {self.name}: sizes must be >= 1")
        if self.max_contexts is not None and self.max_contexts < 1:
            raise ValueError(f"split {self.name}: max_contexts must be >= 1")
        expected = self.name == "trial"
        if self.publish_mapping is None:
            object.__setattr__(self, "publish_mapping", expected)
        elif self.publish_mapping != expected:
            raise ValueError(f"split {self.name}: publish_mapping must be {expected}")

    @property
    def n_contexts(self) -> int:
        n = self.n_sketches * self.contexts_per_sketch
        return n if self.max_contexts is None else min(n, self.max_contexts)


PUBLISHED_SPLITS = (
    SplitSpec("trial", 20, 100),
    SplitSpec("dev", 895, 50),
    SplitSpec("manual_dev", 100, 50, max_contexts=4347),
)

DESK_SPLITS = (
    SplitSpec("trial", 2, 10),
    SplitSpec("dev", 10, 10),
    SplitSpec("manual_dev", 3, 10, max_contexts=13),
)


def parse_split_specs(text: str) -> list[SplitSpec]:
    """Parse ``name:n_sketches:contexts_per_sketch[:max_contexts]`` items joined by commas."""
    specs = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"bad split spec {item!r}")
        try:
            numbers = [int(p) for p in parts[1:]]
        except ValueError:
            raise ValueError(f"bad split spec {item!r}") from None
        specs.append(SplitSpec(parts[0], numbers[0], numbers[1], max_contexts=numbers[2] if len(numbers) == 3 else None))
    return specs


@dataclass
class Dataset:
    split: SplitSpec
    sketches: list[Sketch]
    contexts: list[Context]
    gold: Mapping = field(default_factory=dict)

    def check(self) -> None:
        sketch_ids = {s.id for s in self.sketches}
        if any(s.sense is not None for s in self.sketches):
            raise DatasetError(f"{self.split.name}: sketches must be anonymized")
        context_ids = [c.id for c in self.contexts]
        if len(set(context_ids)) != len(context_ids):
            raise DatasetError(f"{self.split.name}: duplicate context ids")
        unknown = set(self.gold.values()) - sketch_ids
        if unknown:
            raise DatasetError(f"{self.split.name}: gold points to unknown sketches {sorted(unknown)[:5]}")
        missing = set(self.gold) - set(context_ids)
        if missing:
            raise DatasetError(f"{self.split.name}: gold names unknown contexts {sorted(missing)[:5]}")


def _sense_of(sketch: Sketch, secret: TMapping[str, SenseKey] | None) -> SenseKey:
    if sketch.sense is not None:
        return sketch.sense
    if secret is None or sketch.id not in secret:
        raise DatasetError(f"sense of sketch {sketch.id} unknown; pass the secret mapping")
    return secret[sketch.id]


def _sample_contexts(
    rng: SplitMix64, pool: Sequence[Context], k: int, sketch: str, split: str, strict: bool
) -> list[Context]:
    pool = sorted(pool, key=lambda c: c.id)
    if len(pool) < k:
        msg = f"{split}: sketch {sketch} has {len(pool)} contexts, {k} requested"
        if strict:
            raise DatasetError(msg)
        log.warning("%s; using all available", msg)
        k = len(pool)
    return rng.sample(pool, k)


def split_dataset(
    sketches: Sequence[Sketch],
    context_pool: TMapping[SenseKey, Sequence[Context]],
    specs: Sequence[SplitSpec],
    seed: int,
    secret: TMapping[str, SenseKey] | None = None,
    strict: bool = False,
) -> list[Dataset]:
    """Sample disjoint trial/dev sketch sets, a manual_dev subset of dev, and their contexts.

    Trial and dev draw disjoint sketches from one seeded permutation; the
    manual_dev split is sampled from dev's sketches and dev's contexts. Every
    sampled context maps to the sketch of its sense in the gold mapping.
    """
    by_name = {}
    for spec in specs:
        if spec.name in by_name:
            raise DatasetError(f"split {spec.name} given twice")
        by_name[spec.name] = spec
    if "manual_dev" in by_name and "dev" not in by_name:
        raise DatasetError("manual_dev requires a dev split")
    if "manual_dev" in by_name and by_name["manual_dev"].n_sketches > by_name["dev"].n_sketches:
        raise DatasetError("manual_dev cannot have more sketches than dev")

    ordered = sorted(sketches, key=lambda s: s.id)
    senses = {s.id: _sense_of(s, secret) for s in ordered}
    primary = [s for s in specs if s.name != "manual_dev"]
    needed = sum(s.n_sketches for s in primary)
    if needed > len(ordered):
        raise DatasetError(f"{needed} sketches requested, only {len(ordered)} available")

    rng = SplitMix64(seed)
    order = list(range(len(ordered)))
    rng.shuffle(order)

    datasets: dict[str, Dataset] = {}
    cursor = 0
    for spec in primary:
        chosen = sorted((ordered[i] for i in order[cursor : cursor + spec.n_sketches]), key=lambda s: s.id)
        cursor += spec.n_sketches
        contexts, gold = [], {}
        for sk in chosen:
            pool = context_pool.get(senses[sk.id], ())
            for ctx in _sample_contexts(rng, pool, spec.contexts_per_sketch, sk.id, spec.name, strict):
                if ctx.id in gold:
                    raise DatasetError(f"context {ctx.id} appears under two senses")
                gold[ctx.id] = sk.id
                contexts.append(ctx.anonymous())
        contexts, gold = _cap(rng, contexts, gold, spec)
        rng.shuffle(contexts)
        datasets[spec.name] = Dataset(spec, [strip_sense(s) for s in chosen], contexts, gold)

    if "manual_dev" in by_name:
        spec = by_name["manual_dev"]
        dev = datasets["dev"]
        chosen_ids = set(rng.sample(sorted(s.id for s in dev.sketches), spec.n_sketches))
        chosen = [s for s in dev.sketches if s.id in chosen_ids]
        per_sketch: dict[str, list[Context]] = {sid: [] for sid in chosen_ids}
        for ctx in dev.contexts:
            sid = dev.gold[ctx.id]
            if sid in per_sketch:
                per_sketch[sid].append(ctx)
        contexts, gold = [], {}
        for sk in chosen:
            for ctx in _sample_contexts(rng, per_sketch[sk.id], spec.contexts_per_sketch, sk.id, spec.name, strict):
                gold[ctx.id] = sk.id
                contexts.append(ctx)
        contexts, gold = _cap(rng, contexts, gold, spec)
        rng.shuffle(contexts)
        datasets["manual_dev"] = Dataset(spec, chosen, contexts, gold)

    out = [datasets[s.name] for s in specs]
    for ds in out:
        ds.check()
    return out


def _cap(rng: SplitMix64, contexts: list[Context], gold: Mapping, spec: SplitSpec):
    if spec.max_contexts is None or len(contexts) <= spec.max_contexts:
        return contexts, gold
    kept = rng.sample(sorted(contexts, key=lambda c: c.id), spec.max_contexts)
    return kept, {c.id: gold[c.id] for c in kept}


def emit_dataset(ds: Dataset, directory: str | os.PathLike, answers: str | os.PathLike | None = None) -> list[Path]:
    """Write ``sketches.jsonl``, ``contexts.jsonl`` and, for published splits, ``gold.json``.

    Unpublished gold mappings are written to ``answers`` when given.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = [directory / "sketches.jsonl", directory / "contexts.jsonl"]
    write_sketches(ds.sketches, written[0])
    write_contexts(ds.contexts, written[1], include_sense=False)
    if ds.split.publish_mapping:
        written.append(directory / "gold.json")
        save_mapping(ds.gold, written[-1])
    elif answers is not None:
        Path(answers).parent.mkdir(parents=True, exist_ok=True)
        save_mapping(ds.gold, answers)
        written.append(Path(answers))
    return written


def load_dataset(directory: str | os.PathLike, spec: SplitSpec, answers: str | os.PathLike | None = None) -> Dataset:
    directory = Path(directory)
    gold_path = directory / "gold.json" if spec.publish_mapping else answers
    gold = load_mapping(gold_path) if gold_path is not None and Path(gold_path).exists() else {}
    ds = Dataset(
        split=spec,
        sketches=read_sketches(directory / "sketches.jsonl"),
        contexts=ingest_contexts(directory / "contexts.jsonl"),
        gold=gold,
    )
    ds.check()
    return ds


def pool_by_sense(contexts: Sequence[Context]) -> dict[SenseKey, list[Context]]:
    pool: dict[SenseKey, list[Context]] = {}
    for ctx in contexts:
        if ctx.sense is None:
            raise DatasetError(f"pool context {ctx.id} has no sense")
        pool.setdefault(ctx.sense, []).append(ctx)
    return pool


def sense_strings(senses: Sequence[SenseKey]) -> set[str]:
    """Strings whose presence in a published file would leak a hidden sense."""
    out = set()
    for s in senses:
        out.add(str(s))
        out.add(s.semantic_class)
    return out
