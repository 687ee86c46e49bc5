"""Frequency-ranked semantic sketches built from dependency records."""

from __future__ import annotations

import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from semsketch.corpus import ALL_FLAGS, DependencyRecord, SemSketchError, SenseKey, head_lemma, validate_role
from semsketch.kernels import count_codes
from semsketch.rng import SplitMix64


class SketchError(SemSketchError):
    pass


@dataclass(frozen=True)
class Filler:
    lemma: str
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"filler {self.lemma!r}: count must be >= 1")

    @property
    def head(self) -> str:
        return head_lemma(self.lemma)


@dataclass(frozen=True)
class RoleSection:
    role: str
    total_count: int
    fillers: tuple[Filler, ...]

    def __post_init__(self) -> None:
        validate_role(self.role)
        if not self.fillers:
            raise ValueError(f"section {self.role}: no fillers")
        if self.total_count < sum(f.count for f in self.fillers):
            raise ValueError(f"section {self.role}: total_count below displayed filler counts")
        keys = [(-f.count, f.lemma) for f in self.fillers]
        if keys != sorted(keys):
            raise ValueError(f"section {self.role}: fillers not in rank order")


@dataclass(frozen=True)
class Sketch:
    id: str
    sense: SenseKey | None
    sections: tuple[RoleSection, ...]

    def __post_init__(self) -> None:
        if not self.sections:
            raise ValueError(f"sketch {self.id}: no sections")
        roles = [s.role for s in self.sections]
        if len(set(roles)) != len(roles):
            raise ValueError(f"sketch {self.id}: duplicate roles")
        keys = [(-s.total_count, s.role) for s in self.sections]
        if keys != sorted(keys):
            raise ValueError(f"sketch {self.id}: sections not in rank order")

    @property
    def is_anonymous(self) -> bool:
        return self.sense is None

    def fillers(self) -> Iterable[Filler]:
        for section in self.sections:
            yield from section.fillers

    def to_dict(self) -> dict:
        data: dict = {"id": self.id}
        if self.sense is not None:
            data["sense"] = self.sense.to_dict()
        data["sections"] = [
            {
                "role": s.role,
                "total_count": s.total_count,
                "fillers": [{"lemma": f.lemma, "count": f.count} for f in s.fillers],
            }
            for s in self.sections
        ]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Sketch":
        sense = data.get("sense")
        return cls(
            id=data["id"],
            sense=SenseKey.from_dict(sense) if sense else None,
            sections=tuple(
                RoleSection(
                    role=s["role"],
                    total_count=int(s["total_count"]),
                    fillers=tuple(Filler(f["lemma"], int(f["count"])) for f in s["fillers"]),
                )
                for s in data["sections"]
            ),
        )


@dataclass(frozen=True)
class BuildConfig:
    dependency_threshold: int = 2000
    min_meanings: int = 2
    max_roles: int = 8
    max_fillers_per_role: int = 10
    excluded_flags: frozenset[str] = field(default_factory=lambda: ALL_FLAGS)

    def __post_init__(self) -> None:
        if self.dependency_threshold < 0:
            raise ValueError("dependency_threshold must be >= 0")
        for name in ("min_meanings", "max_roles", "max_fillers_per_role"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        unknown = set(self.excluded_flags) - ALL_FLAGS
        if unknown:
            raise ValueError(f"unknown flags: {sorted(unknown)}")


def sketch_id(sense: SenseKey) -> str:
    return f"{sense.lexeme_group}:{sense.semantic_class}"


def filter_records(records: Sequence[DependencyRecord], config: BuildConfig) -> list[DependencyRecord]:
    excluded = config.excluded_flags
    if not excluded:
        return list(records)
    return [r for r in records if not (r.flags & excluded)]


def select_senses(records: Sequence[DependencyRecord], config: BuildConfig) -> set[SenseKey]:
    """Senses with enough dependencies whose lexeme group is polysemous enough.

    Both repeated and distinct dependencies count towards the threshold. The
    number of meanings per lexeme group is taken before thresholding.
    """
    per_sense: dict[SenseKey, int] = defaultdict(int)
    for r in records:
        per_sense[r.sense] += 1
    classes: dict[str, set[str]] = defaultdict(set)
    for sense in per_sense:
        classes[sense.lexeme_group].add(sense.semantic_class)
    return {
        sense
        for sense, n in per_sense.items()
        if n >= config.dependency_threshold and len(classes[sense.lexeme_group]) >= config.min_meanings
    }


def _assemble(sense: SenseKey, role_fillers: dict[str, dict[str, int]], config: BuildConfig) -> Sketch:
    sections = []
    for role, fillers in role_fillers.items():
        ranked = sorted(fillers.items(), key=lambda kv: (-kv[1], kv[0]))
        sections.append(
            RoleSection(
                role=role,
                total_count=sum(fillers.values()),
                fillers=tuple(Filler(lemma, n) for lemma, n in ranked[: config.max_fillers_per_role]),
            )
        )
    sections.sort(key=lambda s: (-s.total_count, s.role))
    return Sketch(id=sketch_id(sense), sense=sense, sections=tuple(sections[: config.max_roles]))


def build_sketch(sense: SenseKey, records: Sequence[DependencyRecord], config: BuildConfig) -> Sketch:
    if not records:
        raise SketchError(f"no records for sense {sense}")
    role_fillers: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for r in records:
        if r.sense != sense:
            raise SketchError(f"record from {r.sentence_id} belongs to {r.sense}, not {sense}")
        role_fillers[r.role][r.filler_lemma] += 1
    return _assemble(sense, role_fillers, config)


class _Interner(dict):
    def code(self, key) -> int:
        code = self.get(key)
        if code is None:
            code = self[key] = len(self)
        return code

    def keys_by_code(self) -> list:
        return list(self.keys())


def tally(records: Sequence[DependencyRecord]) -> dict[SenseKey, dict[str, dict[str, int]]]:
    """Count (sense, role, filler lemma) triples with the counting kernel."""
    senses, roles, lemmas = _Interner(), _Interner(), _Interner()
    n = len(records)
    s_codes = np.fromiter((senses.code(r.sense) for r in records), dtype=np.int64, count=n)
    r_codes = np.fromiter((roles.code(r.role) for r in records), dtype=np.int64, count=n)
    l_codes = np.fromiter((lemmas.code(r.filler_lemma) for r in records), dtype=np.int64, count=n)
    n_roles, n_lemmas = max(len(roles), 1), max(len(lemmas), 1)
    if len(senses) * n_roles * n_lemmas >= 2**62:
        raise SketchError("vocabulary too large for packed triple codes")
    codes = (s_codes * n_roles + r_codes) * n_lemmas + l_codes
    uniq, counts = count_codes(codes)
    sense_keys, role_keys, lemma_keys = senses.keys_by_code(), roles.keys_by_code(), lemmas.keys_by_code()
    out: dict[SenseKey, dict[str, dict[str, int]]] = {}
    for code, count in zip(uniq.tolist(), counts.tolist()):
        rest, lemma = divmod(code, n_lemmas)
        sense, role = divmod(rest, n_roles)
        out.setdefault(sense_keys[sense], {}).setdefault(role_keys[role], {})[lemma_keys[lemma]] = count
    return out


def build_all(records: Sequence[DependencyRecord], config: BuildConfig | None = None) -> list[Sketch]:
    """Filter, select senses and build one sketch per selected sense, ordered by id."""
    config = config or BuildConfig()
    kept = filter_records(records, config)
    selected = select_senses(kept, config)
    counts = tally([r for r in kept if r.sense in selected])
    sketches = [_assemble(sense, counts[sense], config) for sense in selected]
    sketches.sort(key=lambda s: s.id)
    return sketches


def anonymize(sketches: Sequence[Sketch], seed: int) -> tuple[list[Sketch], dict[str, SenseKey]]:
    """Hide senses behind opaque ids assigned in a seeded random order.

    Returns the anonymized sketches (ordered by new id) and the secret
    mapping from new id back to the sense.
    """
    for sk in sketches:
        if sk.sense is None:
            raise SketchError(f"sketch {sk.id} is already anonymous")
    ordered = sorted(sketches, key=lambda s: s.id)
    order = list(range(len(ordered)))
    SplitMix64(seed).shuffle(order)
    width = max(4, len(str(len(ordered))))
    out, secret = [], {}
    for position, index in enumerate(order):
        new_id = f"sketch-{position:0{width}d}"
        assert new_id not in secret
        src = ordered[index]
        secret[new_id] = src.sense
        out.append(Sketch(id=new_id, sense=None, sections=src.sections))
    return out, secret


def strip_sense(sketch: Sketch) -> Sketch:
    return Sketch(id=sketch.id, sense=None, sections=sketch.sections)


def dump_sketch(sketch: Sketch) -> str:
    return json.dumps(sketch.to_dict(), ensure_ascii=False)


def write_sketches(sketches: Iterable[Sketch], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sk in sketches:
            fh.write(dump_sketch(sk) + "\n")


def read_sketches(path: str | os.PathLike) -> list[Sketch]:
    """Read a JSON-lines bundle or a single-sketch JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        stripped = text.strip()
        if not stripped:
            return []
        try:
            docs = [json.loads(stripped)]
        except json.JSONDecodeError:
            docs = [json.loads(line) for line in text.splitlines() if line.strip()]
        sketches = [Sketch.from_dict(d) for d in docs]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SketchError(f"{path}: invalid sketch data: {exc}") from None
    ids = [s.id for s in sketches]
    if len(set(ids)) != len(ids):
        raise SketchError(f"{path}: duplicate sketch ids")
    return sketches


def write_secret(secret: dict[str, SenseKey], path: str | os.PathLike) -> None:
    data = {k: secret[k].to_dict() for k in sorted(secret)}
    Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def read_secret(path: str | os.PathLike) -> dict[str, SenseKey]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return {k: SenseKey.from_dict(v) for k, v in data.items()}
    except (json.JSONDecodeError, KeyError, TypeError, AttributeError, ValueError) as exc:
        raise SketchError(f"{path}: invalid secret mapping: {exc}") from None
