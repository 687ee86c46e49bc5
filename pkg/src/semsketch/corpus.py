"""Domain types and readers/writers for role-labeled corpora, contexts and mappings."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping as TMapping

PRONOUN = "PRONOUN"
PERSONAL_NOUN = "PERSONAL_NOUN"
ELLIPTED = "ELLIPTED"
MOVED = "MOVED"
ALL_FLAGS = frozenset({PRONOUN, PERSONAL_NOUN, ELLIPTED, MOVED})

MASK = "[MASK]"

CORPUS_COLUMNS = (
    "sentence_id",
    "lexeme_group",
    "semantic_class",
    "role",
    "filler_lemma",
    "filler_surface",
    "filler_pos",
    "flags",
)

# context id -> sketch id
Mapping = dict[str, str]


class SemSketchError(Exception):
    """Base class for data and validation errors."""


class CorpusError(SemSketchError):
    def __init__(self, message: str, path: str | os.PathLike | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


class ContextError(SemSketchError):
    pass


def validate_role(name: str) -> str:
    if not name or any(ch.isspace() for ch in name):
        raise ValueError(f"invalid role label {name!r}")
    return name


def head_lemma(phrase: str, position: int = -1) -> str:
    """Lemma of the head token of a space-joined filler; the last token by default."""
    tokens = phrase.split()
    if not tokens:
        return phrase
    try:
        return tokens[position]
    except IndexError:
        return tokens[-1]


@dataclass(frozen=True, order=True)
class SenseKey:
    lexeme_group: str
    semantic_class: str

    def __post_init__(self) -> None:
        if not self.lexeme_group or not self.semantic_class:
            raise ValueError("SenseKey fields must be non-empty")

    def __str__(self) -> str:
        return f"{self.lexeme_group}:{self.semantic_class}"

    def to_dict(self) -> dict[str, str]:
        return {"lexeme_group": self.lexeme_group, "semantic_class": self.semantic_class}

    @classmethod
    def from_dict(cls, data: TMapping[str, str]) -> "SenseKey":
        return cls(data["lexeme_group"], data["semantic_class"])


@dataclass(frozen=True)
class DependencyRecord:
    sentence_id: str
    sense: SenseKey
    role: str
    filler_lemma: str
    filler_surface: str
    filler_pos: str
    flags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        validate_role(self.role)
        if not self.filler_lemma:
            raise ValueError("filler_lemma must be non-empty")
        unknown = set(self.flags) - ALL_FLAGS
        if unknown:
            raise ValueError(f"unknown flags: {sorted(unknown)}")

    @property
    def filler_head(self) -> str:
        return head_lemma(self.filler_lemma)


@dataclass(frozen=True)
class IngestConfig:
    comment_prefix: str = "#"
    encoding: str = "utf-8"


def parse_record(line: str) -> DependencyRecord:
    fields = line.rstrip("\r\n").split("\t")
    if len(fields) != len(CORPUS_COLUMNS):
        raise ValueError(f"expected {len(CORPUS_COLUMNS)} tab-separated fields, got {len(fields)}")
    sentence_id, group, sem_class, role, lemma, surface, pos, flags = fields
    flag_set = frozenset(f for f in flags.split(",") if f)
    return DependencyRecord(
        sentence_id=sentence_id,
        sense=SenseKey(group, sem_class),
        role=role,
        filler_lemma=lemma,
        filler_surface=surface,
        filler_pos=pos,
        flags=flag_set,
    )


def format_record(record: DependencyRecord) -> str:
    return "\t".join(
        [
            record.sentence_id,
            record.sense.lexeme_group,
            record.sense.semantic_class,
            record.role,
            record.filler_lemma,
            record.filler_surface,
            record.filler_pos,
            ",".join(sorted(record.flags)),
        ]
    )


def ingest_corpus(path: str | os.PathLike, config: IngestConfig | None = None) -> list[DependencyRecord]:
    """Read a tab-separated dependency-record file.

    Every non-comment, non-blank line must parse; the first bad line raises
    :class:`CorpusError` carrying its line number.
    """
    config = config or IngestConfig()
    records = []
    try:
        with open(path, encoding=config.encoding, newline="") as fh:
            for lineno, line in enumerate(fh, start=1):
                if lineno == 1:
                    line = line.lstrip("\ufeff")
                if line.startswith(config.comment_prefix) or not line.strip("\r\n"):
                    continue
                try:
                    records.append(parse_record(line))
                except ValueError as exc:
                    raise CorpusError(str(exc), path, lineno) from None
    except UnicodeDecodeError as exc:
        raise CorpusError(f"not valid {config.encoding}: {exc}", path) from None
    return records


def write_corpus(records: Iterable[DependencyRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + "\t".join(CORPUS_COLUMNS) + "\n")
        for record in records:
            fh.write(format_record(record) + "\n")


@dataclass(frozen=True)
class Context:
    """A sentence with one target predicate occurrence at ``text[start:end]``.

    ``sense`` is only set on context-pool entries used to assemble datasets;
    it is never written to published task files.
    """

    id: str
    target: str
    start: int
    end: int
    text: str
    target_lemma: str = ""
    dependents: tuple[tuple[str, str], ...] | None = None
    sense: SenseKey | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end <= len(self.text)):
            raise ContextError(
                f"context {self.id}: invalid span [{self.start}, {self.end}) for text of length {len(self.text)}"
            )
        if self.text[self.start:self.end] != self.target:
            raise ContextError(
                f"context {self.id}: span [{self.start}, {self.end}) is "
                f"{self.text[self.start:self.end]!r}, expected {self.target!r}"
            )

    def tagged(self, open_tag: str = "<t>", close_tag: str = "</t>") -> str:
        return self.text[: self.start] + open_tag + self.target + close_tag + self.text[self.end :]

    def masked(self, mask: str = MASK) -> str:
        return self.text[: self.start] + mask + self.text[self.end :]

    def to_dict(self, include_sense: bool = True) -> dict:
        data: dict = {
            "id": self.id,
            "target": self.target,
            "start": self.start,
            "end": self.end,
            "context": self.text,
            "target_lemma": self.target_lemma,
        }
        if self.dependents is not None:
            data["dependents"] = [list(dep) for dep in self.dependents]
        if include_sense and self.sense is not None:
            data["sense"] = self.sense.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: TMapping) -> "Context":
        deps = data.get("dependents")
        if deps is not None:
            deps = tuple((str(lemma), str(rel)) for lemma, rel in deps)
        sense = data.get("sense")
        start, end = data["start"], data["end"]
        if not isinstance(start, int) or not isinstance(end, int) or isinstance(start, bool) or isinstance(end, bool):
            raise ContextError(f"context {data.get('id')}: offsets must be integers")
        return cls(
            id=str(data["id"]),
            target=data["target"],
            start=start,
            end=end,
            text=data["context"],
            target_lemma=data.get("target_lemma", ""),
            dependents=deps,
            sense=SenseKey.from_dict(sense) if sense else None,
        )

    def anonymous(self) -> "Context":
        if self.sense is None:
            return self
        return Context(self.id, self.target, self.start, self.end, self.text, self.target_lemma, self.dependents)


def ingest_contexts(path: str | os.PathLike) -> list[Context]:
    contexts = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                ctx = Context.from_dict(json.loads(line))
            except (ContextError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                detail = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
                raise CorpusError(detail, path, lineno) from None
            if ctx.id in seen:
                raise CorpusError(f"duplicate context id {ctx.id}", path, lineno)
            seen.add(ctx.id)
            contexts.append(ctx)
    return contexts


def write_contexts(contexts: Iterable[Context], path: str | os.PathLike, include_sense: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ctx in contexts:
            fh.write(json.dumps(ctx.to_dict(include_sense), ensure_ascii=False) + "\n")


def _unique_pairs(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise SemSketchError(f"duplicate key {key!r} in mapping")
        out[key] = value
    return out


def load_mapping(path: str | os.PathLike) -> Mapping:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"), object_pairs_hook=_unique_pairs)
    except json.JSONDecodeError as exc:
        raise SemSketchError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict) or not all(isinstance(v, str) for v in data.values()):
        raise SemSketchError(f"{path}: mapping must be a JSON object of string values")
    return data


def dump_mapping(mapping: TMapping[str, str]) -> str:
    return json.dumps(dict(sorted(mapping.items())), ensure_ascii=False, indent=1) + "\n"


def save_mapping(mapping: TMapping[str, str], path: str | os.PathLike) -> None:
    Path(path).write_text(dump_mapping(mapping), encoding="utf-8")
