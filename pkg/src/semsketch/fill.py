"""Cloze fill models and embedders.

Everything the matchers need from a language model goes through two calls:
``fill(ClozeQuery) -> list[Candidate]`` and ``embed(text) -> list[float]``.
The built-in :class:`CooccurrenceModel` implements ``fill`` from corpus
counts; anything else attaches as a subprocess speaking newline-delimited
JSON (see :class:`PluginClient`).
"""

from __future__ import annotations

import json
import math
import shlex
import string
import subprocess
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping as TMapping, Protocol, Sequence

import numpy as np

from semsketch.corpus import MASK, DependencyRecord, SemSketchError, head_lemma
from semsketch.kernels import count_codes

FILL = "fill"
EMBED = "embed"

_PUNCT = string.punctuation + "«»„“”…—–"


class FillError(SemSketchError):
    pass


class CapabilityError(FillError):
    pass


class PluginError(FillError):
    pass


@dataclass(frozen=True)
class ClozeQuery:
    template: str
    top_n: int = 1000

    def __post_init__(self) -> None:
        n = self.template.count(MASK)
        if n != 1:
            raise FillError(f"template must contain exactly one {MASK}, found {n}: {self.template!r}")
        if self.top_n < 1:
            raise FillError("top_n must be >= 1")

    def content_words(self) -> list[str]:
        """Non-mask tokens, edge punctuation stripped, first occurrence order."""
        words = []
        for token in self.template.replace(MASK, " ").split():
            token = token.strip(_PUNCT)
            if token and token not in words:
                words.append(token)
        return words


@dataclass(frozen=True)
class Candidate:
    lemma: str
    score: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.score <= 1.0) or math.isnan(self.score):
            raise FillError(f"candidate {self.lemma!r}: score {self.score} outside [0, 1]")


def rank(candidates: Iterable[Candidate], top_n: int | None = None) -> list[Candidate]:
    ranked = sorted(candidates, key=lambda c: (-c.score, c.lemma))
    return ranked if top_n is None else ranked[:top_n]


class FillModel(Protocol):
    capabilities: frozenset[str]

    def fill(self, query: ClozeQuery) -> list[Candidate]: ...

    def embed(self, text: str) -> list[float]: ...


@dataclass
class CooccurrenceModel:
    """Predicate/filler co-occurrence counts keyed by (predicate lemma, filler head lemma).

    A mask next to filler words is filled with predicates scored by
    ``count(p, f) / total(p)``, summed over the distinct content words ``f``.
    A mask next to a predicate word is filled with fillers scored by
    ``count(w, f) / total(f)``.
    """

    pair_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    capabilities: frozenset[str] = frozenset({FILL})

    def __post_init__(self) -> None:
        self.predicate_totals: dict[str, int] = Counter()
        self.filler_totals: dict[str, int] = Counter()
        self._by_filler: dict[str, dict[str, int]] = {}
        self._by_predicate: dict[str, dict[str, int]] = {}
        for (p, f), n in sorted(self.pair_counts.items()):
            if n < 1:
                raise ValueError(f"pair ({p}, {f}) has count {n}")
            self.predicate_totals[p] += n
            self.filler_totals[f] += n
            self._by_filler.setdefault(f, {})[p] = n
            self._by_predicate.setdefault(p, {})[f] = n
        self.predicate_totals = dict(self.predicate_totals)
        self.filler_totals = dict(self.filler_totals)

    def scores(self, words: Sequence[str]) -> dict[str, float]:
        out: dict[str, float] = {}
        for w in words:
            for p, n in self._by_filler.get(w, {}).items():
                out[p] = out.get(p, 0.0) + n / self.predicate_totals[p]
            for f, n in self._by_predicate.get(w, {}).items():
                out[f] = out.get(f, 0.0) + n / self.filler_totals[f]
        return out

    def fill(self, query: ClozeQuery) -> list[Candidate]:
        scored = self.scores(query.content_words())
        return rank((Candidate(lemma, min(score, 1.0)) for lemma, score in scored.items()), query.top_n)

    def embed(self, text: str) -> list[float]:
        raise CapabilityError("the co-occurrence model has no embed capability")


def train_cooccurrence(records: Sequence[DependencyRecord], head_position: int = -1) -> CooccurrenceModel:
    preds: dict[str, int] = {}
    fillers: dict[str, int] = {}
    n = len(records)
    p_codes = np.fromiter((preds.setdefault(r.sense.lexeme_group, len(preds)) for r in records), np.int64, n)
    f_codes = np.fromiter(
        (fillers.setdefault(head_lemma(r.filler_lemma, head_position), len(fillers)) for r in records), np.int64, n
    )
    width = max(len(fillers), 1)
    uniq, counts = count_codes(p_codes * width + f_codes)
    p_names, f_names = list(preds), list(fillers)
    pairs = {}
    for code, count in zip(uniq.tolist(), counts.tolist()):
        p, f = divmod(code, width)
        pairs[(p_names[p], f_names[f])] = count
    return CooccurrenceModel(pairs)


class TableFillModel:
    """Fill answers looked up from a fixed ``template -> candidates`` table."""

    capabilities = frozenset({FILL})

    def __init__(self, table: TMapping[str, Sequence[Candidate]]):
        self.table = {t: rank(c) for t, c in table.items()}

    @classmethod
    def from_json(cls, data: TMapping) -> "TableFillModel":
        return cls({t: [Candidate(c["lemma"], float(c["score"])) for c in cands] for t, cands in data.items()})

    def fill(self, query: ClozeQuery) -> list[Candidate]:
        return self.table.get(query.template, [])[: query.top_n]

    def embed(self, text: str) -> list[float]:
        raise CapabilityError("table model has no embed capability")


class CharCountEmbedder:
    """Bag of character counts hashed into ``dim`` buckets by code point."""

    capabilities = frozenset({EMBED})

    def __init__(self, dim: int = 512):
        self.dim = dim

    def embed(self, text: str) -> list[float]:
        vec = [0.0] * self.dim
        for ch in text:
            vec[ord(ch) % self.dim] += 1.0
        return vec


class ConstantEmbedder:
    capabilities = frozenset({EMBED})

    def __init__(self, dim: int = 8):
        self.dim = dim

    def embed(self, text: str) -> list[float]:
        return [1.0] * self.dim


def fill(model: FillModel, query: ClozeQuery) -> list[Candidate]:
    if FILL not in model.capabilities:
        raise CapabilityError("model has no fill capability")
    return model.fill(query)


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    if a.shape != b.shape:
        raise FillError(f"vector dimensions differ: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class PluginClient:
    """A fill/embed model running in a subprocess.

    One JSON object per line each way; requests are answered strictly in
    order. Access is serialized, so one client may be shared across threads.
    """

    def __init__(self, command: str | Sequence[str], env: TMapping[str, str] | None = None):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
                env=env,
            )
        except OSError as exc:
            raise PluginError(f"cannot start plugin {argv!r}: {exc}") from None
        self._lock = threading.Lock()
        self._cache: dict[str, list[float]] = {}
        reply = self._request({"op": "hello"})
        caps = reply.get("capabilities")
        if not isinstance(caps, list):
            self.close()
            raise PluginError("plugin handshake returned no capabilities")
        self.capabilities = frozenset(caps)

    def _request(self, message: dict) -> dict:
        with self._lock:
            if self._proc.poll() is not None:
                raise PluginError(f"plugin exited with status {self._proc.returncode}")
            try:
                self._proc.stdin.write(json.dumps(message, ensure_ascii=False) + "\n")
                self._proc.stdin.flush()
                line = self._proc.stdout.readline()
            except (BrokenPipeError, OSError) as exc:
                raise PluginError(f"plugin transport failed: {exc}") from None
        if not line:
            raise PluginError("plugin closed its output")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise PluginError(f"malformed plugin reply: {exc}") from None
        if not isinstance(reply, dict):
            raise PluginError("plugin reply is not an object")
        if "error" in reply:
            raise PluginError(f"plugin error: {reply['error']}")
        return reply

    def fill(self, query: ClozeQuery) -> list[Candidate]:
        if FILL not in self.capabilities:
            raise CapabilityError("plugin has no fill capability")
        reply = self._request({"op": "fill", "template": query.template, "top_n": query.top_n})
        try:
            cands = [Candidate(str(c["lemma"]), float(c["score"])) for c in reply["candidates"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PluginError(f"malformed fill reply: {exc}") from None
        return rank(cands, query.top_n)

    def embed(self, text: str) -> list[float]:
        if EMBED not in self.capabilities:
            raise CapabilityError("plugin has no embed capability")
        if text not in self._cache:
            reply = self._request({"op": "embed", "text": text})
            try:
                self._cache[text] = [float(x) for x in reply["vector"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise PluginError(f"malformed embed reply: {exc}") from None
        return self._cache[text]

    def close(self) -> None:
        proc = self._proc
        if proc.poll() is None:
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        if proc.stdout:
            proc.stdout.close()

    def __enter__(self) -> "PluginClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class Combined:
    """Join a fill model and an embedder into one object."""

    def __init__(self, filler=None, embedder=None):
        self.filler = filler
        self.embedder = embedder
        caps = set()
        if filler is not None and FILL in filler.capabilities:
            caps.add(FILL)
        if embedder is not None and EMBED in embedder.capabilities:
            caps.add(EMBED)
        self.capabilities = frozenset(caps)

    def fill(self, query: ClozeQuery) -> list[Candidate]:
        if self.filler is None:
            raise CapabilityError("no fill model attached")
        return self.filler.fill(query)

    def embed(self, text: str) -> list[float]:
        if self.embedder is None:
            raise CapabilityError("no embedding model attached")
        return self.embedder.embed(text)
