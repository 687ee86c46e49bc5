"""Sketch-to-context matching strategies.

Four strategies share one output shape (a ranked ``ScoredSketch`` list per
context, or a direct mapping for predicate restoration):

``baseline-intersection``
    For every direct dependent of the target, mask that dependent in a
    lemma-level clause and keep the top-N fills. The fills are intersected
    across dependents and a sketch scores the size of that intersection with
    its filler head lemmas.
``template-score``
    Mean fill score of the target lemma over one ``[MASK] cell`` template per
    sketch filler.
``flatten-similarity``
    Cosine similarity between the embedded tag-marked sentence and the
    embedded flattened sketch.
``predicate-restoration``
    Restore each sketch's hidden predicate as the most frequent top
    hypothesis over its cell templates, then give each context the first
    sketch whose restored predicate equals the target lemma.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from semsketch.corpus import MASK, Context, Mapping, SemSketchError, head_lemma
from semsketch.fill import EMBED, FILL, CapabilityError, ClozeQuery, FillError, PluginError, cosine
from semsketch.kernels import intersection_counts, pack_rows
from semsketch.sketches import Sketch

log = logging.getLogger(__name__)

BASELINE = "baseline-intersection"
TEMPLATE_SCORE = "template-score"
FLATTEN_SIMILARITY = "flatten-similarity"
PREDICATE_RESTORATION = "predicate-restoration"
STRATEGIES = (BASELINE, TEMPLATE_SCORE, FLATTEN_SIMILARITY, PREDICATE_RESTORATION)

T = TypeVar("T")
R = TypeVar("R")


class MatchError(SemSketchError):
    pass


@dataclass(frozen=True)
class ScoredSketch:
    sketch_id: str
    score: float


@dataclass(frozen=True)
class MatchConfig:
    strategy: str = BASELINE
    top_n: int = 1000
    template_pattern: str = "{mask} {cell}"
    restoration_top_k: int = 1
    head_position: int = -1

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.top_n < 1 or self.restoration_top_k < 1:
            raise ValueError("top_n and restoration_top_k must be >= 1")
        if self.template_pattern.format(mask=MASK, cell="x").count(MASK) != 1:
            raise ValueError("template_pattern must place the mask exactly once")

    def cell_template(self, cell: str) -> str:
        return self.template_pattern.format(mask=MASK, cell=cell)


@dataclass
class MatchOutcome:
    mapping: Mapping
    flagged: list[str] = field(default_factory=list)


def ranked(scores: Iterable[ScoredSketch]) -> list[ScoredSketch]:
    return sorted(scores, key=lambda s: (-s.score, s.sketch_id))


def _by_id(sketches: Sequence[Sketch]) -> list[Sketch]:
    return sorted(sketches, key=lambda s: s.id)


def _pmap(fn: Callable[[T], R], items: Sequence[T], jobs: int) -> list[R]:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _require(model, capability: str, what: str):
    if model is None or capability not in model.capabilities:
        raise CapabilityError(f"{what} needs a model with the {capability!r} capability")
    return model


class _FillCache:
    """Memoized ``template -> {lemma: score}`` lookups for one model."""

    def __init__(self, model, top_n: int):
        self.model = model
        self.top_n = top_n
        self._cache: dict[str, dict[str, float]] = {}

    def __call__(self, template: str) -> dict[str, float]:
        hit = self._cache.get(template)
        if hit is None:
            cands = self.model.fill(ClozeQuery(template, self.top_n))
            hit = self._cache[template] = {c.lemma: c.score for c in cands}
        return hit


# --- baseline intersection ---------------------------------------------------


def sketch_tokens(sketch: Sketch, head_position: int = -1) -> set[str]:
    return {head_lemma(f.lemma, head_position) for f in sketch.fillers()}


def dependent_templates(context: Context) -> list[str]:
    """One lemma-level clause per dependent, with that dependent masked."""
    if context.dependents is None:
        raise MatchError(f"context {context.id} has no dependency parse")
    core = context.target_lemma or context.target
    lemmas = [lemma for lemma, _ in context.dependents]
    return [" ".join([core] + [MASK if j == i else w for j, w in enumerate(lemmas)]) for i in range(len(lemmas))]


def baseline_candidates(context: Context, fill_model, config: MatchConfig, cache: _FillCache | None = None) -> set[str]:
    """Intersection of top-N fills over all dependents; empty when there are none."""
    cache = cache or _FillCache(fill_model, config.top_n)
    result: set[str] | None = None
    for template in dependent_templates(context):
        reps = {head_lemma(lemma, config.head_position) for lemma in cache(template)}
        result = reps if result is None else result & reps
        if not result:
            break
    return result or set()


def baseline_score_matrix(
    contexts: Sequence[Context], sketches: Sequence[Sketch], fill_model, config: MatchConfig, jobs: int = 1
) -> np.ndarray:
    """Intersection sizes, one row per context, columns in sketch-id order."""
    _require(fill_model, FILL, BASELINE)
    ordered = _by_id(sketches)
    cache = _FillCache(fill_model, config.top_n)
    vocab: dict[str, int] = {}
    sketch_rows = [[vocab.setdefault(t, len(vocab)) for t in sketch_tokens(s, config.head_position)] for s in ordered]
    cand_sets = _pmap(lambda c: baseline_candidates(c, fill_model, config, cache), list(contexts), jobs)
    context_rows = [[vocab[t] for t in cands if t in vocab] for cands in cand_sets]
    a_ptr, a_items = pack_rows(context_rows)
    b_ptr, b_items = pack_rows(sketch_rows)
    return intersection_counts(a_ptr, a_items, b_ptr, b_items)


def baseline_match(context: Context, sketches: Sequence[Sketch], fill_model, config: MatchConfig) -> list[ScoredSketch]:
    row = baseline_score_matrix([context], sketches, fill_model, config)[0]
    return ranked(ScoredSketch(s.id, float(v)) for s, v in zip(_by_id(sketches), row.tolist()))


# --- template score ----------------------------------------------------------


def template_score_match(
    context: Context, sketches: Sequence[Sketch], fill_model, config: MatchConfig, cache: _FillCache | None = None
) -> list[ScoredSketch]:
    """Average fill score of the target lemma over the sketch's cell templates."""
    _require(fill_model, FILL, TEMPLATE_SCORE)
    if not context.target_lemma:
        raise MatchError(f"context {context.id} has no target lemma")
    cache = cache or _FillCache(fill_model, config.top_n)
    out = []
    for sketch in sketches:
        probs = [cache(config.cell_template(f.lemma)).get(context.target_lemma, 0.0) for f in sketch.fillers()]
        out.append(ScoredSketch(sketch.id, sum(probs) / len(probs)))
    return ranked(out)


# --- flatten similarity ------------------------------------------------------


def flatten_sketch(sketch: Sketch) -> str:
    return "; ".join(f"{s.role}: " + " ".join(f.lemma for f in s.fillers) for s in sketch.sections)


def similarity_match(
    context: Context, sketches: Sequence[Sketch], embedder, config: MatchConfig | None = None
) -> list[ScoredSketch]:
    _require(embedder, EMBED, FLATTEN_SIMILARITY)
    query = embedder.embed(context.tagged())
    return ranked(ScoredSketch(s.id, cosine(query, embedder.embed(flatten_sketch(s)))) for s in sketches)


# --- predicate restoration ---------------------------------------------------


def restore_predicate(sketch: Sketch, fill_model, config: MatchConfig, cache: _FillCache | None = None) -> str:
    """Most frequent top hypothesis over the sketch's cell templates (ties: smallest lemma)."""
    _require(fill_model, FILL, PREDICATE_RESTORATION)
    cache = cache or _FillCache(fill_model, config.restoration_top_k)
    votes: Counter[str] = Counter()
    for f in sketch.fillers():
        hyps = cache(config.cell_template(f.lemma))
        votes.update(sorted(hyps, key=lambda lemma: (-hyps[lemma], lemma))[: config.restoration_top_k])
    if not votes:
        raise FillError(f"no hypotheses for any cell of sketch {sketch.id}")
    return min(votes.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def restore_all(sketches: Sequence[Sketch], fill_model, config: MatchConfig) -> dict[str, str | None]:
    cache = _FillCache(fill_model, config.restoration_top_k)
    restored: dict[str, str | None] = {}
    for sketch in _by_id(sketches):
        try:
            restored[sketch.id] = restore_predicate(sketch, fill_model, config, cache)
        except (CapabilityError, PluginError):
            raise
        except FillError as exc:
            log.warning("%s", exc)
            restored[sketch.id] = None
    return restored


def restoration_scores(context: Context, restored: dict[str, str | None]) -> list[ScoredSketch]:
    """1.0 for sketches whose restored predicate equals the target lemma, else 0.0."""
    return ranked(ScoredSketch(sid, 1.0 if pred == context.target_lemma else 0.0) for sid, pred in restored.items())


def _restoration_pick(context: Context, restored: dict[str, str | None], embedder) -> tuple[str, bool]:
    ids = sorted(restored)
    for sid in ids:
        if restored[sid] == context.target_lemma:
            return sid, False
    if embedder is not None and EMBED in embedder.capabilities:
        target_vec = embedder.embed(context.target_lemma)
        scored = [ScoredSketch(sid, cosine(target_vec, embedder.embed(restored[sid]))) for sid in ids if restored[sid]]
        if scored:
            return ranked(scored)[0].sketch_id, True
    return ids[0], True


def restoration_match(
    contexts: Sequence[Context], sketches: Sequence[Sketch], fill_model, config: MatchConfig, embedder=None
) -> Mapping:
    return _restoration_outcome(contexts, sketches, fill_model, config, embedder).mapping


def _restoration_outcome(contexts, sketches, fill_model, config, embedder) -> MatchOutcome:
    if not contexts:
        return MatchOutcome({})
    restored = restore_all(sketches, fill_model, config)
    outcome = MatchOutcome({})
    for ctx in contexts:
        sid, fallback = _restoration_pick(ctx, restored, embedder)
        outcome.mapping[ctx.id] = sid
        if fallback:
            outcome.flagged.append(ctx.id)
    return outcome


# --- driver ------------------------------------------------------------------


def run_matching(
    contexts: Sequence[Context],
    sketches: Sequence[Sketch],
    config: MatchConfig,
    fill_model=None,
    embedder=None,
    jobs: int = 1,
) -> MatchOutcome:
    """Assign each context its best sketch and list contexts decided by fallback only.

    Flagged contexts are those where every sketch scored zero (baseline,
    template score) or no restored predicate matched (restoration).
    """
    contexts = list(contexts)
    if not contexts:
        return MatchOutcome({})
    if not sketches:
        raise MatchError("no sketches to match against")
    ordered = _by_id(sketches)

    if config.strategy == PREDICATE_RESTORATION:
        return _restoration_outcome(contexts, ordered, fill_model, config, embedder)

    if config.strategy == BASELINE:
        matrix = baseline_score_matrix(contexts, ordered, fill_model, config, jobs)
        outcome = MatchOutcome({})
        for ctx, row in zip(contexts, matrix):
            best = int(np.argmax(row))
            outcome.mapping[ctx.id] = ordered[best].id
            if row[best] == 0:
                outcome.flagged.append(ctx.id)
        return outcome

    if config.strategy == TEMPLATE_SCORE:
        cache = _FillCache(_require(fill_model, FILL, TEMPLATE_SCORE), config.top_n)
        rank_one = lambda c: template_score_match(c, ordered, fill_model, config, cache)  # noqa: E731
    else:
        _require(embedder, EMBED, FLATTEN_SIMILARITY)
        rank_one = lambda c: similarity_match(c, ordered, embedder, config)  # noqa: E731

    outcome = MatchOutcome({})
    for ctx, scores in zip(contexts, _pmap(rank_one, contexts, jobs)):
        outcome.mapping[ctx.id] = scores[0].sketch_id
        if config.strategy == TEMPLATE_SCORE and scores[0].score == 0:
            outcome.flagged.append(ctx.id)
    return outcome


def match_all(
    contexts: Sequence[Context],
    sketches: Sequence[Sketch],
    config: MatchConfig,
    fill_model=None,
    embedder=None,
    jobs: int = 1,
) -> Mapping:
    return run_matching(contexts, sketches, config, fill_model, embedder, jobs).mapping
