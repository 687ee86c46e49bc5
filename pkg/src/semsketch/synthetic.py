"""Synthetic role-labeled corpora and context pools for tests, demos and benchmarks."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from itertools import accumulate

from semsketch.corpus import ALL_FLAGS, Context, DependencyRecord, SenseKey
from semsketch.rng import SplitMix64

ROLES = ("Agent", "Object", "Locative", "Time", "Instrument", "Purpose_Goal")


def _zipf_weights(n: int) -> list[int]:
    return [max(1, 1000 // (k + 1)) for k in range(n)]


class _Weighted:
    def __init__(self, items, weights):
        self.items = list(items)
        self.cum = list(accumulate(weights))

    def draw(self, rng: SplitMix64):
        return self.items[bisect.bisect_right(self.cum, rng.below(self.cum[-1]))]


def random_corpus(
    seed: int,
    n_records: int,
    n_groups: int = 4,
    max_classes: int = 3,
    n_roles: int = 4,
    vocab_size: int = 12,
    flag_rate: float = 0.1,
) -> list[DependencyRecord]:
    """Unstructured random records: overlapping vocabularies, random flags, phrase fillers."""
    rng = SplitMix64(seed)
    senses = []
    for g in range(n_groups):
        for c in range(1 + rng.below(max_classes)):
            senses.append(SenseKey(f"глагол{g}", f"CLASS_{c}"))
    flags = sorted(ALL_FLAGS)
    threshold = int(flag_rate * 1000)
    records = []
    for i in range(n_records):
        sense = senses[rng.below(len(senses))]
        role = ROLES[rng.below(min(n_roles, len(ROLES)))]
        k = rng.below(vocab_size)
        lemma = f"слово{k}" if k % 5 else f"на слово{k}"
        rec_flags = frozenset({flags[rng.below(len(flags))]}) if rng.below(1000) < threshold else frozenset()
        records.append(DependencyRecord(f"s{i}", sense, role, lemma, lemma, "NOUN", rec_flags))
    return records


@dataclass
class SenseProfile:
    sense: SenseKey
    roles: dict[str, _Weighted]

    def draw_record(self, rng: SplitMix64, sentence_id: str) -> DependencyRecord:
        role = sorted(self.roles)[rng.below(len(self.roles))]
        lemma = self.roles[role].draw(rng)
        return DependencyRecord(sentence_id, self.sense, role, lemma, lemma, "NOUN")

    def draw_context(self, rng: SplitMix64, context_id: str, n_deps: int, surface: str) -> Context:
        roles = sorted(self.roles)
        picked = [roles[i] for i in sorted(rng.sample(range(len(roles)), min(n_deps, len(roles))))]
        deps = [(self.roles[r].draw(rng), r) for r in picked]
        words = [deps[0][0]] if deps else []
        start = len(" ".join(words)) + (1 if words else 0)
        words.append(surface)
        words.extend(d[0] for d in deps[1:])
        text = " ".join(words) + "."
        return Context(
            id=context_id,
            target=surface,
            start=start,
            end=start + len(surface),
            text=text,
            target_lemma=self.sense.lexeme_group,
            dependents=tuple(deps),
            sense=self.sense,
        )


def _profile(sense: SenseKey, tag: str, n_roles: int, vocab_size: int) -> SenseProfile:
    roles = {}
    for r in ROLES[:n_roles]:
        words = [f"{tag}_{r.lower()}{k}" for k in range(vocab_size)]
        roles[r] = _Weighted(words, _zipf_weights(vocab_size))
    return SenseProfile(sense, roles)


@dataclass
class ClosedWorld:
    records: list[DependencyRecord]
    contexts: list[Context]
    profiles: list[SenseProfile]
    threshold: int

    @property
    def senses(self) -> list[SenseKey]:
        return [p.sense for p in self.profiles]


def closed_world(
    seed: int = 0,
    n_senses: int = 10,
    records_per_sense: int = 300,
    contexts_per_sense: int = 20,
    n_roles: int = 3,
    vocab_size: int = 15,
    deps_per_context: int = 2,
) -> ClosedWorld:
    """Senses with pairwise-disjoint filler vocabularies, one lexeme group each.

    Every lexeme group also gets a rare second meaning (a tenth of the
    records) so that groups are polysemous, but only the main meanings pass
    the returned threshold. Contexts are drawn independently of the records
    from the main meanings' filler distributions.
    """
    rng = SplitMix64(seed)
    profiles, rare = [], []
    for i in range(n_senses):
        group = f"verb{i:02d}"
        profiles.append(_profile(SenseKey(group, f"MAIN_{i:02d}"), f"m{i:02d}", n_roles, vocab_size))
        rare.append(_profile(SenseKey(group, f"RARE_{i:02d}"), f"r{i:02d}", n_roles, vocab_size))
    records = []
    n_rare = max(1, records_per_sense // 10)
    for p, q in zip(profiles, rare):
        for j in range(records_per_sense):
            records.append(p.draw_record(rng, f"{p.sense.lexeme_group}.{j}"))
        for j in range(n_rare):
            records.append(q.draw_record(rng, f"{q.sense.lexeme_group}.r{j}"))
    held_out = rng.fork()
    contexts = []
    for i, p in enumerate(profiles):
        for j in range(contexts_per_sense):
            contexts.append(p.draw_context(held_out, f"ctx.{i:02d}.{j:03d}", deps_per_context, f"{p.sense.lexeme_group}ed"))
    return ClosedWorld(records, contexts, profiles, threshold=n_rare + 1)


def sense_pool(senses, per_sense: int, seed: int = 0) -> dict[SenseKey, list[Context]]:
    """A context pool with ``per_sense`` simple contexts for each sense."""
    rng = SplitMix64(seed)
    pool = {}
    for i, sense in enumerate(senses):
        prof = _profile(sense, f"p{i}", 2, 5)
        pool[sense] = [
            prof.draw_context(rng, f"pool.{i}.{j}", 1, sense.lexeme_group + "ed") for j in range(per_sense)
        ]
    return pool
