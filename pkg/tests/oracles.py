"""Brute-force reference computations, written without the library's code paths."""

from __future__ import annotations

import math


def brute_force_sketches(records, threshold, min_meanings, max_roles, max_fillers, excluded):
    """Plain-loop group-by over (sense, role, filler lemma).

    Returns {(lexeme_group, semantic_class): [(role, total, [(lemma, count), ...]), ...]}.
    """
    kept = []
    for r in records:
        drop = False
        for flag in r.flags:
            if flag in excluded:
                drop = True
        if not drop:
            kept.append(r)

    tallies = {}
    for r in kept:
        key = (r.sense.lexeme_group, r.sense.semantic_class)
        roles = tallies.setdefault(key, {})
        lemmas = roles.setdefault(r.role, {})
        lemmas[r.filler_lemma] = lemmas.get(r.filler_lemma, 0) + 1

    classes = {}
    for group, cls in tallies:
        classes.setdefault(group, []).append(cls)

    out = {}
    for key, roles in tallies.items():
        n = 0
        for lemmas in roles.values():
            for c in lemmas.values():
                n += c
        if n < threshold or len(classes[key[0]]) < min_meanings:
            continue
        sections = []
        for role, lemmas in roles.items():
            total = 0
            for c in lemmas.values():
                total += c
            items = list(lemmas.items())
            # insertion sort: count desc, lemma asc
            for i in range(1, len(items)):
                j = i
                while j > 0 and (-items[j][1], items[j][0]) < (-items[j - 1][1], items[j - 1][0]):
                    items[j], items[j - 1] = items[j - 1], items[j]
                    j -= 1
            sections.append((role, total, items[:max_fillers]))
        sections.sort(key=lambda s: (-s[1], s[0]))
        out[key] = sections[:max_roles]
    return out


def cosine_dict(a: dict, b: dict) -> float:
    dot = sum(v * b.get(k, 0.0) for k, v in a.items())
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    return 0.0 if na == 0 or nb == 0 else dot / (na * nb)


def char_bag(text: str, dim: int = 512) -> dict:
    bag = {}
    for ch in text:
        bag[ord(ch) % dim] = bag.get(ord(ch) % dim, 0.0) + 1.0
    return bag
