"""Plugin-side helpers: serve a fill model and/or embedder over stdin/stdout."""

from __future__ import annotations

import json
import sys
from typing import IO

from semsketch.fill import EMBED, FILL, ClozeQuery


def serve(model=None, embedder=None, stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    caps = []
    if model is not None:
        caps.append(FILL)
    if embedder is not None:
        caps.append(EMBED)
    for raw in stdin:
        raw = raw.strip()
        if not raw:
            continue
        try:
            req = json.loads(raw)
            op = req.get("op")
            if op == "hello":
                out = {"capabilities": caps}
            elif op == FILL and model is not None:
                cands = model.fill(ClozeQuery(req["template"], int(req.get("top_n", 1000))))
                out = {"candidates": [{"lemma": c.lemma, "score": c.score} for c in cands]}
            elif op == EMBED and embedder is not None:
                out = {"vector": list(embedder.embed(req["text"]))}
            else:
                out = {"error": f"unsupported op {op!r}"}
        except Exception as exc:  # reported to the client, never fatal
            out = {"error": f"{exc.__class__.__name__}: {exc}"}
        stdout.write(json.dumps(out, ensure_ascii=False) + "\n")
        stdout.flush()
    return 0
