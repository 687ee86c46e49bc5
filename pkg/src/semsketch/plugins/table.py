"""Loopback plugin answering ``fill`` from a static JSON table.

Usage: ``python -m semsketch.plugins.table --table t.json [--embed chars|constant]``

The table maps each template string to a list of ``{"lemma", "score"}``
candidates. Unknown templates get an empty list.
"""

from __future__ import annotations

import argparse
import json
import sys

from semsketch.fill import CharCountEmbedder, ConstantEmbedder, TableFillModel
from semsketch.plugins import serve


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--table", help="JSON template table")
    parser.add_argument("--embed", choices=["chars", "constant"])
    parser.add_argument("--dim", type=int, default=512)
    args = parser.parse_args(argv)
    model = None
    if args.table:
        with open(args.table, encoding="utf-8") as fh:
            model = TableFillModel.from_json(json.load(fh))
    embedder = None
    if args.embed == "chars":
        embedder = CharCountEmbedder(args.dim)
    elif args.embed == "constant":
        embedder = ConstantEmbedder(args.dim)
    if model is None and embedder is None:
        parser.error("nothing to serve: give --table and/or --embed")
    return serve(model, embedder)


if __name__ == "__main__":
    sys.exit(main())
