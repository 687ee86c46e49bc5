"""Serve the built-in co-occurrence model, trained from a corpus file, as a plugin.

Usage: ``python -m semsketch.plugins.cooc --corpus records.tsv``
"""

from __future__ import annotations

import argparse
import sys

from semsketch.corpus import ingest_corpus
from semsketch.fill import train_cooccurrence
from semsketch.plugins import serve
from semsketch.sketches import BuildConfig, filter_records


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", required=True)
    args = parser.parse_args(argv)
    records = filter_records(ingest_corpus(args.corpus), BuildConfig())
    return serve(train_cooccurrence(records))


if __name__ == "__main__":
    sys.exit(main())
