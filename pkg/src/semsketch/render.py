"""Standalone HTML tables for sketches: one column per role, fillers ranked below."""

from __future__ import annotations

import os
import re
from html import escape
from itertools import zip_longest
from pathlib import Path

from semsketch.sketches import Sketch

_STYLE = """\
body { font-family: sans-serif; margin: 2em; }
h1 { font-size: 1.3em; }
table.sketch { border-collapse: collapse; }
table.sketch th, table.sketch td { border: 1px solid #999; padding: 0.25em 0.6em; vertical-align: top; }
table.sketch th { background: #dde6f0; }
td .count { color: #666; float: right; padding-left: 1em; }
"""

ANONYMOUS_TITLE = "(anonymous)"


def sketch_title(sketch: Sketch) -> str:
    return ANONYMOUS_TITLE if sketch.sense is None else str(sketch.sense)


def sketch_html(sketch: Sketch) -> str:
    title = escape(sketch_title(sketch))
    head = "".join(
        f'<th scope="col">{escape(s.role)} <span class="total">({s.total_count})</span></th>' for s in sketch.sections
    )
    rows = []
    for cells in zip_longest(*(s.fillers for s in sketch.sections)):
        tds = "".join(
            "<td></td>" if f is None else f'<td>{escape(f.lemma)}<span class="count">{f.count}</span></td>'
            for f in cells
        )
        rows.append(f"<tr>{tds}</tr>")
    body = "\n".join(rows)
    subtitle = "" if sketch.sense is not None else f'<p class="sketch-id">{escape(sketch.id)}</p>\n'
    return (
        "<!DOCTYPE html>\n"
        '<html lang="ru">\n<head>\n<meta charset="utf-8">\n'
        f"<title>{title}</title>\n<style>\n{_STYLE}</style>\n</head>\n<body>\n"
        f"<h1>{title}</h1>\n{subtitle}"
        f'<table class="sketch">\n<thead><tr>{head}</tr></thead>\n<tbody>\n{body}\n</tbody>\n</table>\n'
        "</body>\n</html>\n"
    )


def render_sketch(sketch: Sketch, out: str | os.PathLike) -> None:
    Path(out).write_text(sketch_html(sketch), encoding="utf-8", newline="\n")


def html_filename(sketch: Sketch) -> str:
    return re.sub(r"[^\w.-]", "_", sketch.id) + ".html"
