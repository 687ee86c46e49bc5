from __future__ import annotations

import sys
from pathlib import Path

import pytest

from semsketch.corpus import DependencyRecord, SenseKey

DATA = Path(__file__).parent / "data"


def rec(group, cls, role, lemma, flags=(), sid="s"):
    return DependencyRecord(sid, SenseKey(group, cls), role, lemma, lemma, "NOUN", frozenset(flags))


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def python() -> str:
    return sys.executable
