"""Semantic sketches: build, anonymize, assemble matching datasets, match and score."""

__version__ = "0.1.0"

from semsketch.corpus import Context, DependencyRecord, SenseKey, ingest_contexts, ingest_corpus
from semsketch.evaluate import ScoreReport, accuracy
from semsketch.kernels import BACKEND
from semsketch.sketches import BuildConfig, Filler, RoleSection, Sketch, anonymize, build_all, build_sketch

__all__ = [
    "BACKEND",
    "BuildConfig",
    "Context",
    "DependencyRecord",
    "Filler",
    "RoleSection",
    "ScoreReport",
    "SenseKey",
    "Sketch",
    "accuracy",
    "anonymize",
    "build_all",
    "build_sketch",
    "ingest_contexts",
    "ingest_corpus",
]
