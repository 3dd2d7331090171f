"""Seeded Monte Carlo of pre-selection, intermediate measurement, post-selection."""
from .kernel import BACKEND
from .engine import (
    Comparison,
    EnsembleStats,
    ancilla_embedding,
    branches,
    exact_conditional,
    Projective,
    RankOne,
    Scenario,
    Subspace,
    UnitaryDevice,
    outcome_label,
    prepare_and_compare,
    run,
    run_device,
    run_projective,
    shimony_unitary,
    SHIMONY_SYSTEM,
)
from .rng import RngPolicy

__all__ = [
    "BACKEND",
    "Comparison",
    "EnsembleStats",
    "ancilla_embedding",
    "branches",
    "exact_conditional",
    "Projective",
    "RankOne",
    "RngPolicy",
    "Scenario",
    "Subspace",
    "UnitaryDevice",
    "SHIMONY_SYSTEM",
    "outcome_label",
    "prepare_and_compare",
    "run",
    "run_device",
    "run_projective",
    "shimony_unitary",
]
