"""Outcome probabilities of ideal measurements on pre/post-selected systems.

All evaluators return an :class:`OutcomeDistribution` with one entry per
spectral projector of the measured observable; degenerate eigenvalues are
always handled per projector, never per eigenvector.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotAProjector, NullEvent
from .hilbert import (
    Ket,
    Operator,
    SpectralDecomposition,
    eigendecompose,
)
from .tsv import (
    Description,
    Generalized,
    GeneralizedTSV,
    PreOnly,
    PrePost,
    TwoStateVector,
)

NULL_EVENT_TOL = 1e-14
CERTAINTY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    observable: SpectralDecomposition
    probabilities: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.observable.eigenvalues

    @property
    def entries(self) -> list[tuple[float, float]]:
        return [(float(c), float(p))
                for c, p in zip(self.eigenvalues, self.probabilities)]

    def prob(self, value: float) -> float:
        return float(self.probabilities[self.observable.index_of(value)])

    def __repr__(self):
        body = ", ".join(f"{c:g}: {p:.6g}" for c, p in self.entries)
        return f"OutcomeDistribution({{{body}}})"


def spectral(C) -> SpectralDecomposition:
    """Accept either an operator or an existing spectral decomposition."""
    if isinstance(C, SpectralDecomposition):
        return C
    if isinstance(C, Operator):
        return eigendecompose(C)
    raise TypeError(f"expected Operator or SpectralDecomposition, got {type(C).__name__}")


def _check(space_a, space_b):
    if not space_a.compatible(space_b):
        raise DimensionMismatch(
            f"dimension {space_a.dimension} does not match {space_b.dimension}")


def _from_weights(C: SpectralDecomposition, weights) -> OutcomeDistribution:
    weights = np.asarray(weights, dtype=float)
    total = float(weights.sum())
    if total < NULL_EVENT_TOL:
        raise NullEvent("post-selection is impossible when this observable "
                        "is measured (every outcome branch is blocked)")
    return OutcomeDistribution(C, weights / total)


def abl_probability(t: TwoStateVector, C) -> OutcomeDistribution:
    """``Prob(c_n) ∝ |<Phi|P_n|Psi>|^2``."""
    C = spectral(C)
    _check(t.space, C.space)
    b, k = t.bra.amplitudes, t.ket.amplitudes
    amps = [b @ (p.matrix @ k) for p in C.projectors]
    return _from_weights(C, np.abs(amps) ** 2)


def abl_generalized(g: GeneralizedTSV, C) -> OutcomeDistribution:
    """``Prob(c_n) ∝ |sum_i alpha_i <Phi_i|P_n|Psi_i>|^2``."""
    C = spectral(C)
    _check(g.space, C.space)
    amps = []
    for p in C.projectors:
        amps.append(sum(t.coeff * (t.bra.amplitudes @ (p.matrix @ t.ket.amplitudes))
                        for t in g.terms))
    return _from_weights(C, np.abs(amps) ** 2)


def abl_degenerate(pre: Ket, post_proj: Operator, C) -> OutcomeDistribution:
    """ABL rule when the post-selection is a projection onto a subspace.

    ``Prob(c_n) ∝ ||P_post P_n |Psi>||^2``; with ``P_post = I`` this is the
    Born rule and with a rank-one projector it is :func:`abl_probability`.
    """
    C = spectral(C)
    _check(pre.space, C.space)
    _check(pre.space, post_proj.space)
    if not post_proj.is_projector():
        raise NotAProjector("post-selection operator must be Hermitian and idempotent")
    weights = []
    for p in C.projectors:
        v = post_proj.matrix @ (p.matrix @ pre.amplitudes)
        weights.append(np.vdot(v, v).real)
    return _from_weights(C, weights)


def born_probability(pre: Ket, C) -> OutcomeDistribution:
    C = spectral(C)
    _check(pre.space, C.space)
    weights = []
    for p in C.projectors:
        v = p.matrix @ pre.amplitudes
        weights.append(np.vdot(v, v).real)
    # completeness makes the sum 1 up to round-off; renormalize anyway
    return _from_weights(C, weights)


def distribution(d: Description, C) -> OutcomeDistribution:
    """Dispatch to the evaluator matching the description kind."""
    if isinstance(d, PreOnly):
        return born_probability(d.ket, C)
    if isinstance(d, PrePost):
        return abl_probability(d.tsv, C)
    if isinstance(d, Generalized):
        return abl_generalized(d.g, C)
    raise TypeError(f"unknown description {type(d).__name__}")


def element_of_reality(d: Description, C, tol: float = CERTAINTY_TOL):
    """Eigenvalue predicted with certainty by the description, else ``None``."""
    dist = distribution(d, C)
    i = int(np.argmax(dist.probabilities))
    if dist.probabilities[i] >= 1.0 - tol:
        return float(dist.eigenvalues[i])
    return None


@dataclass(frozen=True)
class TotalProbabilityCheck:
    lhs: OutcomeDistribution
    rhs: OutcomeDistribution
    max_abs_gap: float

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.max_abs_gap))


def total_probability_check(pre: Ket, C, final) -> TotalProbabilityCheck:
    """Recover the Born distribution of ``C`` from ABL conditionals.

    The final-measurement branch weights are computed assuming ``C`` was
    measured first: ``Prob(f) = sum_n ||P_f P_n Psi||^2``. Branches with
    zero weight contribute nothing.
    """
    C = spectral(C)
    final = spectral(final)
    _check(pre.space, final.space)
    lhs = born_probability(pre, C)
    rhs = np.zeros(len(C))
    for pf in final.projectors:
        weight = 0.0
        for pn in C.projectors:
            v = pf.matrix @ (pn.matrix @ pre.amplitudes)
            weight += np.vdot(v, v).real
        if weight < NULL_EVENT_TOL:
            continue
        rhs += weight * abl_degenerate(pre, pf, C).probabilities
    rhs_dist = OutcomeDistribution(C, rhs)
    gap = float(np.max(np.abs(lhs.probabilities - rhs)))
    return TotalProbabilityCheck(lhs, rhs_dist, gap)
