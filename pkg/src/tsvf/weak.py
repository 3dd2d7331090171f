"""Weak values for pre/post-selected, generalized and partially post-selected systems."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NotAProjector, OrthogonalSelection
from .hilbert import Ket, Operator
from .tsv import Description, Generalized, GeneralizedTSV, PreOnly, PrePost, TwoStateVector

ORTHOGONAL_TOL = 1e-14


@dataclass(frozen=True)
class WeakValue:
    value: complex
    condition: float  # |denominator|; small means numerically fragile

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def __complex__(self):
        return self.value


def _hermitian(C: Operator, space) -> Operator:
    if not C.space.compatible(space):
        raise DimensionMismatch("observable and states live in different spaces")
    if not C.is_hermitian():
        raise NonHermitian("weak values are defined for Hermitian observables")
    return C


def _ratio(num: complex, den: complex) -> WeakValue:
    if abs(den) < ORTHOGONAL_TOL:
        raise OrthogonalSelection("pre- and post-selected states are orthogonal")
    return WeakValue(complex(num / den), float(abs(den)))


def weak_value(t: TwoStateVector, C: Operator) -> WeakValue:
    """``<Phi|C|Psi> / <Phi|Psi>``."""
    _hermitian(C, t.space)
    b, k = t.bra.amplitudes, t.ket.amplitudes
    return _ratio(b @ (C.matrix @ k), b @ k)


def weak_value_generalized(g: GeneralizedTSV, C: Operator) -> WeakValue:
    _hermitian(C, g.space)
    num = den = 0j
    for t in g.terms:
        num += t.coeff * (t.bra.amplitudes @ (C.matrix @ t.ket.amplitudes))
        den += t.coeff * (t.bra.amplitudes @ t.ket.amplitudes)
    return _ratio(num, den)


def weak_value_degenerate(pre: Ket, post_proj: Operator, C: Operator) -> WeakValue:
    """``<Psi|P C|Psi> / <Psi|P|Psi>`` for a projective post-selection ``P``."""
    _hermitian(C, pre.space)
    if not post_proj.space.compatible(pre.space):
        raise DimensionMismatch("projector and state live in different spaces")
    if not post_proj.is_projector():
        raise NotAProjector("post-selection operator must be Hermitian and idempotent")
    psi = pre.amplitudes
    num = np.vdot(psi, post_proj.matrix @ (C.matrix @ psi))
    den = np.vdot(psi, post_proj.matrix @ psi)
    return _ratio(num, den)


def weak_value_of(d: Description, C: Operator) -> WeakValue:
    if isinstance(d, PreOnly):
        return weak_value_degenerate(d.ket, d.ket.space.identity(), C)
    if isinstance(d, PrePost):
        return weak_value(d.tsv, C)
    if isinstance(d, Generalized):
        return weak_value_generalized(d.g, C)
    raise TypeError(f"unknown description {type(d).__name__}")
