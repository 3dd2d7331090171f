"""Two-state vectors, their generalized superpositions, and time reversal."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatch, UnsupportedDescription, ValidationError
from .hilbert import Bra, HilbertSpace, Ket, inner

ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class TwoStateVector:
    """``<bra| |ket>``: post-selected bra, pre-selected ket."""

    bra: Bra
    ket: Ket

    def __post_init__(self):
        if not self.bra.space.compatible(self.ket.space):
            raise DimensionMismatch("bra and ket must share a space")

    @property
    def space(self) -> HilbertSpace:
        return self.ket.space

    @property
    def overlap(self) -> complex:
        return inner(self.bra, self.ket)


@dataclass(frozen=True)
class Term:
    coeff: complex
    bra: Bra
    ket: Ket


def _check_orthonormal(vectors: Sequence[np.ndarray], what: str):
    mat = np.column_stack(vectors)
    gram = mat.conj().T @ mat
    if np.max(np.abs(gram - np.eye(len(vectors)))) > ORTHONORMAL_TOL:
        raise ValidationError(f"the {what} states of a generalized "
                              "two-state vector must be orthonormal")


@dataclass(frozen=True)
class GeneralizedTSV:
    """Coherent sum ``sum_i alpha_i <bra_i| |ket_i>``.

    The bras and the kets must each form an orthonormal family, which is
    what an ancilla-assisted preparation with orthonormal ancilla states
    produces. The coefficient vector itself need not be normalized.
    """

    terms: tuple[Term, ...]

    def __post_init__(self):
        terms = tuple(t if isinstance(t, Term) else Term(*t) for t in self.terms)
        if not terms:
            raise ValidationError("a generalized two-state vector needs a term")
        terms = tuple(Term(complex(t.coeff), t.bra, t.ket) for t in terms)
        object.__setattr__(self, "terms", terms)
        space = terms[0].ket.space
        for t in terms:
            if not (t.bra.space.compatible(space) and t.ket.space.compatible(space)):
                raise DimensionMismatch("all terms must share one space")
            if not np.isfinite(t.coeff):
                raise ValidationError("coefficients must be finite")
        if all(t.coeff == 0 for t in terms):
            raise ValidationError("at least one coefficient must be nonzero")
        _check_orthonormal([t.bra.amplitudes.conj() for t in terms], "post-selected")
        _check_orthonormal([t.ket.amplitudes for t in terms], "pre-selected")

    @classmethod
    def single(cls, tsv: TwoStateVector, coeff: complex = 1.0) -> "GeneralizedTSV":
        return cls((Term(coeff, tsv.bra, tsv.ket),))

    @property
    def space(self) -> HilbertSpace:
        return self.terms[0].ket.space

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms])

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class PreOnly:
    ket: Ket


@dataclass(frozen=True)
class PrePost:
    tsv: TwoStateVector


@dataclass(frozen=True)
class Generalized:
    g: GeneralizedTSV


Description = Union[PreOnly, PrePost, Generalized]


def _swap(b: Bra, k: Ket) -> tuple[Bra, Ket]:
    space = k.space
    return Bra(space, k.amplitudes.conj()), Ket(b.space, b.amplitudes.conj())


def reverse(t: TwoStateVector) -> TwoStateVector:
    """Time reversal ``<Phi| |Psi>  ->  <Psi| |Phi>``."""
    b, k = _swap(t.bra, t.ket)
    return TwoStateVector(b, k)


def reverse_generalized(g: GeneralizedTSV) -> GeneralizedTSV:
    """Time reversal of a generalized two-state vector.

    Each term's states are swapped as in :func:`reverse` and its
    coefficient is complex-conjugated.
    """
    terms = []
    for t in g.terms:
        b, k = _swap(t.bra, t.ket)
        terms.append(Term(np.conj(t.coeff), b, k))
    return GeneralizedTSV(tuple(terms))


def as_generalized(d: Description) -> GeneralizedTSV:
    if isinstance(d, Generalized):
        return d.g
    if isinstance(d, PrePost):
        return GeneralizedTSV.single(d.tsv)
    if isinstance(d, PreOnly):
        raise UnsupportedDescription(
            "a pre-selected-only state has no generalized two-state form; "
            "use the Born-rule evaluators")
    raise UnsupportedDescription(f"unknown description {type(d).__name__}")
